"""Self-similar analysis and implicit finite-difference solution of a
doubly nonlinear degenerate reaction-diffusion equation with variable
density and a time-dependent source or absorption term."""

from .errors import (ConfigError, DegenPdeError, DomainError,
                     InvalidParamsError, RegimeMismatchError,
                     RootFindingError, SolverError, UndefinedConstantError)
from .params import (DerivedConstants, ProblemParams, Regime, classify,
                     derive, fujita_exponent, relaxation_notes,
                     rescaled_time, similarity_coord, space_map,
                     space_unmap, time_factors, validate, vbar)
from .profiles import (Profile, absorption_asymptote,
                       closed_form_residual, closed_form_residual_bracket,
                       front_coordinate, front_radius_theory,
                       global_solvability_condition, make_profile,
                       profile_value, solvability_amplitude_threshold,
                       supersolution_z, u_from_v)

__all__ = [name for name in dir() if not name.startswith("_")]
