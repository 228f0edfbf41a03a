"""Self-similar profiles, the comparison supersolution and closed-form tests.

Three profile shapes cover the diffusion regimes:

    slow      f(xi) = (a - b*xi^gamma1)_+^gamma2   (compact support)
    critical  f(xi) = exp(-b*xi^gamma1)
    fast      g(xi) = A*(a + xi^gamma1)^gamma2     (gamma2 < 0, positive tail)

The supersolution z(t, r) = vbar(t) * f(xi(t, r)) bounds solutions from
above whenever the sign condition on the profile residual holds; the
closed-form bracket below is exactly that sign condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeMismatchError
from .params import (DerivedConstants, rescaled_time, similarity_coord,
                     space_map, vbar)


@dataclass(frozen=True)
class Profile:
    kind: str                   # zkb | exponential | fast
    a: float
    derived: DerivedConstants


def make_profile(derived, a=None, kind=None):
    """Profile of the regime's kind (or an explicit kind) with amplitude a."""
    if a is None:
        a = derived.raw.a
    if kind is None:
        dexc = derived.diff_excess
        kind = "zkb" if dexc > 0 else ("exponential" if dexc == 0 else "fast")
    if a <= 0:
        raise DomainError(f"profile amplitude must be positive (a={a:g})")
    return Profile(kind, float(a), derived)


def profile_value(profile, xi):
    """Evaluate the profile at xi >= 0 (scalar or array)."""
    d = profile.derived
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise DomainError("xi must be nonnegative")
    if profile.kind == "zkb":
        if not (d.diff_excess > 0 and d.gamma2 > 0):
            raise RegimeMismatchError(
                "zkb profile needs slow diffusion (gamma2 > 0), "
                f"got gamma2={d.gamma2:g}")
        core = np.maximum(profile.a - d.b * xi ** d.gamma1, 0.0)
        out = core ** d.gamma2
    elif profile.kind == "exponential":
        if d.diff_excess != 0:
            raise RegimeMismatchError(
                "exponential profile is reserved for critical diffusion")
        out = np.exp(-d.b * xi ** d.gamma1)
    elif profile.kind == "fast":
        if not (d.diff_excess < 0 and d.gamma2 < 0):
            raise RegimeMismatchError(
                "fast profile needs fast diffusion (gamma2 < 0), "
                f"got gamma2={d.gamma2:g}")
        d.require("A")
        out = d.A * (profile.a + xi ** d.gamma1) ** d.gamma2
    else:
        raise ValueError(f"unknown profile kind {profile.kind!r}")
    return out if out.ndim else float(out)


def front_coordinate(derived, a):
    """Front coordinate xi_b of the compactly supported profile (inf if none)."""
    if derived.diff_excess > 0 and derived.b > 0:
        return (a / derived.b) ** (1.0 / derived.gamma1)
    return math.inf


def supersolution_z(derived, a, t, r):
    """Comparison function z(t, r) = vbar(t) * f(xi(t, r)) in v-variables."""
    prof = make_profile(derived, a)
    xi = similarity_coord(derived, t, r)
    return vbar(derived, t) * profile_value(prof, xi)


def u_from_v(value, q):
    """Map a v-variable value back to u = v^(1/(1-q))."""
    out = np.asarray(value, dtype=float) ** (1.0 / (1.0 - q))
    return out if out.ndim else float(out)


def closed_form_residual_bracket(derived, a, xi):
    """Sign bracket of the slow-diffusion profile residual.

    Returns 1/l7 - s/p + (a - b*xi^gamma1)_+^(gamma2*(beta2-1)) / l7,
    the factor multiplying xi^(s-1)*f(xi) in the closed-form residual of
    the compact profile.  Nonpositivity at every xi is the supersolution
    property.
    """
    derived.require("s", "l7", "b")
    xi = np.asarray(xi, dtype=float)
    core = np.maximum(a - derived.b * xi ** derived.gamma1, 0.0)
    expo = derived.gamma2 * (derived.beta2 - 1.0)
    with np.errstate(divide="ignore"):
        clamp = core ** expo
    out = 1.0 / derived.l7 - derived.s / derived.raw.p + clamp / derived.l7
    return out if out.ndim else float(out)


def closed_form_residual(derived, a, xi):
    """Full closed-form residual xi^(s-1) * f(xi) * bracket for slow diffusion."""
    xi = np.asarray(xi, dtype=float)
    prof = make_profile(derived, a, kind="zkb")
    out = xi ** (derived.s - 1.0) * profile_value(prof, xi) \
        * closed_form_residual_bracket(derived, a, xi)
    return out if np.ndim(out) else float(out)


def global_solvability_condition(derived, a):
    """True iff small data admit the global comparison bound for this a.

    Requires slow diffusion with gamma2 > 0, a positive reaction constant
    l7 and s/p >= (a^(gamma2*(beta2-1)) + 1) / l7.
    """
    if not (derived.diff_excess > 0 and derived.gamma2 > 0):
        return False
    derived.require("s", "l7")
    if derived.l7 <= 0:
        return False
    lhs = derived.s / derived.raw.p
    rhs = (a ** (derived.gamma2 * (derived.beta2 - 1.0)) + 1.0) / derived.l7
    return bool(lhs >= rhs)


def solvability_amplitude_threshold(derived):
    """Largest a for which the global solvability condition holds, or None."""
    if not (derived.diff_excess > 0 and derived.gamma2 > 0):
        return None
    derived.require("s", "l7")
    if derived.l7 <= 0:
        return None
    margin = derived.s * derived.l7 / derived.raw.p - 1.0
    if margin <= 0:
        return None
    expo = derived.gamma2 * (derived.beta2 - 1.0)
    if expo <= 0:
        return None
    return margin ** (1.0 / expo)


def front_radius_theory(derived, a, tau):
    """Radius of the comparison domain at rescaled time tau.

    r(tau) = ((a/b)^(p-1) * ((p-n-n1)/p)^p * tau)^(1/(p-n-n1)); this is
    the r-preimage of the profile front phi = xi_b * tau^(1/p).
    """
    pp = derived.raw
    derived.require("b")
    if tau <= 0:
        raise DomainError(f"tau must be positive (tau={tau:g})")
    if not (derived.diff_excess > 0 and derived.gamma2 > 0 and derived.b > 0):
        raise RegimeMismatchError("front radius needs slow diffusion with b > 0")
    base = (a / derived.b) ** (pp.p - 1.0) \
        * ((pp.p - pp.n - pp.n1) / pp.p) ** pp.p * tau
    return base ** (1.0 / (pp.p - pp.n - pp.n1))


def absorption_asymptote(derived, T, t, r):
    """Late-time closed form for the critical absorption regime.

    Evaluates ((T+t)*ln(T+t))^(-1/(beta_c - 1)) * exp(-r^2/t) with beta_c
    the critical source exponent in u-variables.
    """
    derived.require("beta_crit_u")
    beta_c = derived.beta_crit_u
    if beta_c <= 1.0:
        raise DomainError(f"asymptote needs beta_c > 1 (beta_c={beta_c:g})")
    if t <= 0:
        raise DomainError(f"t must be positive (t={t:g})")
    if T + t <= 1.0:
        raise DomainError(f"T + t must exceed 1 (T+t={T + t:g})")
    r = np.asarray(r, dtype=float)
    out = ((T + t) * math.log(T + t)) ** (-1.0 / (beta_c - 1.0)) * np.exp(-r ** 2 / t)
    return out if out.ndim else float(out)
