"""Radially symmetric implicit finite-difference solver.

The v-form equation

    r^(-n) v_t = r^(1-N) d/dr( r^(n1+N-1) D(v, v_r) v_r ) + eps*(1-q) t^l v^beta2,
    D = v^(m2-1) |d(v^k2)/dr|^(p-2)

is integrated on a uniform radial grid by implicit Euler with the
nonlinear coefficients frozen at the previous iterate (simple iteration)
and one tridiagonal elimination per iterate.  The discretization is a
finite-volume balance against the cell measure r^(N-1-n) dr, which
cancels the singular r^(-n) weight analytically, closes r = 0 with a
zero flux (symmetry), and keeps dead zones at exactly zero flux.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import SolverError
from .params import derive, rescaled_time, similarity_coord, vbar
from .profiles import front_radius_theory, make_profile, profile_value

V_FLOOR = 1e-14     # degeneracy floor for negative-exponent midpoint values


@dataclass(frozen=True)
class Grid:
    """Uniform radial grid r_i = i*h, i = 0..M, h = R/M."""

    M: int
    R: float

    def __post_init__(self):
        if self.M < 16:
            raise ValueError(f"need at least 16 cells (M={self.M})")
        if self.R <= 0:
            raise ValueError(f"outer radius must be positive (R={self.R:g})")

    @property
    def h(self):
        return self.R / self.M

    @property
    def r(self):
        return np.linspace(0.0, self.R, self.M + 1)

    @property
    def r_mid(self):
        h = self.h
        return (np.arange(self.M) + 0.5) * h


@dataclass
class GridState:
    """Time level plus nodal values of v and the tracked support edge."""

    t: float
    v: np.ndarray
    front_index: int

    def max(self):
        return float(np.max(self.v)) if self.v.size else 0.0


@dataclass(frozen=True)
class SolverConfig:
    t_end: float
    dt: float = 1e-3
    M: int = 400
    R: float | None = None          # None: pick from the predicted front
    picard_tol: float = 1e-6
    picard_max: int = 25
    support_threshold: float = 1e-10
    blowup_cap: float = 1e8
    snapshot_times: tuple = ()      # empty: 5 levels evenly over the run
    source: bool = True             # False drops the reaction term
    relax: float = 1.0              # < 1 under-relaxes the frozen iterate

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.picard_tol <= 0:
            raise ValueError("picard_tol must be positive")
        if self.picard_max < 1:
            raise ValueError("picard_max must be at least 1")


@dataclass
class SolveReport:
    snapshots: list
    iterations_per_step: list
    front_history: list             # (t, tau, r_front) triples
    termination: str                # completed | blowup | picard_failure
    t_termination: float
    grid: Grid
    clamped_mass_fraction: float = 0.0
    front_warning: bool = False
    retried_steps: int = 0


def front_index_of(v, threshold):
    """Largest node index with v above threshold * max(v); 0 if none."""
    peak = float(np.max(v)) if v.size else 0.0
    if peak <= 0.0:
        return 0
    above = np.nonzero(v > threshold * peak)[0]
    return int(above[-1]) if above.size else 0


def cell_volumes(grid, params):
    """Exact cell measures of r^(N-1-n) dr on [max(0, r_i - h/2), r_i + h/2]."""
    e = params.N - params.n
    h = grid.h
    r = grid.r
    left = np.maximum(r - 0.5 * h, 0.0)
    right = np.minimum(r + 0.5 * h, grid.R)
    return (right ** e - left ** e) / e


def flux_coefficients(params, r_mid, v):
    """Midpoint diffusivities D_(i+1/2), vectorized over all interfaces.

    D = r^(n1+N-1) * vm^(m2-1) * (k2*vm^(k2-1))^(p-2) * |dv/dr|^(p-2) with
    vm the arithmetic midpoint value of the frozen iterate.  Midpoint
    values are floored at 1e-14 before negative-exponent powers; an
    interface between two empty cells transmits nothing.
    """
    q, p = params.q, params.p
    m2 = params.m / (1.0 - q)
    k2 = params.k / (1.0 - q)
    h = r_mid[1] - r_mid[0] if r_mid.size > 1 else 1.0
    vm = 0.5 * (v[1:] + v[:-1])
    dv = np.abs(v[1:] - v[:-1]) / h
    expo = (m2 - 1.0) + (k2 - 1.0) * (p - 2.0)
    vm_f = np.maximum(vm, V_FLOOR)
    with np.errstate(divide="ignore"):
        D = (r_mid ** (params.n1 + params.N - 1.0)
             * k2 ** (p - 2.0) * vm_f ** expo * dv ** (p - 2.0))
    dead = (v[1:] <= 0.0) & (v[:-1] <= 0.0)
    D[dead] = 0.0
    return D


def flux_coefficient(params, grid, v, i_half):
    """Single midpoint diffusivity D_(i_half + 1/2)."""
    return float(flux_coefficients(params, grid.r_mid, np.asarray(v, float))[i_half])


def assemble_system(grid, params, frozen, v_old, dt, t_new, source_on=True):
    """Implicit-Euler tridiagonal system with coefficients from `frozen`.

    The reaction term is linearized as v^beta2 = frozen^(beta2-1) * v; for
    absorption it sits on the diagonal (adds dominance), for a source it
    is evaluated at the frozen iterate on the right-hand side, keeping the
    matrix an M-matrix either way.  Row M enforces the outer Dirichlet 0.
    """
    M = grid.M
    h = grid.h
    vol = cell_volumes(grid, params)
    D = flux_coefficients(params, grid.r_mid, frozen)
    c = dt * D / h   # interface conductances scaled by dt

    lower = np.zeros(M + 1)
    diag = np.ones(M + 1)
    upper = np.zeros(M + 1)
    rhs = v_old.copy()

    cw = np.zeros(M + 1)      # conductance to the left neighbour
    ce = np.zeros(M + 1)      # conductance to the right neighbour
    ce[:M] = c / vol[:M]
    cw[1:M + 1] = c / vol[1:M + 1]
    # flux through r = 0 vanishes by symmetry
    cw[0] = 0.0

    diag[:M] = 1.0 + cw[:M] + ce[:M]
    lower[1:M] = -cw[1:M]
    upper[:M] = -ce[:M]

    if source_on:
        s_coef = dt * (1.0 - params.q) * t_new ** params.l
        beta2 = (params.beta - params.q) / (1.0 - params.q)
        fz = np.maximum(frozen[:M], 0.0)
        if params.epsilon == -1:
            # dead zones keep rhs = 0, so an inflated diagonal there is
            # harmless and the floor handles beta2 < 1 safely
            gain = s_coef * np.maximum(fz, V_FLOOR) ** (beta2 - 1.0)
            diag[:M] += gain
        else:
            rhs[:M] += s_coef * fz ** beta2

    # outer Dirichlet row
    lower[M] = 0.0
    diag[M] = 1.0
    upper[M] = 0.0
    rhs[M] = 0.0

    if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(rhs))):
        bad = int(np.nonzero(~(np.isfinite(diag) & np.isfinite(rhs)))[0][0])
        raise SolverError(f"non-finite system entry at node {bad}")
    return lower, diag, upper, rhs


def thomas_solve(lower, diag, upper, rhs):
    """Direct elimination for a tridiagonal system.

    Row i reads lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i]
    with lower[0] and upper[-1] ignored.
    """
    n = len(diag)
    cp = np.empty(n)
    dp = np.empty(n)
    piv = diag[0]
    if piv == 0.0:
        raise SolverError("zero pivot at row 0")
    cp[0] = upper[0] / piv
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - lower[i] * cp[i - 1]
        if piv == 0.0:
            raise SolverError(f"zero pivot at row {i}")
        cp[i] = upper[i] / piv
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / piv
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def initial_condition(derived, a, t0, grid):
    """Self-similar initial state v_i = vbar(t0) * f(xi(t0, r_i)).

    Exactly zero beyond the profile front for compact (slow-diffusion)
    profiles; the outer node is clamped to the Dirichlet value.
    """
    prof = make_profile(derived, a)
    amp = vbar(derived, t0)
    tau = rescaled_time(derived, t0)
    r = grid.r
    pp = derived.raw
    e = (pp.p - pp.n - pp.n1) / pp.p
    phi = pp.p * r ** e / (pp.p - pp.n - pp.n1)
    xi = phi * tau ** (-1.0 / pp.p)
    v = amp * profile_value(prof, xi)
    v[-1] = 0.0
    return GridState(t=t0, v=v, front_index=front_index_of(v, 1e-10))


def picard_step(grid, params, state, dt, config, source_on=None):
    """One implicit time step solved by frozen-coefficient iteration.

    Coefficients and the linearized reaction are re-frozen at the newest
    iterate until the sup-norm change drops below picard_tol; negatives
    are clamped to zero after each solve.  Returns (new state, iteration
    count, converged flag, clamped mass fraction).
    """
    if source_on is None:
        source_on = config.source
    t_new = state.t + dt
    v_old = state.v
    frozen = v_old
    v_prev = v_old
    converged = False
    clamped_frac = 0.0
    iters = 0
    v_new = v_old
    vol = None
    for iters in range(1, config.picard_max + 1):
        lower, diag, upper, rhs = assemble_system(
            grid, params, frozen, v_old, dt, t_new, source_on)
        v_new = thomas_solve(lower, diag, upper, rhs)
        negative = np.minimum(v_new, 0.0)
        if np.any(negative < 0.0):
            if vol is None:
                vol = cell_volumes(grid, params)
            v_new = np.maximum(v_new, 0.0)
            mass = float(np.dot(v_new, vol))
            if mass > 0.0:
                clamped_frac = max(clamped_frac,
                                   float(-np.dot(negative, vol)) / mass)
        if not np.all(np.isfinite(v_new)):
            v_new = np.nan_to_num(v_new, nan=config.blowup_cap,
                                  posinf=config.blowup_cap, neginf=0.0)
            break
        if float(np.max(v_new)) >= config.blowup_cap:
            break
        delta = float(np.max(np.abs(v_new - v_prev)))
        v_prev = v_new
        if config.relax >= 1.0:
            frozen = v_new
        else:
            frozen = frozen + config.relax * (v_new - frozen)
        if delta <= config.picard_tol:
            converged = True
            break
    new_state = GridState(t=t_new, v=v_new,
                          front_index=front_index_of(v_new, config.support_threshold))
    return new_state, iters, converged, clamped_frac


def suggest_outer_radius(derived, a, t0, t_end):
    """Outer radius at twice the predicted front (or decay radius)."""
    if derived.diff_excess > 0 and derived.gamma2 > 0:
        taus = [rescaled_time(derived, t0), rescaled_time(derived, t_end)]
        return 2.0 * max(front_radius_theory(derived, a, tau) for tau in taus)
    # no compact front: radius where the initial profile is negligible
    prof = make_profile(derived, a)
    tau0 = rescaled_time(derived, t0)
    peak = profile_value(prof, 0.0)
    xi = 1.0
    while profile_value(prof, xi) > 1e-10 * peak and xi < 1e6:
        xi *= 1.5
    pp = derived.raw
    phi = xi * tau0 ** (1.0 / pp.p)
    c = (pp.p - pp.n - pp.n1) / pp.p
    return 1.5 * (c * phi) ** (1.0 / c)


def run(params, config):
    """Advance the self-similar initial state from t0 to t_end.

    Records snapshots at the requested times, one front-history triple per
    accepted step and per-step iteration counts.  A step whose iteration
    fails to converge is retried with a halved step size (blow-up makes
    the implicit fixed point disappear at fixed dt); the run stops with
    reason "blowup" at the max-norm cap, or "picard_failure" once halving
    bottoms out.
    """
    derived = derive(params)
    t0 = params.t0
    R = config.R
    if R is None:
        R = suggest_outer_radius(derived, params.a, t0, config.t_end)
    grid = Grid(config.M, R)
    state = initial_condition(derived, params.a, t0, grid)

    if config.snapshot_times:
        snap_times = sorted(t for t in config.snapshot_times if t > t0)
    elif config.t_end > t0:
        snap_times = list(np.linspace(t0, config.t_end, 5)[1:])
    else:
        snap_times = []

    report = SolveReport(snapshots=[state], iterations_per_step=[],
                         front_history=[], termination="completed",
                         t_termination=t0, grid=grid)

    def log_front(st):
        try:
            tau = rescaled_time(derived, st.t)
        except Exception:
            tau = math.nan
        report.front_history.append((st.t, tau, st.front_index * grid.h))

    log_front(state)
    warn_radius = 0.8 * R
    dt_floor = config.dt * 1e-14
    dt_cur = config.dt
    t = t0
    next_snap = 0
    while t < config.t_end - 1e-12:
        dt = min(dt_cur, config.t_end - t)
        trial, iters, converged, clamped = picard_step(grid, params, state, dt, config)
        blown = trial.max() >= config.blowup_cap or not np.all(np.isfinite(trial.v))
        if not converged and not blown:
            report.retried_steps += 1
            dt_cur = 0.5 * dt
            if dt_cur < dt_floor:
                report.termination = "picard_failure"
                report.t_termination = trial.t
                report.snapshots.append(trial)
                return report
            continue
        state = trial
        t = state.t
        report.iterations_per_step.append(iters)
        report.clamped_mass_fraction = max(report.clamped_mass_fraction, clamped)
        log_front(state)
        if not report.front_warning and state.front_index * grid.h >= warn_radius:
            report.front_warning = True
            warnings.warn(f"support reached {state.front_index * grid.h:g} "
                          f">= 0.8 R (R={R:g}); outer boundary may interfere")
        if blown:
            report.termination = "blowup"
            report.t_termination = t
            report.snapshots.append(state)
            return report
        dt_cur = min(config.dt, 2.0 * dt_cur)
        while next_snap < len(snap_times) and t >= snap_times[next_snap] - 1e-12:
            report.snapshots.append(state)
            next_snap += 1
    report.t_termination = t
    return report
