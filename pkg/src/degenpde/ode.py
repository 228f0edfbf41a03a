"""Profile ODE tools: numeric residual, near-front and far-field systems.

The profile equation for f(xi) is

    Af = xi^(1-s) d/dxi( xi^(s-1) f^(m2-1) |d(f^k2)/dxi|^(p-2) df/dxi )
         + (xi/p) df/dxi + (f + f^beta2)/l7 = 0.

Writing f as (reference profile) * w and switching to the stretched
coordinate eta that sends the reference front to +infinity turns the
equation into a first-order system for (w, z) with z the nonlinear flux
of w.  Bounded trajectories of that system select the profiles whose
ratio to the reference tends to a constant; the constants solve small
algebraic equations (solve_w0, solve_C_fast).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (DomainError, RegimeMismatchError, RootFindingError,
                     UndefinedConstantError)
from .profiles import front_coordinate, make_profile, profile_value

FLOOR = 1e-14          # degeneracy floor for negative-exponent operands
VALUE_CAP = 1e12       # trajectory magnitude cap


@dataclass(frozen=True)
class OdeState:
    eta: float
    w: float
    z: float


@dataclass
class Trajectory:
    eta: np.ndarray
    w: np.ndarray
    z: np.ndarray
    reason: str            # completed | w_nonpositive | magnitude_cap
    sol: object = None     # dense-output interpolant

    def at(self, eta):
        y = self.sol(eta)
        return y[0], y[1]


def residual_numeric(xi, f, derived):
    """Evaluate Af on a uniform xi-grid by second-order differences.

    The flux xi^(s-1) f^(m2-1) |d(f^k2)/dxi|^(p-2) df/dxi is formed at the
    nodes from centered differences (one-sided at the endpoints) and
    differentiated the same way; drift and reaction terms are added
    pointwise.  Operands of negative exponents are floored at 1e-14 where
    f or df vanish, which keeps dead zones exactly at zero flux.
    """
    derived.require("s", "l7")
    xi = np.asarray(xi, dtype=float)
    f = np.asarray(f, dtype=float)
    if xi.ndim != 1 or xi.size < 5:
        raise ValueError("need a 1-d grid with at least 5 nodes")
    h = xi[1] - xi[0]
    if not np.allclose(np.diff(xi), h, rtol=1e-10, atol=1e-15):
        raise ValueError("grid must be uniform")
    p, m2, k2, beta2 = derived.raw.p, derived.m2, derived.k2, derived.beta2

    def ddx(y):
        d = np.empty_like(y)
        d[1:-1] = (y[2:] - y[:-2]) / (2.0 * h)
        d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
        d[-1] = (3.0 * y[-1] - 4.0 * y[-2] + y[-3]) / (2.0 * h)
        return d

    df = ddx(f)
    dg = ddx(f ** k2)
    fpos = np.maximum(f, FLOOR)
    dgmag = np.maximum(np.abs(dg), FLOOR)
    with np.errstate(divide="ignore", invalid="ignore"):
        inner = fpos ** (m2 - 1.0) * dgmag ** (p - 2.0) * df
    inner[f <= 0.0] = 0.0
    flux = xi ** (derived.s - 1.0) * inner
    dflux = ddx(flux)
    with np.errstate(divide="ignore"):
        spread = xi ** (1.0 - derived.s) * dflux
    reaction = (f + fpos ** beta2 * (f > 0.0)) / derived.l7
    return spread + (xi / p) * df + reaction


def _flux_ratio(w, z, mu, gamma1, p):
    """w^(-mu/(p-1)) |z|^(gamma1-2) z, the flux term of both systems."""
    wf = max(w, FLOOR)
    zmag = max(abs(z), FLOOR)
    return wf ** (-mu / (p - 1.0)) * zmag ** (gamma1 - 2.0) * z


def near_front_rhs(derived, a, state):
    """Right-hand side of the near-front system at the given state.

    Coordinates: eta = -ln(a - b*xi^gamma1), w the ratio of the profile to
    the compact reference, z its nonlinear flux.
    """
    derived.require("gamma2", "gamma3", "mu", "s", "l7")
    if derived.diff_excess <= 0:
        raise RegimeMismatchError("near-front system needs slow diffusion")
    pp = derived.raw
    eta, w, z = state.eta, state.w, state.z
    if w <= 0:
        raise DomainError(f"w must be positive (w={w:g})")
    expeta = math.exp(-eta)
    denom = a - expeta
    if denom <= 0:
        raise DomainError(f"eta below the coordinate pole (eta={eta:g}, a={a:g})")
    a0 = expeta / denom
    g1, g2, g3 = derived.gamma1, derived.gamma2, derived.gamma3
    a1 = (derived.s / g1) * a0 - g2
    a2 = g1 * g3 / pp.p
    a3 = (g3 / derived.l7) * a0
    a4 = a3 * math.exp(g2 * (1.0 - derived.beta2) * eta)
    lw = _flux_ratio(w, z, derived.mu, g1, pp.p)
    dw = g2 * w + lw
    dz = -a1 * z - a2 * lw - a3 * w - a4 * w ** derived.beta2
    if not (math.isfinite(dw) and math.isfinite(dz)):
        raise DomainError(f"non-finite right-hand side at eta={eta:g}")
    return dw, dz


def far_field_rhs(derived, a, state):
    """Right-hand side of the far-field system for fast diffusion.

    Coordinates: eta = ln(a + xi^gamma1), w the ratio of the profile to
    the algebraic-tail reference, z its nonlinear flux.
    """
    derived.require("gamma2", "mu", "s", "l7", "A")
    if derived.diff_excess >= 0:
        raise RegimeMismatchError("far-field system needs fast diffusion")
    pp = derived.raw
    eta, w, z = state.eta, state.w, state.z
    if w <= 0:
        raise DomainError(f"w must be positive (w={w:g})")
    denom = 1.0 - a * math.exp(-eta)
    if denom <= 0:
        raise DomainError(f"eta at or below the coordinate pole (eta={eta:g}, a={a:g})")
    b0 = 1.0 / denom
    g1, g2, A = derived.gamma1, derived.gamma2, derived.A
    amp = A ** ((1.0 - pp.p) / g2)
    b1 = (derived.s / g1) * b0 + g2
    b2 = g1 ** (1.0 - pp.p) * amp / pp.p
    b3 = (g1 ** (-pp.p) * amp / derived.l7) * b0
    b4 = (g1 ** (-pp.p) * A ** (derived.beta2 - derived.m2 - derived.k2 * (pp.p - 2.0))
          * b0 / derived.l7) * math.exp(g2 * (derived.beta2 - 1.0) * eta)
    lw = _flux_ratio(w, z, derived.mu, g1, pp.p)
    dw = -g2 * w + lw
    dz = -b1 * z - b2 * lw - b3 * w - b4 * w ** derived.beta2
    if not (math.isfinite(dw) and math.isfinite(dz)):
        raise DomainError(f"non-finite right-hand side at eta={eta:g}")
    return dw, dz


def integrate_system(rhs, initial, eta_span, tolerance=1e-10):
    """Integrate a (w, z) system with adaptive error control.

    rhs maps an OdeState to (dw/deta, dz/deta).  Integration stops early
    with a reason when w falls to zero or values exceed 1e12.
    """
    if initial.w <= 0:
        raise DomainError("initial w must be positive")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")

    def fun(eta, y):
        return rhs(OdeState(eta, y[0], y[1]))

    # the flux term scales like 1/w near collapse, so the step size dies
    # before w can cross a floor much below 1e-6
    def ev_low(eta, y):
        return y[0] - 1e-6
    ev_low.terminal = True
    ev_low.direction = -1

    def ev_cap(eta, y):
        return max(abs(y[0]), abs(y[1])) - VALUE_CAP
    ev_cap.terminal = True
    ev_cap.direction = 1

    sol = solve_ivp(fun, eta_span, [initial.w, initial.z], method="RK45",
                    rtol=tolerance, atol=tolerance * 1e-3,
                    dense_output=True, events=(ev_low, ev_cap))
    if not sol.success and sol.status != 1:
        raise RootFindingError(f"integration failed: {sol.message}")
    if sol.status == 1:
        reason = "w_nonpositive" if len(sol.t_events[0]) else "magnitude_cap"
    else:
        reason = "completed"
    return Trajectory(sol.t, sol.y[0], sol.y[1], reason, sol=sol.sol)


def slow_limit_a4(derived, a):
    """Limit of the near-front reaction coefficient a4 as eta -> infinity.

    Returns (value, tag); the three-way case is decided by
    gamma2*(1-beta2) compared with 1.
    """
    derived.require("gamma2", "gamma3", "l7")
    if derived.diff_excess <= 0:
        raise RegimeMismatchError("slow-diffusion limit only")
    kappa = derived.gamma2 * (1.0 - derived.beta2)
    if kappa == 1.0:
        return derived.gamma3 / (a * derived.l7), "finite"
    if kappa < 1.0:
        return 0.0, "zero"
    return math.inf, "infinite"


def _bisect(fn, lo, hi, iterations=200):
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise RootFindingError("bisection endpoints have the same sign")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or hi - lo < 1e-17 * max(1.0, abs(mid)):
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


def solve_w0(derived, a):
    """Limit ratio w0 of near-front profiles to the compact reference.

    Solves gamma2^p w^(m2+k2(p-2)-1) - b^(-p/gamma1) gamma1^(1-p) gamma2
    k2^(p-2) / p + a4_limit * w^(beta2-1) = 0 by bracketing bisection.
    """
    derived.require("gamma2", "b", "l7")
    if derived.diff_excess <= 0:
        raise RegimeMismatchError("w0 is defined for slow diffusion")
    a40, tag = slow_limit_a4(derived, a)
    if tag == "infinite":
        raise RootFindingError("a4 limit is infinite; no finite-ratio equation")
    pp = derived.raw
    g1, g2 = derived.gamma1, derived.gamma2
    const = derived.b ** (-pp.p / g1) * g1 ** (1.0 - pp.p) * g2 \
        * derived.k2 ** (pp.p - 2.0) / pp.p
    dexc = derived.diff_excess

    def fn(w):
        return g2 ** pp.p * w ** dexc - const + a40 * w ** (derived.beta2 - 1.0)

    lo = 1e-12
    hi = 1.0
    tries = 0
    while fn(hi) * fn(lo) > 0 and hi < 1e6:
        hi *= 2.0
        tries += 1
    if fn(hi) * fn(lo) > 0:
        raise RootFindingError("no sign change up to w = 1e6")
    root = _bisect(fn, lo, hi)
    if abs(fn(root)) > 1e-12:
        raise RootFindingError(f"root residual {fn(root):.3e} exceeds 1e-12")
    return root


def solve_C_fast(derived, a):
    """Limit ratio C of far-field fast-diffusion profiles to the reference.

    Solves (s/gamma1 + gamma2) gamma2^(p-1) C^(mu+p-2)
           + A^((1-p)/gamma2) gamma1^(-p) (gamma1*gamma2/p + 1/l7)
           + b4_limit * C^(beta2-1) = 0
    with gamma2^(p-1) read as the signed power and mu+p-2 = (p-1)/gamma2.
    """
    derived.require("gamma2", "A", "l7", "s", "mu")
    if derived.diff_excess >= 0:
        raise RegimeMismatchError("C is defined for fast diffusion")
    kappa = derived.gamma2 * (derived.beta2 - 1.0)
    if kappa > 0:
        raise RegimeMismatchError(
            f"needs gamma2*(beta2-1) <= 0 (got {kappa:g})")
    pp = derived.raw
    g1, g2, A = derived.gamma1, derived.gamma2, derived.A
    if kappa == 0.0:
        b40 = g1 ** (-pp.p) * A ** (derived.beta2 - derived.m2
                                    - derived.k2 * (pp.p - 2.0)) / derived.l7
    else:
        b40 = 0.0
    signed_g2_pow = math.copysign(abs(g2) ** (pp.p - 1.0), g2)
    c1 = (derived.s / g1 + g2) * signed_g2_pow
    c0 = A ** ((1.0 - pp.p) / g2) * g1 ** (-pp.p) * (g1 * g2 / pp.p + 1.0 / derived.l7)
    expo = (pp.p - 1.0) / g2

    def fn(c):
        return c1 * c ** expo + c0 + b40 * c ** (derived.beta2 - 1.0)

    lo = 1e-12
    hi = 1.0
    while fn(hi) * fn(lo) > 0 and hi < 1e6:
        hi *= 2.0
    if fn(hi) * fn(lo) > 0:
        # also try shrinking the lower end before giving up
        lo2 = 1e-12
        while fn(lo2) * fn(hi) > 0 and lo2 > 1e-300:
            lo2 *= 1e-6
        if fn(lo2) * fn(hi) > 0:
            raise RootFindingError("no positive root: residual keeps one sign")
        lo = lo2
    root = _bisect(fn, lo, hi)
    if abs(fn(root)) > 1e-12:
        raise RootFindingError(f"root residual {fn(root):.3e} exceeds 1e-12")
    return root


def _bisect_flux(rhs_state, w_start, eta_start, eta_end, caps, tolerance):
    """Bisect the flux z(eta_start) separating upward escape from collapse.

    Comparison of trajectories makes the fate monotone in the initial
    flux, so bisection pins the bounded separatrix to float resolution.
    Returns (theta, dense solution for that theta).
    """
    lo_cap, hi_cap = caps

    def fate(theta):
        def fun(eta, y):
            return rhs_state(OdeState(eta, y[0], y[1]))

        def ev_low(eta, y):
            return y[0] - lo_cap
        ev_low.terminal = True
        ev_low.direction = -1

        def ev_high(eta, y):
            return y[0] - hi_cap
        ev_high.terminal = True
        ev_high.direction = 1

        sol = solve_ivp(fun, (eta_start, eta_end), [w_start, theta],
                        method="RK45", rtol=tolerance, atol=tolerance * 1e-3,
                        dense_output=True, events=(ev_low, ev_high))
        if sol.status == 1:
            side = -1 if len(sol.t_events[0]) else 1
        else:
            side = 1 if sol.y[0, -1] >= w_start else -1
        return side, sol

    theta_hi = 0.0
    side_hi, sol_hi = fate(theta_hi)
    if side_hi < 0:
        raise RootFindingError("zero initial flux already collapses; no bracket")
    theta_lo = -max(1.0, w_start)
    side_lo, _ = fate(theta_lo)
    while side_lo > 0:
        theta_lo *= 2.0
        if theta_lo < -1e8:
            raise RootFindingError("no downward bracket for the initial flux")
        side_lo, _ = fate(theta_lo)
    best = sol_hi
    for _ in range(200):
        mid = 0.5 * (theta_lo + theta_hi)
        if mid == theta_lo or mid == theta_hi:
            break
        side, sol = fate(mid)
        best = sol
        if side > 0:
            theta_hi = mid
        else:
            theta_lo = mid
    return 0.5 * (theta_lo + theta_hi), best


def equilibrium_flux(derived, w):
    """Flux value z making the ratio w stationary in the large-eta limit.

    In both systems the stationary flux expression Lw evaluates to a
    negative multiple of w (near front Lw = -gamma2*w with gamma2 > 0, far
    field Lw = +gamma2*w with gamma2 < 0), so z = -|gamma2|^(p-1) w^(mu+p-1).
    """
    p, mu, g2 = derived.raw.p, derived.mu, derived.gamma2
    return -abs(g2) ** (p - 1.0) * w ** (mu + p - 1.0)


def bounded_ratio_trajectory(derived, a, K, eta0=5.0, eta_end=25.0,
                             kind="near", tolerance=1e-12, stage=5.0):
    """Trajectory of the bounded profile-ratio branch with ratio K imposed.

    The bounded branch is the trajectory that stays positive and finite
    for all eta; only it carries the finite limit ratio.  Its stability
    type differs between the two systems, so the construction does too:

    * kind = "near" (slow diffusion): the limit state repels in both
      directions of increasing eta, so the branch is recovered by
      integrating backward from (eta_end, K, equilibrium flux); the
      backward flow contracts onto the unique bounded orbit.
    * kind = "far" (fast diffusion): the limit state is a saddle; forward
      shooting by bisection on the initial flux z(eta0) lands on its
      stable manifold, re-selected every `stage` units to shed the
      amplified integration noise.

    Returns (theta, trajectory) with theta the flux at the imposed end and
    trajectory sampled ascending in eta over [eta0, eta_end].
    """
    if kind == "near":
        rhs = lambda state: near_front_rhs(derived, a, state)
        theta = equilibrium_flux(derived, K)
        back = integrate_system(rhs, OdeState(eta_end, K, theta),
                                (eta_end, eta0), tolerance)
        if back.reason != "completed":
            raise RootFindingError(
                f"bounded branch lost integrating backward: {back.reason}")
        grid = np.linspace(eta0, eta_end, 800)
        vals = back.sol(grid)
        traj = Trajectory(grid, vals[0], vals[1], "completed", sol=back.sol)
        return theta, traj

    if kind != "far":
        raise ValueError(f"unknown kind {kind!r}")

    rhs = lambda state: far_field_rhs(derived, a, state)
    # caps tight enough that off-branch fates resolve inside the window but
    # wide enough that the bounded branch never touches them
    caps = (K / 8.0, 8.0 * K)
    fate_tol = max(tolerance, 1e-9)
    etas = [eta0]
    while etas[-1] + stage < eta_end - 1e-9:
        etas.append(etas[-1] + stage)
    etas.append(eta_end)

    theta0 = None
    w_here = K
    pieces_eta, pieces_w, pieces_z, segments = [], [], [], []
    for eta_a, eta_b in zip(etas[:-1], etas[1:]):
        theta, _ = _bisect_flux(rhs, w_here, eta_a, eta_end, caps, fate_tol)
        if theta0 is None:
            theta0 = theta
        # near the separatrix a single stage stays bounded
        seg = integrate_system(rhs, OdeState(eta_a, w_here, theta),
                               (eta_a, eta_b), tolerance)
        if seg.reason != "completed":
            raise RootFindingError(
                f"bounded branch lost in stage [{eta_a:g}, {eta_b:g}]: "
                f"{seg.reason}")
        grid = np.linspace(eta_a, eta_b, 200)
        vals = seg.sol(grid)
        pieces_eta.append(grid)
        pieces_w.append(vals[0])
        pieces_z.append(vals[1])
        segments.append((eta_a, eta_b, seg.sol))
        w_here = float(vals[0, -1])
    eta = np.concatenate(pieces_eta)
    w = np.concatenate(pieces_w)
    z = np.concatenate(pieces_z)
    traj = Trajectory(eta, w, z, "completed", sol=_PiecewiseDense(segments))
    return theta0, traj


class _PiecewiseDense:
    """Dense evaluation over consecutive integrator segments."""

    def __init__(self, segments):
        self.segments = segments

    def _eval_one(self, eta):
        for lo, hi, sol in self.segments:
            if lo - 1e-12 <= eta <= hi + 1e-12:
                return sol(min(max(eta, lo), hi))
        raise ValueError(f"eta={eta:g} outside the stored trajectory")

    def __call__(self, eta):
        if np.ndim(eta) == 0:
            return self._eval_one(float(eta))
        vals = [self._eval_one(float(e)) for e in np.asarray(eta).ravel()]
        return np.array(vals).T


def eta_to_xi_near(derived, a, eta):
    """Invert the near-front coordinate: xi = ((a - e^-eta)/b)^(1/gamma1)."""
    val = (a - np.exp(-np.asarray(eta, dtype=float))) / derived.b
    return val ** (1.0 / derived.gamma1)


def xi_to_eta_near(derived, a, xi):
    """Near-front coordinate eta = -ln(a - b*xi^gamma1)."""
    core = a - derived.b * np.asarray(xi, dtype=float) ** derived.gamma1
    if np.any(core <= 0):
        raise DomainError("xi at or beyond the reference front")
    return -np.log(core)


def xi_to_eta_far(derived, a, xi):
    """Far-field coordinate eta = ln(a + xi^gamma1)."""
    return np.log(a + np.asarray(xi, dtype=float) ** derived.gamma1)
