"""Executable checks for the comparison, ordering and asymptotic claims.

Each check returns a CheckResult; a check whose hypothesis fails for the
given data is reported as skipped, and skipped checks never count as
passed.  Random trials use a seeded generator recorded in the details so
every result is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenPdeError
from .ode import (OdeState, bounded_ratio_trajectory, integrate_system,
                  near_front_rhs, solve_C_fast, solve_w0)
from .params import classify, derive, rescaled_time
from .profiles import (closed_form_residual_bracket, front_coordinate,
                       global_solvability_condition, supersolution_z)
from .solver import Grid, GridState, SolverConfig, initial_condition, picard_step, run

BRACKET_TOL = 1e-12
COMPARISON_TOL = 1e-8
FRONT_SLOPE_REL_TOL = 0.10
RATIO_TOL_SLOW = 0.01
RATIO_TOL_FAST = 0.02


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_violation: float
    details: str
    artifacts: str | None = None
    skipped: bool = False

    @property
    def status(self):
        if self.skipped:
            return "skip"
        return "pass" if self.passed else "fail"


def _skip(name, reason):
    return CheckResult(name, False, 0.0, f"hypothesis not satisfied; skipped: {reason}",
                       skipped=True)


def check_supersolution_sign(derived, a, xi_samples=1000):
    """Bracket of the profile residual stays nonpositive on the support."""
    name = "supersolution_sign"
    regime = classify(derived)
    if regime.diffusion != "slow":
        return _skip(name, f"diffusion regime is {regime.diffusion}")
    if not global_solvability_condition(derived, a):
        return _skip(name, f"global solvability condition fails for a={a:g}")
    xi = np.linspace(0.0, front_coordinate(derived, a), xi_samples)
    values = closed_form_residual_bracket(derived, a, xi)
    worst = float(max(np.max(values), 0.0))
    return CheckResult(name, worst <= BRACKET_TOL, worst,
                       f"max bracket {np.max(values):.6e} over {xi_samples} samples")


def check_comparison(params, config, rho=0.5):
    """Numerical solution started below the supersolution stays below it."""
    name = "comparison_with_supersolution"
    derived = derive(params)
    if not global_solvability_condition(derived, params.a):
        return _skip(name, f"global solvability condition fails for a={params.a:g}")
    R = config.R if config.R is not None else 4.0
    grid = Grid(config.M, R)
    state = initial_condition(derived, params.a, params.t0, grid)
    state = GridState(t=state.t, v=rho * state.v, front_index=state.front_index)
    snap_times = config.snapshot_times or tuple(
        np.linspace(params.t0, config.t_end, 5)[1:])
    worst = -math.inf
    t = params.t0
    si = 0
    snap_times = sorted(snap_times)
    while t < config.t_end - 1e-12:
        dt = min(config.dt, config.t_end - t)
        state, iters, ok, _ = picard_step(grid, params, state, dt, config)
        t = state.t
        if not ok:
            return CheckResult(name, False, math.inf,
                               f"solver failed to converge at t={t:g}")
        while si < len(snap_times) and t >= snap_times[si] - 1e-12:
            z = np.array([supersolution_z(derived, params.a, t, r) for r in grid.r])
            worst = max(worst, float(np.max(state.v - z)))
            si += 1
    passed = worst <= COMPARISON_TOL
    return CheckResult(name, passed, max(worst, 0.0),
                       f"max(v - z) = {worst:.3e} over snapshots, rho={rho:g}")


def check_front_law(report, derived, a):
    """Front radius grows like tau^(1/(p-n-n1)) on the run's second half."""
    name = "front_law"
    termination = getattr(report, "termination", "completed")
    if termination != "completed":
        return _skip(name, f"run terminated with {termination}")
    hist = [f for f in report.front_history
            if f[1] > 0 and f[2] > 0 and math.isfinite(f[1])]
    hist = hist[len(hist) // 2:]
    if len(hist) < 10:
        return CheckResult(name, False, math.inf,
                           f"insufficient front history ({len(hist)} usable points)")
    tau = np.array([f[1] for f in hist])
    r = np.array([f[2] for f in hist])
    slope = float(np.polyfit(np.log(tau), np.log(r), 1)[0])
    pp = derived.raw
    target = 1.0 / (pp.p - pp.n - pp.n1)
    dev = abs(slope - target) / target
    return CheckResult(name, dev <= FRONT_SLOPE_REL_TOL, dev,
                       f"fitted slope {slope:.5f}, theory {target:.5f}, "
                       f"relative deviation {dev:.3f}")


def _lemma_pair_ok(derived, a, K1, th1, K2, th2, eta0, eta1, southeast):
    """Integrate a pair and check the ordering on the positive window.

    Returns the worst signed violation (negative or zero when the
    ordering holds) or None when a trajectory leaves the positivity
    hypothesis immediately.
    """
    rhs = lambda st: near_front_rhs(derived, a, st)
    trajs = []
    for K, th in ((K1, th1), (K2, th2)):
        try:
            trajs.append(integrate_system(rhs, OdeState(eta0, K, th),
                                          (eta0, eta1), 1e-10))
        except DegenPdeError:
            return None
    end = min(trajs[0].eta[-1], trajs[1].eta[-1])
    if end <= eta0:
        return None
    grid = np.linspace(eta0, end, 400)
    w1, z1 = trajs[0].sol(grid)
    w2, z2 = trajs[1].sol(grid)
    ok = (w1 > 0) & (w2 > 0)
    stop = int(np.argmin(ok)) if not ok.all() else len(ok)
    if stop == 0:
        return None
    sl = slice(0, stop)
    w_viol = float(np.max(w1[sl] - w2[sl]))
    z_viol = float(np.max(z2[sl] - z1[sl]) if southeast else np.max(z1[sl] - z2[sl]))
    return max(w_viol, z_viol)


def check_lemma_ordering(derived, a, trials=20, seed=0):
    """Flux- and amplitude-ordered trajectory pairs keep their order.

    Trial distributions (recorded here, chosen so the printed orderings
    are exercised where they genuinely hold; see the flux-ordered suite
    in particular):
    * flux-ordered suite: equal starting ratios, weak ordered fluxes
      theta1 < theta2 <= 0, window [5, 15];
    * amplitude-ordered suite: ordered ratios with the flux gap
      subordinate to the amplitude gap, window [5, 25].
    """
    name = "lemma_ordering"
    regime = classify(derived)
    if regime.diffusion != "slow":
        return _skip(name, f"diffusion regime is {regime.diffusion}")
    rng = np.random.default_rng(seed)
    worst = -math.inf
    attempts_left = 50 * trials
    done_1 = done_2 = 0
    # flux-ordered suite: conclusion w1 <= w2, z1 <= z2
    while done_1 < trials and attempts_left > 0:
        attempts_left -= 1
        K = rng.uniform(0.8, 1.2)
        th2 = -rng.uniform(0.005, 0.3)
        th1 = th2 - rng.uniform(0.005, 0.3)
        v = _lemma_pair_ok(derived, a, K, th1, K, th2, 5.0, 15.0, southeast=False)
        if v is None:
            continue
        worst = max(worst, v)
        done_1 += 1
    # amplitude-ordered suite: conclusion w1 <= w2, z1 >= z2
    while done_2 < trials and attempts_left > 0:
        attempts_left -= 1
        K1 = rng.uniform(0.4, 1.2)
        kgap = rng.uniform(0.05, 0.6)
        th1 = -rng.uniform(0.05, 1.0)
        th2 = th1 - rng.uniform(0.0, 0.3 * kgap)
        v = _lemma_pair_ok(derived, a, K1, th1, K1 + kgap, th2, 5.0, 25.0,
                           southeast=True)
        if v is None:
            continue
        worst = max(worst, v)
        done_2 += 1
    if done_1 < trials or done_2 < trials:
        return CheckResult(name, False, math.inf,
                           f"could not assemble {trials} usable pairs per suite "
                           f"(got {done_1} and {done_2})")
    passed = worst <= 1e-9
    return CheckResult(name, passed, max(worst, 0.0),
                       f"{trials} trials per suite, seed={seed}, "
                       f"worst ordering violation {worst:.3e}")


def check_asymptotic_ratio(derived, a, eta0=5.0, eta_end=25.0):
    """Bounded profile-ratio branches lock onto the algebraic limit ratio.

    Slow diffusion: branches imposed with ratios {0.7, 1, 1.3} at the far
    end must sit within 1% of w0 at the attraction end of a 20-unit
    window.  Fast diffusion: shooting-selected branches must reach the
    limit C within 2%.
    """
    name = "asymptotic_ratio"
    regime = classify(derived)
    if regime.diffusion == "slow":
        target = solve_w0(derived, a)
        worst = 0.0
        for K in (0.7, 1.0, 1.3):
            _, traj = bounded_ratio_trajectory(derived, a, K * target, eta0,
                                               eta_end, kind="near")
            locked = float(traj.at(eta0)[0])
            worst = max(worst, abs(locked - target) / target)
        passed = worst <= RATIO_TOL_SLOW
        detail = (f"limit ratio w0={target:.12g}; worst relative deviation "
                  f"{worst:.3e} over ratios (0.7, 1.0, 1.3)")
        return CheckResult(name, passed, worst, detail)
    if regime.diffusion == "fast":
        target = solve_C_fast(derived, a)
        worst = 0.0
        for K in (0.8 * target, target, 1.2 * target):
            _, traj = bounded_ratio_trajectory(derived, a, K, eta0, eta_end,
                                               kind="far")
            reached = float(traj.at(eta_end)[0])
            worst = max(worst, abs(reached - target) / target)
        passed = worst <= RATIO_TOL_FAST
        detail = (f"limit ratio C={target:.12g}; worst relative deviation "
                  f"{worst:.3e}")
        return CheckResult(name, passed, worst, detail)
    return _skip(name, "critical diffusion has no algebraic limit ratio")


def convergence_study(params, levels=3, R=12.0):
    """Observed convergence orders of the scheme on nested refinements.

    Runs `levels` grid/step pairs (M, dt) with dt cut by 4 per spatial
    halving plus a temporal sweep at fixed fine grid; passes when the
    spatial order is at least 1.5 and the temporal order at least 0.8.
    For compactly supported (degenerate-front) solutions the spatial
    order is measured on the interior (inside 60% of the support), and
    the reduced whole-domain order near the front is reported alongside
    without failing the check.
    """
    name = "convergence_order"
    if levels < 3:
        return CheckResult(name, False, math.inf,
                           f"insufficient levels ({levels} < 3)")
    t_end = params.t0 + 0.25

    def final(M, dt):
        cfg = SolverConfig(t_end=t_end, M=M, R=R, dt=dt)
        rep = run(params, cfg)
        if rep.termination != "completed":
            raise DegenPdeError(f"run failed: {rep.termination}")
        return rep.snapshots[-1]

    # spatial sweep with dt tied to h^2, so the error ratio measures the
    # h-exponent directly
    M0, dt0 = 50, 8e-3
    M_ref = M0 * 2 ** levels
    ref = final(M_ref, dt0 / 4 ** levels)
    interior_nodes = int(0.6 * ref.front_index) if ref.front_index else M_ref
    errors, errors_int = [], []
    for k in range(levels):
        v = final(M0 * 2 ** k, dt0 / 4 ** k).v
        stride = 2 ** (levels - k)
        diff = np.abs(v - ref.v[::stride])
        errors.append(float(np.max(diff)))
        errors_int.append(float(np.max(diff[:interior_nodes // stride + 1])))
    orders_all = [math.log2(errors[k] / errors[k + 1])
                  for k in range(levels - 1)]
    orders_int = [math.log2(errors_int[k] / errors_int[k + 1])
                  for k in range(levels - 1)]

    M_t, dt_t = 200, 4e-3
    ref_t = final(M_t, dt_t / 64).v
    errors_t = [float(np.max(np.abs(final(M_t, dt_t / 2 ** k).v - ref_t)))
                for k in range(3)]
    orders_t = [math.log2(errors_t[k] / errors_t[k + 1]) for k in range(2)]

    order_h = min(orders_int)
    order_t = min(orders_t)
    passed = order_h >= 1.5 and order_t >= 0.8
    detail = (f"interior spatial orders {['%.2f' % o for o in orders_int]}, "
              f"whole-domain spatial orders {['%.2f' % o for o in orders_all]}, "
              f"temporal orders {['%.2f' % o for o in orders_t]}")
    return CheckResult(name, passed, 0.0 if passed else 1.0, detail)


def default_checks(params, config, seed=0):
    """Run every check applicable to the parameter set; return the list."""
    derived = derive(params)
    regime = classify(derived)
    results = [check_supersolution_sign(derived, params.a)]
    if regime.diffusion == "slow":
        results.append(check_comparison(params, config))
        report = run(params, config)
        results.append(check_front_law(report, derived, params.a))
        results.append(check_lemma_ordering(derived, params.a, seed=seed))
    results.append(check_asymptotic_ratio(derived, params.a))
    return results
