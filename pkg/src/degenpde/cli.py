"""Command-line front end: config parsing, subcommands, CSV serialization.

Usage:
    degenpde <analyze|profile|solve|verify> --config <path> [--out <dir>] [--seed <int>]

Config files are line-oriented `key = value` with '#' comments.  Keys
mirror the model symbols (k, m, p, q, epsilon, n, n1, l, beta, N, t0, a)
plus solver settings (M, R, dt, t_end, picard_tol, picard_max,
support_threshold, blowup_cap, snapshot_times, source, relax).  Unknown
keys are errors.  All CSV output uses 17 significant digits, '.' decimal
separator and LF line endings, so outputs are byte-stable for a given
config and seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, DegenPdeError, InvalidParamsError
from .params import (ProblemParams, classify, derive, relaxation_notes,
                     rescaled_time, validate)
from .profiles import (front_coordinate, make_profile, profile_value,
                       solvability_amplitude_threshold, u_from_v)
from .solver import SolverConfig, run
from .verify import default_checks

_PROBLEM_KEYS = {
    "k": float, "m": float, "p": float, "q": float, "epsilon": int,
    "n": float, "n1": float, "l": float, "beta": float, "N": int,
    "t0": float, "a": float,
}
_SOLVER_KEYS = {
    "M": int, "R": float, "dt": float, "t_end": float, "picard_tol": float,
    "picard_max": int, "support_threshold": float, "blowup_cap": float,
    "snapshot_times": str, "source": str, "relax": float,
}
_PROBLEM_DEFAULTS = {"n": 0.0, "n1": 0.0, "l": 0.0, "beta": 0.0,
                     "epsilon": 1, "t0": 1.0, "a": 1.0}


@dataclasses.dataclass
class RunConfig:
    problem: ProblemParams
    solver: SolverConfig
    output_dir: str = "out"
    command: str = ""
    seed: int = 0


def _fmt(x):
    """17-significant-digit, locale-independent number formatting."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".17g")


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell)
                              for cell in row))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def parse_config(text):
    """Parse a `key = value` config into a RunConfig with defaults applied."""
    problem_raw = dict(_PROBLEM_DEFAULTS)
    solver_raw = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key in _PROBLEM_KEYS:
                problem_raw[key] = _PROBLEM_KEYS[key](value)
            elif key in _SOLVER_KEYS:
                if key == "snapshot_times":
                    solver_raw[key] = tuple(float(v) for v in value.split(","))
                elif key == "source":
                    if value.lower() not in ("on", "off", "true", "false"):
                        raise ValueError(value)
                    solver_raw[key] = value.lower() in ("on", "true")
                else:
                    solver_raw[key] = _SOLVER_KEYS[key](value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot parse value {value!r} "
                              f"for key {key!r}")
    missing = [k for k in ("k", "m", "p", "q", "N") if k not in problem_raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    problem = ProblemParams(**problem_raw)
    violations = validate(problem)
    if violations:
        raise InvalidParamsError(violations)
    solver_raw.setdefault("t_end", problem.t0 + 3.0)
    solver = SolverConfig(**solver_raw)
    return RunConfig(problem=problem, solver=solver)


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    return parse_config(text)


_CONSTANT_FIELDS = ("m2", "k2", "beta2", "gamma1", "gamma2", "gamma3", "mu",
                    "s", "l1", "l2", "l3", "l4", "l5", "l6", "l7", "b", "A",
                    "beta2_crit", "beta_crit_u", "xi_b")


def cmd_analyze(config):
    """Derived constants, regime and critical-exponent verdict."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    derived = derive(config.problem)
    regime = classify(derived)
    rows = []
    for name in _CONSTANT_FIELDS:
        value = getattr(derived, name)
        branch = derived.undefined.get(name, "-")
        rows.append((name, value, branch))
    for name in ("vbar_case", "tau_case", "phi_case"):
        rows.append((name, getattr(derived, name), "branch flag"))
    write_csv(out / "constants.csv", ("name", "value", "branch"), rows)

    lines = [f"diffusion regime: {regime.diffusion}"]
    if regime.diffusion == "critical":
        lines.append("exponential profile branch")
    verdict = regime.solvability
    if regime.solvability == "supercritical":
        a_star = solvability_amplitude_threshold(derived)
        if a_star is not None:
            verdict += f"; globally solvable for a <= {a_star:.5f}"
    lines.append(f"critical exponent verdict: {verdict} "
                 f"(beta2 = {_fmt(derived.beta2)}, beta2_crit = {_fmt(derived.beta2_crit)})")
    for note in relaxation_notes(config.problem):
        lines.append(note)
    for flag in sorted(derived.degeneracies):
        lines.append(f"degenerate branch: {flag}")
    text = "\n".join(lines)
    print(text)
    (out / "analyze_summary.txt").write_bytes((text + "\n").encode("ascii"))
    return 0


def cmd_profile(config):
    """Sample the regime's self-similar profile to profile.csv."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    derived = derive(config.problem)
    prof = make_profile(derived, config.problem.a)
    xi_b = front_coordinate(derived, config.problem.a)
    hi = 1.2 * xi_b if math.isfinite(xi_b) else 10.0
    xi = np.linspace(0.0, hi, 1001)
    f = profile_value(prof, xi)
    write_csv(out / "profile.csv", ("xi", "f"), list(zip(xi, f)))
    print(f"profile kind {prof.kind}: {len(xi)} samples on [0, {hi:g}]")
    return 0


def cmd_solve(config):
    """Run the solver; write snapshots.csv, front.csv, meta.csv, summary."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = run(config.problem, config.solver)
    q = config.problem.q
    r = report.grid.r
    snap_rows = []
    for snap in report.snapshots:
        u = u_from_v(snap.v, q)
        for i in range(len(r)):
            snap_rows.append((snap.t, r[i], snap.v[i], u[i]))
    write_csv(out / "snapshots.csv", ("t", "r", "v", "u"), snap_rows)
    write_csv(out / "front.csv", ("t", "tau", "r_front"), report.front_history)
    meta_rows = [(step + 1, report.front_history[step + 1][0], iters)
                 for step, iters in enumerate(report.iterations_per_step)]
    write_csv(out / "meta.csv", ("step", "t", "picard_iters"), meta_rows)
    summary = [f"termination: {report.termination}",
               f"t_termination: {_fmt(report.t_termination)}",
               f"steps: {len(report.iterations_per_step)}",
               f"max_picard_iters: {max(report.iterations_per_step, default=0)}",
               f"retried_steps: {report.retried_steps}",
               f"clamped_mass_fraction: {_fmt(report.clamped_mass_fraction)}",
               f"front_warning: {report.front_warning}"]
    text = "\n".join(summary)
    print(text)
    (out / "run_summary.txt").write_bytes((text + "\n").encode("ascii"))
    return 0 if report.termination in ("completed", "blowup") else 2


def cmd_verify(config):
    """Run all applicable checks; exit 0 iff no non-skipped check fails."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = default_checks(config.problem, config.solver, seed=config.seed)
    rows = [(res.name, res.status, res.worst_violation) for res in results]
    write_csv(out / "verify.csv", ("check", "passed", "worst_violation"), rows)
    for res in results:
        print(f"{res.name}: {res.status} ({res.details})")
    failed = [res for res in results if not res.skipped and not res.passed]
    return 3 if failed else 0


_COMMANDS = {"analyze": cmd_analyze, "profile": cmd_profile,
             "solve": cmd_solve, "verify": cmd_verify}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="degenpde",
        description="self-similar analysis and implicit solver for a "
                    "degenerate reaction-diffusion model")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cp = sub.add_parser(name)
        cp.add_argument("--config", required=True)
        cp.add_argument("--out", default="out")
        cp.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except (ConfigError, InvalidParamsError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    config.output_dir = args.out
    config.command = args.command
    config.seed = args.seed
    try:
        return _COMMANDS[args.command](config)
    except DegenPdeError as exc:
        print(f"{args.command} failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
