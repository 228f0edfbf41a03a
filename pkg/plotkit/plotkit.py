#!/usr/bin/env python3
"""Figure rendering for solver snapshot files.

Reads the solver's snapshots.csv (columns t,r,v,u) and renders either the
family of radial curves (one per time level) or a revolved surface
u(x, y) = u(sqrt(x^2 + y^2)) for a single time level.  Rendering is
deterministic: fixed color cycle, fixed sampling, no timestamps in the
output files.

Usage:
    plotkit.py <snapshots.csv> --mode 1d --out curves.png
    plotkit.py <snapshots.csv> --mode 2d --time 2.5 --out surface.png
"""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple",
          "tab:brown", "tab:pink", "tab:gray", "tab:olive", "tab:cyan")
PNG_METADATA = {"Software": "plotkit"}


class SnapshotFormatError(ValueError):
    pass


@dataclass
class SnapshotTable:
    """Snapshot rows grouped by time level, radii strictly increasing."""

    times: list
    radii: dict      # t -> array of r
    values_v: dict   # t -> array of v
    values_u: dict   # t -> array of u

    def __len__(self):
        return len(self.times)


def load_snapshots(path):
    """Parse and validate a solver snapshots.csv file."""
    with open(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].split(",") != ["t", "r", "v", "u"]:
        raise SnapshotFormatError(f"{path}: expected header 't,r,v,u'")
    times = []
    radii, values_v, values_u = {}, {}, {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise SnapshotFormatError(f"{path}:{lineno}: expected 4 columns")
        try:
            t, r, v, u = (float(x) for x in parts)
        except ValueError:
            raise SnapshotFormatError(f"{path}:{lineno}: non-numeric row")
        if not times or t != times[-1]:
            if t in radii:
                raise SnapshotFormatError(
                    f"{path}:{lineno}: time level {t:g} appears twice")
            times.append(t)
            radii[t] = []
            values_v[t] = []
            values_u[t] = []
        if radii[t] and r <= radii[t][-1]:
            raise SnapshotFormatError(
                f"{path}:{lineno}: radius not strictly increasing within t={t:g}")
        radii[t].append(r)
        values_v[t].append(v)
        values_u[t].append(u)
    if not times:
        warnings.warn(f"{path}: header-only file, empty table")
    for t in times:
        radii[t] = np.asarray(radii[t])
        values_v[t] = np.asarray(values_v[t])
        values_u[t] = np.asarray(values_u[t])
    return SnapshotTable(times, radii, values_v, values_u)


def radial_interp(table, t, radius):
    """Linear-in-r interpolation of u at |radius|; zero beyond the grid."""
    r = table.radii[t]
    u = table.values_u[t]
    return np.interp(np.abs(radius), r, u, left=u[0], right=0.0)


def support_radius(table, t, threshold=1e-10):
    """Outermost radius carrying a value above threshold * max."""
    r = table.radii[t]
    u = table.values_u[t]
    peak = float(np.max(u)) if len(u) else 0.0
    if peak <= 0.0:
        return float(r[-1]) if len(r) else 1.0
    above = np.nonzero(u > threshold * peak)[0]
    return float(r[above[-1]]) if above.size else float(r[-1])


def render_1d(table, out_image):
    """One u-vs-r curve per time level with a time legend."""
    if len(table) == 0:
        raise SnapshotFormatError("empty table: nothing to render")
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for i, t in enumerate(table.times):
        ax.plot(table.radii[t], table.values_u[t],
                color=COLORS[i % len(COLORS)], label=f"t = {t:g}")
    ax.set_xlabel("r")
    ax.set_ylabel("u")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_image, dpi=120, metadata=PNG_METADATA)
    plt.close(fig)
    return out_image


def render_2d_revolved(table, time, out_image, samples=201):
    """Surface u(x, y) from the radial data of one time level.

    The square window covers 1.2x the support radius; values at (x, 0)
    equal the 1D curve at r = |x| exactly (same interpolation rule).
    """
    if time not in table.radii:
        available = ", ".join(f"{t:g}" for t in table.times)
        raise SnapshotFormatError(
            f"time {time:g} not in table; available: {available}")
    L = 1.2 * support_radius(table, time)
    axis = np.linspace(-L, L, samples)
    X, Y = np.meshgrid(axis, axis)
    Z = radial_interp(table, time, np.sqrt(X ** 2 + Y ** 2))
    fig = plt.figure(figsize=(7.0, 5.5))
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(X, Y, Z, cmap="viridis", rstride=2, cstride=2,
                    linewidth=0, antialiased=False)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("u")
    ax.set_title(f"t = {time:g}")
    fig.savefig(out_image, dpi=120, metadata=PNG_METADATA)
    plt.close(fig)
    return out_image


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plotkit.py", description="render solver snapshot CSV files")
    parser.add_argument("snapshots")
    parser.add_argument("--mode", choices=("1d", "2d"), required=True)
    parser.add_argument("--time", type=float, default=None)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        table = load_snapshots(args.snapshots)
        if args.mode == "1d":
            render_1d(table, args.out)
        else:
            if args.time is None:
                if len(table) == 0:
                    raise SnapshotFormatError("empty table: nothing to render")
                args.time = table.times[-1]
            render_2d_revolved(table, args.time, args.out)
    except SnapshotFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
