#!/usr/bin/env python3
"""Limit ratios of profiles to their reference shapes.

Near the compact front the ratio of a bounded profile to the reference
tends to an algebraic constant w0; in the fast-diffusion far field the
analogous constant C solves a small algebraic equation.  Both are found
by bisection and verified against bounded trajectories of the
first-order systems.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from degenpde import ProblemParams, derive
from degenpde.ode import bounded_ratio_trajectory, solve_C_fast, solve_w0

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

slow = derive(ProblemParams(k=1, m=2, p=2, q=0, epsilon=1, n=0, n1=0, l=0,
                            beta=5, N=1, a=0.5))
w0 = solve_w0(slow, 0.5)
print(f"near-front limit ratio w0 = {w0:.12f}")

fig, ax = plt.subplots(figsize=(6.5, 4))
eta = np.linspace(5, 25, 400)
for K in (0.7, 1.0, 1.3):
    _, traj = bounded_ratio_trajectory(slow, 0.5, K, 5.0, 25.0, kind="near")
    w, _ = traj.at(eta)
    ax.plot(eta, w, label=f"ratio {K:g} imposed at eta = 25")
ax.axhline(w0, color="k", lw=0.8, ls=":")
ax.set_xlabel("eta")
ax.set_ylabel("w")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "near_front_ratio.png", dpi=110)
print(f"wrote {OUT / 'near_front_ratio.png'} "
      "(all bounded branches lock onto w0 toward the attraction end)")

fast = derive(ProblemParams(k=1, m=0.5, p=2, q=0, epsilon=1, n=0, n1=0, l=0,
                            beta=2, N=3))
C = solve_C_fast(fast, 1.0)
print(f"far-field limit ratio C = {C:.12f}")
fig, ax = plt.subplots(figsize=(6.5, 4))
for K in (0.8 * C, C, 1.2 * C):
    _, traj = bounded_ratio_trajectory(fast, 1.0, K, 5.0, 25.0, kind="far")
    w, _ = traj.at(eta)
    ax.plot(eta, w, label=f"w(5) = {K:.4f}")
ax.axhline(C, color="k", lw=0.8, ls=":")
ax.set_xlabel("eta")
ax.set_ylabel("w")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "far_field_ratio.png", dpi=110)
print(f"wrote {OUT / 'far_field_ratio.png'}")
