#!/usr/bin/env python3
"""Plot the three profile shapes and the supersolution sign bracket.

The compact profile's residual bracket must stay nonpositive for the
comparison function vbar(t)*f(xi) to dominate solutions; the amplitude
threshold below which that holds is printed alongside.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from degenpde import (ProblemParams, closed_form_residual_bracket, derive,
                      front_coordinate, global_solvability_condition,
                      make_profile, profile_value,
                      solvability_amplitude_threshold, supersolution_z)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

slow = derive(ProblemParams(k=1, m=2, p=2, q=0, epsilon=1, n=0, n1=0, l=0,
                            beta=5, N=1, a=0.5))
fast = derive(ProblemParams(k=1, m=0.5, p=2, q=0, epsilon=1, n=0, n1=0, l=0,
                            beta=2, N=3))
crit = derive(ProblemParams(k=1, m=1, p=2, q=0, epsilon=1, n=0, n1=0, l=0,
                            beta=3, N=1))

fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))
xi = np.linspace(0, 3, 600)
axes[0].plot(xi, profile_value(make_profile(slow, 0.5), xi))
axes[0].set_title("compact (slow diffusion)")
axes[1].plot(xi, profile_value(make_profile(crit, 1.0), xi))
axes[1].set_title("exponential (critical)")
axes[2].plot(xi, profile_value(make_profile(fast, 1.0), xi))
axes[2].set_title("algebraic tail (fast)")
for ax in axes:
    ax.set_xlabel("xi")
fig.tight_layout()
fig.savefig(OUT / "profiles.png", dpi=110)
print(f"wrote {OUT / 'profiles.png'}")

a_star = solvability_amplitude_threshold(slow)
print(f"global comparison bound available for a <= {a_star:.5f}")
for a in (0.5, 0.84, 0.9):
    print(f"  a={a}: condition holds -> {global_solvability_condition(slow, a)}")

fig, ax = plt.subplots(figsize=(6, 3.6))
for a in (0.3, 0.5, a_star):
    xi_a = np.linspace(0, front_coordinate(slow, a), 400)
    ax.plot(xi_a, closed_form_residual_bracket(slow, a, xi_a), label=f"a = {a:.3f}")
ax.axhline(0.0, color="k", lw=0.8)
ax.set_xlabel("xi")
ax.set_ylabel("residual bracket")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "bracket.png", dpi=110)
print(f"wrote {OUT / 'bracket.png'}")

print(f"supersolution at t=1, r=0: {supersolution_z(slow, 0.5, 1.0, 0.0):.6f}")
