#!/usr/bin/env python3
"""Walk through the derived-constant machinery on three parameter sets.

For each set we derive every constant of the separable substitution,
classify the diffusion regime, and evaluate the critical source exponent
in both variable systems.
"""

from degenpde import (ProblemParams, classify, derive, fujita_exponent,
                      relaxation_notes, rescaled_time, vbar)

SETS = {
    "slow, subcritical source": ProblemParams(
        k=1, m=2, p=2, q=0, epsilon=1, n=0, n1=0, l=0, beta=3, N=1),
    "slow, supercritical source": ProblemParams(
        k=1, m=2, p=2, q=0, epsilon=1, n=0, n1=0, l=0, beta=5, N=1, a=0.5),
    "fast diffusion": ProblemParams(
        k=1, m=0.5, p=2, q=0, epsilon=1, n=0, n1=0, l=0, beta=2, N=3),
    "critical diffusion": ProblemParams(
        k=1, m=1, p=2, q=0, epsilon=1, n=0, n1=0, l=0, beta=3, N=1),
}

for label, params in SETS.items():
    d = derive(params)
    regime = classify(d)
    print(f"== {label} ==")
    print(f"   m2={d.m2:g} k2={d.k2:g} beta2={d.beta2:g} "
          f"gamma1={d.gamma1:g} gamma2={d.gamma2:g} b={d.b:g}")
    print(f"   s={d.s:g} l5={d.l5:g} l7={d.l7:g} front xi_b={d.xi_b:g}")
    print(f"   regime: {regime.diffusion} diffusion, {regime.solvability}")
    b2c, bcu = fujita_exponent(d)
    print(f"   critical exponents: beta2_crit={b2c:g}, in raw variables {bcu:g}")
    for note in relaxation_notes(params):
        print(f"   note: {note}")
    try:
        print(f"   time factors at t=2: vbar={vbar(d, 2.0):.6f}, "
              f"tau={rescaled_time(d, 2.0):.6f}")
    except Exception as exc:
        print(f"   time factors at t=2: {exc}")
    print()
