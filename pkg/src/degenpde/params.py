"""Raw parameters, derived constants and the similarity maps.

The model is a radially symmetric degenerate reaction-diffusion equation
for u(t, x), rewritten via v = u^(1-q) into

    r^(-n) v_t = r^(1-N) d/dr ( r^(n1+N-1) v^(m2-1) |d(v^k2)/dr|^(p-2) dv/dr )
                 + eps*(1-q) r^(-n) t^l v^(beta2)

with m2 = m/(1-q), k2 = k/(1-q), beta2 = (beta-q)/(1-q).  Separable
solutions v = vbar(t) * f(xi), xi = phi(r) * tau(t)^(-1/p) reduce the
problem to a one-dimensional self-similar profile equation; this module
computes every constant of that reduction and evaluates the maps
vbar(t), tau(t), phi(r) and xi(t, r).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict, replace

from .errors import InvalidParamsError, UndefinedConstantError, DomainError

_FLAG_LOG_SPACE = "p = n+n1 (logarithmic space map)"


def _safe_pow(base, expo, symbol):
    """x**y with exact handling of negative bases.

    Negative base with integer exponent is evaluated exactly (sign by
    parity); negative base with non-integer exponent raises
    UndefinedConstantError instead of silently taking magnitudes.
    """
    base = float(base)
    expo = float(expo)
    if base > 0.0:
        return base ** expo
    if base == 0.0:
        if expo > 0.0:
            return 0.0
        if expo == 0.0:
            return 1.0
        raise UndefinedConstantError(symbol, "zero base raised to a negative power")
    if expo == round(expo):
        k = int(round(expo))
        mag = abs(base) ** expo
        return mag if k % 2 == 0 else -mag
    raise UndefinedConstantError(
        symbol, f"negative base {base:g} with non-integer exponent {expo:g}")


@dataclass(frozen=True)
class ProblemParams:
    """Raw exponents and switches of the model plus artifact parameters.

    epsilon = +1 selects a source term, -1 absorption.  t0 is the initial
    time of a run and a the free amplitude of the self-similar profile;
    both default to 1.
    """

    k: float
    m: float
    p: float
    q: float
    epsilon: int
    n: float
    n1: float
    l: float
    beta: float
    N: int
    t0: float = 1.0
    a: float = 1.0

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        data["N"] = int(data["N"])
        data["epsilon"] = int(data["epsilon"])
        return ProblemParams(**data)


def validate(params, permissive=False):
    """Check every admissibility constraint; return the list of violations.

    Violations are data, not failures: each entry names the field and the
    violated bound.  With permissive=True the l = -1 and beta2 = 1
    branches and the p = n+n1 logarithmic space map are admitted.
    """
    v = []
    pp = params
    if not pp.p >= 2:
        v.append(f"p >= 2 violated (p={pp.p:g})")
    if not (0 <= pp.q < 1):
        v.append(f"q in [0, 1) violated (q={pp.q:g})")
    if pp.epsilon not in (1, -1):
        v.append(f"epsilon in {{+1, -1}} violated (epsilon={pp.epsilon})")
    if not (isinstance(pp.N, int) and pp.N >= 1):
        v.append(f"N >= 1 violated (N={pp.N})")
    if not pp.n >= 0:
        v.append(f"n >= 0 violated (n={pp.n:g})")
    if not pp.l >= 0 and not (permissive and pp.l == -1):
        v.append(f"l >= 0 violated (l={pp.l:g})")
    if not pp.beta >= 0:
        v.append(f"beta >= 0 violated (beta={pp.beta:g})")
    if not pp.a > 0:
        v.append(f"a > 0 violated (a={pp.a:g})")
    if not pp.t0 > 0:
        v.append(f"t0 > 0 violated (t0={pp.t0:g})")
    if not pp.k > 0:
        v.append(f"k > 0 violated (k={pp.k:g})")
    if not pp.m > 0:
        v.append(f"m > 0 violated (m={pp.m:g})")
    if not pp.n < pp.N:
        v.append(f"n < N violated (n={pp.n:g}, N={pp.N})")
    if pp.p < pp.n + pp.n1:
        v.append(f"p > n+n1 violated (p={pp.p:g}, n+n1={pp.n + pp.n1:g})")
    elif pp.p == pp.n + pp.n1 and not permissive:
        v.append(_FLAG_LOG_SPACE)
    return v


def relaxation_notes(params):
    """Notes for accepted values outside the classical k, m >= 1 range."""
    notes = []
    if 0 < params.k < 1:
        notes.append(f"relaxed range: k={params.k:g} accepted below the classical bound k >= 1")
    if 0 < params.m < 1:
        notes.append(f"relaxed range: m={params.m:g} accepted below the classical bound m >= 1")
    return notes


@dataclass(frozen=True)
class DerivedConstants:
    """Every derived symbol of the self-similar machinery.

    Symbols whose closed form degenerates for the given parameters are
    stored as NaN with the reason recorded in `undefined`; symbols
    required by the selected branches raise at derive() time instead.
    """

    raw: ProblemParams
    m2: float
    k2: float
    beta2: float
    gamma1: float
    gamma2: float
    gamma3: float
    mu: float
    s: float
    l1: float
    l2: float
    l3: float
    l4: float
    l5: float
    l6: float
    l7: float
    b: float
    A: float
    beta2_crit: float
    beta_crit_u: float
    xi_b: float
    vbar_case: str      # power | log | exp | inverse-power
    tau_case: str       # power | log
    phi_case: str       # power | log
    tau_negated: bool
    degeneracies: frozenset
    undefined: dict = field(default_factory=dict, compare=False)

    @property
    def diff_excess(self):
        """m2 + k2(p-2) - 1; its sign selects slow/critical/fast diffusion."""
        return self.m2 + self.k2 * (self.raw.p - 2) - 1.0

    def require(self, *symbols):
        for sym in symbols:
            if sym in self.undefined:
                raise UndefinedConstantError(sym, self.undefined[sym])


@dataclass(frozen=True)
class Regime:
    """Diffusion type, solvability side of the critical exponent, degeneracy flags."""

    diffusion: str      # slow | critical | fast
    solvability: str    # supercritical | subcritical
    degeneracies: frozenset


def derive(params, permissive=False):
    """Compute every derived constant and branch flag for a parameter set.

    Division-by-zero branches are routed to degeneracy flags; a power of a
    negative base with non-integer exponent raises UndefinedConstantError
    when the affected symbol is needed by the selected branches, and is
    recorded as undefined otherwise.
    """
    viols = validate(params, permissive=permissive)
    if viols:
        raise InvalidParamsError(viols)

    pp = params
    p, q, N, n, n1, l = pp.p, pp.q, pp.N, pp.n, pp.n1, pp.l
    undefined = {}
    degeneracies = set()

    m2 = pp.m / (1.0 - q)
    k2 = pp.k / (1.0 - q)
    beta2 = (pp.beta - q) / (1.0 - q)
    gamma1 = p / (p - 1.0)
    dexc = m2 + k2 * (p - 2.0) - 1.0

    def attempt(symbol, fn):
        try:
            return fn()
        except UndefinedConstantError as exc:
            undefined[symbol] = exc.reason
            return math.nan
        except ZeroDivisionError:
            undefined[symbol] = "division by zero"
            return math.nan

    if dexc != 0.0:
        gamma2 = (p - 1.0) / dexc
        mu = 1.0 - (p - 1.0) * (1.0 - 1.0 / gamma2)
    else:
        gamma2 = math.nan
        mu = math.nan
        undefined["gamma2"] = "critical diffusion: m2 + k2(p-2) = 1"
        undefined["mu"] = "critical diffusion: m2 + k2(p-2) = 1"
        degeneracies.add("critical-diffusion")

    if p > n + n1:
        s = p * (N - n) / (p - n - n1)
        phi_case = "power"
    else:
        s = math.nan
        undefined["s"] = "p = n+n1: logarithmic space map, s undefined"
        phi_case = "log"
        degeneracies.add("p=n+n1")

    l4 = pp.epsilon * (1.0 - q)
    if l == -1.0:
        degeneracies.add("l=-1")
        l3 = math.nan
        undefined["l3"] = "l = -1: l3 = l4/(1+l) divides by zero"
        l7 = math.nan
        undefined["l7"] = "l = -1: l7 divides by zero"
    else:
        l3 = l4 / (1.0 + l)
        l7 = math.nan  # set below once l5 is known

    if beta2 == 1.0:
        degeneracies.add("beta2=1")
        l1 = math.nan
        l2 = math.nan
        undefined["l1"] = "beta2 = 1: exponent 1/(1-beta2) divides by zero"
        undefined["l2"] = "beta2 = 1: exponent 1/(1-beta2) divides by zero"
    else:
        expo = 1.0 / (1.0 - beta2)
        l2 = attempt("l2", lambda: _safe_pow(l4 * (beta2 - 1.0), expo, "l2"))
        if l == -1.0:
            l1 = math.nan
            undefined["l1"] = "l = -1: l3 undefined"
        else:
            l1 = attempt("l1", lambda: _safe_pow(l3 * (beta2 - 1.0), expo, "l1"))

    l5 = (1.0 + l) * dexc
    if l != -1.0:
        l7 = -(l5 + 1.0 - beta2) / (1.0 + l)

    if dexc == 0.0:
        l6 = 1.0  # l1^0 regardless of l1
    elif math.isnan(l1):
        l6 = math.nan
        undefined["l6"] = "l6 = l1^(m2+k2(p-2)-1) with l1 undefined"
    else:
        l6 = attempt("l6", lambda: _safe_pow(l1, dexc, "l6"))

    if l5 == beta2 - 1.0:
        tau_case = "log"
        tau_negated = False
        degeneracies.add("l5=beta2-1")
    else:
        tau_case = "power"
        if beta2 == 1.0:
            tau_negated = False
            undefined["tau"] = "beta2 = 1: power-law rescaled time undefined"
        elif math.isnan(l6):
            tau_negated = False
            undefined["tau"] = "tau coefficient needs l6"
        else:
            coeff = l6 * (1.0 - beta2) / (l5 + 1.0 - beta2)
            tau_negated = coeff < 0.0
            if tau_negated:
                degeneracies.add("tau-negated")

    if l == -1.0:
        vbar_case = "inverse-power" if beta2 == 1.0 else "log"
    else:
        vbar_case = "exp" if beta2 == 1.0 else "power"

    # profile slope constant b; the critical branch replaces gamma2 by
    # gamma1^(p-2) so the growing term of the residual cancels
    if dexc == 0.0:
        b = _safe_pow(gamma1 ** (p - 1.0) * p * k2 ** (p - 2.0), -1.0 / (p - 1.0), "b")
    else:
        b = attempt("b", lambda: _safe_pow(
            gamma1 * gamma2 * p * k2 ** (p - 2.0), -1.0 / (p - 1.0), "b"))

    def compute_A():
        inner = _safe_pow(gamma1 * gamma2, 1.0 - p, "A") * k2 ** (2.0 - p) / p
        return _safe_pow(inner, gamma2 / (p - 1.0), "A")

    if math.isnan(gamma2):
        A = math.nan
        undefined["A"] = "critical diffusion: gamma2 undefined"
    else:
        A = attempt("A", compute_A)

    def compute_gamma3():
        return _safe_pow(b, -p / gamma1, "gamma3") * gamma1 ** (-p) * k2 ** (p - 2.0)

    if math.isnan(b):
        gamma3 = math.nan
        undefined["gamma3"] = "gamma3 needs b"
    else:
        gamma3 = attempt("gamma3", compute_gamma3)

    if math.isnan(s):
        beta2_crit = math.nan
        beta_crit_u = math.nan
        undefined["beta2_crit"] = "p = n+n1: effective dimension undefined"
        undefined["beta_crit_u"] = "p = n+n1: effective dimension undefined"
    else:
        beta2_crit = 1.0 + (1.0 + l) * (m2 + k2 * (p - 2.0) + (p - n1 - N) / (N - n))
        beta_crit_u = q + (1.0 - q) * beta2_crit

    if dexc > 0.0 and not math.isnan(b) and b > 0.0:
        xi_b = (pp.a / b) ** (1.0 / gamma1)
    elif dexc != 0.0 and not math.isnan(gamma2) and gamma2 < 0.0:
        xi_b = math.inf   # fast diffusion: profile positive everywhere
    elif dexc == 0.0:
        xi_b = math.inf   # exponential profile: no finite front
    else:
        xi_b = math.nan
        undefined["xi_b"] = "front coordinate needs b > 0 and gamma2 > 0"

    derived = DerivedConstants(
        raw=pp, m2=m2, k2=k2, beta2=beta2, gamma1=gamma1, gamma2=gamma2,
        gamma3=gamma3, mu=mu, s=s, l1=l1, l2=l2, l3=l3, l4=l4, l5=l5, l6=l6,
        l7=l7, b=b, A=A, beta2_crit=beta2_crit, beta_crit_u=beta_crit_u,
        xi_b=xi_b, vbar_case=vbar_case, tau_case=tau_case, phi_case=phi_case,
        tau_negated=tau_negated, degeneracies=frozenset(degeneracies),
        undefined=undefined)

    # the selected amplitude branch cannot do without its own constant;
    # regime-specific profile constants (b, A, gamma3) are checked by the
    # operations that consume them
    required = []
    if vbar_case == "power":
        required.append("l1")
    elif vbar_case == "log":
        required.append("l2")
    for sym in required:
        if sym in undefined:
            raise UndefinedConstantError(sym, undefined[sym])
    return derived


def classify(derived):
    """Diffusion regime and solvability side of the critical exponent."""
    dexc = derived.diff_excess
    if dexc > 0.0:
        diffusion = "slow"
    elif dexc == 0.0:
        diffusion = "critical"
    else:
        diffusion = "fast"
    if not math.isnan(derived.beta2_crit) and derived.beta2 >= derived.beta2_crit:
        solvability = "supercritical"
    else:
        solvability = "subcritical"
    return Regime(diffusion, solvability, derived.degeneracies)


def fujita_exponent(derived):
    """Critical source exponent in the transformed and raw variables."""
    derived.require("beta2_crit")
    return derived.beta2_crit, derived.beta_crit_u


def vbar(derived, t):
    """Time amplitude factor of the separable solution."""
    case = derived.vbar_case
    if case == "power":
        derived.require("l1")
        if t <= 0:
            raise DomainError(f"vbar power branch needs t > 0 (t={t:g})")
        return derived.l1 * t ** ((1.0 + derived.raw.l) / (1.0 - derived.beta2))
    if case == "log":
        derived.require("l2")
        if t <= 1.0:
            raise DomainError(f"vbar log branch needs t > 1 (t={t:g})")
        return derived.l2 * math.log(t) ** (1.0 / (1.0 - derived.beta2))
    if case == "exp":
        return math.exp(-derived.l3 * t ** (derived.raw.l + 1.0))
    # inverse-power: beta2 = 1 and l = -1
    if t <= 0:
        raise DomainError(f"vbar inverse-power branch needs t > 0 (t={t:g})")
    return t ** (-derived.l4)


def rescaled_time(derived, t):
    """Rescaled time tau(t) > 0 of the similarity variable.

    On branches where the printed power law is negative for all t the
    value is negated so tau stays strictly positive (flag tau_negated);
    the similarity coordinate only involves tau^(1/p).
    """
    if derived.tau_case == "log":
        derived.require("l6")
        if t <= 1.0:
            raise DomainError(f"tau log branch needs t > 1 (t={t:g})")
        return derived.l6 * math.log(t)
    derived.require("tau", "l6")
    if t <= 0:
        raise DomainError(f"tau power branch needs t > 0 (t={t:g})")
    beta2, l5, l6 = derived.beta2, derived.l5, derived.l6
    coeff = l6 * (1.0 - beta2) / (l5 + 1.0 - beta2)
    value = coeff * t ** (l5 / (1.0 - beta2) + 1.0)
    return -value if derived.tau_negated else value


def time_factors(derived, t):
    """(vbar, tau) at time t; raises DomainError off the admissible domain."""
    return vbar(derived, t), rescaled_time(derived, t)


def space_map(derived, r):
    """Radial coordinate stretch phi(r); monotone increasing."""
    pp = derived.raw
    if derived.phi_case == "log":
        if r <= 0:
            raise DomainError(f"phi log branch needs r > 0 (r={r:g})")
        return math.log(r)
    if r < 0:
        raise DomainError(f"phi needs r >= 0 (r={r:g})")
    e = (pp.p - pp.n - pp.n1) / pp.p
    return pp.p * r ** e / (pp.p - pp.n - pp.n1)


def space_unmap(derived, phi):
    """Inverse of space_map on its range."""
    pp = derived.raw
    if derived.phi_case == "log":
        return math.exp(phi)
    if phi < 0:
        raise DomainError(f"phi >= 0 required (phi={phi:g})")
    c = (pp.p - pp.n - pp.n1) / pp.p
    return (c * phi) ** (1.0 / c)


def similarity_coord(derived, t, r):
    """Self-similar coordinate xi = phi(r) * tau(t)^(-1/p)."""
    tau = rescaled_time(derived, t)
    if tau <= 0:
        raise DomainError(f"tau(t) must be positive (tau={tau:g})")
    return space_map(derived, r) * tau ** (-1.0 / derived.raw.p)
