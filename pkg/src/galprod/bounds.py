"""High-precision evaluation of the explicit GRH-conditional bounds.

All logarithms are natural.  Integer powers such as ell0^(8 g^2) are formed
exactly before conversion to floating point, and every reported value is
computed twice (at the working precision and at twice that) and must agree.
"""
import itertools
from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpf

from .arith import is_prime, radical
from .errors import DegreeMismatch, PrecisionFailure

DEFAULT_DIGITS = 50
REPORT_DIGITS = 15
EC_CONSTANT = "76.59"


@dataclass(frozen=True)
class FieldInvariants:
    abs_disc_dK: int = 1
    degree: int = 1

    def __post_init__(self):
        if int(self.abs_disc_dK) < 1 or int(self.degree) < 1:
            raise ValueError("field discriminant and degree must be positive")


RATIONALS = FieldInvariants(1, 1)


@dataclass(frozen=True)
class BSConstants:
    a_tilde: str = "4"
    b_tilde: str = "2.5"
    c_tilde: str = "5"

    def __post_init__(self):
        for name in ("a_tilde", "b_tilde", "c_tilde"):
            object.__setattr__(self, name, str(getattr(self, name)))
            if mpf(getattr(self, name)) <= 0:
                raise ValueError(f"{name} must be positive")

    def values(self):
        return mpf(self.a_tilde), mpf(self.b_tilde), mpf(self.c_tilde)

    def to_json(self):
        return {"a_tilde": self.a_tilde, "b_tilde": self.b_tilde, "c_tilde": self.c_tilde}


DEFAULT_BS = BSConstants()


@dataclass
class BoundReport:
    formula_id: str
    inputs: dict
    value: str
    value_full: str
    integer_ceiling: int
    precision: int
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "formula_id": self.formula_id,
            "inputs": self.inputs,
            "value": self.value,
            "value_full": self.value_full,
            "integer_ceiling": str(self.integer_ceiling),
            "precision": self.precision,
        }
        out.update(self.extra)
        return out


def _evaluate(fn, digits):
    """Evaluate ``fn()`` (an mpf expression) robustly; return (value, working dps).

    The working precision is ``digits`` plus the number of integer digits of the
    value, so the integer ceiling is exact; a recheck at twice that precision
    must agree to ``digits - 10`` significant digits.
    """
    with mp.workdps(digits):
        rough = fn()
    mag = max(0, int(mpmath.floor(mpmath.log10(abs(rough)))) + 1) if rough else 0
    work = digits + mag
    with mp.workdps(work):
        v1 = fn()
    with mp.workdps(2 * work):
        v2 = fn()
        tol = abs(v2) * mpf(10) ** (-(digits - 10)) if v2 else mpf(10) ** (-(digits - 10))
        if abs(v1 - v2) > tol:
            raise PrecisionFailure("value changed under doubled precision", digits=digits)
    return v2, work


def _report(formula_id, inputs, fn, digits, extra=None):
    v, work = _evaluate(fn, digits)
    with mp.workdps(2 * work):
        ceiling = int(mpmath.ceil(v))
        full = mpmath.nstr(v, work, strip_zeros=False)
        short = mpmath.nstr(v, REPORT_DIGITS, strip_zeros=False)
    return BoundReport(formula_id, inputs, short, full, ceiling, digits, extra or {})


def smallest_prime_coprime_to_2g(g):
    if g < 1:
        raise ValueError("g must be positive")
    p = 2
    while (2 * g) % p == 0 or not is_prime(p):
        p += 1
    return p


def _ell0_power_minus_one(g):
    l0 = smallest_prime_coprime_to_2g(g)
    return l0, l0 ** (8 * g * g) - 1


def _faltings_inner(g, inv, n1, n2, bs):
    """a (log d_K + [K:Q](log rad(2 l0 N1 N2 d_K) + log 2 L^2)) + b + 1 as a thunk."""
    l0, L = _ell0_power_minus_one(g)
    rad = radical(2 * l0 * n1 * n2 * inv.abs_disc_dK)
    twice_l2 = 2 * L * L

    def inner():
        a, b, _ = bs.values()
        return a * (mpmath.log(inv.abs_disc_dK)
                    + inv.degree * (mpmath.log(rad) + mpmath.log(twice_l2))) + b + 1

    return L, rad, inner


def mw20_bound(conductor, digits=DEFAULT_DIGITS):
    """1279.626 log rad(2 N_A) + 8007.988 for a non-CM elliptic curve over Q."""
    n = int(conductor)
    if n < 1:
        raise ValueError("conductor must be positive")
    rad = radical(2 * n)
    return _report("mw20", {"conductor": str(n)},
                   lambda: mpf("1279.626") * mpmath.log(rad) + mpf("8007.988"),
                   digits, {"radical": str(rad)})


def faltings_bound(g, inv, n1, n2, bs=DEFAULT_BS, digits=DEFAULT_DIGITS):
    """Norm bound for a prime separating the traces of two non-isogenous varieties."""
    n1, n2 = int(n1), int(n2)
    if min(g, n1, n2) < 1:
        raise ValueError("inputs must be positive")
    L, rad, inner = _faltings_inner(g, inv, n1, n2, bs)
    L4 = L ** 4
    inputs = {"g": g, "abs_disc_dK": str(inv.abs_disc_dK), "degree": inv.degree,
              "N1": str(n1), "N2": str(n2), "bs": bs.to_json()}
    return _report("faltings", inputs, lambda: 4 * mpf(L4) * inner() ** 2, digits,
                   {"ell0": smallest_prime_coprime_to_2g(g), "radical": str(rad)})


def product_av_bound(g, n, inv, conductors, c_individual, bs=DEFAULT_BS, digits=DEFAULT_DIGITS):
    """Max over ordered pairs i != j of max(8g L^2 (...), c_i); ties go to the first pair."""
    conductors = [int(c) for c in conductors]
    c_individual = [str(c) for c in c_individual]
    if n < 2 or len(conductors) != n or len(c_individual) != n:
        raise ValueError("need n >= 2 conductors and n individual constants")
    pairs = [(i, j) for i, j in itertools.permutations(range(n), 2)]
    pairs.sort()
    terms = {}
    for i, j in pairs:
        L, rad, inner = _faltings_inner(g, inv, conductors[i], conductors[j], bs)
        terms[(i, j)] = (L, rad, inner)

    def candidates():
        out = []
        for i, j in pairs:
            L, _, inner = terms[(i, j)]
            formula = 8 * g * mpf(L * L) * inner()
            ci = mpf(c_individual[i])
            out.append(((i, j), formula if formula >= ci else ci, formula >= ci))
        return out

    def best():
        top = None
        for pair, val, _ in candidates():
            if top is None or val > top[1]:
                top = (pair, val)
        return top

    with mp.workdps(digits + 80):
        (bi, bj), _ = best()
        src = next(from_formula for pair, _, from_formula in candidates() if pair == (bi, bj))
    inputs = {"g": g, "n": n, "abs_disc_dK": str(inv.abs_disc_dK), "degree": inv.degree,
              "conductors": [str(c) for c in conductors], "c_individual": c_individual, "bs": bs.to_json()}
    return _report("product-av", inputs, lambda: best()[1], digits,
                   {"argmax_pair": [bi + 1, bj + 1], "argmax_source": "formula" if src else "individual",
                    "ell0": smallest_prime_coprime_to_2g(g)})


def ec_constant_exact():
    """4 log(2 (3^8 - 1)^2) + 3.5, the unrounded additive constant for g = 1 over Q."""
    L = 3 ** 8 - 1
    return 4 * mpmath.log(2 * L * L) + mpf("3.5")


def product_ec_bound(conductors, constant=EC_CONSTANT, digits=DEFAULT_DIGITS):
    """Max over pairs of 8 (3^8 - 1)^2 (4 log rad(6 N_i N_j) + constant).

    ``constant`` is a decimal string (default 76.59) or ``"exact"`` for
    :func:`ec_constant_exact`.
    """
    conductors = [int(c) for c in conductors]
    if len(conductors) < 2:
        raise ValueError("need at least two conductors")
    L2 = (3 ** 8 - 1) ** 2
    pairs = sorted(itertools.permutations(range(len(conductors)), 2))
    rads = {(i, j): radical(6 * conductors[i] * conductors[j]) for i, j in pairs}

    def const():
        return ec_constant_exact() if constant == "exact" else mpf(constant)

    def best():
        top = None
        for pair in pairs:
            val = 8 * L2 * (4 * mpmath.log(rads[pair]) + const())
            if top is None or val > top[1]:
                top = (pair, val)
        return top

    with mp.workdps(digits):
        bi, bj = best()[0]
    inputs = {"conductors": [str(c) for c in conductors], "constant": constant}
    return _report("product-ec", inputs, lambda: best()[1], digits,
                   {"argmax_pair": [bi + 1, bj + 1], "radical": str(rads[(bi, bj)])})


def bach_sorenson(log_dL, degree_LK, bs=DEFAULT_BS):
    """(a log d_L + b [L:K] + c)^2 at the current mpmath precision."""
    log_dL = mpf(log_dL)
    if log_dL < 0:
        raise ValueError("log d_L must be nonnegative")
    a, b, c = bs.values()
    return (a * log_dL + b * int(degree_LK) + c) ** 2


def log_disc_upper(inv_K, degree_LK, degree_LQ, rad_disc_LK):
    """Upper bound for log d_L of a Galois extension L/K."""
    if degree_LQ != degree_LK * inv_K.degree:
        raise DegreeMismatch(f"[L:Q]={degree_LQ} != [L:K][K:Q]={degree_LK * inv_K.degree}")
    return (degree_LK * mpmath.log(inv_K.abs_disc_dK)
            + (degree_LQ - inv_K.degree) * mpmath.log(rad_disc_LK)
            + degree_LQ * mpmath.log(degree_LK))


def pair_c_bound(g, B, c1, c2):
    """max(4 g sqrt(B), c1, c2)."""
    B = mpf(B)
    if B < 0:
        raise ValueError("B must be nonnegative")
    return max(4 * g * mpmath.sqrt(B), mpf(c1), mpf(c2))


def bach_sorenson_report(log_dL, degree_LK, bs=DEFAULT_BS, digits=DEFAULT_DIGITS):
    return _report("bach-sorenson", {"log_dL": str(log_dL), "degree_LK": degree_LK, "bs": bs.to_json()},
                   lambda: bach_sorenson(str(log_dL), degree_LK, bs), digits)


def log_disc_report(inv_K, degree_LK, degree_LQ, rad_disc_LK, digits=DEFAULT_DIGITS):
    inputs = {"abs_disc_dK": str(inv_K.abs_disc_dK), "degree": inv_K.degree, "degree_LK": degree_LK,
              "degree_LQ": degree_LQ, "rad_disc_LK": str(rad_disc_LK)}
    return _report("log-disc", inputs, lambda: log_disc_upper(inv_K, degree_LK, degree_LQ, rad_disc_LK), digits)


def pair_report(g, B, c1, c2, digits=DEFAULT_DIGITS):
    inputs = {"g": g, "B": str(B), "c1": str(c1), "c2": str(c2)}
    return _report("pair", inputs, lambda: pair_c_bound(g, str(B), str(c1), str(c2)), digits)
