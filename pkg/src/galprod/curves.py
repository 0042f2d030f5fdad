"""Elliptic curves over Q: Weierstrass models, Frobenius traces, small torsion."""
import json
from dataclasses import dataclass

from . import _kernels
from .arith import is_prime, prime_divisors, primes_upto
from .errors import BadPrime, InternalInconsistency, SchemaError, SingularCurve

GOOD = "Good"
BAD = "Bad"
SKIPPED = "Skipped"


@dataclass(frozen=True)
class CurveModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    conductor: int = None
    label: str = None

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.conductor is not None:
            c = int(self.conductor)
            if c < 1:
                raise SchemaError(f"conductor must be positive, got {c}")
            object.__setattr__(self, "conductor", c)
        if self.discriminant == 0:
            raise SingularCurve("discriminant is zero", ainvs=[str(a) for a in self.ainvs])

    @classmethod
    def from_ainvs(cls, ainvs, conductor=None, label=None):
        if len(ainvs) != 5:
            raise SchemaError(f"expected 5 a-invariants, got {len(ainvs)}")
        return cls(*(int(a) for a in ainvs), conductor=conductor, label=label)

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c4(self):
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def c6(self):
        b2, b4, b6, _ = self.b_invariants
        return -b2 ** 3 + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def short_form(self, p):
        """(A, B) mod p with y^2 = x^3 + A x + B isomorphic to the model over F_p, p > 3."""
        return (-27 * self.c4) % p, (-54 * self.c6) % p

    def to_json(self):
        out = {"ainvs": [str(a) for a in self.ainvs]}
        if self.label is not None:
            out["label"] = self.label
        if self.conductor is not None:
            out["conductor"] = str(self.conductor)
        return out

    @classmethod
    def from_json(cls, obj):
        """Parse ``{label?, ainvs: [5 decimal strings], conductor?: decimal string}``."""
        if not isinstance(obj, dict) or "ainvs" not in obj:
            raise SchemaError("curve object needs an 'ainvs' list")
        try:
            ainvs = [int(str(a)) for a in obj["ainvs"]]
            conductor = obj.get("conductor")
            conductor = int(str(conductor)) if conductor is not None else None
        except ValueError as exc:
            raise SchemaError(f"bad integer in curve object: {exc}") from None
        label = obj.get("label")
        return cls.from_ainvs(ainvs, conductor=conductor, label=label)


def load_curve(path):
    with open(path) as fh:
        return CurveModel.from_json(json.load(fh))


def bad_primes(curve):
    """Primes dividing the conductor, or the model discriminant when no conductor is known.

    Without a conductor the result may include primes of good reduction for a
    non-minimal model.
    """
    n = curve.conductor if curve.conductor is not None else curve.discriminant
    if abs(n) == 1:
        return []
    return prime_divisors(n)


@dataclass(frozen=True)
class TraceRecord:
    p: int
    a_p: int
    status: str

    def to_json(self):
        return {"p": self.p, "ap": self.a_p, "status": self.status}


def _status(curve, p, bad=None):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if bad is None:
        bad = bad_primes(curve)
    if p in bad:
        return BAD
    if p <= 3:
        return SKIPPED
    return GOOD


def trace_of_frobenius(curve, p, bad=None):
    """a_p = -sum_x chi_p(x^3 + A x + B) for good p > 3.

    Bad primes are reported as ``Bad`` and p in {2, 3} as ``Skipped``; in both
    cases ``a_p`` is 0 and carries no information.
    """
    status = _status(curve, p, bad)
    if status != GOOD:
        return TraceRecord(p, 0, status)
    A, B = curve.short_form(p)
    return TraceRecord(p, -_kernels.legendre_sum(A, B, p), GOOD)


def trace_table(curve, pmax):
    if pmax < 2:
        raise ValueError("pmax must be at least 2")
    bad = bad_primes(curve)
    return [trace_of_frobenius(curve, p, bad) for p in primes_upto(pmax)]


@dataclass(frozen=True)
class TorsionDims:
    p: int
    dim2: int
    dim3: int

    def to_json(self):
        return {"p": self.p, "dim2": self.dim2, "dim3": self.dim3}


def torsion_dims(curve, p, bad=None):
    """Dimensions of E(F_p)[2] and E(F_p)[3] over F_2 and F_3."""
    if p <= 3 or _status(curve, p, bad) != GOOD:
        raise BadPrime(f"torsion dims need a good prime p > 3, got {p}", p=p)
    A, B = curve.short_form(p)
    r2, r3 = _kernels.torsion_counts(A, B, p)
    n2 = 1 + r2
    n3 = 1 + 2 * r3
    dims2 = {1: 0, 2: 1, 4: 2}
    dims3 = {1: 0, 3: 1, 9: 2}
    if n2 not in dims2 or n3 not in dims3:
        raise InternalInconsistency(f"torsion counts {n2}, {n3} at p={p} are not prime powers", p=p)
    return TorsionDims(p, dims2[n2], dims3[n3])
