"""Frobenius-trace sieve for the mod-ell image of a product of elliptic curves.

For each pair of curves, a prime ell >= 5 is certified surjective by a good
prime p != ell with a_p(E_i) not congruent to +-a_p(E_j) mod ell; ell in
{2, 3} is certified by a distinguished pair of torsion dimensions.  Products
of n > 2 curves are handled pairwise.  Curves are numbered from 1 in reports.
"""
import itertools
from dataclasses import dataclass, field
from math import gcd

from .arith import prime_divisors, primes_upto
from .curves import GOOD, bad_primes, torsion_dims, trace_of_frobenius
from .errors import NoGoodPrimes, SchemaError
from .matgroup import smallprimes_criterion, trace_criterion

PROVED = "ProvedSurjective"
INHERITED = "InheritedNonsurjective"
CANDIDATE = "CandidateCongruence"

DEFAULT_PMAX = 1000
DEFAULT_ELL_CEILING = 1000


@dataclass(frozen=True)
class Verdict:
    tag: str
    witness: int = None
    inherited_from: tuple = None
    evidence: int = None

    def to_json(self):
        out = {"tag": self.tag}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.inherited_from is not None:
            out["from"] = list(self.inherited_from)
        if self.evidence is not None:
            out["evidence"] = self.evidence
        return out


@dataclass
class PairVerdict:
    i: int
    j: int
    per_ell: dict
    residual_gcd: int
    scanned: int
    traces: dict = field(default_factory=dict, repr=False)

    def to_json(self):
        return {
            "i": self.i,
            "j": self.j,
            "residual_gcd": str(self.residual_gcd),
            "scanned_primes": self.scanned,
            "verdicts": {str(ell): v.to_json() for ell, v in sorted(self.per_ell.items())},
        }


@dataclass
class SieveInput:
    curves: list
    nonsurjective_sets: list
    pmax: int = DEFAULT_PMAX
    ell_ceiling: int = DEFAULT_ELL_CEILING

    def __post_init__(self):
        if len(self.curves) < 2:
            raise SchemaError("the sieve needs at least two curves")
        if len(self.curves) != len(self.nonsurjective_sets):
            raise SchemaError("one nonsurjective prime set is needed per curve")
        labels = [c.label for c in self.curves if c.label is not None]
        if len(labels) != len(set(labels)):
            raise SchemaError("curve labels must be distinct")
        self.nonsurjective_sets = [frozenset(int(x) for x in s) for s in self.nonsurjective_sets]


@dataclass
class SieveReport:
    pair_verdicts: list
    product_set: list
    parameters: dict
    closing_statement: str

    @property
    def product_primes(self):
        return [e["ell"] for e in self.product_set]

    def to_json(self):
        return {
            "parameters": self.parameters,
            "pairs": [pv.to_json() for pv in self.pair_verdicts],
            "product_set": self.product_set,
            "closing_statement": self.closing_statement,
        }


def _usable_primes(ei, ej, pmax):
    bi = set(bad_primes(ei))
    bj = set(bad_primes(ej))
    return [p for p in primes_upto(pmax) if p > 3 and p not in bi and p not in bj], bi, bj


def sieve_pair(ei, ej, si, sj, pmax, ell_ceiling=DEFAULT_ELL_CEILING, i=1, j=2):
    """Verdict for every prime ell up to max(ell_ceiling, pmax) and every ell | residual_gcd."""
    if pmax < 5:
        raise ValueError("pmax must be at least 5")
    si, sj = frozenset(si), frozenset(sj)
    usable, bi, bj = _usable_primes(ei, ej, pmax)
    if not usable:
        raise NoGoodPrimes(f"no prime 3 < p <= {pmax} is good for both curves", pmax=pmax)
    traces = {}
    resid = 0
    for p in usable:
        a = trace_of_frobenius(ei, p, bi).a_p
        b = trace_of_frobenius(ej, p, bj).a_p
        traces[p] = (a, b)
        resid = gcd(resid, (a - b) * (a + b))
    ells = set(primes_upto(max(ell_ceiling, pmax))) | si | sj
    if resid:
        ells |= set(prime_divisors(resid))
    dims = {}

    def dims_at(p):
        if p not in dims:
            dims[p] = (torsion_dims(ei, p, bi), torsion_dims(ej, p, bj))
        return dims[p]

    per_ell = {}
    for ell in sorted(ells):
        owners = tuple(k for k, s in ((i, si), (j, sj)) if ell in s)
        if owners:
            per_ell[ell] = Verdict(INHERITED, inherited_from=owners)
            continue
        witness = None
        scanned = 0
        if ell in (2, 3):
            for p in usable:
                scanned += 1
                ti, tj = dims_at(p)
                d1, d2 = (ti.dim2, tj.dim2) if ell == 2 else (ti.dim3, tj.dim3)
                if smallprimes_criterion(d1, d2, ell):
                    witness = p
                    break
        else:
            for p in usable:
                if p == ell:
                    continue
                scanned += 1
                a, b = traces[p]
                if trace_criterion(a, b, ell):
                    witness = p
                    break
        if witness is not None:
            per_ell[ell] = Verdict(PROVED, witness=witness)
        else:
            per_ell[ell] = Verdict(CANDIDATE, evidence=scanned)
    return PairVerdict(i, j, per_ell, resid, len(usable), traces)


def sieve_product(inp):
    """Run :func:`sieve_pair` on every unordered pair and assemble the product set."""
    pairs = []
    for a, b in itertools.combinations(range(len(inp.curves)), 2):
        pairs.append(sieve_pair(inp.curves[a], inp.curves[b], inp.nonsurjective_sets[a],
                                inp.nonsurjective_sets[b], inp.pmax, inp.ell_ceiling, i=a + 1, j=b + 1))
    union = set().union(*inp.nonsurjective_sets)
    candidates = {}
    for pv in pairs:
        for ell, v in pv.per_ell.items():
            if v.tag == CANDIDATE:
                candidates.setdefault(ell, []).append([pv.i, pv.j])
    product = []
    for ell in sorted(union | set(candidates)):
        if ell in union:
            owners = [k + 1 for k, s in enumerate(inp.nonsurjective_sets) if ell in s]
            entry = {"ell": ell, "tag": INHERITED, "from": owners}
        else:
            entry = {"ell": ell, "tag": CANDIDATE, "pairs": candidates[ell]}
        product.append(entry)
    ceiling = max(inp.ell_ceiling, inp.pmax)
    params = {
        "n": len(inp.curves),
        "curves": [c.to_json() for c in inp.curves],
        "nonsurjective_sets": [sorted(s) for s in inp.nonsurjective_sets],
        "pmax": inp.pmax,
        "ell_ceiling": ceiling,
    }
    return SieveReport(pairs, product, params, _closing_statement(pairs, ceiling, len(inp.curves)))


def _closing_statement(pairs, ceiling, n):
    parts = []
    for pv in pairs:
        if pv.residual_gcd == 0:
            parts.append(f"pair ({pv.i},{pv.j}): a_p(E_{pv.i})^2 = a_p(E_{pv.j})^2 at every scanned prime, "
                         f"so no prime ell > {ceiling} is certified")
        else:
            parts.append(f"pair ({pv.i},{pv.j}): every prime ell > {ceiling} outside the nonsurjective sets "
                         f"is ProvedSurjective, since it does not divide residual_gcd = {pv.residual_gcd}")
    text = "; ".join(parts) + "."
    if n > 2:
        text += (" The pairwise reduction is only valid for ell >= 5; for n > 2 the verdicts at ell = 2, 3 "
                 "are pairwise statements.")
    return text
