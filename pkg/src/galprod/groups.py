"""Explicitly enumerated finite groups and the exhaustive verification harnesses.

A :class:`FiniteGroupTable` stores its elements as tuples of indices into one
or more copies of a *factor* group with a dense multiplication table.  A plain
group is the one-factor case; the fiber products Delta_{2g,n}(F_ell) are the
n-factor case over GSp_2g(F_ell).  Multiplication is factor-wise table lookup
followed by a position lookup, which is what the compiled closure kernel does.
"""
import itertools
import json
import random
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .arith import totient
from .errors import (BadEll, BudgetExceeded, ClassificationContradiction,
                     NotSurjectiveProjection)
from .matgroup import (SMALLPRIME_PAIRS, admissible_radial_exponents, as_modulus,
                       char_poly, conjugate, dim_one, gsp_generators, gsp_new,
                       gsp_order, identity, mat_mul, radial_automorphism, random_gsp)

DENSE_TABLE_LIMIT = 4096
DELTA_BUDGET = 10 ** 6
SUBGROUP_BUDGET = 2000
POSITION_LIMIT = 5 * 10 ** 7


class FiniteGroupTable:
    """An enumerated finite group with index-based multiplication."""

    def __init__(self, table, elem_factors, pos, forms, factor=None, name=""):
        self.table = np.ascontiguousarray(table, dtype=np.int32)
        self.elem_factors = np.ascontiguousarray(elem_factors, dtype=np.int32)
        self.pos = np.ascontiguousarray(pos, dtype=np.int32)
        self._forms = forms
        self.factor = factor
        self.name = name
        m = self.table.shape[0]
        # identity: the factor index e with e*x = x for all x
        ids = [e for e in range(m) if np.array_equal(self.table[e], np.arange(m))]
        if len(ids) != 1:
            raise ValueError("factor table has no unique identity")
        self.factor_id = ids[0]
        self.id_index = int(self.pos[self._flat([self.factor_id] * self.nfactors)])
        self.factor_inv = np.argmax(self.table == self.factor_id, axis=1).astype(np.int32)
        flats = self._flat_many(self.factor_inv[self.elem_factors])
        self.inv_table = self.pos[flats]

    # -- basic structure --------------------------------------------------------

    @property
    def order(self):
        return int(self.elem_factors.shape[0])

    @property
    def nfactors(self):
        return int(self.elem_factors.shape[1])

    @property
    def factor_order(self):
        return int(self.table.shape[0])

    def __len__(self):
        return self.order

    def _flat(self, idx):
        flat = 0
        for i in idx:
            flat = flat * self.factor_order + int(i)
        return flat

    def _flat_many(self, arr):
        flat = np.zeros(arr.shape[0], dtype=np.int64)
        for f in range(arr.shape[1]):
            flat = flat * self.factor_order + arr[:, f]
        return flat

    @property
    def elements(self):
        """Canonical forms in index order (sorted lexicographically)."""
        if self.nfactors == 1:
            return list(self._forms)
        fforms = self._forms
        return [tuple(fforms[i] for i in row) for row in self.elem_factors.tolist()]

    def element(self, i):
        if self.nfactors == 1:
            return self._forms[i]
        return tuple(self._forms[j] for j in self.elem_factors[i])

    def factor_form(self, j):
        return self._forms[j]

    def index_of_factors(self, idx):
        k = int(self.pos[self._flat(idx)])
        if k < 0:
            raise KeyError(idx)
        return k

    def mul(self, i, j):
        ei = self.elem_factors[i]
        ej = self.elem_factors[j]
        return int(self.pos[self._flat(self.table[ei, ej])])

    def mul_many(self, a, b):
        """Vectorized product of index arrays a and b."""
        prod = self.table[self.elem_factors[a], self.elem_factors[b]]
        return self.pos[self._flat_many(prod)]

    def inv(self, i):
        return int(self.inv_table[i])

    def check_axioms(self, full=False, samples=2000):
        """Verify closure, identity and inverses for every element.

        Associativity is spot-checked on a deterministic sample of triples, or on
        all triples when ``full`` is set.
        """
        n = self.order
        allidx = np.arange(n)
        if (self.pos[self._flat_many(self.elem_factors)] != allidx).any():
            raise ValueError("position map inconsistent with element list")
        if (self.mul_many(np.full(n, self.id_index), allidx) != allidx).any():
            raise ValueError("identity fails")
        if (self.mul_many(allidx, self.inv_table) != self.id_index).any():
            raise ValueError("inverse fails")
        if full:
            triples = np.array(list(itertools.product(range(n), repeat=3)), dtype=np.int64)
        else:
            rng = np.random.default_rng(0)
            triples = rng.integers(0, n, size=(samples, 3))
        a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
        if (self.mul_many(self.mul_many(a, b), c) != self.mul_many(a, self.mul_many(b, c))).any():
            raise ValueError("associativity fails")
        return True


# -- constructors ------------------------------------------------------------

def group_from_elements(elements, op, name=""):
    """Dense table group from hashable, orderable elements and a binary op."""
    forms = sorted(set(elements))
    if len(forms) > DENSE_TABLE_LIMIT:
        raise BudgetExceeded(f"{len(forms)} elements exceed the dense-table limit", order=len(forms))
    index = {x: i for i, x in enumerate(forms)}
    n = len(forms)
    table = np.empty((n, n), dtype=np.int32)
    for i, x in enumerate(forms):
        for j, y in enumerate(forms):
            z = op(x, y)
            if z not in index:
                raise ValueError(f"not closed: {x} * {y} = {z}")
            table[i, j] = index[z]
    return FiniteGroupTable(table, np.arange(n, dtype=np.int32)[:, None], np.arange(n, dtype=np.int32), forms, name=name)


def cyclic_group(n):
    return group_from_elements(range(n), lambda a, b: (a + b) % n, name=f"C{n}")


def _matrix_table(mats, ell):
    """Dense table for sorted distinct matrices given as an (N, d, d) array."""
    n, d, _ = mats.shape
    weights = ell ** np.arange(d * d - 1, -1, -1, dtype=np.int64)
    codes = mats.reshape(n, d * d).astype(np.int64) @ weights
    if (np.diff(codes) <= 0).any():
        raise ValueError("matrices must be sorted and distinct")
    table = np.empty((n, n), dtype=np.int32)
    chunk = max(1, 2_000_000 // max(n * d * d, 1))
    m64 = mats.astype(np.int64)
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        prod = np.einsum("aij,bjk->abik", m64[start:stop], m64) % ell
        pc = prod.reshape(stop - start, n, d * d) @ weights
        found = np.searchsorted(codes, pc)
        if (found >= n).any() or (codes[np.minimum(found, n - 1)] != pc).any():
            raise ValueError("matrix set is not closed under multiplication")
        table[start:stop] = found
    return table


def _gsp_matrices(g, ell):
    n = 2 * g
    if g == 1:
        grid = np.array(list(itertools.product(range(ell), repeat=4)), dtype=np.int64)
        dets = (grid[:, 0] * grid[:, 3] - grid[:, 1] * grid[:, 2]) % ell
        return grid[dets != 0]
    # g >= 2: breadth-first closure of the standard generators
    gens = [x.entries for x in gsp_generators(g, ell)]
    start = identity(n)
    seen = {start}
    queue = [start]
    while queue:
        nxt = []
        for x in queue:
            for s in gens:
                y = mat_mul(x, s, n, ell)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        queue = nxt
    return np.array(sorted(seen), dtype=np.int64)


def build_gsp_group(g, modulus, budget=DENSE_TABLE_LIMIT):
    """GSp_2g(F_ell) as a dense-table group, elements sorted by row-major entries."""
    ell = as_modulus(modulus).ell
    expected = gsp_order(g, ell)
    if expected > budget:
        raise BudgetExceeded(f"|GSp_{2 * g}(F_{ell})| = {expected} exceeds budget {budget}", order=expected)
    flat = _gsp_matrices(g, ell)
    flat = flat[np.lexsort(flat.T[::-1])]
    n = 2 * g
    table = _matrix_table(flat.reshape(-1, n, n), ell)
    forms = [tuple(int(v) for v in row) for row in flat]
    grp = FiniteGroupTable(table, np.arange(len(forms), dtype=np.int32)[:, None],
                           np.arange(len(forms), dtype=np.int32), forms, name=f"GSp{n}(F{ell})")
    grp.g = g
    grp.ell = ell
    grp.mults = np.array([gsp_new(n, f, ell).mult for f in forms], dtype=np.int64)
    return grp


def delta_order(g, n, ell):
    return gsp_order(g, ell) ** n // (ell - 1) ** (n - 1)


def build_delta_group(g, n, modulus, budget=DELTA_BUDGET):
    """The n-fold fiber product of GSp_2g(F_ell) over the multiplier."""
    ell = as_modulus(modulus).ell
    estimate = delta_order(g, n, ell)
    if estimate > budget:
        raise BudgetExceeded(f"|Delta_{2 * g},{n}(F_{ell})| = {estimate} exceeds budget {budget}", order=estimate)
    factor = build_gsp_group(g, ell)
    m = factor.order
    if m ** n > POSITION_LIMIT:
        raise BudgetExceeded(f"position map of size {m ** n} exceeds limit", order=estimate)
    rows = []
    for i0 in range(m):
        same = np.flatnonzero(factor.mults == factor.mults[i0])
        rest = np.array(list(itertools.product(same, repeat=n - 1)), dtype=np.int32).reshape(-1, n - 1)
        rows.append(np.hstack([np.full((rest.shape[0], 1), i0, dtype=np.int32), rest]))
    elem_factors = np.vstack(rows)
    order = np.lexsort(elem_factors.T[::-1])
    elem_factors = elem_factors[order]
    pos = np.full(m ** n, -1, dtype=np.int32)
    flat = np.zeros(elem_factors.shape[0], dtype=np.int64)
    for f in range(n):
        flat = flat * m + elem_factors[:, f]
    pos[flat] = np.arange(elem_factors.shape[0], dtype=np.int32)
    grp = FiniteGroupTable(factor.table, elem_factors, pos, factor._forms, factor=factor,
                           name=f"Delta{2 * g},{n}(F{ell})")
    grp.g = g
    grp.ell = ell
    return grp


# -- subgroups ---------------------------------------------------------------

@dataclass(eq=False)
class SubgroupHandle:
    parent: FiniteGroupTable
    members: np.ndarray
    generators: list = field(default_factory=list)

    @property
    def order(self):
        return int(self.members.shape[0])

    @property
    def key(self):
        return self.members.tobytes()

    def __contains__(self, i):
        k = np.searchsorted(self.members, i)
        return k < self.order and self.members[k] == i

    def mask(self):
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        return m

    def elements(self):
        return [self.parent.element(int(i)) for i in self.members]


def closure(parent, generators):
    """Smallest subgroup containing ``generators`` (indices into ``parent``)."""
    gens = [int(x) for x in generators]
    members = _kernels.closure(parent.table, parent.elem_factors, parent.pos, gens, parent.id_index)
    return SubgroupHandle(parent, members, gens)


def generating_set(parent, members):
    """Greedy generating set: scan members in order, keep those not yet generated."""
    gens = []
    current = closure(parent, [])
    target = len(members)
    for x in members:
        if current.order == target:
            break
        if int(x) not in current:
            gens.append(int(x))
            current = closure(parent, gens)
    return gens


def all_subgroups(parent, budget=SUBGROUP_BUDGET):
    """Every subgroup of ``parent`` exactly once, ordered by (order, members).

    Bottom-up cyclic extension: start from all cyclic subgroups, then join each
    newly found subgroup with every cyclic subgroup not already inside it, until
    no new member set appears.  Every subgroup is a join of cyclic subgroups, so
    the search is complete.
    """
    if parent.order > budget:
        raise BudgetExceeded(f"group order {parent.order} exceeds subgroup budget {budget}", order=parent.order)
    found = {}
    for x in range(parent.order):
        h = closure(parent, [x])
        found.setdefault(h.key, h)
    reps = [h.generators[0] for h in found.values() if h.order > 1]
    frontier = list(found.values())
    while frontier:
        fresh = []
        for h in frontier:
            inside = h.mask()
            for x in reps:
                if inside[x]:
                    continue
                k = closure(parent, h.generators + [x])
                if k.key not in found:
                    found[k.key] = k
                    fresh.append(k)
        frontier = fresh
    return sorted(found.values(), key=lambda h: (h.order, h.members.tolist()))


def projection(h, i):
    """Factor indices of pr_i(H), sorted."""
    return np.unique(h.parent.elem_factors[h.members, i])


def projections_surjective(h):
    m = h.parent.factor_order
    return all(len(projection(h, i)) == m for i in range(h.parent.nfactors))


# -- Goursat ------------------------------------------------------------------

@dataclass
class GoursatData:
    kernel1: SubgroupHandle
    kernel2: SubgroupHandle
    quotient_order: int


def _factor_group(parent):
    if parent.factor is None:
        raise ValueError("parent is not a product group")
    return parent.factor


def goursat_decompose(h):
    """Goursat data of a subgroup of a two-factor product with surjective projections."""
    parent = h.parent
    if parent.nfactors != 2:
        raise ValueError("Goursat decomposition needs a two-factor product")
    factor = _factor_group(parent)
    m = factor.order
    pr = [projection(h, 0), projection(h, 1)]
    for i in (0, 1):
        if len(pr[i]) != m:
            raise NotSurjectiveProjection(i + 1)
    ef = parent.elem_factors[h.members]
    e = parent.factor_id
    n1 = np.sort(ef[ef[:, 1] == e, 0])
    n2 = np.sort(ef[ef[:, 0] == e, 1])
    k1 = SubgroupHandle(factor, n1, generating_set(factor, n1))
    k2 = SubgroupHandle(factor, n2, generating_set(factor, n2))
    q1, r1 = divmod(len(pr[0]), k1.order)
    q2, r2 = divmod(len(pr[1]), k2.order)
    if r1 or r2 or q1 != q2:
        raise ClassificationContradiction("Goursat quotient orders disagree", q1=q1, q2=q2)
    if h.order != len(pr[0]) * k2.order:
        raise ClassificationContradiction("|G| != |pr1(G)| * |N2|", order=h.order)
    return GoursatData(k1, k2, q1)


def fiber_product_members(h, data):
    """Rebuild G from its Goursat data: the union of cosets a N1 x b N2 over (a, b) in G."""
    parent = h.parent
    factor = parent.factor
    ef = parent.elem_factors[h.members]
    n1 = data.kernel1.members
    n2 = data.kernel2.members
    covered = np.zeros(factor.order, dtype=bool)
    out = []
    for a, b in ef.tolist():
        if covered[a]:
            continue
        left = factor.table[a, n1]
        covered[left] = True
        right = factor.table[b, n2]
        pairs = np.array(list(itertools.product(left.tolist(), right.tolist())), dtype=np.int64)
        out.append(parent.pos[pairs[:, 0] * factor.order + pairs[:, 1]])
    return np.unique(np.concatenate(out))


# -- classification of subgroups of Delta_2g(F_ell) -----------------------------

GRAPH = "GraphOfAutomorphism"
PM_GRAPH = "ModPlusMinusGraph"
FULL = "FullFiberProduct"


@dataclass
class ClassificationVerdict:
    case_id: str
    witness: dict = None


def _factor_extras(factor):
    """Cached per-factor data: -I index, chi_{(ell-1)/2} map, small generating set."""
    cache = getattr(factor, "_extras", None)
    if cache is not None:
        return cache
    ell = factor.ell
    n = 2 * factor.g
    minus = tuple((-x) % ell for x in identity(n))
    minus_idx = factor._forms.index(minus)
    half = (ell - 1) // 2
    signs = np.array([pow(int(mu), half, ell) for mu in factor.mults])
    chi = np.where(signs == 1, np.arange(factor.order), factor.table[minus_idx]).astype(np.int32)
    gens = generating_set(factor, np.arange(factor.order, dtype=np.int32))
    factor._extras = (minus_idx, chi, gens)
    return factor._extras


def identify_mult_automorphism(factor, phi):
    """Express phi as conj_beta or conj_beta o chi_{(ell-1)/2}.

    ``phi`` is an index array (phi[a] = image of a).  Returns a witness dict or
    None if phi is not of that form.
    """
    minus_idx, chi, gens = _factor_extras(factor)
    T = factor.table
    inv = factor.factor_inv
    betas = np.arange(factor.order)
    allidx = np.arange(factor.order)
    for radial in (False, True):
        src = chi if radial else allidx
        # conj_beta(src[x]) for every beta, on the generators only
        cand = T[T[betas[:, None], src[gens][None, :]], inv[:, None]]
        ok = np.flatnonzero((cand == phi[gens][None, :]).all(axis=1))
        for beta in ok:
            full = T[T[beta, src], inv[beta]]
            if np.array_equal(full, phi):
                return {"beta": int(beta), "beta_matrix": list(factor.factor_form(int(beta))), "radial": radial}
    return None


def classify_delta_subgroup(h):
    """Which of the three cases a subgroup of Delta_2g(F_ell) with surjective projections falls in."""
    parent = h.parent
    factor = _factor_group(parent)
    if parent.ell < 5:
        raise BadEll(f"classification requires ell >= 5, got {parent.ell}", ell=parent.ell)
    data = goursat_decompose(h)
    m = factor.order
    if h.order == m:
        ef = parent.elem_factors[h.members]
        phi = np.empty(m, dtype=np.int32)
        phi[ef[:, 0]] = ef[:, 1]
        if not np.array_equal(factor.mults[phi], factor.mults):
            raise ClassificationContradiction("graph automorphism does not preserve the multiplier")
        found = identify_mult_automorphism(factor, phi)
        if found is None:
            raise ClassificationContradiction("graph automorphism is not inner times {id, chi}")
        return ClassificationVerdict(GRAPH, {"automorphism": phi.tolist(), **found})
    if h.order == 2 * m:
        minus_idx, _, _ = _factor_extras(factor)
        expected = sorted({factor.factor_id, minus_idx})
        if data.kernel1.members.tolist() != expected or data.kernel2.members.tolist() != expected:
            raise ClassificationContradiction("order 2|GSp| but kernels are not {+-I}")
        return ClassificationVerdict(PM_GRAPH, {"quotient_order": data.quotient_order})
    if h.order == parent.order:
        return ClassificationVerdict(FULL, {"quotient_order": data.quotient_order})
    raise ClassificationContradiction(f"subgroup order {h.order} matches no case", order=h.order)


# -- verification reports ----------------------------------------------------

@dataclass
class VerificationReport:
    lemma: str
    parameters: dict
    subgroups_examined: int = 0
    surjective_count: int = 0
    violations: list = field(default_factory=list)
    elapsed_ms: float = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def to_json(self, timing=True):
        return {
            "lemma": self.lemma,
            "parameters": self.parameters,
            "subgroups_examined": self.subgroups_examined,
            "surjective_count": self.surjective_count,
            "violations": self.violations,
            "elapsed_ms": round(self.elapsed_ms, 3) if (timing and self.elapsed_ms is not None) else None,
            "details": self.details,
        }

    def dumps(self, timing=True):
        return json.dumps(self.to_json(timing), sort_keys=True)


def _dim1_pairs(parent):
    factor = parent.factor
    n = 2 * factor.g
    d1 = np.array([dim_one(gsp_new(n, f, factor.ell)) for f in factor._forms], dtype=np.int32)
    return d1[parent.elem_factors[:, 0]], d1[parent.elem_factors[:, 1]]


def verify_smallprimes_lemma(ell, budget=SUBGROUP_BUDGET):
    """Exhaustively check the dim_1 criterion for subgroups of Delta_2(F_ell), ell in {2, 3}."""
    if ell not in SMALLPRIME_PAIRS:
        raise BadEll(f"ell must be 2 or 3, got {ell}", ell=ell)
    t0 = time.perf_counter()
    delta = build_delta_group(1, 2, ell)
    subs = all_subgroups(delta, budget=budget)
    a, b = _dim1_pairs(delta)
    distinguished = np.zeros(delta.order, dtype=bool)
    for d1, d2 in SMALLPRIME_PAIRS[ell]:
        distinguished |= (a == d1) & (b == d2)
    surjective = 0
    full_count = 0
    violations = []
    for h in subs:
        if not projections_surjective(h):
            continue
        surjective += 1
        is_full = h.order == delta.order
        full_count += is_full
        has = bool(distinguished[h.members].any())
        if is_full != has:
            violations.append({"order": h.order, "generators": h.generators, "full": is_full, "distinguished": has})
    report = VerificationReport(
        lemma="smallprimes", parameters={"ell": ell, "g": 1},
        subgroups_examined=len(subs), surjective_count=surjective, violations=violations,
        details={"delta_order": delta.order, "full_count": full_count,
                 "distinguished_elements": int(distinguished.sum()), "backend": _kernels.BACKEND})
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report


def _draw_generators(delta, rng, mode):
    """One generator tuple for the classification sampler.

    ``uniform``: 1-3 indices uniform over Delta.  ``graph``: a random
    multiplier-preserving automorphism sigma (conjugation, optionally composed
    with chi_{(ell-1)/2}) and 1-3 pairs (gamma, sigma(gamma)).  ``signed_graph``:
    as ``graph`` with each partner multiplied by a random sign.  ``diagonal``:
    pairs (gamma, gamma).
    """
    factor = delta.factor
    m = factor.order
    k = rng.randint(1, 3)
    if mode == "uniform":
        return [rng.randrange(delta.order) for _ in range(k)]
    minus_idx, chi, _ = _factor_extras(factor)
    if mode == "diagonal":
        beta, radial = factor.factor_id, False
    else:
        beta, radial = rng.randrange(m), rng.random() < 0.5
    binv = factor.factor_inv[beta]
    out = []
    for _ in range(k):
        x = rng.randrange(m)
        y = chi[x] if radial else x
        y = factor.table[factor.table[beta, y], binv]
        if mode == "signed_graph" and rng.random() < 0.5:
            y = factor.table[minus_idx, y]
        out.append(delta.index_of_factors((x, int(y))))
    return out


def check_graph_witness(h, witness):
    """Re-check a graph-case witness with matrix arithmetic instead of the table.

    Every generator (x, y) must satisfy y = beta sigma(x) beta^-1 with sigma the
    identity or chi_{(ell-1)/2}, and every member must have equal multipliers in
    both coordinates.  Returns None on success, else a description.
    """
    parent = h.parent
    factor = parent.factor
    ell = factor.ell
    n = 2 * factor.g
    beta = gsp_new(n, witness["beta_matrix"], ell)
    for gen in h.generators:
        x, y = (gsp_new(n, f, ell) for f in parent.element(gen))
        image = radial_automorphism(x, (ell - 1) // 2) if witness["radial"] else x
        if conjugate(beta, image).entries != y.entries:
            return f"witness fails on generator {gen}"
    ef = parent.elem_factors[h.members]
    if not np.array_equal(factor.mults[ef[:, 0]], factor.mults[ef[:, 1]]):
        return "witness graph does not preserve the multiplier"
    return None


PROPCLASS_MODES = ("uniform", "graph", "signed_graph")


def verify_propclass_sampling(ell=5, trials=200, seed=1, mode="mixed", target=None, max_trials=None):
    """Classify seeded random subgroups of Delta_2(F_ell) with surjective projections.

    Each trial draws a mode (when ``mode='mixed'``) and a generator tuple from a
    ``random.Random(seed)`` stream, takes the closure, discards it unless both
    projections are onto GL_2(F_ell), and classifies it.  With ``target`` set,
    trials continue until that many surjective subgroups are classified
    (capped by ``max_trials``, default 20 * target).
    """
    t0 = time.perf_counter()
    ell = as_modulus(ell).ell
    if ell < 5:
        raise BadEll(f"ell must be >= 5, got {ell}", ell=ell)
    rng = random.Random(seed)
    counts = {GRAPH: 0, PM_GRAPH: 0, FULL: 0}
    violations = []
    examined = surjective = witnessed = 0
    if trials == 0 and target is None:
        report = VerificationReport("propclass", {"ell": ell, "g": 1, "trials": 0, "seed": seed, "mode": mode},
                                    details={"cases": counts})
        report.elapsed_ms = (time.perf_counter() - t0) * 1000
        return report
    delta = build_delta_group(1, 2, ell)
    limit = trials if target is None else (max_trials or 20 * target)
    while examined < limit and (target is None or surjective < target):
        draw_mode = rng.choice(PROPCLASS_MODES) if mode == "mixed" else mode
        gens = _draw_generators(delta, rng, draw_mode)
        h = closure(delta, gens)
        examined += 1
        if not projections_surjective(h):
            continue
        surjective += 1
        try:
            verdict = classify_delta_subgroup(h)
        except ClassificationContradiction as exc:
            violations.append({"generators": gens, "order": h.order, "error": str(exc)})
            continue
        if verdict.case_id == GRAPH:
            problem = check_graph_witness(h, verdict.witness)
            if problem:
                violations.append({"generators": gens, "order": h.order, "error": problem})
                continue
            witnessed += 1
        counts[verdict.case_id] += 1
    params = {"ell": ell, "g": 1, "trials": trials, "seed": seed, "mode": mode}
    if target is not None:
        params["target"] = target
    report = VerificationReport("propclass", params, subgroups_examined=examined,
                                surjective_count=surjective, violations=violations,
                                details={"cases": counts, "graph_witnesses_checked": witnessed,
                                         "backend": _kernels.BACKEND})
    if target is not None and surjective < target:
        report.violations.append({"error": f"only {surjective} surjective subgroups in {examined} trials"})
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report


def verify_order_delta(ells=(3, 5)):
    """Check |Delta_2(F_ell)| (ell - 1) = |GL_2(F_ell)|^2 by enumeration."""
    t0 = time.perf_counter()
    rows = []
    violations = []
    for ell in ells:
        delta = build_delta_group(1, 2, ell)
        gl = delta.factor.order
        ok = delta.order * (ell - 1) == gl * gl
        rows.append({"ell": ell, "delta_order": delta.order, "gl2_order": gl, "holds": ok})
        if not ok:
            violations.append(rows[-1])
    report = VerificationReport("orderdelta", {"ells": list(ells), "g": 1}, violations=violations,
                                details={"rows": rows})
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report


def verify_ordrad(ells=(5, 7, 11, 13)):
    """Check #{admissible radial exponents} = 2 phi(ell - 1)."""
    t0 = time.perf_counter()
    rows = []
    violations = []
    for ell in ells:
        count = len(admissible_radial_exponents(ell))
        expected = 2 * totient(ell - 1)
        rows.append({"ell": ell, "count": count, "two_phi": expected, "holds": count == expected})
        if count != expected:
            violations.append(rows[-1])
    report = VerificationReport("ordrad", {"ells": list(ells)}, violations=violations, details={"rows": rows})
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report


def verify_autmult_charpoly(ell, g, samples=1000, seed=1):
    """P_{sigma(gamma)} lies in {P_gamma(t), P_gamma(-t)} for sigma in Inn x {id, chi_{(ell-1)/2}}."""
    t0 = time.perf_counter()
    mod = as_modulus(ell)
    if mod.ell < 5:
        raise BadEll(f"ell must be >= 5, got {ell}", ell=ell)
    rng = random.Random(seed)
    half = (mod.ell - 1) // 2
    violations = []
    flips = 0
    for _ in range(samples):
        gamma = random_gsp(g, mod, rng)
        beta = random_gsp(g, mod, rng)
        radial = rng.random() < 0.5
        image = radial_automorphism(gamma, half) if radial else gamma
        image = conjugate(beta, image)
        p, q = char_poly(gamma), char_poly(image)
        if q.coeffs == p.coeffs:
            continue
        if q.coeffs == p.at_negated_variable().coeffs:
            flips += 1
            continue
        violations.append({"gamma": list(gamma.entries), "beta": list(beta.entries), "radial": radial})
    report = VerificationReport("autmult", {"ell": mod.ell, "g": g, "samples": samples, "seed": seed},
                                violations=violations, details={"negated": flips})
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report
