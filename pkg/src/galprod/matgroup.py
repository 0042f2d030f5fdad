"""Matrices over prime fields and the general symplectic similitude group.

Matrices are stored dense and row-major as tuples of residues in ``range(ell)``.
All values are immutable; every function here is pure.
"""
from dataclasses import dataclass
from math import gcd

from .errors import BadEll, BadExponent, BadShape, DegreeMismatch, NotPrime, NotSymplectic

ELL_LIMIT = 1 << 16


def _is_small_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    ell: int

    def __post_init__(self):
        if not isinstance(self.ell, int) or not 2 <= self.ell < ELL_LIMIT:
            raise NotPrime(f"modulus must be an integer in [2, 2^16), got {self.ell!r}", ell=self.ell)
        if not _is_small_prime(self.ell):
            raise NotPrime(f"{self.ell} is not prime", ell=self.ell)

    def __int__(self):
        return self.ell


def as_modulus(modulus):
    return modulus if isinstance(modulus, PrimeModulus) else PrimeModulus(int(modulus))


# --- plain matrix arithmetic on flat row-major tuples -------------------------

def identity(n):
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


def j_matrix(g):
    """The standard form J = [[0, I_g], [-I_g, 0]] with entries as integers."""
    n = 2 * g
    out = [0] * (n * n)
    for i in range(g):
        out[i * n + g + i] = 1
        out[(g + i) * n + i] = -1
    return tuple(out)


def mat_mul(a, b, n, ell):
    out = [0] * (n * n)
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            s = 0
            for k in range(n):
                s += row[k] * b[k * n + j]
            out[i * n + j] = s % ell
    return tuple(out)


def transpose(a, n):
    return tuple(a[j * n + i] for i in range(n) for j in range(n))


def scalar_mul(c, a, ell):
    return tuple(c * x % ell for x in a)


def _row_reduce(a, n, ell):
    """Row echelon form of a copy of ``a``; returns (rows, rank, det)."""
    rows = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    rank = 0
    det = 1
    for col in range(n):
        pivot = None
        for r in range(rank, n):
            if rows[r][col] % ell:
                pivot = r
                break
        if pivot is None:
            det = 0
            continue
        if pivot != rank:
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            det = -det
        pv = rows[rank][col] % ell
        det = det * pv % ell
        inv = pow(pv, -1, ell)
        prow = [x * inv % ell for x in rows[rank]]
        rows[rank] = prow
        for r in range(rank + 1, n):
            f = rows[r][col] % ell
            if f:
                rows[r] = [(x - f * y) % ell for x, y in zip(rows[r], prow)]
        rank += 1
    return rows, rank, det % ell


def rank(a, n, ell):
    return _row_reduce(a, n, ell)[1]


def det(a, n, ell):
    return _row_reduce(a, n, ell)[2]


def inverse(a, n, ell):
    """Gauss-Jordan inverse; raises ValueError on a singular matrix."""
    aug = [list(a[i * n:(i + 1) * n]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] % ell), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = pow(aug[col][col], -1, ell)
        aug[col] = [x * inv % ell for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] % ell:
                f = aug[r][col]
                aug[r] = [(x - f * y) % ell for x, y in zip(aug[r], aug[col])]
    return tuple(x for row in aug for x in row[n:])


# --- GSp elements --------------------------------------------------------------

@dataclass(frozen=True)
class MatGSp:
    dim: int
    entries: tuple
    mult: int
    modulus: PrimeModulus

    @property
    def g(self):
        return self.dim // 2

    @property
    def ell(self):
        return self.modulus.ell

    def rows(self):
        n = self.dim
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def trace(self):
        n = self.dim
        return sum(self.entries[i * n + i] for i in range(n)) % self.ell

    def det(self):
        return det(self.entries, self.dim, self.ell)

    def __matmul__(self, other):
        return gsp_new(self.dim, mat_mul(self.entries, other.entries, self.dim, self.ell), self.modulus)

    def inverse(self):
        return gsp_new(self.dim, inverse(self.entries, self.dim, self.ell), self.modulus)


def similitude_form(entries, dim, ell):
    """Return gamma^t J gamma reduced mod ell."""
    g = dim // 2
    J = tuple(x % ell for x in j_matrix(g))
    return mat_mul(mat_mul(transpose(entries, dim), J, dim, ell), entries, dim, ell)


def gsp_new(dim, entries, modulus):
    """Validate ``entries`` as an element of GSp_dim(F_ell) and attach its multiplier.

    The multiplier is read off the (1, g+1) entry of gamma^t J gamma and then the
    whole identity gamma^t J gamma = mult * J is checked.
    """
    mod = as_modulus(modulus)
    ell = mod.ell
    if not isinstance(dim, int) or dim < 2 or dim % 2:
        raise BadShape(f"dimension must be a positive even integer, got {dim!r}", dim=dim)
    entries = tuple(int(x) % ell for x in entries)
    if len(entries) != dim * dim:
        raise BadShape(f"expected {dim * dim} entries, got {len(entries)}", dim=dim, length=len(entries))
    g = dim // 2
    form = similitude_form(entries, dim, ell)
    m = form[g]
    J = tuple(x % ell for x in j_matrix(g))
    if m == 0 or form != scalar_mul(m, J, ell):
        raise NotSymplectic("matrix does not preserve the symplectic form up to a unit", ell=ell)
    if pow(m, g, ell) != det(entries, dim, ell):
        raise NotSymplectic("multiplier^g differs from the determinant", ell=ell)
    return MatGSp(dim, entries, m, mod)


def gsp_from_rows(rows, modulus):
    return gsp_new(len(rows), [x for row in rows for x in row], modulus)


def gsp_identity(g, modulus):
    return gsp_new(2 * g, identity(2 * g), modulus)


def multiplier(gamma):
    return gamma.mult


def gsp_order(g, ell):
    """|GSp_2g(F_ell)| = (ell - 1) ell^(g^2) prod_{i=1..g} (ell^(2i) - 1)."""
    order = (ell - 1) * ell ** (g * g)
    for i in range(1, g + 1):
        order *= ell ** (2 * i) - 1
    return order


# --- characteristic polynomials ---------------------------------------------

@dataclass(frozen=True)
class CharPoly:
    """Monic polynomial; ``coeffs`` run from the leading 1 down to the constant term."""

    coeffs: tuple
    ell: int

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def at_negated_variable(self):
        """(-1)^deg P(-t), i.e. P(-t) normalized to be monic."""
        n = self.degree
        # coeffs[i] multiplies t^(n - i); under t -> -t and the global (-1)^n
        # it picks up (-1)^i.
        return CharPoly(tuple((c if i % 2 == 0 else -c) % self.ell for i, c in enumerate(self.coeffs)), self.ell)

    def __call__(self, t):
        v = 0
        for c in self.coeffs:
            v = (v * t + c) % self.ell
        return v


def _poly_mul(a, b, ell):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % ell
    return out


def _poly_add(a, b, ell):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = (out[i] + y) % ell
    return out


def _charpoly_leverrier(a, n, ell):
    # coefficient list low -> high
    c = [0] * (n + 1)
    c[n] = 1
    M = (0,) * (n * n)
    I = identity(n)
    for k in range(1, n + 1):
        AM = mat_mul(a, M, n, ell)
        M = tuple((x + c[n - k + 1] * y) % ell for x, y in zip(AM, I))
        AM = mat_mul(a, M, n, ell)
        tr = sum(AM[i * n + i] for i in range(n))
        c[n - k] = -tr * pow(k, -1, ell) % ell
    return tuple(reversed(c))


def _charpoly_cofactor(a, n, ell):
    # det(tI - A) by Laplace expansion along rows, memoized on column subsets.
    # Polynomials are coefficient lists low -> high.
    def entry(i, j):
        p = [(-a[i * n + j]) % ell]
        if i == j:
            p.append(1)
        return p

    memo = {}

    def minor(row, cols):
        if row == n:
            return [1]
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = [0]
        sign_pos = 0
        for j in range(n):
            if cols >> j & 1:
                term = _poly_mul(entry(row, j), minor(row + 1, cols & ~(1 << j)), ell)
                if sign_pos % 2:
                    term = [(-x) % ell for x in term]
                total = _poly_add(total, term, ell)
                sign_pos += 1
        memo[key] = total
        return total

    low_high = minor(0, (1 << n) - 1)
    low_high = low_high + [0] * (n + 1 - len(low_high))
    return tuple(reversed(low_high[:n + 1]))


def char_poly_of(entries, n, ell):
    if ell > n:
        coeffs = _charpoly_leverrier(entries, n, ell)
    else:
        coeffs = _charpoly_cofactor(entries, n, ell)
    return CharPoly(coeffs, ell)


def char_poly(gamma):
    """Characteristic polynomial det(tI - gamma) over F_ell."""
    return char_poly_of(gamma.entries, gamma.dim, gamma.ell)


def dim_one(gamma):
    """dim ker(gamma - I) over F_ell."""
    n = gamma.dim
    ell = gamma.ell
    shifted = tuple((x - (1 if i % (n + 1) == 0 else 0)) % ell for i, x in enumerate(gamma.entries))
    return n - rank(shifted, n, ell)


# --- surjectivity criteria ----------------------------------------------------

def trace_criterion(t1, t2, modulus):
    """True iff t1 is neither t2 nor -t2 in F_ell.

    Only meaningful for ell >= 5; the sieve routes ell in {2, 3} to
    :func:`smallprimes_criterion` instead.
    """
    ell = as_modulus(modulus).ell
    t1 %= ell
    t2 %= ell
    return t1 != t2 and t1 != (-t2) % ell


def charpoly_criterion(p1, p2):
    """True iff p1 is neither p2(t) nor p2(-t) (normalized monic)."""
    if p1.degree != p2.degree:
        raise DegreeMismatch(f"degrees {p1.degree} and {p2.degree} differ")
    if p1.ell != p2.ell:
        raise DegreeMismatch(f"moduli {p1.ell} and {p2.ell} differ")
    return p1.coeffs != p2.coeffs and p1.coeffs != p2.at_negated_variable().coeffs


SMALLPRIME_PAIRS = {
    2: frozenset({(0, 1), (1, 0), (1, 2), (2, 1)}),
    3: frozenset({(1, 2), (2, 1)}),
}


def smallprimes_criterion(d1, d2, ell):
    """Distinguished dim_1 pairs certifying a full image in Delta_2(F_ell), ell in {2, 3}."""
    if ell not in SMALLPRIME_PAIRS:
        raise BadEll(f"small-prime criterion applies to ell in {{2, 3}}, got {ell}", ell=ell)
    return (d1, d2) in SMALLPRIME_PAIRS[ell]


# --- automorphisms ------------------------------------------------------------

def admissible_radial_exponents(ell):
    """All k with 0 <= k < ell - 1 and gcd(2k + 1, ell - 1) = 1."""
    return [k for k in range(ell - 1) if gcd(2 * k + 1, ell - 1) == 1]


def radial_automorphism(gamma, k):
    """gamma -> mult(gamma)^k * gamma."""
    ell = gamma.ell
    if not (0 <= k < max(ell - 1, 1)) or gcd(2 * k + 1, ell - 1) != 1:
        raise BadExponent(f"k={k} is not an admissible radial exponent mod {ell}", k=k, ell=ell)
    c = pow(gamma.mult, k, ell)
    return MatGSp(gamma.dim, scalar_mul(c, gamma.entries, ell), pow(gamma.mult, 2 * k + 1, ell), gamma.modulus)


def conjugate(beta, gamma):
    """beta gamma beta^-1."""
    n = gamma.dim
    ell = gamma.ell
    binv = inverse(beta.entries, n, ell)
    e = mat_mul(mat_mul(beta.entries, gamma.entries, n, ell), binv, n, ell)
    return MatGSp(n, e, gamma.mult, gamma.modulus)


# --- generators and sampling --------------------------------------------------

def gsp_generators(g, modulus):
    """A generating set of GSp_2g(F_ell).

    Elementary unipotents [[I, S], [0, I]] and [[I, 0], [S, I]] (S symmetric
    elementary) generate Sp_2g; iota(a) = diag(a I_g, I_g) for a generator a of
    F_ell^x supplies every multiplier.
    """
    mod = as_modulus(modulus)
    ell = mod.ell
    n = 2 * g
    gens = []
    for i in range(g):
        for j in range(i, g):
            for lower in (False, True):
                e = list(identity(n))
                r, c = (g + i, j) if lower else (i, g + j)
                e[r * n + c] = 1
                if i != j:
                    r2, c2 = (g + j, i) if lower else (j, g + i)
                    e[r2 * n + c2] = 1
                gens.append(gsp_new(n, e, mod))
    if ell > 2:
        a = _primitive_root(ell)
        e = list(identity(n))
        for i in range(g):
            e[i * n + i] = a
        gens.append(gsp_new(n, e, mod))
    return gens


def _primitive_root(ell):
    if ell == 2:
        return 1
    phi = ell - 1
    fs = [q for q in range(2, phi + 1) if phi % q == 0 and _is_small_prime(q)]
    for a in range(2, ell):
        if all(pow(a, phi // q, ell) != 1 for q in fs):
            return a
    raise AssertionError("no primitive root")


def random_gsp(g, modulus, rng, word_length=40):
    """Draw an element of GSp_2g(F_ell) from ``rng`` (a ``random.Random``).

    For g = 1 the draw is uniform over GL_2(F_ell) by rejection; for g >= 2 it is
    a random word of ``word_length`` generators, which is close to uniform for the
    small groups used here but not exactly so.
    """
    mod = as_modulus(modulus)
    ell = mod.ell
    if g == 1:
        while True:
            e = tuple(rng.randrange(ell) for _ in range(4))
            if (e[0] * e[3] - e[1] * e[2]) % ell:
                return gsp_new(2, e, mod)
    gens = gsp_generators(g, mod)
    n = 2 * g
    acc = identity(n)
    for _ in range(word_length):
        acc = mat_mul(acc, rng.choice(gens).entries, n, ell)
    return gsp_new(n, acc, mod)
