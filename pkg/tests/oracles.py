"""Slow, independent reference implementations used only by the tests."""
import itertools

import sympy


def naive_ap(ainvs, p):
    """p - #{affine (x, y)} on the full Weierstrass model."""
    a1, a2, a3, a4, a6 = (a % p for a in ainvs)
    count = 0
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                count += 1
    return p - count


def affine_points(ainvs, p):
    a1, a2, a3, a4, a6 = (a % p for a in ainvs)
    return [(x, y) for x in range(p) for y in range(p)
            if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % p == 0]


def _neg(P, ainvs, p):
    a1, _, a3, _, _ = ainvs
    x, y = P
    return (x, (-y - a1 * x - a3) % p)


def _double(P, ainvs, p):
    """2P on the general Weierstrass model; None is the point at infinity."""
    a1, a2, a3, a4, _ = ainvs
    x, y = P
    den = (2 * y + a1 * x + a3) % p
    if den == 0:
        return None
    lam = (3 * x * x + 2 * a2 * x + a4 - a1 * y) * pow(den, -1, p) % p
    nu = (y - lam * x) % p
    x3 = (lam * lam + a1 * lam - a2 - 2 * x) % p
    y3 = (-(lam + a1) * x3 - nu - a3) % p
    return (x3, y3)


def torsion_dims_by_group_law(ainvs, p):
    """(dim E(F_p)[2], dim E(F_p)[3]) from point enumeration and the group law."""
    pts = affine_points(ainvs, p)
    n2 = 1 + sum(1 for P in pts if _neg(P, ainvs, p) == P)
    n3 = 1 + sum(1 for P in pts if _double(P, ainvs, p) == _neg(P, ainvs, p))
    dims = {1: 0, 2: 1, 4: 2, 3: 1, 9: 2}
    return dims[n2], dims[n3]


def sympy_charpoly(entries, n, ell):
    """Monic coefficients of det(tI - M) mod ell, highest degree first."""
    t = sympy.Symbol("t")
    m = sympy.Matrix(n, n, list(entries))
    poly = m.charpoly(t)
    return tuple(int(c) % ell for c in poly.all_coeffs())


def brute_force_subgroups(order, mul, identity):
    """Every subset containing the identity closed under ``mul`` (tiny groups only)."""
    rest = [x for x in range(order) if x != identity]
    found = []
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            s = {identity, *combo}
            if all(mul(a, b) in s for a in s for b in s):
                found.append(frozenset(s))
    return found


def subgroups_by_extension(order, mul, identity):
    """All subgroups by adjoining one element at a time to known subgroups."""

    def close(gens):
        s = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = mul(a, g)
                    if b not in s:
                        s.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(s)

    trivial = frozenset({identity})
    seen = {trivial}
    frontier = [(trivial, [])]
    while frontier:
        nxt = []
        for h, gens in frontier:
            for x in range(order):
                if x in h:
                    continue
                k = close(gens + [x])
                if k not in seen:
                    seen.add(k)
                    nxt.append((k, gens + [x]))
        frontier = nxt
    return seen
