"""Pure-Python versions of the hot loops.

Same signatures and results as the compiled ``_ckernels`` module; used when the
extension is unavailable or ``GALPROD_PURE_PYTHON=1`` is set.
"""
import numpy as np


def _square_table(p):
    sq = bytearray(p)
    for y in range(1, (p + 1) // 2):
        sq[y * y % p] = 1
    return sq


def legendre_sum(A, B, p):
    """Return sum over x in F_p of the quadratic character of x^3 + A x + B."""
    A %= p
    B %= p
    sq = _square_table(p)
    total = 0
    for x in range(p):
        v = (x * x * x + A * x + B) % p
        if v:
            total += 1 if sq[v] else -1
    return total


def torsion_counts(A, B, p):
    """Count (r2, r3) for y^2 = x^3 + A x + B over F_p.

    r2 is the number of roots of the cubic; r3 the number of roots x0 of the
    3-division polynomial 3x^4 + 6Ax^2 + 12Bx - A^2 with f(x0) a nonzero square.
    """
    A %= p
    B %= p
    sq = _square_table(p)
    r2 = 0
    r3 = 0
    AA = A * A
    for x in range(p):
        x2 = x * x
        f = (x2 * x + A * x + B) % p
        if f == 0:
            r2 += 1
        elif sq[f]:
            if (3 * x2 * x2 + 6 * A * x2 + 12 * B * x - AA) % p == 0:
                r3 += 1
    return r2, r3


def closure(table, elem_factors, pos, gens, id_index):
    """Sorted member indices of the subgroup generated by ``gens``.

    Elements are tuples of factor indices (``elem_factors[i]``); factors multiply
    through ``table`` and ``pos`` maps the flattened factor tuple back to an
    element index.
    """
    m = table.shape[0]
    nf = elem_factors.shape[1]
    T = table.tolist()
    E = elem_factors.tolist()
    P = pos.tolist()
    G = [E[s] for s in gens]
    seen = {id_index}
    out = [id_index]
    head = 0
    while head < len(out):
        ex = E[out[head]]
        head += 1
        for es in G:
            flat = 0
            for f in range(nf):
                flat = flat * m + T[ex[f]][es[f]]
            y = P[flat]
            if y not in seen:
                seen.add(y)
                out.append(y)
    res = np.array(out, dtype=np.int32)
    res.sort()
    return res
