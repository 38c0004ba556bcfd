"""Interpreted twisted-convolution kernel (fallback for the compiled one)."""
from __future__ import annotations


def mul_terms(A, B, row, rows, degs, N, quantum):
    """Twisted product of two sparse series.

    A and B are lists of (index, coeff) sorted by degree; ``row(i)`` returns
    the pair (sum_index, pairing) lists for point i, with sum_index -1 when
    the degree bound is exceeded; ``rows`` caches rows already built. The
    twist multiplies by (-1)^w classically and by v^w in the quantum flavor.
    """
    out = {}
    if not A or not B:
        return out
    dbmin = degs[B[0][0]]
    for ia, ca in A:
        da = degs[ia]
        if da + dbmin > N:
            break
        r = rows.get(ia)
        add, pair = r if r is not None else row(ia)
        for ib, cb in B:
            if da + degs[ib] > N:
                break
            k = add[ib]
            w = pair[ib]
            p = ca * cb
            if w:
                if quantum:
                    p = p.shift(w)
                elif w & 1:
                    p = -p
            if k in out:
                out[k] = out[k] + p
            else:
                out[k] = p
    return out
