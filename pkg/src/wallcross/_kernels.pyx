# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twisted-convolution kernel; same contract as _kernels_py."""


def mul_terms(list A, list B, row, dict rows, list degs, long N, bint quantum):
    cdef dict out = {}
    cdef long da, dbmin, w
    cdef object k, p, q, ca, cb, ia, ib, r
    cdef list add, pair
    cdef tuple ta, tb
    if not A or not B:
        return out
    dbmin = degs[(<tuple>B[0])[0]]
    for ta in A:
        ia = ta[0]
        ca = ta[1]
        da = degs[ia]
        if da + dbmin > N:
            break
        r = rows.get(ia)
        if r is None:
            r = row(ia)
        add, pair = r
        for tb in B:
            ib = tb[0]
            if da + <long>degs[ib] > N:
                break
            cb = tb[1]
            k = add[ib]
            w = pair[ib]
            p = ca * cb
            if w:
                if quantum:
                    p = p.shift(w)
                elif w & 1:
                    p = -p
            q = out.get(k)
            if q is None:
                out[k] = p
            else:
                out[k] = q + p
    return out
