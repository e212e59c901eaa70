# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled monomial kernels; same contracts as ``_pykernels``."""


cdef tuple _mono_mul(tuple a, tuple b, const unsigned char[:] swap, Py_ssize_t n, int* sign):
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t i = 0, j = 0, k
    cdef Py_ssize_t x, y
    cdef int flips = 0
    cdef list out
    if la == 0:
        sign[0] = 1
        return b
    if lb == 0:
        sign[0] = 1
        return a
    out = []
    while i < la and j < lb:
        x = <Py_ssize_t>a[i]
        y = <Py_ssize_t>b[j]
        if x <= y:
            if x == y and swap[x * n + x]:
                sign[0] = 0
                return None
            out.append(a[i])
            i += 1
        else:
            for k in range(i, la):
                flips += swap[(<Py_ssize_t>a[k]) * n + y]
            out.append(b[j])
            j += 1
    while i < la:
        out.append(a[i])
        i += 1
    while j < lb:
        out.append(b[j])
        j += 1
    sign[0] = -1 if flips & 1 else 1
    return tuple(out)


def mono_mul(tuple a, tuple b, const unsigned char[:] swap, Py_ssize_t n):
    cdef int s = 0
    cdef tuple m = _mono_mul(a, b, swap, n, &s)
    return s, m


def normalize(word, const unsigned char[:] swap, Py_ssize_t n):
    cdef list w = list(word)
    cdef Py_ssize_t i, j, ln = len(w)
    cdef Py_ssize_t p, q
    cdef int flips = 0
    for i in range(1, ln):
        j = i
        while j > 0 and <Py_ssize_t>w[j - 1] > <Py_ssize_t>w[j]:
            p = w[j - 1]
            q = w[j]
            flips += swap[p * n + q]
            w[j - 1], w[j] = w[j], w[j - 1]
            j -= 1
    for i in range(1, ln):
        p = w[i]
        if p == <Py_ssize_t>w[i - 1] and swap[p * n + p]:
            return 0, None
    return (-1 if flips & 1 else 1), tuple(w)


cdef inline void _acc(dict out, tuple m, object c):
    v = out.get(m)
    if v is None:
        out[m] = c
    else:
        v = v + c
        if v:
            out[m] = v
        else:
            del out[m]


def poly_mul(dict f, dict g, const unsigned char[:] swap, Py_ssize_t n):
    cdef dict out = {}
    cdef int s = 0
    cdef tuple ma, mb, m
    for ma, ca in f.items():
        for mb, cb in g.items():
            m = _mono_mul(ma, mb, swap, n, &s)
            if s:
                c = ca * cb
                _acc(out, m, c if s > 0 else -c)
    return out


def der_apply(dict f, dict images, undefined, const unsigned char[:] dpar,
              const unsigned char[:] swap, Py_ssize_t n, exc):
    cdef dict out = {}
    cdef tuple m, left, right, mi, t
    cdef Py_ssize_t k, lm, g
    cdef int flips, s1 = 0, s2 = 0
    cdef dict img
    for m, c in f.items():
        flips = 0
        lm = len(m)
        for k in range(lm):
            g = m[k]
            if undefined and g in undefined:
                raise exc(g)
            img = images.get(g)
            if img is not None:
                left = m[:k]
                right = m[k + 1:]
                for mi, ci in img.items():
                    t = _mono_mul(left, mi, swap, n, &s1)
                    if not s1:
                        continue
                    t = _mono_mul(t, right, swap, n, &s2)
                    if not s2:
                        continue
                    cc = c * ci
                    if (s1 * s2 < 0) != (flips & 1):
                        cc = -cc
                    _acc(out, t, cc)
            flips += dpar[g]
    return out
