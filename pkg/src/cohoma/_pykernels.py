"""Pure-Python monomial kernels.

Monomials are tuples of generator ids in canonical (ascending) order.
``swap`` is a flat byte table: ``swap[x*n + y]`` is 1 when exchanging
generators x and y costs a sign.  ``_kernels.pyx`` mirrors these functions.
"""


def mono_mul(a, b, swap, n):
    """Merge two canonical monomials. Returns (sign, monomial), sign 0 if it vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    la = len(a)
    lb = len(b)
    out = []
    i = j = 0
    flips = 0
    while i < la and j < lb:
        x = a[i]
        y = b[j]
        if x <= y:
            if x == y and swap[x * n + x]:
                return 0, None
            out.append(x)
            i += 1
        else:
            # y travels left past a[i:]
            row = y
            for k in range(i, la):
                flips += swap[a[k] * n + row]
            out.append(y)
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return (-1 if flips & 1 else 1), tuple(out)


def normalize(word, swap, n):
    """Sort an arbitrary word into canonical order, tracking the sign."""
    w = list(word)
    flips = 0
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            flips += swap[w[j - 1] * n + w[j]]
            w[j - 1], w[j] = w[j], w[j - 1]
            j -= 1
    for i in range(1, len(w)):
        if w[i] == w[i - 1] and swap[w[i] * n + w[i]]:
            return 0, None
    return (-1 if flips & 1 else 1), tuple(w)


def _acc(out, m, c):
    v = out.get(m)
    if v is None:
        out[m] = c
    else:
        v = v + c
        if v:
            out[m] = v
        else:
            del out[m]


def poly_mul(f, g, swap, n):
    out = {}
    for ma, ca in f.items():
        for mb, cb in g.items():
            s, m = mono_mul(ma, mb, swap, n)
            if s:
                c = ca * cb
                _acc(out, m, c if s > 0 else -c)
    return out


def der_apply(f, images, undefined, dpar, swap, n, exc):
    """Apply a derivation given by its generator images (dicts) to ``f``.

    ``dpar[g]`` is 1 when the derivation picks up a sign passing generator g.
    Hitting a generator in ``undefined`` raises ``exc``.
    """
    out = {}
    for m, c in f.items():
        flips = 0
        for k in range(len(m)):
            g = m[k]
            if g in undefined:
                raise exc(g)
            img = images.get(g)
            if img is not None:
                left = m[:k]
                right = m[k + 1:]
                for mi, ci in img.items():
                    s1, t = mono_mul(left, mi, swap, n)
                    if not s1:
                        continue
                    s2, t = mono_mul(t, right, swap, n)
                    if not s2:
                        continue
                    cc = c * ci
                    if (s1 * s2 < 0) != bool(flips & 1):
                        cc = -cc
                    _acc(out, t, cc)
            flips += dpar[g]
    return out
