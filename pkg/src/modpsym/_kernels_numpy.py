"""Pure-numpy fallbacks for the finite-field kernels.

Same signatures and element encoding as _kernels_numba; row operations are
vectorized with table gathers instead of scalar loops.
"""

import numpy as np

NAME = "numpy"


def _vmul(a, b, p, d, exp2, log):
    if d == 1:
        return (a * b) % p
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape, dtype=np.int64)
    mask = (a != 0) & (b != 0)
    if mask.any():
        out[mask] = exp2[log[a[mask]] + log[b[mask]]]
    return out


def _vadd(a, b, p, d):
    if d == 1:
        return (a + b) % p
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape, dtype=np.int64)
    pw = 1
    for _ in range(d):
        out += (((a // pw) % p + (b // pw) % p) % p) * pw
        pw *= p
    return out


def _vsub(a, b, p, d):
    if d == 1:
        return (a - b) % p
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape, dtype=np.int64)
    pw = 1
    for _ in range(d):
        out += (((a // pw) % p - (b // pw) % p) % p) * pw
        pw *= p
    return out


def rref(a, p, d, exp2, log, inv):
    m, n = a.shape
    piv = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        s = int(inv[a[r, c]])
        if s != 1:
            a[r] = _vmul(a[r], s, p, d, exp2, log)
        f = a[:, c].copy()
        f[r] = 0
        rows = np.nonzero(f)[0]
        if rows.size:
            a[rows] = _vsub(a[rows], _vmul(f[rows, None], a[r][None, :], p, d, exp2, log), p, d)
        piv.append(c)
        r += 1
    return r, np.asarray(piv, dtype=np.int64)


def matmul(a, b, p, d, exp2, log):
    m, k = a.shape
    n = b.shape[1]
    if d == 1:
        if k == 0:
            return np.zeros((m, n), dtype=np.int64)
        # chunk the contraction so int64 sums cannot overflow
        step = max(1, int(2**62 // max(1, p * p)))
        out = np.zeros((m, n), dtype=np.int64)
        for s in range(0, k, step):
            out = (out + a[:, s:s + step] @ b[s:s + step]) % p
        return out
    out = np.zeros((m, n), dtype=np.int64)
    for t in range(k):
        col = a[:, t]
        if not col.any():
            continue
        out = _vadd(out, _vmul(col[:, None], b[t][None, :], p, d, exp2, log), p, d)
    return out


def charpoly(h, p, d, exp2, log, inv):
    n = h.shape[0]
    for c in range(n - 2):
        nz = np.nonzero(h[c + 1:, c])[0]
        if nz.size == 0:
            continue
        pr = c + 1 + int(nz[0])
        if pr != c + 1:
            h[[c + 1, pr]] = h[[pr, c + 1]]
            h[:, [c + 1, pr]] = h[:, [pr, c + 1]]
        pinv = int(inv[h[c + 1, c]])
        u = _vmul(h[c + 2:, c], pinv, p, d, exp2, log)
        rows = np.nonzero(u)[0]
        for i in rows:
            ui = int(u[i])
            h[c + 2 + i] = _vsub(h[c + 2 + i], _vmul(ui, h[c + 1], p, d, exp2, log), p, d)
            h[:, c + 1] = _vadd(h[:, c + 1], _vmul(ui, h[:, c + 2 + i], p, d, exp2, log), p, d)
    pol = np.zeros((n + 1, n + 1), dtype=np.int64)
    pol[0, 0] = 1
    for m in range(1, n + 1):
        pol[m, 1:m + 1] = pol[m - 1, :m]
        hm = int(h[m - 1, m - 1])
        if hm != 0:
            pol[m, :m] = _vsub(pol[m, :m], _vmul(hm, pol[m - 1, :m], p, d, exp2, log), p, d)
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = int(_vmul(prod, int(h[i, i - 1]), p, d, exp2, log))
            if prod == 0:
                break
            cf = int(_vmul(int(h[i - 1, m - 1]), prod, p, d, exp2, log))
            if cf != 0:
                pol[m, :i] = _vsub(pol[m, :i], _vmul(cf, pol[i - 1, :i], p, d, exp2, log), p, d)
    return pol[n].copy()


def conj_all(elems, x, p, d, exp2, log):
    a, b, c, dd = elems[:, 0], elems[:, 1], elems[:, 2], elems[:, 3]
    x0, x1, x2, x3 = int(x[0]), int(x[1]), int(x[2]), int(x[3])

    def mul(u, v):
        return _vmul(u, v, p, d, exp2, log)

    def add(u, v):
        return _vadd(u, v, p, d)

    y0 = add(mul(a, x0), mul(b, x2))
    y1 = add(mul(a, x1), mul(b, x3))
    y2 = add(mul(c, x0), mul(dd, x2))
    y3 = add(mul(c, x1), mul(dd, x3))
    nb = _vsub(np.zeros_like(b), b, p, d)
    nc = _vsub(np.zeros_like(c), c, p, d)
    out = np.empty((elems.shape[0], 4), dtype=np.int64)
    out[:, 0] = add(mul(y0, dd), mul(y1, nc))
    out[:, 1] = add(mul(y0, nb), mul(y1, a))
    out[:, 2] = add(mul(y2, dd), mul(y3, nc))
    out[:, 3] = add(mul(y2, nb), mul(y3, a))
    return out
