"""numba @njit kernels for dense linear algebra over F_{p^d}.

Element encoding: an element with coefficient vector (c_0, ..., c_{d-1})
over F_p is the integer sum c_i * p^i.  Addition is digitwise mod p;
multiplication goes through exp/log tables for a fixed generator of the
multiplicative group (direct modular arithmetic when d == 1).  exp2 is the
doubled exponent table exp2[k] = g^(k mod (q-1)) for k < 2(q-1), so products
of logs never need a reduction.
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True, inline="always")
def _mul(a, b, p, d, exp2, log):
    if d == 1:
        return (a * b) % p
    if a == 0 or b == 0:
        return 0
    return exp2[log[a] + log[b]]


@njit(cache=True, inline="always")
def _add(a, b, p, d):
    if d == 1:
        return (a + b) % p
    r = 0
    pw = 1
    aa = a
    bb = b
    for _ in range(d):
        r += (((aa % p) + (bb % p)) % p) * pw
        aa //= p
        bb //= p
        pw *= p
    return r


@njit(cache=True, inline="always")
def _sub(a, b, p, d):
    if d == 1:
        return (a - b) % p
    r = 0
    pw = 1
    aa = a
    bb = b
    for _ in range(d):
        r += (((aa % p) - (bb % p)) % p) * pw
        aa //= p
        bb //= p
        pw *= p
    return r


@njit(cache=True)
def rref(a, p, d, exp2, log, inv):
    """In-place reduced row echelon form; returns (rank, pivot columns)."""
    m, n = a.shape
    cap = m if m < n else n
    piv = np.empty(cap, dtype=np.int64)
    r = 0
    for c in range(n):
        pr = -1
        for i in range(r, m):
            if a[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(n):
                t = a[r, j]
                a[r, j] = a[pr, j]
                a[pr, j] = t
        s = inv[a[r, c]]
        if s != 1:
            for j in range(c, n):
                a[r, j] = _mul(a[r, j], s, p, d, exp2, log)
        for i in range(m):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(c, n):
                    a[i, j] = _sub(a[i, j], _mul(f, a[r, j], p, d, exp2, log), p, d)
        piv[r] = c
        r += 1
        if r == m:
            break
    return r, piv[:r].copy()


@njit(cache=True)
def matmul(a, b, p, d, exp2, log):
    m, k = a.shape
    n = b.shape[1]
    out = np.zeros((m, n), dtype=np.int64)
    if d == 1:
        for i in range(m):
            for t in range(k):
                v = a[i, t]
                if v == 0:
                    continue
                for j in range(n):
                    out[i, j] = (out[i, j] + v * b[t, j]) % p
    else:
        for i in range(m):
            for t in range(k):
                v = a[i, t]
                if v == 0:
                    continue
                lv = log[v]
                for j in range(n):
                    w = b[t, j]
                    if w != 0:
                        out[i, j] = _add(out[i, j], exp2[lv + log[w]], p, d)
    return out


@njit(cache=True)
def charpoly(h, p, d, exp2, log, inv):
    """Characteristic polynomial det(xI - h), ascending coefficients.

    h is destroyed (Hessenberg reduction by similarity, then the standard
    Hessenberg charpoly recurrence).
    """
    n = h.shape[0]
    for c in range(n - 2):
        pr = -1
        for i in range(c + 1, n):
            if h[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != c + 1:
            for j in range(n):
                t = h[c + 1, j]
                h[c + 1, j] = h[pr, j]
                h[pr, j] = t
            for j in range(n):
                t = h[j, c + 1]
                h[j, c + 1] = h[j, pr]
                h[j, pr] = t
        pinv = inv[h[c + 1, c]]
        for i in range(c + 2, n):
            if h[i, c] != 0:
                u = _mul(h[i, c], pinv, p, d, exp2, log)
                for j in range(n):
                    h[i, j] = _sub(h[i, j], _mul(u, h[c + 1, j], p, d, exp2, log), p, d)
                for j in range(n):
                    h[j, c + 1] = _add(h[j, c + 1], _mul(u, h[j, i], p, d, exp2, log), p, d)
    pol = np.zeros((n + 1, n + 1), dtype=np.int64)
    pol[0, 0] = 1
    for m in range(1, n + 1):
        for t in range(m):
            pol[m, t + 1] = pol[m - 1, t]
        hm = h[m - 1, m - 1]
        if hm != 0:
            for t in range(m):
                pol[m, t] = _sub(pol[m, t], _mul(hm, pol[m - 1, t], p, d, exp2, log), p, d)
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = _mul(prod, h[i, i - 1], p, d, exp2, log)
            if prod == 0:
                break
            cf = _mul(h[i - 1, m - 1], prod, p, d, exp2, log)
            if cf != 0:
                for t in range(i):
                    pol[m, t] = _sub(pol[m, t], _mul(cf, pol[i - 1, t], p, d, exp2, log), p, d)
    return pol[n].copy()


@njit(cache=True)
def conj_all(elems, x, p, d, exp2, log):
    """g x g^{-1} for every g in elems; 2x2 matrices as rows (a, b, c, d), det 1."""
    m = elems.shape[0]
    out = np.empty((m, 4), dtype=np.int64)
    x0, x1, x2, x3 = x[0], x[1], x[2], x[3]
    for i in range(m):
        a = elems[i, 0]
        b = elems[i, 1]
        c = elems[i, 2]
        dd = elems[i, 3]
        y0 = _add(_mul(a, x0, p, d, exp2, log), _mul(b, x2, p, d, exp2, log), p, d)
        y1 = _add(_mul(a, x1, p, d, exp2, log), _mul(b, x3, p, d, exp2, log), p, d)
        y2 = _add(_mul(c, x0, p, d, exp2, log), _mul(dd, x2, p, d, exp2, log), p, d)
        y3 = _add(_mul(c, x1, p, d, exp2, log), _mul(dd, x3, p, d, exp2, log), p, d)
        nb = _sub(0, b, p, d)
        nc = _sub(0, c, p, d)
        out[i, 0] = _add(_mul(y0, dd, p, d, exp2, log), _mul(y1, nc, p, d, exp2, log), p, d)
        out[i, 1] = _add(_mul(y0, nb, p, d, exp2, log), _mul(y1, a, p, d, exp2, log), p, d)
        out[i, 2] = _add(_mul(y2, dd, p, d, exp2, log), _mul(y3, nc, p, d, exp2, log), p, d)
        out[i, 3] = _add(_mul(y2, nb, p, d, exp2, log), _mul(y3, a, p, d, exp2, log), p, d)
    return out
