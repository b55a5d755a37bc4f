"""Exact finite fields F_{p^d}, exact rationals, and dense linear algebra.

Field elements are integer codes: the element with coefficient vector
(c_0, ..., c_{d-1}) over F_p is sum c_i p^i, so codes 0..p-1 form the prime
field.  The defining polynomial is the lexicographically smallest monic
irreducible of degree d (coefficients compared low-degree-first), which makes
field construction reproducible across runs.  Matrices over a finite field
are int64 numpy arrays of codes; the exact-rational mode stores Fractions.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import backend


class FieldError(ValueError):
    pass


class LinAlgError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n):
    """Prime factorization as {prime: exponent} by trial division."""
    out = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def primes_upto(bound):
    return [n for n in range(2, bound + 1) if is_prime(n)]


# ---------------------------------------------------------------------------
# construction-time polynomial arithmetic over F_p (coefficient lists)

def _ptrim(f):
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def _pmul(f, g, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _ptrim(out)


def _pmod(f, m, p):
    # m monic
    f = _ptrim(list(f))
    dm = len(m) - 1
    if dm == 0:
        return [0]
    while len(f) - 1 >= dm:
        c = f[-1]
        if c:
            off = len(f) - 1 - dm
            for i in range(dm):
                f[off + i] = (f[off + i] - c * m[i]) % p
        f.pop()
        if not f:
            f = [0]
            break
    return _ptrim(f)


def _ppowmod(f, e, m, p):
    r = [1]
    b = _pmod(f, m, p)
    while e:
        if e & 1:
            r = _pmod(_pmul(r, b, p), m, p)
        b = _pmod(_pmul(b, b, p), m, p)
        e >>= 1
    return r


def _pgcd(f, g, p):
    f = _ptrim(list(f))
    g = _ptrim(list(g))
    while g != [0]:
        inv = pow(g[-1], p - 2, p)
        gm = [(c * inv) % p for c in g]
        f, g = gm, _pmod(f, gm, p)
    return f


def _poly_irreducible(coeffs, p, d):
    """Monic degree-d poly irreducible over F_p: no factor of degree <= d//2.

    gcd(x^(p^e) - x, f) > 1 exactly when f has an irreducible factor of
    degree dividing e.
    """
    m = list(coeffs)
    xq = [0, 1]
    for _ in range(1, d // 2 + 1):
        xq = _ppowmod(xq, p, m, p)
        diff = list(xq)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(m, _ptrim(diff), p)
        if len(g) - 1 > 0:
            return False
    return True


# ---------------------------------------------------------------------------


class GF:
    """The finite field F_{p^d} with exact table-driven arithmetic."""

    kind = "gf"

    def __init__(self, p, d, _token=None):
        if _token is not _BUILD_TOKEN:
            raise FieldError("use build_field(p, d)")
        self.p = p
        self.d = d
        self.q = p**d
        self._hom_cache = {}
        if d == 1:
            self.poly = (0, 1)
        else:
            self.poly = self._find_poly()
        self._build_tables()

    def _find_poly(self):
        p, d = self.p, self.d
        for tup in itertools.product(range(p), repeat=d):
            coeffs = list(tup) + [1]
            if coeffs[0] == 0:
                continue
            if _poly_irreducible(coeffs, p, d):
                return tuple(coeffs)
        raise FieldError(f"no irreducible polynomial of degree {d} over F_{p}")

    def _code_mul(self, a, b):
        # construction-time slow path
        p, d = self.p, self.d
        if d == 1:
            return (a * b) % p
        fa = [(a // p**i) % p for i in range(d)]
        fb = [(b // p**i) % p for i in range(d)]
        fc = _pmod(_pmul(fa, fb, p), list(self.poly), p)
        return sum(c * p**i for i, c in enumerate(fc))

    def _build_tables(self):
        p, d, q = self.p, self.d, self.q
        if q > 2**22:
            raise FieldError(f"field of order {q} exceeds the table bound 2**22")
        qm1 = q - 1
        # find a generator of the multiplicative group
        fac = list(factorize(qm1)) if qm1 > 1 else []
        gen = 1
        for cand in range(2, q):
            if d == 1:
                ok = all(pow(cand, qm1 // ell, p) != 1 for ell in fac)
            else:
                ok = all(self._code_pow(cand, qm1 // ell) != 1 for ell in fac)
            if ok:
                gen = cand
                break
        self.gen = gen
        exp = np.empty(max(2 * qm1, 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        v = 1
        for k in range(qm1):
            exp[k] = v
            log[v] = k
            v = self._code_mul(v, gen)
        for k in range(qm1, 2 * qm1):
            exp[k] = exp[k - qm1]
        if qm1 == 0:  # q == 1 cannot happen; guard anyway
            exp[0] = 1
        self.exp2 = exp
        self.log = log
        inv = np.zeros(q, dtype=np.int64)
        for k in range(qm1):
            inv[exp[k]] = exp[(qm1 - k) % qm1]
        self.inv_table = inv

    def _code_pow(self, a, e):
        r = 1
        b = a
        while e:
            if e & 1:
                r = self._code_mul(r, b)
            b = self._code_mul(b, b)
            e >>= 1
        return r

    # -- scalar arithmetic on codes -----------------------------------------
    def add(self, a, b):
        p = self.p
        if self.d == 1:
            return (a + b) % p
        r, pw = 0, 1
        for _ in range(self.d):
            r += (((a % p) + (b % p)) % p) * pw
            a //= p
            b //= p
            pw *= p
        return r

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        p = self.p
        if self.d == 1:
            return (-a) % p
        r, pw = 0, 1
        for _ in range(self.d):
            r += ((-(a % p)) % p) * pw
            a //= p
            pw *= p
        return r

    def mul(self, a, b):
        if self.d == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return int(self.exp2[self.log[a] + self.log[b]])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError
            return 0
        qm1 = self.q - 1
        return int(self.exp2[(int(self.log[a]) * e) % qm1]) if qm1 else 1

    def frobenius(self, a, times=1):
        """x -> x^(p^times)."""
        return self.pow(a, self.p**times)

    def from_int(self, n):
        return n % self.p

    def coeffs(self, a):
        """Coefficient vector of the code, low degree first, length d."""
        p = self.p
        return tuple((a // p**i) % p for i in range(self.d))

    def from_coeffs(self, cs):
        return sum((c % self.p) * self.p**i for i, c in enumerate(cs))

    def elements(self):
        return range(self.q)

    def hom(self, target):
        """Embedding table into a larger field (same p, d | target.d)."""
        if target is self:
            return np.arange(self.q, dtype=np.int64)
        key = (target.p, target.d)
        if key in self._hom_cache:
            return self._hom_cache[key]
        if target.p != self.p or target.d % self.d != 0:
            raise FieldError("no embedding: incompatible field sizes")
        # smallest root of our defining polynomial in the target field
        theta = None
        for t in range(target.q):
            acc = 0
            tp = 1
            for c in self.poly:
                if c:
                    acc = target.add(acc, target.mul(c % self.p, tp))
                tp = target.mul(tp, t)
            if acc == 0:
                theta = t
                break
        if theta is None:
            raise FieldError("embedding root not found (internal error)")
        table = np.empty(self.q, dtype=np.int64)
        pows = [1]
        for _ in range(self.d - 1):
            pows.append(target.mul(pows[-1], theta))
        for a in range(self.q):
            acc = 0
            for i, c in enumerate(self.coeffs(a)):
                if c:
                    acc = target.add(acc, target.mul(c, pows[i]))
            table[a] = acc
        self._hom_cache[key] = table
        return table

    def __repr__(self):
        return f"GF({self.p}^{self.d})" if self.d > 1 else f"GF({self.p})"


_BUILD_TOKEN = object()
_FIELDS = {}


def build_field(p, d=1):
    """Deterministic F_{p^d}; instances are cached, so identity == equality."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if p >= 2**31:
        raise FieldError("characteristic too large for int64 kernels")
    if d < 1:
        raise FieldError("extension degree must be >= 1")
    key = (p, d)
    if key not in _FIELDS:
        _FIELDS[key] = GF(p, d, _BUILD_TOKEN)
    return _FIELDS[key]


class RationalField:
    """Exact rational context; 'codes' are Fractions."""

    kind = "rational"
    p = 0
    d = 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def inv(a):
        return Fraction(1) / a

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def pow(a, e):
        return a**e

    @staticmethod
    def from_int(n):
        return Fraction(n)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


# ---------------------------------------------------------------------------
# matrices


def _as_fraction_rows(rows):
    return [[Fraction(x) for x in row] for row in rows]


class Mat:
    """Dense matrix over a GF field (int64 codes) or over QQ (Fractions)."""

    __slots__ = ("F", "a")

    def __init__(self, F, a):
        self.F = F
        if F is QQ:
            self.a = a  # list of lists of Fractions
        else:
            arr = np.ascontiguousarray(np.asarray(a, dtype=np.int64))
            if arr.ndim != 2:
                raise LinAlgError("matrix data must be 2-dimensional")
            self.a = arr

    # -- constructors --------------------------------------------------------
    @classmethod
    def zeros(cls, F, m, n):
        if F is QQ:
            return cls(F, [[Fraction(0)] * n for _ in range(m)])
        return cls(F, np.zeros((m, n), dtype=np.int64))

    @classmethod
    def identity(cls, F, n):
        if F is QQ:
            return cls(F, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)])
        return cls(F, np.eye(n, dtype=np.int64))

    @classmethod
    def from_int_rows(cls, F, rows):
        """Integer entries reduced into the field (or taken exactly over QQ)."""
        if F is QQ:
            return cls(F, _as_fraction_rows(rows))
        return cls(F, [[e % F.p for e in row] for row in rows])

    # -- shape ---------------------------------------------------------------
    @property
    def nrows(self):
        return len(self.a) if self.F is QQ else self.a.shape[0]

    @property
    def ncols(self):
        if self.F is QQ:
            return len(self.a[0]) if self.a else 0
        return self.a.shape[1]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def copy(self):
        if self.F is QQ:
            return Mat(QQ, [row[:] for row in self.a])
        return Mat(self.F, self.a.copy())

    def __eq__(self, other):
        if not isinstance(other, Mat) or other.F is not self.F:
            return NotImplemented
        if self.F is QQ:
            return self.a == other.a
        return self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self):
        raise TypeError("Mat is unhashable")

    def is_zero(self):
        if self.F is QQ:
            return all(x == 0 for row in self.a for x in row)
        return not self.a.any()

    # -- arithmetic ----------------------------------------------------------
    def _args(self):
        F = self.F
        return (F.p, F.d, F.exp2, F.log)

    def __matmul__(self, other):
        if other.F is not self.F:
            raise LinAlgError("field mismatch in matrix product")
        if self.ncols != other.nrows:
            raise LinAlgError("shape mismatch in matrix product")
        if self.F is QQ:
            n, k, m = self.nrows, self.ncols, other.ncols
            out = [[Fraction(0)] * m for _ in range(n)]
            for i in range(n):
                ra = self.a[i]
                oi = out[i]
                for t in range(k):
                    v = ra[t]
                    if v:
                        rb = other.a[t]
                        for j in range(m):
                            if rb[j]:
                                oi[j] += v * rb[j]
            return Mat(QQ, out)
        return Mat(self.F, backend.kernels().matmul(self.a, other.a, *self._args()))

    def _elementwise(self, other, fn_gf, fn_q):
        if other.F is not self.F or self.shape != other.shape:
            raise LinAlgError("shape/field mismatch")
        if self.F is QQ:
            return Mat(QQ, [[fn_q(x, y) for x, y in zip(r1, r2)]
                            for r1, r2 in zip(self.a, other.a)])
        return Mat(self.F, fn_gf(self.a, other.a))

    def __add__(self, other):
        from ._kernels_numpy import _vadd
        F = self.F
        return self._elementwise(other, lambda x, y: _vadd(x, y, F.p, F.d),
                                 lambda x, y: x + y)

    def __sub__(self, other):
        from ._kernels_numpy import _vsub
        F = self.F
        return self._elementwise(other, lambda x, y: _vsub(x, y, F.p, F.d),
                                 lambda x, y: x - y)

    def __neg__(self):
        return Mat.zeros(self.F, *self.shape) - self

    def scale(self, c):
        from ._kernels_numpy import _vmul
        if self.F is QQ:
            return Mat(QQ, [[x * c for x in row] for row in self.a])
        F = self.F
        return Mat(F, _vmul(self.a, int(c), F.p, F.d, F.exp2, F.log))

    def transpose(self):
        if self.F is QQ:
            return Mat(QQ, [list(col) for col in zip(*self.a)] if self.a else [])
        return Mat(self.F, self.a.T.copy())

    def take_cols(self, idx):
        if self.F is QQ:
            return Mat(QQ, [[row[j] for j in idx] for row in self.a])
        return Mat(self.F, self.a[:, list(idx)].copy())

    def take_rows(self, idx):
        if self.F is QQ:
            return Mat(QQ, [self.a[i][:] for i in idx])
        return Mat(self.F, self.a[list(idx), :].copy())

    @staticmethod
    def hstack(mats):
        F = mats[0].F
        if F is QQ:
            return Mat(QQ, [sum((m.a[i] for m in mats), []) for i in range(mats[0].nrows)])
        return Mat(F, np.hstack([m.a for m in mats]))

    @staticmethod
    def vstack(mats):
        F = mats[0].F
        if F is QQ:
            return Mat(QQ, [row[:] for m in mats for row in m.a])
        return Mat(F, np.vstack([m.a for m in mats]))

    # -- elimination ---------------------------------------------------------
    def rref(self):
        """(reduced matrix, rank, pivot column tuple)."""
        if self.F is QQ:
            red, rank, piv = _rat_rref([row[:] for row in self.a])
            return Mat(QQ, red), rank, tuple(piv)
        F = self.F
        work = self.a.copy()
        rank, piv = backend.kernels().rref(work, F.p, F.d, F.exp2, F.log, F.inv_table)
        return Mat(F, work), int(rank), tuple(int(x) for x in piv)

    def rank(self):
        return self.rref()[1]

    def right_kernel(self):
        """Matrix whose columns span {x : self @ x = 0}."""
        red, rank, piv = self.rref()
        n = self.ncols
        free = [j for j in range(n) if j not in piv]
        K = Mat.zeros(self.F, n, len(free))
        if self.F is QQ:
            for idx, j in enumerate(free):
                K.a[j][idx] = Fraction(1)
                for i, pc in enumerate(piv):
                    K.a[pc][idx] = -red.a[i][j]
        else:
            Fd = self.F
            for idx, j in enumerate(free):
                K.a[j, idx] = 1
                for i, pc in enumerate(piv):
                    K.a[pc, idx] = Fd.neg(int(red.a[i, j]))
        return K

    def solve_right(self, B):
        """X with self @ X = B; raises LinAlgError if inconsistent."""
        if B.F is not self.F or B.nrows != self.nrows:
            raise LinAlgError("shape/field mismatch in solve")
        n = self.ncols
        aug = Mat.hstack([self, B])
        red, rank, piv = aug.rref()
        if any(pc >= n for pc in piv):
            raise LinAlgError("inconsistent linear system")
        X = Mat.zeros(self.F, n, B.ncols)
        if self.F is QQ:
            for i, pc in enumerate(piv):
                X.a[pc] = red.a[i][n:]
        else:
            for i, pc in enumerate(piv):
                X.a[pc, :] = red.a[i, n:]
        return X

    def charpoly(self):
        """det(xI - self) as ascending coefficient list of codes (GF only)."""
        if self.F is QQ:
            raise LinAlgError("charpoly implemented for finite fields only")
        if self.nrows != self.ncols:
            raise LinAlgError("charpoly of a non-square matrix")
        F = self.F
        work = self.a.copy()
        out = backend.kernels().charpoly(work, F.p, F.d, F.exp2, F.log, F.inv_table)
        return [int(c) for c in out]

    def base_change(self, F2):
        """View the matrix over an extension field (entrywise embedding)."""
        if self.F is QQ or F2 is QQ:
            raise LinAlgError("base_change is for finite fields")
        if F2 is self.F:
            return self
        table = self.F.hom(F2)
        return Mat(F2, table[self.a])

    def to_lists(self):
        if self.F is QQ:
            return [row[:] for row in self.a]
        return self.a.tolist()

    def __repr__(self):
        return f"Mat({self.F}, {self.nrows}x{self.ncols})"


def _rat_rref(rows):
    m = len(rows)
    n = len(rows[0]) if rows else 0
    piv = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        s = rows[r][c]
        if s != 1:
            rows[r] = [x / s for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    return rows, r, piv


def rref(M):
    """Reduced row-echelon form: (matrix, rank, pivot columns)."""
    return M.rref()


# ---------------------------------------------------------------------------
# univariate polynomials over GF (ascending code lists)


def poly_trim(f):
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def poly_deg(f):
    return len(f) - 1


def poly_mul(f, g, F):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
    return poly_trim(out)


def poly_divmod(f, g, F):
    f = poly_trim(list(f))
    g = poly_trim(list(g))
    if g == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    dg = poly_deg(g)
    if f == [0] or poly_deg(f) < dg:
        return [0], f
    ginv = F.inv(g[-1])
    q = [0] * (poly_deg(f) - dg + 1)
    while f != [0] and poly_deg(f) >= dg:
        if f[-1] == 0:
            f.pop()
            continue
        c = F.mul(f[-1], ginv)
        off = poly_deg(f) - dg
        q[off] = c
        for i in range(dg + 1):
            f[off + i] = F.sub(f[off + i], F.mul(c, g[i]))
        f.pop()
        if not f:
            f = [0]
    return poly_trim(q), poly_trim(f)


def poly_eval(f, x, F):
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_monic(f, F):
    f = poly_trim(list(f))
    if f == [0]:
        return f
    inv = F.inv(f[-1])
    return [F.mul(c, inv) for c in f]


def factor_poly(f, F, degree_cap=None):
    """Factor a monic poly over F by root search in extension fields.

    Returns (factors, remainder): factors is a list of dicts with keys
    'coeffs' (ascending, over F), 'degree', 'multiplicity', 'field' (the
    extension containing the roots) and 'roots' (codes in that field, the
    Frobenius orbit sorted ascending).  remainder is the unfactored part
    (coefficients over F) whose irreducible factors all exceed degree_cap or
    the field-size bound; [1] when fully split.
    """
    f = poly_monic(f, F)
    if f == [0]:
        raise LinAlgError("factor of the zero polynomial")
    factors = []
    e = 1
    while poly_deg(f) > 0:
        if degree_cap is not None and e > degree_cap:
            break
        if e > poly_deg(f):
            break
        try:
            big = build_field(F.p, F.d * e)
        except FieldError:
            break
        emb = F.hom(big)
        fe = [int(emb[c]) for c in f]
        root = None
        for t in range(big.q):
            if poly_eval(fe, t, big) == 0:
                # skip roots living in a proper subfield: their minimal poly
                # has degree < e and was found at an earlier stage
                orbit = {t}
                u = big.frobenius(t, F.d)
                while u not in orbit:
                    orbit.add(u)
                    u = big.frobenius(u, F.d)
                if len(orbit) == e:
                    root = t
                    break
        if root is None:
            e += 1
            continue
        orbit = sorted(orbit)
        g_big = [1]
        for r in orbit:
            g_big = poly_mul(g_big, [big.neg(r), 1], big)
        back = {int(emb[c]): c for c in range(F.q)}
        try:
            g = [back[c] for c in g_big]
        except KeyError:
            raise LinAlgError("factor coefficients escaped the base field")
        mult = 0
        while True:
            q_, rem = poly_divmod(f, g, F)
            if rem != [0]:
                break
            f = q_
            mult += 1
        factors.append({
            "coeffs": g,
            "degree": e,
            "multiplicity": mult,
            "field": big,
            "roots": orbit,
        })
    factors.sort(key=lambda rec: (rec["degree"], rec["roots"]))
    return factors, f


def charpoly_and_eigenspaces(M, up_to_degree=4):
    """Factor the characteristic polynomial and compute eigenspaces.

    For each irreducible factor of degree <= up_to_degree the records carry an
    eigenspace basis over the matching extension field (for the smallest root,
    with all conjugate roots listed); larger factors stay in 'remainder'.
    """
    F = M.F
    cp = M.charpoly()
    factors, remainder = factor_poly(cp, F, degree_cap=up_to_degree)
    out = []
    for rec in factors:
        big = rec["field"]
        Mb = M.base_change(big)
        lam = rec["roots"][0]
        shifted = Mb - Mat.identity(big, Mb.nrows).scale(lam)
        rec = dict(rec)
        rec["eigenspace"] = shifted.right_kernel()
        out.append(rec)
    return out, remainder
