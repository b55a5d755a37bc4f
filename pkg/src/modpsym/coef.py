"""Coefficient modules with 2x2 matrix actions.

Kinds: trivial, Symm^k of the standard 2-dimensional representation,
the permutation module on P^1(F_q), Frobenius-twisted tensor products of
Symm^(p-1) factors, and tensor products.

Coordinate convention: coefficient vectors are rows and act(g) multiplies on
the right, so act(g) @ act(h) == act(g h).  The matrix action on polynomials
is the substitution P(X, Y) -> P(aX + bY, cX + dY) for g = [[a, b], [c, d]];
on the P^1 basis it sends the delta at z to the delta at the row-vector image
z * g.  Integer matrices act through reduction into the field.
"""

from __future__ import annotations

import numpy as np

from .gfq import GF, Mat, build_field


class SingularActionError(ValueError):
    """Raised when a matrix acts non-invertibly where a group action is required."""


def _to_codes(F, g):
    """2x2 integer matrix -> codes in the prime subfield of F."""
    return [[F.from_int(int(g[0][0])), F.from_int(int(g[0][1]))],
            [F.from_int(int(g[1][0])), F.from_int(int(g[1][1]))]]


class CoefModule:
    """Base: a module over F with a right action of 2x2 matrices."""

    kind = ("abstract",)

    def __init__(self, F, dim, labels):
        self.field = F
        self.dim = dim
        self.labels = labels
        self._cache = {}

    def act(self, g):
        """Action matrix for a 2x2 integer matrix (entries reduced into F)."""
        key = (int(g[0][0]), int(g[0][1]), int(g[1][0]), int(g[1][1]))
        hit = self._cache.get(key)
        if hit is None:
            hit = self.act_codes(_to_codes(self.field, g))
            self._cache[key] = hit
        return hit

    def act_codes(self, g):
        raise NotImplementedError

    def __repr__(self):
        return f"CoefModule{self.kind}/{self.field}"


class TrivialModule(CoefModule):
    kind = ("trivial",)

    def __init__(self, F):
        super().__init__(F, 1, ("1",))

    def act_codes(self, g):
        return Mat.identity(self.field, 1)


class SymmModule(CoefModule):
    """Symm^k(F^2): basis X^i Y^(k-i), i = 0..k."""

    def __init__(self, F, k):
        if k < 0:
            raise ValueError("symmetric power weight must be >= 0")
        self.k = k
        labels = tuple(f"X^{i}Y^{k - i}" for i in range(k + 1))
        super().__init__(F, k + 1, labels)
        self.kind = ("symm", k)

    def act_codes(self, g):
        F = self.field
        k = self.k
        a, b = g[0]
        c, d = g[1]
        zero = F.from_int(0) if F.kind == "rational" else 0
        # pa[i][j] = coefficient of X^j Y^(i-j) in (a X + b Y)^i, same for
        # (c X + d Y)^i in pc; built by convolution
        pa = [[F.from_int(1) if F.kind == "rational" else 1]]
        pc = [list(pa[0])]
        for i in range(k):
            na = [zero] * (i + 2)
            nc = [zero] * (i + 2)
            for j, v in enumerate(pa[i]):
                if v:
                    na[j] = F.add(na[j], F.mul(b, v))
                    na[j + 1] = F.add(na[j + 1], F.mul(a, v))
            for j, v in enumerate(pc[i]):
                if v:
                    nc[j] = F.add(nc[j], F.mul(d, v))
                    nc[j + 1] = F.add(nc[j + 1], F.mul(c, v))
            pa.append(na)
            pc.append(nc)
        rows = []
        for i in range(k + 1):
            # (aX+bY)^i (cX+dY)^(k-i) = sum_j coeff * X^j Y^(k-j)
            row = [zero] * (k + 1)
            for u, vu in enumerate(pa[i]):
                if not vu:
                    continue
                for w, vw in enumerate(pc[k - i]):
                    if vw:
                        row[u + w] = F.add(row[u + w], F.mul(vu, vw))
            rows.append(row)
        return Mat(F, rows)


class InducedModule(CoefModule):
    """F[P^1(F_q)]: permutation module under the projective row action."""

    def __init__(self, F, q):
        if not isinstance(F, GF):
            raise ValueError("induced module needs a finite field context")
        self.q = q
        if q == F.p**F.d:
            self.point_field = F
        elif q == F.p:
            self.point_field = build_field(F.p, 1)
        else:
            raise ValueError(f"induced({q}) needs a field of order {q} (or prime q over F_p)")
        K = self.point_field
        pts = [(0, 1)] + [(1, t) for t in range(K.q)]
        self.points = tuple(pts)
        self.point_index = {pt: i for i, pt in enumerate(pts)}
        super().__init__(F, q + 1, tuple(f"d{pt}" for pt in pts))
        self.kind = ("induced", q)

    def normalize_point(self, c, d):
        K = self.point_field
        if c == 0:
            if d == 0:
                raise SingularActionError("(0 : 0) is not a projective point")
            return (0, 1)
        return (1, K.mul(K.inv(c), d))

    def point_perm(self, g):
        """Permutation array: image index of each basis point under z -> z*g."""
        K = self.point_field
        a, b = g[0]
        c, d = g[1]
        det = K.sub(K.mul(a, d), K.mul(b, c))
        if det == 0:
            raise SingularActionError("matrix acts singularly on P^1")
        perm = np.empty(self.dim, dtype=np.int64)
        for i, (u, v) in enumerate(self.points):
            nu = K.add(K.mul(u, a), K.mul(v, c))
            nv = K.add(K.mul(u, b), K.mul(v, d))
            perm[i] = self.point_index[self.normalize_point(nu, nv)]
        return perm

    def _codes_to_point_field(self, g):
        if self.point_field is self.field:
            return g
        # entries must lie in the prime subfield
        K = self.point_field
        out = []
        for row in g:
            nr = []
            for e in row:
                if e >= self.field.p:
                    raise ValueError("induced(p) over an extension: integer actions only")
                nr.append(e % K.p)
            out.append(nr)
        return out

    def act_codes(self, g):
        perm = self.point_perm(self._codes_to_point_field(g))
        out = Mat.zeros(self.field, self.dim, self.dim)
        out.a[np.arange(self.dim), perm] = 1
        return out


class TensorModule(CoefModule):
    """Tensor product; basis index i*dim(B) + j, action = Kronecker product."""

    def __init__(self, A, B):
        if A.field is not B.field:
            raise ValueError("tensor factors must share the field")
        self.factors = (A, B)
        labels = tuple(f"{la}*{lb}" for la in A.labels for lb in B.labels)
        super().__init__(A.field, A.dim * B.dim, labels)
        self.kind = ("tensor", A.kind, B.kind)

    def act_codes(self, g):
        A, B = self.factors
        ma = A.act_codes(g)
        mb = B.act_codes(g)
        return Mat(self.field, _kron(self.field, ma.a, mb.a))


def _kron(F, a, b):
    from ._kernels_numpy import _vmul
    m, n = a.shape
    r, s = b.shape
    out = np.zeros((m * r, n * s), dtype=np.int64)
    for i in range(m):
        for j in range(n):
            if a[i, j]:
                out[i * r:(i + 1) * r, j * s:(j + 1) * s] = _vmul(
                    int(a[i, j]), b, F.p, F.d, F.exp2, F.log)
    return out


class TwistedTensorModule(CoefModule):
    """Tensor of Symm^(p-1) factors, the j-th twisted by Frobenius^e_j."""

    def __init__(self, p, exponents, F=None):
        exponents = tuple(exponents)
        if F is None:
            F = build_field(p, max(1, len(exponents)))
        if len({e % F.d for e in exponents}) != len(exponents):
            raise ValueError("Frobenius exponents must be distinct mod the field degree")
        self.p = p
        self.exponents = exponents
        self._symm = SymmModule(F, p - 1)
        super().__init__(F, p**len(exponents),
                         tuple(f"t{i}" for i in range(p**len(exponents))))
        self.kind = ("twisted", exponents)

    def act_codes(self, g):
        F = self.field
        acc = None
        for e in self.exponents:
            tw = [[F.frobenius(x, e) for x in row] for row in g]
            m = self._symm.act_codes(tw)
            acc = m if acc is None else Mat(F, _kron(F, acc.a, m.a))
        if acc is None:
            return Mat.identity(F, 1)
        return acc


def trivial_module(F):
    return TrivialModule(F)


def symm_module(k, F):
    """Symm^k(F^2) with the substitution action."""
    return SymmModule(F, k) if k > 0 else SymmModule(F, 0)


def induced_module(q, F):
    """F[P^1(F_q)] (q = size of the point field, F of the same characteristic)."""
    return InducedModule(F, q)


def twisted_tensor_module(p, exponents, F=None):
    return TwistedTensorModule(p, exponents, F)


def tensor_module(A, B):
    return TensorModule(A, B)


class Splitting:
    """Equivariant splitting of F[P^1(F_q)] into constants + zero-sum parts."""

    def __init__(self, module, proj_const, proj_zero, incl_const, incl_zero):
        self.module = module
        self.proj_const = proj_const      # (q+1) x (q+1), image = constants
        self.proj_zero = proj_zero        # (q+1) x (q+1), image = zero-sum
        self.incl_const = incl_const      # 1 x (q+1): the constant function 1
        self.incl_zero = incl_zero        # q x (q+1): basis rows of zero-sum


def split_induced(M):
    """Canonical splitting; q + 1 is invertible since it is prime to p."""
    if not isinstance(M, InducedModule):
        raise ValueError("split_induced needs an induced module")
    F = M.field
    n = M.dim
    c = F.inv(F.from_int(n))  # 1/(q+1), nonzero mod p
    ones = Mat(F, np.full((n, n), c, dtype=np.int64))
    pc = ones
    pz = Mat.identity(F, n) - pc
    incl_const = Mat(F, np.ones((1, n), dtype=np.int64))
    # zero-sum basis: delta_i - delta_last
    iz = np.zeros((n - 1, n), dtype=np.int64)
    for i in range(n - 1):
        iz[i, i] = 1
        iz[i, n - 1] = F.neg(1)
    incl_zero = Mat(F, iz)
    return Splitting(M, pc, pz, incl_const, incl_zero)


def ev_intertwiner(p, F=None):
    """Equivariant injection Symm^(p-1)(F_p^2) -> zero-sum part of F[P^1(F_p)].

    The monomial basis element X^i Y^(p-1-i) maps to the function
    z = (c : d) |-> d^i (-c)^(p-1-i); evaluation at (d, -c) is what makes the
    map commute with both actions, and scaling ambiguity dies since
    lambda^(p-1) = 1.  Returns a p x (p+1) matrix (rows = monomials, columns
    = P^1 points in induced_module(p, F) order).
    """
    if F is None:
        F = build_field(p, 1)
    M = induced_module(p, F)
    k = p - 1
    E = Mat.zeros(F, p, p + 1)
    K = M.point_field
    for col, (c, d) in enumerate(M.points):
        x = d
        y = K.neg(c)
        for i in range(k + 1):
            E.a[i, col] = F.mul(F.pow(x, i), F.pow(y, k - i))
    return E
