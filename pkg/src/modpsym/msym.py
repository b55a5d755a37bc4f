"""Weight-k Manin symbol spaces for Gamma_H(N) over an exact field.

Presentation: generators (coefficient basis element) x (pair class), modulo
the two-term and three-term relations m + m*sigma = 0, m + m*tau + m*tau^2 = 0
for sigma = [[0,-1],[1,0]], tau = [[0,-1],[1,-1]] acting on the right of both
the index and the coefficient.  The generator [P, (c:d)] corresponds to the
modular symbol (P|gamma^{-1}) {gamma 0, gamma oo} for any lift gamma of
(c, d); conversions of general paths back to the quotient basis go through
continued fractions (Manin's trick), which is what the twisted degeneracy map
and the coset-sum Hecke oracle use.

Hecke operators use Merel's Heilbronn family by default.  The level-lowering
maps are the duals of the two cohomology degeneracy maps: t = 1 forgets the
level structure, t = p pushes forward along z -> pz, transporting the
coefficient through the adjugate of diag(p, 1).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from . import coef as coefmod
from .cong import SubgroupSpec, cusp_classes, gamma0, lift_to_sl2z, pair_classes
from .gfq import GF, Mat, QQ, is_prime
from .heilbronn import hecke_family

SIGMA = ((0, -1), (1, 0))
TAU = ((0, -1), (1, -1))
TAU2 = ((-1, 1), (-1, 0))
ETA = ((-1, 0), (0, 1))


def _mat2_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat2_inv_sl2(g):
    (a, b), (c, d) = g
    return ((d, -b), (-c, a))


class ManinSpace:
    def __init__(self, spec: SubgroupSpec, k, coef=None, field=None, cache=None):
        if k < 2:
            raise ValueError("weight must be >= 2")
        if field is None:
            raise ValueError("an explicit field context is required")
        if isinstance(field, GF) and field.p in (2, 3):
            raise ValueError("characteristic 2 and 3 are out of scope (p >= 5)")
        if coef is None:
            coef = (coefmod.trivial_module(field) if k == 2
                    else coefmod.symm_module(k - 2, field))
        if coef.field is not field:
            raise ValueError("coefficient module field does not match the space field")
        self.spec = spec
        self.k = k
        self.coef = coef
        self.F = field
        self.cache = cache
        self.pairs = pair_classes(spec)
        self.npairs = len(self.pairs)
        self.cdim = coef.dim
        self.ngens = self.cdim * self.npairs
        self._ops = {}
        self._build()

    # -- presentation ---------------------------------------------------------
    def gen_index(self, m, x):
        return m * self.npairs + x

    def _build(self):
        F = self.F
        G = self.ngens
        rel = Mat.zeros(F, 2 * G, G)
        a_sig = self.coef.act(SIGMA)
        a_tau = self.coef.act(TAU)
        a_tau2 = self.coef.act(TAU2)
        L = self.spec.level
        reps = self.pairs.reps
        sig_x = [self.pairs.index_of(d, -c) for (c, d) in reps]
        tau_x = [self.pairs.index_of(d, -c - d) for (c, d) in reps]
        tau2_x = [self.pairs.index_of(-c - d, c) for (c, d) in reps]
        for x in range(self.npairs):
            for m in range(self.cdim):
                g = self.gen_index(m, x)
                r1 = 2 * g
                r2 = 2 * g + 1
                self._acc(rel, r1, g, 1)
                self._acc_row(rel, r1, a_sig, m, sig_x[x])
                self._acc(rel, r2, g, 1)
                self._acc_row(rel, r2, a_tau, m, tau_x[x])
                self._acc_row(rel, r2, a_tau2, m, tau2_x[x])
        self.relations = rel
        red, rank, piv = rel.rref()
        pivset = set(piv)
        self.free = tuple(j for j in range(G) if j not in pivset)
        self.dim = G - rank
        proj = Mat.zeros(F, self.dim, G)
        if F is QQ:
            for idx, f in enumerate(self.free):
                proj.a[idx][f] = Fraction(1)
            for i, pc in enumerate(piv):
                for idx, f in enumerate(self.free):
                    if red.a[i][f]:
                        proj.a[idx][pc] = -red.a[i][f]
        else:
            for idx, f in enumerate(self.free):
                proj.a[idx, f] = 1
            for i, pc in enumerate(piv):
                col = red.a[i, list(self.free)]
                if col.any():
                    from ._kernels_numpy import _vsub
                    proj.a[:, pc] = _vsub(np.zeros_like(col), col, F.p, F.d)
        self.proj = proj

    def _acc(self, M, i, j, v):
        if self.F is QQ:
            M.a[i][j] += v
        else:
            M.a[i, j] = self.F.add(int(M.a[i, j]), v)

    def _acc_row(self, M, i, act, m, x):
        """M[i, gen(j, x)] += act[m, j] for all j."""
        if x is None:
            return
        if self.F is QQ:
            for j in range(self.cdim):
                v = act.a[m][j]
                if v:
                    M.a[i][self.gen_index(j, x)] += v
        else:
            row = act.a[m]
            for j in np.nonzero(row)[0]:
                g = self.gen_index(int(j), x)
                M.a[i, g] = self.F.add(int(M.a[i, g]), int(row[j]))

    def gen_column(self, m, c, d):
        """Quotient coordinates of the generator (m, class of (c, d)); None if invalid."""
        x = self.pairs.index_of(c, d)
        if x is None:
            return None
        return self.proj.take_cols([self.gen_index(m, x)])

    def descriptor(self):
        fld = ({"kind": "rational"} if self.F is QQ else
               {"kind": "gf", "p": self.F.p, "d": self.F.d, "poly": list(self.F.poly)})
        return {
            "n": self.spec.n,
            "hgens": "full" if self.spec.hgens is None else list(self.spec.hgens),
            "aux": self.spec.aux,
            "weight": self.k,
            "coef": list(map(str, self.coef.kind)),
            "field": fld,
        }

    # -- operators ------------------------------------------------------------
    def _cached_op(self, label, builder):
        if label in self._ops:
            return self._ops[label]
        M = None
        if self.cache is not None and self.F is not QQ:
            M = self.cache.load(self.descriptor(), label, self.F)
        if M is None:
            M = builder()
            if self.cache is not None and self.F is not QQ:
                self.cache.store(self.descriptor(), label, M)
        self._ops[label] = M
        return M

    def _family_action(self, family):
        """Operator sum_h [P|h, x*h] over the quotient, dropping invalid x*h."""
        F = self.F
        L = self.spec.level
        A = Mat.zeros(F, self.ngens, self.dim)
        reps = self.pairs.reps
        for h in family:
            ah = self.coef.act(h)
            (ha, hb), (hc, hd) = h
            dest = [self.pairs.index_of(c * ha + d * hc, c * hb + d * hd)
                    for (c, d) in reps]
            for col, genidx in enumerate(self.free):
                m, x = divmod(genidx, self.npairs)
                x2 = dest[x]
                if x2 is None:
                    continue
                if F is QQ:
                    for j in range(self.cdim):
                        v = ah.a[m][j]
                        if v:
                            A.a[self.gen_index(j, x2)][col] += v
                else:
                    row = ah.a[m]
                    for j in np.nonzero(row)[0]:
                        g = self.gen_index(int(j), x2)
                        A.a[g, col] = F.add(int(A.a[g, col]), int(row[j]))
        return self.proj @ A

    def hecke_operator(self, r, flavor="merel"):
        """Matrix of T_r on the quotient basis (r prime, r not dividing the level)."""
        if not is_prime(r):
            raise ValueError("Hecke index must be prime here")
        if self.spec.level % r == 0:
            raise ValueError(f"T_{r} refused: {r} divides the level {self.spec.level}")
        if isinstance(self.F, GF) and r % self.F.p == 0 and \
                self.coef.kind[0] not in ("trivial", "symm"):
            raise ValueError("T_char needs a polynomial coefficient module")
        if flavor != "merel":
            return self._family_action(hecke_family(r, flavor))
        return self._cached_op(f"T{r}", lambda: self._family_action(hecke_family(r)))

    def diamond_operator(self, dd):
        """<d>: left translation by a lift of diag(d^-1, d).

        On Manin generators it scales the index pair by d and leaves the
        coefficient untouched (the conjugating lift cancels); trivial on
        Gamma_0 spaces.
        """
        L = self.spec.level
        if L > 1 and gcd(dd, L) != 1:
            raise ValueError(f"<{dd}>: not a unit mod {L}")
        label = f"D{dd % L if L > 1 else 1}"

        def build():
            F = self.F
            out = Mat.zeros(F, self.dim, self.dim)
            for col, genidx in enumerate(self.free):
                m, x = divmod(genidx, self.npairs)
                c, d2 = self.pairs.reps[x]
                vec = self.gen_column(m, dd * c, dd * d2)
                if vec is None:
                    raise RuntimeError("diamond image invalid (internal)")
                if F is QQ:
                    for i in range(self.dim):
                        out.a[i][col] = vec.a[i][0]
                else:
                    out.a[:, col] = vec.a[:, 0]
            return out

        return self._cached_op(label, build)

    def star_involution(self):
        return self._cached_op("star", lambda: self._family_action((ETA,)))

    # -- boundary / cuspidal ----------------------------------------------------
    def _eval_poly_row(self, row, a, c):
        """Evaluate the coefficient-row polynomial at integer point (a, c)."""
        F = self.F
        if self.coef.kind[0] == "trivial":
            return row[0]
        k = self.coef.k
        if F is QQ:
            return sum(row[i] * Fraction(a)**i * Fraction(c)**(k - i)
                       for i in range(k + 1) if row[i])
        aa = F.from_int(a)
        cc = F.from_int(c)
        acc = 0
        for i in range(k + 1):
            v = int(row[i])
            if v:
                acc = F.add(acc, F.mul(v, F.mul(F.pow(aa, i), F.pow(cc, k - i))))
        return acc

    def boundary_map(self):
        """Weight-k boundary map to the cusp-class space; kernel = cuspidal part."""
        if self.coef.kind[0] not in ("trivial", "symm"):
            raise ValueError("boundary map needs a weight-k coefficient module")
        classes, classify = cusp_classes(self.spec)
        F = self.F
        B = Mat.zeros(F, len(classes), self.dim)
        L = self.spec.level
        for col, genidx in enumerate(self.free):
            m, x = divmod(genidx, self.npairs)
            c, d = self.pairs.reps[x]
            gam = lift_to_sl2z(c, d, L)
            (a, b), (c2, d2) = gam
            ginv = _mat2_inv_sl2(gam)
            arow = self.coef.act(ginv)
            row = arow.a[m] if F is QQ else arow.a[m]
            vplus = self._eval_poly_row(row, a, c2)
            vminus = self._eval_poly_row(row, b, d2)
            iplus = classify(a, c2)
            iminus = classify(b, d2)
            if F is QQ:
                B.a[iplus][col] += vplus
                B.a[iminus][col] -= vminus
            else:
                B.a[iplus, col] = F.add(int(B.a[iplus, col]), vplus)
                B.a[iminus, col] = F.sub(int(B.a[iminus, col]), vminus)
        return B, classes

    def cuspidal_basis(self):
        if "cuspidal" not in self._ops:
            B, _ = self.boundary_map()
            self._ops["cuspidal"] = B.right_kernel()
        return self._ops["cuspidal"]

    # -- modular symbol -> basis conversion (Manin's trick) --------------------
    def manin_term(self, coefrow, c, d):
        """Column of [coefrow, (c:d)]; None when the class is invalid."""
        x = self.pairs.index_of(c, d)
        if x is None:
            return None
        F = self.F
        out = Mat.zeros(F, self.dim, 1)
        if F is QQ:
            for j in range(self.cdim):
                v = coefrow[j]
                if v:
                    g = self.gen_index(j, x)
                    for i in range(self.dim):
                        if self.proj.a[i][g]:
                            out.a[i][0] += v * self.proj.a[i][g]
        else:
            cols = self.proj.a[:, [self.gen_index(j, x) for j in range(self.cdim)]]
            vec = np.asarray([int(v) for v in coefrow], dtype=np.int64)
            prod = Mat(F, cols) @ Mat(F, vec.reshape(-1, 1))
            out = prod
        return out

    def modsym_vector(self, coefrow, alpha, beta):
        """Quotient coordinates of the modular symbol (coefrow, {alpha, beta}).

        alpha, beta are (numerator, denominator) pairs, (1, 0) = infinity.
        {alpha, beta} = {oo, beta} - {oo, alpha}; each {oo, x} is split into
        unimodular paths through the continued fraction convergents of x.
        """
        F = self.F
        total = Mat.zeros(F, self.dim, 1)
        for sgn, (num, den) in ((-1, alpha), (1, beta)):
            if den == 0:
                continue
            g = gcd(num, den)
            if g:
                num //= g
                den //= g
            if den < 0:
                num, den = -num, -den
            # convergents of num/den
            a, b = num, den
            cf = []
            while b:
                q, r = divmod(a, b)
                cf.append(q)
                a, b = b, r
            pp, qq = 1, 0
            pc, qc = cf[0], 1
            # segment j carries [[(-1)^(j-1) p_j, p_(j-1)], [(-1)^(j-1) q_j, q_(j-1)]]
            mats = [((-pc, pp), (-qc, qq))]
            for j in range(1, len(cf)):
                pn = cf[j] * pc + pp
                qn = cf[j] * qc + qq
                pp, qq, pc, qc = pc, qc, pn, qn
                sgnj = -1 if (j % 2 == 0) else 1
                mats.append(((sgnj * pc, pp), (sgnj * qc, qq)))
            for gam in mats:
                arow = self.coef.act(gam)
                if self.F is QQ:
                    row = [sum(coefrow[i] * arow.a[i][j] for i in range(self.cdim))
                           for j in range(self.cdim)]
                else:
                    vec = Mat(F, np.asarray([[int(v) for v in coefrow]], dtype=np.int64))
                    row = (vec @ arow).a[0]
                term = self.manin_term(row, gam[1][0], gam[1][1])
                if term is None:
                    raise RuntimeError("unimodular path hit an invalid class (internal)")
                total = total + term if sgn > 0 else total - term
        return total

    # -- degeneracy maps --------------------------------------------------------
    def degeneracy_matrix(self, target, t):
        """Level-lowering map to `target` (level = self.level / p), t in {1, p}."""
        L = self.spec.level
        tL = target.spec.level
        if L % tL != 0 or not is_prime(L // tL):
            raise ValueError("levels must differ by one prime")
        p = L // tL
        if t not in (1, p):
            raise ValueError(f"degeneracy parameter must be 1 or {p}")
        if target.k != self.k or target.coef.kind != self.coef.kind:
            raise ValueError("degeneracy needs matching weight and coefficient kind")
        if self.coef.kind[0] not in ("trivial", "symm"):
            raise ValueError("degeneracy maps need weight-k coefficient modules")
        label = f"deg{t}@{tL}"
        if label in self._ops:
            return self._ops[label]
        F = self.F
        D = Mat.zeros(F, target.dim, self.dim)
        for col, genidx in enumerate(self.free):
            m, x = divmod(genidx, self.npairs)
            c, d = self.pairs.reps[x]
            if t == 1:
                colvec = target.gen_column(m, c % tL if tL > 1 else 0,
                                           d % tL if tL > 1 else 0)
                if colvec is None:
                    raise RuntimeError("forgetful image invalid (internal)")
            else:
                gam = lift_to_sl2z(c, d, L)
                (a, b), (c2, d2) = gam
                # coefficient transport: P | gamma^{-1} adj(diag(p, 1))
                trans = _mat2_mul(_mat2_inv_sl2(gam), ((1, 0), (0, p)))
                arow = self.coef.act(trans)
                row = arow.a[m]
                colvec = target.modsym_vector(row, (p * b, d2), (p * a, c2))
            if F is QQ:
                for i in range(target.dim):
                    D.a[i][col] = colvec.a[i][0]
            else:
                D.a[:, col] = colvec.a[:, 0]
        self._ops[label] = D
        return D

    def hecke_operator_coset_oracle(self, r):
        """Independent T_r via the r+1 coset matrices and path conversion.

        Slower route used as a cross-check of the Heilbronn families:
        T_r m = sum_h (Q|adj(h), {h alpha, h beta}) over h in
        {[[1, j], [0, r]]} u {[[r, 0], [0, 1]]}.
        """
        if self.spec.level % r == 0:
            raise ValueError("coset oracle needs r prime to the level")
        F = self.F
        cosets = [((1, j), (0, r)) for j in range(r)] + [((r, 0), (0, 1))]
        T = Mat.zeros(F, self.dim, self.dim)
        for col, genidx in enumerate(self.free):
            m, x = divmod(genidx, self.npairs)
            c, d = self.pairs.reps[x]
            gam = lift_to_sl2z(c, d, self.spec.level)
            (a, b), (c2, d2) = gam
            ginv = _mat2_inv_sl2(gam)
            acc = Mat.zeros(F, self.dim, 1)
            for h in cosets:
                (ha, hb), (hc, hd) = h
                adj = ((hd, -hb), (-hc, ha))
                trans = _mat2_mul(ginv, adj)
                arow = self.coef.act(trans)
                row = arow.a[m]
                alpha = (ha * b + hb * d2, hc * b + hd * d2)
                beta = (ha * a + hb * c2, hc * a + hd * c2)
                acc = acc + self.modsym_vector(row, alpha, beta)
            if F is QQ:
                for i in range(self.dim):
                    T.a[i][col] = acc.a[i][0]
            else:
                T.a[:, col] = acc.a[:, 0]
        return T

    def __repr__(self):
        return (f"ManinSpace({self.spec.label()}, k={self.k}, "
                f"coef={self.coef.kind}, {self.F}, dim={self.dim})")


# ---------------------------------------------------------------------------
# module-level operation wrappers


def build_space(spec, k, coef=None, field=None, cache=None):
    return ManinSpace(spec, k, coef, field, cache)


def hecke_operator(S, r, flavor="merel"):
    return S.hecke_operator(r, flavor)


def diamond_operator(S, dd):
    return S.diamond_operator(dd)


def star_involution(S):
    return S.star_involution()


def cuspidal_subspace(S):
    return S.cuspidal_basis()


def degeneracy_down(S_big, t, target):
    return S_big.degeneracy_matrix(target, t)


def pnew_subspace(S_big, target):
    """Basis of the intersection of both degeneracy kernels inside the cuspidal part."""
    C = S_big.cuspidal_basis()
    p = S_big.spec.level // target.spec.level
    D1 = S_big.degeneracy_matrix(target, 1)
    Dp = S_big.degeneracy_matrix(target, p)
    stacked = Mat.vstack([D1 @ C, Dp @ C])
    K = stacked.right_kernel()
    return C @ K


def shapiro_iso(N, p, k, field, spec=None, cache=None):
    """Explicit isomorphism Space(level Np, weight k) ~ Space(level N, induced).

    Returns (S_big, S_ind, iso) where iso maps S_big coordinates to S_ind
    coordinates; built from the CRT bijection on pair classes, so it
    intertwines every T_r with r prime to Np exactly.
    """
    base = spec if spec is not None else gamma0(N)
    if base.level != N:
        raise ValueError("spec level must equal N")
    if not is_prime(p) or N % p == 0:
        raise ValueError("auxiliary prime must not divide the level")
    big_spec = base.with_aux(p)
    S_big = ManinSpace(big_spec, k, None, field, cache)
    ind = coefmod.induced_module(p, field)
    if k == 2:
        C = ind
        def cidx(m, z):
            return z
    else:
        C = coefmod.tensor_module(coefmod.symm_module(k - 2, field), ind)
        def cidx(m, z):
            return m * ind.dim + z
    S_ind = ManinSpace(base, k, C, field, cache)
    if S_ind.dim != S_big.dim:
        raise RuntimeError("induced-coefficient transfer: dimension mismatch")
    F = field
    iso = Mat.zeros(F, S_ind.dim, S_big.dim)
    Kpt = ind.point_field
    for col, genidx in enumerate(S_big.free):
        m, x = divmod(genidx, S_big.npairs)
        c, d = S_big.pairs.reps[x]
        y = S_ind.pairs.index_of(c % N if N > 1 else 0, d % N if N > 1 else 0)
        z = ind.point_index[ind.normalize_point(c % p, d % p)]
        vec = S_ind.proj.take_cols([S_ind.gen_index(cidx(m, z), y)])
        iso.a[:, col] = vec.a[:, 0]
    if iso.rank() != S_big.dim:
        raise RuntimeError("induced-coefficient transfer is not invertible (internal)")
    return S_big, S_ind, iso
