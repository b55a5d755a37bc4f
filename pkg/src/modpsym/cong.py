"""Combinatorics of congruence subgroups.

P^1(Z/N), coset indices for Gamma_H(N) (and Gamma_H(N) intersected with
Gamma_0(p)), lifts of index classes to SL2(Z), and cusp classes with a total
classifier.  Index classes are coprime pairs (c, d) mod N up to scaling by
the unit subgroup generated by H and -1; for Gamma_0 this is the standard
P^1(Z/N).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .gfq import factorize, is_prime


class CongError(ValueError):
    pass


def _units(N):
    if N == 1:
        return (0,)  # the single residue acts trivially
    return tuple(u for u in range(1, N) if gcd(u, N) == 1)


def _unit_subgroup(N, gens, include_minus_one=True):
    """Subgroup of (Z/N)^* generated by gens (optionally together with -1)."""
    if N == 1:
        return (0,)
    seen = {1 % N}
    if include_minus_one:
        seen.add((-1) % N)
    gens = [g % N for g in gens]
    for g in gens:
        if gcd(g, N) != 1:
            raise CongError(f"subgroup generator {g} is not a unit mod {N}")
    changed = True
    while changed:
        changed = False
        cur = sorted(seen)
        for a in cur:
            for b in cur + gens:
                y = (a * b) % N
                if y not in seen:
                    seen.add(y)
                    changed = True
    return tuple(sorted(seen))


@dataclass(frozen=True)
class SubgroupSpec:
    """Gamma_H(N), optionally intersected with Gamma_0(aux) for a prime aux.

    hgens = None selects the full unit group (Gamma_0(N)); hgens = () selects
    the trivial subgroup (Gamma_1(N)).
    """

    n: int
    hgens: tuple | None = None
    aux: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise CongError("level must be >= 1")
        if self.hgens is not None:
            object.__setattr__(self, "hgens", tuple(sorted(g % self.n for g in self.hgens)))
            for g in self.hgens:
                if gcd(g, self.n) != 1:
                    raise CongError(f"{g} is not a unit mod {self.n}")
        if self.aux is not None:
            if not is_prime(self.aux):
                raise CongError("auxiliary level must be prime")
            if self.n % self.aux == 0:
                raise CongError(f"auxiliary prime {self.aux} divides the level {self.n}")

    @property
    def level(self):
        return self.n * (self.aux or 1)

    def scalers(self):
        """Units mod level that preserve the coset classes (contains -1)."""
        L = self.level
        if self.hgens is None:
            base = set(_units(self.n))
        else:
            base = set(_unit_subgroup(self.n, self.hgens))
        if L == 1:
            return (0,)
        out = tuple(u for u in _units(L) if (u % self.n if self.n > 1 else 0) in base)
        return out

    @property
    def is_gamma0(self):
        return self.hgens is None

    def with_aux(self, p):
        return SubgroupSpec(self.n, self.hgens, p)

    def label(self):
        core = f"Gamma0({self.n})" if self.is_gamma0 else (
            f"Gamma1({self.n})" if not self.hgens else f"GammaH({self.n},{list(self.hgens)})")
        return core if self.aux is None else f"{core}&Gamma0({self.aux})"


def gamma0(N):
    return SubgroupSpec(N, None)


def gamma1(N):
    return SubgroupSpec(N, ())


class PairClasses:
    """Coprime pairs (c, d) mod N modulo scaling by a fixed unit set.

    Normal form: the tuple-minimal scaled representative (smallest c, then
    smallest d).  With the full unit group this is P^1(Z/N).
    """

    def __init__(self, N, scalers):
        self.N = N
        self.scalers = tuple(scalers)
        norm = {}
        reps = set()
        for c in range(max(N, 1)):
            for d in range(max(N, 1)):
                if (c, d) in norm:
                    continue
                if N > 1 and gcd(gcd(c, d), N) != 1:
                    norm[(c, d)] = None
                    continue
                orbit = {((c * u) % N, (d * u) % N) for u in self.scalers} if N > 1 else {(0, 0)}
                rep = min(orbit)
                for pt in orbit:
                    norm[pt] = rep
                reps.add(rep)
        self._norm = norm
        self.reps = sorted(reps)
        self.index = {r: i for i, r in enumerate(self.reps)}

    def __len__(self):
        return len(self.reps)

    def normalize(self, c, d):
        r = self._norm[(c % self.N, d % self.N)] if self.N > 1 else (0, 0)
        if r is None:
            raise CongError(f"({c}, {d}) is not a valid class mod {self.N}")
        return r

    def index_of(self, c, d):
        """Index of the class of (c, d), or None when gcd(c, d, N) > 1."""
        r = self._norm[(c % self.N, d % self.N)] if self.N > 1 else (0, 0)
        return None if r is None else self.index[r]


@lru_cache(maxsize=None)
def _pair_classes(N, scalers):
    return PairClasses(N, scalers)


def pair_classes(spec: SubgroupSpec):
    return _pair_classes(spec.level, spec.scalers())


def p1_normalize(c, d, N):
    """Canonical representative of (c : d) in P^1(Z/N)."""
    pc = _pair_classes(N, _units(N))
    return pc.normalize(c, d)


def p1_list(N):
    """All classes of P^1(Z/N) in normalized order."""
    pc = _pair_classes(N, _units(N))
    return list(pc.reps)


def p1_size(N):
    """|P^1(Z/N)| = N * prod_{l | N} (1 + 1/l), computed exactly."""
    out = 1
    for ell, a in factorize(N).items():
        out *= ell ** (a - 1) * (ell + 1)
    return out if N > 1 else 1


def sl2z_order_mod(N):
    """|SL2(Z/N)| = N^3 prod_{l | N} (1 - 1/l^2)."""
    out = 1
    for ell, a in factorize(N).items():
        out *= ell ** (3 * a - 2) * (ell * ell - 1)
    return out if N > 1 else 1


def subgroup_index(spec: SubgroupSpec):
    """[SL2(Z) : Gamma_H(N)] (no folding by -1)."""
    L = spec.level
    if L == 1:
        return 1
    if spec.hgens is None:
        hsize = len(_units(spec.n)) if spec.n > 1 else 1
    else:
        hsize = len(_unit_subgroup(spec.n, spec.hgens, include_minus_one=False))
    hsize *= len(_units(spec.aux)) if spec.aux else 1
    return sl2z_order_mod(L) // (L * hsize)


def lift_to_sl2z(c, d, N):
    """Integer matrix [[a, b], [c', d']] with det 1, (c', d') == (c, d) mod N.

    Entries are bounded by O(N^2).  Standard Manin-symbol lift.
    """
    if N == 1:
        return [[1, 0], [0, 1]]
    c %= N
    d %= N
    if gcd(gcd(c, d), N) != 1:
        raise CongError(f"({c}, {d}) is not liftable mod {N}")
    if c == 0 and d == 1:
        return [[1, 0], [0, 1]]
    if c == 0:
        c = N
    g = gcd(c, d)
    if g != 1:
        # shift d by multiples of N until coprime with c; reachable since
        # gcd(c, d, N) = 1
        t = d
        while gcd(c, t) != 1:
            t += N
        d = t
    # a*d - b*c = 1
    a, b = _gcdex(d, c)
    # d*a + c*b = 1  =>  a*d - (-b)*c = 1
    return [[a, -b], [c, d]]


def _gcdex(a, b):
    """(x, y) with x*a + y*b = gcd(a, b); here used with gcd = 1."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0


# ---------------------------------------------------------------------------
# cusps


@dataclass(frozen=True)
class CuspClass:
    level: int
    rep: tuple  # (numerator, denominator), infinity = (1, 0)
    spec: SubgroupSpec


def _reduce_cusp(a, c):
    if c == 0:
        return (1, 0)
    g = gcd(a, c)
    if g:
        a //= g
        c //= g
    if c < 0:
        a, c = -a, -c
    return (a, c)


class CuspClassifier:
    """Total classifier for Gamma_H(N)-classes of cusps.

    Two cusps u1/v1, u2/v2 (coprime integer pairs) are equivalent iff for
    some scaler h: v2 == h*v1 (mod L) and u2 == h^{-1}*u1 (mod gcd(v1, L)).
    """

    def __init__(self, spec: SubgroupSpec):
        self.spec = spec
        self.L = spec.level
        sc = spec.scalers()
        if self.L == 1:
            self._pairs = ((1, 1),)
        else:
            self._pairs = tuple((h, pow(h, -1, self.L)) for h in sc)
        self.reps = []
        self._enumerate()

    def _equiv(self, p1, p2):
        u1, v1 = p1
        u2, v2 = p2
        L = self.L
        if L == 1:
            return True
        g = gcd(v1, L)
        for h, hinv in self._pairs:
            if (v2 - h * v1) % L == 0 and (u2 - hinv * u1) % g == 0:
                return True
        return False

    def _enumerate(self):
        L = self.L
        for v in range(L + 1):
            for u in range(max(L, 1)):
                if gcd(u, v) != 1 and not (v == 0 and u == 1):
                    continue
                pt = _reduce_cusp(u, v) if not (v == 0) else (1, 0)
                if not any(self._equiv(pt, r) for r in self.reps):
                    self.reps.append(pt)
        self.reps.sort(key=lambda t: (t[1], t[0] % max(self.L, 1)))

    def classify(self, a, c):
        """Index of the class of the cusp a/c (c = 0 means infinity)."""
        pt = _reduce_cusp(a, c)
        for i, r in enumerate(self.reps):
            if self._equiv(pt, r):
                return i
        raise CongError(f"cusp {a}/{c} failed to classify (internal error)")

    def __len__(self):
        return len(self.reps)


@lru_cache(maxsize=None)
def _classifier(spec):
    return CuspClassifier(spec)


def cusp_classes(spec: SubgroupSpec):
    """(list of CuspClass, classifier function fraction -> class index)."""
    cl = _classifier(spec)
    classes = [CuspClass(spec.level, rep, spec) for rep in cl.reps]
    return classes, cl.classify


def cusp_count_gamma0(N):
    """Independent oracle: number of Gamma_0(N) cusps, sum phi(gcd(d, N/d))."""
    total = 0
    for d in range(1, N + 1):
        if N % d == 0:
            total += _phi(gcd(d, N // d))
    return total


def _phi(n):
    out = n
    for ell in factorize(n):
        out = out // ell * (ell - 1)
    return out if n >= 1 else 0
