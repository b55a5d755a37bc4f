"""Exact q-expansion side: Bernoulli numbers, Eisenstein series, the theta
operator, and the discriminant cusp form.

Everything is computed over exact rationals (or F_p after reduction); these
expansions serve as independent cross-checks for the symbol pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .gfq import is_prime


@lru_cache(maxsize=None)
def bernoulli(k):
    """Exact Bernoulli number B_k (B_1 = -1/2); zero for odd k > 1."""
    if k < 0:
        raise ValueError("Bernoulli index must be >= 0")
    if k > 60:
        raise ValueError("Bernoulli index beyond the desk bound 60")
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(-1, 2)
    if k % 2 == 1:
        return Fraction(0)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
    acc = Fraction(0)
    for j in range(k):
        acc += comb(k + 1, j) * bernoulli(j)
    return -acc / (k + 1)


def von_staudt_clausen_denominator(k):
    """prod of primes l with (l - 1) | k; equals denominator(B_k) for even k."""
    if k <= 0 or k % 2 == 1:
        raise ValueError("even positive k required")
    out = 1
    for ell in range(2, k + 2):
        if is_prime(ell) and k % (ell - 1) == 0:
            out *= ell
    return out


def sigma(n, k):
    """Divisor power sum by full enumeration."""
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


@dataclass
class QExpansion:
    """Truncated q-expansion; ring is 'rational' or a prime p (mod-p values)."""

    ring: object  # "rational" | int prime p
    coeffs: list
    prec: int

    def __post_init__(self):
        if len(self.coeffs) != self.prec:
            raise ValueError("stated precision does not match the coefficient count")

    def __getitem__(self, n):
        return self.coeffs[n]

    def __eq__(self, other):
        n = min(self.prec, other.prec)
        return self.ring == other.ring and self.coeffs[:n] == other.coeffs[:n]

    def __add__(self, other):
        if other.ring != self.ring:
            raise ValueError("ring mismatch")
        n = min(self.prec, other.prec)
        if self.ring == "rational":
            cs = [self.coeffs[i] + other.coeffs[i] for i in range(n)]
        else:
            cs = [(self.coeffs[i] + other.coeffs[i]) % self.ring for i in range(n)]
        return QExpansion(self.ring, cs, n)

    def __mul__(self, other):
        if other.ring != self.ring:
            raise ValueError("ring mismatch")
        n = min(self.prec, other.prec)
        zero = Fraction(0) if self.ring == "rational" else 0
        cs = [zero] * n
        for i in range(n):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if b:
                    cs[i + j] += a * b
        if self.ring != "rational":
            cs = [c % self.ring for c in cs]
        return QExpansion(self.ring, cs, n)

    def reduce_mod(self, p):
        """Entrywise reduction to F_p; denominators must be prime to p."""
        if self.ring != "rational":
            raise ValueError("already reduced")
        out = []
        for c in self.coeffs:
            c = Fraction(c)
            if c.denominator % p == 0:
                raise ValueError(f"coefficient denominator divisible by {p}")
            out.append(c.numerator * pow(c.denominator, -1, p) % p)
        return QExpansion(p, out, self.prec)


def eisenstein_qexp(k, prec, ring="rational"):
    """Normalized E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n."""
    if k % 2 == 1:
        raise ValueError("Eisenstein weight must be even")
    if k < 4:
        raise ValueError("weight >= 4 required (weight 2 is not modular)")
    c = Fraction(-2 * k) / bernoulli(k)
    cs = [Fraction(1)] + [c * sigma(n, k - 1) for n in range(1, prec)]
    f = QExpansion("rational", cs, prec)
    if ring == "rational":
        return f
    return f.reduce_mod(int(ring))


def theta_op(f: QExpansion):
    """n-th coefficient times n; only defined on mod-p expansions."""
    if f.ring == "rational":
        raise ValueError("theta acts on mod-p expansions only")
    p = f.ring
    return QExpansion(p, [(n * c) % p for n, c in enumerate(f.coeffs)], f.prec)


def delta_qexp(prec, ring="rational"):
    """q prod (1 - q^n)^24 expanded exactly (integer coefficients)."""
    if prec > 2000:
        raise ValueError("precision beyond the desk bound 2000")
    f = [0] * prec
    if prec > 1:
        f[1] = 1
    # multiply by (1 - q^n)^24 term by term
    for n in range(1, prec):
        terms = []
        for j in range(25):
            e = n * j
            if e >= prec:
                break
            terms.append((e, (-1) ** j * comb(24, j)))
        if len(terms) == 1:
            continue
        g = [0] * prec
        for i, c in enumerate(f):
            if c:
                for e, w in terms:
                    if i + e < prec:
                        g[i + e] += c * w
        f = g
    if ring == "rational":
        return QExpansion("rational", [Fraction(c) for c in f], prec)
    p = int(ring)
    return QExpansion(p, [c % p for c in f], prec)


def tau(n):
    """Ramanujan tau via the product expansion."""
    return int(delta_qexp(n + 1).coeffs[n])


def hasse_congruence_holds(p, prec=100):
    """E_{p-1} == 1 mod p up to the stated precision."""
    f = eisenstein_qexp(p - 1, prec, ring=p)
    return f.coeffs[0] == 1 and all(c == 0 for c in f.coeffs[1:])
