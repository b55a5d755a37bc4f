"""Families of integer matrices computing Hecke operators on Manin symbols.

Default family: Merel's set X_n = {(a, b; c, d) : a > b >= 0, d > c >= 0,
ad - bc = n}, valid for every n >= 1 and every weight.  The alternative
family for prime n is Cremona's continued-fraction construction; the two are
genuinely different sets for n >= 3 and must induce identical operators,
which the test suite uses as a cross-check.
"""

from functools import lru_cache

from .gfq import is_prime


@lru_cache(maxsize=None)
def merel_family(n):
    """Merel's X_n, deterministic order."""
    out = []
    for a in range(1, n + 1):
        dmin = (n + a - 1) // a
        for d in range(dmin, n + 2 - a):
            bc = a * d - n
            if bc == 0:
                for b in range(a):
                    out.append(((a, b), (0, d)))
                for c in range(1, d):
                    out.append(((a, 0), (c, d)))
            else:
                bmin = (bc - 1) // (d - 1) + 1 if d > 1 else bc
                for b in range(max(1, bmin), a):
                    if bc % b == 0:
                        c = bc // b
                        if c < d:
                            out.append(((a, b), (c, d)))
    return tuple(out)


@lru_cache(maxsize=None)
def cremona_family(p):
    """Heilbronn-Cremona matrices of determinant p (p prime).

    Nearest-integer continued fractions, as in Cremona's modular symbol
    algorithm; rounding of a/b is half-away-from-zero.
    """
    if not is_prime(p):
        raise ValueError("Cremona family is defined for prime determinant")
    if p == 2:
        return (((1, 0), (0, 2)), ((2, 0), (0, 1)), ((2, 1), (0, 1)), ((1, 0), (1, 2)))
    out = [((1, 0), (0, p))]
    for r in range(-(p // 2), p // 2 + 1):
        x1, x2, y1, y2 = p, -r, 0, 1
        a, b = -p, r
        out.append(((x1, x2), (y1, y2)))
        while b != 0:
            q = _round_half_away(a, b)
            c = a - b * q
            a, b = -b, c
            x3 = q * x2 - x1
            x1, x2 = x2, x3
            y3 = q * y2 - y1
            y1, y2 = y2, y3
            out.append(((x1, x2), (y1, y2)))
    return tuple(out)


def _round_half_away(a, b):
    """Nearest integer to a/b, ties away from zero."""
    if b < 0:
        a, b = -a, -b
    q, r = divmod(a, b)
    if 2 * r > b or (2 * r == b and (q >= 0)):
        q += 1
    return q


def hecke_family(n, flavor="merel"):
    if flavor == "merel":
        return merel_family(n)
    if flavor == "cremona":
        return cremona_family(n)
    raise ValueError(f"unknown Heilbronn family {flavor!r}")
