import random
from fractions import Fraction

import pytest

from modpsym import classical
from oracles import ec11a_ap, mult_extend


def test_bernoulli_values():
    assert classical.bernoulli(2) == Fraction(1, 6)
    assert classical.bernoulli(4) == Fraction(-1, 30)
    assert classical.bernoulli(6) == Fraction(1, 42)
    assert classical.bernoulli(12) == Fraction(-691, 2730)
    assert classical.bernoulli(3) == 0
    assert classical.bernoulli(1) == Fraction(-1, 2)


def test_bernoulli_denominator_divisible_by_p():
    for p in (5, 7, 11, 13):
        assert classical.bernoulli(p - 1).denominator % p == 0


def test_von_staudt_clausen_exact():
    for k in range(2, 42, 2):
        assert classical.bernoulli(k).denominator == \
            classical.von_staudt_clausen_denominator(k)


def test_eisenstein_constant_term_and_weights():
    f = classical.eisenstein_qexp(4, 10)
    assert f[0] == 1
    with pytest.raises(ValueError):
        classical.eisenstein_qexp(5, 10)
    with pytest.raises(ValueError):
        classical.eisenstein_qexp(2, 10)


def test_hasse_lift_congruence():
    for p in (5, 7, 11, 13):
        assert classical.hasse_congruence_holds(p, prec=100)


def test_theta_examples():
    f = classical.QExpansion(5, [1] + [0] * 29, 30)
    assert all(c == 0 for c in classical.theta_op(f).coeffs)
    q = classical.QExpansion(5, [0, 1] + [0] * 28, 30)
    assert classical.theta_op(q) == q
    with pytest.raises(ValueError):
        classical.theta_op(classical.eisenstein_qexp(4, 10))


def test_theta_iteration_property():
    rng = random.Random(12)
    for p in (5, 7):
        for _ in range(20):
            f = classical.QExpansion(p, [rng.randrange(p) for _ in range(30)], 30)
            g = f
            for _ in range(p):
                g = classical.theta_op(g)
            assert g == classical.theta_op(f)


def test_delta_coefficients():
    d = classical.delta_qexp(8)
    assert [int(c) for c in d.coeffs] == [0, 1, -24, 252, -1472, 4830, -6048, -16744]


def test_delta_multiplicativity():
    assert classical.tau(6) == classical.tau(2) * classical.tau(3)
    assert classical.tau(10) == classical.tau(2) * classical.tau(5)
    assert classical.tau(11) == 534612


def test_level11_consistency_with_hasse_lift():
    # prime data from the point-counting oracle, extended multiplicatively,
    # is unchanged mod p under multiplication by E_{p-1} == 1
    nmax = 40
    ap = {r: ec11a_ap(r) for r in (2, 3, 5, 7, 13, 17, 19, 23, 29, 31, 37)}
    ap[11] = 1  # U_11 eigenvalue of 11a
    a = mult_extend(ap, nmax, 2, 11)
    for p in (5, 7):
        f = classical.QExpansion(p, [0] + [a[n] % p for n in range(1, nmax)], nmax)
        e = classical.eisenstein_qexp(p - 1, nmax, ring=p)
        assert (f * e) == f


def test_qexpansion_precision_contract():
    with pytest.raises(ValueError):
        classical.QExpansion(5, [1, 2, 3], 4)
    f = classical.QExpansion(5, [1, 2, 3], 3)
    g = classical.QExpansion(5, [1, 1], 2)
    assert (f + g).prec == 2
    assert (f * g).prec == 2


def test_delta_desk_bound():
    with pytest.raises(ValueError):
        classical.delta_qexp(4000)
