import random

import pytest

from modpsym.coef import (SingularActionError, ev_intertwiner, induced_module,
                          split_induced, symm_module, tensor_module,
                          trivial_module, twisted_tensor_module)
from modpsym.gfq import Mat, build_field

S = ((0, -1), (1, 0))
T = ((1, 1), (0, 1))


def _random_unimodular(rng, bound=5):
    while True:
        a, b = rng.randrange(-bound, bound), rng.randrange(-bound, bound)
        c, d = rng.randrange(-bound, bound), rng.randrange(-bound, bound)
        if a * d - b * c == 1:
            return ((a, b), (c, d))


def _mul2(g, h):
    return (
        (g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]),
        (g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]),
    )


def test_dimensions():
    F5 = build_field(5)
    assert trivial_module(F5).dim == 1
    assert symm_module(4, F5).dim == 5
    assert induced_module(5, F5).dim == 6
    F25 = build_field(5, 2)
    assert twisted_tensor_module(5, [0, 1], F25).dim == 25
    assert induced_module(25, F25).dim == 26


def test_identity_action():
    F5 = build_field(5)
    I = ((1, 0), (0, 1))
    for mod in (trivial_module(F5), symm_module(4, F5), induced_module(5, F5)):
        assert mod.act(I) == Mat.identity(F5, mod.dim)
    F25 = build_field(5, 2)
    tw = twisted_tensor_module(5, [0, 1], F25)
    assert tw.act(I) == Mat.identity(F25, 25)


def test_symm_diagonal_scalars():
    # diag(a, a^{-1} mod p) acts on monomials by powers of a
    F7 = build_field(7)
    k = 4
    mod = symm_module(k, F7)
    a = 3
    ainv = F7.inv(a)
    # integer matrix congruent to diag(3, 3^{-1}) mod 7: use field codes path
    M = mod.act_codes([[a, 0], [0, ainv]])
    for i in range(k + 1):
        expect = F7.mul(F7.pow(a, i), F7.pow(ainv, k - i))
        row = M.a[i]
        assert row[i] == expect
        assert all(row[j] == 0 for j in range(k + 1) if j != i)


def test_multiplicativity_random_pairs():
    rng = random.Random(10)
    F5 = build_field(5)
    F25 = build_field(5, 2)
    mods = [trivial_module(F5), symm_module(3, F5), symm_module(4, F5),
            induced_module(5, F5), twisted_tensor_module(5, [0, 1], F25),
            tensor_module(symm_module(2, F5), induced_module(5, F5))]
    for mod in mods:
        for _ in range(50):
            g = _random_unimodular(rng)
            h = _random_unimodular(rng)
            assert mod.act(g) @ mod.act(h) == mod.act(_mul2(g, h))


def test_induced_is_permutation():
    F5 = build_field(5)
    ind = induced_module(5, F5)
    for g in (S, T):
        M = ind.act(g)
        arr = M.a
        assert ((arr == 1).sum(axis=1) == 1).all()
        assert ((arr != 0).sum(axis=1) == 1).all()


def test_induced_singular_action_refused():
    F5 = build_field(5)
    ind = induced_module(5, F5)
    with pytest.raises(SingularActionError):
        ind.act(((5, 0), (0, 1)))   # det = 5 = 0 mod 5


def test_split_induced():
    for q, p, d in ((5, 5, 1), (7, 7, 1), (25, 5, 2)):
        F = build_field(p, d)
        ind = induced_module(q, F)
        sp = split_induced(ind)
        I = Mat.identity(F, q + 1)
        assert sp.proj_const @ sp.proj_const == sp.proj_const
        assert sp.proj_zero @ sp.proj_zero == sp.proj_zero
        assert sp.proj_const + sp.proj_zero == I
        assert sp.proj_const.rank() == 1
        assert sp.proj_zero.rank() == q
        for g in (S, T):
            A = ind.act(g)
            assert A @ sp.proj_const == sp.proj_const @ A
            assert A @ sp.proj_zero == sp.proj_zero @ A
        # constants row is fixed by the action
        ones = sp.incl_const
        for g in (S, T):
            assert ones @ ind.act(g) == ones


def test_ev_intertwiner_image_and_rank():
    for p in (5, 7):
        F = build_field(p)
        E = ev_intertwiner(p, F)
        assert E.nrows == p and E.ncols == p + 1
        assert E.rank() == p           # injective
        # every image row sums to zero over P^1 (power-sum identity)
        for i in range(p):
            assert int(E.a[i].sum()) % p == 0


def test_power_sum_identity_exhaustive():
    # sum over a in F_p of a^i is -1 if (p-1) | i > 0, else 0
    for p in (5, 7):
        for i in range(0, 2 * p):
            s = sum(pow(a, i, p) for a in range(p)) % p
            if i > 0 and i % (p - 1) == 0:
                assert s == p - 1
            elif i == 0:
                assert s == 0  # p * 1 = 0 mod p
            else:
                assert s == 0


def test_ev_equivariance_on_generators():
    for p in (5, 7):
        F = build_field(p)
        E = ev_intertwiner(p, F)
        sym = symm_module(p - 1, F)
        ind = induced_module(p, F)
        for g in (S, T):
            assert sym.act(g) @ E == E @ ind.act(g)


def test_ev_image_in_zero_sum_summand():
    p = 5
    F = build_field(p)
    E = ev_intertwiner(p, F)
    sp = split_induced(induced_module(p, F))
    assert E @ sp.proj_zero == E
    assert (E @ sp.proj_const).is_zero()


def test_twisted_tensor_edge_cases():
    F5 = build_field(5)
    tw = twisted_tensor_module(5, [0], F5)
    sym = symm_module(4, F5)
    rng = random.Random(11)
    for _ in range(10):
        g = _random_unimodular(rng)
        assert tw.act(g) == sym.act(g)
    with pytest.raises(ValueError):
        twisted_tensor_module(5, [0, 2], build_field(5, 2))  # 2 = 0 mod d


def test_twisted_frobenius_twist_matters():
    F25 = build_field(5, 2)
    tw = twisted_tensor_module(5, [0, 1], F25)
    plain = tensor_module(symm_module(4, F25), symm_module(4, F25))
    g = [[F25.gen, 0], [0, F25.inv(F25.gen)]]
    assert tw.act_codes(g) != plain.act_codes(g)
