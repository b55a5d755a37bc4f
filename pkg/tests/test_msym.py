import pytest

from modpsym.cong import gamma0, gamma1
from modpsym.coef import ev_intertwiner, induced_module, symm_module
from modpsym.gfq import Mat, QQ, build_field
from modpsym.msym import ManinSpace, pnew_subspace, shapiro_iso
from modpsym.eig import _coef_map_matrix
from oracles import dim_cusp_forms_gamma0, ec11a_ap, gamma0_cusps, gamma0_genus

F5 = build_field(5)
F7 = build_field(7)


@pytest.fixture(scope="module")
def s11_2():
    return ManinSpace(gamma0(11), 2, None, F5)


@pytest.fixture(scope="module")
def s11_6():
    return ManinSpace(gamma0(11), 6, None, F5)


@pytest.fixture(scope="module")
def s55_2():
    return ManinSpace(gamma0(55), 2, None, F5)


def test_dimensions_weight2(s11_2):
    g = gamma0_genus(11)
    c = gamma0_cusps(11)
    assert s11_2.dim == 2 * g + c - 1 == 3
    assert s11_2.cuspidal_basis().ncols == 2 * g == 2


def test_dimension_level1_weight2_is_zero():
    S = ManinSpace(gamma0(1), 2, None, F5)
    assert S.dim == 0
    assert S.cuspidal_basis().ncols == 0
    T = S.hecke_operator(3)
    assert T.shape == (0, 0)


def test_dimension_level1_weight12():
    S = ManinSpace(gamma0(1), 12, None, F7)
    assert S.cuspidal_basis().ncols == 2   # dim S_12(SL2(Z)) = 1, both signs


def test_cuspidal_dims_match_oracle():
    for (N, k, p) in ((11, 2, 5), (11, 6, 5), (11, 8, 7), (7, 6, 5), (13, 6, 5)):
        F = build_field(p)
        S = ManinSpace(gamma0(N), k, None, F)
        assert S.cuspidal_basis().ncols == 2 * dim_cusp_forms_gamma0(N, k), (N, k, p)


def test_presentation_invariants(s11_6):
    S = s11_6
    # relations map to zero in the quotient
    assert (S.proj @ S.relations.transpose()).is_zero()
    # expressing a basis generator in the basis returns itself
    for j, f in enumerate(S.free):
        col = S.proj.take_cols([f])
        assert col.a[j, 0] == 1
        assert int((col.a != 0).sum()) == 1
    assert S.dim == S.ngens - S.relations.rank()


def test_hecke_eigenvalue_oracle(s11_2):
    C = s11_2.cuspidal_basis()
    for r in (2, 3, 7, 13):
        T = s11_2.hecke_operator(r)
        M = C.solve_right(T @ C)
        lam = ec11a_ap(r) % 5
        # charpoly = (x - a_r)^2
        cp = M.charpoly()
        assert cp == [F5.mul(lam, lam), F5.neg(F5.add(lam, lam)), 1]


def test_hecke_commutativity(s11_6):
    ops = [s11_6.hecke_operator(r) for r in (2, 3, 7)]
    for A in ops:
        for B in ops:
            assert A @ B == B @ A


def test_hecke_refuses_bad_primes(s11_2):
    with pytest.raises(ValueError):
        s11_2.hecke_operator(11)
    with pytest.raises(ValueError):
        s11_2.hecke_operator(4)


def test_heilbronn_family_independence(s11_2, s11_6):
    for S in (s11_2, s11_6):
        for r in (2, 3):
            A = S.hecke_operator(r)
            assert A == S.hecke_operator(r, flavor="cremona")
            assert A == S.hecke_operator_coset_oracle(r)


def test_star_involution(s11_2):
    star = s11_2.star_involution()
    I = Mat.identity(F5, s11_2.dim)
    assert star @ star == I
    T3 = s11_2.hecke_operator(3)
    assert star @ T3 == T3 @ star
    # +/- eigenspaces on the cuspidal part are one-dimensional each
    C = s11_2.cuspidal_basis()
    M = C.solve_right(star @ C)
    for sign in (1, F5.neg(1)):
        K = (M - Mat.identity(F5, 2).scale(sign)).right_kernel()
        assert K.ncols == 1


def test_diamond_operators():
    S = ManinSpace(gamma1(11), 2, None, F5)
    D1 = S.diamond_operator(1)
    assert D1 == Mat.identity(F5, S.dim)
    for d, dp in ((2, 3), (3, 5), (2, 7)):
        assert S.diamond_operator(d) @ S.diamond_operator(dp) == \
            S.diamond_operator(d * dp)
    G0 = ManinSpace(gamma0(11), 2, None, F5)
    assert G0.diamond_operator(7) == Mat.identity(F5, G0.dim)


def test_boundary_composed_with_cuspidal_inclusion_is_zero(s11_6):
    B, classes = s11_6.boundary_map()
    C = s11_6.cuspidal_basis()
    assert (B @ C).is_zero()


def test_cuspidal_hecke_stable(s11_6):
    C = s11_6.cuspidal_basis()
    T2 = s11_6.hecke_operator(2)
    C.solve_right(T2 @ C)   # raises if not stable


def test_modsym_roundtrip(s55_2, s11_6):
    from modpsym.cong import lift_to_sl2z
    for S in (s55_2, s11_6):
        L = S.spec.level
        for genidx in S.free[:10]:
            m, x = divmod(genidx, S.npairs)
            c, d = S.pairs.reps[x]
            gam = lift_to_sl2z(c, d, L)
            (a, b), (c2, d2) = gam
            ginv = ((d2, -b), (-c2, a))
            row = S.coef.act(ginv).a[m]
            v = S.modsym_vector(row, (b, d2), (a, c2))
            assert v == S.proj.take_cols([genidx])


def test_degeneracy_examples(s55_2, s11_2):
    D1 = s55_2.degeneracy_matrix(s11_2, 1)
    D5 = s55_2.degeneracy_matrix(s11_2, 5)
    for r in (2, 3):
        Tb = s55_2.hecke_operator(r)
        Ts = s11_2.hecke_operator(r)
        assert D1 @ Tb == Ts @ D1
        assert D5 @ Tb == Ts @ D5
    # cuspidal combined rank: dual of the injectivity lemma on the parabolic
    # part; at (11, 5) it drops by one (5 is an Eisenstein prime for 11)
    stack = Mat.vstack([D1, D5])
    C = s55_2.cuspidal_basis()
    assert (stack @ C).rank() == 3
    assert stack.rank() == 5   # full-space rank loses one boundary dimension


def test_degeneracy_to_zero_dimensional_target():
    S5 = ManinSpace(gamma0(5), 2, None, F7)
    S1 = ManinSpace(gamma0(1), 2, None, F7)
    D = S5.degeneracy_matrix(S1, 1)
    assert D.shape == (0, S5.dim)


def test_degeneracy_cuspidal_rank_gamma1_pairs():
    # the faithful (cuspidal) dual of the injectivity lemma, Gamma_1 setting
    for (N, p) in ((11, 5), (11, 7)):
        F = build_field(p)
        spec = gamma1(N)
        S = ManinSpace(spec, 2, None, F)
        SB = ManinSpace(spec.with_aux(p), 2, None, F)
        stack = Mat.vstack([SB.degeneracy_matrix(S, 1), SB.degeneracy_matrix(S, p)])
        assert (stack @ SB.cuspidal_basis()).rank() == 2 * S.cuspidal_basis().ncols


def test_shapiro_dimensions_and_transport():
    for (N, p) in ((11, 5), (7, 5)):
        F = build_field(p)
        S_big, S_ind, iso = shapiro_iso(N, p, 2, F)
        assert S_big.dim == S_ind.dim
        for r in (2, 3):
            assert iso @ S_big.hecke_operator(r) == S_ind.hecke_operator(r) @ iso


def test_shapiro_level_one_edge():
    S_big, S_ind, iso = shapiro_iso(1, 5, 2, F5)
    assert S_big.dim == S_ind.dim == iso.nrows


def test_shapiro_weight_greater_than_two():
    S_big, S_ind, iso = shapiro_iso(5, 7, 4, F7)
    assert S_big.dim == S_ind.dim
    assert iso @ S_big.hecke_operator(2) == S_ind.hecke_operator(2) @ iso


def test_coefficient_splitting_blocks(s11_2, s11_6):
    p = 5
    _, S_ind, _ = shapiro_iso(11, p, 2, F5)
    E = ev_intertwiner(p, F5)
    i_triv = _coef_map_matrix(s11_2, S_ind, Mat(F5, [[1] * (p + 1)]))
    i_symm = _coef_map_matrix(s11_6, S_ind, E)
    B = Mat.hstack([i_triv, i_symm])
    assert B.ncols == S_ind.dim
    assert B.rank() == S_ind.dim
    for r in (2, 3):
        Ti = S_ind.hecke_operator(r)
        assert Ti @ B == Mat.hstack([i_triv @ s11_2.hecke_operator(r),
                                     i_symm @ s11_6.hecke_operator(r)])


def test_pnew_subspace(s55_2, s11_2):
    pn = pnew_subspace(s55_2, s11_2)
    C = s55_2.cuspidal_basis()
    D1 = s55_2.degeneracy_matrix(s11_2, 1)
    D5 = s55_2.degeneracy_matrix(s11_2, 5)
    stack = Mat.vstack([D1, D5])
    assert pn.ncols == C.ncols - (stack @ C).rank()
    assert (stack @ pn).is_zero()
    # T_2-stability
    T2 = s55_2.hecke_operator(2)
    pn.solve_right(T2 @ pn)


def test_rational_mode_dimensions_match_mod_p():
    # weight p+1 cuspidal dimension over Q equals the mod-p dimension
    for (N, p) in ((11, 5), (11, 7)):
        SQ = ManinSpace(gamma0(N), p + 1, None, QQ)
        SF = ManinSpace(gamma0(N), p + 1, None, build_field(p))
        assert SQ.dim == SF.dim
        assert SQ.cuspidal_basis().ncols == SF.cuspidal_basis().ncols


def test_characteristic_guard():
    with pytest.raises(ValueError):
        ManinSpace(gamma0(11), 2, None, build_field(3))


def test_small_level_construction_allowed():
    for N in (1, 2, 3, 4):
        S = ManinSpace(gamma0(N), 2, None, F5)
        assert S.dim == gamma0_cusps(N) - 1 + 2 * gamma0_genus(N)


def test_induced_coefficient_space_matches_level_raise(s55_2):
    ind = induced_module(5, F5)
    S_ind = ManinSpace(gamma0(11), 2, ind, F5)
    assert S_ind.dim == s55_2.dim
