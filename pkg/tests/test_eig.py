import pytest

from modpsym.cong import gamma0, gamma1
from modpsym.eig import (HypothesisError, decompose, levelraise_check,
                         occurs_in, sturm_bound, verify_weight_raising)
from modpsym.gfq import build_field, Mat
from modpsym.msym import ManinSpace
from oracles import ec11a_ap

F5 = build_field(5)
F7 = build_field(7)


@pytest.fixture(scope="module")
def s11_2():
    return ManinSpace(gamma0(11), 2, None, F5)


@pytest.fixture(scope="module")
def s11_6():
    return ManinSpace(gamma0(11), 6, None, F5)


def test_sturm_bound_examples():
    assert sturm_bound(11, 2) == 2          # ceil(2 * 12 / 12)
    assert sturm_bound(gamma1(11), 6) == 60  # ceil(6 * 120 / 12)
    assert sturm_bound(1, 12) == 1           # ceil(12 * 1 / 12)
    assert sturm_bound(11, 6) == 6


def test_decompose_zero_space():
    S = ManinSpace(gamma0(1), 2, None, F5)
    systems, unsplit = decompose(S, [2, 3])
    assert systems == [] and unsplit == []


def test_decompose_level11(s11_2):
    systems, unsplit = decompose(s11_2, [2, 3, 7, 13])
    assert not unsplit
    assert len(systems) == 1
    e = systems[0]
    assert e.multiplicity == 2
    assert e.degree == 1
    assert e.values == {2: 3, 3: 4, 7: 3, 13: 4}
    for r in (2, 3, 7, 13):
        assert e.values[r] == ec11a_ap(r) % 5


def test_decompose_partition_invariant(s11_2, s11_6):
    for S in (s11_2, s11_6):
        systems, unsplit = decompose(S, [2, 3, 7])
        total = sum(e.multiplicity * e.degree
                    for e in systems if e.orbit == min(
                        f.orbit for f in systems if f.values == e.values))
        # count one member per orbit
        seen = set()
        total = 0
        for e in systems:
            if e.orbit not in seen:
                seen.add(e.orbit)
                total += e.multiplicity * e.degree
        total += sum(b.basis.ncols * b.field.d for b in unsplit)
        assert total == S.cuspidal_basis().ncols


def test_galois_conjugate_systems():
    # level 23 weight 2: eigenvalues generate F_49 over F_7
    S = ManinSpace(gamma0(23), 2, None, F7)
    systems, unsplit = decompose(S, [2, 3])
    assert not unsplit
    assert len(systems) == 2
    assert all(e.degree == 2 for e in systems)
    assert systems[0].orbit == systems[1].orbit
    e, f = systems
    assert f.values == e.conjugate_values(1)
    # Frobenius applied to a reported system yields another reported one
    assert any(g.values == e.conjugate_values(1) for g in systems)


def test_occurs_in_reflexive_and_monotone(s11_2):
    systems, _ = decompose(s11_2, [2, 3])
    e = systems[0]
    occ = occurs_in(e, s11_2, 13)
    assert occ.found and occ.witness.ncols >= 1
    assert 11 in occ.primes_skipped and 5 in occ.primes_skipped
    occ_small = occs = occurs_in(e, s11_2, 3)
    assert occ_small.found  # monotone: bound 13 occurrence implies bound 3


def test_not_occurring_in_zero_space(s11_2):
    systems, _ = decompose(s11_2, [2, 3])
    Z = ManinSpace(gamma0(1), 2, None, F5)
    occ = occurs_in(systems[0], Z, 13)
    assert not occ.found


def test_weight2_system_occurs_in_weight6(s11_2, s11_6):
    systems, _ = decompose(s11_2, [2, 3])
    occ = occurs_in(systems[0], s11_6, 50)
    assert occ.found
    assert occ.witness.ncols >= 1


def test_verify_weight_raising_instances():
    # Gamma_1 default: all five items pass at every desk pair
    for (N, p) in ((7, 5), (13, 5)):
        rep = verify_weight_raising(N, p)
        assert rep["pass"], rep
    # Gamma_0 flavor: transfer item (e) holds at every pair
    for (N, p) in ((7, 5), (11, 5), (13, 5), (11, 7)):
        rep = verify_weight_raising(N, p, subgroup="gamma0")
        byname = {c["name"]: c for c in rep["checks"]}
        assert byname["weight-raising-transfer"]["pass"], (N, p)
        assert byname["induced-coefficient-transfer"]["pass"], (N, p)
        assert byname["coefficient-splitting-blocks"]["pass"], (N, p)


def test_verify_hypothesis_guards():
    with pytest.raises(HypothesisError):
        verify_weight_raising(10, 5)
    with pytest.raises(HypothesisError):
        verify_weight_raising(4, 5)
    with pytest.raises(HypothesisError):
        verify_weight_raising(11, 4)


def test_levelraise_delta_mod7():
    rep = levelraise_check(1, 12, 7)
    assert rep["pass"]
    rows = [r for r in rep["systems"] if r["system"]["values"]["2"] == [4]]
    assert rows, rep
    delta = rows[0]
    assert delta["criterion"] is True      # k = 12 > p + 1 = 8
    assert delta["occurs_p_new"] is True
    assert "mod-p shadow" in rep["caveat"]


def test_levelraise_delta_mod11():
    from modpsym import classical
    rep = levelraise_check(1, 12, 11)
    assert rep["pass"]
    delta = [r for r in rep["systems"] if r["system"]["values"]["2"] == [9]][0]
    # criterion value agrees with the eta-product oracle
    tau11 = classical.tau(11) % 11
    assert delta["a_p"] == [tau11]
    assert delta["criterion"] is (tau11 == 0) is False
    assert delta["agreement"] is True


def test_levelraise_level11_weight2():
    rep = levelraise_check(11, 2, 5)
    assert rep["pass"]
    row = [r for r in rep["systems"] if r["system"]["values"]["2"] == [3]][0]
    ap = ec11a_ap(5) % 5
    assert row["a_p"] == [ap]
    assert row["criterion"] is (ap * ap % 5 == 1) is True
    assert row["occurs_p_new"] is True


def test_levelraise_guards():
    with pytest.raises(HypothesisError):
        levelraise_check(11, 1, 5)
    with pytest.raises(HypothesisError):
        levelraise_check(10, 2, 5)
