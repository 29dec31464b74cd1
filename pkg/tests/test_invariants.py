"""Lattice-derived invariants against the group oracle.

The sweep bounds mirror what the verification suite uses; the point of the
per-name parametrization is a readable failure when one group regresses.
"""

import pytest

from conftest import group, lattice, names_up_to, oracle
from racklat.bitset import bits
from racklat.invariants import (atom_class_masks, center_atoms, centralizer_atoms,
                                class_size_frequency, has_noncentral_abelian_normal,
                                invariant_report, lattice_is_abelian, m_set,
                                maximal_abelian_sets, maximal_normal_abelian_sets)

SWEEP = names_up_to(16)


@pytest.mark.parametrize("name", SWEEP)
def test_class_size_frequency_matches_oracle(name):
    w = class_size_frequency(lattice(name)).as_dict()
    expect = {}
    for s in oracle(name).class_sizes:
        expect[s] = expect.get(s, 0) + 1
    assert w == expect


@pytest.mark.parametrize("name", SWEEP)
def test_atom_classes_match_oracle(name):
    assert sorted(atom_class_masks(lattice(name))) == sorted(oracle(name).class_masks)


@pytest.mark.parametrize("name", SWEEP)
def test_center_matches_oracle(name):
    assert center_atoms(lattice(name)) == oracle(name).center


@pytest.mark.parametrize("name", SWEEP)
def test_centralizers_match_oracle(name):
    g = group(name)
    lat = lattice(name)
    for a in range(g.order):
        assert centralizer_atoms(lat, 1 << a) == g.centralizer(1 << a)


@pytest.mark.parametrize("name", SWEEP)
def test_maximal_abelian_sets_match_oracle(name):
    got = sorted(maximal_abelian_sets(lattice(name)))
    assert got == sorted(oracle(name).maximal_abelian_subgroups)


@pytest.mark.parametrize("name", SWEEP)
def test_maximal_normal_abelian_sets_match_oracle(name):
    g = group(name)
    abelian_normal = [s for s in g.normal_subgroups
                      if all(g.mul(a, b) == g.mul(b, a)
                             for a in bits(s) for b in bits(s))]
    expect = sorted(s for s in abelian_normal
                    if not any(t != s and s & ~t == 0 for t in abelian_normal))
    assert sorted(maximal_normal_abelian_sets(lattice(name))) == expect


def test_lattice_is_abelian_flag():
    assert lattice_is_abelian(lattice("Z16"))
    assert lattice_is_abelian(lattice("Z2xZ2xZ2"))
    assert not lattice_is_abelian(lattice("S3"))
    assert not lattice_is_abelian(lattice("Q8"))


def test_s3_w_values():
    w = class_size_frequency(lattice("S3"))
    assert w.as_dict() == {1: 1, 2: 1, 3: 1}
    assert str(w) == "w(1)=1 w(2)=1 w(3)=1"


# translation-detection sets, frozen after one brute pass over the subgroup
# inventory of each group
M_EXPECTED = {
    "S3": {0b000011, 0b000101, 0b001001},
    "D4": set(),
    "Q8": set(),
    "D5": {(1 << 0) | (1 << k) for k in range(5, 10)},
    "D6": {sum(1 << i for i in s) for s in [(0, 3, 6, 9), (0, 3, 7, 10), (0, 3, 8, 11)]},
    "Dic3": {sum(1 << i for i in s) for s in [(0, 3, 6, 9), (0, 3, 7, 10), (0, 3, 8, 11)]},
}


@pytest.mark.parametrize("name", sorted(M_EXPECTED))
def test_m_set_frozen_members(name):
    ms = m_set(lattice(name))
    assert set(ms.members) == M_EXPECTED[name]
    assert ms.undecided == ()


@pytest.mark.parametrize("name", names_up_to(24))
def test_m_set_members_are_non_normal_subgroups(name):
    g = group(name)
    ms = m_set(lattice(name))
    assert ms.undecided == ()
    for m in ms.members:
        assert g.is_subgroup(m)
        assert not g.is_normal(m)


@pytest.mark.parametrize("name", names_up_to(24))
def test_m_set_catches_non_normal_maximal_subgroups(name):
    g = group(name)
    members = set(m_set(lattice(name)).members)
    for s in g.maximal_subgroups:
        if not g.is_normal(s):
            assert s in members


@pytest.mark.parametrize("name", [n for n in SWEEP if group(n).is_abelian])
def test_m_set_empty_for_abelian(name):
    ms = m_set(lattice(name))
    assert ms.members == () and ms.undecided == ()


def test_noncentral_abelian_normal_flag():
    assert has_noncentral_abelian_normal(lattice("S3"))      # the 3-cycle subgroup
    assert has_noncentral_abelian_normal(lattice("S4"))      # the double-transposition V4
    assert has_noncentral_abelian_normal(lattice("D4"))
    assert not has_noncentral_abelian_normal(lattice("Z12"))  # everything is central
    assert not has_noncentral_abelian_normal(lattice("A5", "implicit"))


def test_invariant_report_shapes():
    rep = invariant_report(lattice("S3"))
    d = rep.to_json_dict()
    assert d["w"] == {"1": 1, "2": 1, "3": 1}
    assert d["center"] == [0]
    assert sorted(tuple(x) for x in d["M"]) == [(0, 1), (0, 2), (0, 3)]
    text = rep.to_text()
    assert "w(1)=1 w(2)=1 w(3)=1" in text
    assert "M: {a,d} {a,c} {a,b}" in text


def test_invariant_report_flags_undecided():
    rep = invariant_report(lattice("A5", "implicit"))
    assert rep.m_undecided
    assert "M undecided closures:" in rep.to_text()
