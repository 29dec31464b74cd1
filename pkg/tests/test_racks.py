"""Rack axioms and the conjugation quandle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import group
from racklat.bitset import bits
from racklat.racks import (Rack, RackAxiomError, conjugation_quandle, inner_map,
                           subrack_generated)


def test_rejects_non_bijective_translation():
    with pytest.raises(RackAxiomError):
        Rack([[0, 0], [0, 1]])


def test_rejects_non_distributive_table():
    # translations are permutations but a |> (b |> c) breaks at (0,1,0)
    with pytest.raises(RackAxiomError):
        Rack([[1, 0, 2], [0, 1, 2], [0, 1, 2]])


def test_quandle_check_catches_non_idempotent_point():
    # cyclic shift is a rack (constant action) but no quandle
    with pytest.raises(RackAxiomError):
        Rack([[1, 2, 0], [1, 2, 0], [1, 2, 0]], quandle_expected=True)


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "Z6"])
def test_conjugation_is_a_quandle(name):
    g = group(name)
    r = conjugation_quandle(g)
    n = r.size
    assert n == g.order
    for a in range(n):
        assert r.op[a][a] == a
    for a in range(n):
        for b in range(n):
            assert r.op[a][b] == g.conj(a, b)


def test_trivial_iff_abelian():
    assert conjugation_quandle(group("Z12")).is_trivial
    assert conjugation_quandle(group("Z2xZ4")).is_trivial
    assert not conjugation_quandle(group("S3")).is_trivial


@given(st.integers(min_value=0, max_value=(1 << 6) - 1))
def test_s3_closure_is_monotone_idempotent(mask):
    r = conjugation_quandle(group("S3"))
    c = r.close(mask)
    assert mask & ~c == 0
    assert r.close(c) == c
    assert r.is_subrack(c)


@given(st.integers(min_value=0, max_value=(1 << 8) - 1),
       st.integers(min_value=0, max_value=(1 << 8) - 1))
def test_d4_closure_respects_inclusion(s, t):
    r = conjugation_quandle(group("D4"))
    assert r.close(s & t) & ~r.close(s) == 0
    assert r.close(s) & ~r.close(s | t) == 0


@settings(max_examples=60)
@given(st.sampled_from(["S3", "D5", "A4"]),
       st.data())
def test_generated_subrack_is_closed_under_op(name, data):
    g = group(name)
    r = conjugation_quandle(g)
    mask = data.draw(st.integers(min_value=0, max_value=r.full_mask))
    sub = subrack_generated(mask, r)
    members = list(bits(sub.members))
    for a in members:
        for b in members:
            assert sub.members >> r.op[a][b] & 1


def test_subgroups_are_subracks():
    g = group("S4")
    r = conjugation_quandle(g)
    for s in g.all_subgroups:
        assert r.is_subrack(s)


def test_inner_group_size_is_central_quotient():
    for name in ["S3", "D4", "Q8", "D6", "A4", "Z8"]:
        g = group(name)
        inn = inner_map(g)
        assert len(inn.image) == g.order // g.center_mask.bit_count()


def test_inner_map_multiplies_like_conjugation():
    g = group("D5")
    inn = inner_map(g)
    idx = inn.image_index_of
    for a in range(g.order):
        for b in range(g.order):
            assert idx[g.mul(a, b)] == inn.image.mul(idx[a], idx[b])


def test_inner_identity_fiber_is_center():
    for name in ["D4", "D6", "S3"]:
        g = group(name)
        assert inner_map(g).fibers[0] == g.center_mask
