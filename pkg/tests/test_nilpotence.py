"""Nilpotence class recovery from the lattice alone, checked per group."""

import pytest

from conftest import group, lattice, names_up_to, oracle
from racklat.nilpotence import (build_central_partition, hypercenter_quotient,
                                nilpotence_class_from_lattice, partition_survey,
                                quotient_poset, verify_partition)

SWEEP = names_up_to(24)


@pytest.mark.parametrize("name", SWEEP)
def test_class_matches_oracle(name):
    g = group(name)
    res = nilpotence_class_from_lattice(lattice(name), g)
    expect = oracle(name).nilpotency_class
    if expect is None:
        assert not res.nilpotent
        assert res.nilpotency_class is None
    else:
        assert res.nilpotent
        assert res.nilpotency_class == expect


@pytest.mark.parametrize("name,klass", [
    ("Z1", 0), ("Z7", 1), ("Z2xZ2", 1), ("D4", 2), ("Q8", 2),
    ("D8", 3), ("Q16", 3),
])
def test_frozen_class_witnesses(name, klass):
    res = nilpotence_class_from_lattice(lattice(name), group(name))
    assert res.nilpotent and res.nilpotency_class == klass


@pytest.mark.parametrize("name", ["S3", "D5", "A4", "S4"])
def test_frozen_non_nilpotent_witnesses(name):
    res = nilpotence_class_from_lattice(lattice(name), group(name))
    assert not res.nilpotent


def test_step_trace_shrinks():
    res = nilpotence_class_from_lattice(lattice("D8"), group("D8"))
    atoms = [s.atoms for s in res.steps]
    assert atoms == sorted(atoms, reverse=True)
    assert len(res.steps) == res.nilpotency_class
    assert "class 3" in res.to_text()


def test_result_json_shape():
    d = nilpotence_class_from_lattice(lattice("Q8"), group("Q8")).to_json_dict()
    assert d["nilpotent"] is True and d["class"] == 2
    assert len(d["steps"]) == 2
    assert set(d["steps"][0]) == {"atoms", "center", "blocks", "poset"}


def test_hypercenter_quotient_is_centerless_or_trivial():
    for name in ["S3", "D6", "Q8", "A4", "Z12"]:
        qlat, qg = hypercenter_quotient(lattice(name), group(name))
        assert qg.center_mask == 1 or qg.order == 1
        assert qlat.n_atoms == qg.order


def test_hypercenter_quotient_orders():
    _, qg = hypercenter_quotient(lattice("S3"), group("S3"))
    assert qg.order == 6
    _, qg = hypercenter_quotient(lattice("D6"), group("D6"))
    assert qg.order == 6      # mod the order-2 center
    _, qg = hypercenter_quotient(lattice("Q8"), group("Q8"))
    assert qg.order == 1      # nilpotent: the series climbs to the top


def test_central_partition_blocks_are_center_cosets():
    g = group("D4")
    lat = lattice("D4")
    part = build_central_partition(lat, g)
    z = g.center_mask
    cosets = set()
    for a in range(g.order):
        c = 0
        for x in [g.mul(a, s) for s in range(g.order) if z >> s & 1]:
            c |= 1 << x
        cosets.add(c)
    assert set(part.blocks) == cosets
    assert verify_partition(lat, g, part.blocks,
                            center_size=z.bit_count()) is None


def test_quotient_poset_matches_central_quotient():
    g = group("D4")
    lat = lattice("D4")
    part = build_central_partition(lat, g)
    qp, q = quotient_poset(lat, g, part)
    # D4 over its center is Z2xZ2, whose lattice is the full 16-set power set
    assert len(qp.elements) == 15  # nonempty subracks only
    assert q.group.order == 4 and q.group.is_abelian
    assert sorted(qp.block_map) == [0, 1, 2, 3]


@pytest.mark.parametrize("name", names_up_to(12))
def test_survey_reference_always_recovered(name):
    g = group(name)
    sv = partition_survey(lattice(name), g)
    assert sv.full_iso  # the coset partition itself must pass
    assert sv.reference in sv.full_iso


# the three order-12 groups with a 2-element center all admit one partition
# that passes every block condition yet quotients to the wrong poset
@pytest.mark.parametrize("name", ["D6", "Dic3", "S3xZ2"])
def test_survey_finds_the_known_impostor(name):
    sv = partition_survey(lattice(name), group(name))
    assert len(sv.full_breaks) == 1
    assert len(sv.full_iso) == 2


@pytest.mark.parametrize("name", [n for n in names_up_to(12)
                                  if n not in ("D6", "Dic3", "S3xZ2")])
def test_survey_clean_below_order_twelve(name):
    sv = partition_survey(lattice(name), group(name))
    assert sv.full_breaks == ()
