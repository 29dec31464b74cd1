"""Shared builders. Groups and lattices are immutable, so one instance per
catalog name is cached for the whole session; tests must not mutate them."""

from functools import lru_cache

from racklat.catalog import CATALOG, catalog_entry
from racklat.groups import oracle_suite
from racklat.lattice import SubrackLattice
from racklat.racks import conjugation_quandle


@lru_cache(maxsize=None)
def group(name):
    return catalog_entry(name).build()


@lru_cache(maxsize=None)
def lattice(name, mode="explicit"):
    return SubrackLattice(conjugation_quandle(group(name)), mode=mode)


@lru_cache(maxsize=None)
def oracle(name):
    return oracle_suite(group(name))


def names_up_to(max_order, *, skip_implicit_only=True):
    return [e.name for e in CATALOG
            if e.order <= max_order and not (skip_implicit_only and e.implicit_only)]


def conj_cycle_supports(g, a):
    """Cycle supports of b -> a b a^-1 as bitmasks, identity cycles included."""
    perm = [g.conj(a, x) for x in range(g.order)]
    seen, out = 0, []
    for s in range(g.order):
        if seen >> s & 1:
            continue
        cyc, x = 0, s
        while not cyc >> x & 1:
            cyc |= 1 << x
            x = perm[x]
        seen |= cyc
        out.append(cyc)
    return out
