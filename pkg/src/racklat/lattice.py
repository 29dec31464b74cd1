"""The subrack lattice of a rack: explicit materialization and implicit views.

Explicit mode holds every closed set; implicit mode answers point queries
(membership, meet, join, closure, coatoms) without enumeration.  Intervals
[lo, top] are materialized as lattices over the restricted rack.  All member
sets are bitmasks over the rack's atom indices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

from .bitset import bits, canonical_key, format_set
from .racks import Rack

EXPLICIT_CAP = 1 << 20
INTERVAL_ATOM_CAP = 24
INT_POSET_CAP = 1 << 16


class CapExceeded(RuntimeError):
    """Enumeration would exceed the configured cap."""


class ImplicitOnly(RuntimeError):
    """Operation needs the explicit element list, lattice is implicit."""


def enumerate_closed_sets(rack: Rack, cap: int = EXPLICIT_CAP) -> list[int]:
    """All subracks, by canonical depth-first closure search.

    A child close(A | {i}) is kept only when it adds nothing below i, so each
    closed set is produced exactly once (from its lexicographically canonical
    generation path).
    """
    n = rack.size
    if rack.is_trivial:
        if 1 << n > cap:
            raise CapExceeded(f"2^{n} subsets exceed cap {cap}")
        return list(range(1 << n))
    out = []
    close = rack.close

    def rec(a: int, j: int) -> None:
        out.append(a)
        if len(out) > cap:
            raise CapExceeded(f"subrack count exceeds cap {cap}")
        for i in range(j, n):
            if a >> i & 1:
                continue
            b = close(a | 1 << i)
            below = (1 << i) - 1
            if b & below == a & below:
                rec(b, i + 1)

    rec(close(0), 0)
    return out


@dataclass(frozen=True)
class IntPoset:
    """Meets of coatom subsets, ordered by inclusion.

    elements includes the empty meet (the lattice top).  bottom is the meet
    of all coatoms.  is_boolean reports whether the poset is a Boolean
    algebra on its own atoms.
    """
    elements: tuple[int, ...]
    top: int
    bottom: int
    atoms: tuple[int, ...]
    is_boolean: bool


def _int_poset_from_coatoms(top: int, coatoms: tuple[int, ...],
                            cap: int = INT_POSET_CAP) -> IntPoset:
    elems = {top}
    frontier = [top]
    while frontier:
        nxt = []
        for e in frontier:
            for c in coatoms:
                m = e & c
                if m not in elems:
                    elems.add(m)
                    nxt.append(m)
                    if len(elems) > cap:
                        raise CapExceeded("Int poset exceeds cap")
        frontier = nxt
    bottom = top
    for c in coatoms:
        bottom &= c
    proper = [e for e in elems if e != bottom]
    atoms = tuple(sorted(
        e for e in proper
        if not any(o != e and o & ~e == 0 for o in proper)))
    # Boolean iff the atom-support map is a bijection onto the power set of
    # the atom list and mask inclusion agrees with support inclusion
    n_atoms = len(atoms)
    is_boolean = len(elems) == 1 << n_atoms
    if is_boolean:
        support = {e: frozenset(i for i, a in enumerate(atoms) if a & ~e == 0)
                   for e in elems}
        is_boolean = len(set(support.values())) == 1 << n_atoms
        if is_boolean:
            es = list(elems)
            for e1 in es:
                for e2 in es:
                    if support[e1] <= support[e2] and e1 & ~e2:
                        is_boolean = False
                        break
                if not is_boolean:
                    break
    ordered = tuple(sorted(elems, key=lambda m: canonical_key(m, max(1, top.bit_length()))))
    return IntPoset(ordered, top, bottom, atoms, is_boolean)


class SubrackLattice:
    """R(rack), either fully materialized or as an implicit query view.

    lo is the fixed minimum (normally the empty set); a lattice with lo != 0
    represents an interval [lo, full] and only arises from interval().
    """

    def __init__(self, rack: Rack, *, mode: str = "auto",
                 cap: int = EXPLICIT_CAP, lo: int = 0):
        if mode not in ("auto", "explicit", "implicit"):
            raise ValueError(f"unknown mode: {mode}")
        self.rack = rack
        self.lo = lo
        self.cap = cap
        self._elements: list[int] | None = None
        if mode == "implicit":
            self.mode = "implicit"
        else:
            try:
                elems = enumerate_closed_sets(rack, cap)
                if lo:
                    elems = [e for e in elems if lo & ~e == 0]
                self._elements = sorted(elems, key=lambda m: canonical_key(m, rack.size))
                self._element_set = set(self._elements)
                self.mode = "explicit"
            except CapExceeded:
                if mode == "explicit":
                    raise
                self.mode = "implicit"
        if self.mode == "implicit" and rack.backing is None:
            raise ImplicitOnly("implicit mode needs a group-backed rack")

    # -- basic queries --------------------------------------------------------

    @property
    def n_atoms(self) -> int:
        return self.rack.size

    @property
    def top(self) -> int:
        return self.rack.full_mask

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        if self.lo:
            # interval minimum: atoms are the elements covering lo
            proper = [e for e in self.elements if e != self.lo]
            return tuple(e for e in proper
                         if not any(o != e and o != self.lo and o & ~e == 0
                                    for o in proper))
        out = []
        for i in range(self.rack.size):
            m = 1 << i
            if self.rack.is_subrack(m):
                out.append(m)
        if len(out) != self.rack.size:
            raise AssertionError("rack is not a quandle: some singleton is not a subrack")
        return tuple(out)

    def is_element(self, mask: int) -> bool:
        if self.lo & ~mask:
            return False
        if self._elements is not None:
            return mask in self._element_set
        return self.rack.is_subrack(mask)

    def meet(self, s: int, t: int) -> int:
        return s & t

    def join(self, s: int, t: int) -> int:
        return self.rack.close(s | t)

    def join_all(self, masks) -> int:
        u = self.lo
        for m in masks:
            u |= m
        return self.rack.close(u)

    @property
    def elements(self) -> list[int]:
        if self._elements is None:
            raise ImplicitOnly("element list not materialized in implicit mode")
        return self._elements

    # -- coatoms and closure --------------------------------------------------

    @cached_property
    def coatoms(self) -> tuple[int, ...]:
        g = self.rack.backing
        if g is not None and self.lo == 0:
            # maximal subracks of a group are complements of single classes
            full = self.top
            return tuple(full & ~c for c in g.conjugacy_classes)
        proper = [e for e in self.elements if e != self.top]
        proper.sort(key=lambda m: -m.bit_count())
        kept: list[int] = []
        for t in proper:
            if not any(t & ~u == 0 for u in kept):
                kept.append(t)
        return tuple(sorted(kept, key=lambda m: canonical_key(m, self.rack.size)))

    def closure(self, mask: int) -> int:
        if not self.is_element(mask):
            raise ValueError("closure is defined for lattice elements only")
        out = self.top
        for c in self.coatoms:
            if mask & ~c == 0:
                out &= c
        return out

    def is_closed(self, mask: int) -> bool:
        return self.closure(mask) == mask

    @cached_property
    def closed_sets(self) -> tuple[int, ...]:
        """All closed elements, i.e. the meets of coatom subsets."""
        return self.int_poset().elements

    def int_poset(self, *, top: int | None = None,
                  coatoms: tuple[int, ...] | None = None) -> IntPoset:
        if top is None:
            top = self.top
        if coatoms is None:
            coatoms = self.coatoms
        return _int_poset_from_coatoms(top, coatoms)

    # -- commuting atoms ------------------------------------------------------

    def atoms_commute(self, x: int, y: int) -> bool:
        """Atoms given by index; true iff their join covers nothing else."""
        if x == y:
            return True
        return self.join(1 << x, 1 << y) == (1 << x) | (1 << y)

    @cached_property
    def commuting_atoms(self) -> tuple[int, ...]:
        """commuting_atoms[x] = mask of atoms commuting with x (including x)."""
        n = self.rack.size
        rows = [1 << x for x in range(n)]
        for x in range(n):
            for y in range(x + 1, n):
                if self.atoms_commute(x, y):
                    rows[x] |= 1 << y
                    rows[y] |= 1 << x
        return tuple(rows)

    def is_boolean_interval(self, mask: int) -> bool:
        """Whether [lo, mask] is a Boolean algebra.

        Every subset of mask is a subrack iff no translation inside mask
        moves anything: x |> y = y for all pairs.
        """
        op = self.rack.op
        members = list(bits(mask))
        for x in members:
            row = op[x]
            for y in members:
                if row[y] != y:
                    return False
        return True

    # -- intervals ------------------------------------------------------------

    def interval(self, s: int, t: int, *, cap_atoms: int = INTERVAL_ATOM_CAP
                 ) -> "LatticeInterval":
        if s & ~t:
            raise ValueError("interval requires s <= t")
        if not self.is_element(s) or not self.is_element(t):
            raise ValueError("interval endpoints must be lattice elements")
        if t.bit_count() > cap_atoms:
            raise CapExceeded(
                f"interval on {t.bit_count()} atoms exceeds cap {cap_atoms}")
        sub, members = self.rack.restrict(t)
        back = {p: i for i, p in enumerate(members)}
        lo = 0
        for i in bits(s):
            lo |= 1 << back[i]
        lat = SubrackLattice(sub, mode="explicit", cap=self.cap, lo=lo)
        return LatticeInterval(lat, members)

    # -- explicit-only structure ----------------------------------------------

    @cached_property
    def hasse(self) -> tuple[tuple[int, int], ...]:
        """Cover pairs (lo_index, hi_index) into the canonical element list.

        When every single-atom deletion of an element is again an element,
        its lower covers are exactly those deletions; otherwise the element
        falls back to a maximality scan over its subsets.
        """
        elems = self.elements
        pos = {e: i for i, e in enumerate(elems)}
        by_card: dict[int, list[int]] = {}
        for e in elems:
            by_card.setdefault(e.bit_count(), []).append(e)
        edges: list[tuple[int, int]] = []
        for e in elems:
            if e == self.lo:
                continue
            dels = [e & ~(1 << i) for i in bits(e & ~self.lo)]
            present = [d for d in dels if d in pos]
            if len(present) == len(dels):
                covers = present
            else:
                covers = []
                k = e.bit_count()
                for c in sorted((c for c in by_card if c < k), reverse=True):
                    for u in by_card[c]:
                        if u != e and u & ~e == 0:
                            if not any(u & ~v == 0 for v in covers):
                                covers.append(u)
            for u in covers:
                edges.append((pos[u], pos[e]))
        return tuple(sorted(edges))

    def random_elements(self, count: int, seed: int = 0) -> tuple[int, ...]:
        cache = self.__dict__.setdefault("_random_cache", {})
        key = (count, seed)
        if key not in cache:
            rng = random.Random(seed)
            n = self.rack.size
            out = []
            for _ in range(count):
                m = rng.getrandbits(n) & self.top
                out.append(self.rack.close(m | self.lo))
            cache[key] = tuple(out)
        return cache[key]

    @cached_property
    def pair_joins(self) -> dict[tuple[int, int], int]:
        """close({x,y}) for every atom pair x <= y, keyed by indices."""
        n = self.rack.size
        out = {}
        for x in range(n):
            for y in range(x, n):
                out[(x, y)] = self.rack.close((1 << x) | (1 << y) | self.lo)
        return out

    # -- export ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        elems = self.elements
        return {
            "atoms": self.rack.size,
            "elements": [list(bits(e)) for e in elems],
            "hasse": [list(p) for p in self.hasse],
        }

    def to_dot(self) -> str:
        elems = self.elements
        n = self.rack.size
        lines = ["digraph subrack_lattice {", "  rankdir=BT;"]
        for i, e in enumerate(elems):
            lines.append(f'  n{i} [label="{format_set(e, n)}"];')
        for lo, hi in self.hasse:
            lines.append(f"  n{lo} -> n{hi};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        size = len(self._elements) if self._elements is not None else "?"
        return f"SubrackLattice(atoms={self.rack.size}, mode={self.mode}, elements={size})"


@dataclass(frozen=True)
class LatticeInterval:
    """An interval materialized as a lattice over the restricted rack.

    members[i] gives the parent atom index of interval atom i.
    """
    lattice: SubrackLattice
    members: tuple[int, ...]

    def to_parent(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.members[i]
        return out

    def from_parent(self, mask: int) -> int:
        back = {p: i for i, p in enumerate(self.members)}
        out = 0
        for p in bits(mask):
            out |= 1 << back[p]
        return out
