"""Finite racks and quandles, chiefly the conjugation quandle of a group.

A rack stores its full operation table.  Element sets are bitmasks (see
bitset).  The key closure routine is close(), a worklist fixed point of
x,y -> x|>y over the current set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .bitset import bits
from .groups import FiniteGroup

FULL_AXIOM_LIMIT = 64
SAMPLED_TRIPLES = 4000


class RackAxiomError(ValueError):
    pass


class Rack:
    """A finite rack: op[a][b] = a |> b.

    backing is the group the table was derived from (conjugation), or None
    for an abstract rack such as an interval of a subrack lattice viewed as
    a rack in its own right.
    """

    def __init__(self, op: Sequence[Sequence[int]], *,
                 backing: FiniteGroup | None = None,
                 check: bool = True, quandle_expected: bool = False,
                 seed: int = 0):
        self.op = tuple(tuple(row) for row in op)
        self.size = len(self.op)
        self.backing = backing
        self.full_mask = (1 << self.size) - 1
        if check:
            self._check_axioms(quandle_expected or backing is not None, seed)
        # op_mask[a][b] caches nothing; instead phi rows below are the hot path

    def _check_axioms(self, quandle: bool, seed: int) -> None:
        n, op = self.size, self.op
        idx = set(range(n))
        for a in range(n):
            if set(op[a]) != idx:
                raise RackAxiomError(f"left translation by {a} is not a permutation")
        if n <= FULL_AXIOM_LIMIT:
            triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(SAMPLED_TRIPLES))
        for a, b, c in triples:
            if op[a][op[b][c]] != op[op[a][b]][op[a][c]]:
                raise RackAxiomError(f"self-distributivity fails at ({a},{b},{c})")
        if quandle:
            for a in range(n):
                if op[a][a] != a:
                    raise RackAxiomError(f"idempotence fails at {a}")

    @cached_property
    def is_trivial(self) -> bool:
        """True when a |> b = b throughout (abelian conjugation)."""
        return all(self.op[a][b] == b for a in range(self.size) for b in range(self.size))

    def phi(self, a: int) -> tuple[int, ...]:
        """The permutation b -> a |> b as an image tuple."""
        return self.op[a]

    def phi_mask(self, a: int, mask: int) -> int:
        """Image of a member set under the left translation by a."""
        row = self.op[a]
        out = 0
        for b in bits(mask):
            out |= 1 << row[b]
        return out

    def set_conjugate(self, s: int, t: int) -> int:
        """S |> T, elementwise."""
        out = 0
        for a in bits(s):
            out |= self.phi_mask(a, t)
        return out

    def is_subrack(self, mask: int) -> bool:
        # one-sided test: S |> S within S forces equality in a finite rack,
        # since each left translation restricted to S stays injective
        for a in bits(mask):
            if self.phi_mask(a, mask) & ~mask:
                return False
        return True

    def close(self, mask: int) -> int:
        """Least superset of mask closed under |> (the generated subrack)."""
        cur = mask
        frontier = mask
        while frontier:
            add = 0
            for a in bits(frontier):
                add |= self.phi_mask(a, cur)
            for a in bits(cur & ~frontier):
                add |= self.phi_mask(a, frontier)
            frontier = add & ~cur
            cur |= frontier
        return cur

    def restrict(self, mask: int) -> tuple["Rack", tuple[int, ...]]:
        """The subrack on mask as an abstract rack plus its atom relabeling.

        Returns (rack, members) where members[i] is the parent index of the
        new rack's element i.
        """
        if not self.is_subrack(mask):
            raise ValueError("restriction requires a subrack")
        members = tuple(bits(mask))
        back = {p: i for i, p in enumerate(members)}
        op = [[back[self.op[a][b]] for b in members] for a in members]
        return Rack(op, backing=None, check=False), members

    def __repr__(self) -> str:
        kind = "conjugation" if self.backing is not None else "abstract"
        return f"Rack(size={self.size}, {kind})"


@dataclass(frozen=True)
class Subrack:
    rack: Rack
    members: int  # bitmask

    def __post_init__(self):
        if not self.rack.is_subrack(self.members):
            raise ValueError("member set is not closed under the rack operation")


def conjugation_quandle(g: FiniteGroup) -> Rack:
    op = [[g.conj(a, b) for b in range(g.order)] for a in range(g.order)]
    return Rack(op, backing=g, check=True, quandle_expected=True)


def subrack_generated(mask: int, r: Rack) -> Subrack:
    return Subrack(r, r.close(mask))


@dataclass(frozen=True)
class InnerPermutation:
    source: int
    images: tuple[int, ...]


@dataclass(frozen=True)
class InnerMap:
    """The map a -> phi_a together with its image group.

    image is the group of distinct inner permutations (identity first, then
    image-tuple order); fibers[k] is the mask of group elements mapping to
    image element k.  The fiber of the identity permutation is the center.
    """
    perms: tuple[InnerPermutation, ...]
    image: FiniteGroup
    fibers: tuple[int, ...]
    image_index_of: tuple[int, ...]


def inner_map(g: FiniteGroup) -> InnerMap:
    from .groups import group_from_element_perms
    rack = conjugation_quandle(g)
    perms = tuple(InnerPermutation(a, rack.phi(a)) for a in range(g.order))
    ident = tuple(range(g.order))
    distinct = sorted({p.images for p in perms} - {ident})
    ordered = [ident] + distinct
    image = group_from_element_perms(f"Phi({g.name})", ordered)
    pos = {p: i for i, p in enumerate(ordered)}
    fibers = [0] * len(ordered)
    index_of = []
    for a in range(g.order):
        k = pos[perms[a].images]
        fibers[k] |= 1 << a
        index_of.append(k)
    return InnerMap(perms, image, tuple(fibers), tuple(index_of))
