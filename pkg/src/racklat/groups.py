"""Finite groups on integer indices 0..n-1, with a direct group-theoretic oracle.

The group is held as a Cayley table with the identity fixed at index 0.
Everything here computes with the group operation itself; it serves as the
independent reference that the lattice-only procedures are checked against.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .bitset import bits, mask_of

# Associativity is verified over all n**3 triples up to this order; above it,
# 10*n**2 random triples are checked with a seeded generator.
FULL_ASSOCIATIVITY_LIMIT = 64
SAMPLED_TRIPLES_PER_SQUARE = 10

DEFAULT_MAX_ORDER = 5040


class GroupBuildError(ValueError):
    """Input does not describe a group (or violates a construction cap)."""


class FiniteGroup:
    """Immutable finite group given by its multiplication table.

    table[a][b] is the index of a*b.  Index 0 is the identity.  Derived data
    (classes, subgroups, series) is cached on first use; instances must not
    be mutated after construction.
    """

    def __init__(self, name: str, table: Sequence[Sequence[int]], *,
                 check: bool = True, seed: int = 0):
        self.name = name
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        if self.order == 0:
            raise GroupBuildError("empty table")
        if check:
            self._validate(seed)
        inv = [None] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.table[a][b] == 0:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise GroupBuildError(f"element {a} has no inverse")
        self.inverse = tuple(inv)
        self.full_mask = (1 << self.order) - 1

    def _validate(self, seed: int) -> None:
        n = self.order
        idx = set(range(n))
        for a, row in enumerate(self.table):
            if len(row) != n:
                raise GroupBuildError(f"row {a} has length {len(row)}, expected {n}")
            if set(row) != idx:
                raise GroupBuildError(f"row {a} is not a permutation of 0..{n - 1}")
        for b in range(n):
            if {self.table[a][b] for a in range(n)} != idx:
                raise GroupBuildError(f"column {b} is not a permutation of 0..{n - 1}")
        for a in range(n):
            if self.table[0][a] != a or self.table[a][0] != a:
                raise GroupBuildError("index 0 is not a two-sided identity")
        t = self.table
        if n <= FULL_ASSOCIATIVITY_LIMIT:
            rng_triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
        else:
            rng = random.Random(seed)
            rng_triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                           for _ in range(SAMPLED_TRIPLES_PER_SQUARE * n * n))
        for a, b, c in rng_triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupBuildError(f"associativity fails at ({a},{b},{c})")

    # -- basic operations ---------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, a: int, b: int) -> int:
        """a * b * a**-1."""
        t = self.table
        return t[t[a][b]][self.inverse[a]]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse[a], -k)
        r = 0
        while k:
            r = self.table[r][a]
            k -= 1
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    # -- conjugacy ----------------------------------------------------------

    @cached_property
    def conjugacy_classes(self) -> tuple[int, ...]:
        """Class member sets as masks, ordered by smallest member index."""
        seen = 0
        classes = []
        for a in range(self.order):
            if seen >> a & 1:
                continue
            cls = 0
            for g in range(self.order):
                cls |= 1 << self.conj(g, a)
            classes.append(cls)
            seen |= cls
        return tuple(classes)

    @cached_property
    def class_index_of(self) -> tuple[int, ...]:
        out = [0] * self.order
        for i, cls in enumerate(self.conjugacy_classes):
            for a in bits(cls):
                out[a] = i
        return tuple(out)

    def class_of(self, a: int) -> int:
        return self.conjugacy_classes[self.class_index_of[a]]

    def class_closure(self, mask: int) -> int:
        """Union of the conjugacy classes meeting the given set."""
        out = 0
        for a in bits(mask):
            out |= self.class_of(a)
        return out

    @cached_property
    def commuting(self) -> tuple[int, ...]:
        """commuting[a] = mask of elements commuting with a (including a)."""
        n, t = self.order, self.table
        rows = []
        for a in range(n):
            m = 0
            for b in range(n):
                if t[a][b] == t[b][a]:
                    m |= 1 << b
            rows.append(m)
        return tuple(rows)

    @cached_property
    def center_mask(self) -> int:
        m = self.full_mask
        for a in range(self.order):
            m &= self.commuting[a]
        return m

    @cached_property
    def is_abelian(self) -> bool:
        return self.center_mask == self.full_mask

    def centralizer(self, mask: int) -> int:
        out = self.full_mask
        for a in bits(mask):
            out &= self.commuting[a]
        return out

    # -- subgroups ----------------------------------------------------------

    def subgroup_closure(self, mask: int) -> int:
        """Smallest subgroup containing the given elements."""
        cur = mask | 1
        frontier = cur
        t = self.table
        while frontier:
            add = 0
            for a in bits(cur):
                row = t[a]
                for b in bits(frontier):
                    add |= 1 << row[b]
            for a in bits(frontier):
                row = t[a]
                for b in bits(cur):
                    add |= 1 << row[b]
            for a in bits(frontier):
                add |= 1 << self.inverse[a]
            frontier = add & ~cur
            cur |= frontier
        return cur

    def is_subgroup(self, mask: int) -> bool:
        if not mask & 1:
            return False
        t = self.table
        for a in bits(mask):
            row = t[a]
            for b in bits(mask):
                if not mask >> row[b] & 1:
                    return False
        return True

    @cached_property
    def all_subgroups(self) -> tuple[int, ...]:
        """Every subgroup, found by closing cyclic subgroups upward."""
        cyclic = set()
        for a in range(self.order):
            cyclic.add(self.subgroup_closure(1 << a))
        known = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for h in frontier:
                for c in cyclic:
                    if c & ~h:
                        j = self.subgroup_closure(h | c)
                        if j not in known:
                            known.add(j)
                            new.add(j)
            frontier = new
        return tuple(sorted(known, key=lambda m: (m.bit_count(), m)))

    def is_normal(self, mask: int) -> bool:
        return self.class_closure(mask) == mask and self.is_subgroup(mask)

    @cached_property
    def normal_subgroups(self) -> tuple[int, ...]:
        return tuple(h for h in self.all_subgroups if self.class_closure(h) == h)

    @cached_property
    def maximal_subgroups(self) -> tuple[int, ...]:
        proper = [h for h in self.all_subgroups if h != self.full_mask]
        out = [h for h in proper
               if not any(h != k and h & ~k == 0 for k in proper)]
        return tuple(out)

    @cached_property
    def maximal_abelian_subgroups(self) -> tuple[int, ...]:
        """Maximal sets of pairwise commuting elements; each is a subgroup."""
        from .cliques import maximal_cliques
        adj = tuple(self.commuting[a] & ~(1 << a) for a in range(self.order))
        out = maximal_cliques(adj)
        for m in out:
            # a maximal commuting set is the intersection of the centralizers
            # of its members, hence closed under the group operation
            if not self.is_subgroup(m):
                raise AssertionError("maximal commuting set is not a subgroup")
        return tuple(sorted(out, key=lambda m: (m.bit_count(), m)))

    # -- series and quotients -----------------------------------------------

    @cached_property
    def upper_central_series(self) -> tuple[int, ...]:
        """Masks Z_0 <= Z_1 <= ... until the series stabilizes."""
        series = [1]
        while True:
            z = series[-1]
            nxt = 0
            for x in range(self.order):
                if all(z >> self._commutator(x, g) & 1 for g in range(self.order)):
                    nxt |= 1 << x
            if nxt == z:
                return tuple(series)
            series.append(nxt)

    def _commutator(self, x: int, g: int) -> int:
        t = self.table
        return t[t[t[x][g]][self.inverse[x]]][self.inverse[g]]

    def nilpotency_class(self) -> int | None:
        series = self.upper_central_series
        if series[-1] != self.full_mask:
            return None
        return len(series) - 1

    def hypercenter(self) -> int:
        return self.upper_central_series[-1]

    def quotient(self, normal_mask: int) -> "QuotientResult":
        """Quotient by a normal subgroup, with a canonical coset labeling.

        Cosets are ordered by their smallest member index, which puts the
        identity coset at index 0.
        """
        if not self.is_normal(normal_mask):
            raise GroupBuildError("quotient requires a normal subgroup")
        cosets = []
        seen = 0
        for a in range(self.order):
            if seen >> a & 1:
                continue
            c = 0
            for x in bits(normal_mask):
                c |= 1 << self.table[a][x]
            cosets.append(c)
            seen |= c
        cosets.sort(key=lambda c: (c & -c))
        coset_of = [0] * self.order
        for i, c in enumerate(cosets):
            for a in bits(c):
                coset_of[a] = i
        reps = [(c & -c).bit_length() - 1 for c in cosets]
        table = [[coset_of[self.table[ra][rb]] for rb in reps] for ra in reps]
        q = FiniteGroup(f"{self.name}/N{normal_mask.bit_count()}", table, check=False)
        return QuotientResult(q, tuple(coset_of), tuple(cosets))

    # -- Sylow structure ----------------------------------------------------

    def prime_factors(self) -> tuple[int, ...]:
        n = self.order
        out = []
        d = 2
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            out.append(n)
        return tuple(out)

    def p_part(self, p: int) -> int:
        """Largest power of p dividing the group order."""
        n, pk = self.order, 1
        while n % p == 0:
            n //= p
            pk *= p
        return pk

    def sylow_subgroup(self, p: int) -> int:
        pk = self.p_part(p)
        for h in self.all_subgroups:
            if h.bit_count() == pk:
                return h
        raise AssertionError(f"no subgroup of order {pk} found")

    def has_normal_p_complement(self, p: int) -> bool:
        """True iff some normal subgroup of order |G| / p-part exists.

        Such a subgroup has order coprime to p and meets every Sylow
        p-subgroup trivially; the intersection is asserted anyway.
        """
        target = self.order // self.p_part(p)
        syl = self.sylow_subgroup(p)
        for h in self.normal_subgroups:
            if h.bit_count() == target:
                if (h & syl) != 1:
                    raise AssertionError("complement meets a Sylow subgroup")
                return True
        return False


@dataclass(frozen=True)
class QuotientResult:
    group: FiniteGroup
    coset_of: tuple[int, ...]   # element index -> coset index
    cosets: tuple[int, ...]     # coset index -> member mask


# -- construction from explicit data -----------------------------------------


def group_from_table(name: str, table: Sequence[Sequence[int]], *,
                     seed: int = 0) -> FiniteGroup:
    return FiniteGroup(name, table, check=True, seed=seed)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p after q): maps x to p[q[x]]."""
    return tuple(p[q[x]] for x in range(len(p)))


def _perm_inverse(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def group_from_permutations(name: str, degree: int,
                            generators: Iterable[Sequence[int]], *,
                            max_order: int = DEFAULT_MAX_ORDER,
                            seed: int = 0) -> FiniteGroup:
    """Close a generating set of permutations under composition.

    Elements are ordered with the identity first, then by image-tuple
    lexicographic order, so equal generating sets always yield the same
    indexing.
    """
    gens = []
    for g in generators:
        g = tuple(g)
        if sorted(g) != list(range(degree)):
            raise GroupBuildError(f"not a permutation of 0..{degree - 1}: {g}")
        gens.append(g)
    ident = tuple(range(degree))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                if q not in elems:
                    elems.add(q)
                    nxt.append(q)
                    if len(elems) > max_order:
                        raise GroupBuildError(
                            f"generator closure exceeds max order {max_order}")
        frontier = nxt
    ordered = [ident] + sorted(elems - {ident})
    return group_from_element_perms(name, ordered, seed=seed)


def group_from_element_perms(name: str, perms: Sequence[Sequence[int]], *,
                             seed: int = 0) -> FiniteGroup:
    """Build a group from a full, explicitly ordered list of permutations."""
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    if len(index) != len(perms):
        raise GroupBuildError("duplicate permutation in element list")
    if perms[0] != tuple(range(len(perms[0]))):
        raise GroupBuildError("element 0 must be the identity permutation")
    table = []
    for p in perms:
        row = []
        for q in perms:
            r = compose(p, q)
            if r not in index:
                raise GroupBuildError("element list is not closed under composition")
            row.append(index[r])
        table.append(row)
    return FiniteGroup(name, table, check=True, seed=seed)


# -- oracle bundle ------------------------------------------------------------


@dataclass(frozen=True)
class OracleReport:
    """Group-theoretic reference data for one group, from direct computation."""
    name: str
    order: int
    class_masks: tuple[int, ...]
    class_sizes: tuple[int, ...]
    center: int
    element_orders: tuple[int, ...]
    is_abelian: bool
    nilpotency_class: int | None
    upper_central_series: tuple[int, ...]
    maximal_subgroups: tuple[int, ...]
    maximal_abelian_subgroups: tuple[int, ...]
    normal_subgroups: tuple[int, ...]
    sylow: dict
    normal_p_complement: dict


def oracle_suite(g: FiniteGroup) -> OracleReport:
    primes = g.prime_factors()
    return OracleReport(
        name=g.name,
        order=g.order,
        class_masks=g.conjugacy_classes,
        class_sizes=tuple(c.bit_count() for c in g.conjugacy_classes),
        center=g.center_mask,
        element_orders=tuple(g.element_order(a) for a in range(g.order)),
        is_abelian=g.is_abelian,
        nilpotency_class=g.nilpotency_class(),
        upper_central_series=g.upper_central_series,
        maximal_subgroups=g.maximal_subgroups,
        maximal_abelian_subgroups=g.maximal_abelian_subgroups,
        normal_subgroups=g.normal_subgroups,
        sylow={p: g.sylow_subgroup(p) for p in primes},
        normal_p_complement={p: g.has_normal_p_complement(p) for p in primes},
    )
