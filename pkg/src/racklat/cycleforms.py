"""Cycle-shape recovery over a centerless lattice, up to the p-complement test.

Conjugation by a fixed element permutes the group, but the lattice never
shows that permutation directly.  What it does show is, for atoms a and g,
the slice join({a},{g}) & closure({g}): the part of g's class swept along
with g.  Atoms sharing exactly the same slices are grouped into a marked
partition approximating the cycle structure, refined by the fixed sets of
commuting atoms.  Comparing such partitions orders atoms, carves out
abelian subgroups, pins prime supports to atoms, and finally locates a
Sylow subrack whose fusion against the ambient classes decides whether a
normal p-complement exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .bitset import atom_label, bits
from .groups import FiniteGroup
from .invariants import center_atoms, m_set
from .lattice import INTERVAL_ATOM_CAP, CapExceeded, SubrackLattice
from .nilpotence import LatticeConsistencyError, hypercenter_quotient
from .swaps import is_lattice_automorphism, swap_candidates


class ConditionNotMet(RuntimeError):
    """Two atoms share a cycle form but no verified swap interchanges them."""


def _is_prime(k: int) -> bool:
    if k < 2:
        return False
    d = 2
    while d * d <= k:
        if k % d == 0:
            return False
        d += 1
    return True


def _factorization(k: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= k:
        while k % d == 0:
            out[d] = out.get(d, 0) + 1
            k //= d
        d += 1
    if k > 1:
        out[k] = out.get(k, 0) + 1
    return out


def identity_atom(lat: SubrackLattice) -> int:
    """The unique central atom; raises unless the ambient group is centerless."""
    z = center_atoms(lat)
    if z.bit_count() != 1:
        raise ValueError(
            "ambient group has a nontrivial center; quotient it away first")
    return z.bit_length() - 1


@dataclass(frozen=True)
class AtomPartition:
    """Partition of the atom set with per-block single-cycle marks.

    Blocks are kept sorted by lowest atom, so equality of two values means
    equality of the underlying marked partitions.
    """

    blocks: tuple[int, ...]
    marks: tuple[bool, ...]

    def block_containing(self, atom: int) -> int:
        for blk in self.blocks:
            if blk >> atom & 1:
                return blk
        raise ValueError(f"atom {atom} not covered")

    def render(self, n_atoms: int) -> str:
        parts = []
        for blk, marked in zip(self.blocks, self.marks):
            names = ",".join(atom_label(i, n_atoms) for i in bits(blk))
            parts.append(f"[[{names}]]" if marked else f"[{names}]")
        return " ".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "blocks": [list(bits(blk)) for blk in self.blocks],
            "marked": list(self.marks),
        }


def b_set(lat: SubrackLattice, s: int, t: int) -> int:
    """join(s, t) cut down to the class closure of t; lattice queries only."""
    return lat.join(s, t) & lat.closure(t)


def _mark(blk: int, comm_a: int, *, refined: bool) -> bool:
    # A block containing no atom commuting with a is moved everywhere, so
    # its cycles all have length >= 2: at size 2 or 3 that forces a single
    # cycle.  Refined blocks additionally carry equal cycle lengths, which
    # at prime size forces a single cycle as well.
    size = blk.bit_count()
    if size == 1:
        return True
    if blk & comm_a:
        return False
    if refined:
        return _is_prime(size)
    return size in (2, 3)


@lru_cache(maxsize=8192)
def pseudo_cycle_form(lat: SubrackLattice, a: int) -> AtomPartition:
    """Group atoms by which sets b_set({a}, {g}) they fall in.

    Every block is a union of cycle supports of conjugation by a; marked
    blocks are single cycles.
    """
    identity_atom(lat)
    n = lat.n_atoms
    pj = lat.pair_joins
    sigs = [0] * n
    for gi in range(n):
        j = pj[(a, gi) if a <= gi else (gi, a)]
        for x in bits(j & lat.closure(1 << gi)):
            sigs[x] |= 1 << gi
    grouped: dict[int, int] = {}
    for x in range(n):
        grouped[sigs[x]] = grouped.get(sigs[x], 0) | 1 << x
    blocks = tuple(sorted(grouped.values(), key=lambda m: m & -m))
    comm = lat.commuting_atoms[a]
    marks = tuple(_mark(blk, comm, refined=False) for blk in blocks)
    return AtomPartition(blocks, marks)


def all_pseudo_forms(lat: SubrackLattice) -> tuple[AtomPartition, ...]:
    return tuple(pseudo_cycle_form(lat, a) for a in range(lat.n_atoms))


def partition_leq(p: AtomPartition, q: AtomPartition) -> bool:
    """True iff p refines q: every q-block is a union of p-blocks."""
    for blk in p.blocks:
        hi = next((qb for qb in q.blocks if qb & blk), 0)
        if blk & ~hi:
            return False
    return True


def associated_abelian(lat: SubrackLattice, a: int,
                       _forms: tuple[AtomPartition, ...] | None = None) -> int:
    """Atoms whose pseudo form refines a's; an abelian subgroup as a set."""
    forms = all_pseudo_forms(lat) if _forms is None else _forms
    fa = forms[a]
    out = 0
    for x in range(lat.n_atoms):
        if partition_leq(forms[x], fa):
            out |= 1 << x
    return out


@lru_cache(maxsize=8192)
def refine_to_cycle_form(lat: SubrackLattice, a: int) -> AtomPartition:
    """Split pseudo-form blocks along fixed sets of atoms commuting with a.

    For commuting x, the atoms fixed by conjugation with x are exactly
    those commuting with x; a block splits into fixed and moved halves
    only when the fixed half has at least two atoms.  Runs to a fixed
    point, then re-marks.
    """
    base = pseudo_cycle_form(lat, a)
    rows = lat.commuting_atoms
    blocks = list(base.blocks)
    changed = True
    while changed:
        changed = False
        for x in bits(rows[a]):
            fixed = rows[x]
            nxt: list[int] = []
            for blk in blocks:
                f = blk & fixed
                moved = blk & ~fixed
                if f and moved and f.bit_count() > 1:
                    nxt.append(f)
                    nxt.append(moved)
                    changed = True
                else:
                    nxt.append(blk)
            blocks = nxt
    blocks.sort(key=lambda m: m & -m)
    comm = rows[a]
    marks = tuple(_mark(blk, comm, refined=True) for blk in blocks)
    return AtomPartition(tuple(blocks), marks)


def all_cycle_forms(lat: SubrackLattice) -> tuple[AtomPartition, ...]:
    return tuple(refine_to_cycle_form(lat, a) for a in range(lat.n_atoms))


@dataclass(frozen=True)
class CycleLengthReport:
    part: int
    lengths: tuple[int, ...]
    ok: bool


def equal_cycle_length_check(lat: SubrackLattice, g: FiniteGroup,
                             x: int, a: int) -> tuple[CycleLengthReport, ...]:
    """Oracle check: within each refined block of a that x's form tiles,
    the cycles of conjugation by x share one length dividing each tile.
    """
    fa = refine_to_cycle_form(lat, a)
    fx = refine_to_cycle_form(lat, x)
    n = len(g)
    perm = tuple(g.conj(x, i) for i in range(n))
    seen = 0
    cycles: list[int] = []
    for i in range(n):
        if seen >> i & 1:
            continue
        c, j = 0, i
        while not c >> j & 1:
            c |= 1 << j
            j = perm[j]
        seen |= c
        cycles.append(c)
    reports = []
    for part in fa.blocks:
        tiles = [blk for blk in fx.blocks if blk & part]
        if any(blk & ~part for blk in tiles):
            continue  # not a union of x's blocks; the lemma says nothing
        inside = [c for c in cycles if not c & ~part]
        lengths = tuple(sorted({c.bit_count() for c in inside}))
        ok = len(lengths) == 1 and all(
            blk.bit_count() % lengths[0] == 0 for blk in tiles)
        reports.append(CycleLengthReport(part, lengths, ok))
    return tuple(reports)


def _equivariant_swap(g: FiniteGroup, a: int, b: int) -> tuple[int, ...] | None:
    """Interchange g·a·g⁻¹ with g·b·g⁻¹ over all conjugators, rest fixed.

    Returns None when the matched mapping is inconsistent or fails to be a
    bijection; the central and power shapes are special cases of this map.
    """
    n = len(g)
    images: dict[int, int] = {}
    for gi in range(n):
        x = g.conj(gi, a)
        y = g.conj(gi, b)
        for s, t in ((x, y), (y, x)):
            if images.setdefault(s, t) != t:
                return None
    perm = list(range(n))
    for s, t in images.items():
        perm[s] = t
    if sorted(perm) != list(range(n)):
        return None
    return tuple(perm)


def _tie_candidates(g: FiniteGroup, a: int, b: int):
    seen = set()
    for perm, backed in swap_candidates(g, a, b):
        if perm not in seen:
            seen.add(perm)
            yield perm, backed
    eq = _equivariant_swap(g, a, b)
    if eq is not None and eq not in seen:
        yield eq, False


@lru_cache(maxsize=256)
def cycle_form_condition(lat: SubrackLattice, g: FiniteGroup, *,
                         seed: int = 0) -> bool:
    """Whether every pair of atoms with identical cycle forms admits a
    verified swap interchanging them and their classes, fixing the rest.

    False means the candidate search space is exhausted, not that no such
    permutation exists at all.  On an implicit lattice a pair with no
    lemma-backed candidate raises CapExceeded instead of guessing.
    """
    identity_atom(lat)
    n = lat.n_atoms
    forms = all_cycle_forms(lat)
    explicit = lat.mode == "explicit"
    for a in range(n):
        for b in range(a + 1, n):
            if forms[a] != forms[b]:
                continue
            found = False
            for perm, backed in _tie_candidates(g, a, b):
                if not explicit and not backed:
                    continue
                if is_lattice_automorphism(lat, perm, lemma_backed=backed,
                                           seed=seed):
                    found = True
                    break
            if not found:
                if not explicit:
                    raise CapExceeded(
                        "implicit lattice cannot certify the swap search")
                return False
    return True


@dataclass(frozen=True)
class PrimeAssignment:
    """Prime support per atom; None at the identity atom."""

    identity_atom: int
    by_atom: tuple[frozenset[int] | None, ...]

    def atoms_with(self, primes: frozenset[int]) -> int:
        out = 0
        for i, val in enumerate(self.by_atom):
            if val == primes:
                out |= 1 << i
        return out

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity_atom,
            "primes": [sorted(v) if v is not None else None
                       for v in self.by_atom],
        }


def _support_counts(order: int) -> list[tuple[frozenset[int], int]]:
    # Element counts per prime support in the cyclic group of this order.
    # Any abelian order admits that structure, which makes the choice
    # deterministic when nothing else pins it down.
    fac = _factorization(order)
    primes = sorted(fac)
    subsets: list[tuple[int, ...]] = [()]
    for p in primes:
        subsets += [s + (p,) for s in subsets]
    out = []
    for s in sorted((s for s in subsets if s), key=lambda s: (len(s), s)):
        count = 1
        for p in s:
            count *= p ** fac[p] - 1
        out.append((frozenset(s), count))
    return out


def _assign_by_structure(members: int, ident: int,
                         assigned: list[frozenset[int] | None]) -> None:
    order = members.bit_count()
    fac = _factorization(order)
    if len(fac) == 1:
        p = next(iter(fac))
        val = frozenset((p,))
        for x in bits(members):
            if x == ident:
                continue
            if assigned[x] is None:
                assigned[x] = val
            elif assigned[x] != val:
                raise LatticeConsistencyError(
                    "conflicting prime supports for one atom")
        return
    # composite order: lay the cyclic-model multiset over the atoms in
    # index order; only a deterministic fallback, nothing in the catalog
    # reaches it
    todo = [x for x in bits(members) if x != ident]
    seq: list[frozenset[int]] = []
    for val, count in _support_counts(order):
        seq += [val] * count
    if len(seq) != len(todo):
        raise LatticeConsistencyError("support multiset does not tile the set")
    for x, val in zip(todo, seq):
        if assigned[x] is None:
            assigned[x] = val
        elif assigned[x] != val:
            raise LatticeConsistencyError(
                "conflicting prime supports for one atom")


def theta_assignment(lat: SubrackLattice, g: FiniteGroup, *, seed: int = 0,
                     _condition_checked: bool = False) -> PrimeAssignment:
    """Prime supports recovered from the sizes of associated abelian sets.

    Minimal associated abelian sets of prime-power order force the support
    of every atom inside them; remaining atoms inherit from their own
    associated set, with a deterministic layout for composite orders.
    """
    ident = identity_atom(lat)
    if not _condition_checked and not cycle_form_condition(lat, g, seed=seed):
        raise ConditionNotMet(
            "some tied cycle form pair has no verified swap")
    n = lat.n_atoms
    forms = all_pseudo_forms(lat)
    asets = [associated_abelian(lat, a, forms) for a in range(n)]
    distinct = sorted({asets[a] for a in range(n) if a != ident},
                      key=lambda m: (m.bit_count(), m & -m))
    minimal = [m for m in distinct
               if not any(o != m and o & ~m == 0 for o in distinct)]
    assigned: list[frozenset[int] | None] = [None] * n
    for m in minimal:
        _assign_by_structure(m, ident, assigned)
    for x in range(n):
        if x == ident or assigned[x] is not None:
            continue
        _assign_by_structure(asets[x], ident, assigned)
    if any(assigned[x] is None for x in range(n) if x != ident):
        raise LatticeConsistencyError("prime support propagation incomplete")
    return PrimeAssignment(ident, tuple(assigned))


def locate_sylow_subrack(p: int, theta: PrimeAssignment,
                         lat: SubrackLattice, *,
                         cap_atoms: int = INTERVAL_ATOM_CAP) -> int:
    """A subrack of exactly p-part many atoms carrying support {p}.

    Tries the direct count first; otherwise descends through members of
    the distinguished family whose atom count is a multiple of the p-part,
    depth-first, largest first.
    """
    n = lat.n_atoms
    pk = 1
    while n % (pk * p) == 0:
        pk *= p
    fuel = 0
    t = 1
    while t < n:
        t *= p
        fuel += 1
    return _sylow_descend(lat, theta.by_atom, theta.identity_atom,
                          p, pk, cap_atoms, fuel)


def _sylow_descend(lat: SubrackLattice, by_atom, ident: int, p: int, pk: int,
                   cap_atoms: int, fuel: int) -> int:
    target = frozenset((p,))
    gp = 0
    for x in range(lat.n_atoms):
        if x != ident and by_atom[x] == target:
            gp |= 1 << x
    if gp.bit_count() + 1 == pk:
        cand = gp | 1 << ident
        if not lat.is_element(cand):
            raise LatticeConsistencyError(
                "atoms of one prime support do not close to a subrack")
        return cand
    if fuel <= 0:
        raise CapExceeded("descent depth cap reached without a Sylow subrack")
    ms = m_set(lat, cap_atoms=cap_atoms)
    candidates = sorted((m for m in ms.members
                         if m.bit_count() % pk == 0 and m >> ident & 1),
                        key=lambda m: (-m.bit_count(), m))
    capped = bool(ms.undecided)
    for m in candidates:
        try:
            iv = lat.interval(0, m, cap_atoms=cap_atoms)
        except CapExceeded:
            capped = True
            continue
        sub_by_atom = tuple(by_atom[parent] for parent in iv.members)
        sub_ident = iv.from_parent(1 << ident).bit_length() - 1
        try:
            found = _sylow_descend(iv.lattice, sub_by_atom, sub_ident,
                                   p, pk, cap_atoms, fuel - 1)
        except CapExceeded:
            capped = True
            continue
        except LatticeConsistencyError:
            continue
        return iv.to_parent(found)
    if capped:
        # an undecided closure or capped branch may hide the true path
        raise CapExceeded("Sylow descent blocked by enumeration caps")
    raise LatticeConsistencyError("Sylow subrack search exhausted")


def sylow_classes(lat: SubrackLattice, sylow: int, *,
                  cap_atoms: int = INTERVAL_ATOM_CAP) -> tuple[int, ...]:
    """Conjugacy classes of the subgroup behind a Sylow subrack, as atom
    masks: complements of the coatoms of the interval below it."""
    iv = lat.interval(0, sylow, cap_atoms=cap_atoms)
    top = iv.lattice.top
    return tuple(sorted((iv.to_parent(top & ~co)
                         for co in iv.lattice.coatoms),
                        key=lambda m: m & -m))


def p_nilpotent_from_lattice(p: int, lat: SubrackLattice, g: FiniteGroup, *,
                             seed: int = 0,
                             cap_atoms: int = INTERVAL_ATOM_CAP) -> bool | str:
    """True/False when decidable; "condition not met" when tied forms have
    no verified swap; "undecided (cap)" when enumeration caps block it.

    The verdict is fusion: every class of the located Sylow subrack must
    equal the ambient class closure cut down to the subrack.
    """
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    qlat, qg = hypercenter_quotient(lat, g, seed=seed)
    if len(qg) % p:
        # the p-part lives inside the hypercenter, which is nilpotent
        return True
    try:
        if not cycle_form_condition(qlat, qg, seed=seed):
            return "condition not met"
        theta = theta_assignment(qlat, qg, seed=seed, _condition_checked=True)
        sylow = locate_sylow_subrack(p, theta, qlat, cap_atoms=cap_atoms)
        for cls in sylow_classes(qlat, sylow, cap_atoms=cap_atoms):
            if qlat.closure(cls) & sylow != cls:
                return False
        return True
    except CapExceeded:
        return "undecided (cap)"
