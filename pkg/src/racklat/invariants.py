"""Invariants readable from a subrack lattice with atoms as opaque labels.

Covers the class size frequency w, the commuting-atoms relation, center and
centralizers, the maximal Boolean-interval sets A, their class cores N, and
the four-condition member sets M together with the non-central abelian
normal subgroup query.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .bitset import bits, canonical_key, format_set
from .cliques import maximal_cliques
from .lattice import INTERVAL_ATOM_CAP, CapExceeded, SubrackLattice


@dataclass(frozen=True)
class ClassSizeFrequency:
    """size -> number of conjugacy classes of that size, ascending."""

    counts: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def __str__(self) -> str:
        return " ".join(f"w({n})={w}" for n, w in self.counts)


def class_size_frequency(lat: SubrackLattice) -> ClassSizeFrequency:
    n = lat.n_atoms
    tally = Counter(n - c.bit_count() for c in lat.coatoms)
    freq = ClassSizeFrequency(tuple(sorted(tally.items())))
    assert sum(size * w for size, w in freq.counts) == n
    return freq


def center_atoms(lat: SubrackLattice) -> int:
    full = lat.top
    out = 0
    for x, row in enumerate(lat.commuting_atoms):
        if row == full:
            out |= 1 << x
    return out


def centralizer_atoms(lat: SubrackLattice, s: int) -> int:
    out = 0
    for x, row in enumerate(lat.commuting_atoms):
        if s & ~row == 0:
            out |= 1 << x
    return out


def lattice_is_abelian(lat: SubrackLattice) -> bool:
    """True iff the lattice is Boolean on its atoms (all atoms commute)."""
    return center_atoms(lat) == lat.top


def maximal_abelian_sets(lat: SubrackLattice) -> list[int]:
    """Maximal elements with a Boolean interval below them.

    Computed as maximal cliques of the commuting relation; each clique is a
    pairwise-fixing set, hence a subrack, and for group-backed lattices a
    maximal abelian subgroup.
    """
    rows = lat.commuting_atoms
    adj = [rows[i] & ~(1 << i) for i in range(lat.n_atoms)]
    cliques = maximal_cliques(adj)
    for c in cliques:
        assert lat.is_element(c), "commuting clique must be a subrack"
    return sorted(cliques, key=lambda m: canonical_key(m, lat.n_atoms))


def atom_class_masks(lat: SubrackLattice) -> list[int]:
    """The conjugacy classes, recovered as closures of single atoms."""
    seen: dict[int, None] = {}
    for x in range(lat.n_atoms):
        seen.setdefault(lat.closure(1 << x))
    return list(seen)


def maximal_normal_abelian_sets(lat: SubrackLattice) -> list[int]:
    """Maximal class cores of the A-sets.

    The core of A is the union of classes inside A; maximal cores are the
    maximal normal abelian subgroups.  Non-maximal cores (e.g. a bare
    identity class) are dropped.
    """
    classes = atom_class_masks(lat)
    cores: set[int] = set()
    for a in maximal_abelian_sets(lat):
        core = 0
        for k in classes:
            if k & ~a == 0:
                core |= k
        cores.add(core)
    keep = [c for c in cores if not any(c != d and c & ~d == 0 for d in cores)]
    return sorted(keep, key=lambda m: canonical_key(m, lat.n_atoms))


@dataclass(frozen=True)
class MSet:
    members: tuple[int, ...]
    undecided: tuple[int, ...]  # closed sets whose interval exceeded the cap


def _closed_proper_unions(lat: SubrackLattice) -> list[int]:
    classes = atom_class_masks(lat)
    out = []
    for pick in range(1, 1 << len(classes)):
        u = 0
        for i in bits(pick):
            u |= classes[i]
        if u != lat.top:
            out.append(u)
    return sorted(out, key=lambda m: canonical_key(m, lat.n_atoms))


def m_set(lat: SubrackLattice, *, cap_atoms: int = INTERVAL_ATOM_CAP) -> MSet:
    """All lattice elements satisfying the four member conditions.

    A member S is not closed (1); every element strictly above S contains
    closure(S) (2); every element above closure(S) is closed (3); and the
    meet-of-coatoms poset of [bottom, closure(S)] is not Boolean (4).

    Conditions 2 and 3 are checked through single-atom extensions: (2) holds
    iff closure(S) <= join(S, {x}) for every atom x outside S, and (3) holds
    iff class(x) <= join(closure(S), {x}) for every atom x.  Condition 2
    forces S to be a coatom of [bottom, closure(S)], so candidates are
    generated per closed set from its interval's coatoms; closed sets whose
    interval exceeds cap_atoms go to the undecided list.
    """
    n = lat.n_atoms
    if lat.is_boolean_interval(lat.top):
        # trivial translations: every subset is closed, condition 1 never holds
        return MSet((), ())
    members: list[int] = []
    undecided: list[int] = []
    class_of = {x: lat.closure(1 << x) for x in range(n)}
    for c in _closed_proper_unions(lat):
        # cond 3 depends only on the closure; check before enumerating
        if any(class_of[x] & ~lat.join(c, 1 << x) for x in range(n)):
            continue
        if lat.is_boolean_interval(c):
            continue  # [bottom, c] is a power set, so condition 4 fails
        try:
            inner = lat.interval(0, c, cap_atoms=cap_atoms)
        except CapExceeded:
            undecided.append(c)
            continue
        sub = inner.lattice
        candidates = [inner.to_parent(s) for s in sub.coatoms]
        candidates = [s for s in candidates if lat.closure(s) == c]
        if not candidates:
            continue
        if sub.int_poset().is_boolean:
            continue
        for s in candidates:
            if all(c & ~lat.join(s, 1 << x) == 0
                   for x in range(n) if not s >> x & 1):
                members.append(s)
    # the full set always has a Boolean meet-of-coatoms poset (one coatom
    # per class), so elements with closure equal to the top are never members
    assert lat.int_poset().is_boolean
    return MSet(tuple(sorted(members, key=lambda m: canonical_key(m, n))),
                tuple(undecided))


def has_noncentral_abelian_normal(lat: SubrackLattice) -> bool:
    z = center_atoms(lat)
    return any(n & ~z for n in maximal_normal_abelian_sets(lat))


@dataclass(frozen=True)
class InvariantReport:
    n_atoms: int
    w: ClassSizeFrequency
    center: int
    abelian: bool
    a_sets: tuple[int, ...]
    n_sets: tuple[int, ...]
    m_members: tuple[int, ...]
    m_undecided: tuple[int, ...]
    noncentral_abelian_normal: bool

    def to_json_dict(self) -> dict:
        out = {
            "w": {str(size): count for size, count in self.w.counts},
            "center": list(bits(self.center)),
            "A": [list(bits(m)) for m in self.a_sets],
            "N": [list(bits(m)) for m in self.n_sets],
            "M": [list(bits(m)) for m in self.m_members],
            "noncentral_abelian_normal": self.noncentral_abelian_normal,
        }
        if self.m_undecided:
            out["M_undecided"] = [list(bits(m)) for m in self.m_undecided]
        return out

    def to_text(self) -> str:
        n = self.n_atoms
        fmt = lambda m: format_set(m, n)
        lines = [f"w: {self.w}"]
        if self.abelian:
            lines.append("abelian group")
        lines.append(f"center: {fmt(self.center)}")
        lines.append("A: " + " ".join(fmt(m) for m in self.a_sets))
        lines.append("N: " + " ".join(fmt(m) for m in self.n_sets))
        lines.append("M: " + (" ".join(fmt(m) for m in self.m_members)
                              if self.m_members else "(empty)"))
        if self.m_undecided:
            lines.append("M undecided closures: "
                         + " ".join(fmt(m) for m in self.m_undecided))
        lines.append("noncentral_abelian_normal: "
                     + ("true" if self.noncentral_abelian_normal else "false"))
        return "\n".join(lines)


def invariant_report(lat: SubrackLattice, *,
                     cap_atoms: int = INTERVAL_ATOM_CAP) -> InvariantReport:
    z = center_atoms(lat)
    n_sets = maximal_normal_abelian_sets(lat)
    ms = m_set(lat, cap_atoms=cap_atoms)
    return InvariantReport(
        n_atoms=lat.n_atoms,
        w=class_size_frequency(lat),
        center=z,
        abelian=lattice_is_abelian(lat),
        a_sets=tuple(maximal_abelian_sets(lat)),
        n_sets=tuple(n_sets),
        m_members=ms.members,
        m_undecided=ms.undecided,
        noncentral_abelian_normal=any(m & ~z for m in n_sets),
    )
