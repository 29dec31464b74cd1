"""Catalog-wide cross-checks: every lattice-derived quantity against the oracle.

Each group gets the same fixed list of named checks (some skipped by order);
the sweep runs groups in parallel but reports them in catalog order.
"""

from __future__ import annotations

import os
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .bitset import atom_label, bits
from .catalog import CATALOG, catalog_entry
from .cycleforms import (all_cycle_forms, all_pseudo_forms, associated_abelian,
                         b_set, equal_cycle_length_check, partition_leq,
                         p_nilpotent_from_lattice, theta_assignment)
from .groups import FiniteGroup, oracle_suite
from .invariants import (atom_class_masks, center_atoms, centralizer_atoms,
                         class_size_frequency, m_set, maximal_abelian_sets,
                         maximal_normal_abelian_sets)
from .lattice import (CapExceeded, EXPLICIT_CAP, INTERVAL_ATOM_CAP,
                      SubrackLattice)
from .nilpotence import nilpotence_class_from_lattice, partition_survey
from .racks import conjugation_quandle

# Abelian lattices are full power sets, so 2^n against the explicit cap is an
# exact predictor.  Nonabelian subrack counts have no closed form; 12 atoms
# (A4 and the order-12 dihedral/dicyclic groups) is where implicit queries
# start beating the enumeration walk, so auto stops attempting it there.
NONABELIAN_EXPLICIT_ATOMS = 12

BRUTE_ORDER = 8          # exhaustive subset filters
SAMPLED_ORDER = 16       # sampled mode-agreement range
SURVEY_ORDER = 12        # exhaustive partition survey range
PROPERTY_ORDER = 24      # cycle-form property sweep range
EXPLICIT_RETRY_ORDER = 24
AGREEMENT_SAMPLES = 10_000


def preferred_mode(g: FiniteGroup, implicit_only: bool = False) -> str:
    """Constructor mode that `--mode auto` resolves to for this group."""
    if implicit_only:
        return "implicit"
    if g.is_abelian:
        return "auto" if (1 << g.order) <= EXPLICIT_CAP else "implicit"
    return "auto" if g.order < NONABELIAN_EXPLICIT_ATOMS else "implicit"


@lru_cache(maxsize=32)
def _explicit_lattice(g: FiniteGroup) -> SubrackLattice:
    return SubrackLattice(conjugation_quandle(g), mode="explicit")


def p_nilpotence_with_fallback(p: int, lat: SubrackLattice, g: FiniteGroup,
                               *, seed: int = 0) -> bool | str:
    """Auto-mode policy around the p-nilpotence pipeline.

    Implicit mode only trusts lemma-backed swaps, so tied forms without an
    algebraic witness cap out; when enumeration is affordable the exhaustive
    explicit route can still settle them.
    """
    res = p_nilpotent_from_lattice(p, lat, g, seed=seed)
    if (res == "undecided (cap)" and lat.mode == "implicit"
            and g.order <= EXPLICIT_RETRY_ORDER):
        try:
            ex = _explicit_lattice(g)
        except CapExceeded:
            return res
        return p_nilpotent_from_lattice(p, ex, g, seed=seed)
    return res


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str            # pass | fail | skipped
    detail: str = ""       # failure description, skip reason, or pass info
    seconds: float = 0.0


@dataclass(frozen=True)
class GroupVerification:
    name: str
    order: int
    mode: str
    checks: tuple[CheckResult, ...]


@dataclass(frozen=True)
class VerificationReport:
    max_order: int
    seed: int
    groups: tuple[GroupVerification, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for gv in self.groups for c in gv.checks)

    def counts(self) -> tuple[int, int, int]:
        tally = Counter(c.status for gv in self.groups for c in gv.checks)
        return tally["pass"], tally["fail"], tally["skipped"]

    def to_text(self, *, show_timing: bool = False) -> str:
        lines = []
        for gv in self.groups:
            lines.append(f"{gv.name} (order {gv.order}, {gv.mode})")
            for c in gv.checks:
                stamp = f" {c.seconds:8.3f}s" if show_timing else ""
                tail = f" ({c.detail})" if c.detail else ""
                lines.append(f"  {c.name:24s} {c.status}{stamp}{tail}")
        p, f, s = self.counts()
        lines.append(f"{len(self.groups)} groups, {p + f + s} checks: "
                     f"{p} pass, {f} fail, {s} skipped")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "max_order": self.max_order,
            "seed": self.seed,
            "passed": self.passed,
            "groups": [
                {
                    "name": gv.name,
                    "order": gv.order,
                    "mode": gv.mode,
                    "checks": [
                        {"name": c.name, "status": c.status,
                         "detail": c.detail, "seconds": round(c.seconds, 6)}
                        for c in gv.checks
                    ],
                }
                for gv in self.groups
            ],
        }


# -- oracle-side helpers -------------------------------------------------------


def _mask_abelian(g: FiniteGroup, mask: int) -> bool:
    return all(mask & ~g.commuting[x] == 0 for x in bits(mask))


def _conj_cycles(g: FiniteGroup, a: int) -> list[int]:
    """Cycle supports of x -> a x a^-1 as masks."""
    n = len(g)
    perm = [g.conj(a, i) for i in range(n)]
    seen, out = 0, []
    for i in range(n):
        if seen >> i & 1:
            continue
        c, j = 0, i
        while not c >> j & 1:
            c |= 1 << j
            j = perm[j]
        seen |= c
        out.append(c)
    return out


# -- individual checks ---------------------------------------------------------
# Each returns "" on pass, otherwise a deterministic failure description.


def _check_class_sizes(g, oracle, lat) -> str:
    if sorted(atom_class_masks(lat)) != sorted(oracle.class_masks):
        return "atom classes differ from oracle conjugacy classes"
    w = class_size_frequency(lat)
    if w.as_dict() != dict(Counter(oracle.class_sizes)):
        return "class size frequencies differ from oracle"
    return ""


def _check_commuting(g, oracle, lat) -> str:
    for x in range(lat.n_atoms):
        if lat.commuting_atoms[x] != g.commuting[x]:
            return f"commuting row differs at atom {x}"
    return ""


def _check_center(g, oracle, lat) -> str:
    if center_atoms(lat) != oracle.center:
        return "lattice center differs from oracle center"
    return ""


def _check_centralizers(g, oracle, lat) -> str:
    for x in range(lat.n_atoms):
        if centralizer_atoms(lat, 1 << x) != g.centralizer(1 << x):
            return f"centralizer differs at atom {x}"
    for cls in oracle.class_masks:
        if centralizer_atoms(lat, cls) != g.centralizer(cls):
            return "centralizer differs on a class mask"
    return ""


def _check_abelian_sets(g, oracle, lat) -> str:
    if sorted(maximal_abelian_sets(lat)) != sorted(oracle.maximal_abelian_subgroups):
        return "maximal abelian sets differ from oracle"
    return ""


def _check_normal_abelian_sets(g, oracle, lat) -> str:
    cands = [m for m in g.normal_subgroups if _mask_abelian(g, m)]
    want = sorted(m for m in cands
                  if not any(o != m and m & ~o == 0 for o in cands))
    if sorted(maximal_normal_abelian_sets(lat)) != want:
        return "maximal normal abelian sets differ from oracle"
    return ""


def _check_m_set(g, oracle, lat) -> str:
    ms = m_set(lat)
    if ms.undecided:
        return "undecided closures under the interval cap"
    normal = set(g.normal_subgroups)
    nonnormal = {m for m in g.all_subgroups if m not in normal}
    stray = set(ms.members) - nonnormal
    if stray:
        return "member is not a non-normal subgroup"
    missing = {m for m in g.maximal_subgroups if m not in normal} - set(ms.members)
    if missing:
        return "non-normal maximal subgroup missing from m_set"
    return ""


def _check_subrack_count(g, oracle, lat) -> str:
    ex = lat if lat.mode == "explicit" else SubrackLattice(
        conjugation_quandle(g), mode="explicit")
    count = len(ex.elements)
    if g.is_abelian and count != 1 << g.order:
        return f"abelian count {count} != 2^{g.order}"
    if g.order <= BRUTE_ORDER:
        rack = ex.rack
        brute = sum(1 for m in range(1 << g.order) if rack.is_subrack(m))
        if count != brute:
            return f"enumerated {count} != brute {brute}"
    return ""


def _check_mode_agreement(g, oracle, lat, seed) -> str:
    rack = conjugation_quandle(g)
    ex = lat if lat.mode == "explicit" else SubrackLattice(rack, mode="explicit")
    im = SubrackLattice(rack, mode="implicit")
    if sorted(ex.coatoms) != sorted(im.coatoms):
        return "coatoms differ between modes"
    n = g.order
    if n <= BRUTE_ORDER:
        masks = range(1 << n)
    else:
        rng = random.Random(seed * 1000003 + n)
        masks = [rng.getrandbits(n) for _ in range(AGREEMENT_SAMPLES)]
    for m in masks:
        if ex.is_element(m) != im.is_element(m):
            return f"membership disagrees on mask {m:#x}"
    return ""


def _check_nilpotence(g, oracle, lat, seed) -> str:
    res = nilpotence_class_from_lattice(lat, g, seed=seed)
    want = oracle.nilpotency_class
    if res.nilpotent != (want is not None):
        return f"nilpotent={res.nilpotent}, oracle says {want is not None}"
    if res.nilpotent and res.nilpotency_class != want:
        return f"class {res.nilpotency_class}, oracle says {want}"
    return ""


def _check_partition_survey(g, oracle, lat, seed) -> str:
    ex = lat if lat.mode == "explicit" else SubrackLattice(
        conjugation_quandle(g), mode="explicit")
    # verdict agreement is asserted inside partition_survey itself
    sv = partition_survey(ex, g, seed=seed)
    if not sv.full_iso and g.order > 1:
        return "no full-condition partition matches the reference"
    return ""


_BOOLEAN_REQUIRED = {"S3", "A4"}  # these instances must produce verdicts


def _check_p_nilpotence(g, oracle, lat, seed) -> str | tuple[str, str]:
    parts = []
    for p in g.prime_factors():
        res = p_nilpotence_with_fallback(p, lat, g, seed=seed)
        if isinstance(res, bool):
            if res != oracle.normal_p_complement[p]:
                return (f"p={p}: got {str(res).lower()}, oracle says "
                        f"{str(oracle.normal_p_complement[p]).lower()}")
            parts.append(f"p={p} {str(res).lower()}")
        elif g.name in _BOOLEAN_REQUIRED:
            return f"p={p}: reported {res!r} where a verdict is required"
        else:
            parts.append(f"p={p} {res}")
    return ("", ", ".join(parts))


# frozen worked-example data for S3 with atoms labeled a..f = 0..5
_S3_CLASSES = (0b000001, 0b001110, 0b110000)
_S3_B_SETS = {
    (1, 1): 0b000010,
    (1, 2): 0b001110, (1, 3): 0b001110,
    (1, 4): 0b110000, (1, 5): 0b110000,
    (4, 1): 0b001110, (5, 1): 0b001110,
    (4, 2): 0b001110, (5, 2): 0b001110,
    (4, 3): 0b001110, (5, 3): 0b001110,
}
_S3_PSEUDO = {
    1: "[[a]] [[b]] [[c,d]] [[e,f]]",
    2: "[[a]] [[b,d]] [[c]] [[e,f]]",
    3: "[[a]] [[b,c]] [[d]] [[e,f]]",
    4: "[[a]] [[b,c,d]] [[e]] [[f]]",
    5: "[[a]] [[b,c,d]] [[e]] [[f]]",
}


def _check_s3_goldens(g, oracle, lat, seed) -> str:
    if tuple(sorted(atom_class_masks(lat))) != _S3_CLASSES:
        return "conjugacy classes differ from the worked example"
    for (s, t), want in _S3_B_SETS.items():
        got = b_set(lat, 1 << s, 1 << t)
        if got != want:
            return (f"B({atom_label(s, 6)},{atom_label(t, 6)}) = {got:#x}, "
                    f"expected {want:#x}")
    forms = all_pseudo_forms(lat)
    for a, want in _S3_PSEUDO.items():
        if forms[a].render(6) != want:
            return f"pseudo form of {atom_label(a, 6)} is {forms[a].render(6)}"
    theta = theta_assignment(lat, g, seed=seed)
    for a in (1, 2, 3):
        if theta.by_atom[a] != frozenset((2,)):
            return f"theta({atom_label(a, 6)}) != {{2}}"
    for a in (4, 5):
        if theta.by_atom[a] != frozenset((3,)):
            return f"theta({atom_label(a, 6)}) != {{3}}"
    return ""


def _check_cycle_form_properties(g, oracle, lat) -> str:
    n = lat.n_atoms
    pseudo = all_pseudo_forms(lat)
    refined = all_cycle_forms(lat)
    cyc = [_conj_cycles(g, a) for a in range(n)]
    for a in range(n):
        for form, kind in ((pseudo[a], "pseudo"), (refined[a], "refined")):
            for blk, marked in zip(form.blocks, form.marks):
                covering = [c for c in cyc[a] if c & blk]
                if any(c & ~blk for c in covering):
                    return f"atom {a}: {kind} block splits a cycle support"
                if marked and len(covering) != 1:
                    return f"atom {a}: marked {kind} block is not one cycle"
        if not partition_leq(refined[a], pseudo[a]):
            return f"atom {a}: cycle form does not refine the pseudo form"
    for u in range(n):
        for v in range(n):
            if (partition_leq(pseudo[v], pseudo[u])
                    and not partition_leq(refined[v], refined[u])):
                return (f"order lemma fails at ({atom_label(v, n)},"
                        f"{atom_label(u, n)})")
    for a in range(n):
        s = associated_abelian(lat, a, pseudo)
        if not g.is_subgroup(s) or not _mask_abelian(g, s):
            return f"A({atom_label(a, n)}) is not an abelian subgroup"
        cent = g.centralizer(1 << a)
        zc = 0
        for x in bits(cent):
            if cent & ~g.commuting[x] == 0:
                zc |= 1 << x
        if s & ~zc:
            return f"A({atom_label(a, n)}) leaves the centralizer center"
        if s.bit_count() % g.element_order(a):
            return f"order of {atom_label(a, n)} does not divide |A|"
        for x in bits(s):
            for rep in equal_cycle_length_check(lat, g, x, a):
                if not rep.ok:
                    return (f"equal-length lemma fails at x={atom_label(x, n)} "
                            f"a={atom_label(a, n)}")
    return ""


def _check_explicit_performance(g) -> str:
    t0 = time.perf_counter()
    lat = SubrackLattice(conjugation_quandle(g), mode="explicit")
    n_elems, n_edges = len(lat.elements), len(lat.hasse)
    dt = time.perf_counter() - t0
    if n_elems != 52:
        return f"A4 lattice has {n_elems} elements, expected 52"
    if not n_edges:
        return "empty Hasse diagram"
    if dt >= 10:
        return f"enumeration took {dt:.1f}s, bound is 10s"
    return ""


def _check_implicit_performance(g) -> str:
    t0 = time.perf_counter()
    lat = SubrackLattice(conjugation_quandle(g), mode="implicit")
    class_size_frequency(lat)
    center_atoms(lat)
    ms = m_set(lat)
    dt = time.perf_counter() - t0
    if ms.undecided:
        return "undecided closures under the interval cap"
    if dt >= 60:
        return f"invariants took {dt:.1f}s, bound is 60s"
    return ""


# -- per-group driver ----------------------------------------------------------


def run_group_checks(name: str, seed: int = 0) -> GroupVerification:
    entry = catalog_entry(name)
    try:
        g = entry.build()
        oracle = oracle_suite(g)
        lat = SubrackLattice(conjugation_quandle(g),
                             mode=preferred_mode(g, entry.implicit_only))
    except Exception as e:  # a broken build must report, not kill the sweep
        return GroupVerification(name, entry.order, "?", (
            CheckResult("setup", "fail", f"{type(e).__name__}: {e}"),))

    checks: list[CheckResult] = []

    def run(check_name, fn, *, skip=None):
        if skip is not None:
            checks.append(CheckResult(check_name, "skipped", skip))
            return
        t0 = time.perf_counter()
        try:
            out = fn()
        except Exception as e:  # deliberate: a crash is a failed check
            out = f"{type(e).__name__}: {e}"
        detail = out if isinstance(out, str) else out[0]
        info = "" if isinstance(out, str) else out[1]
        dt = time.perf_counter() - t0
        if detail:
            checks.append(CheckResult(check_name, "fail", detail, dt))
        else:
            checks.append(CheckResult(check_name, "pass", info, dt))

    order = g.order
    run("class-sizes", lambda: _check_class_sizes(g, oracle, lat))
    run("commuting-atoms", lambda: _check_commuting(g, oracle, lat))
    run("center", lambda: _check_center(g, oracle, lat))
    run("centralizers", lambda: _check_centralizers(g, oracle, lat))
    run("abelian-sets", lambda: _check_abelian_sets(g, oracle, lat))
    run("normal-abelian-sets", lambda: _check_normal_abelian_sets(g, oracle, lat))
    run("m-set", lambda: _check_m_set(g, oracle, lat),
        skip=None if order <= INTERVAL_ATOM_CAP else "order above interval cap")
    run("subrack-count", lambda: _check_subrack_count(g, oracle, lat),
        skip=None if order <= BRUTE_ORDER or (g.is_abelian and order <= SAMPLED_ORDER)
        else "order above brute range")
    run("mode-agreement", lambda: _check_mode_agreement(g, oracle, lat, seed),
        skip=None if order <= SAMPLED_ORDER else "order above sampling range")
    run("nilpotence-class", lambda: _check_nilpotence(g, oracle, lat, seed))
    run("partition-survey", lambda: _check_partition_survey(g, oracle, lat, seed),
        skip=None if order <= SURVEY_ORDER else "order above exhaustive range")
    run("p-nilpotence", lambda: _check_p_nilpotence(g, oracle, lat, seed))
    if name == "S3":
        run("s3-goldens", lambda: _check_s3_goldens(g, oracle, lat, seed))
    if center_atoms(lat).bit_count() == 1:
        run("cycle-form-properties",
            lambda: _check_cycle_form_properties(g, oracle, lat),
            skip=None if order <= PROPERTY_ORDER
            else "order above property-sweep range")
    if name == "A4":
        run("explicit-performance", lambda: _check_explicit_performance(g))
    if name == "S4":
        run("implicit-performance", lambda: _check_implicit_performance(g))

    return GroupVerification(g.name, order, lat.mode, tuple(checks))


def verify_catalog(max_order: int = 60, *, seed: int = 0,
                   parallel: bool = True) -> VerificationReport:
    """Run every applicable check on every catalog group of order <= max_order.

    Groups run in parallel worker processes; the report lists them in catalog
    order regardless of completion order.
    """
    names = [e.name for e in CATALOG if e.order <= max_order]
    results: dict[str, GroupVerification] = {}
    if parallel and len(names) > 1:
        try:
            workers = min(len(names), os.cpu_count() or 1)
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {n: pool.submit(run_group_checks, n, seed)
                           for n in names}
                results = {n: f.result() for n, f in futures.items()}
        except (OSError, RuntimeError):
            results = {}
    if not results:
        results = {n: run_group_checks(n, seed) for n in names}
    return VerificationReport(max_order, seed,
                              tuple(results[n] for n in names))
