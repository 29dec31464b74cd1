"""Named small groups with fixed, documented element orderings.

Orderings are part of the contract: atom labels in reports and golden files
depend on them, so they must never change.

  cyclic Zn        index i is the i-th power of the generator
  products AxB     index is mixed-radix: i_A * |B| + i_B, identity at 0
  dihedral (2m)    0..m-1 are rotations r^i; m+i is the reflection s r^i
  dicyclic (4m)    0..2m-1 are a^i; 2m+i is x a^i, with x^2 = a^m
  modular 16       0..7 are a^i; 8+i is x a^i, with x a x^-1 = a^5
  S3               the explicit six-permutation list below
  A4, S4, A5       closure of standard generators, identity first then
                   image-tuple lexicographic order
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .groups import (FiniteGroup, GroupBuildError, group_from_element_perms,
                     group_from_permutations, group_from_table)


class UnknownGroupError(GroupBuildError):
    pass


def cyclic_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def product_table(t1: list[list[int]], t2: list[list[int]]) -> list[list[int]]:
    n1, n2 = len(t1), len(t2)
    n = n1 * n2
    out = [[0] * n for _ in range(n)]
    for a1 in range(n1):
        for b1 in range(n2):
            row = out[a1 * n2 + b1]
            for a2 in range(n1):
                ra = t1[a1][a2] * n2
                for b2 in range(n2):
                    row[a2 * n2 + b2] = ra + t2[b1][b2]
    return out


def dihedral_table(m: int) -> list[list[int]]:
    n = 2 * m
    t = [[0] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            t[i][j] = (i + j) % m
            t[i][m + j] = m + (j - i) % m
            t[m + i][j] = m + (i + j) % m
            t[m + i][m + j] = (j - i) % m
    return t


def dicyclic_table(m: int) -> list[list[int]]:
    # order 4m: <a, x | a^(2m) = 1, x^2 = a^m, x a x^-1 = a^-1>
    n2 = 2 * m
    n = 4 * m
    t = [[0] * n for _ in range(n)]
    for i in range(n2):
        for j in range(n2):
            t[i][j] = (i + j) % n2
            t[i][n2 + j] = n2 + (j - i) % n2
            t[n2 + i][j] = n2 + (i + j) % n2
            t[n2 + i][n2 + j] = (m + j - i) % n2
    return t


def modular16_table() -> list[list[int]]:
    # order 16: <a, x | a^8 = x^2 = 1, x a x^-1 = a^5>
    t = [[0] * 16 for _ in range(16)]
    for i in range(8):
        for j in range(8):
            t[i][j] = (i + j) % 8
            t[i][8 + j] = 8 + (5 * i + j) % 8
            t[8 + i][j] = 8 + (i + j) % 8
            t[8 + i][8 + j] = (5 * i + j) % 8
    return t


# identity, the three transpositions, the two 3-cycles; this matches the
# letter labels a..f used in reports (classes {a}, {b,c,d}, {e,f})
S3_PERMS = [
    (0, 1, 2),
    (1, 0, 2),
    (2, 1, 0),
    (0, 2, 1),
    (1, 2, 0),
    (2, 0, 1),
]


def _s3() -> FiniteGroup:
    return group_from_element_perms("S3", S3_PERMS)


def _alternating4() -> FiniteGroup:
    return group_from_permutations("A4", 4, [(1, 0, 3, 2), (1, 2, 0, 3)])


def _symmetric4() -> FiniteGroup:
    return group_from_permutations("S4", 4, [(1, 0, 2, 3), (1, 2, 3, 0)])


def _alternating5() -> FiniteGroup:
    return group_from_permutations("A5", 5, [(1, 2, 0, 3, 4), (1, 2, 3, 4, 0)])


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    order: int
    build: Callable[[], FiniteGroup]
    implicit_only: bool = False


def _table_entry(name: str, table_fn: Callable[[], list[list[int]]], order: int,
                 implicit_only: bool = False) -> CatalogEntry:
    return CatalogEntry(name, order, lambda: group_from_table(name, table_fn()),
                        implicit_only)


def _build_catalog() -> tuple[CatalogEntry, ...]:
    entries: list[CatalogEntry] = []
    for n in range(1, 17):
        entries.append(_table_entry(f"Z{n}", lambda n=n: cyclic_table(n), n))
    entries.append(_table_entry(
        "Z2xZ2", lambda: product_table(cyclic_table(2), cyclic_table(2)), 4))
    entries.append(_table_entry(
        "Z2xZ4", lambda: product_table(cyclic_table(2), cyclic_table(4)), 8))
    entries.append(_table_entry(
        "Z2xZ2xZ2",
        lambda: product_table(product_table(cyclic_table(2), cyclic_table(2)),
                              cyclic_table(2)), 8))
    entries.append(_table_entry(
        "Z4xZ4", lambda: product_table(cyclic_table(4), cyclic_table(4)), 16))
    entries.append(CatalogEntry("S3", 6, _s3))
    entries.append(_table_entry("D4", lambda: dihedral_table(4), 8))
    entries.append(_table_entry("Q8", lambda: dicyclic_table(2), 8))
    entries.append(_table_entry("D5", lambda: dihedral_table(5), 10))
    entries.append(_table_entry("D6", lambda: dihedral_table(6), 12))
    entries.append(_table_entry("Dic3", lambda: dicyclic_table(3), 12))
    entries.append(CatalogEntry("A4", 12, _alternating4))
    entries.append(_table_entry("D8", lambda: dihedral_table(8), 16))
    entries.append(_table_entry("Q16", lambda: dicyclic_table(4), 16))
    entries.append(_table_entry("M4_16", modular16_table, 16))
    entries.append(_table_entry(
        "S3xZ2", lambda: product_table(_s3_table(), cyclic_table(2)), 12))
    entries.append(CatalogEntry("S4", 24, _symmetric4))
    entries.append(CatalogEntry("A5", 60, _alternating5, implicit_only=True))
    return tuple(entries)


def _s3_table() -> list[list[int]]:
    return [list(row) for row in _s3().table]


CATALOG: tuple[CatalogEntry, ...] = _build_catalog()

_ALIASES = {
    "d8_16": "D8", "d8(16)": "D8",
    "m4(16)": "M4_16", "m4x16": "M4_16",
}


def catalog_entry(name: str) -> CatalogEntry:
    key = name.strip().lower().replace("×", "x")
    key = _ALIASES.get(key, key)
    for e in CATALOG:
        if e.name.lower() == key:
            return e
    raise UnknownGroupError(f"unknown catalog group: {name!r}")


def catalog_names() -> list[str]:
    return [e.name for e in CATALOG]


def build_group(source, *, max_order: int = 5040) -> FiniteGroup:
    """Build from "catalog:<name>", a Cayley dict, or a permutation dict."""
    if isinstance(source, str):
        if not source.startswith("catalog:"):
            raise UnknownGroupError(
                f"group spec must be catalog:<name> or structured data, got {source!r}")
        return catalog_entry(source[len("catalog:"):]).build()
    if not isinstance(source, dict):
        raise GroupBuildError(f"unsupported group source: {type(source).__name__}")
    if "table" in source:
        name = source.get("name", "anonymous")
        table = source["table"]
        if "order" in source and source["order"] != len(table):
            raise GroupBuildError("declared order does not match table size")
        return group_from_table(name, table)
    if "generators" in source:
        name = source.get("name", "anonymous")
        return group_from_permutations(name, source["degree"], source["generators"],
                                       max_order=max_order)
    raise GroupBuildError("group data needs either a table or generators")
