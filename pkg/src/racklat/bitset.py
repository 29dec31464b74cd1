"""Bitmask helpers for sets of atoms indexed 0..n-1.

Member sets are plain Python ints; bit i set means atom i is in the set.
"""

from __future__ import annotations

from typing import Iterable, Iterator

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def canonical_key(mask: int, n: int) -> int:
    # Orders member sets as big-endian bit strings: the empty set first,
    # ties broken so that a set containing a lower atom index sorts later
    # than one that omits it.  Stable across runs by construction.
    r = 0
    for i in bits(mask):
        r |= 1 << (n - 1 - i)
    return r


def atom_label(i: int, n: int) -> str:
    """Human label for an atom: letters a..z when they fit, else the index."""
    if n <= len(_LETTERS):
        return _LETTERS[i]
    return str(i)


def parse_atom(text: str, n: int) -> int:
    """Inverse of atom_label; also accepts a bare integer index."""
    text = text.strip()
    if n <= len(_LETTERS) and len(text) == 1 and text in _LETTERS:
        i = _LETTERS.index(text)
        if i < n:
            return i
    try:
        i = int(text)
    except ValueError:
        raise ValueError(f"not an atom label: {text!r}") from None
    if not 0 <= i < n:
        raise ValueError(f"atom index out of range: {i}")
    return i


def format_set(mask: int, n: int) -> str:
    if mask == 0:
        return "{}"
    return "{" + ",".join(atom_label(i, n) for i in bits(mask)) + "}"
