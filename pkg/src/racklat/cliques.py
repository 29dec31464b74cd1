"""Maximal cliques of an undirected graph given as adjacency bitmasks."""

from __future__ import annotations

from typing import Sequence

from .bitset import bits


def maximal_cliques(adj: Sequence[int]) -> list[int]:
    """Bron-Kerbosch with pivoting; adj[v] must not contain v itself."""
    n = len(adj)
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            out.append(r)
            return
        # pivot on the vertex covering the most of p
        pivot, best = -1, -1
        for v in bits(p | x):
            c = (p & adj[v]).bit_count()
            if c > best:
                pivot, best = v, c
        for v in bits(p & ~adj[pivot]):
            vb = 1 << v
            expand(r | vb, p & adj[v], x & adj[v])
            p &= ~vb
            x |= vb

    expand(0, (1 << n) - 1, 0)
    return out
