"""Element-swapping permutations and their verification as lattice maps.

Two constructions come with a proof of correctness: the central shape
(b = az with z central) and the power shape (<a> = <b>).  A bare
transposition and a small brute-force search serve as fallbacks; those are
only trusted after full verification, so they are rejected outright in
implicit mode.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterator

from .bitset import bits
from .groups import FiniteGroup
from .lattice import ImplicitOnly, SubrackLattice

BRUTE_SUPPORT_CAP = 6
IMPLICIT_SAMPLES = 1000


def apply_perm(perm: tuple[int, ...], mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def central_swap_perm(g: FiniteGroup, a: int, b: int) -> tuple[int, ...] | None:
    """x -> xz on K(a), x -> xz^-1 on K(b), rest fixed; None if inapplicable.

    Requires b = az with z central.  When K(a) = K(b) the two rules must
    agree, which needs z^2 = 1.
    """
    z = g.mul(g.inv(a), b)
    if not g.center_mask >> z & 1:
        return None
    ka, kb = g.class_of(a), g.class_of(b)
    perm = list(range(g.order))
    if ka == kb:
        if g.mul(z, z) != 0:
            return None
        for x in bits(ka):
            perm[x] = g.mul(x, z)
    else:
        zi = g.inv(z)
        for x in bits(ka):
            perm[x] = g.mul(x, z)
        for x in bits(kb):
            perm[x] = g.mul(x, zi)
    return tuple(perm)


def power_swap_perm(g: FiniteGroup, a: int, b: int) -> tuple[int, ...] | None:
    """y -> y^k on K(a), y -> y^(k^-1 mod ord) on K(b); None if inapplicable.

    Requires <a> = <b>, i.e. b = a^k with k invertible mod ord(a).  When
    K(a) = K(b) the exponents must agree, which needs k^2 = 1 mod ord(a).
    """
    if g.subgroup_closure(1 << a) != g.subgroup_closure(1 << b):
        return None
    n = g.element_order(a)
    k = None
    x = a
    for j in range(1, n + 1):
        if x == b:
            k = j
            break
        x = g.mul(x, a)
    if k is None:
        return None
    m = pow(k, -1, n)
    ka, kb = g.class_of(a), g.class_of(b)
    if ka == kb and (k * k) % n != 1:
        return None
    perm = list(range(g.order))
    for y in bits(ka):
        perm[y] = g.power(y, k)
    for y in bits(kb):
        perm[y] = g.power(y, m)
    return tuple(perm)


def transposition_perm(n: int, a: int, b: int) -> tuple[int, ...]:
    perm = list(range(n))
    perm[a], perm[b] = b, a
    return tuple(perm)


def _brute_force_swaps(g: FiniteGroup, a: int, b: int) -> Iterator[tuple[int, ...]]:
    """All permutations supported on K(a) | K(b) that swap a with b and
    interchange the two classes as sets."""
    ka, kb = g.class_of(a), g.class_of(b)
    support = list(bits(ka | kb))
    if len(support) > BRUTE_SUPPORT_CAP:
        return
    pos = {x: i for i, x in enumerate(support)}
    for images in permutations(support):
        if images[pos[a]] != b or images[pos[b]] != a:
            continue
        ok = True
        for x in support:
            y = images[pos[x]]
            if ka >> x & 1:
                if not kb >> y & 1:
                    ok = False
                    break
            elif not ka >> y & 1:
                ok = False
                break
        if not ok:
            continue
        perm = list(range(g.order))
        for x in support:
            perm[x] = images[pos[x]]
        yield tuple(perm)


def swap_candidates(g: FiniteGroup, a: int, b: int
                    ) -> Iterator[tuple[tuple[int, ...], bool]]:
    """Candidate swaps as (permutation, lemma_backed) pairs, best first."""
    if a == b:
        yield tuple(range(g.order)), True
        return
    seen = set()
    for perm in (central_swap_perm(g, a, b), power_swap_perm(g, a, b)):
        if perm is not None and perm not in seen:
            seen.add(perm)
            yield perm, True
    t = transposition_perm(g.order, a, b)
    if t not in seen:
        seen.add(t)
        yield t, False
    for perm in _brute_force_swaps(g, a, b):
        if perm not in seen:
            seen.add(perm)
            yield perm, False


def is_lattice_automorphism(lat: SubrackLattice, perm: tuple[int, ...], *,
                            lemma_backed: bool = False, seed: int = 0,
                            samples: int = IMPLICIT_SAMPLES) -> bool:
    """Explicit mode: image of every element is an element.  Implicit mode:
    lemma-backed shapes only, checked on all pair-generated subracks plus
    sampled random closures."""
    if lat.rack.is_trivial:
        return True
    try:
        elems = lat.elements
    except ImplicitOnly:
        elems = None
    if elems is not None:
        eset = set(elems)
        for s in elems:
            t = apply_perm(perm, s)
            if t != s and t not in eset:
                return False
        return True
    if not lemma_backed:
        return False
    pj = lat.pair_joins
    for (x, y), j in pj.items():
        ix, iy = perm[x], perm[y]
        key = (ix, iy) if ix <= iy else (iy, ix)
        if apply_perm(perm, j) != pj[key]:
            return False
    for e in set(lat.random_elements(samples, seed)):
        if not lat.is_element(apply_perm(perm, e)):
            return False
    return True
