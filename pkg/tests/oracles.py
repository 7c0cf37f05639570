"""Brute-force reference implementations used to cross-check the package.

They share no code with the package beyond the multiplication table, and
trade speed for obviousness.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Sequence


def perm_closure(gens: Sequence[tuple[int, ...]], degree: int) -> set[tuple[int, ...]]:
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def mul(group, *xs: int) -> int:
    acc = 0
    for x in xs:
        acc = group.mul[acc][x]
    return acc


def inverse(group, x: int) -> int:
    return next(y for y in range(group.order) if group.mul[x][y] == 0)


def element_order(group, x: int) -> int:
    k, y = 1, x
    while y != 0:
        y = group.mul[y][x]
        k += 1
    return k


def generated(group, s) -> frozenset[int]:
    out = {0}
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in list(s):
                c = group.mul[a][b]
                if c not in out:
                    out.add(c)
                    changed = True
    return frozenset(out)


def conjugacy_classes(group) -> list[frozenset[int]]:
    classes: list[frozenset[int]] = []
    done: set[int] = set()
    for x in range(group.order):
        if x in done:
            continue
        cls = frozenset(mul(group, inverse(group, g), x, g) for g in range(group.order))
        classes.append(cls)
        done |= cls
    return classes


def is_hom_bijection(group_a, group_b, f: Sequence[int]) -> bool:
    if sorted(f) != list(range(group_b.order)):
        return False
    return all(
        f[group_a.mul[x][y]] == group_b.mul[f[x]][f[y]]
        for x in range(group_a.order)
        for y in range(group_a.order)
    )


def automorphism_count_all_bijections(group) -> int:
    """Test every bijection fixing the identity; only for very small groups."""
    n = group.order
    count = 0
    for rest in permutations(range(1, n)):
        f = (0,) + rest
        if is_hom_bijection(group, group, f):
            count += 1
    return count


def _extend(group_a, gens, images, group_b) -> list[int] | None:
    """The map sending words in ``gens`` to the same words in ``images``."""
    f = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y = group_a.mul[x][g]
                z = group_b.mul[f[x]][h]
                if y in f:
                    if f[y] != z:
                        return None
                else:
                    f[y] = z
                    nxt.append(y)
        frontier = nxt
    if len(f) != group_a.order:
        return None
    out = [f[x] for x in range(group_a.order)]
    return out if is_hom_bijection(group_a, group_b, out) else None


def _small_generating_set(group) -> list[int]:
    gens: list[int] = []
    span = generated(group, gens)
    for x in sorted(range(group.order), key=lambda x: -element_order(group, x)):
        if x not in span:
            gens.append(x)
            span = generated(group, gens)
        if len(span) == group.order:
            break
    return gens


def isomorphisms(group_a, group_b) -> list[list[int]]:
    if group_a.order != group_b.order:
        return []
    gens = _small_generating_set(group_a)
    orders = [element_order(group_a, g) for g in gens]
    pools = [[y for y in range(group_b.order) if element_order(group_b, y) == m] for m in orders]
    out = []
    for images in product(*pools):
        f = _extend(group_a, gens, images, group_b)
        if f is not None:
            out.append(f)
    return out


def generating_vectors(group, g_prime: int, periods: Sequence[int], ordered: bool = True) -> list[tuple[int, ...]]:
    """All tuples (a1, b1, ..., c1, ..., cr) satisfying the defining conditions.

    With ``ordered=False`` the c-entries may have the periods in any order.
    """
    n = group.order
    out = []
    length = 2 * g_prime + len(periods)
    for tup in product(range(n), repeat=length):
        cs = tup[2 * g_prime:]
        orders = [element_order(group, c) for c in cs]
        if ordered and orders != list(periods):
            continue
        if not ordered and sorted(orders) != sorted(periods):
            continue
        acc = 0
        for k in range(g_prime):
            a, b = tup[2 * k], tup[2 * k + 1]
            acc = mul(group, acc, a, b, inverse(group, a), inverse(group, b))
        acc = mul(group, acc, *cs)
        if acc != 0:
            continue
        if len(generated(group, tup)) == n:
            out.append(tup)
    return out


def stabilizer_set(group, g_prime: int, tup: Sequence[int]) -> frozenset[int]:
    out = {0}
    for c in tup[2 * g_prime:]:
        for k in range(element_order(group, c)):
            p = group.power(c, k)
            out |= {mul(group, inverse(group, g), p, g) for g in range(group.order)}
    return frozenset(out)


def fixed_points(group, g_prime: int, tup: Sequence[int], c: int) -> int:
    """|Fix(c)| counted from the coset model: point (i, gH_i) is fixed by c
    iff g^-1 c g lies in H_i = <c_i> (points are left cosets g<c_i>)."""
    total = 0
    for ci in tup[2 * g_prime:]:
        h = {group.power(ci, k) for k in range(element_order(group, ci))}
        cosets = {frozenset(mul(group, g, y) for y in h) for g in range(group.order)}
        for cos in cosets:
            g = min(cos)
            if mul(group, inverse(group, g), c, g) in h:
                total += 1
    return total
