"""Finite groups as dense multiplication tables.

Elements are integers ``0..order-1`` and ``0`` is always the identity.  All
structure (inverses, element orders, conjugacy classes, automorphisms) is
derived from the table, so downstream code never sees permutations.
"""

from __future__ import annotations

import hashlib
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import NotASubgroup, OrderCapExceeded

DEFAULT_ORDER_CAP = 256
_ASSOC_EXHAUSTIVE_LIMIT = 256
_ASSOC_SAMPLES = 20000

Perm = tuple[int, ...]


class FiniteGroup:
    """Immutable finite group given by its multiplication table."""

    def __init__(
        self,
        mul: Sequence[Sequence[int]],
        label: str = "",
        paper_id: str | None = None,
        check: bool = True,
    ) -> None:
        n = len(mul)
        if n == 0:
            raise ValueError("a group has at least one element")
        self.order = n
        self.mul: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in mul)
        self.label = label or f"G{n}"
        self.paper_id = paper_id
        if any(len(row) != n for row in self.mul):
            raise ValueError("multiplication table is not square")
        if self.mul[0] != tuple(range(n)) or any(self.mul[x][0] != x for x in range(n)):
            raise ValueError("index 0 is not the identity")
        if check:
            self._check_latin()
        self.inv: tuple[int, ...] = tuple(row.index(0) for row in self.mul)
        self.elem_order: tuple[int, ...] = tuple(self._order_of(x) for x in range(n))
        if check:
            self._check_associative()
            if any(n % k for k in self.elem_order):
                raise ValueError("element order does not divide the group order")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"

    # -- validation ---------------------------------------------------------
    def _check_latin(self) -> None:
        m = np.asarray(self.mul, dtype=np.int32)
        want = np.arange(self.order, dtype=np.int32)
        if not (np.sort(m, axis=1) == want).all():
            raise ValueError("multiplication table rows are not permutations")
        if not (np.sort(m, axis=0) == want[:, None]).all():
            raise ValueError("multiplication table columns are not permutations")

    def _check_associative(self) -> None:
        m = np.asarray(self.mul, dtype=np.int32)
        n = self.order
        if n <= _ASSOC_EXHAUSTIVE_LIMIT:
            # (ab)c against a(bc) for every triple, one row of a at a time
            for a in range(n):
                left = m[m[a]]          # left[b, c] = (ab)c
                right = m[a][m]         # right[b, c] = a(bc)
                if not np.array_equal(left, right):
                    b, c = map(int, np.argwhere(left != right)[0])
                    raise ValueError(f"associativity fails at ({a}, {b}, {c})")
            return
        rng = np.random.default_rng(n)
        a, b, c = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
        bad = np.nonzero(m[m[a, b], c] != m[a, m[b, c]])[0]
        if bad.size:
            i = int(bad[0])
            raise ValueError(f"associativity fails at ({a[i]}, {b[i]}, {c[i]})")

    def _order_of(self, x: int) -> int:
        k, y = 1, x
        row = self.mul
        while y != 0:
            y = row[y][x]
            k += 1
        return k

    # -- arithmetic ---------------------------------------------------------
    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def prod(self, *xs: int) -> int:
        m = self.mul
        acc = 0
        for x in xs:
            acc = m[acc][x]
        return acc

    def power(self, x: int, k: int) -> int:
        k %= self.elem_order[x]
        acc = 0
        row = self.mul
        for _ in range(k):
            acc = row[acc][x]
        return acc

    def conj(self, g: int, x: int) -> int:
        """Return g x g^-1."""
        m = self.mul
        return m[m[g][x]][self.inv[g]]

    def commutator(self, a: int, b: int) -> int:
        """Return [a, b] = a b a^-1 b^-1."""
        m, inv = self.mul, self.inv
        return m[m[m[a][b]][inv[a]]][inv[b]]

    @cached_property
    def powers(self) -> tuple[tuple[int, ...], ...]:
        """powers[x][k] = x^k for 0 <= k < order(x)."""
        out = []
        for x in range(self.order):
            seq = [0]
            y = x
            while y != 0:
                seq.append(y)
                y = self.mul[y][x]
            out.append(tuple(seq))
        return tuple(out)

    def cyclic_subgroup(self, x: int) -> frozenset[int]:
        return frozenset(self.powers[x])

    # -- structure ----------------------------------------------------------
    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        seen = [-1] * self.order
        classes: list[tuple[int, ...]] = []
        for x in range(self.order):
            if seen[x] >= 0:
                continue
            cls = sorted({self.conj(g, x) for g in range(self.order)})
            for y in cls:
                seen[y] = len(classes)
            classes.append(tuple(cls))
        return tuple(classes)

    @cached_property
    def class_index(self) -> tuple[int, ...]:
        idx = [0] * self.order
        for k, cls in enumerate(self.conjugacy_classes):
            for x in cls:
                idx[x] = k
        return tuple(idx)

    def class_size(self, x: int) -> int:
        return len(self.conjugacy_classes[self.class_index[x]])

    def centralizer(self, x: int) -> frozenset[int]:
        m = self.mul
        return frozenset(g for g in range(self.order) if m[g][x] == m[x][g])

    def is_subgroup(self, h: Iterable[int]) -> bool:
        hs = set(h)
        if 0 not in hs:
            return False
        m = self.mul
        return all(m[a][b] in hs for a in hs for b in hs)

    def normalizer(self, h: Iterable[int]) -> frozenset[int]:
        hs = frozenset(h)
        if not self.is_subgroup(hs):
            raise NotASubgroup(f"{sorted(hs)} is not closed under multiplication")
        gens = self.generators_of(hs)
        return frozenset(
            g for g in range(self.order) if all(self.conj(g, s) in hs for s in gens)
        )

    def subgroup_generated(self, s: Iterable[int]) -> frozenset[int]:
        gens = [x for x in set(s) if x != 0]
        seen = {0}
        queue = [0]
        m = self.mul
        for x in queue:
            row = m[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def generates(self, s: Iterable[int]) -> bool:
        return len(self.subgroup_generated(s)) == self.order

    def generators_of(self, h: Iterable[int]) -> list[int]:
        """A small generating set of the subgroup ``h`` (greedy by order)."""
        hs = sorted(set(h), key=lambda x: (-self.elem_order[x], x))
        gens: list[int] = []
        cur: frozenset[int] = frozenset([0])
        for x in hs:
            if x not in cur:
                gens.append(x)
                cur = self.subgroup_generated(gens)
        return gens

    @cached_property
    def center(self) -> frozenset[int]:
        m = self.mul
        return frozenset(
            z for z in range(self.order) if all(m[z][g] == m[g][z] for g in range(self.order))
        )

    @cached_property
    def is_abelian(self) -> bool:
        return len(self.center) == self.order

    @cached_property
    def derived_subgroup(self) -> frozenset[int]:
        comms = {self.commutator(a, b) for a in range(self.order) for b in range(a)}
        return self.subgroup_generated(comms)

    @cached_property
    def abelian_invariants(self) -> tuple[int, ...]:
        """Invariant factors of G/[G,G] in elementary-divisor form (sorted prime powers)."""
        d = self.derived_subgroup
        cosets: dict[int, int] = {}
        reps: list[int] = []
        for x in range(self.order):
            if x in cosets:
                continue
            k = len(reps)
            reps.append(x)
            for y in d:
                cosets[self.mul[x][y]] = k
        q = len(reps)
        qmul = [[cosets[self.mul[a][b]] for b in reps] for a in reps]
        orders = []
        for a in range(q):
            k, y = 1, a
            while y != 0:
                y = qmul[y][a]
                k += 1
            orders.append(k)
        return _abelian_type_from_orders(orders)

    @cached_property
    def order_profile(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(Counter(self.elem_order).items()))

    @cached_property
    def invariant_key(self) -> tuple:
        """Isomorphism invariants used for early rejection."""
        cls = Counter(
            (self.elem_order[c[0]], len(c), self.elem_order[self.mul[c[0]][c[0]]])
            for c in self.conjugacy_classes
        )
        return (
            self.order,
            self.order_profile,
            tuple(sorted(cls.items())),
            len(self.center),
            len(self.derived_subgroup),
            self.abelian_invariants,
        )

    @cached_property
    def table_hash(self) -> str:
        h = hashlib.sha256()
        for row in self.mul:
            h.update(",".join(map(str, row)).encode())
            h.update(b";")
        return h.hexdigest()

    # -- generating tuples, homomorphisms -----------------------------------
    @cached_property
    def minimal_generating_tuple(self) -> tuple[int, ...]:
        """A generating tuple of minimal size for ranks 1 and 2, greedy above."""
        n = self.order
        if n == 1:
            return ()
        for x in range(n):
            if self.elem_order[x] == n:
                return (x,)
        reps = sorted((c[0] for c in self.conjugacy_classes[1:]), key=lambda x: -self.elem_order[x])
        others = sorted(range(1, n), key=lambda x: -self.elem_order[x])
        best: tuple[int, ...] = ()
        best_size = 0
        for x in reps:
            for y in others:
                size = len(self.subgroup_generated((x, y)))
                if size == n:
                    return (x, y)
                if size > best_size:
                    best, best_size = (x, y), size
        gens = list(best)
        cur = self.subgroup_generated(gens)
        while len(cur) < n:
            pick = max(
                (y for y in others if y not in cur),
                key=lambda y: (len(self.subgroup_generated(gens + [y])), -y),
            )
            gens.append(pick)
            cur = self.subgroup_generated(gens)
        return tuple(gens)

    @cached_property
    def automorphisms(self) -> tuple["Automorphism", ...]:
        gens = self.minimal_generating_tuple
        perms = [tuple(p) for p in _search_homs(self, self, gens, bijective=True, first=False)]
        perms.sort()
        return tuple(Automorphism(p, self) for p in perms)

    @cached_property
    def automorphism_generators(self) -> tuple["Automorphism", ...]:
        """A generating set of Aut(G), extracted greedily from the full list."""
        chosen: list[Perm] = []
        closure: set[Perm] = {tuple(range(self.order))}
        for a in self.automorphisms:
            if a.perm in closure:
                continue
            chosen.append(a.perm)
            closure = _perm_closure(chosen, self.order)
        return tuple(Automorphism(p, self) for p in chosen)

    @cached_property
    def inner_automorphism_generators(self) -> tuple["Automorphism", ...]:
        out = []
        for g in self.minimal_generating_tuple:
            out.append(Automorphism(tuple(self.conj(g, x) for x in range(self.order)), self))
        return tuple(out)


@dataclass(frozen=True)
class Automorphism:
    perm: Perm
    group: FiniteGroup

    def __call__(self, x: int) -> int:
        return self.perm[x]

    def compose(self, other: "Automorphism") -> "Automorphism":
        """Return self o other (apply other first)."""
        return Automorphism(tuple(self.perm[other.perm[x]] for x in range(len(self.perm))), self.group)

    def inverse(self) -> "Automorphism":
        out = [0] * len(self.perm)
        for x, y in enumerate(self.perm):
            out[y] = x
        return Automorphism(tuple(out), self.group)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Automorphism) and self.perm == other.perm

    def __hash__(self) -> int:
        return hash(self.perm)


def _abelian_type_from_orders(orders: Sequence[int]) -> tuple[int, ...]:
    """Elementary divisors of a finite abelian group from its element orders."""
    n = len(orders)
    primes = []
    m = n
    p = 2
    while m > 1:
        if m % p == 0:
            primes.append(p)
            while m % p == 0:
                m //= p
        p += 1
    out: list[int] = []
    for p in primes:
        # number of elements of order dividing p^k determines the partition
        counts = []
        k = 1
        while True:
            c = sum(1 for o in orders if (p**k) % o == 0 and _is_p_power(o, p))
            counts.append(c)
            if k > 1 and counts[-1] == counts[-2]:
                break
            k += 1
        # r_k = log_p(counts[k]/counts[k-1]) = number of cyclic factors of order >= p^k
        prev = 1
        ranks = []
        for c in counts:
            r = 0
            q = c // prev
            while q > 1:
                q //= p
                r += 1
            ranks.append(r)
            prev = c
        ranks = [r for r in ranks if r]
        for k in range(len(ranks)):
            nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
            out.extend([p ** (k + 1)] * (ranks[k] - nxt))
    return tuple(sorted(out))


def _is_p_power(o: int, p: int) -> bool:
    while o % p == 0:
        o //= p
    return o == 1


def _perm_closure(gens: Sequence[Perm], n: int) -> set[Perm]:
    ident = tuple(range(n))
    seen = {ident}
    queue = [ident]
    for x in queue:
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _extend_hom(
    g: FiniteGroup, h: FiniteGroup, gens: Sequence[int], images: Sequence[int]
) -> list[int] | None:
    """Extend gens -> images to a homomorphism on <gens>, or None if inconsistent.

    The returned list has -1 outside the generated subgroup.
    """
    phi = [-1] * g.order
    phi[0] = 0
    queue = [0]
    gm, hm = g.mul, h.mul
    pairs = list(zip(gens, images))
    for x in queue:
        px = phi[x]
        grow, hrow = gm[x], hm[px]
        for s, t in pairs:
            y = grow[s]
            v = hrow[t]
            if phi[y] < 0:
                phi[y] = v
                queue.append(y)
            elif phi[y] != v:
                return None
    return phi


def _search_homs(
    g: FiniteGroup,
    h: FiniteGroup,
    gens: Sequence[int],
    bijective: bool,
    first: bool,
) -> list[list[int]]:
    """Backtrack over order- and class-size-compatible images of ``gens``."""
    k = len(gens)
    if k == 0:
        return [[0]] if h.order == 1 or not bijective else []
    cands: list[list[int]] = []
    for s in gens:
        o, cs = g.elem_order[s], g.class_size(s)
        cands.append([y for y in range(h.order) if h.elem_order[y] == o and h.class_size(y) == cs])
    found: list[list[int]] = []

    def rec(i: int, imgs: list[int]) -> bool:
        if i == k:
            phi = _extend_hom(g, h, gens, imgs)
            if phi is None:
                return False
            if bijective and len(set(phi)) != g.order:
                return False
            found.append(phi)
            return first
        for y in cands[i]:
            imgs.append(y)
            ok = i + 1 == k or _extend_hom(g, h, gens[: i + 1], imgs) is not None
            if ok:
                if bijective and i + 1 < k:
                    # images of a prefix must generate a subgroup of the same size
                    sub_g = len(g.subgroup_generated(gens[: i + 1]))
                    sub_h = len(h.subgroup_generated(imgs))
                    ok = sub_g == sub_h
                if ok and rec(i + 1, imgs):
                    return True
            imgs.pop()
        return False

    rec(0, [])
    return found


# -- public operations ------------------------------------------------------

def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation such as ``(0 1 2)(3 4)`` into an image tuple."""
    img = list(range(degree))
    s = text.strip()
    if s in ("", "()"):
        return tuple(img)
    for chunk in s.replace(")", ")\n").split("\n"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ValueError(f"bad cycle {chunk!r}")
        pts = [int(t) for t in chunk[1:-1].replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if not (0 <= a < degree):
                raise ValueError(f"point {a} outside degree {degree}")
            img[a] = b
    if sorted(img) != list(range(degree)):
        raise ValueError(f"{text!r} is not a bijection")
    return tuple(img)


def format_cycles(p: Perm) -> str:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def closure_with_generators(
    degree: int,
    generators: Sequence[Sequence[int]],
    label: str = "",
    paper_id: str | None = None,
    order_cap: int = DEFAULT_ORDER_CAP,
) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Close permutation generators and flatten to a multiplication table.

    Products compose left to right: ``(xy)(i) = y(x(i))``.  Elements are
    numbered in breadth-first order from the identity.  Also returns the
    element index of each generator.
    """
    gens = [tuple(g) for g in generators]
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ValueError(f"{g} is not a permutation of degree {degree}")
    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in index:
                if len(elems) >= order_cap:
                    raise OrderCapExceeded(f"closure exceeds order cap {order_cap}")
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    e = np.asarray(elems, dtype=np.int32).reshape(len(elems), degree)
    keys = {row.tobytes(): k for k, row in enumerate(e)}
    mul = []
    for x in e:
        prods = e[:, x]             # prods[y, i] = y(x(i)), the product x*y
        mul.append([keys[row.tobytes()] for row in prods])
    group = FiniteGroup(mul, label=label, paper_id=paper_id)
    return group, tuple(keys[np.asarray(g, dtype=np.int32).tobytes()] for g in gens)


def group_from_permutations(
    degree: int,
    generators: Sequence[Sequence[int]],
    label: str = "",
    paper_id: str | None = None,
    order_cap: int = DEFAULT_ORDER_CAP,
) -> FiniteGroup:
    """Close permutation generators and flatten to a multiplication table.

    Products compose left to right: ``(xy)(i) = y(x(i))``.
    """
    return closure_with_generators(degree, generators, label, paper_id, order_cap)[0]


def conjugacy_classes(group: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    return group.conjugacy_classes


def centralizer(group: FiniteGroup, x: int) -> frozenset[int]:
    return group.centralizer(x)


def normalizer(group: FiniteGroup, h: Iterable[int]) -> frozenset[int]:
    return group.normalizer(h)


def subgroup_generated(group: FiniteGroup, s: Iterable[int]) -> frozenset[int]:
    return group.subgroup_generated(s)


def automorphism_group(group: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> list[Automorphism]:
    if group.order > order_cap:
        raise OrderCapExceeded(f"|G| = {group.order} exceeds cap {order_cap}")
    return list(group.automorphisms)


def is_isomorphic(g1: FiniteGroup, g2: FiniteGroup) -> list[int] | None:
    """Return an isomorphism g1 -> g2 as an image list, or None."""
    if g1.order != g2.order:
        return None
    if g1.mul == g2.mul:
        return list(range(g1.order))
    if g1.invariant_key != g2.invariant_key:
        return None
    found = _search_homs(g1, g2, g1.minimal_generating_tuple, bijective=True, first=True)
    return found[0] if found else None


def quotient_table(group: FiniteGroup, normal: frozenset[int]) -> list[list[int]]:
    """Multiplication table of G/N with the coset of the identity first."""
    cosets: dict[int, int] = {}
    reps: list[int] = []
    for x in range(group.order):
        if x in cosets:
            continue
        k = len(reps)
        reps.append(x)
        for y in normal:
            cosets[group.mul[x][y]] = k
    return [[cosets[group.mul[a][b]] for b in reps] for a in reps]


def direct_product(g1: FiniteGroup, g2: FiniteGroup, label: str = "") -> FiniteGroup:
    n2 = g2.order
    n = g1.order * n2
    mul = [
        [g1.mul[a // n2][b // n2] * n2 + g2.mul[a % n2][b % n2] for b in range(n)]
        for a in range(n)
    ]
    return FiniteGroup(mul, label=label or f"{g1.label}x{g2.label}")
