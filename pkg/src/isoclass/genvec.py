"""Generating vectors of a signature type, stabilizer sets, fixed-point counts.

A vector is stored as a flat tuple ``(a1, b1, ..., ag, bg, c1, ..., cr)`` of
element indices.  The long relation is ``[a1,b1]...[ag,bg] c1...cr = 1`` with
``[a,b] = a b a^-1 b^-1``.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Iterator, Sequence

from .errors import (
    GroupMismatch,
    IdentityElement,
    LengthMismatch,
    NotCoprime,
    WorkBudgetExceeded,
)
from .groups import FiniteGroup

DEFAULT_TUPLE_BUDGET = 200_000_000

ORDERED = "ordered"
UNORDERED = "unordered"


@dataclass(frozen=True, order=True)
class SignatureType:
    g_prime: int
    periods: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.g_prime < 0:
            raise ValueError("quotient genus must be non-negative")
        if any(m < 2 for m in self.periods):
            raise ValueError(f"periods must be >= 2, got {self.periods}")
        object.__setattr__(self, "periods", tuple(sorted(self.periods)))

    @property
    def r(self) -> int:
        return len(self.periods)

    @property
    def length(self) -> int:
        return 2 * self.g_prime + self.r

    @classmethod
    def parse(cls, text: str) -> "SignatureType":
        """Parse ``(0|2,3,8)``, ``0|2^6``, ``(2|-)`` or ``1|2,2``."""
        s = text.strip().strip("()").replace(" ", "")
        if "|" not in s:
            raise ValueError(f"signature {text!r} lacks '|'")
        head, tail = s.split("|", 1)
        periods: list[int] = []
        if tail not in ("", "-"):
            for tok in tail.split(","):
                m = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
                if not m:
                    raise ValueError(f"bad period token {tok!r} in {text!r}")
                periods.extend([int(m.group(1))] * int(m.group(2) or 1))
        return cls(int(head), tuple(periods))

    def __str__(self) -> str:
        return f"({self.g_prime}|{','.join(map(str, self.periods)) or '-'})"

    def compact(self) -> str:
        """Exponent notation used in tables, e.g. ``2^2,4^2``."""
        if not self.periods:
            return "-"
        parts = []
        for m, k in sorted(Counter(self.periods).items()):
            parts.append(f"{m}^{k}" if k > 1 else str(m))
        return ",".join(parts)

    def hurwitz_rhs(self) -> Fraction:
        """2g'-2 + sum(1 - 1/m_i), the orbifold Euler characteristic up to sign."""
        return 2 * self.g_prime - 2 + sum((1 - Fraction(1, m) for m in self.periods), Fraction(0))


@dataclass(frozen=True)
class GeneratingVector:
    group: FiniteGroup = field(compare=False, repr=False)
    sig: SignatureType
    entries: tuple[int, ...]

    @property
    def hyperbolic(self) -> tuple[int, ...]:
        return self.entries[: 2 * self.sig.g_prime]

    @property
    def elliptic(self) -> tuple[int, ...]:
        return self.entries[2 * self.sig.g_prime:]

    def serialize(self) -> str:
        return f"{self.group.label}:{self.sig}:[{','.join(map(str, self.entries))}]"


def parse_vector_line(line: str) -> tuple[str, SignatureType, tuple[int, ...]]:
    """Inverse of :meth:`GeneratingVector.serialize` (group left as a label)."""
    label, rest = line.rsplit(":[", 1)
    label, sig = label.rsplit(":", 1)
    body = rest.rstrip().rstrip("]")
    entries = tuple(int(t) for t in body.split(",")) if body else ()
    return label, SignatureType.parse(sig), entries


# -- predicates -------------------------------------------------------------

def relation_product(group: FiniteGroup, sig: SignatureType, tup: Sequence[int]) -> int:
    m = group.mul
    acc = 0
    for k in range(sig.g_prime):
        acc = m[acc][group.commutator(tup[2 * k], tup[2 * k + 1])]
    for c in tup[2 * sig.g_prime:]:
        acc = m[acc][c]
    return acc


def is_generating_vector(
    group: FiniteGroup, sig: SignatureType, tup: Sequence[int], mode: str = ORDERED
) -> bool:
    if len(tup) != sig.length:
        raise LengthMismatch(f"expected {sig.length} entries for {sig}, got {len(tup)}")
    cs = tup[2 * sig.g_prime:]
    orders = [group.elem_order[c] for c in cs]
    if mode == ORDERED:
        if tuple(orders) != sig.periods:
            return False
    elif sorted(orders) != list(sig.periods):
        return False
    if relation_product(group, sig, tup) != 0:
        return False
    return group.generates(tup)


# -- enumeration ------------------------------------------------------------

class SubgroupIndex:
    """Memoized subgroup joins, so generation tests cost a few dict lookups."""

    def __init__(self, group: FiniteGroup) -> None:
        self.group = group
        self.ids: dict[frozenset[int], int] = {}
        self.sizes: list[int] = []
        self._join: dict[tuple[int, int], int] = {}
        self._members: list[frozenset[int]] = []
        self.trivial = self.intern(frozenset([0]))

    def intern(self, sub: frozenset[int]) -> int:
        k = self.ids.get(sub)
        if k is None:
            k = len(self.sizes)
            self.ids[sub] = k
            self.sizes.append(len(sub))
            self._members.append(sub)
        return k

    def join(self, k: int, x: int) -> int:
        key = (k, x)
        out = self._join.get(key)
        if out is None:
            sub = self._members[k]
            if x in sub:
                out = k
            else:
                out = self.intern(self.group.subgroup_generated(list(self.group.generators_of(sub)) + [x]))
            self._join[key] = out
        return out

    def join_sub(self, k1: int, k2: int) -> int:
        key = (k1, -1 - k2)
        out = self._join.get(key)
        if out is None:
            out = k1
            for x in self.group.generators_of(self._members[k2]):
                out = self.join(out, x)
            self._join[key] = out
        return out

    def of(self, xs: Sequence[int]) -> int:
        k = self.trivial
        for x in xs:
            k = self.join(k, x)
        return k

    def members(self, k: int) -> frozenset[int]:
        return self._members[k]


_INDEX_CACHE: dict[int, SubgroupIndex] = {}


def subgroup_index(group: FiniteGroup) -> SubgroupIndex:
    idx = _INDEX_CACHE.get(id(group))
    if idx is None or idx.group is not group:
        idx = SubgroupIndex(group)
        _INDEX_CACHE[id(group)] = idx
    return idx


def _commutator_table(group: FiniteGroup) -> dict[int, list[tuple[int, int]]]:
    table: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for a in range(group.order):
        for b in range(group.order):
            table[group.commutator(a, b)].append((a, b))
    return table


def estimate_work(group: FiniteGroup, sig: SignatureType, mode: str = ORDERED) -> int:
    """Number of candidate tuples the backtracking search visits (upper bound)."""
    n = group.order
    free = [sum(1 for x in range(n) if group.elem_order[x] in set(sig.periods)) for _ in sig.periods]
    if mode == ORDERED:
        free = [sum(1 for x in range(n) if group.elem_order[x] == m) for m in sig.periods]
    if sig.r >= 1:
        return n ** (2 * sig.g_prime) * prod(free[:-1])
    return n ** (2 * sig.g_prime)


def iter_vectors(
    group: FiniteGroup,
    sig: SignatureType,
    mode: str = ORDERED,
    budget: int | None = DEFAULT_TUPLE_BUDGET,
    generating: bool = True,
) -> Iterator[tuple[int, ...]]:
    """Yield raw tuples in lexicographic order.

    The last elliptic entry (or, when r = 0, the last hyperbolic pair) is
    forced by the long relation, which cuts one factor of |G| from the search.
    """
    if budget is not None:
        work = estimate_work(group, sig, mode)
        if work > budget:
            raise WorkBudgetExceeded(
                f"{group.label} {sig}: search visits ~{work} tuples, budget {budget}"
            )
    n = group.order
    m, inv, order = group.mul, group.inv, group.elem_order
    g, r = sig.g_prime, sig.r
    periods = sig.periods
    sub = subgroup_index(group)
    full = n

    if r == 0 and g == 0:
        if n == 1:
            yield ()
        return

    if mode == ORDERED:
        by_pos = [[x for x in range(n) if order[x] == p] for p in periods]
    else:
        wanted = set(periods)
        by_pos = [[x for x in range(n) if order[x] in wanted] for _ in periods]
    need = Counter(periods)

    comm_pairs: dict[int, list[tuple[int, int]]] | None = None
    if r == 0:
        comm_pairs = _commutator_table(group)

    def finish(prefix: list[int], acc: int, sk: int) -> Iterator[tuple[int, ...]]:
        # acc is the product of everything chosen so far; sk their subgroup id
        if r == 0:
            target = inv[acc]
            assert comm_pairs is not None
            for a, b in comm_pairs.get(target, ()):
                k2 = sub.join(sub.join(sk, a), b)
                if not generating or sub.sizes[k2] == full:
                    yield (*prefix, a, b)
            return
        yield from elliptic(prefix, acc, sk, 0, need.copy())

    def elliptic(prefix: list[int], acc: int, sk: int, j: int, left: Counter) -> Iterator[tuple[int, ...]]:
        if j == r - 1:
            c = inv[acc]
            o = order[c]
            ok = o == periods[j] if mode == ORDERED else left.get(o, 0) == 1
            if ok:
                k2 = sub.join(sk, c)
                if not generating or sub.sizes[k2] == full:
                    yield (*prefix, c)
            return
        for c in by_pos[j]:
            if mode != ORDERED:
                o = order[c]
                if left.get(o, 0) == 0:
                    continue
                left[o] -= 1
            prefix.append(c)
            yield from elliptic(prefix, m[acc][c], sub.join(sk, c), j + 1, left)
            prefix.pop()
            if mode != ORDERED:
                left[order[c]] += 1

    def hyper(prefix: list[int], acc: int, sk: int, k: int) -> Iterator[tuple[int, ...]]:
        pairs_left = g - k
        if pairs_left == 0 or (r == 0 and pairs_left == 1):
            yield from finish(prefix, acc, sk)
            return
        for a in range(n):
            ka = sub.join(sk, a)
            for b in range(n):
                prefix.extend((a, b))
                yield from hyper(prefix, m[acc][group.commutator(a, b)], sub.join(ka, b), k + 1)
                del prefix[-2:]

    yield from hyper([], 0, sub.trivial, 0)


def enumerate_generating_vectors(
    group: FiniteGroup,
    sig: SignatureType,
    mode: str = ORDERED,
    budget: int | None = DEFAULT_TUPLE_BUDGET,
) -> Iterator[GeneratingVector]:
    for tup in iter_vectors(group, sig, mode, budget):
        yield GeneratingVector(group, sig, tup)


def count_generating_vectors(
    group: FiniteGroup, sig: SignatureType, mode: str = ORDERED, budget: int | None = DEFAULT_TUPLE_BUDGET
) -> int:
    return sum(1 for _ in iter_vectors(group, sig, mode, budget))


def exists_admissible_epimorphism(
    group: FiniteGroup, sig: SignatureType, budget: int | None = DEFAULT_TUPLE_BUDGET
) -> bool:
    for _ in iter_vectors(group, sig, ORDERED, budget):
        return True
    return False


def first_vector(
    group: FiniteGroup, sig: SignatureType, budget: int | None = DEFAULT_TUPLE_BUDGET
) -> tuple[int, ...] | None:
    for tup in iter_vectors(group, sig, ORDERED, budget):
        return tup
    return None


# -- stabilizer sets and fixed points -----------------------------------------

def stabilizer_classes(group: FiniteGroup, sig: SignatureType, tup: Sequence[int]) -> frozenset[int]:
    """Indices of the conjugacy classes making up Sigma(V)."""
    out = set()
    for c in tup[2 * sig.g_prime:]:
        for y in group.powers[c]:
            out.add(group.class_index[y])
    out.add(group.class_index[0])
    return frozenset(out)


def stabilizer_set_raw(group: FiniteGroup, sig: SignatureType, tup: Sequence[int]) -> frozenset[int]:
    cls = group.conjugacy_classes
    return frozenset(x for k in stabilizer_classes(group, sig, tup) for x in cls[k])


def stabilizer_set(v: GeneratingVector) -> frozenset[int]:
    return stabilizer_set_raw(v.group, v.sig, v.entries)


def are_disjoint(v1: GeneratingVector, v2: GeneratingVector) -> bool:
    if v1.group is not v2.group and v1.group.mul != v2.group.mul:
        raise GroupMismatch("vectors live in different groups")
    s1 = stabilizer_classes(v1.group, v1.sig, v1.entries)
    s2 = stabilizer_classes(v2.group, v2.sig, v2.entries)
    return s1 & s2 == {v1.group.class_index[0]}


def _require_nontrivial(c: int) -> None:
    if c == 0:
        raise IdentityElement("fixed points are counted for non-identity elements only")


def fix_count(v: GeneratingVector, c: int) -> int:
    """|Fix(c)| = |N(<c>)| * sum of 1/m_i over branch points whose stabilizer contains a conjugate of <c>."""
    _require_nontrivial(c)
    group = v.group
    m = group.elem_order[c]
    gens_c = {group.class_index[group.power(c, k)] for k in range(1, m) if gcd(k, m) == 1}
    total = Fraction(0)
    for ci in v.elliptic:
        mi = group.elem_order[ci]
        if mi % m:
            continue
        d = group.power(ci, mi // m)
        if group.class_index[d] in gens_c:
            total += Fraction(1, mi)
    n_size = len(group.normalizer(group.cyclic_subgroup(c)))
    val = n_size * total
    assert val.denominator == 1, val
    return int(val)


def fix_count_rotation(v: GeneratingVector, c: int, q: int) -> int:
    """Fixed points of c at which c rotates by the q-th power of the standard generator."""
    _require_nontrivial(c)
    group = v.group
    m = group.elem_order[c]
    if gcd(q, m) != 1:
        raise NotCoprime(f"q = {q} is not coprime to the order {m}")
    total = Fraction(0)
    target = group.class_index[c]
    for ci in v.elliptic:
        mi = group.elem_order[ci]
        if mi % m:
            continue
        if group.class_index[group.power(ci, (q * mi // m) % mi)] == target:
            total += Fraction(1, mi)
    val = len(group.centralizer(c)) * total
    assert val.denominator == 1, val
    return int(val)


@dataclass(frozen=True)
class FixedPoint:
    branch: int
    coset_rep: int
    stabilizer_gen: int
    period: int


@dataclass(frozen=True)
class FixedPointModel:
    group: FiniteGroup = field(repr=False)
    points: tuple[FixedPoint, ...]

    def rotation_exponent(self, k: int, h: int) -> int | None:
        """Exponent e with h = s^e for the stabilizer generator s of point k, else None."""
        pt = self.points[k]
        seq = self.group.powers[pt.stabilizer_gen]
        try:
            return seq.index(h)
        except ValueError:
            return None

    def fixed_by(self, c: int) -> list[tuple[int, int]]:
        """(point index, normalized exponent q) for points fixed by c, q taken mod order(c)."""
        m = self.group.elem_order[c]
        out = []
        for k, pt in enumerate(self.points):
            e = self.rotation_exponent(k, c)
            if e is not None:
                out.append((k, (e // (pt.period // m)) % m))
        return out


def fixed_point_model(v: GeneratingVector) -> FixedPointModel:
    group = v.group
    pts = []
    for i, ci in enumerate(v.elliptic):
        seen: set[int] = set()
        cyc = group.powers[ci]
        for g in range(group.order):
            if g in seen:
                continue
            coset = {group.mul[g][y] for y in cyc}
            seen |= coset
            pts.append(FixedPoint(i, g, group.conj(g, ci), len(cyc)))
    return FixedPointModel(group, tuple(pts))
