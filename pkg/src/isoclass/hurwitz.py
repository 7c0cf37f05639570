"""Hurwitz moves, orbits of generating vectors, and component counting.

Vectors of one signature are held as rows of an integer array so that a move
is a handful of table lookups applied to every row at once.  Orbits are the
connected components of the graph whose edges join a vector to its images
under the generating moves (plus inner or full automorphisms when asked for).
"""

from __future__ import annotations

import json
import os
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BadMoveForFamily, NotIndexTwo, OrbitBudgetExceeded
from .genvec import (
    DEFAULT_TUPLE_BUDGET,
    ORDERED,
    UNORDERED,
    GeneratingVector,
    SignatureType,
    iter_vectors,
    stabilizer_classes,
)
from .groups import Automorphism, FiniteGroup

DEFAULT_ORBIT_BUDGET = 10_000_000

SPHERE = "sphere"
TORUS1 = "torus1"
TORUS2 = "torus2"
GENUS2 = "genus2"
FAMILIES = (SPHERE, TORUS1, TORUS2, GENUS2)

THEOREM = "theorem"
APPENDIX = "appendix"
POLICIES = (THEOREM, APPENDIX)


def family_of(sig: SignatureType) -> str:
    if sig.g_prime == 0:
        return SPHERE
    if sig.g_prime == 1 and sig.r == 1:
        return TORUS1
    if sig.g_prime == 1 and sig.r == 2 and sig.periods[0] == sig.periods[1]:
        return TORUS2
    if sig.g_prime == 2 and sig.r == 0:
        return GENUS2
    raise BadMoveForFamily(f"no Hurwitz move set for signature {sig}")


def vector_mode(sig: SignatureType) -> str:
    """Sphere vectors are taken unordered, since braids permute the periods."""
    return UNORDERED if sig.g_prime == 0 else ORDERED


@dataclass(frozen=True)
class ActionSpec:
    family: str
    include_inner: bool = False
    include_aut: bool = False

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise BadMoveForFamily(f"unknown family {self.family!r}")

    @classmethod
    def for_signature(cls, sig: SignatureType, include_inner: bool = False, include_aut: bool = False) -> "ActionSpec":
        return cls(family_of(sig), include_inner, include_aut)

    def tag(self) -> str:
        return "moves" + ("+inn" if self.include_inner else "") + ("+aut" if self.include_aut else "")


# -- move arithmetic --------------------------------------------------------

class _Tables:
    """Numpy views of a group's multiplication and inverse tables."""

    def __init__(self, group: FiniteGroup) -> None:
        self.M = np.asarray(group.mul, dtype=np.int64)
        self.I = np.asarray(group.inv, dtype=np.int64)

    def mul(self, *xs: np.ndarray) -> np.ndarray:
        out = xs[0]
        for x in xs[1:]:
            out = self.M[out, x]
        return out


@lru_cache(maxsize=64)
def _tables(group: FiniteGroup) -> _Tables:
    return _Tables(group)


MoveFn = Callable[[_Tables, np.ndarray], np.ndarray]


def _genus2_moves() -> dict[int, MoveFn]:
    def m1(t, v):
        a1, b1, a2, b2 = v.T
        return np.stack([a1, t.mul(b1, a1), a2, b2], axis=1)

    def m1i(t, v):
        a1, b1, a2, b2 = v.T
        return np.stack([a1, t.mul(b1, t.I[a1]), a2, b2], axis=1)

    def m2(t, v):
        a1, b1, a2, b2 = v.T
        return np.stack([t.mul(a1, t.I[b1]), b1, a2, b2], axis=1)

    def m2i(t, v):
        a1, b1, a2, b2 = v.T
        return np.stack([t.mul(a1, b1), b1, a2, b2], axis=1)

    def m3(t, v):
        a1, b1, a2, b2 = v.T
        return np.stack([a1, b1, t.mul(a2, t.I[b2]), b2], axis=1)

    def m3i(t, v):
        a1, b1, a2, b2 = v.T
        return np.stack([a1, b1, t.mul(a2, b2), b2], axis=1)

    def m4(t, v):
        a1, b1, a2, b2 = v.T
        return np.stack([a1, b1, a2, t.mul(b2, a2)], axis=1)

    def m4i(t, v):
        a1, b1, a2, b2 = v.T
        return np.stack([a1, b1, a2, t.mul(b2, t.I[a2])], axis=1)

    def m5(t, v):
        a1, b1, a2, b2 = v.T
        x = t.mul(t.I[b2], a1, b1, t.I[a1])
        return np.stack([t.mul(a1, t.I[x]), t.mul(x, b1, t.I[x]), t.mul(x, a2), b2], axis=1)

    def m5i(t, v):
        a1, b1, a2, b2 = v.T
        # x is unchanged by move 5, so it can be read off the image
        x = t.mul(t.I[b2], a1, b1, t.I[a1])
        return np.stack([t.mul(a1, x), t.mul(t.I[x], b1, x), t.mul(t.I[x], a2), b2], axis=1)

    return {1: m1, -1: m1i, 2: m2, -2: m2i, 3: m3, -3: m3i, 4: m4, -4: m4i, 5: m5, -5: m5i}


def _torus_moves(two_points: bool) -> dict[int, MoveFn]:
    def m1(t, v):
        out = v.copy()
        out[:, 1] = t.mul(v[:, 1], v[:, 0])
        return out

    def m1i(t, v):
        out = v.copy()
        out[:, 1] = t.mul(v[:, 1], t.I[v[:, 0]])
        return out

    def m2(t, v):
        out = v.copy()
        out[:, 0] = t.mul(v[:, 0], t.I[v[:, 1]])
        return out

    def m2i(t, v):
        out = v.copy()
        out[:, 0] = t.mul(v[:, 0], v[:, 1])
        return out

    moves = {1: m1, -1: m1i, 2: m2, -2: m2i}
    if not two_points:
        return moves

    def m3(t, v):
        a, b, c1, c2 = v.T
        x = t.mul(a, t.I[b], t.I[a])
        return np.stack([t.mul(t.I[b], c1, a), b, c1, t.mul(x, c2, t.I[x])], axis=1)

    def m3i(t, v):
        a, b, c1, c2 = v.T
        a0 = t.mul(t.I[c1], b, a)
        x = t.mul(a0, t.I[b], t.I[a0])
        return np.stack([a0, b, c1, t.mul(t.I[x], c2, x)], axis=1)

    def m4(t, v):
        a, b, c1, c2 = v.T
        return np.stack(
            [t.I[a], t.I[b], t.mul(t.I[b], t.I[a], c2, a, b), t.mul(t.I[a], t.I[b], c1, b, a)],
            axis=1,
        )

    # move 4 is an involution
    moves.update({3: m3, -3: m3i, 4: m4, -4: m4})
    return moves


def _sphere_moves(r: int) -> dict[int, MoveFn]:
    moves: dict[int, MoveFn] = {}
    for i in range(r - 1):
        def fwd(t, v, i=i):
            out = v.copy()
            ci, cj = v[:, i], v[:, i + 1]
            out[:, i] = cj
            out[:, i + 1] = t.mul(t.I[cj], ci, cj)
            return out

        def back(t, v, i=i):
            out = v.copy()
            ci, cj = v[:, i], v[:, i + 1]
            out[:, i] = t.mul(ci, cj, t.I[ci])
            out[:, i + 1] = ci
            return out

        moves[i + 1] = fwd
        moves[-(i + 1)] = back
    return moves


def move_table(sig: SignatureType) -> dict[int, MoveFn]:
    """All moves for the family of ``sig``; negative ids are inverses."""
    fam = family_of(sig)
    if fam == GENUS2:
        return _genus2_moves()
    if fam == SPHERE:
        return _sphere_moves(sig.r)
    return _torus_moves(fam == TORUS2)


def move_ids(sig: SignatureType) -> list[int]:
    return sorted(k for k in move_table(sig) if k > 0)


def apply_move(v: GeneratingVector, move_id: int) -> GeneratingVector:
    """Apply one Hurwitz move (negative id for its inverse)."""
    table = move_table(v.sig)
    if move_id not in table:
        raise BadMoveForFamily(f"move {move_id} is not defined for {family_of(v.sig)} vectors of type {v.sig}")
    arr = np.asarray([v.entries], dtype=np.int64)
    out = table[move_id](_tables(v.group), arr)[0]
    return GeneratingVector(v.group, v.sig, tuple(int(x) for x in out))


def apply_automorphism(v: GeneratingVector, aut: Automorphism | Sequence[int]) -> GeneratingVector:
    perm = aut.perm if isinstance(aut, Automorphism) else aut
    return GeneratingVector(v.group, v.sig, tuple(perm[x] for x in v.entries))


def conjugate(v: GeneratingVector, g: int) -> GeneratingVector:
    return GeneratingVector(v.group, v.sig, tuple(v.group.conj(g, x) for x in v.entries))


def _perm_step(perm: Sequence[int]) -> MoveFn:
    p = np.asarray(perm, dtype=np.int64)
    return lambda t, v: p[v]


def action_generators(
    group: FiniteGroup,
    sig: SignatureType,
    spec: ActionSpec,
    auts: Sequence[Sequence[int]] | None = None,
) -> list[MoveFn]:
    """Moves with their inverses, plus automorphism generators per ``spec``.

    ``auts`` overrides the automorphism generators used when
    ``spec.include_aut`` is set (the mixed case restricts automorphisms of a
    larger group).
    """
    gens = list(move_table(sig).values())
    if spec.include_inner:
        gens += [_perm_step(a.perm) for a in group.inner_automorphism_generators]
    if spec.include_aut:
        perms = auts if auts is not None else [a.perm for a in group.automorphism_generators]
        gens += [_perm_step(p) for p in perms]
    return gens


# -- vector sets ------------------------------------------------------------

class VectorSet:
    """All generating vectors of one signature, with fast row lookup."""

    def __init__(self, group: FiniteGroup, sig: SignatureType, rows: np.ndarray) -> None:
        self.group = group
        self.sig = sig
        n = max(group.order, 2)
        if sig.length and n ** sig.length >= 2**62:
            raise OverflowError("vector keys do not fit in 64 bits")
        self._radix = n ** np.arange(sig.length, dtype=np.int64)
        keys = rows @ self._radix if len(rows) else np.zeros(0, dtype=np.int64)
        order = np.lexsort(rows.T[::-1]) if len(rows) else np.zeros(0, dtype=np.int64)
        self.rows = rows[order]
        self.keys = keys[order]
        self._key_order = np.argsort(self.keys, kind="stable")
        self._sorted_keys = self.keys[self._key_order]

    @classmethod
    def enumerate(
        cls,
        group: FiniteGroup,
        sig: SignatureType,
        budget: int | None = DEFAULT_TUPLE_BUDGET,
        predicate: Callable[[tuple[int, ...]], bool] | None = None,
    ) -> "VectorSet":
        tuples = iter_vectors(group, sig, vector_mode(sig), budget)
        if predicate is not None:
            tuples = (t for t in tuples if predicate(t))
        rows = np.asarray(list(tuples), dtype=np.int64).reshape(-1, sig.length)
        return cls(group, sig, rows)

    def __len__(self) -> int:
        return len(self.rows)

    def index_of(self, rows: np.ndarray) -> np.ndarray:
        """Row indices of ``rows``; raises if any row is not in the set."""
        keys = rows @ self._radix
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        if len(keys) and not np.array_equal(self._sorted_keys[pos], keys):
            bad = rows[np.nonzero(self._sorted_keys[pos] != keys)[0][0]]
            raise ValueError(f"{tuple(int(x) for x in bad)} left the vector set of type {self.sig}")
        return self._key_order[pos]

    def tuple_at(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.rows[i])


def _components(n: int, edges_src: list[np.ndarray], edges_dst: list[np.ndarray]) -> tuple[int, np.ndarray]:
    if n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    src = np.concatenate(edges_src) if edges_src else np.zeros(0, dtype=np.int64)
    dst = np.concatenate(edges_dst) if edges_dst else np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n)).tocsr()
    k, labels = connected_components(graph, directed=True, connection="weak")
    return k, labels


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel components by their first (lexicographically least) row."""
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty(len(order), dtype=np.int64)
    remap[order] = np.arange(len(order))
    return remap[labels]


@dataclass
class SideOrbits:
    """Orbit labels on a vector set; rows are sorted, so label order follows
    the lexicographic order of the canonical representatives."""

    vectors: VectorSet
    spec: ActionSpec
    labels: np.ndarray
    count: int
    reps: np.ndarray  # row index of each orbit's least member
    sizes: np.ndarray

    def rep_tuple(self, k: int) -> tuple[int, ...]:
        return self.vectors.tuple_at(int(self.reps[k]))

    def label_of(self, rows: np.ndarray) -> np.ndarray:
        return self.labels[self.vectors.index_of(rows)]


def side_orbits(
    vectors: VectorSet,
    spec: ActionSpec,
    auts: Sequence[Sequence[int]] | None = None,
    orbit_budget: int | None = DEFAULT_ORBIT_BUDGET,
) -> SideOrbits:
    t = _tables(vectors.group)
    n = len(vectors)
    src, dst = [], []
    idx = np.arange(n, dtype=np.int64)
    for step in action_generators(vectors.group, vectors.sig, spec, auts):
        if n == 0:
            break
        src.append(idx)
        dst.append(vectors.index_of(step(t, vectors.rows)))
    k, labels = _components(n, src, dst)
    labels = _canonical_labels(labels) if n else labels
    sizes = np.bincount(labels, minlength=k) if n else np.zeros(0, dtype=np.int64)
    if orbit_budget is not None and len(sizes) and sizes.max() > orbit_budget:
        raise OrbitBudgetExceeded(f"an orbit of size {int(sizes.max())} exceeds the budget {orbit_budget}")
    _, reps = np.unique(labels, return_index=True) if n else (None, np.zeros(0, dtype=np.int64))
    return SideOrbits(vectors, spec, labels, k, reps, sizes)


# -- single orbits and partitions ---------------------------------------------

@dataclass(frozen=True)
class Orbit:
    members: frozenset[tuple[int, ...]]
    representative: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


def orbit(
    group: FiniteGroup,
    v: GeneratingVector | Sequence[int],
    spec: ActionSpec,
    sig: SignatureType | None = None,
    budget: int | None = DEFAULT_ORBIT_BUDGET,
) -> Orbit:
    """Breadth-first closure of one vector under the action in ``spec``."""
    if isinstance(v, GeneratingVector):
        sig, start = v.sig, v.entries
    else:
        if sig is None:
            raise ValueError("a signature is needed for a raw tuple")
        start = tuple(v)
    if family_of(sig) != spec.family:
        raise BadMoveForFamily(f"{spec.family} moves do not apply to type {sig}")
    t = _tables(group)
    steps = action_generators(group, sig, spec)
    seen = {tuple(start)}
    frontier = np.asarray([start], dtype=np.int64).reshape(1, sig.length)
    while len(frontier):
        images = np.concatenate([s(t, frontier) for s in steps]) if steps else frontier[:0]
        fresh = []
        for row in map(tuple, images.tolist()):
            if row not in seen:
                seen.add(row)
                fresh.append(row)
        if budget is not None and len(seen) > budget:
            raise OrbitBudgetExceeded(f"orbit exceeds {budget} vectors")
        frontier = np.asarray(fresh, dtype=np.int64).reshape(-1, sig.length)
    return Orbit(frozenset(seen), min(seen))


@dataclass(frozen=True)
class OrbitPartition:
    group_label: str
    sig: SignatureType
    spec: ActionSpec
    representatives: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def count(self) -> int:
        return len(self.representatives)

    def lines(self) -> list[str]:
        """Cache/report lines: the vector serialization plus a size field."""
        return [
            f"{self.group_label}:{self.sig}:[{','.join(map(str, rep))}] size={size}"
            for rep, size in zip(self.representatives, self.sizes)
        ]


def orbit_representatives(
    group: FiniteGroup,
    sig: SignatureType,
    spec: ActionSpec,
    tuple_budget: int | None = DEFAULT_TUPLE_BUDGET,
    orbit_budget: int | None = DEFAULT_ORBIT_BUDGET,
    cache: "OrbitCache | None" = None,
    policy: str = "",
) -> OrbitPartition:
    """Partition all generating vectors of type ``sig`` into orbits."""
    if family_of(sig) != spec.family:
        raise BadMoveForFamily(f"{spec.family} moves do not apply to type {sig}")
    key_policy = policy or spec.tag()
    if cache is not None:
        hit = cache.get(group, sig, key_policy)
        if hit is not None:
            return hit
    side = side_orbits(VectorSet.enumerate(group, sig, tuple_budget), spec, orbit_budget=orbit_budget)
    part = OrbitPartition(
        group.label,
        sig,
        spec,
        tuple(side.rep_tuple(k) for k in range(side.count)),
        tuple(int(s) for s in side.sizes),
    )
    if cache is not None:
        cache.put(group, part, key_policy)
    return part


# -- orbit cache ------------------------------------------------------------

class OrbitCache:
    """Orbit partitions on disk, keyed by (group label, signature, policy).

    Each file records the content hash of the group's multiplication table;
    a mismatch (same label, different table) makes the entry stale.
    """

    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)

    def _path(self, label: str, sig: SignatureType, policy: str) -> Path:
        stem = re.sub(r"[^A-Za-z0-9_.,+-]+", "_", f"{label}__{sig}__{policy}")
        return self.directory / f"{stem}.orb"

    def get(self, group: FiniteGroup, sig: SignatureType, policy: str) -> OrbitPartition | None:
        path = self._path(group.label, sig, policy)
        try:
            lines = path.read_text(encoding="ascii").splitlines()
        except (FileNotFoundError, UnicodeDecodeError):
            return None
        if not lines or not lines[0].startswith("# "):
            return None
        try:
            header = json.loads(lines[0][2:])
        except json.JSONDecodeError:
            return None
        if header.get("table_hash") != group.table_hash:
            return None
        reps, sizes = [], []
        for line in lines[1:]:
            vec, _, size = line.rpartition(" size=")
            body = vec.rsplit(":[", 1)[1].rstrip("]")
            reps.append(tuple(int(x) for x in body.split(",")) if body else ())
            sizes.append(int(size))
        spec = ActionSpec(header["family"], header["inner"], header["aut"])
        return OrbitPartition(group.label, sig, spec, tuple(reps), tuple(sizes))

    def put(self, group: FiniteGroup, part: OrbitPartition, policy: str) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        header = {
            "table_hash": group.table_hash,
            "family": part.spec.family,
            "inner": part.spec.include_inner,
            "aut": part.spec.include_aut,
        }
        path = self._path(group.label, part.sig, policy)
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text("# " + json.dumps(header) + "\n" + "\n".join(part.lines()) + "\n", encoding="ascii")
        tmp.replace(path)


# -- pair compatibility -------------------------------------------------------

Compatibility = Callable[[FiniteGroup, SignatureType, tuple, SignatureType, tuple], bool]


def disjoint_stabilizers(group: FiniteGroup, sig1: SignatureType, t1: tuple, sig2: SignatureType, t2: tuple) -> bool:
    """Free action on C x F: the stabilizer sets meet only in the identity."""
    s1 = stabilizer_classes(group, sig1, t1)
    s2 = stabilizer_classes(group, sig2, t2)
    return s1 & s2 == {group.class_index[0]}


def count_compatible_pairs(
    group: FiniteGroup,
    sig1: SignatureType,
    sig2: SignatureType,
    budget: int | None = DEFAULT_TUPLE_BUDGET,
) -> int:
    """Ordered pairs of vectors with disjoint stabilizer sets.

    Vectors are bucketed by the class set of Sigma(V); only bucket sizes are
    multiplied, so the pairs themselves are never formed.
    """
    def buckets(sig: SignatureType) -> dict[frozenset[int], int]:
        out: dict[frozenset[int], int] = defaultdict(int)
        for t in iter_vectors(group, sig, vector_mode(sig), budget):
            out[stabilizer_classes(group, sig, t)] += 1
        return out

    b1 = buckets(sig1)
    if not b1:
        return 0
    b2 = buckets(sig2)
    one = frozenset({group.class_index[0]})
    return sum(n1 * n2 for s1, n1 in b1.items() for s2, n2 in b2.items() if s1 & s2 == one)


# -- component counting -------------------------------------------------------

@dataclass
class PairDecision:
    left: tuple[int, ...]
    rights: tuple[tuple[int, ...], ...]
    rule: str

    def describe(self) -> str:
        return f"{self.rule}: left {list(self.left)} with {len(self.rights)} right orbit(s)"


@dataclass
class ComponentCertificate:
    group_label: str
    sig1: str
    sig2: str
    policy: str
    left_classes: int          # H1-orbits on the left vectors
    left_orbits: int           # K1-orbits on the left vectors
    right_orbits: int          # K2-orbits on the right vectors
    candidate_pairs: int       # compatible pairs in R1 x R2
    lower_bound: int           # distinct by Lemma part (ii) alone
    escalations: int
    decisions: list[PairDecision] = field(default_factory=list)
    remark_checks: list[str] = field(default_factory=list)

    def summary(self) -> str:
        return (
            f"{self.group_label} {self.sig1} x {self.sig2} [{self.policy}]: "
            f"{self.left_classes} left classes, {self.right_orbits} right orbits, "
            f"{self.candidate_pairs} candidate pairs, lower bound {self.lower_bound}, "
            f"{self.escalations} escalation(s)"
        )


@dataclass
class ComponentCount:
    n: int
    certificate: ComponentCertificate


class _UnionFind:
    def __init__(self, items: Iterable[int]) -> None:
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return out


def _induced(side: SideOrbits, perm: Sequence[int]) -> np.ndarray:
    """Permutation of orbit ids induced by an automorphism."""
    p = np.asarray(perm, dtype=np.int64)
    reps = side.vectors.rows[side.reps]
    return side.label_of(p[reps]) if side.count else np.zeros(0, dtype=np.int64)


def _orbit_classes(n: int, perms: Sequence[np.ndarray]) -> list[int]:
    uf = _UnionFind(range(n))
    for p in perms:
        for i in range(n):
            uf.union(i, int(p[i]))
    return [uf.find(i) for i in range(n)]


def _stabilizer_action(
    start: int, left_perms: Sequence[np.ndarray], right_perms: Sequence[np.ndarray]
) -> list[np.ndarray]:
    """Schreier generators of the stabilizer of left orbit ``start``,
    returned through their action on right orbit ids."""
    if not left_perms:
        return []
    n_right = len(right_perms[0])
    ident = np.arange(n_right, dtype=np.int64)
    # transversal: left id -> right-side action of a word sending start there
    trans = {start: ident}
    queue = [start]
    for x in queue:
        for lp, rp in zip(left_perms, right_perms):
            y = int(lp[x])
            if y not in trans:
                trans[y] = rp[trans[x]]
                queue.append(y)
    gens = []
    for x, tx in trans.items():
        for lp, rp in zip(left_perms, right_perms):
            y = int(lp[x])
            # t_x * g * t_y^-1 acting on right ids: apply t_x, then g, then t_y^-1
            ty_inv = np.empty(n_right, dtype=np.int64)
            ty_inv[trans[y]] = ident
            s = ty_inv[rp[tx]]
            if not np.array_equal(s, ident):
                gens.append(s)
    return gens


def _side_specs(sig: SignatureType, policy: str) -> tuple[ActionSpec, ActionSpec]:
    """(K, H) on one side: K acts per side, H adds the full automorphisms."""
    if policy not in POLICIES:
        raise ValueError(f"unknown action policy {policy!r}")
    inner = policy == THEOREM
    return ActionSpec.for_signature(sig, inner, False), ActionSpec.for_signature(sig, inner, True)


def component_count_unmixed(
    group: FiniteGroup,
    sig1: SignatureType,
    sig2: SignatureType,
    policy: str = THEOREM,
    compatible: Compatibility = disjoint_stabilizers,
    tuple_budget: int | None = DEFAULT_TUPLE_BUDGET,
    orbit_budget: int | None = DEFAULT_ORBIT_BUDGET,
    vectors: tuple[VectorSet, VectorSet] | None = None,
) -> ComponentCount:
    """Number of orbits of compatible pairs under moves, per-side Inn(G)
    (policy "theorem" only) and diagonal Aut(G), via the two-stage strategy.

    Stage one works with orbit ids: K_i-orbits on each side (moves, plus Inn
    under "theorem") and their classes under Aut(G).  Pairs whose left
    classes differ, or whose right vectors lie in different Aut-classes, are
    distinct outright.  The remaining ties share a left representative and
    are settled by the stabilizer of its K1-orbit inside Aut(G).
    """
    k1_spec, _ = _side_specs(sig1, policy)
    k2_spec, _ = _side_specs(sig2, policy)
    v1, v2 = vectors or (
        VectorSet.enumerate(group, sig1, tuple_budget),
        VectorSet.enumerate(group, sig2, tuple_budget),
    )
    s1 = side_orbits(v1, k1_spec, orbit_budget=orbit_budget)
    s2 = side_orbits(v2, k2_spec, orbit_budget=orbit_budget)
    aut_perms = [a.perm for a in group.automorphism_generators]
    p1 = [_induced(s1, p) for p in aut_perms]
    p2 = [_induced(s2, p) for p in aut_perms]
    cls1 = _orbit_classes(s1.count, p1)
    cls2 = _orbit_classes(s2.count, p2)
    left_reps = sorted(set(cls1))

    cert = ComponentCertificate(
        group.label, str(sig1), str(sig2), policy,
        left_classes=len(left_reps), left_orbits=s1.count, right_orbits=s2.count,
        candidate_pairs=0, lower_bound=0, escalations=0,
    )
    n = 0
    per_left: dict[int, list[list[int]]] = {}
    for r1 in left_reps:
        t1 = s1.rep_tuple(r1)
        cands = [o2 for o2 in range(s2.count) if compatible(group, sig1, t1, sig2, s2.rep_tuple(o2))]
        cert.candidate_pairs += len(cands)
        by_class: dict[int, list[int]] = defaultdict(list)
        for o2 in cands:
            by_class[cls2[o2]].append(o2)
        cert.lower_bound += len(by_class)
        stab = None
        found: list[list[int]] = []
        for members in by_class.values():
            rights = tuple(s2.rep_tuple(o) for o in members)
            if len(members) == 1:
                cert.decisions.append(PairDecision(t1, rights, "lemma-ii"))
                found.append(members)
                continue
            if stab is None:
                stab = _stabilizer_action(r1, p1, p2)
            cert.escalations += 1
            uf = _UnionFind(members)
            for g in stab:
                for o in members:
                    uf.union(o, int(g[o]))
            parts = sorted(uf.classes().values())
            rule = "escalated-merged" if len(parts) == 1 else f"escalated-split-{len(parts)}"
            cert.decisions.append(PairDecision(t1, rights, rule))
            found.extend(parts)
        per_left[r1] = found
        n += len(found)

    if policy == APPENDIX and not group.is_abelian:
        _replay_remark(group, sig2, v2, s2, per_left, cert, orbit_budget)
    return ComponentCount(n, cert)


def _replay_remark(
    group: FiniteGroup,
    sig2: SignatureType,
    v2: VectorSet,
    s2: SideOrbits,
    per_left: dict[int, list[list[int]]],
    cert: ComponentCertificate,
    orbit_budget: int | None,
) -> None:
    """Two components sharing a left vector: re-orbit the right side under
    moves plus Aut(G) and record whether the two right vectors stay apart."""
    wide = side_orbits(v2, ActionSpec.for_signature(sig2, False, True), orbit_budget=orbit_budget)
    for parts in per_left.values():
        if len(parts) != 2:
            continue
        a = s2.rep_tuple(parts[0][0])
        b = s2.rep_tuple(parts[1][0])
        la, lb = wide.label_of(np.asarray([a, b], dtype=np.int64))
        verdict = "separated" if la != lb else "not separated"
        cert.remark_checks.append(f"right vectors {list(a)} and {list(b)}: {verdict} under moves+Aut")


def component_count_direct(
    group: FiniteGroup,
    sig1: SignatureType,
    sig2: SignatureType,
    policy: str = THEOREM,
    compatible: Compatibility = disjoint_stabilizers,
    tuple_budget: int | None = DEFAULT_TUPLE_BUDGET,
    pair_budget: int = 20_000_000,
) -> int:
    """Orbit count on the full set of compatible pairs, with no shortcuts."""
    k1_spec, _ = _side_specs(sig1, policy)
    k2_spec, _ = _side_specs(sig2, policy)
    v1 = VectorSet.enumerate(group, sig1, tuple_budget)
    v2 = VectorSet.enumerate(group, sig2, tuple_budget)
    if len(v1) * len(v2) > pair_budget:
        raise OrbitBudgetExceeded(f"{len(v1)} x {len(v2)} pairs exceed the budget {pair_budget}")
    ok = np.zeros((len(v1), len(v2)), dtype=bool)
    # compatibility only depends on the stabilizer class sets
    keys1 = [stabilizer_classes(group, sig1, v1.tuple_at(i)) for i in range(len(v1))]
    keys2 = [stabilizer_classes(group, sig2, v2.tuple_at(j)) for j in range(len(v2))]
    if compatible is disjoint_stabilizers:
        one = frozenset({group.class_index[0]})
        for i, a in enumerate(keys1):
            for j, b in enumerate(keys2):
                ok[i, j] = a & b == one
    else:
        for i in range(len(v1)):
            t1 = v1.tuple_at(i)
            for j in range(len(v2)):
                ok[i, j] = compatible(group, sig1, t1, sig2, v2.tuple_at(j))
    pair_ids = -np.ones(ok.shape, dtype=np.int64)
    ii, jj = np.nonzero(ok)
    pair_ids[ii, jj] = np.arange(len(ii))
    if not len(ii):
        return 0
    t = _tables(group)
    src, dst = [], []
    all_pairs = np.arange(len(ii))
    for step in action_generators(group, sig1, k1_spec):
        ni = v1.index_of(step(t, v1.rows))
        src.append(all_pairs)
        dst.append(pair_ids[ni[ii], jj])
    for step in action_generators(group, sig2, k2_spec):
        nj = v2.index_of(step(t, v2.rows))
        src.append(all_pairs)
        dst.append(pair_ids[ii, nj[jj]])
    for a in group.automorphism_generators:
        p = np.asarray(a.perm, dtype=np.int64)
        ni = v1.index_of(p[v1.rows])
        nj = v2.index_of(p[v2.rows])
        src.append(all_pairs)
        dst.append(pair_ids[ni[ii], nj[jj]])
    if any((d < 0).any() for d in dst):
        raise RuntimeError("the action does not preserve compatibility")
    k, _ = _components(len(ii), src, dst)
    return k


# -- mixed case -------------------------------------------------------------

@dataclass(frozen=True)
class IndexTwoSubgroup:
    """G0 of index two, realised as its own table with an embedding into G."""

    group: FiniteGroup          # G0 as a standalone group
    embedding: tuple[int, ...]  # G0 index -> G index

    def restrict(self, perm: Sequence[int]) -> tuple[int, ...] | None:
        """Restriction of a G-automorphism to G0, or None if G0 is not preserved."""
        back = {x: i for i, x in enumerate(self.embedding)}
        out = []
        for x in self.embedding:
            y = back.get(perm[x])
            if y is None:
                return None
            out.append(y)
        return tuple(out)


def index_two_subgroup(group: FiniteGroup, g_zero: Iterable[int], label: str = "") -> IndexTwoSubgroup:
    elems = sorted(set(g_zero))
    if 2 * len(elems) != group.order or not group.is_subgroup(elems):
        raise NotIndexTwo(f"subset of size {len(elems)} is not an index-2 subgroup of {group.label}")
    pos = {x: i for i, x in enumerate(elems)}
    mul = [[pos[group.mul[a][b]] for b in elems] for a in elems]
    sub = FiniteGroup(mul, label=label or f"{group.label}_0")
    return IndexTwoSubgroup(sub, tuple(elems))


def component_count_mixed(
    group: FiniteGroup,
    g_zero: Iterable[int],
    sig: SignatureType,
    admissible: Callable[[tuple[int, ...]], bool] | None = None,
    tuple_budget: int | None = DEFAULT_TUPLE_BUDGET,
    orbit_budget: int | None = DEFAULT_ORBIT_BUDGET,
) -> int:
    """Orbits of G0-vectors of type ``sig`` under moves and the restrictions
    of the automorphisms of G that preserve G0.

    ``admissible`` filters vectors (given in G0 indices) before counting.
    """
    sub = index_two_subgroup(group, g_zero)
    auts: list[tuple[int, ...]] = []
    for a in group.automorphisms:
        r = sub.restrict(a.perm)
        if r is not None:
            auts.append(r)
    auts = sorted(set(auts))
    vecs = VectorSet.enumerate(sub.group, sig, tuple_budget, admissible)
    spec = ActionSpec.for_signature(sig, False, True)
    return side_orbits(vecs, spec, auts=auts, orbit_budget=orbit_budget).count
