"""Named group constructors and the bundled small-groups catalog.

Named groups are built from explicit permutation generators or explicit
multiplication laws and then checked against their defining relations.  The
catalog is a line-oriented data file with one isomorphism class per line::

    order;label;paper_id;degree;gen1;gen2;...

Generators are permutations in 0-based cycle notation.  ``#`` starts a comment.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import (
    BadParameters,
    OrderMismatch,
    OrderNotCovered,
    ParseError,
    RelationCheckFailed,
)
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    Perm,
    _perm_closure,
    closure_with_generators,
    format_cycles,
    is_isomorphic,
    parse_cycles,
)

DEFAULT_CATALOG = "groups.cat"
DISTINCTNESS_CHECK_LIMIT = 32


@dataclass(frozen=True)
class Presented:
    """A group together with a named generating tuple."""

    group: FiniteGroup
    gens: tuple[int, ...]

    def word(self, exponents: Sequence[int]) -> int:
        """Evaluate ``g1^e1 g2^e2 ... gk^ek``."""
        if len(exponents) != len(self.gens):
            raise BadParameters(
                f"word {tuple(exponents)} has {len(exponents)} exponents, "
                f"expected {len(self.gens)}"
            )
        g = self.group
        out = 0
        for x, e in zip(self.gens, exponents):
            out = g.mul[out][g.power(x, e)]
        return out


# -- realisation helpers ----------------------------------------------------

def _from_perms(degree: int, gens: Sequence[Perm], label: str) -> Presented:
    group, idx = closure_with_generators(degree, gens, label=label)
    return Presented(group, idx)


def _from_law(
    elements: Sequence,
    law: Callable,
    gens: Sequence,
    label: str,
) -> Presented:
    """Realise a group given by an explicit law on ``elements``.

    ``elements[0]`` must be the identity.  Each generator is turned into its
    right-regular permutation ``h -> h*g``, which composes left to right.
    """
    pos = {e: i for i, e in enumerate(elements)}
    perms = [tuple(pos[law(h, g)] for h in elements) for g in gens]
    return _from_perms(len(elements), perms, label)


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise RelationCheckFailed(what)


def _cycle_perm(n: int, offset: int = 0, degree: int | None = None) -> Perm:
    degree = degree if degree is not None else n + offset
    img = list(range(degree))
    for i in range(n):
        img[offset + i] = offset + (i + 1) % n
    return tuple(img)


# -- named constructors -----------------------------------------------------

def cyclic(n: int) -> Presented:
    if n < 1:
        raise BadParameters(f"cyclic group needs n >= 1, got {n}")
    p = _from_perms(n, [_cycle_perm(n)], f"Z{n}")
    _require(p.group.order == n, f"Z{n} has order {p.group.order}")
    _require(n == 1 or p.group.elem_order[p.gens[0]] == n, f"Z{n} generator order")
    return p


def abelian(*ns: int) -> Presented:
    """Direct product of cyclic groups, one generator per factor."""
    if not ns or any(n < 1 for n in ns):
        raise BadParameters(f"abelian product needs positive factors, got {ns}")
    degree = sum(ns)
    gens, off = [], 0
    for n in ns:
        gens.append(_cycle_perm(n, off, degree))
        off += n
    label = "x".join(f"Z{n}" for n in ns)
    p = _from_perms(degree, gens, label)
    _require(p.group.order == math.prod(ns), f"{label} has order {p.group.order}")
    _require(p.group.is_abelian, f"{label} is not abelian")
    return p


def dihedral(n: int) -> Presented:
    """Dihedral group of order 2n with rotation ``r`` and reflection ``s``."""
    if n < 1:
        raise BadParameters(f"dihedral group needs n >= 1, got {n}")
    p = _from_law(
        [(k, e) for e in (0, 1) for k in range(n)],
        lambda a, b: ((a[0] + (b[0] if a[1] == 0 else -b[0])) % n, (a[1] + b[1]) % 2),
        [(1 % n, 0), (0, 1)],
        f"D{n}",
    )
    g, (r, s) = p.group, p.gens
    _require(g.order == 2 * n, f"D{n} has order {g.order}")
    _require(g.power(r, n) == 0 and g.power(s, 2) == 0, f"D{n} generator orders")
    _require(g.prod(s, r, s) == g.inv[r], f"D{n}: srs != r^-1")
    return p


def quaternion() -> Presented:
    """Q8 with generators i and j."""
    # elements are (sign, unit) with unit in 1, i, j, k
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def law(a, b):
        s, u = table[a[1], b[1]]
        return (a[0] * b[0] * s, u)

    elements = [(s, u) for s in (1, -1) for u in range(4)]
    p = _from_law(elements, law, [(1, 1), (1, 2)], "Q8")
    g, (i, j) = p.group, p.gens
    _require(g.order == 8, "Q8 order")
    _require(g.power(i, 2) == g.power(j, 2) and g.power(i, 4) == 0, "Q8: i^2 = j^2, i^4 = 1")
    _require(g.prod(j, i, g.inv[j]) == g.inv[i], "Q8: j i j^-1 = i^-1")
    _require(sum(1 for o in g.elem_order if o == 2) == 1, "Q8 has one involution")
    return p


def metacyclic(p_: int, q: int, r: int) -> Presented:
    """The group ``<x, y | x^p = y^q = 1, x y x^-1 = y^r>`` of order pq.

    Elements are ``y^j x^k``; moving ``x`` past ``y`` uses ``x y = y^r x``.
    """
    if p_ < 1 or q < 1:
        raise BadParameters(f"D({p_},{q},{r}) needs positive p and q")
    if math.gcd(r, q) != 1:
        raise BadParameters(f"D({p_},{q},{r}): gcd(r, q) must be 1")
    if pow(r % q, p_, q) != 1 % q:
        raise BadParameters(f"D({p_},{q},{r}): r^p must be 1 mod q")

    def law(a, b):
        j1, k1 = a
        j2, k2 = b
        return ((j1 + j2 * pow(r % q, k1, q)) % q, (k1 + k2) % p_)

    elements = [(j, k) for k in range(p_) for j in range(q)]
    pres = _from_law(elements, law, [(0, 1 % p_), (1 % q, 0)], f"D({p_},{q},{r})")
    g, (x, y) = pres.group, pres.gens
    _require(g.order == p_ * q, f"D({p_},{q},{r}) has order {g.order}")
    _require(g.power(x, p_) == 0 and g.power(y, q) == 0, f"D({p_},{q},{r}): x^p = y^q = 1")
    _require(g.conj(x, y) == g.power(y, r % q), f"D({p_},{q},{r}): x y x^-1 = y^r")
    return pres


def symmetric(n: int) -> Presented:
    if not 1 <= n <= 5:
        raise BadParameters(f"symmetric group supported for 1 <= n <= 5, got {n}")
    gens = [] if n == 1 else [_cycle_perm(n), _cycle_perm(2, 0, n)]
    p = _from_perms(n, gens, f"S{n}")
    _require(p.group.order == math.factorial(n), f"S{n} order")
    return p


def alternating(n: int) -> Presented:
    if not 1 <= n <= 5:
        raise BadParameters(f"alternating group supported for 1 <= n <= 5, got {n}")
    gens = []
    for i in range(n - 2):
        img = list(range(n))
        img[0], img[i + 1], img[i + 2] = i + 1, i + 2, 0
        gens.append(tuple(img))
    p = _from_perms(n, gens, f"A{n}")
    _require(p.group.order == max(1, math.factorial(n) // 2), f"A{n} order")
    return p


def _matrix_group(mats: Sequence[tuple[int, int, int, int]], label: str) -> Presented:
    """Group of 2x2 matrices over F3 acting on the eight nonzero vectors."""
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    pos = {v: i for i, v in enumerate(vecs)}
    perms = []
    for a, b, c, d in mats:
        # row vector times matrix, so products act left to right
        perms.append(tuple(pos[((v[0] * a + v[1] * c) % 3, (v[0] * b + v[1] * d) % 3)] for v in vecs))
    return _from_perms(8, perms, label)


def special_linear_2_3() -> Presented:
    p = _matrix_group([(1, 1, 0, 1), (0, 1, 2, 0)], "SL(2,3)")
    g = p.group
    _require(g.order == 24, "SL(2,3) order")
    _require(sum(1 for o in g.elem_order if o == 2) == 1, "SL(2,3) has one involution")
    return p


def general_linear_2_3() -> Presented:
    p = _matrix_group([(1, 1, 0, 1), (0, 1, 2, 0), (2, 0, 0, 1)], "GL(2,3)")
    _require(p.group.order == 48, "GL(2,3) order")
    _require(len(p.group.center) == 2, "GL(2,3) center")
    return p


def direct(*factors: Presented, label: str = "") -> Presented:
    """Direct product with the generators of every factor."""
    if not factors:
        raise BadParameters("direct product needs at least one factor")
    sizes = [f.group.order for f in factors]
    elements = list(product(*[range(s) for s in sizes]))
    gens = []
    for i, f in enumerate(factors):
        for x in f.gens:
            gens.append(tuple(x if j == i else 0 for j in range(len(factors))))

    def law(a, b):
        return tuple(f.group.mul[u][v] for f, u, v in zip(factors, a, b))

    label = label or "x".join(_wrap(f.group.label) for f in factors)
    p = _from_law(elements, law, gens, label)
    _require(p.group.order == math.prod(sizes), f"{label} order")
    return p


def semidirect(
    actor: Presented,
    kernel: Presented,
    action: Sequence[Sequence[Sequence[int]]],
    label: str = "",
) -> Presented:
    """Semidirect product ``kernel : actor``.

    ``action[i][j]`` is the image of kernel generator ``j`` under actor
    generator ``i``, written as an exponent vector over the kernel
    generators.  The action must extend to a homomorphism from the actor to
    Aut(kernel); that is checked on the whole actor.  Generators of the result
    are the kernel generators followed by the actor generators.
    """
    k, a = kernel.group, actor.group
    if len(action) != len(actor.gens) or any(len(row) != len(kernel.gens) for row in action):
        raise BadParameters("action needs one image per (actor generator, kernel generator)")
    phis = []
    for row in action:
        images = tuple(kernel.word(w) for w in row)
        phi = _extend_to_map(k, kernel.gens, images)
        if phi is None or sorted(phi) != list(range(k.order)):
            raise BadParameters(f"images {images} do not define an automorphism")
        phis.append(phi)
    hom = _action_homomorphism(a, actor.gens, phis)
    if hom is None:
        raise BadParameters("action does not extend to a homomorphism into Aut(kernel)")

    elements = [(x, y) for y in range(a.order) for x in range(k.order)]

    def law(u, v):
        # (k1, a1)(k2, a2) = (k1 * a1(k2), a1 a2)
        return (k.mul[u[0]][hom[u[1]][v[0]]], a.mul[u[1]][v[1]])

    gens = [(x, 0) for x in kernel.gens] + [(0, y) for y in actor.gens]
    label = label or f"{_wrap(k.label)}:{_wrap(a.label)}"
    p = _from_law(elements, law, gens, label)
    _require(p.group.order == k.order * a.order, f"{label} order")
    return p


def _wrap(label: str) -> str:
    return f"({label})" if re.search(r"[x:]", label) else label


def _extend_to_map(group: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> list[int] | None:
    """Extend ``gens -> images`` to an endomorphism, or None if inconsistent."""
    img = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y = group.mul[x][g]
                z = group.mul[img[x]][h]
                if y in img:
                    if img[y] != z:
                        return None
                else:
                    img[y] = z
                    nxt.append(y)
        frontier = nxt
    if len(img) != group.order:
        return None
    return [img[x] for x in range(group.order)]


def _action_homomorphism(
    group: FiniteGroup, gens: Sequence[int], phis: Sequence[Sequence[int]]
) -> list[tuple[int, ...]] | None:
    """Map every element of ``group`` to a kernel permutation.

    ``x*g`` acts as "first g, then x", so that ``(k1, a1)(k2, a2)`` with the
    twist ``a1(k2)`` is associative.
    """
    n = len(phis[0]) if phis else 0
    ident = tuple(range(n)) if phis else ()
    act: dict[int, tuple[int, ...]] = {0: ident}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, phi in zip(gens, phis):
                y = group.mul[x][g]
                img = tuple(act[x][phi[t]] for t in range(n))
                if y in act:
                    if act[y] != img:
                        return None
                else:
                    act[y] = img
                    nxt.append(y)
        frontier = nxt
    if len(act) != group.order:
        return None
    if not phis:
        return [()] * group.order
    return [act[x] for x in range(group.order)]


# -- name parsing -----------------------------------------------------------

_ATOM = re.compile(
    r"""^(?:
        (?P<cyc>[ZC])(?P<n>\d+)(?:\^(?P<pow>\d+))?
      | \((?P<pcyc>[ZC])(?P<pn>\d+)\)\^(?P<ppow>\d+)
      | D(?P<dn>\d+)
      | D_?[({](?P<p>-?\d+),(?P<q>-?\d+),(?P<r>-?\d+)[)}]
      | Q8
      | S(?P<sn>\d)
      | A(?P<an>\d)
      | (?P<sl>SL|GL)\(2,(?:F_?)?3\)
    )$""",
    re.VERBOSE,
)


def construct_named(name: str) -> FiniteGroup:
    """Build a group from a name such as ``Z2xZ6``, ``D(2,8,3)`` or ``SL(2,3)``.

    Accepted atoms: ``Zn``/``Cn`` (with optional ``^k``), ``(Zn)^k``, ``Dn``
    (order 2n), ``Q8``, ``D(p,q,r)``, ``Sn`` and ``An`` for n <= 5,
    ``SL(2,3)`` and ``GL(2,3)``.  Atoms joined by ``x`` form a direct
    product.  Registered table groups (see :data:`TABLE_GROUPS`) may also be
    requested by their paper identifier, e.g. ``G(32,7)``.
    """
    return named_presented(name).group


def named_presented(name: str) -> Presented:
    text = name.replace(" ", "")
    if text in TABLE_GROUPS:
        return TABLE_GROUPS[text].build()
    parts = _split_product(text)
    if not parts:
        raise BadParameters(f"empty group name {name!r}")
    built = [_atom(p) for p in parts]
    if len(built) == 1:
        return built[0]
    return direct(*built, label=text)


def _split_product(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "x" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p for p in parts if p]


def _atom(text: str) -> Presented:
    m = _ATOM.match(text)
    if m is None:
        raise BadParameters(f"unknown group name {text!r}")
    if m["cyc"]:
        n, k = int(m["n"]), int(m["pow"] or 1)
        return cyclic(n) if k == 1 else abelian(*([n] * k))
    if m["pcyc"]:
        return abelian(*([int(m["pn"])] * int(m["ppow"])))
    if m["dn"]:
        return dihedral(int(m["dn"]))
    if m["p"]:
        return metacyclic(int(m["p"]), int(m["q"]), int(m["r"]))
    if text == "Q8":
        return quaternion()
    if m["sn"]:
        return symmetric(int(m["sn"]))
    if m["an"]:
        return alternating(int(m["an"]))
    return special_linear_2_3() if m["sl"] == "SL" else general_linear_2_3()


# -- groups of the classification tables -------------------------------------

@dataclass(frozen=True)
class TableGroup:
    """A group named in the classification tables, pinned by construction."""

    paper_id: str
    description: str
    builder: Callable[[], Presented] = field(compare=False)

    def build(self) -> Presented:
        p = self.builder()
        g = p.group
        g.label = self.description
        g.paper_id = self.paper_id
        return p


def _sd(actor: Presented, kernel: Presented, action, label: str) -> Callable[[], Presented]:
    return lambda: semidirect(actor, kernel, action, label)


def _table_groups() -> dict[str, TableGroup]:
    n = named_presented
    entries = [
        ("G(2,1)", "Z2", lambda: n("Z2")),
        ("G(3,1)", "Z3", lambda: n("Z3")),
        ("G(4,1)", "Z4", lambda: n("Z4")),
        ("G(4,2)", "Z2^2", lambda: n("Z2^2")),
        ("G(5,1)", "Z5", lambda: n("Z5")),
        ("G(6,1)", "S3", lambda: n("S3")),
        ("G(6,2)", "Z6", lambda: n("Z6")),
        ("G(8,1)", "Z8", lambda: n("Z8")),
        ("G(8,2)", "Z2xZ4", lambda: n("Z2xZ4")),
        ("G(8,3)", "D4", lambda: n("D4")),
        ("G(8,4)", "Q8", lambda: n("Q8")),
        ("G(8,5)", "Z2^3", lambda: n("Z2^3")),
        ("G(10,2)", "Z10", lambda: n("Z10")),
        ("G(12,1)", "D(4,3,-1)", lambda: n("D(4,3,-1)")),
        ("G(12,3)", "A4", lambda: n("A4")),
        ("G(12,4)", "D6", lambda: n("D6")),
        ("G(12,5)", "Z2xZ6", lambda: n("Z2xZ6")),
        ("G(16,3)", "Z4:Z2^2", lambda: semidirect(
            cyclic(4), abelian(2, 2), [[(0, 1), (1, 0)]], "Z4:Z2^2")),
        ("G(16,5)", "Z2xZ8", lambda: n("Z2xZ8")),
        ("G(16,6)", "D(2,8,5)", lambda: n("D(2,8,5)")),
        ("G(16,8)", "D(2,8,3)", lambda: n("D(2,8,3)")),
        ("G(16,11)", "Z2xD4", lambda: n("Z2xD4")),
        ("G(18,3)", "Z3xS3", lambda: n("Z3xS3")),
        ("G(24,3)", "SL(2,3)", lambda: n("SL(2,3)")),
        ("G(24,5)", "D(2,12,5)", lambda: n("D(2,12,5)")),
        ("G(24,8)", "Z2:(Z2^2xZ3)", lambda: semidirect(
            cyclic(2), abelian(2, 2, 3), [[(0, 1, 0), (1, 0, 0), (0, 0, 2)]], "Z2:(Z2^2xZ3)")),
        ("G(24,12)", "S4", lambda: n("S4")),
        ("G(24,13)", "Z2xA4", lambda: n("Z2xA4")),
        ("G(32,2)", "Z4:(Z4xZ2)", lambda: semidirect(
            cyclic(4), abelian(4, 2), [[(1, 1), (0, 1)]], "Z4:(Z4xZ2)")),
        ("G(32,5)", "Z8:Z2^2", lambda: semidirect(
            cyclic(8), abelian(2, 2), [[(0, 1), (1, 0)]], "Z8:Z2^2")),
        ("G(32,6)", "Z4:Z2^3", lambda: semidirect(
            cyclic(4), abelian(2, 2, 2), [[(0, 0, 1), (0, 1, 0), (1, 1, 0)]], "Z4:Z2^3")),
        ("G(32,7)", "Z2:D(2,8,5)", lambda: semidirect(
            cyclic(2), metacyclic(2, 8, 5), [[(1, 0), (1, 1)]], "Z2:D(2,8,5)")),
        ("G(32,9)", "Z2:(Z2xZ8)", lambda: semidirect(
            cyclic(2), abelian(2, 8), [[(1, 0), (1, 3)]], "Z2:(Z2xZ8)")),
        ("G(36,9)", "Z4:Z3^2", lambda: semidirect(
            cyclic(4), abelian(3, 3), [[(0, 1), (2, 0)]], "Z4:Z3^2")),
        ("G(36,10)", "S3xS3", lambda: n("S3xS3")),
        ("G(36,12)", "Z6xS3", lambda: n("Z6xS3")),
        ("G(48,29)", "GL(2,3)", lambda: n("GL(2,3)")),
        ("G(48,48)", "Z2xS4", lambda: n("Z2xS4")),
        ("G(48,49)", "Z2^2xA4", lambda: n("Z2^2xA4")),
        ("G(60,5)", "A5", lambda: n("A5")),
        ("G(64,32)", "Z4:Z2^4", lambda: semidirect(
            cyclic(4), abelian(2, 2, 2, 2), [[(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 1, 0)]],
            "Z4:Z2^4")),
        ("G(72,42)", "Z3xS4", lambda: n("Z3xS4")),
        ("G(80,49)", "Z5:Z2^4", lambda: semidirect(
            cyclic(5), abelian(2, 2, 2, 2), [[(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 1), (1, 0, 1, 1)]],
            "Z5:Z2^4")),
        ("G(120,34)", "S5", lambda: n("S5")),
    ]
    return {pid: TableGroup(pid, desc, fn) for pid, desc, fn in entries}


TABLE_GROUPS: dict[str, TableGroup] = {}


# -- catalog file -----------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    label: str
    paper_id: str | None
    degree: int
    generators: tuple[Perm, ...]
    expected_order: int
    line: int = 0

    def build(self, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
        group, _ = closure_with_generators(
            self.degree, self.generators, self.label, self.paper_id, order_cap
        )
        if group.order != self.expected_order:
            raise OrderMismatch(
                f"entry {self.label} ({self.paper_id}) generates order {group.order}, "
                f"expected {self.expected_order}"
            )
        return group

    def serialize(self) -> str:
        gens = ";".join(format_cycles(g) for g in self.generators) or "()"
        return f"{self.expected_order};{self.label};{self.paper_id or ''};{self.degree};{gens}"


def parse_catalog_line(text: str, line: int = 0) -> CatalogEntry | None:
    """Parse one catalog line; comments and blank lines give None."""
    body = text.split("#", 1)[0].strip()
    if not body:
        return None
    fields = [f.strip() for f in body.split(";")]
    if len(fields) < 4:
        raise ParseError(f"expected at least 4 ';'-separated fields, got {len(fields)}", line)
    try:
        order = int(fields[0])
        degree = int(fields[3])
    except ValueError as exc:
        raise ParseError(f"order and degree must be integers ({exc})", line) from None
    if order < 1 or degree < 1:
        raise ParseError("order and degree must be positive", line)
    gens = []
    for chunk in fields[4:]:
        try:
            gens.append(parse_cycles(chunk, degree))
        except ValueError as exc:
            raise ParseError(str(exc), line) from None
    return CatalogEntry(fields[1], fields[2] or None, degree, tuple(gens), order, line)


def _closure_order(entry: CatalogEntry) -> int:
    return len(_perm_closure(entry.generators, entry.degree)) if entry.generators else 1


class Catalog:
    """Immutable index of catalog entries by order.

    Groups are realised lazily per order and memoised; realisation of one
    order is guarded by a lock so concurrent readers see a single instance.
    """

    def __init__(self, entries: Iterable[CatalogEntry], source: str = "") -> None:
        self.entries: tuple[CatalogEntry, ...] = tuple(entries)
        self.source = source
        by_order: dict[int, list[CatalogEntry]] = {}
        for e in self.entries:
            by_order.setdefault(e.expected_order, []).append(e)
        self._by_order = {k: tuple(v) for k, v in by_order.items()}
        self._groups: dict[int, tuple[FiniteGroup, ...]] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def orders(self) -> frozenset[int]:
        return frozenset(self._by_order)

    def covers(self, n: int) -> bool:
        return n in self._by_order

    def entries_of_order(self, n: int) -> tuple[CatalogEntry, ...]:
        if n not in self._by_order:
            raise OrderNotCovered(f"catalog {self.source or ''} has no groups of order {n}".replace("  ", " "))
        return self._by_order[n]

    def groups_of_order(self, n: int) -> tuple[FiniteGroup, ...]:
        entries = self.entries_of_order(n)
        with self._lock:
            if n not in self._groups:
                groups = tuple(e.build() for e in entries)
                if n <= DISTINCTNESS_CHECK_LIMIT:
                    _check_distinct(groups)
                self._groups[n] = groups
            return self._groups[n]

    def identify(self, group: FiniteGroup) -> FiniteGroup:
        """The catalog group isomorphic to ``group``."""
        for h in self.groups_of_order(group.order):
            if h.invariant_key == group.invariant_key and is_isomorphic(group, h) is not None:
                return h
        raise OrderNotCovered(f"no catalog entry isomorphic to {group.label} of order {group.order}")

    def by_paper_id(self, paper_id: str) -> FiniteGroup:
        key = paper_id.replace(" ", "")
        for e in self.entries:
            if (e.paper_id or "").replace(" ", "") == key:
                return self.groups_of_order(e.expected_order)[self._by_order[e.expected_order].index(e)]
        raise KeyError(paper_id)

    def by_label(self, label: str) -> FiniteGroup:
        for e in self.entries:
            if e.label == label:
                return self.groups_of_order(e.expected_order)[self._by_order[e.expected_order].index(e)]
        raise KeyError(label)


def _check_distinct(groups: Sequence[FiniteGroup]) -> None:
    for i, g in enumerate(groups):
        for h in groups[i + 1:]:
            if g.invariant_key == h.invariant_key and is_isomorphic(g, h) is not None:
                raise OrderMismatch(f"catalog entries {g.label} and {h.label} are isomorphic")


def default_catalog_path() -> Path:
    return Path(str(resources.files("isoclass") / "data" / DEFAULT_CATALOG))


def load_catalog(path: str | Path | None = None, check_orders: bool = True) -> Catalog:
    """Read and validate a catalog file.

    Every entry's generators are closed and compared with the stated order.
    Entries of order at most 32 are also checked pairwise non-isomorphic
    when that order is first realised.
    """
    p = Path(path) if path is not None else default_catalog_path()
    try:
        text = p.read_text(encoding="ascii")
    except FileNotFoundError:
        raise ParseError(f"catalog file {p} not found") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"catalog file {p} is not ASCII ({exc.reason})") from None
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        entry = parse_catalog_line(line, lineno)
        if entry is None:
            continue
        if check_orders:
            got = _closure_order(entry)
            if got != entry.expected_order:
                raise OrderMismatch(
                    f"line {lineno}: entry {entry.label} ({entry.paper_id}) generates "
                    f"order {got}, expected {entry.expected_order}"
                )
        entries.append(entry)
    return Catalog(entries, str(p))


@lru_cache(maxsize=4)
def _cached_catalog(path: str) -> Catalog:
    return load_catalog(path)


def default_catalog() -> Catalog:
    """The bundled catalog, loaded once per process."""
    return _cached_catalog(str(default_catalog_path()))


def groups_of_order(catalog: Catalog, n: int) -> tuple[FiniteGroup, ...]:
    return catalog.groups_of_order(n)


def resolve_group(name: str, catalog: Catalog | None = None) -> FiniteGroup:
    """Find a group by paper identifier, catalog label or constructor name."""
    key = name.replace(" ", "")
    if catalog is not None:
        for lookup in (catalog.by_paper_id, catalog.by_label):
            try:
                return lookup(key)
            except KeyError:
                pass
    return construct_named(key)


TABLE_GROUPS.update(_table_groups())
