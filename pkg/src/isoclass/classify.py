"""Classification pipelines for quotients (C x F)/G with p_g = q = 2 or 1.

Each pipeline runs the same three stages: a Riemann-Hurwitz signature search
with bounds derived on the fly, a sweep over every catalog group of each
admissible order, and a component count for the surviving cases.

Rows always store the C side in ``sig1`` and the F side in ``sig2``.  Mixed
rows carry the signature of the index-two subgroup in ``sig1`` only.
"""

from __future__ import annotations

import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence

from .catalog import Catalog, default_catalog, load_catalog
from .errors import CatalogGap, InconsistentInvariants, OrderNotCovered
from .genvec import (
    DEFAULT_TUPLE_BUDGET,
    GeneratingVector,
    SignatureType,
    first_vector,
    iter_vectors,
    stabilizer_set_raw,
)
from .geometry import (
    ALLOWED_BASKETS,
    MixedDatum,
    QuotientSingularity,
    _canonical_type,
    basket_allowed,
    covering_genus,
    is_split,
    mixed_admissible,
    moduli_dimension,
    parse_basket,
    product_invariants_free,
    resolved_invariants,
    serialize_basket,
    singular_points,
    singularity_contribution,
)
from .groups import FiniteGroup
from .hurwitz import (
    DEFAULT_ORBIT_BUDGET,
    THEOREM,
    component_count_mixed,
    component_count_unmixed,
    count_compatible_pairs,
    index_two_subgroup,
)

log = logging.getLogger(__name__)

GH = "GH"
UNMIX = "UnMix"
MIX = "Mix"
ISOTRIVIAL = "Isotrivial"
PGQ1_UNMIXED = "PGQ1-unmixed"
PGQ1_MIXED = "PGQ1-mixed"
KINDS = (GH, UNMIX, MIX, ISOTRIVIAL, PGQ1_UNMIXED, PGQ1_MIXED)

# shapes understood by admissible_signatures
SHAPE_GH = "gh"
SHAPE_UNMIXED_AGT = "unmixed-agt"
SHAPE_PGQ1 = "pgq1"
SHAPES = (SHAPE_GH, SHAPE_UNMIXED_AGT, SHAPE_PGQ1)

PGQ1_MAX_ORDER = 120

RECORD_FIELDS = ("kind", "K2", "gC", "gF", "group", "paper_id", "sig1", "sig2", "singularities", "dim", "n")


# -- rows -----------------------------------------------------------------------

def _order_from_id(paper_id: str) -> int:
    m = re.fullmatch(r"G\((\d+),\s*(\d+)\s*\)", paper_id.strip())
    if not m:
        raise ValueError(f"cannot read a group order from {paper_id!r}")
    return int(m.group(1))


@dataclass(frozen=True)
class ClassificationRow:
    kind: str
    K2: int
    gC: int
    gF: int
    group: str
    paper_id: str
    sig1: SignatureType
    sig2: SignatureType | None
    singularities: tuple[QuotientSingularity, ...]
    dim: int
    n: int

    @property
    def order(self) -> int:
        return _order_from_id(self.paper_id)

    def sort_key(self) -> tuple:
        return (
            KINDS.index(self.kind), self.K2, self.order, self.group,
            self.sig1, self.sig2 or SignatureType(0), self.gC, self.gF,
        )

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "K2": self.K2,
            "gC": self.gC,
            "gF": self.gF,
            "group": self.group,
            "paper_id": self.paper_id,
            "sig1": str(self.sig1),
            "sig2": str(self.sig2) if self.sig2 is not None else "",
            "singularities": serialize_basket(self.singularities),
            "dim": self.dim,
            "n": self.n,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ClassificationRow":
        row = cls(
            kind=str(rec["kind"]),
            K2=int(rec["K2"]),
            gC=int(rec["gC"]),
            gF=int(rec["gF"]),
            group=str(rec["group"]),
            paper_id=str(rec["paper_id"]),
            sig1=SignatureType.parse(str(rec["sig1"])),
            sig2=SignatureType.parse(str(rec["sig2"])) if rec.get("sig2") else None,
            singularities=tuple(parse_basket(str(rec.get("singularities") or ""))),
            dim=int(rec["dim"]),
            n=int(rec["n"]),
        )
        row.verify()
        return row

    def verify(self) -> None:
        """Recompute genera, chi, q, K^2 and dim from the stored signatures."""
        if self.kind not in KINDS:
            raise InconsistentInvariants(f"unknown row kind {self.kind!r}")
        order = self.order

        def need(cond: bool, what: str) -> None:
            if not cond:
                raise InconsistentInvariants(f"{self.kind} {self.paper_id}: {what}")

        if self.kind in (MIX, PGQ1_MIXED):
            need(self.sig2 is None and not self.singularities, "mixed rows carry one signature")
            need(order % 2 == 0, "order is odd")
            g = covering_genus(order // 2, self.sig1)
            need(self.gC == self.gF == g, f"genus {g} vs ({self.gC}, {self.gF})")
            need((g - 1) ** 2 == order, "chi != 1")
            need(self.sig1.g_prime == (2 if self.kind == MIX else 1), "wrong irregularity")
            need(self.K2 == 8, "K^2 != 8")
            need(self.dim == moduli_dimension([self.sig1]), "dimension mismatch")
            return
        need(self.sig2 is not None, "missing F-side signature")
        assert self.sig2 is not None
        gC = covering_genus(order, self.sig1)
        gF = covering_genus(order, self.sig2)
        need((gC, gF) == (self.gC, self.gF), f"genera ({gC}, {gF}) vs ({self.gC}, {self.gF})")
        q = self.sig1.g_prime + self.sig2.g_prime
        need(q == (1 if self.kind == PGQ1_UNMIXED else 2), f"q = {q}")
        need(self.dim == moduli_dimension([self.sig1, self.sig2]), "dimension mismatch")
        if self.kind == ISOTRIVIAL:
            inv = resolved_invariants(gC, gF, order, self.singularities)
            need(inv.chi == 1 and inv.K2 == self.K2, f"chi = {inv.chi}, K^2 = {inv.K2}")
            need(basket_allowed(self.K2, self.singularities), "basket not allowed")
        else:
            need(not self.singularities, "free quotient with singular points")
            inv = product_invariants_free(gC, gF, order)
            need(inv.chi == 1 and inv.K2 == self.K2, f"chi = {inv.chi}, K^2 = {inv.K2}")


def sort_rows(rows: Iterable[ClassificationRow]) -> list[ClassificationRow]:
    out = sorted(rows, key=ClassificationRow.sort_key)
    for a, b in zip(out, out[1:]):
        if a == b:
            raise InconsistentInvariants(f"duplicate row {a.to_record()}")
    return out


# -- signature search -------------------------------------------------------------

def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def signatures_of_genus(
    genus: int, g_prime: int, max_order: int | None = None
) -> list[tuple[int, SignatureType, int]]:
    """All (|G|, type, genus) with 2g - 2 = |G| (2g' - 2 + sum(1 - 1/m_i)).

    Periods are chosen in increasing order.  With A the bracket and T = 2g - 2,
    every period divides |G| = T / A, so a prefix ending in m bounds
    m (base + s) - s <= T where s counts the open slots (all >= m).  The
    prefix lcm must also fit under T / A_min.  Both bounds are finite as long
    as base + s > 0, which is necessary for A > 0 anyway.
    """
    if genus < 2:
        raise ValueError("the covering curve must have genus at least 2")
    T = Fraction(2 * genus - 2)
    base0 = Fraction(2 * g_prime - 2)
    out: list[tuple[int, SignatureType, int]] = []

    def emit(periods: tuple[int, ...], A: Fraction, lcm: int) -> None:
        if A <= 0:
            return
        d = T / A
        if d.denominator != 1 or int(d) % lcm:
            return
        if max_order is not None and d > max_order:
            return
        out.append((int(d), SignatureType(g_prime, periods), genus))

    # r periods, each contributing at least 1/2, and |G| >= 2 once r >= 1
    r_max = int(T - 2 * base0) if T - 2 * base0 > 0 else 0
    for r in range(0, r_max + 1):
        if r == 0:
            emit((), base0, 1)
            continue

        def rec(prefix: list[int], base: Fraction, lcm: int) -> None:
            k = len(prefix)
            if k == r:
                emit(tuple(prefix), base, lcm)
                return
            s = r - k
            if base + s <= 0:
                return
            lo = prefix[-1] if prefix else 2
            hi = (T + s) / (base + s)
            m = lo
            while m <= hi:
                a_min = base + s * (1 - Fraction(1, m))
                new_lcm = _lcm(lcm, m)
                if a_min <= 0 or new_lcm <= T / a_min:
                    prefix.append(m)
                    rec(prefix, base + 1 - Fraction(1, m), new_lcm)
                    prefix.pop()
                m += 1

        rec([], base0, 1)
    return sorted(out)


def signatures_with_sum(order: int, g_prime: int, total: Fraction) -> list[SignatureType]:
    """Types (g'|m) with periods dividing ``order`` and sum(1 - 1/m_i) = total."""
    divisors = [m for m in range(2, order + 1) if order % m == 0]
    out: list[SignatureType] = []

    def rec(start: int, left: Fraction, acc: list[int]) -> None:
        if left == 0:
            out.append(SignatureType(g_prime, tuple(acc)))
            return
        if left < Fraction(1, 2):
            return
        for i in range(start, len(divisors)):
            term = 1 - Fraction(1, divisors[i])
            if term > left:
                break
            acc.append(divisors[i])
            rec(i, left - term, acc)
            acc.pop()

    if total >= 0:
        rec(0, Fraction(total), [])
    return out


@dataclass(frozen=True, order=True)
class Candidate:
    """Numerically admissible data for one pipeline: order and both sides."""

    order: int
    sigC: SignatureType
    gC: int
    sigF: SignatureType
    gF: int


def _candidates(shape: str, chi: int, genus_f: int | None = None, max_order: int | None = None) -> list[Candidate]:
    """Pairs of types for free actions with chi(S) = chi.

    From (gC - 1)(gF - 1) = chi |G| the C side needs
    sum(1 - 1/m) = 2 chi / (gF - 1) - (2 g'_C - 2).  For two elliptic
    quotients that sum is at least 1/2, hence gF <= 4 chi + 1.
    """
    out: list[Candidate] = []
    if shape == SHAPE_GH:
        # C is unramified over a genus-2 curve, so gC - 1 = |G| and gF - 1 = chi
        gF = chi + 1
        if genus_f not in (None, gF):
            return []
        for order, sigF, _ in signatures_of_genus(gF, 0, max_order):
            out.append(Candidate(order, SignatureType(2), order + 1, sigF, gF))
        return out
    if shape not in (SHAPE_UNMIXED_AGT, SHAPE_PGQ1):
        raise ValueError(f"unknown signature shape {shape!r}")
    f_prime = 1 if shape == SHAPE_UNMIXED_AGT else 0
    genera = [genus_f] if genus_f is not None else list(range(2, 4 * chi + 2))
    for gF in genera:
        for order, sigF, _ in signatures_of_genus(gF, f_prime, max_order):
            gC_minus_1 = Fraction(chi * order, gF - 1)
            if gC_minus_1.denominator != 1 or gC_minus_1 < 1:
                continue
            gC = int(gC_minus_1) + 1
            if shape == SHAPE_UNMIXED_AGT and gC < gF:
                continue  # reported once, with gC >= gF
            for sigC in signatures_with_sum(order, 1, Fraction(2 * (gC - 1), order)):
                out.append(Candidate(order, sigC, gC, sigF, gF))
    return sorted(out)


def admissible_signatures(
    chi_target: int,
    q_target: int,
    sig_shape: str,
    genus: int | None = None,
    max_order: int | None = None,
) -> list[tuple[int, SignatureType, int]]:
    """(|G|, F-side type, g(F)) admitting a partner type on the C side.

    ``sig_shape`` is one of "gh" (F over P^1, C unramified over genus 2),
    "unmixed-agt" (both quotients elliptic) or "pgq1" (C over an elliptic
    curve, F over P^1).  ``genus`` pins g(F).
    """
    expected_q = {SHAPE_GH: 2, SHAPE_UNMIXED_AGT: 2, SHAPE_PGQ1: 1}
    if sig_shape not in expected_q:
        raise ValueError(f"unknown signature shape {sig_shape!r}")
    if q_target != expected_q[sig_shape]:
        raise ValueError(f"shape {sig_shape} has q = {expected_q[sig_shape]}, not {q_target}")
    seen = {(c.order, c.sigF, c.gF) for c in _candidates(sig_shape, chi_target, genus, max_order)}
    return sorted(seen)


@dataclass(frozen=True, order=True)
class MixedCandidate:
    genus: int
    order0: int        # |G0|; the full group has twice this order
    sig: SignatureType


def mixed_candidates(q_target: int) -> list[MixedCandidate]:
    """Types for G0 acting on C with chi = 1 and C/G0 of genus q.

    chi = 1 gives |G| = (g - 1)^2 with |G0| = |G|/2, so g is odd and
    sum(1 - 1/m) = 4/(g - 1) - (2q - 2).  The sum is at least 1/2 when
    q <= 1 (some branching is needed) and at least 0 otherwise.
    """
    if q_target < 1:
        raise ValueError("mixed search needs q >= 1")
    floor = Fraction(1, 2) if q_target == 1 else Fraction(0)
    out: list[MixedCandidate] = []
    g = 3
    while Fraction(4, g - 1) - (2 * q_target - 2) >= floor:
        order0 = (g - 1) ** 2 // 2
        total = Fraction(4, g - 1) - (2 * q_target - 2)
        for sig in signatures_with_sum(order0, q_target, total):
            if covering_genus(order0, sig) == g:
                out.append(MixedCandidate(g, order0, sig))
        g += 2
    return out


# -- sweep plumbing ---------------------------------------------------------------

@dataclass
class SearchReport:
    """What a pipeline looked at, for diagnostics and certificates."""

    pipeline: str
    candidates: list[str] = field(default_factory=list)
    skipped_orders: list[tuple[int, str]] = field(default_factory=list)
    groups_tested: int = 0
    certificates: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Settings:
    policy: str = THEOREM
    tuple_budget: int | None = DEFAULT_TUPLE_BUDGET
    orbit_budget: int | None = DEFAULT_ORBIT_BUDGET
    jobs: int = 1


@lru_cache(maxsize=4)
def _worker_catalog(path: str) -> Catalog:
    return load_catalog(path, check_orders=False)


@lru_cache(maxsize=256)
def _group_at(catalog_path: str, order: int, index: int) -> FiniteGroup:
    # a worker builds only the entries it is handed, not the whole order
    return _worker_catalog(catalog_path).entries_of_order(order)[index].build()


def _groups(catalog: Catalog, order: int, pipeline: str) -> tuple[FiniteGroup, ...]:
    try:
        return catalog.groups_of_order(order)
    except OrderNotCovered:
        raise CatalogGap(f"{pipeline}: the bound search needs order {order}, which the catalog lacks") from None


Task = tuple  # (evaluator name, catalog path, order, index, *args)


def _run(catalog: Catalog, tasks: list[Task], settings: Settings) -> list:
    """Evaluate tasks inline or on a process pool; results keep task order."""
    if settings.jobs <= 1 or len(tasks) < 2 or not catalog.source:
        return [_dispatch(t, settings, catalog) for t in tasks]
    with ProcessPoolExecutor(max_workers=settings.jobs) as pool:
        return list(pool.map(_dispatch, tasks, [settings] * len(tasks), chunksize=8))


def _dispatch(task: Task, settings: Settings, catalog: Catalog | None = None) -> object:
    name, path, order, index, *args = task
    group = catalog.groups_of_order(order)[index] if catalog is not None else _group_at(path, order, index)
    return _EVALUATORS[name](group, settings, *args)


def _paper_id(group: FiniteGroup) -> str:
    return group.paper_id or f"G({group.order},?)"


# -- free (unmixed) quotients -------------------------------------------------------

_KIND_K2 = {GH: 8, UNMIX: 8, PGQ1_UNMIXED: 8}


def _eval_free(group: FiniteGroup, settings: Settings, kind: str, cand: Candidate) -> tuple | None:
    # the sphere side is the cheapest filter, so it goes first
    sides = sorted([cand.sigC, cand.sigF], key=lambda s: s.g_prime)
    for sig in sides:
        if first_vector(group, sig, settings.tuple_budget) is None:
            return None
    if count_compatible_pairs(group, cand.sigC, cand.sigF, settings.tuple_budget) == 0:
        return None
    count = component_count_unmixed(
        group, cand.sigC, cand.sigF, settings.policy,
        tuple_budget=settings.tuple_budget, orbit_budget=settings.orbit_budget,
    )
    if count.n == 0:
        return None
    row = ClassificationRow(
        kind=kind, K2=_KIND_K2[kind], gC=cand.gC, gF=cand.gF,
        group=group.label, paper_id=_paper_id(group),
        sig1=cand.sigC, sig2=cand.sigF, singularities=(),
        dim=moduli_dimension([cand.sigC, cand.sigF]), n=count.n,
    )
    return row, count.certificate.summary()


def _sweep_free(
    catalog: Catalog,
    kind: str,
    cands: Sequence[Candidate],
    settings: Settings,
    report: SearchReport,
) -> list[ClassificationRow]:
    tasks: list[Task] = []
    for c in cands:
        report.candidates.append(f"|G|={c.order} C{c.sigC} F{c.sigF} gC={c.gC} gF={c.gF}")
        groups = _groups(catalog, c.order, report.pipeline)
        log.info("%s: order %d, C %s, F %s: %d groups", report.pipeline, c.order, c.sigC, c.sigF, len(groups))
        tasks += [("free", catalog.source, c.order, i, kind, c) for i in range(len(groups))]
    report.groups_tested += len(tasks)
    rows = []
    for res in _run(catalog, tasks, settings):
        if res is not None:
            row, cert = res
            rows.append(row)
            report.certificates.append(cert)
    return rows


def _resolve(catalog: Catalog | None) -> Catalog:
    return catalog if catalog is not None else default_catalog()


def classify_gh(
    catalog: Catalog | None = None,
    settings: Settings = Settings(),
    report: SearchReport | None = None,
) -> list[ClassificationRow]:
    """C unramified over a genus-2 curve, F over P^1, free action."""
    catalog = _resolve(catalog)
    report = report or SearchReport("gh")
    cands = _candidates(SHAPE_GH, 1)
    return sort_rows(_sweep_free(catalog, GH, cands, settings, report))


def classify_unmixed_agt(
    catalog: Catalog | None = None,
    settings: Settings = Settings(),
    report: SearchReport | None = None,
) -> list[ClassificationRow]:
    """Both quotient curves elliptic, free action."""
    catalog = _resolve(catalog)
    report = report or SearchReport("unmixed-agt")
    cands = _candidates(SHAPE_UNMIXED_AGT, 1)
    return sort_rows(_sweep_free(catalog, UNMIX, cands, settings, report))


def classify_pgq1_unmixed(
    catalog: Catalog | None = None,
    settings: Settings = Settings(),
    report: SearchReport | None = None,
    max_order: int = PGQ1_MAX_ORDER,
) -> list[ClassificationRow]:
    catalog = _resolve(catalog)
    report = report or SearchReport("pgq1-unmixed")
    cands = []
    for c in _candidates(SHAPE_PGQ1, 1):
        if c.order > max_order:
            report.skipped_orders.append((c.order, f"C{c.sigC} F{c.sigF}"))
        else:
            cands.append(c)
    return sort_rows(_sweep_free(catalog, PGQ1_UNMIXED, cands, settings, report))


# -- mixed quotients ----------------------------------------------------------------

def index_two_subgroups(group: FiniteGroup) -> list[frozenset[int]]:
    """All subgroups of index two, as kernels of maps onto Z2.

    Every such kernel contains the subgroup Q generated by squares, and
    G/Q is elementary abelian, so the kernels are the preimages of the
    hyperplanes of G/Q.
    """
    m = group.mul
    q = group.subgroup_generated(m[x][x] for x in range(group.order))
    coset: dict[int, int] = {}
    reps: list[int] = []
    for x in range(group.order):
        if x in coset:
            continue
        cid = len(reps)
        reps.append(x)
        for h in q:
            coset[m[x][h]] = cid
    # coordinates of each coset over a greedily chosen basis of G/Q
    coords = {coset[0]: 0}
    basis: list[int] = []
    for x in reps:
        if coset[x] in coords:
            continue
        bit = 1 << len(basis)
        basis.append(x)
        for c, v in list(coords.items()):
            coords[coset[m[reps[c]][x]]] = v | bit
    k = len(basis)
    out = []
    for f in range(1, 1 << k):
        out.append(frozenset(x for x in range(group.order) if bin(coords[coset[x]] & f).count("1") % 2 == 0))
    return out


def _mixed_predicate(group: FiniteGroup, g_zero: frozenset[int], sig: SignatureType) -> Callable[[tuple[int, ...]], bool]:
    sub = index_two_subgroup(group, g_zero)
    tau_prime = min(x for x in range(group.order) if x not in g_zero)
    datum = MixedDatum(group, g_zero, tau_prime)
    emb = sub.embedding

    def admissible(tup: tuple[int, ...]) -> bool:
        sigma = frozenset(emb[x] for x in stabilizer_set_raw(sub.group, sig, tup))
        return mixed_admissible(datum, sigma)

    return admissible


def _subgroup_classes(group: FiniteGroup, subs: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    """One subgroup per orbit of Aut(G) on ``subs``."""
    gens = [a.perm for a in group.automorphism_generators]
    left = set(subs)
    reps = []
    for s in sorted(subs, key=sorted):
        if s not in left:
            continue
        reps.append(s)
        stack = [s]
        left.discard(s)
        while stack:
            t = stack.pop()
            for p in gens:
                u = frozenset(p[x] for x in t)
                if u in left:
                    left.discard(u)
                    stack.append(u)
    return reps


def _eval_mixed(group: FiniteGroup, settings: Settings, kind: str, cand: MixedCandidate) -> tuple | None:
    admissible_subs = []
    for g_zero in index_two_subgroups(group):
        if is_split(group, g_zero):
            continue
        sub = index_two_subgroup(group, g_zero)
        pred = _mixed_predicate(group, g_zero, cand.sig)
        if any(pred(t) for t in iter_vectors(sub.group, cand.sig, budget=settings.tuple_budget)):
            admissible_subs.append(g_zero)
    if not admissible_subs:
        return None
    n = 0
    parts = []
    for g_zero in _subgroup_classes(group, admissible_subs):
        k = component_count_mixed(
            group, g_zero, cand.sig, _mixed_predicate(group, g_zero, cand.sig),
            tuple_budget=settings.tuple_budget, orbit_budget=settings.orbit_budget,
        )
        parts.append(k)
        n += k
    row = ClassificationRow(
        kind=kind, K2=8, gC=cand.genus, gF=cand.genus,
        group=group.label, paper_id=_paper_id(group),
        sig1=cand.sig, sig2=None, singularities=(),
        dim=moduli_dimension([cand.sig]), n=n,
    )
    cert = f"{group.label} G0 type {cand.sig}: orbits per G0 class {parts}"
    return row, cert


def _sweep_mixed(
    catalog: Catalog, kind: str, q_target: int, settings: Settings, report: SearchReport, max_order: int | None
) -> list[ClassificationRow]:
    tasks: list[Task] = []
    for c in mixed_candidates(q_target):
        order = 2 * c.order0
        report.candidates.append(f"|G|={order} G0 type {c.sig} g={c.genus}")
        if max_order is not None and order > max_order:
            report.skipped_orders.append((order, f"G0 {c.sig}"))
            continue
        groups = _groups(catalog, order, report.pipeline)
        log.info("%s: order %d, G0 type %s: %d groups", report.pipeline, order, c.sig, len(groups))
        tasks += [("mixed", catalog.source, order, i, kind, c) for i in range(len(groups))]
    report.groups_tested += len(tasks)
    rows = []
    for res in _run(catalog, tasks, settings):
        if res is not None:
            rows.append(res[0])
            report.certificates.append(res[1])
    return rows


def classify_mixed_pgq2(
    catalog: Catalog | None = None,
    settings: Settings = Settings(),
    report: SearchReport | None = None,
) -> list[ClassificationRow]:
    catalog = _resolve(catalog)
    report = report or SearchReport("mixed-pgq2")
    return sort_rows(_sweep_mixed(catalog, MIX, 2, settings, report, None))


def classify_pgq1_mixed(
    catalog: Catalog | None = None,
    settings: Settings = Settings(),
    report: SearchReport | None = None,
    max_order: int = PGQ1_MAX_ORDER,
) -> list[ClassificationRow]:
    catalog = _resolve(catalog)
    report = report or SearchReport("pgq1-mixed")
    return sort_rows(_sweep_mixed(catalog, PGQ1_MIXED, 1, settings, report, max_order))


def classify_pgq1(
    catalog: Catalog | None = None,
    settings: Settings = Settings(),
    report: SearchReport | None = None,
    max_order: int = PGQ1_MAX_ORDER,
) -> list[ClassificationRow]:
    """p_g = q = 1: C over an elliptic curve and F over P^1, plus mixed cases.

    Orders above ``max_order`` are not swept; they are listed in
    ``report.skipped_orders``.
    """
    report = report or SearchReport("pgq1")
    rows = classify_pgq1_unmixed(catalog, settings, report, max_order)
    rows += classify_pgq1_mixed(catalog, settings, report, max_order)
    return sort_rows(rows)


# -- isotrivial fibrations ----------------------------------------------------------

def _basket_key(sings: Iterable[QuotientSingularity]) -> tuple[QuotientSingularity, ...]:
    return tuple(sorted(_canonical_type(s) for s in sings))


@dataclass(frozen=True, order=True)
class IsotrivialCandidate:
    K2: int
    basket: tuple[QuotientSingularity, ...]
    order: int
    sigC: SignatureType
    gC: int
    sigF: SignatureType
    gF: int


def isotrivial_candidates(K2: int, basket: Sequence[QuotientSingularity]) -> list[IsotrivialCandidate]:
    """Numerical data for (C x F)/G with both quotients elliptic.

    The singular points fix X = (gC - 1)(gF - 1)/|G| = (K^2 - sum h_x)/8.
    Since each side has sum(1 - 1/m) >= 1/2, g - 1 >= |G|/4 on both sides,
    which bounds both genera by 4X + 1.
    """
    h = sum((singularity_contribution(s).h_x for s in basket), Fraction(0))
    X = (K2 - h) / 8
    if X <= 0:
        return []
    top = int(4 * X) + 1
    out = []
    for gF in range(2, top + 1):
        for gC in range(gF, top + 1):
            order = Fraction((gC - 1) * (gF - 1)) / X
            if order.denominator != 1:
                continue
            d = int(order)
            for sigF in signatures_with_sum(d, 1, Fraction(2 * (gF - 1), d)):
                for sigC in signatures_with_sum(d, 1, Fraction(2 * (gC - 1), d)):
                    out.append(IsotrivialCandidate(K2, tuple(sorted(basket)), d, sigC, gC, sigF, gF))
    return out


def basket_predicate(basket: Sequence[QuotientSingularity]):
    """Compatibility test: the singular points of the quotient form ``basket``."""
    target = _basket_key(basket)

    def compatible(group: FiniteGroup, sig1: SignatureType, t1: tuple, sig2: SignatureType, t2: tuple) -> bool:
        pts = singular_points(group, GeneratingVector(group, sig1, tuple(t1)), GeneratingVector(group, sig2, tuple(t2)))
        return _basket_key(pts) == target

    return compatible


def _eval_isotrivial(group: FiniteGroup, settings: Settings, cand: IsotrivialCandidate) -> tuple | None:
    for sig in (cand.sigC, cand.sigF):
        if first_vector(group, sig, settings.tuple_budget) is None:
            return None
    count = component_count_unmixed(
        group, cand.sigC, cand.sigF, settings.policy, compatible=basket_predicate(cand.basket),
        tuple_budget=settings.tuple_budget, orbit_budget=settings.orbit_budget,
    )
    if count.n == 0:
        return None
    row = ClassificationRow(
        kind=ISOTRIVIAL, K2=cand.K2, gC=cand.gC, gF=cand.gF,
        group=group.label, paper_id=_paper_id(group),
        sig1=cand.sigC, sig2=cand.sigF, singularities=cand.basket,
        dim=moduli_dimension([cand.sigC, cand.sigF]), n=count.n,
    )
    return row, count.certificate.summary()


def classify_isotrivial_pgq2(
    catalog: Catalog | None = None,
    settings: Settings = Settings(),
    report: SearchReport | None = None,
) -> list[ClassificationRow]:
    """Resolutions of singular diagonal quotients with both quotients elliptic."""
    catalog = _resolve(catalog)
    report = report or SearchReport("isotrivial-pgq2")
    tasks: list[Task] = []
    for K2 in sorted(ALLOWED_BASKETS):
        for basket in ALLOWED_BASKETS[K2]:
            for c in isotrivial_candidates(K2, basket):
                report.candidates.append(
                    f"K2={K2} basket {serialize_basket(basket)} |G|={c.order} C{c.sigC} F{c.sigF}"
                )
                groups = _groups(catalog, c.order, report.pipeline)
                tasks += [("isotrivial", catalog.source, c.order, i, c) for i in range(len(groups))]
    report.groups_tested += len(tasks)
    rows = []
    for res in _run(catalog, tasks, settings):
        if res is not None:
            rows.append(res[0])
            report.certificates.append(res[1])
    return sort_rows(rows)


def classify_pgq2(
    catalog: Catalog | None = None,
    settings: Settings = Settings(),
    report: SearchReport | None = None,
) -> list[ClassificationRow]:
    """All p_g = q = 2 pipelines: free unmixed, free mixed and isotrivial."""
    rows = classify_gh(catalog, settings, report)
    rows += classify_unmixed_agt(catalog, settings, report)
    rows += classify_mixed_pgq2(catalog, settings, report)
    rows += classify_isotrivial_pgq2(catalog, settings, report)
    return sort_rows(rows)


_EVALUATORS: dict[str, Callable[..., object]] = {
    "free": _eval_free,
    "mixed": _eval_mixed,
    "isotrivial": _eval_isotrivial,
}
