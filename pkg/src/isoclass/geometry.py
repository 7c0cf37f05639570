"""Numerical invariants of quotients (C x F)/G.

Everything is exact rational arithmetic; integrality is asserted, never rounded.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    BadPair,
    DegenerateSignature,
    GroupMismatch,
    InconsistentInvariants,
    K2OutOfRange,
    NonIntegralChi,
    NonIntegralGenus,
    NonIntegralK2,
    NonInvolutionStabilizer,
)
from .genvec import (
    GeneratingVector,
    SignatureType,
    fix_count,
    fixed_point_model,
    stabilizer_set,
)
from .groups import FiniteGroup


# -- Riemann-Hurwitz ----------------------------------------------------------

def covering_genus(order: int, sig: SignatureType) -> int:
    """Genus g of a G-cover with 2g - 2 = |G| (2g' - 2 + sum(1 - 1/m_i))."""
    rhs = order * sig.hurwitz_rhs()
    if rhs.denominator != 1 or rhs.numerator % 2:
        raise NonIntegralGenus(f"|G| = {order}, {sig}: 2g - 2 = {rhs}")
    g = (rhs.numerator + 2) // 2
    if g < 0:
        raise NonIntegralGenus(f"|G| = {order}, {sig}: negative genus")
    return g


def covering_genus_or_none(order: int, sig: SignatureType) -> int | None:
    try:
        return covering_genus(order, sig)
    except NonIntegralGenus:
        return None


@dataclass(frozen=True)
class SurfaceInvariants:
    chi: int
    p_g: int | None
    q: int | None
    K2: Fraction
    e: Fraction


def product_invariants_free(gC: int, gF: int, order: int) -> SurfaceInvariants:
    base = Fraction((gC - 1) * (gF - 1), order)
    if base.denominator != 1:
        raise NonIntegralChi(f"(gC-1)(gF-1)/|G| = {base}")
    chi = int(base)
    return SurfaceInvariants(chi=chi, p_g=None, q=None, K2=8 * base, e=4 * base)


def irregularity(sig1: SignatureType, sig2: SignatureType) -> int:
    return sig1.g_prime + sig2.g_prime


# -- cyclic quotient singularities --------------------------------------------

def hj_expansion(n: int, q: int) -> list[int]:
    """Minus continued fraction n/q = b1 - 1/(b2 - 1/(...))."""
    if not (0 < q < n) or gcd(n, q) != 1:
        raise BadPair(f"1/{n}(1,{q}) is not a cyclic quotient singularity")
    out = []
    a, b = n, q
    while b:
        k = -(-a // b)  # ceiling
        out.append(k)
        a, b = b, k * b - a
    return out


def hj_value(bs: Sequence[int]) -> Fraction:
    val = Fraction(bs[-1])
    for b in reversed(bs[:-1]):
        val = b - 1 / val
    return val


@dataclass(frozen=True, order=True)
class QuotientSingularity:
    n: int
    q: int
    hj: tuple[int, ...] = field(default=(), compare=False)
    q_prime: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "hj", tuple(hj_expansion(self.n, self.q)))
        object.__setattr__(self, "q_prime", pow(self.q, -1, self.n) if self.n > 1 else 0)

    def token(self) -> str:
        return f"{self.n}/{self.q}"

    def pretty(self) -> str:
        return f"1/{self.n}(1,{self.q})"

    @classmethod
    def parse(cls, token: str) -> "QuotientSingularity":
        n, q = token.strip().split("/")
        return cls(int(n), int(q))


@dataclass(frozen=True)
class SingularityContribution:
    h_x: Fraction
    e_x: Fraction
    B_x: Fraction


def singularity_contribution(s: QuotientSingularity) -> SingularityContribution:
    k = len(s.hj)
    h = 2 - Fraction(2 + s.q + s.q_prime, s.n) - sum(b - 2 for b in s.hj)
    e = k + 1 - Fraction(1, s.n)
    return SingularityContribution(h, e, 2 * e - h)


def serialize_basket(sings: Iterable[QuotientSingularity]) -> str:
    return ",".join(s.token() for s in sorted(sings))


def parse_basket(text: str) -> list[QuotientSingularity]:
    text = text.strip()
    if not text:
        return []
    return sorted(QuotientSingularity.parse(t) for t in text.split(","))


def pretty_basket(sings: Iterable[QuotientSingularity]) -> str:
    c = Counter(sorted(sings))
    if not c:
        return "-"
    parts = []
    for s, k in sorted(c.items()):
        parts.append(f"{k}x{s.pretty()}" if k > 1 else s.pretty())
    return "+".join(parts)


# -- singular points of (C x F)/G ---------------------------------------------

def singular_points(
    group: FiniteGroup, v1: GeneratingVector, v2: GeneratingVector
) -> list[QuotientSingularity]:
    """Types of the points of (C x F)/G with nontrivial stabilizer.

    Each pair (p, p') of model points with H = Stab(p) & Stab(p') != 1 lies
    in an orbit of size |G|/|H|; summing |H|/|G| over pairs counts orbits.
    The generator of H rotating the C-side point by the standard exponent
    fixes the orientation, and its F-side exponent is the second weight.
    """
    if v1.group is not group or v2.group is not group:
        if v1.group.mul != group.mul or v2.group.mul != group.mul:
            raise GroupMismatch("vectors live in different groups")
    mc, mf = fixed_point_model(v1), fixed_point_model(v2)
    weight: dict[tuple[int, int], Fraction] = {}
    fpoints = [(set(group.powers[p.stabilizer_gen]), p) for p in mf.points]
    for pc in mc.points:
        s = pc.stabilizer_gen
        cyc_c = group.powers[s]
        for fset, pf in fpoints:
            common = [y for y in cyc_c if y in fset]
            n = len(common)
            if n == 1:
                continue
            h = cyc_c[pc.period // n]  # C-side exponent 1 relative to order n
            e_f = group.powers[pf.stabilizer_gen].index(h)
            b = (e_f // (pf.period // n)) % n
            key = (n, b)
            weight[key] = weight.get(key, Fraction(0)) + Fraction(n, group.order)
    out: list[QuotientSingularity] = []
    for (n, b), w in sorted(weight.items()):
        assert w.denominator == 1, (n, b, w)
        out.extend([QuotientSingularity(n, b)] * int(w))
    return sorted(out)


def node_count(group: FiniteGroup, v1: GeneratingVector, v2: GeneratingVector) -> int:
    s_prime = (stabilizer_set(v1) & stabilizer_set(v2)) - {0}
    if any(group.elem_order[c] != 2 for c in s_prime):
        raise NonInvolutionStabilizer("S' contains elements of order > 2")
    total = sum(fix_count(v1, c) * fix_count(v2, c) for c in s_prime)
    val = Fraction(2 * total, group.order)
    assert val.denominator == 1
    return int(val)


def resolved_invariants(
    gC: int, gF: int, order: int, sings: Sequence[QuotientSingularity]
) -> SurfaceInvariants:
    base = Fraction(4 * (gC - 1) * (gF - 1), order)
    contribs = [singularity_contribution(s) for s in sings]
    K2 = 2 * base + sum((c.h_x for c in contribs), Fraction(0))
    e = base + sum((c.e_x for c in contribs), Fraction(0))
    if K2.denominator != 1:
        raise NonIntegralK2(f"K^2 = {K2}")
    chi_frac = (K2 + e) / 12
    if chi_frac.denominator != 1:
        raise InconsistentInvariants(f"Noether fails: (K^2 + e)/12 = {chi_frac}")
    chi = int(chi_frac)
    if chi == 1:
        alt = 8 - sum((c.B_x for c in contribs), Fraction(0)) / 3
        if alt != K2:
            raise InconsistentInvariants(f"K^2 = {K2} but 8 - sum(B_x)/3 = {alt}")
        if e != 12 - K2:
            raise InconsistentInvariants(f"e = {e} but 12 - K^2 = {12 - K2}")
    return SurfaceInvariants(chi=chi, p_g=None, q=None, K2=K2, e=e)


# -- baskets -------------------------------------------------------------------

def _b(n: int, q: int) -> QuotientSingularity:
    return QuotientSingularity(n, q)


ALLOWED_BASKETS: dict[int, list[tuple[QuotientSingularity, ...]]] = {
    6: [(_b(2, 1), _b(2, 1))],
    5: [
        (_b(3, 1), _b(3, 2)),
        (_b(4, 1), _b(4, 1)),
        (_b(2, 1), _b(2, 1), _b(2, 1)),
    ],
    4: [
        (_b(4, 1), _b(4, 3)),
        (_b(5, 2), _b(5, 2)),
        (_b(2, 1), _b(4, 1), _b(4, 1)),
        (_b(2, 1), _b(2, 1), _b(2, 1), _b(2, 1)),
    ],
}


def _canonical_type(s: QuotientSingularity) -> QuotientSingularity:
    """1/n(1,q) and 1/n(1,q') are the same germ with the coordinates swapped."""
    return min(s, QuotientSingularity(s.n, s.q_prime))


def basket_allowed(K2: int, sings: Sequence[QuotientSingularity]) -> bool:
    if K2 not in ALLOWED_BASKETS:
        raise K2OutOfRange(f"K^2 = {K2} outside 4..6")
    key = tuple(sorted(_canonical_type(s) for s in sings))
    return any(tuple(sorted(_canonical_type(s) for s in b)) == key for b in ALLOWED_BASKETS[K2])


def derive_baskets(K2: int, max_n: int = 60) -> list[tuple[QuotientSingularity, ...]]:
    """Multisets with sum(B_x) = 3 (8 - K^2) and every e_x >= 3/2.

    Singularities are taken up to the swap q <-> q'.  Since B_x >= 2 e_x - h_x
    and e_x >= 3/2 bound B_x from below, only finitely many types can appear;
    ``max_n`` caps the search and is comfortably above the largest n whose
    B_x fits in the budget 18.
    """
    if K2 not in ALLOWED_BASKETS:
        raise K2OutOfRange(f"K^2 = {K2} outside 4..6")
    budget = Fraction(3 * (8 - K2))
    types: list[tuple[QuotientSingularity, Fraction]] = []
    for n in range(2, max_n + 1):
        for q in range(1, n):
            if gcd(n, q) != 1:
                continue
            s = QuotientSingularity(n, q)
            if _canonical_type(s) != s:
                continue
            c = singularity_contribution(s)
            if c.e_x >= Fraction(3, 2) and 0 < c.B_x <= budget:
                types.append((s, c.B_x))
    out: list[tuple[QuotientSingularity, ...]] = []

    def rec(start: int, left: Fraction, acc: list[QuotientSingularity]) -> None:
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(types)):
            s, bx = types[i]
            if bx <= left:
                acc.append(s)
                rec(i, left - bx, acc)
                acc.pop()

    rec(0, budget, [])
    return [tuple(sorted(b)) for b in out]


# -- moduli dimension -----------------------------------------------------------

def moduli_dimension(sigs: Sequence[SignatureType]) -> int:
    total = 0
    for s in sigs:
        if (s.g_prime == 0 and s.r < 3) or (s.g_prime == 1 and s.r == 0):
            raise DegenerateSignature(f"{s} has no positive-dimensional Teichmueller space")
        total += 3 * s.g_prime - 3 + s.r
    return total


# -- mixed construction ---------------------------------------------------------

@dataclass(frozen=True)
class MixedDatum:
    group: FiniteGroup
    g_zero: frozenset[int]
    tau_prime: int

    @property
    def tau(self) -> int:
        return self.group.mul[self.tau_prime][self.tau_prime]

    def phi(self, x: int) -> int:
        return self.group.conj(self.tau_prime, x)

    def check(self) -> None:
        if self.tau_prime in self.g_zero or self.tau not in self.g_zero:
            raise ValueError("tau' must lie outside G0 with tau = tau'^2 inside")
        if 2 * len(self.g_zero) != self.group.order:
            raise ValueError("G0 is not of index two")


def mixed_admissible(datum: MixedDatum, sigma_c: frozenset[int]) -> bool:
    """Freeness of the mixed action for a G0 vector with stabilizer set sigma_c.

    ``sigma_c`` is given as elements of ``datum.group`` (G0 embedded in G).
    Condition m1: sigma_c and phi(sigma_c) meet only in 1.  Condition m2:
    phi(g) tau g lies outside sigma_c for every g in G0; this equals
    (tau' g)^2, so it also rules out split extensions.
    """
    datum.check()
    G = datum.group
    phi_sigma = {datum.phi(x) for x in sigma_c}
    if (phi_sigma & sigma_c) != {0}:
        return False
    for g in datum.g_zero:
        y = G.mul[datum.tau_prime][g]
        if G.mul[y][y] in sigma_c:
            return False
    return True


def is_split(group: FiniteGroup, g_zero: frozenset[int]) -> bool:
    return any(group.elem_order[x] == 2 for x in range(group.order) if x not in g_zero)
