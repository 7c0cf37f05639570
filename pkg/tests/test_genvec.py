from __future__ import annotations

from fractions import Fraction

import pytest

import oracles
from isoclass.catalog import construct_named
from isoclass.errors import GroupMismatch, IdentityElement, LengthMismatch, NotCoprime, WorkBudgetExceeded
from isoclass.genvec import (
    ORDERED,
    UNORDERED,
    GeneratingVector,
    SignatureType,
    are_disjoint,
    count_generating_vectors,
    exists_admissible_epimorphism,
    first_vector,
    fix_count,
    fix_count_rotation,
    fixed_point_model,
    is_generating_vector,
    iter_vectors,
    parse_vector_line,
    stabilizer_set,
)

S = SignatureType.parse


def _of_order(group, k):
    return [x for x in range(group.order) if group.elem_order[x] == k]


# -- signatures ----------------------------------------------------------------

def test_signature_parsing_and_printing():
    assert S("(0|2^6)") == SignatureType(0, (2,) * 6)
    assert S("0|2,3,8").periods == (2, 3, 8)
    assert S("(2|-)") == SignatureType(2)
    assert str(S("(1|4,2)")) == "(1|2,4)"
    assert S("(0|2,2,4,4)").compact() == "2^2,4^2"
    assert S("(0|2,3,7)").hurwitz_rhs() == Fraction(1, 42)
    for bad in ("0,2,3", "(0|1,2)", "(0|x)", "(-1|2)"):
        with pytest.raises(ValueError):
            S(bad)


def test_vector_line_round_trip():
    g = construct_named("Z2")
    v = GeneratingVector(g, S("(0|2^6)"), (1,) * 6)
    assert parse_vector_line(v.serialize()) == ("Z2", v.sig, v.entries)


# -- predicates -------------------------------------------------------------------

def test_is_generating_vector_examples():
    z2 = construct_named("Z2")
    assert is_generating_vector(z2, S("(0|2^6)"), (1,) * 6)
    assert not is_generating_vector(z2, S("(2|-)"), (0, 0, 0, 0))
    assert is_generating_vector(construct_named("Z1"), S("(2|-)"), (0, 0, 0, 0))
    q8 = construct_named("Q8")
    i = _of_order(q8, 4)[0]
    j = next(y for y in _of_order(q8, 4) if y not in q8.cyclic_subgroup(i))
    k = q8.inv[q8.mul[i][j]]
    assert is_generating_vector(q8, S("(0|4^3)"), (i, j, k))
    with pytest.raises(LengthMismatch):
        is_generating_vector(z2, S("(0|2^6)"), (1, 1))


def test_unordered_mode_accepts_any_period_order():
    z6 = construct_named("Z6")
    two, three = _of_order(z6, 2)[0], _of_order(z6, 3)[0]
    six = z6.inv[z6.mul[two][three]]
    sig = S("(0|2,3,6)")
    assert is_generating_vector(z6, sig, (two, three, six))
    assert not is_generating_vector(z6, sig, (three, two, six))
    assert is_generating_vector(z6, sig, (three, two, six), UNORDERED)


# -- enumeration ----------------------------------------------------------------------

def test_z2_genus2_vectors():
    assert count_generating_vectors(construct_named("Z2"), S("(2|-)")) == 15


def test_z3_two_branch_points():
    z3 = construct_named("Z3")
    a, b = _of_order(z3, 3)
    assert sorted(iter_vectors(z3, S("(0|3,3)"))) == sorted([(a, b), (b, a)])


def test_z5_includes_1_2_2():
    z5 = construct_named("Z5")
    x = 1
    assert (x, z5.power(x, 2), z5.power(x, 2)) in set(iter_vectors(z5, S("(0|5^3)")))


CASES = [
    ("Z2", "(2|-)"),
    ("Z2xZ2", "(0|2^5)"),
    ("Z4", "(0|2,2,4,4)"),
    ("S3", "(0|2,2,3,3)"),
    ("S3", "(1|3)"),
    ("Q8", "(0|4^3)"),
    ("D4", "(1|2)"),
    ("D4", "(0|2,2,2,4)"),
    ("Z2xZ2", "(1|2,2)"),
    ("Z3", "(1|-)"),
    ("A4", "(1|2)"),
]


@pytest.mark.parametrize("name, sig", CASES)
def test_enumeration_matches_brute_force(name, sig):
    g, s = construct_named(name), S(sig)
    want = oracles.generating_vectors(g, s.g_prime, s.periods)
    got = list(iter_vectors(g, s))
    assert got == sorted(want)
    want_u = oracles.generating_vectors(g, s.g_prime, s.periods, ordered=False)
    assert sorted(iter_vectors(g, s, UNORDERED)) == sorted(want_u)


def test_existence_examples(catalog):
    assert exists_admissible_epimorphism(construct_named("GL(2,3)"), S("(2|-)"))
    assert not exists_admissible_epimorphism(construct_named("Z2xZ2xZ2"), S("(0|2,2)"))
    assert first_vector(construct_named("Z9"), S("(0|3,3,9)")) is None


def test_work_budget():
    with pytest.raises(WorkBudgetExceeded):
        list(iter_vectors(construct_named("GL(2,3)"), S("(2|-)"), budget=1000))


# -- stabilizer sets ------------------------------------------------------------------

@pytest.mark.parametrize("name, sig", CASES)
def test_stabilizer_sets_match_brute_force(name, sig):
    g, s = construct_named(name), S(sig)
    for t in list(iter_vectors(g, s))[:50]:
        assert stabilizer_set(GeneratingVector(g, s, t)) == oracles.stabilizer_set(g, s.g_prime, t)


def test_stabilizer_set_without_branch_points():
    g = construct_named("Z2")
    assert stabilizer_set(GeneratingVector(g, S("(2|-)"), (1, 0, 0, 0))) == {0}


def test_d4_stabilizer_set():
    d4 = construct_named("D4")
    (x2,) = [z for z in d4.center if z]
    refl = [y for y in _of_order(d4, 2) if y != x2]
    # a vector with c-entries x^2, y, x^2 y for a reflection y
    y = refl[0]
    x2y = d4.mul[x2][y]
    c = (x2, y, x2y)
    sig = S("(0|2,2,2)")
    # (0|2,2,2) does not generate D4; the set is computed for any tuple
    got = stabilizer_set(GeneratingVector(d4, sig, c))
    want = {0, x2} | set(d4.conjugacy_classes[d4.class_index[y]]) | set(d4.conjugacy_classes[d4.class_index[x2y]])
    assert got == want == oracles.stabilizer_set(d4, 0, c)
    assert len(got) == 4 and d4.class_index[y] == d4.class_index[x2y]


def test_s3_stabilizer_set_type_1_3():
    s3 = construct_named("S3")
    t = first_vector(s3, S("(1|3)"))
    assert stabilizer_set(GeneratingVector(s3, S("(1|3)"), t)) == {0, *_of_order(s3, 3)}


def test_disjointness_examples():
    z4 = construct_named("Z4")
    (inv2,) = _of_order(z4, 2)
    v = GeneratingVector(z4, S("(0|2,2,4,4)"), first_vector(z4, S("(0|2,2,4,4)")))
    w = GeneratingVector(z4, S("(1|2,2)"), (1, 0, inv2, inv2))
    assert not are_disjoint(v, w)
    z2 = construct_named("Z2")
    u = GeneratingVector(z2, S("(2|-)"), (1, 0, 0, 0))
    assert are_disjoint(u, GeneratingVector(z2, S("(0|2^6)"), (1,) * 6))
    with pytest.raises(GroupMismatch):
        are_disjoint(u, v)


# -- fixed points -------------------------------------------------------------------------

def test_fix_count_examples():
    z2 = construct_named("Z2")
    assert fix_count(GeneratingVector(z2, S("(0|2^6)"), (1,) * 6), 1) == 6
    a4 = construct_named("A4")
    v = GeneratingVector(a4, S("(1|2)"), first_vector(a4, S("(1|2)")))
    assert fix_count(v, v.elliptic[0]) == 2
    q8 = construct_named("Q8")
    w = GeneratingVector(q8, S("(1|2)"), first_vector(q8, S("(1|2)")))
    assert fix_count(w, _of_order(q8, 2)[0]) == 4
    with pytest.raises(IdentityElement):
        fix_count(w, 0)


def test_fix_count_rotation_s3():
    s3 = construct_named("S3")
    v = GeneratingVector(s3, S("(1|3)"), first_vector(s3, S("(1|3)")))
    for c in _of_order(s3, 3):
        assert fix_count_rotation(v, c, 1) == fix_count_rotation(v, c, 2) == 1
    with pytest.raises(NotCoprime):
        fix_count_rotation(v, _of_order(s3, 3)[0], 3)


def test_fixed_point_model_examples():
    z2 = construct_named("Z2")
    m = fixed_point_model(GeneratingVector(z2, S("(0|2^6)"), (1,) * 6))
    assert len(m.points) == 6 and all(p.stabilizer_gen == 1 for p in m.points)
    a4 = construct_named("A4")
    v = GeneratingVector(a4, S("(1|2)"), first_vector(a4, S("(1|2)")))
    pts = fixed_point_model(v).points
    assert len(pts) == 6
    gens = sorted(p.stabilizer_gen for p in pts)
    assert sorted(set(gens)) == sorted(_of_order(a4, 2))
    assert all(gens.count(x) == 2 for x in set(gens))
    assert fixed_point_model(GeneratingVector(z2, S("(2|-)"), (1, 0, 0, 0))).points == ()


def test_fix_count_matches_coset_oracle():
    for name, sig in CASES:
        g, s = construct_named(name), S(sig)
        for t in list(iter_vectors(g, s, ORDERED))[:10]:
            v = GeneratingVector(g, s, t)
            for c in range(1, g.order):
                assert fix_count(v, c) == oracles.fixed_points(g, s.g_prime, t, c)
