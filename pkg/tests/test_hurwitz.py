from __future__ import annotations

import pytest

import oracles
from isoclass.catalog import construct_named
from isoclass.classify import index_two_subgroups
from isoclass.errors import BadMoveForFamily, NotIndexTwo, OrbitBudgetExceeded
from isoclass.genvec import GeneratingVector, SignatureType, count_generating_vectors, first_vector, iter_vectors
from isoclass.hurwitz import (
    APPENDIX,
    THEOREM,
    ActionSpec,
    OrbitCache,
    VectorSet,
    apply_automorphism,
    apply_move,
    component_count_direct,
    component_count_mixed,
    component_count_unmixed,
    count_compatible_pairs,
    family_of,
    move_ids,
    orbit,
    orbit_representatives,
    side_orbits,
)

S = SignatureType.parse


def test_family_of():
    assert family_of(S("(0|2,3,8)")) == "sphere"
    assert family_of(S("(1|3)")) == "torus1"
    assert family_of(S("(1|2,2)")) == "torus2"
    assert family_of(S("(2|-)")) == "genus2"
    for bad in ("(1|2,3)", "(1|-)", "(3|-)", "(2|2)"):
        with pytest.raises(BadMoveForFamily):
            family_of(S(bad))


def test_move_counts_per_family():
    assert move_ids(S("(2|-)")) == [1, 2, 3, 4, 5]
    assert move_ids(S("(0|2,2,3,3)")) == [1, 2, 3]
    assert move_ids(S("(1|3)")) == [1, 2]
    assert move_ids(S("(1|2,2)")) == [1, 2, 3, 4]


def test_genus2_move_1_formula():
    g = construct_named("S3")
    t = first_vector(g, S("(2|-)"))
    a1, b1, a2, b2 = t
    out = apply_move(GeneratingVector(g, S("(2|-)"), t), 1).entries
    assert out == (a1, g.mul[b1][a1], a2, b2)


def test_sphere_move_formula():
    g = construct_named("S3")
    sig = S("(0|2,2,3,3)")
    t = next(iter_vectors(g, sig, "unordered"))
    out = apply_move(GeneratingVector(g, sig, t), 2).entries
    c2, c3 = t[1], t[2]
    assert out == (t[0], c3, oracles.mul(g, g.inv[c3], c2, c3), t[3])


def test_moves_fix_vectors_over_trivial_group():
    g = construct_named("Z1")
    v = GeneratingVector(g, S("(2|-)"), (0, 0, 0, 0))
    for k in move_ids(v.sig):
        assert apply_move(v, k) == v


def test_bad_move_id():
    g = construct_named("Z3")
    v = GeneratingVector(g, S("(1|3)"), first_vector(g, S("(1|3)")))
    with pytest.raises(BadMoveForFamily):
        apply_move(v, 5)


def test_automorphism_image_is_a_vector():
    g = construct_named("Q8")
    sig = S("(0|4^3)")
    v = GeneratingVector(g, sig, first_vector(g, sig))
    for a in g.automorphisms:
        w = apply_automorphism(v, a)
        assert w.entries in set(iter_vectors(g, sig))


# -- orbits -----------------------------------------------------------------------

def test_orbit_of_z2_genus2_vectors():
    g = construct_named("Z2")
    sig = S("(2|-)")
    o = orbit(g, (1, 0, 0, 0), ActionSpec.for_signature(sig), sig)
    assert len(o) == 15 and o.representative == (0, 0, 0, 1)
    # idempotent: the orbit of any member is the same set
    assert orbit(g, next(iter(o.members)), ActionSpec.for_signature(sig), sig).members == o.members


def test_orbit_family_mismatch():
    g = construct_named("Z2")
    with pytest.raises(BadMoveForFamily):
        orbit(g, (1, 0, 0, 0), ActionSpec.for_signature(S("(0|2,2)")), S("(2|-)"))


def test_orbit_budget():
    g = construct_named("S3")
    sig = S("(2|-)")
    with pytest.raises(OrbitBudgetExceeded):
        orbit(g, first_vector(g, sig), ActionSpec.for_signature(sig), sig, budget=10)


@pytest.mark.parametrize(
    "name, sig, inner, aut, total, count",
    [
        ("Z1", "(2|-)", False, False, 1, 1),
        ("Z2", "(2|-)", False, True, 15, 1),
        ("Z3", "(0|3^4)", False, True, 6, 1),
        ("Z2xZ2", "(0|2^5)", False, False, 60, 3),
        ("Z2xZ2", "(0|2^5)", False, True, 60, 1),
        ("GL(2,3)", "(0|2,3,8)", False, False, 288, 2),
        ("GL(2,3)", "(0|2,3,8)", True, False, 288, 2),
        ("GL(2,3)", "(0|2,3,8)", False, True, 288, 1),
    ],
)
def test_orbit_partitions(name, sig, inner, aut, total, count):
    g, s = construct_named(name), S(sig)
    part = orbit_representatives(g, s, ActionSpec.for_signature(s, inner, aut))
    assert part.total == total == count_generating_vectors(g, s, "unordered" if s.g_prime == 0 else "ordered")
    assert part.count == count
    # each representative is the least member of its orbit
    for rep in part.representatives:
        assert orbit(g, rep, ActionSpec.for_signature(s, inner, aut), s).representative == rep


def test_orbit_cache_round_trip(tmp_path):
    g = construct_named("D4")
    sig = S("(0|2,2,2,4)")
    spec = ActionSpec.for_signature(sig, False, True)
    cache = OrbitCache(tmp_path)
    cold = orbit_representatives(g, sig, spec, cache=cache)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    warm = orbit_representatives(g, sig, spec, cache=cache)
    assert warm == cold
    assert cache.get(g, sig, spec.tag()) == cold


def test_orbit_cache_detects_stale_table(tmp_path):
    sig = S("(0|2,2,2,2)")
    spec = ActionSpec.for_signature(sig)
    cache = OrbitCache(tmp_path)
    a = construct_named("Z2xZ2")
    orbit_representatives(a, sig, spec, cache=cache)
    assert cache.get(a, sig, spec.tag()) is not None
    # same label, different table
    other = construct_named("Z4")
    other.label = a.label
    assert cache.get(other, sig, spec.tag()) is None


# -- pair counting ---------------------------------------------------------------------

def test_compatible_pairs_examples():
    z2 = construct_named("Z2")
    n6 = count_generating_vectors(z2, S("(0|2^6)"))
    assert count_compatible_pairs(z2, S("(2|-)"), S("(0|2^6)")) == 15 * n6 == 15
    assert count_compatible_pairs(z2, S("(0|2,2,2)"), S("(2|-)")) == 0


@pytest.mark.parametrize(
    "name, sig1, sig2",
    [("Z2xZ2", "(2|-)", "(0|2^5)"), ("S3", "(1|2,2)", "(1|3)"), ("D4", "(1|2,2)", "(1|2)"), ("Z4", "(2|-)", "(0|2,2,4,4)")],
)
def test_compatible_pairs_against_brute_force(name, sig1, sig2):
    g, s1, s2 = construct_named(name), S(sig1), S(sig2)
    mode = lambda s: "unordered" if s.g_prime == 0 else "ordered"  # noqa: E731
    v1 = list(iter_vectors(g, s1, mode(s1)))
    v2 = list(iter_vectors(g, s2, mode(s2)))
    want = sum(
        1
        for a in v1
        for b in v2
        if oracles.stabilizer_set(g, s1.g_prime, a) & oracles.stabilizer_set(g, s2.g_prime, b) == {0}
    )
    assert count_compatible_pairs(g, s1, s2) == want


# -- component counts ------------------------------------------------------------------

@pytest.mark.parametrize(
    "name, sig1, sig2, n",
    [
        ("Z2xZ6", "(2|-)", "(0|2,6^2)", 2),
        ("D4", "(1|2)", "(1|2,2)", 1),
        ("Z2xZ2", "(2|-)", "(0|2^5)", 2),
        ("S3", "(1|2,2)", "(1|3)", 1),
    ],
)
@pytest.mark.parametrize("policy", [THEOREM, APPENDIX])
def test_component_counts(name, sig1, sig2, n, policy):
    g, s1, s2 = construct_named(name), S(sig1), S(sig2)
    count = component_count_unmixed(g, s1, s2, policy)
    assert count.n == n
    assert component_count_direct(g, s1, s2, policy) == n
    cert = count.certificate
    assert cert.lower_bound <= n <= cert.candidate_pairs


def test_certificate_records_decisions():
    g = construct_named("Z2xZ6")
    cert = component_count_unmixed(g, S("(2|-)"), S("(0|2,6^2)")).certificate
    assert cert.decisions and all(d.rule.startswith(("lemma-ii", "escalated")) for d in cert.decisions)
    assert g.label in cert.summary()


def test_mixed_count_z4():
    z4 = construct_named("Z4")
    (g0,) = index_two_subgroups(z4)
    assert component_count_mixed(z4, g0, S("(2|-)")) == 1


def test_mixed_count_trivial_subgroup():
    z2 = construct_named("Z2")
    assert component_count_mixed(z2, {0}, S("(2|-)")) == 1


def test_mixed_count_rejects_non_index_two():
    with pytest.raises(NotIndexTwo):
        component_count_mixed(construct_named("Z4"), {0}, S("(2|-)"))


def test_side_orbit_sizes_sum_to_vector_count():
    g = construct_named("D4")
    sig = S("(2|-)")
    vs = VectorSet.enumerate(g, sig)
    side = side_orbits(vs, ActionSpec.for_signature(sig, True, False))
    assert int(side.sizes.sum()) == len(vs)
