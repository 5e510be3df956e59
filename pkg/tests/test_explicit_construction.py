import random
from itertools import combinations

import pytest

from apsum.blocks import scheme_for_family, validate_certificate
from apsum.core import public_form, verify_log_sparse
from apsum.errors import BudgetExceededError, UsageError
from apsum.explicit_construction import (
    ExplicitDecomposer,
    build_condenser,
    build_family,
    certify_expansion,
    decompose,
    expansion_lower_bound,
)
from apsum.fields import Field
from apsum.matching import BipartiteGraph, Matching, saturating_matching
from apsum.sumsets import enumerate_sumset_below

ALL_SMALL_Q = [2, 3, 4, 5, 7, 8]


def graph_for(q):
    return build_condenser(Field.of_order(q))


def test_q2_counts_and_degrees():
    g = graph_for(2)
    assert g.a_count == 4 and g.b_count == 8
    for poly in range(g.b_count):
        assert len(g.poly_neighbors(poly)) == 2


@pytest.mark.parametrize("q", ALL_SMALL_Q)
def test_degree_is_q(q):
    g = graph_for(q)
    for poly in range(g.b_count):
        neighbors = g.poly_neighbors(poly)
        assert len(neighbors) == q
        assert len(set(neighbors)) == q


@pytest.mark.parametrize("q", ALL_SMALL_Q + [11, 13, 16])
def test_fixed_ab_partitions_points(q):
    g = graph_for(q)
    for a in range(q):
        for b in range(q):
            seen = set()
            for c in range(q):
                neighbors = set(g.poly_neighbors(g.poly_index(a, b, c)))
                assert not neighbors & seen
                seen |= neighbors
            assert len(seen) == g.a_count


@pytest.mark.parametrize("q", ALL_SMALL_Q)
def test_common_neighbors_at_most_two(q):
    g = graph_for(q)
    masks = [g.neighbor_mask(p) for p in range(g.b_count)]
    for i in range(g.b_count):
        for j in range(i + 1, g.b_count):
            assert (masks[i] & masks[j]).bit_count() <= 2


def test_edge_predicate_matches_neighbor_lists():
    g = graph_for(5)
    for poly in range(0, g.b_count, 7):
        neighbors = set(g.poly_neighbors(poly))
        for point in range(g.a_count):
            assert g.is_edge(poly, point) == (point in neighbors)


def test_expansion_lower_bound_values():
    assert expansion_lower_bound(5, 2) == 8
    assert expansion_lower_bound(3, 1) == 3
    with pytest.raises(UsageError):
        expansion_lower_bound(5, 4)  # above (q+1)/2
    with pytest.raises(UsageError):
        expansion_lower_bound(5, 0)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_exhaustive_min_neighbors_meet_formula(q):
    g = graph_for(q)
    masks = [g.neighbor_mask(p) for p in range(g.b_count)]
    for x in (1, 2):
        worst = None
        for combo in combinations(range(g.b_count), x):
            acc = 0
            for p in combo:
                acc |= masks[p]
            count = acc.bit_count()
            worst = count if worst is None else min(worst, count)
        assert worst >= expansion_lower_bound(q, x)


def test_certify_q3_pairs_margin():
    report = certify_expansion(graph_for(3), 2)
    assert report.ok
    assert report.min_margin == 2  # singletons give 3-1, tight pairs 4-2
    assert report.subsets_checked == 27 + 27 * 26 // 2


def test_certify_budget_and_sampled_determinism():
    with pytest.raises(BudgetExceededError):
        certify_expansion(graph_for(4), 4, budget=100)
    r1 = certify_expansion(graph_for(5), 6, mode="sampled", samples=500, seed=1)
    r2 = certify_expansion(graph_for(5), 6, mode="sampled", samples=500, seed=1)
    assert r1 == r2
    assert r1.ok
    with pytest.raises(UsageError):
        certify_expansion(graph_for(5), 6, mode="sampled", samples=500)  # no seed
    with pytest.raises(UsageError):
        certify_expansion(graph_for(5), 99)


def test_q3_polynomial_pairs_always_saturate():
    g = graph_for(3)
    for pair in combinations(range(g.b_count), 2):
        adjacency = tuple(g.poly_neighbors(p) for p in pair)
        result = saturating_matching(BipartiteGraph(2, g.a_count, adjacency))
        assert isinstance(result, Matching)
        union = set(adjacency[0]) | set(adjacency[1])
        assert len(union) >= 2 * 3 - 2


def test_hall_check_agrees_with_expansion_certification():
    from apsum.matching import hall_check_exhaustive

    g = graph_for(3)
    whole = BipartiteGraph(
        g.b_count, g.a_count, tuple(g.poly_neighbors(p) for p in range(g.b_count))
    )
    assert hall_check_exhaustive(whole, 2) is None
    assert certify_expansion(g, 2).ok


def test_build_family_q2():
    fam, scheme = build_family(Field.of_order(2), "binary")
    assert fam.n == 4 and scheme.m == 1 and scheme.radix == 2
    sumset = enumerate_sumset_below(fam, 4)
    assert set(range(0, 2)) <= set(sumset.members)


def test_build_family_q4_shape_and_coverage():
    fam, scheme = build_family(Field.of_order(4), "binary")
    assert fam.n == 16 and scheme.m == 4 and scheme.w == 2
    pub = public_form(fam)
    members = set(enumerate_sumset_below(pub, pub.offset + 256).members)
    assert set(range(pub.offset, pub.offset + 256)) <= members


@pytest.mark.parametrize("q", [2, 4, 8])
def test_binary_families_are_2_sparse_after_shift(q):
    fam, _ = build_family(Field.of_order(q), "binary")
    for s in public_form(fam).sets:
        assert verify_log_sparse(s.elements, 2)[0]


@pytest.mark.parametrize("q", ALL_SMALL_Q)
def test_base_q_families_are_3_sparse_after_shift(q):
    fam, _ = build_family(Field.of_order(q), "base_q")
    for s in public_form(fam).sets:
        assert verify_log_sparse(s.elements, 3)[0]
        assert verify_log_sparse(s.elements, 2)[0]  # actually 2-sparse too


def test_binary_mode_rejects_non_power_of_two():
    with pytest.raises(UsageError):
        build_family(Field.of_order(5), "binary")
    with pytest.raises(UsageError):
        build_family(Field.of_order(4), "ternary")


def test_decompose_all_zero_digits_gives_empty_certificate():
    fam, scheme = build_family(Field.of_order(4), "binary")
    pub = public_form(fam)
    cert = decompose(pub, pub.offset)
    assert cert.assignments == ()
    validate_certificate(pub, scheme, cert)


def test_decompose_spot_targets_q4():
    fam, scheme = build_family(Field.of_order(4), "binary")
    pub = public_form(fam)
    decomposer = ExplicitDecomposer(pub)
    for target in range(pub.offset, pub.offset + 256, 7):
        cert = decomposer.decompose(target)
        validate_certificate(pub, scheme, cert)
        total = sum(d * scheme.radix ** (b - 1) for b, d, _ in cert.assignments)
        assert total == target - pub.offset


def test_decompose_q8_ten_thousand_random_targets(rng):
    fam, scheme = build_family(Field.of_order(8), "binary")
    pub = public_form(fam)
    assert scheme.range_size == 1 << 48
    decomposer = ExplicitDecomposer(pub)
    for _ in range(10_000):
        target = pub.offset + rng.randrange(scheme.range_size)
        cert = decomposer.decompose(target)
        validate_certificate(pub, scheme, cert)


def test_decompose_range_and_kind_errors():
    fam, scheme = build_family(Field.of_order(4), "binary")
    pub = public_form(fam)
    with pytest.raises(UsageError):
        decompose(pub, pub.offset - 1)
    with pytest.raises(UsageError):
        decompose(pub, pub.offset + scheme.range_size)
    from conftest import random_family

    manual = random_family(random.Random(1), 2)
    with pytest.raises(UsageError):
        decompose(manual, 10)


@pytest.mark.parametrize("q", [2, 4])
def test_cross_oracle_interval_containment(q):
    fam, scheme = build_family(Field.of_order(q), "binary")
    pub = public_form(fam)
    top = pub.offset + scheme.range_size
    members = set(enumerate_sumset_below(pub, top + pub.n * pub.sets[0].max).members)
    assert set(range(pub.offset, top)) <= members


def test_covered_range_is_a_contained_progression():
    from apsum.core import ArithmeticProgression
    from apsum.sumsets import contains_ap

    fam, scheme = build_family(Field.of_order(4), "binary")
    pub = public_form(fam)
    sumset = enumerate_sumset_below(pub, pub.offset + scheme.range_size)
    assert contains_ap(sumset, ArithmeticProgression(pub.offset, 1, 256))


def test_scheme_for_family_roundtrip():
    fam, scheme = build_family(Field.of_order(4), "binary")
    derived = scheme_for_family(fam)
    assert (derived.n, derived.m, derived.radix) == (scheme.n, scheme.m, scheme.radix)
