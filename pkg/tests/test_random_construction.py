import math
import random
from fractions import Fraction

import pytest

from apsum.blocks import BlockScheme, MatchingCertificate, validate_certificate
from apsum.core import LogSparseSet, SetFamily, public_form, verify_log_sparse
from apsum.errors import UsageError
from apsum.random_construction import (
    CoverageFailure,
    coverage_report,
    coverage_targets,
    make_block_scheme,
    sample_family,
    union_bound_probability,
    verify_coverage,
)


def test_scheme_example():
    scheme = make_block_scheme(16, Fraction(1, 2))
    assert (scheme.w, scheme.m, scheme.radix) == (2, 8, 4)
    assert scheme.range_size == 1 << 16


def test_scheme_flooring_small_eps():
    # (1 - eps) * log2(4) < 2 for any eps > 0, so w floors to 1
    scheme = make_block_scheme(4, Fraction(1, 100))
    assert (scheme.w, scheme.m) == (1, 3)
    with pytest.raises(UsageError):
        make_block_scheme(3, Fraction(1, 2))
    with pytest.raises(UsageError):
        make_block_scheme(16, Fraction(0))
    with pytest.raises(UsageError):
        make_block_scheme(16, Fraction(1))


def test_covered_range_within_ideal_exponent():
    # 2^(w m) <= n^((1-eps)^2 n), checked in exact integer arithmetic;
    # holds whenever the one-bit width clamp does not engage, i.e. when
    # n^(1-eps) >= 2
    for n in (4, 8, 16, 27, 64, 100):
        for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(2, 3)):
            scheme = make_block_scheme(n, eps)
            p, d = eps.numerator, eps.denominator
            if n ** (d - p) < 2**d:
                continue  # clamped: ideal width below one bit
            lhs = 2 ** (scheme.w * scheme.m * d * d)
            rhs = n ** ((d - p) * (d - p) * n)
            assert lhs <= rhs


def test_digit_sets():
    scheme = make_block_scheme(16, Fraction(1, 2))
    assert scheme.digit_set(1) == (1, 2, 3)
    assert scheme.digit_set(2) == (4, 8, 12)
    assert len(scheme.digit_set(5)) == scheme.radix - 1


def test_sample_sizes_and_determinism():
    scheme = make_block_scheme(16, Fraction(1, 2))
    fam1 = sample_family(scheme, 42)
    fam2 = sample_family(scheme, 42)
    assert all(len(s) == scheme.m + 1 for s in fam1.sets)
    assert tuple(s.elements for s in fam1.sets) == tuple(s.elements for s in fam2.sets)
    other = sample_family(scheme, 43)
    assert tuple(s.elements for s in fam1.sets) != tuple(s.elements for s in other.sets)
    with pytest.raises(UsageError):
        sample_family(scheme, -1)
    with pytest.raises(UsageError):
        sample_family(scheme, 1 << 64)


def test_sampled_families_are_2_sparse_after_shift():
    for n, eps, seed in ((16, Fraction(1, 2), 7), (32, Fraction(1, 4), 3)):
        scheme = make_block_scheme(n, eps)
        pub = public_form(sample_family(scheme, seed))
        for s in pub.sets:
            assert verify_log_sparse(s.elements, 2)[0]


def test_union_bound_small_n_frozen_values():
    # exact sum for n=4, eps=1/2: m=2, D=2; terms 0.25 + 0.25
    report = union_bound_probability(make_block_scheme(4, Fraction(1, 2)))
    assert math.isclose(math.exp(report.ideal_log_sum), 0.5, rel_tol=1e-9)
    # w = 1 means one digit value per block: the drawn element is forced,
    # a miss is impossible, and the substituted bound is exactly zero
    assert report.substituted_log_sum == -math.inf


def test_union_bound_sum_dominates_each_term():
    report = union_bound_probability(make_block_scheme(64, Fraction(1, 2)))
    assert report.ideal_log_sum >= max(report.ideal_log_terms)
    assert all(t <= 0 or True for t in report.ideal_log_terms)


def test_union_bound_majorant_dominates():
    for n in (16, 64, 256):
        report = union_bound_probability(make_block_scheme(n, Fraction(1, 2)))
        for k, term in enumerate(report.ideal_log_terms, start=1):
            assert term <= k * report.majorant_log_ratio + 1e-9
        assert report.ideal_log_sum <= report.majorant_truncated_log_sum
        assert report.substituted_log_sum <= report.ideal_log_sum
        assert report.majorant_geometric_log_sum == math.inf  # ratio > 1 here


def test_union_bound_smallest_n_below_one():
    """Sweep powers of 2 at eps = 1/2.  The literal sum is not monotone:
    it is below 1 at n=4, above 1 for n=8..32, and below 1 from n=64 on."""
    sums = {}
    for exp in range(2, 10):
        n = 1 << exp
        report = union_bound_probability(make_block_scheme(n, Fraction(1, 2)))
        sums[n] = report.ideal_log_sum
    below_one = [n for n, s in sorted(sums.items()) if s < 0.0]
    assert below_one == [4, 64, 128, 256, 512]
    smallest_stable = min(n for n in sums if all(sums[m] < 0 for m in sums if m >= n))
    assert smallest_stable == 64


def manual_family(rows, n, c=2):
    sets = tuple(LogSparseSet(row, sparsity_c=c, allow_zero=True) for row in rows)
    return SetFamily(
        sets, provenance={"kind": "manual", "sparsity_c": c}, offset=0, pre_shift=True
    )


def test_digit_decomposition_roundtrip(rng):
    scheme = make_block_scheme(16, Fraction(1, 2))
    for _ in range(1000):
        value = rng.randrange(scheme.range_size)
        digits = scheme.decompose_digits(value)
        assert scheme.compose_digits(digits) == value
        assert all(0 <= d < scheme.radix for d in digits)


def test_coverage_zero_target_and_certificates():
    scheme = make_block_scheme(8, Fraction(1, 2))  # w=1, m=4, range 16
    fam = sample_family(scheme, 5)
    targets = coverage_targets(fam, scheme, exhaustive=True)
    assert targets[0] == 0
    outcomes = verify_coverage(fam, scheme, targets)
    by_target = dict(outcomes)
    cert = by_target[0]
    assert isinstance(cert, MatchingCertificate)
    assert all(a.digit == 0 for a in cert.assignments)
    for target, outcome in outcomes:
        if isinstance(outcome, MatchingCertificate):
            validate_certificate(fam, scheme, outcome, require_all_blocks=True)


def test_coverage_hall_failure_witness():
    # two blocks whose only digits live in set 0: targets needing both fail
    scheme = BlockScheme(n=4, m=2, radix=2)
    fam = manual_family([(0, 1, 2), (0,), (0,), (0,)], n=4)
    outcomes = dict(verify_coverage(fam, scheme, [0, 1, 2, 3]))
    assert isinstance(outcomes[0], MatchingCertificate)
    assert isinstance(outcomes[1], MatchingCertificate)
    assert isinstance(outcomes[2], MatchingCertificate)
    failure = outcomes[3]
    assert isinstance(failure, CoverageFailure)
    assert failure.witness_blocks == (1, 2)
    assert failure.witness_sets == (0,)
    report = coverage_report(verify_coverage(fam, scheme, [0, 1, 2, 3]))
    assert report == {
        "targets_checked": 4,
        "covered": 3,
        "failures": [{"target": "3", "hall_witness": [1, 2]}],
    }


def test_coverage_monotone_under_deletion(rng):
    scheme = make_block_scheme(8, Fraction(1, 2))
    fam = sample_family(scheme, 11)
    targets = coverage_targets(fam, scheme, exhaustive=True)
    covered = {
        t for t, o in verify_coverage(fam, scheme, targets) if not isinstance(o, CoverageFailure)
    }
    for trial in range(5):
        j = rng.randrange(fam.n)
        victim = rng.choice([e for e in fam.sets[j].elements if e != 0])
        rows = [
            tuple(e for e in s.elements if not (i == j and e == victim))
            for i, s in enumerate(fam.sets)
        ]
        smaller = manual_family(rows, n=fam.n)
        still_covered = {
            t
            for t, o in verify_coverage(smaller, scheme, targets)
            if not isinstance(o, CoverageFailure)
        }
        assert still_covered <= covered


def test_coverage_threads_deterministic():
    scheme = make_block_scheme(8, Fraction(1, 2))
    fam = sample_family(scheme, 9)
    targets = coverage_targets(fam, scheme, exhaustive=True)
    serial = coverage_report(verify_coverage(fam, scheme, targets, threads=1))
    parallel = coverage_report(verify_coverage(fam, scheme, targets, threads=2))
    assert serial == parallel


def test_coverage_target_selection():
    scheme = make_block_scheme(8, Fraction(1, 2))
    fam = sample_family(scheme, 9)
    sampled = coverage_targets(fam, scheme, samples=10, seed=7)
    assert sampled == coverage_targets(fam, scheme, samples=10, seed=7)
    assert sampled == sorted(set(sampled))
    with pytest.raises(UsageError):
        coverage_targets(fam, scheme, samples=10)  # no seed
    with pytest.raises(UsageError):
        coverage_targets(fam, scheme)
    with pytest.raises(UsageError):
        verify_coverage(fam, scheme, [scheme.range_size])  # out of range
