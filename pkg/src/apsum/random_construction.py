"""Randomized family construction with progression-rich sumsets.

Split the bit positions below w*m into m blocks of w bits, where
w = max(1, floor((1-eps)*log2 n)) and m = min(n, floor((1-eps)*n)).
Block i's digit set holds the values d * 2^((i-1)w) for d in [1, 2^w).
Each of the n sets draws one uniform value from every block's digit set,
plus the element 0, giving sets of size m+1 that are 2-log-sparse: one
element per block, and only adjacent blocks can share a dyadic window.

An integer below 2^(w*m) splits uniquely into its block digits; it lies
in the sumset exactly when the nonzero digits can be matched injectively
to sets containing them, which Hall's condition characterizes.  The
union-bound evaluator computes the standard failure-probability bound
for this random experiment; full coverage is only guaranteed for large
n, so coverage here is reported per target with certificates for hits
and Hall witnesses for misses.
"""

from __future__ import annotations

import hashlib
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import repeat
from typing import Iterable, Sequence

from .blocks import BlockScheme, CertAssignment, MatchingCertificate, validate_certificate
from .core import LogSparseSet, SetFamily
from .errors import UsageError
from .matching import BipartiteGraph, HallViolation, saturating_matching

__all__ = [
    "make_block_scheme",
    "sample_family",
    "UnionBoundReport",
    "union_bound_probability",
    "CoverageFailure",
    "TargetOutcome",
    "coverage_targets",
    "verify_coverage",
    "coverage_report",
]

MAX_SEED = 1 << 64


def make_block_scheme(n: int, eps: Fraction) -> BlockScheme:
    """Block width and count for given n and eps, floored to integers.

    w is the largest integer with 2^(w*d) <= n^(d - p) for eps = p/d,
    i.e. floor((1-eps)*log2 n), computed exactly; the covered range
    [0, 2^(w*m)) is then a subrange of the ideal real-parameter one.
    When n^(1-eps) < 2 the ideal width is below one bit and w clamps up
    to 1, in which case the covered range can exceed the ideal one.
    """
    if n < 4:
        raise UsageError(f"need n >= 4, got {n}")
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise UsageError(f"eps must lie strictly between 0 and 1, got {eps}")
    p, d = eps.numerator, eps.denominator
    w = 1
    while (1 << ((w + 1) * d)) <= n ** (d - p):
        w += 1
    m = min(n, (d - p) * n // d)
    return BlockScheme(n=n, m=m, radix=1 << w, eps=eps)


def _draw_digit(seed: int, set_index: int, block: int, radix: int) -> int:
    """Uniform digit in [1, radix), keyed by (seed, set, block) so the
    draw is independent of iteration order and thread count."""
    key_bytes = hashlib.sha256(
        f"apsum:random:{seed}:{set_index}:{block}".encode()
    ).digest()
    rng = random.Random(int.from_bytes(key_bytes, "big"))
    return rng.randrange(1, radix)


def sample_family(scheme: BlockScheme, seed: int) -> SetFamily:
    """Draw the random family for a scheme; pre-shift (every set keeps 0)."""
    if not 0 <= seed < MAX_SEED:
        raise UsageError("seed must be a 64-bit value")
    if scheme.eps is None:
        raise UsageError("scheme lacks eps; build it with make_block_scheme")
    sets = []
    for j in range(1, scheme.n + 1):
        elements = {0}
        for i in range(1, scheme.m + 1):
            digit = _draw_digit(seed, j, i, scheme.radix)
            elements.add(scheme.block_value(i, digit))
        sets.append(LogSparseSet(tuple(sorted(elements)), sparsity_c=2, allow_zero=True))
    provenance = {
        "kind": "random",
        "n": scheme.n,
        "eps": str(scheme.eps),
        "seed": seed,
        "w": scheme.w,
        "m": scheme.m,
        "sparsity_c": 2,
    }
    return SetFamily(tuple(sets), provenance=provenance, offset=0, pre_shift=True)


def _log_comb(n: int, k: int) -> float:
    return math.log(math.comb(n, k))


def _logsumexp(values: Sequence[float]) -> float:
    finite = [v for v in values if v != -math.inf]
    if not finite:
        return -math.inf
    top = max(finite)
    return top + math.log(sum(math.exp(v - top) for v in finite))


def _union_bound_terms(n: int, m: int, digit_count: float) -> list[float]:
    """Log of sum_k C(m,k) * D^k * C(n, n-k+1) * (1 - 1/D)^(k(n-k+1)),
    term by term.  D = 1 makes every miss impossible, so each term is 0
    (log -inf)."""
    if digit_count <= 1.0:
        return [-math.inf] * m
    log_miss = math.log1p(-1.0 / digit_count)
    log_d = math.log(digit_count)
    return [
        _log_comb(m, k) + k * log_d + _log_comb(n, n - k + 1) + k * (n - k + 1) * log_miss
        for k in range(1, m + 1)
    ]


@dataclass(frozen=True)
class UnionBoundReport:
    """Log-space failure-probability bounds for a scheme.

    ``ideal`` uses n^(1-eps) as the per-block digit count, as in
    the ideal real-parameter analysis; ``substituted`` uses the actual
    floored digit count 2^w - 1.  The majorant is sum_k r^k with
    r = n^3 * exp(-eps * n^eps), reported both truncated at k = m and as
    the full geometric series (infinite when r >= 1).
    """

    n: int
    eps: Fraction
    w: int
    m: int
    ideal_log_terms: tuple[float, ...]
    substituted_log_terms: tuple[float, ...]
    majorant_log_ratio: float

    @property
    def ideal_log_sum(self) -> float:
        return _logsumexp(self.ideal_log_terms)

    @property
    def substituted_log_sum(self) -> float:
        return _logsumexp(self.substituted_log_terms)

    @property
    def majorant_truncated_log_sum(self) -> float:
        return _logsumexp([k * self.majorant_log_ratio for k in range(1, self.m + 1)])

    @property
    def majorant_geometric_log_sum(self) -> float:
        r = self.majorant_log_ratio
        if r >= 0.0:
            return math.inf
        return r - math.log1p(-math.exp(r))


def union_bound_probability(scheme: BlockScheme) -> UnionBoundReport:
    """Evaluate the failure-probability union bound for a scheme.

    Per-term relative accuracy is far below 1e-9: every factor is a log
    of an exact integer or a log1p of an exact rational.
    """
    if scheme.eps is None:
        raise UsageError("scheme lacks eps; build it with make_block_scheme")
    n, m, eps = scheme.n, scheme.m, scheme.eps
    literal_digit_count = math.exp((1.0 - float(eps)) * math.log(n))
    ratio = 3.0 * math.log(n) - float(eps) * math.exp(float(eps) * math.log(n))
    return UnionBoundReport(
        n=n,
        eps=eps,
        w=scheme.w,
        m=m,
        ideal_log_terms=tuple(_union_bound_terms(n, m, literal_digit_count)),
        substituted_log_terms=tuple(_union_bound_terms(n, m, float(scheme.radix - 1))),
        majorant_log_ratio=ratio,
    )


@dataclass(frozen=True)
class CoverageFailure:
    """Hall witness for an uncovered target: the listed blocks' digits
    collectively fit into fewer sets than there are blocks."""

    target: int
    witness_blocks: tuple[int, ...]
    witness_sets: tuple[int, ...]


TargetOutcome = tuple[int, "MatchingCertificate | CoverageFailure"]


def _membership_index(family: SetFamily) -> tuple[dict[int, list[int]], list[int]]:
    """Map pre-shift element value -> sorted set indices containing it,
    plus the indices of sets containing the zero element."""
    shift = family.per_set_shift
    by_value: dict[int, list[int]] = {}
    zero_sets: list[int] = []
    for j, s in enumerate(family.sets):
        for e in s.elements:
            v = e - shift
            if v < 0:
                raise UsageError("family offset exceeds some element")
            if v == 0:
                zero_sets.append(j)
            else:
                by_value.setdefault(v, []).append(j)
    return by_value, zero_sets


def _verify_one(
    family: SetFamily,
    scheme: BlockScheme,
    by_value: dict[int, list[int]],
    zero_sets: list[int],
    target: int,
) -> TargetOutcome:
    relative = target - family.offset
    if not 0 <= relative < scheme.range_size:
        raise UsageError(f"target {target} outside the covered range")
    digits = scheme.decompose_digits(relative)
    rows = []
    for i, d in enumerate(digits, start=1):
        if d == 0:
            rows.append(tuple(zero_sets))
        else:
            rows.append(tuple(by_value.get(scheme.block_value(i, d), ())))
    graph = BipartiteGraph(scheme.m, family.n, tuple(rows))
    result = saturating_matching(graph)
    if isinstance(result, HallViolation):
        return target, CoverageFailure(
            target,
            tuple(b + 1 for b in result.left_set),
            result.neighbors,
        )
    assignment = result.as_dict()
    cert = MatchingCertificate(
        target,
        family.offset,
        tuple(
            CertAssignment(i, digits[i - 1], assignment[i - 1])
            for i in range(1, scheme.m + 1)
        ),
    )
    validate_certificate(family, scheme, cert, require_all_blocks=True)
    return target, cert


def _coverage_chunk(family, scheme, targets):
    by_value, zero_sets = _membership_index(family)
    return [_verify_one(family, scheme, by_value, zero_sets, t) for t in targets]


def coverage_targets(
    family: SetFamily,
    scheme: BlockScheme,
    exhaustive: bool = False,
    samples: int | None = None,
    seed: int | None = None,
    exhaustive_budget: int = 1 << 20,
) -> list[int]:
    """The sorted target list for a coverage sweep (absolute values)."""
    lo = family.offset
    size = scheme.range_size
    if exhaustive:
        if size > exhaustive_budget:
            raise UsageError(
                f"exhaustive sweep over {size} targets exceeds the budget "
                f"{exhaustive_budget}; use sampling"
            )
        return list(range(lo, lo + size))
    if samples is None or samples < 1:
        raise UsageError("need --exhaustive or a positive sample count")
    if seed is None:
        raise UsageError("sampled coverage requires an explicit seed")
    rng = random.Random(seed)
    return sorted({lo + rng.randrange(size) for _ in range(samples)})


def verify_coverage(
    family: SetFamily,
    scheme: BlockScheme,
    targets: Iterable[int],
    threads: int = 1,
) -> list[TargetOutcome]:
    """Certificate or Hall witness for each target, in input order.

    Every certificate is re-validated (injectivity, membership, exact
    sum) before being returned; every witness has already survived the
    neighbor recount inside the matcher.  With threads > 1 the targets
    are processed in parallel chunks whose results are concatenated in
    order, so the outcome is independent of the thread count.
    """
    target_list = list(targets)
    if threads > 1 and len(target_list) > 1:
        chunk = max(1, math.ceil(len(target_list) / (threads * 4)))
        chunks = [target_list[i : i + chunk] for i in range(0, len(target_list), chunk)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_coverage_chunk, repeat(family), repeat(scheme), chunks)
            out: list[TargetOutcome] = []
            for part in parts:
                out.extend(part)
            return out
    by_value, zero_sets = _membership_index(family)
    return [_verify_one(family, scheme, by_value, zero_sets, t) for t in target_list]


def coverage_report(outcomes: Iterable[TargetOutcome]) -> dict:
    """Aggregate outcomes into the coverage-report JSON shape."""
    checked = 0
    covered = 0
    failures = []
    for target, outcome in outcomes:
        checked += 1
        if isinstance(outcome, CoverageFailure):
            failures.append(
                {"target": str(target), "hall_witness": list(outcome.witness_blocks)}
            )
        else:
            covered += 1
    return {"targets_checked": checked, "covered": covered, "failures": failures}
