"""Counting machinery bounding progression length in log-sparse sumsets.

Fix one representation x = x_1 + ... + x_n for every element x of a
progression T with step delta and spread Delta.  Call x_i large if
x_i > Delta, small if x_i < delta/(2n), medium otherwise.  The small
terms sum to less than delta/2, so x is pinned down by its large and
medium terms alone: it is the unique progression element in the window
[heavy_sum, heavy_sum + delta/2).

Counting the possible heavy parts gives the explicit bound implemented
here.  Each large term lives in an interval of ratio n+1, hence in at
most ceil(log2(n+1)) + 1 dyadic windows of at most C elements each, with
a factor n per term absorbing the choice of internal order; each medium
term lives in an interval of ratio 2n(|T|-1).  With

    W_L = C * (ceil(log2(n+1)) + 1)
    W_M = C * (ceil(log2(2n(|T|-1))) + 1)

any consistent length satisfies |T| <= 3^n * max(n*W_L, W_M)^n, and the
largest such |T| is a finite fixpoint because the right side grows only
polylogarithmically in |T|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import ArithmeticProgression
from .errors import DecodeFailureError, InternalInvariantError, UsageError

__all__ = [
    "BoundParams",
    "TermClassification",
    "FixpointResult",
    "classify_terms",
    "heavy_sum",
    "decode_from_heavy",
    "explicit_bound",
    "solve_max_length",
]

LARGE, MEDIUM, SMALL = "large", "medium", "small"


def _ceil_log2(m: int) -> int:
    if m < 1:
        raise UsageError("ceil_log2 needs a positive argument")
    return (m - 1).bit_length()


@dataclass(frozen=True)
class BoundParams:
    n: int
    c: int

    def __post_init__(self):
        if self.n < 1 or self.c < 1:
            raise UsageError("need n >= 1 and C >= 1")

    @property
    def large_options(self) -> int:
        """W_L: dyadic windows covering a ratio-(n+1) interval, C each."""
        return self.c * (_ceil_log2(self.n + 1) + 1)

    def medium_options(self, t_hypothesis: int) -> int:
        """W_M: dyadic windows covering a ratio-2n(|T|-1) interval, C each."""
        return self.c * (_ceil_log2(2 * self.n * (t_hypothesis - 1)) + 1)


@dataclass(frozen=True)
class TermClassification:
    """Per-index large/medium/small labels with their exact thresholds."""

    labels: tuple[str, ...]
    spread: int
    small_threshold: Fraction  # delta / (2n), compared exactly

    @property
    def large_count(self) -> int:
        return sum(1 for l in self.labels if l == LARGE)

    @property
    def medium_count(self) -> int:
        return sum(1 for l in self.labels if l == MEDIUM)

    @property
    def small_count(self) -> int:
        return sum(1 for l in self.labels if l == SMALL)


def classify_terms(
    ap: ArithmeticProgression, n: int, representation
) -> TermClassification:
    """Label each summand of a progression element's representation.

    Thresholds are exact rationals: large means x_i > spread, small means
    2*n*x_i < step.  Requires length >= 2 (otherwise the spread and step
    carry no information) and a representation that actually sums to a
    progression element.
    """
    rep = tuple(representation)
    if len(rep) != n:
        raise UsageError(f"expected {n} summands, got {len(rep)}")
    if ap.length < 2:
        raise UsageError("degenerate progression: thresholds need length >= 2")
    if any(x < 0 for x in rep):
        raise UsageError("summands must be non-negative")
    total = sum(rep)
    if total not in ap:
        raise UsageError(f"{total} is not an element of the progression")
    delta = ap.step
    spread = ap.spread
    labels = []
    small_total = 0
    for x in rep:
        if x > spread:
            labels.append(LARGE)
        elif 2 * n * x < delta:
            labels.append(SMALL)
            small_total += x
        else:
            labels.append(MEDIUM)
    if not 2 * small_total < delta:
        raise InternalInvariantError("small terms sum to delta/2 or more")
    return TermClassification(tuple(labels), spread, Fraction(delta, 2 * n))


def heavy_sum(representation, classification: TermClassification) -> int:
    """Sum of the large and medium terms."""
    return sum(
        x for x, l in zip(representation, classification.labels) if l != SMALL
    )


def decode_from_heavy(ap: ArithmeticProgression, heavy_partial_sum: int) -> int:
    """The unique progression element t with h <= t < h + step/2.

    The small terms of any element's representation sum to less than
    step/2, so the element is recovered from its heavy part by rounding
    up to the next progression element inside that half-open window.
    """
    h = heavy_partial_sum
    delta = ap.step
    index = -((ap.first - h) // delta)  # ceil((h - first) / delta)
    if index < 0:
        index = 0
    if index >= ap.length:
        raise DecodeFailureError(f"no progression element in [{h}, {h} + step/2)")
    t = ap.first + index * delta
    if not 2 * (t - h) < delta:
        raise DecodeFailureError(f"no progression element in [{h}, {h} + step/2)")
    return t


def explicit_bound(params: BoundParams, t_hypothesis: int) -> int:
    """3^n * max(n*W_L, W_M)^n, in exact integer arithmetic."""
    if t_hypothesis < 2:
        raise UsageError("hypothesised length must be >= 2")
    per_term = max(params.n * params.large_options, params.medium_options(t_hypothesis))
    return 3**params.n * per_term**params.n


@dataclass(frozen=True)
class FixpointResult:
    max_length: int
    iterations: int


def solve_max_length(params: BoundParams) -> FixpointResult:
    """Largest T with T <= explicit_bound(params, T).

    The bound is constant wherever J = ceil(log2(2n(T-1))) is constant,
    i.e. on ranges whose endpoints roughly double, so the solver walks
    those ranges; within one, the best consistent T is min(bound, range
    top).  T <= bound(T) is not downward closed - the bound jumps at
    range boundaries, which can revive the inequality just after it
    first fails - so the scan continues until the range bottom exceeds
    the bound with J >= 2n.  Past that point the bound grows by a factor
    at most (1 + 1/(2n+1))^n < e^(1/2) per range while range bottoms
    double, so the inequality can never revive and the scan is complete.
    """
    n = params.n
    evaluations = 0

    def bound_of(t: int) -> int:
        nonlocal evaluations
        evaluations += 1
        return explicit_bound(params, t)

    if bound_of(2) < 2:  # cannot happen: bound(2) >= 6^n
        raise InternalInvariantError("fixpoint bound below its own floor")
    best = 2
    j = (2 * n - 1).bit_length()  # J at T = 2
    while True:
        t_lo = max(2, 2 + (1 << (j - 1)) // (2 * n))
        t_hi = 1 + (1 << j) // (2 * n)
        j += 1
        if t_hi < t_lo:
            continue
        range_bound = bound_of(t_lo)
        candidate = min(range_bound, t_hi)
        if candidate >= t_lo and candidate <= bound_of(candidate):
            best = max(best, candidate)
        if t_lo > range_bound and j - 1 >= 2 * n:
            break
    return FixpointResult(best, evaluations)
