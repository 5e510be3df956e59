"""Bounded sumset enumeration and exact membership testing.

This is the ground-truth oracle for the constructions: it answers, by
direct search, which integers below a bound are sums taking one element
from each set.  The frontier fold keeps only partial sums that can still
be completed under the bound, and the log-sparse counting bound keeps the
result polynomial in log N per set, so desk-scale enumeration stays
small.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .core import ArithmeticProgression, SetFamily
from .errors import BudgetExceededError, InternalInvariantError, UsageError

__all__ = ["BoundedSumset", "enumerate_sumset_below", "membership", "contains_ap"]

DEFAULT_FRONTIER_BUDGET = 4_000_000


@dataclass(frozen=True)
class BoundedSumset:
    """All sumset members up to ``bound``, sorted."""

    bound: int
    members: tuple[int, ...]
    family: SetFamily

    def __contains__(self, value: int) -> bool:
        i = bisect.bisect_left(self.members, value)
        return i < len(self.members) and self.members[i] == value


def enumerate_sumset_below(
    family: SetFamily, bound: int, max_frontier: int = DEFAULT_FRONTIER_BUDGET
) -> BoundedSumset:
    """Exact set of sums <= bound, by iterative frontier merge.

    Sets are folded one at a time; a partial sum is pruned as soon as its
    cheapest completion already exceeds the bound.  The frontier is
    deduplicated after every fold, so memory stays proportional to the
    output.  Returns an empty sumset when the bound is below the minimal
    possible sum.
    """
    suffix_min = [0] * (family.n + 1)
    for i in range(family.n - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + family.sets[i].min
    frontier = {0}
    for i, s in enumerate(family.sets):
        remaining = suffix_min[i + 1]
        new_frontier = set()
        for partial in frontier:
            for e in s.elements:
                total = partial + e
                if total + remaining > bound:
                    break  # elements increase; later ones only overshoot more
                new_frontier.add(total)
        if len(new_frontier) > max_frontier:
            raise BudgetExceededError(
                f"sumset frontier reached {len(new_frontier)} partial sums "
                f"(budget {max_frontier})"
            )
        frontier = new_frontier
        if not frontier:
            break
    return BoundedSumset(bound, tuple(sorted(frontier)), family)


def membership(family: SetFamily, target: int) -> tuple[int, ...] | None:
    """One element per set summing to ``target``, or None if impossible.

    Depth-first search over the sets ordered by descending maximum
    element, scanning each set's elements in increasing order, pruned by
    the min/max sums still achievable.  The first representation found
    under that fixed order is the canonical one.  A returned tuple is
    re-verified (per-set membership and exact sum) before it leaves.
    """
    order = sorted(range(family.n), key=lambda i: (-family.sets[i].max, i))
    ordered = [family.sets[i] for i in order]
    n = len(ordered)
    suffix_min = [0] * (n + 1)
    suffix_max = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + ordered[i].min
        suffix_max[i] = suffix_max[i + 1] + ordered[i].max
    chosen = [0] * n

    def search(depth: int, remaining: int) -> bool:
        if depth == n:
            return remaining == 0
        for e in ordered[depth].elements:
            rest = remaining - e
            if rest < suffix_min[depth + 1]:
                break
            if rest > suffix_max[depth + 1]:
                continue
            chosen[depth] = e
            if search(depth + 1, rest):
                return True
        return False

    if not search(0, target):
        return None
    representation = [0] * family.n
    for pos, original_index in enumerate(order):
        representation[original_index] = chosen[pos]
    if sum(representation) != target or any(
        x not in family.sets[i] for i, x in enumerate(representation)
    ):
        raise InternalInvariantError("membership produced an invalid representation")
    return tuple(representation)


def contains_ap(sumset: BoundedSumset, ap: ArithmeticProgression) -> bool:
    """True iff every progression element is a sumset member."""
    if ap.last > sumset.bound:
        raise UsageError(
            f"progression reaches {ap.last}, beyond the enumerated bound {sumset.bound}"
        )
    members = set(sumset.members)
    return all(x in members for x in ap)
