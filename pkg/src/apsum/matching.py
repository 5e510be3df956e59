"""Bipartite maximum matching and Hall-condition diagnostics.

The matcher is augmenting-path based (Kuhn's algorithm, O(V*E)) with a
fixed scan order - left vertices in increasing index order, neighbors in
increasing index order - so the returned pairing is canonical, not just
of canonical cardinality.  When a left vertex cannot be saturated, the
alternating-reachability structure of the final matching yields a Hall
violation witness: a left set W with fewer than |W| neighbors.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceededError, InternalInvariantError, UsageError

__all__ = [
    "BipartiteGraph",
    "Matching",
    "HallViolation",
    "max_matching",
    "saturating_matching",
    "hall_check_exhaustive",
]

DEFAULT_SUBSET_BUDGET = 5_000_000


@dataclass(frozen=True)
class BipartiteGraph:
    left_count: int
    right_count: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "adjacency", tuple(tuple(row) for row in self.adjacency))
        if self.left_count < 0 or self.right_count < 0:
            raise UsageError("vertex counts must be non-negative")
        if len(self.adjacency) != self.left_count:
            raise UsageError("adjacency must have one row per left vertex")
        for row in self.adjacency:
            prev = -1
            for r in row:
                if not 0 <= r < self.right_count:
                    raise UsageError(f"right index {r} out of range")
                if r <= prev:
                    raise UsageError("adjacency rows must be sorted without duplicates")
                prev = r

    def neighbor_union(self, left_subset) -> set[int]:
        out: set[int] = set()
        for u in left_subset:
            out.update(self.adjacency[u])
        return out


@dataclass(frozen=True)
class Matching:
    """Injective partial map from left to right indices."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def cardinality(self) -> int:
        return len(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


@dataclass(frozen=True)
class HallViolation:
    """A left set with strictly fewer neighbors than members."""

    left_set: tuple[int, ...]
    neighbors: tuple[int, ...]


def _augment(start: int, adjacency, match_left: dict, match_right: dict) -> bool:
    """Depth-first alternating-path search from an unmatched left vertex.

    Iterative so deep displacement chains cannot hit the recursion limit.
    """
    visited: set[int] = set()
    lefts = [start]
    iters = [iter(adjacency[start])]
    rights: list[int] = []
    while iters:
        chosen = None
        for r in iters[-1]:
            if r not in visited:
                chosen = r
                break
        if chosen is None:
            iters.pop()
            lefts.pop()
            if rights:
                rights.pop()
            continue
        visited.add(chosen)
        rights.append(chosen)
        holder = match_right.get(chosen)
        if holder is None:
            for u, r in zip(lefts, rights):
                match_left[u] = r
                match_right[r] = u
            return True
        lefts.append(holder)
        iters.append(iter(adjacency[holder]))
    return False


def max_matching(g: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching with the canonical scan order."""
    match_left: dict[int, int] = {}
    match_right: dict[int, int] = {}
    for u in range(g.left_count):
        _augment(u, g.adjacency, match_left, match_right)
    return Matching(tuple(sorted(match_left.items())))


def _alternating_reachability(g: BipartiteGraph, match_left, match_right):
    """Left and right vertices reachable from unmatched lefts by
    alternating paths (free edge left->right, matched edge right->left)."""
    frontier = deque(u for u in range(g.left_count) if u not in match_left)
    seen_left = set(frontier)
    seen_right: set[int] = set()
    while frontier:
        u = frontier.popleft()
        for r in g.adjacency[u]:
            if r in seen_right:
                continue
            seen_right.add(r)
            w = match_right.get(r)
            if w is not None and w not in seen_left:
                seen_left.add(w)
                frontier.append(w)
    return seen_left, seen_right


def saturating_matching(g: BipartiteGraph) -> Matching | HallViolation:
    """A matching saturating every left vertex, or a Hall violation.

    The violation is extracted from alternating reachability in
    polynomial time rather than by subset search.
    """
    matching = max_matching(g)
    if matching.cardinality == g.left_count:
        return matching
    match_left = matching.as_dict()
    match_right = {r: u for u, r in match_left.items()}
    seen_left, seen_right = _alternating_reachability(g, match_left, match_right)
    violation = HallViolation(tuple(sorted(seen_left)), tuple(sorted(seen_right)))
    recount = g.neighbor_union(violation.left_set)
    if recount != seen_right or not len(violation.neighbors) < len(violation.left_set):
        raise InternalInvariantError("extracted Hall witness failed its recount")
    return violation


def hall_check_exhaustive(
    g: BipartiteGraph, max_subset: int, budget: int = DEFAULT_SUBSET_BUDGET
) -> HallViolation | None:
    """Check |N(W)| >= |W| for every left subset with |W| <= max_subset.

    Returns None when the condition holds, otherwise the first violating
    subset in lexicographic order.  Raises when the enumeration would
    exceed ``budget`` subsets; callers should fall back to
    ``saturating_matching``.
    """
    if max_subset < 0 or max_subset > g.left_count:
        raise UsageError("max_subset out of range")
    total = sum(math.comb(g.left_count, s) for s in range(1, max_subset + 1))
    if total > budget:
        raise BudgetExceededError(
            f"{total} subsets exceed the enumeration budget of {budget}; "
            "use saturating_matching instead"
        )
    masks = [0] * g.left_count
    for u, row in enumerate(g.adjacency):
        for r in row:
            masks[u] |= 1 << r
    for size in range(1, max_subset + 1):
        for combo in combinations(range(g.left_count), size):
            acc = 0
            for u in combo:
                acc |= masks[u]
            if acc.bit_count() < size:
                neighbors = tuple(sorted(g.neighbor_union(combo)))
                return HallViolation(tuple(combo), neighbors)
    return None
