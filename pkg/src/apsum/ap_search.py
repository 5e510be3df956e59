"""Longest arithmetic progression inside a finite integer set.

Two independent routes: the classic pair-indexed dynamic program, and an
exhaustive (first, step) oracle used to cross-check it.  Both use the
same conventions - a nonempty set always contains a length-1 progression
with step 1, and ties are broken by smallest step, then smallest first
element - so their outputs are comparable, not just their lengths.
"""

from __future__ import annotations

import re

from .core import ArithmeticProgression
from .errors import BudgetExceededError, InternalInvariantError, UsageError

__all__ = [
    "longest_ap_dp",
    "longest_ap_bruteforce",
    "parse_generator",
    "two_geometric_set",
]

DEFAULT_PAIR_BUDGET = 8_000_000
DEFAULT_ORACLE_LIMIT = 3000


def _checked_input(elements) -> list[int]:
    elems = list(elements)
    if not elems:
        raise UsageError("need at least one element")
    for a, b in zip(elems, elems[1:]):
        if b <= a:
            raise UsageError("elements must be sorted and distinct")
    return elems


def _verify_inside(ap: ArithmeticProgression, members: set[int]) -> ArithmeticProgression:
    if any(x not in members for x in ap):
        raise InternalInvariantError("reported progression leaves the input set")
    return ap


def longest_ap_dp(elements, max_pairs: int = DEFAULT_PAIR_BUDGET) -> ArithmeticProgression:
    """Maximum-length progression via the pair DP.

    L(j, k) extends L(i, j) when elements[i], elements[j], elements[k]
    are in progression; only lengths above the default 2 are stored, so
    the table stays sparse on unstructured input.  O(m^2) time.
    """
    elems = _checked_input(elements)
    m = len(elems)
    if m == 1:
        return ArithmeticProgression(elems[0], 1, 1)
    if m * (m - 1) // 2 > max_pairs:
        raise BudgetExceededError(f"{m} elements exceed the {max_pairs}-pair DP budget")
    index = {v: i for i, v in enumerate(elems)}
    lengths: dict[tuple[int, int], int] = {}
    # best key: (-length, step, first); smaller wins
    best_key = None
    best = None
    for k in range(1, m):
        ek = elems[k]
        for j in range(k):
            ej = elems[j]
            step = ek - ej
            i = index.get(ej - step)
            if i is None:
                length = 2
            else:
                length = lengths.get((i, j), 2) + 1
                lengths[(j, k)] = length
            first = ek - (length - 1) * step
            key = (-length, step, first)
            if best_key is None or key < best_key:
                best_key = key
                best = ArithmeticProgression(first, step, length)
    return _verify_inside(best, set(elems))


def longest_ap_bruteforce(
    elements, limit: int = DEFAULT_ORACLE_LIMIT
) -> ArithmeticProgression:
    """Exhaustive oracle: greedy extension of every maximal (first, step).

    Pairs whose first element has a predecessor at the same step are
    skipped - they are suffixes of progressions counted elsewhere - so
    every candidate carries its true first element for tie-breaking.
    """
    elems = _checked_input(elements)
    m = len(elems)
    if m > limit:
        raise BudgetExceededError(f"{m} elements exceed the {limit}-element oracle limit")
    if m == 1:
        return ArithmeticProgression(elems[0], 1, 1)
    members = set(elems)
    best_key = None
    best = None
    for i in range(m):
        first = elems[i]
        for j in range(i + 1, m):
            step = elems[j] - first
            if first - step in members:
                continue
            length = 2
            nxt = elems[j] + step
            while nxt in members:
                length += 1
                nxt += step
            key = (-length, step, first)
            if best_key is None or key < best_key:
                best_key = key
                best = ArithmeticProgression(first, step, length)
    return _verify_inside(best, members)


_GENERATOR_RE = re.compile(r"^\s*(\d+)\s*\^\s*a\s*\+\s*(\d+)\s*\^\s*b\s*$")


def parse_generator(text: str) -> tuple[int, int]:
    """Parse the ``u^a+v^b`` mini-syntax (sums of two geometric sequences)."""
    match = _GENERATOR_RE.match(text)
    if not match:
        raise UsageError(f"generator {text!r} does not match 'u^a+v^b'")
    u, v = int(match.group(1)), int(match.group(2))
    if u < 2 or v < 2:
        raise UsageError("generator bases must be >= 2")
    return u, v


def two_geometric_set(u: int, v: int, below: int) -> list[int]:
    """Sorted {u^a + v^b : a, b >= 0} strictly below the given bound."""
    if below < 2:
        return []
    out = set()
    ua = 1
    while ua + 1 < below:
        vb = 1
        while ua + vb < below:
            out.add(ua + vb)
            vb *= v
        ua *= u
    return sorted(out)
