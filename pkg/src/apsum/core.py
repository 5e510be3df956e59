"""Domain types: log-sparse sets, set families, arithmetic progressions.

A set of positive integers is C-log-sparse when every dyadic window
[x, 2x) contains at most C of its elements.  Verifying this does not
require scanning all x: if some window holds more than C elements, the
window can be slid left until its left endpoint is itself an element, so
it suffices to check the windows anchored at each element.

Families are ordered lists of such sets.  Construction code builds
families whose members contain 0 (flagged ``pre_shift``); the public form
shifts every element up so the sets live in the positive integers, and
the family ``offset`` records the total translation of the sumset.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from .errors import SparsityViolationError, UsageError

__all__ = [
    "SparsityWitness",
    "LogSparseSet",
    "SetFamily",
    "ArithmeticProgression",
    "verify_log_sparse",
    "sparsity_witness",
    "minimal_sparsity_c",
    "shift_family",
    "public_form",
    "ap_elements",
]


@dataclass(frozen=True)
class SparsityWitness:
    """A dyadic window [window_start, window_end) holding ``count`` > C
    elements; the left endpoint is always an element of the sequence."""

    window_start: int
    window_end: int
    count: int
    members: tuple[int, ...]


def sparsity_witness(elements, c: int) -> SparsityWitness | None:
    """Return the first violating element-anchored window, or None.

    ``elements`` must be strictly increasing positive integers.  The scan
    is linear: for each anchor e the window is [e, 2e), and any violating
    window slides left onto an anchored one without losing elements.
    """
    if c < 1:
        raise UsageError(f"sparsity bound must be >= 1, got {c}")
    elems = list(elements)
    prev = 0
    for e in elems:
        if e <= prev:
            raise UsageError("elements must be strictly increasing and >= 1")
        prev = e
    j = 0
    for i, e in enumerate(elems):
        if j < i:
            j = i
        while j < len(elems) and elems[j] < 2 * e:
            j += 1
        if j - i > c:
            return SparsityWitness(e, 2 * e, j - i, tuple(elems[i:j]))
    return None


def verify_log_sparse(elements, c: int) -> tuple[bool, SparsityWitness | None]:
    """Check that every dyadic window [x, 2x) holds at most ``c`` elements."""
    witness = sparsity_witness(elements, c)
    return witness is None, witness


def minimal_sparsity_c(elements) -> int:
    """Smallest C for which the sequence is C-log-sparse (1 if empty)."""
    elems = [e for e in elements if e > 0]
    best = 1
    j = 0
    for i, e in enumerate(elems):
        if j < i:
            j = i
        while j < len(elems) and elems[j] < 2 * e:
            j += 1
        best = max(best, j - i)
    return best


@dataclass(frozen=True)
class LogSparseSet:
    """Finite strictly increasing integer set with a sparsity certificate.

    ``sparsity_c`` is checked at construction.  Elements are positive
    except that 0 is admitted when ``allow_zero`` is set, which marks the
    set as an internal, pre-shift family member; 0 never counts against
    any dyadic window.
    """

    elements: tuple[int, ...]
    sparsity_c: int
    allow_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.sparsity_c < 1:
            raise UsageError(f"sparsity_c must be >= 1, got {self.sparsity_c}")
        if not self.elements:
            raise UsageError("a set needs at least one element")
        prev = -1
        for e in self.elements:
            if e <= prev:
                raise UsageError("elements must be strictly increasing")
            if e < 0:
                raise UsageError("elements must be non-negative")
            prev = e
        if self.elements and self.elements[0] == 0 and not self.allow_zero:
            raise UsageError("0 is only allowed in pre-shift internal sets")
        positive = self.elements[1:] if self.elements and self.elements[0] == 0 else self.elements
        witness = sparsity_witness(positive, self.sparsity_c)
        if witness is not None:
            raise SparsityViolationError(
                f"window [{witness.window_start}, {witness.window_end}) holds "
                f"{witness.count} elements, more than C={self.sparsity_c}"
            )

    def __contains__(self, value: int) -> bool:
        i = bisect.bisect_left(self.elements, value)
        return i < len(self.elements) and self.elements[i] == value

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    @property
    def min(self) -> int:
        return self.elements[0]

    @property
    def max(self) -> int:
        return self.elements[-1]

    def shifted(self, amount: int) -> "LogSparseSet":
        """Elementwise translate; the sparsity certificate is re-verified
        (translation can break it for sets that were barely sparse)."""
        if amount < 0:
            raise UsageError("shift amount must be non-negative")
        if amount == 0:
            return self
        return LogSparseSet(
            tuple(e + amount for e in self.elements), self.sparsity_c, allow_zero=False
        )


@dataclass(frozen=True)
class SetFamily:
    """Ordered list of log-sparse sets whose sumset we study.

    ``offset`` is the accumulated translation of the sumset: shifting all
    n sets up by a adds n*a to every sum.  ``pre_shift`` marks internal
    families whose sets still contain 0.
    """

    sets: tuple[LogSparseSet, ...]
    provenance: Mapping[str, Any] = field(default_factory=lambda: {"kind": "manual"})
    offset: int = 0
    pre_shift: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        if not self.sets:
            raise UsageError("a family needs at least one set")
        if self.offset < 0:
            raise UsageError("offset must be non-negative")
        kind = self.provenance.get("kind")
        if kind == "explicit":
            q = self.provenance["q"]
            if len(self.sets) != q * q:
                raise UsageError(
                    f"explicit family for q={q} must have q^2={q * q} sets, "
                    f"got {len(self.sets)}"
                )

    @property
    def n(self) -> int:
        return len(self.sets)

    @property
    def per_set_shift(self) -> int:
        """Uniform per-set translation implied by ``offset``."""
        shift, rem = divmod(self.offset, self.n)
        if rem:
            raise UsageError("offset is not a multiple of the family size")
        return shift

    def min_sum(self) -> int:
        return sum(s.min for s in self.sets)

    def max_sum(self) -> int:
        return sum(s.max for s in self.sets)


def shift_family(family: SetFamily, amount: int) -> SetFamily:
    """Translate every element of every set up by ``amount``.

    The sumset translates by n*amount, recorded in ``offset``.  Sparsity
    is re-checked unconditionally by the LogSparseSet constructor.
    """
    if amount < 0:
        raise UsageError("shift amount must be non-negative")
    if amount == 0:
        return family
    return SetFamily(
        sets=tuple(s.shifted(amount) for s in family.sets),
        provenance=family.provenance,
        offset=family.offset + family.n * amount,
        pre_shift=False,
    )


def public_form(family: SetFamily) -> SetFamily:
    """The export form: all elements positive.  Pre-shift families are
    shifted up by 1; families already over the positive integers pass
    through unchanged."""
    if family.pre_shift:
        return shift_family(family, 1)
    return family


@dataclass(frozen=True)
class ArithmeticProgression:
    """first, first+step, ..., first+step*(length-1)."""

    first: int
    step: int
    length: int

    def __post_init__(self):
        if self.step < 1:
            raise UsageError(f"step must be >= 1, got {self.step}")
        if self.length < 1:
            raise UsageError(f"length must be >= 1, got {self.length}")

    @property
    def spread(self) -> int:
        """Max element minus min element (never stored, always derived)."""
        return self.step * (self.length - 1)

    @property
    def last(self) -> int:
        return self.first + self.spread

    def __contains__(self, value: int) -> bool:
        if value < self.first or value > self.last:
            return False
        return (value - self.first) % self.step == 0

    def __iter__(self) -> Iterator[int]:
        return ap_elements(self)


def ap_elements(ap: ArithmeticProgression) -> Iterator[int]:
    """Yield the progression's elements in increasing order."""
    value = ap.first
    for _ in range(ap.length):
        yield value
        value += ap.step
