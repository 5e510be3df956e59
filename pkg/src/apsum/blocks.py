"""Digit-block schemes and membership certificates.

Both constructions place one digit value per block into each set: block i
holds the values d * radix^(i-1) for digits d in [1, radix).  An integer
in [0, radix^m) then decomposes uniquely into at most one value per
block - for radix 2^w this is just its binary representation cut into
w-bit blocks - and sumset membership reduces to injectively assigning
each digit to a set containing it.  A MatchingCertificate records that
assignment; unassigned sets contribute the zero element.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .core import SetFamily
from .errors import InternalInvariantError, UsageError

__all__ = [
    "BlockScheme",
    "CertAssignment",
    "MatchingCertificate",
    "validate_certificate",
    "scheme_for_family",
]


@dataclass(frozen=True)
class BlockScheme:
    """m digit blocks over a radix, for a family of n sets.

    ``eps`` is carried only by the randomized scheme.  When the radix is
    a power of two, block i spans bit positions [(i-1)*w, i*w).
    """

    n: int
    m: int
    radix: int
    eps: Fraction | None = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise UsageError("scheme needs n >= 1 and m >= 1")
        if self.m > self.n:
            raise UsageError("cannot have more blocks than sets")
        if self.radix < 2:
            raise UsageError("radix must be >= 2")

    @property
    def w(self) -> int | None:
        """Block width in bits; None when the radix is not a power of 2."""
        if self.radix & (self.radix - 1) == 0:
            return self.radix.bit_length() - 1
        return None

    @property
    def range_size(self) -> int:
        return self.radix**self.m

    def digit_set(self, block: int) -> tuple[int, ...]:
        """All radix-1 nonzero values writable in the given 1-based block."""
        self._check_block(block)
        scale = self.radix ** (block - 1)
        return tuple(d * scale for d in range(1, self.radix))

    def block_value(self, block: int, digit: int) -> int:
        self._check_block(block)
        if not 0 <= digit < self.radix:
            raise UsageError(f"digit {digit} out of range for radix {self.radix}")
        return digit * self.radix ** (block - 1)

    def decompose_digits(self, value: int) -> tuple[int, ...]:
        """Base-radix digits d_1..d_m of a value in [0, radix^m)."""
        if not 0 <= value < self.range_size:
            raise UsageError(f"value {value} outside [0, radix^m)")
        digits = []
        for _ in range(self.m):
            value, d = divmod(value, self.radix)
            digits.append(d)
        return tuple(digits)

    def compose_digits(self, digits) -> int:
        digits = tuple(digits)
        if len(digits) != self.m:
            raise UsageError(f"expected {self.m} digits, got {len(digits)}")
        value = 0
        for d in reversed(digits):
            if not 0 <= d < self.radix:
                raise UsageError(f"digit {d} out of range for radix {self.radix}")
            value = value * self.radix + d
        return value

    def _check_block(self, block: int) -> None:
        if not 1 <= block <= self.m:
            raise UsageError(f"block {block} outside [1, {self.m}]")


class CertAssignment(NamedTuple):
    block: int
    digit: int
    set_index: int


@dataclass(frozen=True)
class MatchingCertificate:
    """Witness that ``target`` is in the family's sumset: an injective
    assignment of digit blocks to set indices."""

    target: int
    offset: int
    assignments: tuple[CertAssignment, ...]


def validate_certificate(
    family: SetFamily,
    scheme: BlockScheme,
    cert: MatchingCertificate,
    require_all_blocks: bool = False,
) -> None:
    """Recompute everything a certificate claims; raise on any mismatch.

    Checks injectivity on set indices, membership of each assigned value
    in its set, agreement of the assigned digits with the target's
    base-radix decomposition (missing blocks must carry digit 0), and the
    final sum.  ``require_all_blocks`` additionally demands one
    assignment per block, zero digits included.
    """
    relative = cert.target - cert.offset
    if cert.offset != family.offset:
        raise InternalInvariantError("certificate offset disagrees with family offset")
    if not 0 <= relative < scheme.range_size:
        raise InternalInvariantError("certificate target outside the covered range")
    set_indices = [a.set_index for a in cert.assignments]
    if len(set(set_indices)) != len(set_indices):
        raise InternalInvariantError("certificate assigns one set twice")
    if require_all_blocks and len(cert.assignments) != scheme.m:
        raise InternalInvariantError("certificate must assign every block")

    shift = family.per_set_shift
    digits = [0] * scheme.m
    total = 0
    seen_blocks = set()
    for a in cert.assignments:
        if not 1 <= a.block <= scheme.m:
            raise InternalInvariantError(f"block {a.block} out of range")
        if a.block in seen_blocks:
            raise InternalInvariantError(f"block {a.block} assigned twice")
        seen_blocks.add(a.block)
        if not 0 <= a.set_index < family.n:
            raise InternalInvariantError(f"set index {a.set_index} out of range")
        value = scheme.block_value(a.block, a.digit)
        if value + shift not in family.sets[a.set_index]:
            raise InternalInvariantError(
                f"set {a.set_index} does not contain the assigned value {value}"
            )
        digits[a.block - 1] = a.digit
        total += value
    if tuple(digits) != scheme.decompose_digits(relative):
        raise InternalInvariantError("assigned digits disagree with the target's digits")
    if total != relative:
        raise InternalInvariantError("assigned values do not sum to the target")


def scheme_for_family(family: SetFamily) -> BlockScheme:
    """Reconstruct the digit scheme from construction provenance."""
    prov = family.provenance
    kind = prov.get("kind")
    if kind == "explicit":
        q = int(prov["q"])
        return BlockScheme(n=q * q, m=(q * q) // 4, radix=q)
    if kind == "random":
        from .random_construction import make_block_scheme

        return make_block_scheme(int(prov["n"]), Fraction(prov["eps"]))
    raise UsageError(f"family of kind {kind!r} has no digit scheme")
