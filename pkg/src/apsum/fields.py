"""Arithmetic in GF(p) for prime p and GF(2^k) via an irreducible polynomial.

Field elements are plain integers in [0, q): residues for prime fields,
polynomial coefficient bitmasks for binary fields (bit i is the
coefficient of x^i).  A ``Field`` carries the modulus and implements the
operations on these indices; ``element_of``/``index_of`` are the
identity-with-range-check realization of the canonical bijection between
[0, q) and the field.

Descriptor strings: ``p:7`` for GF(7), ``b:3:0xB`` for GF(8) with modulus
x^3 + x + 1 (bitmask 0b1011).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import UsageError

__all__ = ["Field", "is_prime", "is_irreducible_gf2", "default_modulus", "parse_descriptor"]

MAX_PRIME = 1 << 20
MAX_BINARY_DEGREE = 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_mod_gf2(a: int, m: int) -> int:
    """Remainder of a(x) modulo m(x), coefficients in GF(2)."""
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _clmul(u: int, v: int) -> int:
    """Carry-less (polynomial) multiplication over GF(2)."""
    r = 0
    while v:
        if v & 1:
            r ^= u
        u <<= 1
        v >>= 1
    return r


def is_irreducible_gf2(m: int) -> bool:
    """Exhaustive factor test: no divisor of degree 1..deg(m)//2."""
    deg = m.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if _poly_mod_gf2(m, g) == 0:
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(k: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree k."""
    for m in range(1 << k, 1 << (k + 1)):
        if is_irreducible_gf2(m):
            return m
    raise UsageError(f"no irreducible polynomial of degree {k}")  # pragma: no cover


@dataclass(frozen=True)
class Field:
    """GF(q) for q prime or q = 2^k; operations act on indices in [0, q)."""

    kind: str  # "prime" | "binary"
    q: int
    modulus: int  # p itself, or the polynomial bitmask
    degree: int = 1

    @staticmethod
    def prime(p: int) -> "Field":
        if p > MAX_PRIME:
            raise UsageError(f"prime fields supported up to {MAX_PRIME}, got {p}")
        if not is_prime(p):
            raise UsageError(f"{p} is not prime")
        return Field("prime", p, p)

    @staticmethod
    def binary(k: int, modulus: int | None = None) -> "Field":
        if not 1 <= k <= MAX_BINARY_DEGREE:
            raise UsageError(f"binary field degree must be in [1, {MAX_BINARY_DEGREE}]")
        m = default_modulus(k) if modulus is None else modulus
        if m.bit_length() - 1 != k:
            raise UsageError(f"modulus 0x{m:X} does not have degree {k}")
        if not is_irreducible_gf2(m):
            raise UsageError(f"modulus 0x{m:X} is reducible")
        return Field("binary", 1 << k, m, k)

    @staticmethod
    def of_order(q: int) -> "Field":
        """Prime q gives GF(q); a power of two gives GF(2^k); anything
        else is unsupported (no general prime powers)."""
        if q >= 2 and q & (q - 1) == 0:
            return Field.binary(q.bit_length() - 1)
        if is_prime(q):
            return Field.prime(q)
        raise UsageError(f"unsupported field order {q}: need a prime or a power of 2")

    @property
    def descriptor(self) -> str:
        if self.kind == "prime":
            return f"p:{self.q}"
        return f"b:{self.degree}:0x{self.modulus:X}"

    def _check(self, *values: int) -> None:
        for v in values:
            if not 0 <= v < self.q:
                raise UsageError(f"{v} is not an element index of {self.descriptor}")

    def add(self, u: int, v: int) -> int:
        self._check(u, v)
        if self.kind == "prime":
            return (u + v) % self.q
        return u ^ v

    def sub(self, u: int, v: int) -> int:
        self._check(u, v)
        if self.kind == "prime":
            return (u - v) % self.q
        return u ^ v

    def neg(self, u: int) -> int:
        self._check(u)
        if self.kind == "prime":
            return (-u) % self.q
        return u

    def mul(self, u: int, v: int) -> int:
        self._check(u, v)
        if self.kind == "prime":
            return (u * v) % self.q
        return _poly_mod_gf2(_clmul(u, v), self.modulus)

    def eval_quadratic(self, a: int, b: int, c: int, x: int) -> int:
        """a*x^2 + b*x + c."""
        return self.add(self.add(self.mul(a, self.mul(x, x)), self.mul(b, x)), c)

    def element_of(self, index: int) -> int:
        self._check(index)
        return index

    def index_of(self, element: int) -> int:
        self._check(element)
        return element


def parse_descriptor(text: str) -> Field:
    parts = text.split(":")
    try:
        if parts[0] == "p" and len(parts) == 2:
            return Field.prime(int(parts[1]))
        if parts[0] == "b" and len(parts) == 3:
            return Field.binary(int(parts[1]), int(parts[2], 16))
    except ValueError as exc:
        raise UsageError(f"malformed field descriptor {text!r}") from exc
    raise UsageError(f"malformed field descriptor {text!r}")
