"""Derandomized family construction from quadratic polynomials over GF(q).

The bipartite condenser G_q has point vertices A = F x F on one side and
the q^3 polynomials P(x) = a*x^2 + b*x + c on the other; P is adjacent to
the q points (x, P(x)).  Distinct quadratics agree on at most 2 points,
so any x <= (q+1)/2 polynomial vertices have at least
q + (q-2) + ... + (q-2x+2) = x(q-x+1) neighbors, and every subset of at
most q^2/4 polynomial vertices has at least as many neighbors as members
- hence a saturating matching always exists for them.

The family takes n = q^2 sets indexed by the points and m = floor(q^2/4)
blocks indexed by the lexicographically first (a, b) pairs.  For block
(a, b), the set at point (x, y) holds the digit value
idx(y - a*x^2 - b*x) * q^(block-1): exactly the digit c for which
P_{a,b,c} passes through the point.  Decomposing a target into base-q
digits therefore turns membership into a saturating matching between the
target's nonzero-digit polynomial vertices and the points, which the
expansion property guarantees.  In binary mode (q = 2^k) the digits are
k-bit blocks of the target's binary representation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .blocks import BlockScheme, CertAssignment, MatchingCertificate, validate_certificate
from .core import LogSparseSet, SetFamily
from .errors import BudgetExceededError, InternalInvariantError, UsageError
from .fields import Field, parse_descriptor
from .matching import BipartiteGraph, HallViolation, saturating_matching

__all__ = [
    "CondenserGraph",
    "build_condenser",
    "expansion_lower_bound",
    "ExpansionReport",
    "certify_expansion",
    "build_family",
    "ExplicitDecomposer",
    "decompose",
]

MAX_CONDENSER_ORDER = 256
DEFAULT_SUBSET_BUDGET = 2_500_000


@dataclass(frozen=True)
class CondenserGraph:
    """G_q with implicit edges; adjacency is evaluated, never stored."""

    field: Field

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def a_count(self) -> int:
        return self.q * self.q

    @property
    def b_count(self) -> int:
        return self.q**3

    def point_index(self, x: int, y: int) -> int:
        return x * self.q + y

    def point_of(self, index: int) -> tuple[int, int]:
        return divmod(index, self.q)

    def poly_index(self, a: int, b: int, c: int) -> int:
        return (a * self.q + b) * self.q + c

    def poly_of(self, index: int) -> tuple[int, int, int]:
        ab, c = divmod(index, self.q)
        a, b = divmod(ab, self.q)
        return a, b, c

    def is_edge(self, poly: int, point: int) -> bool:
        a, b, c = self.poly_of(poly)
        x, y = self.point_of(point)
        return self.field.eval_quadratic(a, b, c, x) == y

    def poly_neighbors(self, poly: int) -> tuple[int, ...]:
        """The q points (x, P(x)), sorted by point index."""
        a, b, c = self.poly_of(poly)
        f = self.field
        return tuple(
            sorted(self.point_index(x, f.eval_quadratic(a, b, c, x)) for x in range(self.q))
        )

    @lru_cache(maxsize=None)
    def neighbor_mask(self, poly: int) -> int:
        mask = 0
        for p in self.poly_neighbors(poly):
            mask |= 1 << p
        return mask


def build_condenser(field: Field) -> CondenserGraph:
    if field.q > MAX_CONDENSER_ORDER:
        raise UsageError(f"condenser supported up to q={MAX_CONDENSER_ORDER}")
    return CondenserGraph(field)


def expansion_lower_bound(q: int, x: int) -> int:
    """Guaranteed neighbor count x(q-x+1) for any x polynomial vertices;
    valid in the proof's range 1 <= x <= (q+1)/2."""
    if not 1 <= x <= (q + 1) // 2:
        raise UsageError(f"x={x} outside the proof's range [1, (q+1)/2]")
    return x * (q - x + 1)


@dataclass(frozen=True)
class ExpansionReport:
    q: int
    x_max: int
    mode: str
    subsets_checked: int
    min_margin: int
    min_margin_subset: tuple[int, ...]
    violations: tuple[tuple[int, ...], ...]
    samples: int | None = None
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations


def certify_expansion(
    graph: CondenserGraph,
    x_max: int,
    mode: str = "exhaustive",
    samples: int | None = None,
    seed: int | None = None,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> ExpansionReport:
    """Check |N(X)| >= |X| over polynomial-vertex subsets of size <= x_max.

    Exhaustive mode enumerates every subset (within budget) and reports
    the minimum neighbors-minus-size margin; sampled mode draws random
    subsets instead.  Violations are collected as witnesses; none should
    exist for x_max <= q^2/4.
    """
    q = graph.q
    if not 1 <= x_max <= (q * q) // 4:
        raise UsageError(f"x_max={x_max} outside [1, q^2/4]")
    masks = [graph.neighbor_mask(p) for p in range(graph.b_count)]
    min_margin: int | None = None
    min_subset: tuple[int, ...] = ()
    violations: list[tuple[int, ...]] = []
    checked = 0
    if mode == "exhaustive":
        total = sum(math.comb(graph.b_count, s) for s in range(1, x_max + 1))
        if total > budget:
            raise BudgetExceededError(
                f"{total} subsets exceed the budget {budget}; use sampled mode"
            )
        chosen: list[int] = []

        def recurse(start: int, acc: int) -> None:
            nonlocal checked, min_margin, min_subset
            for i in range(start, graph.b_count):
                chosen.append(i)
                acc2 = acc | masks[i]
                checked += 1
                margin = acc2.bit_count() - len(chosen)
                if min_margin is None or margin < min_margin:
                    min_margin = margin
                    min_subset = tuple(chosen)
                if margin < 0:
                    violations.append(tuple(chosen))
                if len(chosen) < x_max:
                    recurse(i + 1, acc2)
                chosen.pop()

        recurse(0, 0)
    elif mode == "sampled":
        if samples is None or samples < 1:
            raise UsageError("sampled mode needs a positive sample count")
        if seed is None:
            raise UsageError("sampled mode requires an explicit seed")
        rng = random.Random(seed)
        for _ in range(samples):
            size = rng.randrange(1, x_max + 1)
            subset = tuple(sorted(rng.sample(range(graph.b_count), size)))
            acc = 0
            for p in subset:
                acc |= masks[p]
            checked += 1
            margin = acc.bit_count() - size
            if min_margin is None or margin < min_margin:
                min_margin = margin
                min_subset = subset
            if margin < 0:
                violations.append(subset)
    else:
        raise UsageError(f"unknown mode {mode!r}")
    return ExpansionReport(
        q=q,
        x_max=x_max,
        mode=mode,
        subsets_checked=checked,
        min_margin=min_margin,
        min_margin_subset=min_subset,
        violations=tuple(violations),
        samples=samples,
        seed=seed,
    )


def _block_pairs(q: int, m: int) -> list[tuple[int, int]]:
    """The lexicographically first m (a, b) pairs; any choice of q^2/4
    pairs works, this one is canonical."""
    return [divmod(t, q) for t in range(m)]


def build_family(field: Field, mode: str = "binary") -> tuple[SetFamily, BlockScheme]:
    """The n = q^2 sets indexed by points, with m = floor(q^2/4) blocks.

    Binary mode demands q = 2^k so digit values are bit blocks; base_q
    mode generalizes to any supported q with base-q digits.  The family
    is pre-shift: every set contains 0.
    """
    q = field.q
    if mode == "binary":
        if q & (q - 1) != 0:
            raise UsageError(f"binary mode needs q a power of 2, got {q}")
        sparsity_c = 2
    elif mode == "base_q":
        sparsity_c = 3
    else:
        raise UsageError(f"unknown mode {mode!r}")
    m = (q * q) // 4
    if m < 1:
        raise UsageError(f"q={q} yields no blocks")
    scheme = BlockScheme(n=q * q, m=m, radix=q)
    pairs = _block_pairs(q, m)
    sets = []
    for x in range(q):
        x_sq = field.mul(x, x)
        for y in range(q):
            elements = {0}
            for block, (a, b) in enumerate(pairs, start=1):
                c = field.sub(y, field.add(field.mul(a, x_sq), field.mul(b, x)))
                digit = field.index_of(c)
                if digit:
                    elements.add(scheme.block_value(block, digit))
            sets.append(
                LogSparseSet(tuple(sorted(elements)), sparsity_c=sparsity_c, allow_zero=True)
            )
    provenance = {
        "kind": "explicit",
        "q": q,
        "field": field.descriptor,
        "mode": mode,
        "sparsity_c": sparsity_c,
    }
    family = SetFamily(tuple(sets), provenance=provenance, offset=0, pre_shift=True)
    return family, scheme


class ExplicitDecomposer:
    """Constructive membership for explicit families.

    Decomposing a target into base-q digits names one polynomial vertex
    per nonzero digit; the expansion property guarantees a matching that
    assigns each of them a distinct point, i.e. a distinct set containing
    that digit value.  A matching failure is an internal error, never a
    property of the input.
    """

    def __init__(self, family: SetFamily):
        prov = family.provenance
        if prov.get("kind") != "explicit":
            raise UsageError("decompose needs an explicit-construction family")
        from .fields import parse_descriptor

        self.family = family
        self.field = parse_descriptor(prov["field"])
        self.graph = build_condenser(self.field)
        q = self.field.q
        self.scheme = BlockScheme(n=q * q, m=(q * q) // 4, radix=q)
        self._pairs = _block_pairs(q, self.scheme.m)
        self._adjacency_cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def _digit_adjacency(self, block: int, digit: int) -> tuple[int, ...]:
        key = (block, digit)
        cached = self._adjacency_cache.get(key)
        if cached is None:
            a, b = self._pairs[block - 1]
            c = self.field.element_of(digit)
            cached = self.graph.poly_neighbors(self.graph.poly_index(a, b, c))
            self._adjacency_cache[key] = cached
        return cached

    def decompose(self, target: int) -> MatchingCertificate:
        family, scheme = self.family, self.scheme
        relative = target - family.offset
        if not 0 <= relative < scheme.range_size:
            raise UsageError(
                f"target {target} outside [{family.offset}, "
                f"{family.offset + scheme.range_size})"
            )
        digits = scheme.decompose_digits(relative)
        nonzero = [(i, d) for i, d in enumerate(digits, start=1) if d]
        rows = tuple(self._digit_adjacency(i, d) for i, d in nonzero)
        graph = BipartiteGraph(len(nonzero), scheme.n, rows)
        result = saturating_matching(graph)
        if isinstance(result, HallViolation):
            raise InternalInvariantError(
                f"expansion guarantees a matching for {len(nonzero)} blocks, "
                f"but target {target} produced a Hall violation"
            )
        assignment = result.as_dict()
        cert = MatchingCertificate(
            target,
            family.offset,
            tuple(
                CertAssignment(block, digit, assignment[row])
                for row, (block, digit) in enumerate(nonzero)
            ),
        )
        validate_certificate(family, scheme, cert, require_all_blocks=False)
        return cert


def decompose(family: SetFamily, target: int) -> MatchingCertificate:
    return ExplicitDecomposer(family).decompose(target)
