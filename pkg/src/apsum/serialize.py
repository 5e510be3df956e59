"""JSON forms for families, certificates, and reports.

Big integers always serialize as decimal strings so readers in any
language survive values like 2^(n log n / 8).  ``canonical_json`` renders
with sorted keys and a trailing newline, making identical inputs produce
byte-identical files.  Families are exported in public form: pre-shift
internal families are shifted up by 1 first, so every stored element is
a positive integer.
"""

from __future__ import annotations

import json
from typing import Any

from .blocks import CertAssignment, MatchingCertificate
from .core import ArithmeticProgression, LogSparseSet, SetFamily, minimal_sparsity_c, public_form
from .errors import UsageError

__all__ = [
    "canonical_json",
    "parse_big",
    "family_to_doc",
    "family_from_doc",
    "certificate_to_doc",
    "ap_to_doc",
]


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def parse_big(text: Any, what: str = "integer") -> int:
    """Decimal-string big integer; plain ints are tolerated on input."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise UsageError(f"{what} must be a decimal string")
    try:
        return int(text)
    except ValueError as exc:
        raise UsageError(f"malformed {what}: {text!r}") from exc


def family_to_doc(family: SetFamily) -> dict:
    exported = public_form(family)
    return {
        "n": exported.n,
        "offset": str(exported.offset),
        "provenance": dict(exported.provenance),
        "sets": [[str(e) for e in s.elements] for s in exported.sets],
    }


def family_from_doc(doc: dict) -> SetFamily:
    try:
        n = doc["n"]
        offset = parse_big(doc["offset"], "offset")
        provenance = dict(doc["provenance"])
        raw_sets = doc["sets"]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"family document missing field: {exc}") from exc
    if not isinstance(raw_sets, list) or len(raw_sets) != n:
        raise UsageError(f"family document claims n={n} but carries {len(raw_sets)} sets")
    parsed = [
        tuple(parse_big(e, "set element") for e in row) for row in raw_sets
    ]
    c = provenance.get("sparsity_c")
    if c is None:
        c = max((minimal_sparsity_c(row) for row in parsed), default=1)
        provenance["sparsity_c"] = c
    sets = tuple(LogSparseSet(row, sparsity_c=int(c)) for row in parsed)
    return SetFamily(sets, provenance=provenance, offset=offset, pre_shift=False)


def certificate_to_doc(cert: MatchingCertificate) -> dict:
    return {
        "target": str(cert.target),
        "offset": str(cert.offset),
        "assignments": [
            {"block": a.block, "digit": a.digit, "set_index": a.set_index}
            for a in cert.assignments
        ],
    }


def certificate_from_doc(doc: dict) -> MatchingCertificate:
    try:
        return MatchingCertificate(
            parse_big(doc["target"], "target"),
            parse_big(doc["offset"], "offset"),
            tuple(
                CertAssignment(int(a["block"]), int(a["digit"]), int(a["set_index"]))
                for a in doc["assignments"]
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed certificate document: {exc}") from exc


def ap_to_doc(ap: ArithmeticProgression) -> dict:
    return {"first": str(ap.first), "step": str(ap.step), "length": ap.length}
