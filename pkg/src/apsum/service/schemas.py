"""Pydantic request/response models for the service.

Big integers travel as decimal strings, matching the on-disk JSON
formats, so the wire shapes and the file shapes are identical.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field


class FamilyDoc(BaseModel):
    n: int
    offset: str
    provenance: dict[str, Any]
    sets: list[list[str]]


class ConstructExplicitRequest(BaseModel):
    q: int
    mode: Literal["binary", "base_q"] = "binary"


class ConstructRandomRequest(BaseModel):
    n: int
    eps: str = Field(description="rational in (0,1), e.g. '1/2'")
    seed: int


class SparsityWindow(BaseModel):
    set_index: int
    window_start: str
    window_end: str
    count: int


class VerifySparseRequest(BaseModel):
    family: FamilyDoc
    c: int | None = None


class VerifySparseResponse(BaseModel):
    ok: bool
    checked_c: int
    violations: list[SparsityWindow]


class VerifyCoverageRequest(BaseModel):
    family: FamilyDoc
    exhaustive: bool = False
    samples: int | None = None
    seed: int | None = None
    threads: int = 1


class CoverageFailureDoc(BaseModel):
    target: str
    hall_witness: list[int]


class CoverageReport(BaseModel):
    targets_checked: int
    covered: int
    failures: list[CoverageFailureDoc]


class VerifyExpansionRequest(BaseModel):
    q: int
    x_max: int | None = None
    mode: Literal["exhaustive", "sampled"] = "exhaustive"
    samples: int | None = None
    seed: int | None = None


class ExpansionReportDoc(BaseModel):
    q: int
    x_max: int
    mode: str
    subsets_checked: int
    min_margin: int
    violations: list[list[int]]
    samples: int | None = None
    seed: int | None = None


class DecomposeRequest(BaseModel):
    family: FamilyDoc
    target: str


class AssignmentDoc(BaseModel):
    block: int
    digit: int
    set_index: int


class CertificateDoc(BaseModel):
    target: str
    offset: str
    assignments: list[AssignmentDoc]


class SumsetRequest(BaseModel):
    family: FamilyDoc
    below: str


class SumsetResponse(BaseModel):
    bound: str
    members: list[str]


class LongestApRequest(BaseModel):
    elements: list[str] | None = None
    gen: str | None = None
    below: str | None = None


class ApDoc(BaseModel):
    first: str
    step: str
    length: int


class BoundRequest(BaseModel):
    n: int
    c: int = 2


class BoundResponse(BaseModel):
    n: int
    C: int
    max_length: str
    iterations: int


class UnionBoundRequest(BaseModel):
    n: int
    eps: str = "1/2"


class UnionBoundResponse(BaseModel):
    n: int
    eps: str
    w: int
    m: int
    ideal_log_sum: float
    substituted_log_sum: float | None = Field(
        default=None, description="null when the bound is exactly zero (log -inf)"
    )
    majorant_truncated_log_sum: float
    majorant_geometric_log_sum: float | None = Field(
        default=None, description="null when the geometric series diverges"
    )


class ErrorDoc(BaseModel):
    error: str
    message: str
    exit_code: int
