"""FastAPI application wrapping the library.

Every endpoint is a pure function of its request body; errors from the
library map onto HTTP statuses (400 usage, 422 verification, 500 broken
invariant) with a machine-parsable body carrying the CLI exit code.
"""

from __future__ import annotations

import math
from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import ap_search, bounds, explicit_construction, random_construction, sumsets
from ..blocks import scheme_for_family
from ..core import verify_log_sparse
from ..errors import ApsumError, InternalInvariantError, UsageError, VerificationError
from ..fields import Field
from ..serialize import (
    ap_to_doc,
    certificate_to_doc,
    family_from_doc,
    family_to_doc,
    parse_big,
)
from . import schemas

app = FastAPI(
    title="apsum",
    description="Log-sparse set families, sumset certificates, and progression bounds",
    version="0.1.0",
)


@app.exception_handler(ApsumError)
def apsum_error_handler(request: Request, exc: ApsumError) -> JSONResponse:
    if isinstance(exc, InternalInvariantError):
        status = 500
    elif isinstance(exc, VerificationError):
        status = 422
    else:
        status = 400
    body = schemas.ErrorDoc(
        error=type(exc).__name__, message=str(exc), exit_code=exc.exit_code
    )
    return JSONResponse(status_code=status, content=body.model_dump())


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/construct/explicit", response_model=schemas.FamilyDoc)
def construct_explicit(req: schemas.ConstructExplicitRequest):
    field = Field.of_order(req.q)
    family, _scheme = explicit_construction.build_family(field, req.mode)
    return family_to_doc(family)


@app.post("/construct/random", response_model=schemas.FamilyDoc)
def construct_random(req: schemas.ConstructRandomRequest):
    try:
        eps = Fraction(req.eps)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed eps {req.eps!r}") from exc
    scheme = random_construction.make_block_scheme(req.n, eps)
    family = random_construction.sample_family(scheme, req.seed)
    return family_to_doc(family)


@app.post("/verify/sparse", response_model=schemas.VerifySparseResponse)
def verify_sparse(req: schemas.VerifySparseRequest):
    family = family_from_doc(req.family.model_dump())
    violations = []
    checked_c = req.c
    for j, s in enumerate(family.sets):
        c = req.c if req.c is not None else s.sparsity_c
        checked_c = c if checked_c is None else checked_c
        ok, witness = verify_log_sparse(s.elements, c)
        if not ok:
            violations.append(
                schemas.SparsityWindow(
                    set_index=j,
                    window_start=str(witness.window_start),
                    window_end=str(witness.window_end),
                    count=witness.count,
                )
            )
    return schemas.VerifySparseResponse(
        ok=not violations, checked_c=checked_c or 1, violations=violations
    )


@app.post("/verify/coverage", response_model=schemas.CoverageReport)
def verify_coverage(req: schemas.VerifyCoverageRequest):
    family = family_from_doc(req.family.model_dump())
    scheme = scheme_for_family(family)
    targets = random_construction.coverage_targets(
        family, scheme, exhaustive=req.exhaustive, samples=req.samples, seed=req.seed
    )
    outcomes = random_construction.verify_coverage(
        family, scheme, targets, threads=req.threads
    )
    return random_construction.coverage_report(outcomes)


@app.post("/verify/expansion", response_model=schemas.ExpansionReportDoc)
def verify_expansion(req: schemas.VerifyExpansionRequest):
    field = Field.of_order(req.q)
    graph = explicit_construction.build_condenser(field)
    x_max = req.x_max if req.x_max is not None else (req.q * req.q) // 4
    report = explicit_construction.certify_expansion(
        graph, x_max, mode=req.mode, samples=req.samples, seed=req.seed
    )
    return schemas.ExpansionReportDoc(
        q=report.q,
        x_max=report.x_max,
        mode=report.mode,
        subsets_checked=report.subsets_checked,
        min_margin=report.min_margin,
        violations=[list(v) for v in report.violations],
        samples=report.samples,
        seed=report.seed,
    )


@app.post("/decompose", response_model=schemas.CertificateDoc)
def decompose(req: schemas.DecomposeRequest):
    family = family_from_doc(req.family.model_dump())
    target = parse_big(req.target, "target")
    cert = explicit_construction.decompose(family, target)
    return certificate_to_doc(cert)


@app.post("/sumset", response_model=schemas.SumsetResponse)
def sumset(req: schemas.SumsetRequest):
    family = family_from_doc(req.family.model_dump())
    bound = parse_big(req.below, "bound")
    result = sumsets.enumerate_sumset_below(family, bound)
    return schemas.SumsetResponse(
        bound=str(result.bound), members=[str(v) for v in result.members]
    )


@app.post("/longest-ap", response_model=schemas.ApDoc)
def longest_ap(req: schemas.LongestApRequest):
    if req.elements is not None:
        elements = sorted({parse_big(e, "element") for e in req.elements})
    elif req.gen is not None:
        if req.below is None:
            raise UsageError("generator input needs 'below'")
        u, v = ap_search.parse_generator(req.gen)
        elements = ap_search.two_geometric_set(u, v, parse_big(req.below, "bound"))
    else:
        raise UsageError("provide either 'elements' or 'gen'")
    ap = ap_search.longest_ap_dp(elements)
    return ap_to_doc(ap)


@app.post("/bound", response_model=schemas.BoundResponse)
def bound(req: schemas.BoundRequest):
    result = bounds.solve_max_length(bounds.BoundParams(req.n, req.c))
    return schemas.BoundResponse(
        n=req.n, C=req.c, max_length=str(result.max_length), iterations=result.iterations
    )


@app.post("/union-bound", response_model=schemas.UnionBoundResponse)
def union_bound(req: schemas.UnionBoundRequest):
    try:
        eps = Fraction(req.eps)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed eps {req.eps!r}") from exc
    scheme = random_construction.make_block_scheme(req.n, eps)
    report = random_construction.union_bound_probability(scheme)

    def finite_or_none(value: float) -> float | None:
        return None if math.isinf(value) else value

    return schemas.UnionBoundResponse(
        n=report.n,
        eps=str(report.eps),
        w=report.w,
        m=report.m,
        ideal_log_sum=report.ideal_log_sum,
        substituted_log_sum=finite_or_none(report.substituted_log_sum),
        majorant_truncated_log_sum=report.majorant_truncated_log_sum,
        majorant_geometric_log_sum=finite_or_none(report.majorant_geometric_log_sum),
    )
