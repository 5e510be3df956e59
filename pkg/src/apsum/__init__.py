"""Log-sparse integer set families, their sumsets, and the arithmetic
progressions inside them: constructions, matching certificates, and
explicit counting bounds."""

from .ap_search import longest_ap_bruteforce, longest_ap_dp
from .blocks import BlockScheme, MatchingCertificate, scheme_for_family, validate_certificate
from .bounds import BoundParams, classify_terms, decode_from_heavy, explicit_bound, solve_max_length
from .core import (
    ArithmeticProgression,
    LogSparseSet,
    SetFamily,
    ap_elements,
    public_form,
    shift_family,
    verify_log_sparse,
)
from .explicit_construction import build_condenser, build_family, certify_expansion, decompose
from .fields import Field
from .matching import BipartiteGraph, hall_check_exhaustive, max_matching, saturating_matching
from .random_construction import (
    make_block_scheme,
    sample_family,
    union_bound_probability,
    verify_coverage,
)
from .sumsets import contains_ap, enumerate_sumset_below, membership

__version__ = "0.1.0"

__all__ = [
    "ArithmeticProgression",
    "BipartiteGraph",
    "BlockScheme",
    "BoundParams",
    "Field",
    "LogSparseSet",
    "MatchingCertificate",
    "SetFamily",
    "ap_elements",
    "build_condenser",
    "build_family",
    "certify_expansion",
    "classify_terms",
    "contains_ap",
    "decode_from_heavy",
    "decompose",
    "enumerate_sumset_below",
    "explicit_bound",
    "hall_check_exhaustive",
    "longest_ap_bruteforce",
    "longest_ap_dp",
    "make_block_scheme",
    "max_matching",
    "membership",
    "public_form",
    "sample_family",
    "saturating_matching",
    "scheme_for_family",
    "shift_family",
    "solve_max_length",
    "union_bound_probability",
    "validate_certificate",
    "verify_coverage",
    "verify_log_sparse",
]
