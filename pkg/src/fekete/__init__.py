"""Exact analysis of nearly-subadditive sequences.

Verification scans, certified slope brackets, doubling-chain certificates,
2-good merge chains, and explicit constructions, all in arbitrary-precision
rational arithmetic.
"""

from .checker import (
    QSequence,
    Violation,
    ViolationReport,
    check_convexity,
    check_q_monotone,
    q_sequence,
    scan_violations,
)
from .constructions import (
    ConstructionOutput,
    HorizonExhausted,
    TwoGoodChain,
    convex_from_error,
    enumerate_rationals,
    linear_error_example,
    rational_slope_sequence,
    simplest_rational_in,
    threshold_gap_example,
    two_good_chain,
)
from .limits import (
    Eq8Sample,
    LimitBracket,
    MuChainCertificate,
    chain_coverage_failures,
    fekete_bracket,
    find_split,
    g_deficit,
    mu_chain_certificate,
)
from .model import (
    ErrorTerm,
    ExplicitDomain,
    FullDomain,
    MuBandDomain,
    OnePlusDomain,
    PairDomain,
    SequencePrefix,
    ThresholdDomain,
    admits,
    builtin_error_term,
    format_rational,
    parse_error_term,
    parse_rational,
    parse_sequence,
    sequence_to_csv,
    sequence_to_json,
    zero_error_term,
)

__version__ = "0.1.0"

__all__ = [
    "ConstructionOutput",
    "Eq8Sample",
    "ErrorTerm",
    "ExplicitDomain",
    "FullDomain",
    "HorizonExhausted",
    "LimitBracket",
    "MuBandDomain",
    "MuChainCertificate",
    "OnePlusDomain",
    "PairDomain",
    "QSequence",
    "SequencePrefix",
    "ThresholdDomain",
    "TwoGoodChain",
    "Violation",
    "ViolationReport",
    "admits",
    "builtin_error_term",
    "chain_coverage_failures",
    "check_convexity",
    "check_q_monotone",
    "convex_from_error",
    "enumerate_rationals",
    "fekete_bracket",
    "find_split",
    "format_rational",
    "g_deficit",
    "linear_error_example",
    "mu_chain_certificate",
    "parse_error_term",
    "parse_rational",
    "parse_sequence",
    "q_sequence",
    "rational_slope_sequence",
    "scan_violations",
    "sequence_to_csv",
    "sequence_to_json",
    "simplest_rational_in",
    "threshold_gap_example",
    "two_good_chain",
    "zero_error_term",
]
