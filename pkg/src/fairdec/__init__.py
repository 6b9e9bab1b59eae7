"""Exact-arithmetic random assignment: rules, decompositions, and fairness checks."""

from fairdec.core import (
    AssignmentMatrix,
    DeterministicAssignment,
    EnvyMatrix,
    Instance,
    Lottery,
    MatrixValidation,
    Rational,
    as_rational,
    envies,
    envy_matrix,
    is_dec_ef,
    matrix_of,
    validate_matrix,
)
from fairdec.decomposers import (
    TwoTypeStructure,
    birkhoff,
    claim1_diagnostic,
    decompose_three_agent,
    decompose_two_type,
    detect_two_type,
    uniform_decomposition,
)
from fairdec.errors import (
    FairdecError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
)
from fairdec.formats import (
    default_names,
    format_instance,
    format_lottery,
    format_matrix,
    parse_instance,
    parse_lottery,
    parse_matrix,
)
from fairdec.oracles import (
    ef_decomposable,
    minimax_envy,
    reversal_symmetric_implementable,
)
from fairdec.properties import (
    equal_treatment_of_equals,
    is_ex_post_efficient,
    is_pareto_optimal,
    is_sd_ef,
    is_sd_efficient,
    is_weak_sd_ef,
    sd_dominates,
    sd_improvement,
)
from fairdec.rules import probabilistic_serial, random_priority, serial_dictatorship
from fairdec.search import (
    SearchFailure,
    SearchReport,
    canonical_form,
    enumerate_profiles,
    verify_ps_ef_decomposable,
    verify_rp_dec_ef,
)

__all__ = [
    "AssignmentMatrix",
    "DeterministicAssignment",
    "EnvyMatrix",
    "FairdecError",
    "Instance",
    "Lottery",
    "MatrixValidation",
    "ParseError",
    "PreconditionError",
    "Rational",
    "ResourceLimitError",
    "SearchFailure",
    "SearchReport",
    "TwoTypeStructure",
    "as_rational",
    "birkhoff",
    "canonical_form",
    "claim1_diagnostic",
    "decompose_three_agent",
    "decompose_two_type",
    "default_names",
    "detect_two_type",
    "ef_decomposable",
    "enumerate_profiles",
    "envies",
    "envy_matrix",
    "equal_treatment_of_equals",
    "format_instance",
    "format_lottery",
    "format_matrix",
    "is_dec_ef",
    "is_ex_post_efficient",
    "is_pareto_optimal",
    "is_sd_ef",
    "is_sd_efficient",
    "is_weak_sd_ef",
    "matrix_of",
    "minimax_envy",
    "parse_instance",
    "parse_lottery",
    "parse_matrix",
    "probabilistic_serial",
    "random_priority",
    "reversal_symmetric_implementable",
    "sd_dominates",
    "sd_improvement",
    "serial_dictatorship",
    "uniform_decomposition",
    "validate_matrix",
    "verify_ps_ef_decomposable",
    "verify_rp_dec_ef",
]

__version__ = "0.1.0"
