"""Exact structure theory of local fields at the prime p.

Filtered unit-class and Artin-Schreier class spaces, degree-p cyclic
extensions with their ramification breaks and norm groups, and the
degree-p pairing between the two sides, all over exact field arithmetic.
"""

from .class_spaces import (
    AdaptedBasis,
    adapted_basis,
    as_class_reduce,
    coordinates,
    filtration_dims,
    first_trivial_level,
    unit_class_reduce,
    windowed_unit_reduce,
)
from .errors import (
    DomainError,
    InternalError,
    LfkError,
    MalformedInputError,
    OutOfWindowError,
    PrecisionError,
    UnsupportedCaseError,
)
from .extensions import (
    DegreePExtension,
    Line,
    attach_extension,
    ext_val,
    find_uniformizer,
    galois_apply,
    line_of,
    norm,
    ramification_break,
)
from .fp_linalg import (
    FpSubspace,
    FpVector,
    full_space,
    intersect,
    left_kernel,
    member,
    rref,
)
from .local_arith import (
    DEFAULT_PRECISION,
    FieldContext,
    FieldDescriptor,
    bp_index,
    make_field,
    parse_element,
    parse_field,
    series_residue_and_dlog,
    val,
)
from .pairings_verifiers import (
    CatalogLine,
    PairingReport,
    VerificationReport,
    add_line_catalog,
    claims_for,
    hilbert_symbol_q2,
    line_catalog,
    norm_class_subgroup,
    pairing_value,
    pairs_trivially,
    verify_all,
    verify_claim,
)

__all__ = [
    "AdaptedBasis",
    "CatalogLine",
    "DEFAULT_PRECISION",
    "DegreePExtension",
    "DomainError",
    "FieldContext",
    "FieldDescriptor",
    "FpSubspace",
    "FpVector",
    "InternalError",
    "LfkError",
    "Line",
    "MalformedInputError",
    "OutOfWindowError",
    "PairingReport",
    "PrecisionError",
    "UnsupportedCaseError",
    "VerificationReport",
    "adapted_basis",
    "add_line_catalog",
    "as_class_reduce",
    "attach_extension",
    "bp_index",
    "claims_for",
    "coordinates",
    "ext_val",
    "filtration_dims",
    "find_uniformizer",
    "first_trivial_level",
    "full_space",
    "galois_apply",
    "hilbert_symbol_q2",
    "intersect",
    "left_kernel",
    "line_catalog",
    "line_of",
    "make_field",
    "member",
    "norm",
    "norm_class_subgroup",
    "pairing_value",
    "pairs_trivially",
    "parse_element",
    "parse_field",
    "ramification_break",
    "rref",
    "series_residue_and_dlog",
    "unit_class_reduce",
    "val",
    "verify_all",
    "verify_claim",
    "windowed_unit_reduce",
]

__version__ = "0.1.0"
