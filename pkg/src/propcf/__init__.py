"""Proper continued fractions: exact arithmetic, expansions, candidate
classification, and the two-dimensional digit-generating map."""

from .exactreal import (
    GOLDEN,
    ExactReal,
    IncompatibleSurds,
    Interval,
    ParseError,
    PrecisionExhausted,
    Rational,
    Surd,
    floor_exact,
    frac_part,
    get_default_precision,
    parse_exact,
    set_default_precision,
    sqrt_exact,
    to_text,
)
from .pcf import (
    ConvergentSeq,
    ImproperDigits,
    MiddleCaseError,
    NotCoprime,
    PCFExpansion,
    PartialQuotient,
    convergents,
    enumerate_rational_expansions,
    expand,
    expansion_from_json,
    expansion_to_json,
    longest_chain,
    moebius_product,
    one_minus_transform,
    pcf_step,
    rational_images,
    reconstruct,
)
from .candidates import (
    BoundTooSmall,
    CandidatePair,
    CutoffVerdict,
    FracCharReport,
    InvariantViolation,
    LiftSearchResult,
    Parity,
    RayleighReport,
    RealizationWitness,
    ReturnTimeReport,
    SharpnessReport,
    approximation_margins,
    beatty,
    candidate_p_for_q,
    candidate_q_for_p,
    cutoff_margin_survey,
    fractional_part_characterization,
    gauss_map,
    is_candidate,
    lift_index_search,
    lift_tail,
    push_down_index,
    q2_cutoff_check,
    rayleigh_partition_check,
    realizable_as_q2,
    realizable_as_q2_oracle,
    realize_odd,
    return_time_check,
    sharpness_witness,
    sweep_rows,
)
from .gauss2d import (
    CylinderAddress,
    GrowthReport,
    JointState,
    OnBoundary,
    OrbitRecord,
    ZeroCoordinate,
    birkhoff_cylinder_frequencies,
    bits_for_orbit_length,
    cylinder_area_monte_carlo,
    cylinder_of,
    emit_y_scatter,
    engel_expand,
    engel_pairs,
    engel_step,
    eigenvalues_of_digit_matrix,
    float_orbit,
    greedy_y,
    growth_exponent,
    joint_step,
    leading_cylinders,
    orbit,
    random_unit_rational,
    varnum_expand,
    varnum_step,
    y_of_x,
    y_value_from_digits,
)

__all__ = [
    # exact arithmetic
    "GOLDEN",
    "ExactReal",
    "IncompatibleSurds",
    "Interval",
    "ParseError",
    "PrecisionExhausted",
    "Rational",
    "Surd",
    "floor_exact",
    "frac_part",
    "get_default_precision",
    "parse_exact",
    "set_default_precision",
    "sqrt_exact",
    "to_text",
    # expansions and convergents
    "ConvergentSeq",
    "ImproperDigits",
    "MiddleCaseError",
    "NotCoprime",
    "PCFExpansion",
    "PartialQuotient",
    "convergents",
    "enumerate_rational_expansions",
    "expand",
    "expansion_from_json",
    "expansion_to_json",
    "longest_chain",
    "moebius_product",
    "one_minus_transform",
    "pcf_step",
    "rational_images",
    "reconstruct",
    # candidate pairs and realization
    "BoundTooSmall",
    "CandidatePair",
    "CutoffVerdict",
    "FracCharReport",
    "InvariantViolation",
    "LiftSearchResult",
    "Parity",
    "RayleighReport",
    "RealizationWitness",
    "ReturnTimeReport",
    "SharpnessReport",
    "approximation_margins",
    "beatty",
    "candidate_p_for_q",
    "candidate_q_for_p",
    "cutoff_margin_survey",
    "fractional_part_characterization",
    "gauss_map",
    "is_candidate",
    "lift_index_search",
    "lift_tail",
    "push_down_index",
    "q2_cutoff_check",
    "rayleigh_partition_check",
    "realizable_as_q2",
    "realizable_as_q2_oracle",
    "realize_odd",
    "return_time_check",
    "sharpness_witness",
    "sweep_rows",
    # the joint map and digit families
    "CylinderAddress",
    "GrowthReport",
    "JointState",
    "OnBoundary",
    "OrbitRecord",
    "ZeroCoordinate",
    "birkhoff_cylinder_frequencies",
    "bits_for_orbit_length",
    "cylinder_area_monte_carlo",
    "cylinder_of",
    "emit_y_scatter",
    "engel_expand",
    "engel_pairs",
    "engel_step",
    "eigenvalues_of_digit_matrix",
    "float_orbit",
    "greedy_y",
    "growth_exponent",
    "joint_step",
    "leading_cylinders",
    "orbit",
    "random_unit_rational",
    "varnum_expand",
    "varnum_step",
    "y_of_x",
    "y_value_from_digits",
]

__version__ = "0.1.0"
