"""Antichains with a multiplicity floor on every occurring level.

Library layers: family (bitmask set families and their predicates), bounds
(exact closed-form thresholds), construct (the explicit near-extremal
family), search (exhaustive exact-profile decision procedures), certio
(certificate format, verification, corpus), cli (command line shell).
"""

__version__ = "0.1.0"

from .bounds import (
    BoundsReport,
    DomainError,
    Inapplicable,
    Relaxed,
    Strict,
    binomial,
    central_binomial_inequality_holds,
    construction_applicability,
    g_upper_bound,
    min_m_for,
    n0_bounds,
)
from .certio import (
    Certificate,
    HeaderMismatch,
    IoFailure,
    ParseError,
    VerificationReport,
    certificate_for,
    read_certificate,
    read_certificates,
    regenerate_corpus,
    verify_certificate,
    write_certificate,
    write_certificates,
)
from .construct import (
    ConstructionLayout,
    ConstructionPostconditionFailed,
    GadgetPreconditionViolated,
    LabelGadget,
    LayoutInfeasible,
    build_construction,
    build_half_family,
    build_label_gadget,
    build_layout,
    colex_subsets,
)
from .family import (
    Empty,
    Family,
    LevelProfile,
    MultiplicityDeficit,
    NotIntersecting,
    SizeViolation,
    Star,
    Triangle,
    classify_two_sets,
    complement_family,
    elements_of,
    is_antichain,
    is_r_multiplicity_antichain,
    level_profile,
    mask_of,
    trim_to_exact,
)
from .search import (
    Exact,
    Feasible,
    Infeasible,
    InstanceTooLarge,
    Interval,
    InvalidInstance,
    LowerBound,
    ProfileInstance,
    SearchBudget,
    SearchConfig,
    SearchStats,
    ThresholdReport,
    Unknown,
    certify_threshold_range,
    feasible_exact_profile,
    g_exact,
    is_canonical_level_family,
    symmetry_prune_config,
)
