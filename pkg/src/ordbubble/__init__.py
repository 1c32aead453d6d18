"""Finite-relation algebra and preorder analysis toolkit."""

from .errors import (
    AlreadyComparable,
    CarrierMismatch,
    EmptyCarrier,
    InvalidSystem,
    InvariantViolation,
    NotAnEquivalence,
    NotAnIndifference,
    NotAPartialOrder,
    NotAPreorder,
    NotConstantOnClasses,
    NotIncreasing,
    NotNegativelyTransitive,
    NotOpen,
    NotSaturated,
    OrderError,
    PairInvalid,
    ParseError,
    TooLarge,
    UnknownLabel,
    ValidationError,
)
from .factor import (
    EquivalenceRelation,
    FactorThrough,
    Partition,
    QuotientRelation,
    classes,
    factor_relation,
    factor_through,
    indifference_curves,
    product_equivalence,
    refinement_map,
    refines,
    weak_factor_relation,
)
from .order_ext import (
    Rational,
    RationalEnumeration,
    UNIT_ENUMERATION,
    UtilityAssignment,
    cantor_embed,
    generalized_utility,
    h_map,
    szpilrajn_extend,
    szpilrajn_step,
)
from .relations import (
    Carrier,
    DerivedParts,
    PropertyReport,
    Relation,
    SaturationCheck,
    check_properties,
    check_saturation,
    combine,
    derived_parts,
    diagonal_relation,
    empty_relation,
    full_relation,
    is_E_complete,
    make_relation,
    restrict,
    transform,
    transitive_closure,
)
from .structure import (
    BourbakiFactor,
    Bubble,
    BubbleSystem,
    Loset,
    PreorderSplit,
    bourbaki_factor,
    bubble_compose,
    bubble_decompose,
    coproduct_preorder,
    enumerate_preorders,
    join_pair,
    split_preorder,
)
from .topology import (
    CompletenessReport,
    ConnectivityReport,
    FiniteTopology,
    Interval,
    ProjectionReport,
    connectivity_report,
    continuity_check,
    gaps,
    generate_topology,
    interval_topology,
    is_base,
    open_intervals,
    order_completeness_report,
    projection_check,
)

__version__ = "0.1.0"
