"""Finite model checking for Arrow's theorem through the lens of self-reference."""

from .consistency import (
    QuasiFlags,
    TheoremConfig,
    TheoremReport,
    ValidSubset,
    consistent,
    is_consistency_respecting,
    is_quasi_godelian,
    quasi_flags,
    table_overlap_report,
    valid_profiles,
    verify_theorem,
)
from .errors import (
    ArrowlabError,
    DimensionError,
    EmptyAlternativesError,
    NoDigitsError,
    ParseError,
    SizeError,
    StructureError,
    UnknownKindError,
)
from .lattice import (
    AlternativeSet,
    BooleanAlgebra,
    Cycle,
    PreferenceLattice,
    ProductLattice,
    WeakOrder,
    boolean_algebra,
    check_classical_lemma,
    digits_decode,
    digits_encode,
    enumerate_weak_orders,
    format_chain,
    join,
    join_plus,
    leq,
    meet,
    negate,
    parse_chain,
    top,
)
from .social_choice import (
    Profile,
    ProfileSpace,
    Swf,
    audit,
    builtin_swf,
    find_condorcet_witnesses,
    has_dictator,
    has_vetoer,
    parse_profile,
    parse_rule,
    profile_space,
    satisfies_iia,
    satisfies_unanimity,
    unrestricted_domain,
)
from .srs import EmbeddableSrs, Srs, check_embeddable, find_diagonaliser, find_fixed_points, verify_adl
from .srs_instances import Family, embeddable_omega, make_srs

__version__ = "0.1.0"
