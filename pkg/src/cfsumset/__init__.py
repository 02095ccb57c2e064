"""Exact decomposition of reals into sums of continued fractions with large partial quotients."""
from .cf import (
    ContinuedFraction,
    CylinderInterval,
    DomainError,
    cf_from_rational,
    continuant,
    continuant_ratio_bound,
    convergents,
    cylinder,
    rational_from_cf,
)
from .decompose import (
    DecompositionResult,
    InvariantViolation,
    Termination,
    decompose,
    decompose_checked,
    decompose_mixed,
)
from .gaps import GapInterval, Verdict, classify, gap, metallic_compare, verify_disjoint
from .oracle import cross_check_decomposition, enumerate_sk, gap_interior_empty, sumset_contains
from .sources import (
    NumberSource,
    RationalSource,
    SourceExhausted,
    StreamSource,
    SurdSource,
    e_minus_2,
    parse_source,
    pi_minus_3,
)

__version__ = "0.1.0"
