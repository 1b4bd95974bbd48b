"""Exact correlators of entangled field-particle operators, their
weak-coupling stochastic limit, and the free master-field algebra."""

from .correlator import (
    FOCK,
    GAUSSIAN,
    LimitStructureError,
    StateSpec,
    apply_state,
    finite_lambda_correlator,
    limit_correlator,
    pairing_factor,
    take_limit,
    temperature,
)
from .diagrams import (
    Diagram,
    Edge,
    Relation,
    classify,
    count_fock_surviving,
    count_non_crossing,
    enumerate_pairings,
    is_non_crossing,
)
from .masterfield import (
    BogoliubovCoeffs,
    EquivalenceReport,
    MasterLetter,
    bosonic_double_check,
    check_free_equivalence,
    free_correlator,
)
from .oracle import (
    Assignment,
    UnassignedSymbolError,
    doubled_normal_order,
    numeric_eval,
    qdef_normal_order,
    random_assignment,
    reorder_annihilators,
)
from .quadrature import (
    DEFAULT_SWEEP,
    QuadratureError,
    QuadratureResult,
    oscillation_quadrature,
    quadrature_sweep,
)
from .scalars import (
    DeltaK,
    EnergyDelta,
    MFactor,
    Monomial,
    OscExp,
    ScalarSum,
    TimeDelta,
    apply_momentum_deltas,
    multiply,
    q_factor,
)
from .symbols import (
    EnergyComb,
    TimeComb,
    TimeLabel,
    WaveLabel,
    dot,
    dot_p,
    omega,
    shift_p,
)
from .words import (
    Letter,
    OperatorWord,
    PatternError,
    balanced_patterns,
    parse_pattern,
    word_from_pattern,
)

__version__ = "0.1.0"
