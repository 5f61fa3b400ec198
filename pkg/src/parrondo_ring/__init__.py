"""Cooperative Parrondo games on a ring of players.

Analyzes the ensemble game in which one of n circled players is picked
each turn and tosses a coin whose bias depends on the win/loss status
of the two nearest neighbors.  The package reduces the 2**n-state
chain by rotation/reflection symmetry, computes stationary
distributions and profit rates exactly (rational arithmetic) or fast
(floating point), and maps the region of the (p0, p1, p3) parameter
cube where the losing-plus-fair mixture turns winning.
"""

from .chain import (
    BoundaryCase,
    Params,
    ReducedChain,
    build_full_chain,
    build_reduced_chain,
    classify_boundary,
    full_transition,
    neighbor_code,
    payoff_flip,
)
from .means import (
    AugmentedChain,
    MeanReport,
    build_augmented,
    history_equivalence_check,
    markov_mean_variance,
    mean_mixed,
    mean_rate,
    mean_report,
    mu_n3_closed,
    mu_n4_closed,
)
from .region import (
    CubePoint,
    MeanEvaluator,
    NonMonotoneError,
    ParrondoInterval,
    Region,
    RegionEstimate,
    boundary_n4,
    classify_point,
    exact_volume_n3,
    interval_n3,
    parrondo_interval,
    surface_grid,
    symmetry_map,
    volume_monte_carlo,
    volume_riemann,
)
from .simulate import (
    AbsorptionReport,
    ProfitTrace,
    absorption_analysis,
    absorption_by_class,
    absorption_monte_carlo,
    coupled_simulate,
    reducible_mu,
    simulate,
)
from .states import (
    EquivClass,
    Symmetry,
    canonical_form,
    count_classes,
    enumerate_classes,
    orbit,
    reflect,
    rotate,
)
from .stationary import (
    Distribution,
    ReducibleChainError,
    check_detailed_balance,
    closed_form_n3,
    closed_form_n4,
    closed_form_n4_rho2_forms,
    lift_to_full,
    normalize_measure,
    solve_stationary,
    stationary_distribution,
)

__version__ = "0.1.0"
