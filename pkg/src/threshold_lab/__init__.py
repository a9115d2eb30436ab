"""Deterministic binary linear-threshold dynamics on finite graphs.

Simulation, exhaustive limit-structure enumeration, structure-preserving
expansion transforms, counting-reduction gadgets, and a resilience
measure over type allocations.
"""

from .errors import (
    AlreadySymmetricError,
    BadParameterError,
    DisconnectedError,
    DuplicateEdgeError,
    GuardExceededError,
    IdentityViolatedError,
    InconsistentCountError,
    InputError,
    InvariantViolationError,
    LengthMismatchError,
    NodeOutOfRangeError,
    NotBipartiteError,
    OutOfFormulaRangeError,
    ResourceLimitError,
    SelfLoopError,
    ThresholdLabError,
    TimeoutExceededError,
    ValidityViolatedError,
    VariableMissingError,
    WeightOutOfRangeError,
)
from .graph_core import (
    ACTION_B,
    ACTION_W,
    Graph,
    TwoPartition,
    as_types,
    build_graph,
    format_profile,
    instance_from_dict,
    instance_to_dict,
    is_bipartite,
    is_valid_node,
    load_instance,
    parse_profile,
    two_partition,
    types_to_thresholds,
    validate_profile,
    validate_thresholds,
    validate_types,
)
from .dynamics import (
    LimitReport,
    WeightedGraph,
    build_weighted_graph,
    conflict_links,
    convergence_time,
    convergence_time_bound,
    default_guard,
    limit_cycle,
    make_step,
    make_step_inverted,
    make_step_types,
    make_step_weighted,
    ring_two_step,
    step,
    step_inverted,
    step_restricted,
    step_types,
    step_weighted,
    strong_assignments,
    weighted_graph_from_dict,
    weighted_graph_to_dict,
    weighted_types_to_thresholds,
    with_thresholds,
)
from .expansions import (
    ComponentInstance,
    ExpansionResult,
    ProfileLift,
    bipartite_expansion,
    commutation_check,
    compose_lifts,
    identity_lift,
    instances_isomorphic,
    integer_weights_to_unit,
    inverted_to_primary,
    is_symmetric_model,
    one_step_symmetric_expansion,
    remove_constant_node,
    remove_self_loops,
    signed_to_primary,
    symmetric_expansion,
)
from .enumeration import (
    DEFAULT_GUARD_N,
    BipartiteCycleCheck,
    LimitCensus,
    bipartite_cycle_identity,
    build_extremal_cycle_instance,
    census_to_dict,
    count_fixed_points_backtracking,
    enumerate_limits,
    is_reachable,
    predecessors,
    transition_table,
)
from .reductions import (
    CPRED_DISCREPANCY_NOTE,
    MONOTONE_2CNF,
    MONOTONE_2DNF,
    THREE_CNF,
    Formula,
    GadgetInstance,
    PredGadget,
    ReachablePredGadget,
    count_sat,
    fix_reduction,
    formula_from_dict,
    pred_reduction,
    reachable_pred_reduction,
    recover_sat_count,
)
from .resilience import (
    BoundsReport,
    RecoveryProblem,
    ResilienceResult,
    check_recovery,
    greedy_upper_bound_q,
    recovery_problem,
    resilience_bruteforce,
    resilience_closed_form,
    verify_bounds,
)

__version__ = "0.1.0"
