"""Graph products of groups: piling normal form, alternating random walks,
and effective drift lower bounds."""

from .drift import (
    DriftBound,
    PivotIncrementDistribution,
    chernoff_tail_bound,
    drift_lower_bound,
    feasible_t_max,
    increment_mean,
    increment_mgf,
)
from .experiments import (
    CheckReport,
    DriftEstimate,
    SweepRow,
    TrialBatch,
    TrialMetrics,
    check_domination,
    check_pivot_step_probability,
    check_lower_tail,
    derive_seed,
    estimate_drift,
    log_spaced_ints,
    run_batch,
    sweep_cycles,
)
from .graphs import (
    Graph,
    GraphStats,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    graph_stats,
    make_graph,
    max_clique_neighbourhood,
    max_clique_size,
    maximal_cliques,
    parse_graph,
)
from .groups import CyclicGroup, IntegerGroup, VertexGroup, groups_from_spec, uniform_groups
from .piling import (
    CorruptPilingError,
    Piling,
    append,
    concat,
    empty_piling,
    from_strings,
    init,
    invert,
    is_prefix,
    linearize,
    piling_of_word,
    render,
    syllable_length,
    term,
    validate,
)
from .walk import (
    FixedWord,
    ParetoLetter,
    PivotalReport,
    WalkConfig,
    WalkTrace,
    WordChoice,
    is_local_geodesic,
    is_strong_pivot_choice,
    pivot_replace,
    pivotal_times_bruteforce,
    run_walk,
    sample_mu,
    strong_choice_vertices,
)

__version__ = "0.1.0"
