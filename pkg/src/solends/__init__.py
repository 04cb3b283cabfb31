"""Towers of finite coset graphs approximating weak solenoids, and the
end counts of their leaves."""

from .graphs import (
    Alphabet,
    BallSnapshot,
    LabeledGraph,
    annulus_components,
    ball,
    decorate_with_loops,
    distance,
    is_covering,
    labeled_iso,
    make_action_graph,
    prune_loops,
)
from .leaves import (
    ClassificationTrace,
    EndsReport,
    FiberPoint,
    classify_fiber_point,
    classify_level,
    estimate_ends,
    make_policy,
    sample_fiber_points,
    stable_ball,
)
from .towers import (
    LevelBudgetError,
    Tower,
    VoltageAssignment,
    build_dyadic_tower,
    build_generalized_schori_tower,
    build_mixed_tower,
    build_rt_tower,
    build_schori_tower,
    build_torus_tower,
    mixed_degree_sequence,
    voltage_cover,
)
from .words import (
    InfiniteIndexError,
    Word,
    coset_count,
    parse_word,
    reduce,
    schori_generator_sets,
    stallings_fold,
    trace_word,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
