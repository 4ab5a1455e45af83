"""Post-processing and timing-tolerant scoring of discrete state sequences."""

from .measures import (
    GtsParams,
    LtsParams,
    accuracy,
    duration_penalty,
    extend,
    gts_distance,
    lts_distance,
    lts_measure,
)
from .projection import (
    ProjectionGraph,
    ProjectionResult,
    build_graph,
    build_graph_binary,
    energy,
    most_common_state,
    project,
    project_labels,
    shortest_path,
    split_long_events,
)
from .sequence import (
    DISCRETE,
    DiscreteMetric,
    Event,
    Labels,
    Segmentation,
    StateMetric,
    StateSequence,
    StateSpace,
    TableMetric,
    segments,
    standard_distance,
)
from .simulate import (
    NoiseModel,
    SweepConfig,
    SweepRow,
    default_base_labels,
    generate_noisy_labels,
    run_sweep,
)

__all__ = [
    "DISCRETE",
    "DiscreteMetric",
    "Event",
    "GtsParams",
    "Labels",
    "LtsParams",
    "NoiseModel",
    "ProjectionGraph",
    "ProjectionResult",
    "Segmentation",
    "StateMetric",
    "StateSequence",
    "StateSpace",
    "SweepConfig",
    "SweepRow",
    "TableMetric",
    "accuracy",
    "build_graph",
    "build_graph_binary",
    "default_base_labels",
    "duration_penalty",
    "energy",
    "extend",
    "generate_noisy_labels",
    "gts_distance",
    "lts_distance",
    "lts_measure",
    "most_common_state",
    "project",
    "project_labels",
    "run_sweep",
    "segments",
    "shortest_path",
    "split_long_events",
    "standard_distance",
]

__version__ = "0.1.0"
