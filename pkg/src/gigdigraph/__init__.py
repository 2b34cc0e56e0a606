"""Probabilistic analysis of Greatest Increase Grid (GIG) digraphs.

A GIG digraph is what steepest-ascent hill climbing does on an m x n lattice
whose cells carry distinct labels: every cell points at its highest-labelled
neighbour when that neighbour beats it, and cells with no better neighbour
are sinks (local maxima). This package gives exact rational probabilities for
paths, sink sets and sink counts under a uniformly random labeling, checks
them against exhaustive enumeration, and estimates basin statistics by
seeded simulation on larger grids.
"""
from .digraph import (
    Component,
    GigDigraph,
    Labeling,
    build_gig,
    components,
    contains_path,
    out_path,
    sinks,
)
from .errors import DomainError, GigError, InputError, ResourceCapError
from .exact import (
    ConnectivityBound,
    SeriesBoundResult,
    component_size_bound,
    connectivity_lower_bound,
    expected_sinks,
    multi_sink_probability,
    path_probability,
    series_bound,
    sink_covariance,
    sinks_independent,
    variance_sinks_by_pairs,
    variance_sinks_closed,
)
from .lattice import (
    Coord,
    GridDims,
    LatticePath,
    closed_neighborhood,
    k_sequence,
    monotone_paths,
    neighbors,
    squared_distance,
    turns,
)
from .montecarlo import SimulationConfig, SimulationStats, sample_labeling, simulate
from .oracle import (
    ConnectedEvent,
    ExactStatistics,
    OracleResult,
    PathEvent,
    SinksEvent,
    enumerate_event,
    exact_statistics,
    relative_order_event,
)

__all__ = [
    "Component",
    "ConnectedEvent",
    "ConnectivityBound",
    "Coord",
    "DomainError",
    "ExactStatistics",
    "GigDigraph",
    "GigError",
    "GridDims",
    "InputError",
    "Labeling",
    "LatticePath",
    "OracleResult",
    "PathEvent",
    "ResourceCapError",
    "SeriesBoundResult",
    "SimulationConfig",
    "SimulationStats",
    "SinksEvent",
    "build_gig",
    "closed_neighborhood",
    "component_size_bound",
    "components",
    "connectivity_lower_bound",
    "contains_path",
    "enumerate_event",
    "exact_statistics",
    "expected_sinks",
    "k_sequence",
    "monotone_paths",
    "multi_sink_probability",
    "neighbors",
    "out_path",
    "path_probability",
    "relative_order_event",
    "sample_labeling",
    "series_bound",
    "simulate",
    "sink_covariance",
    "sinks",
    "sinks_independent",
    "squared_distance",
    "turns",
    "variance_sinks_by_pairs",
    "variance_sinks_closed",
]

__version__ = "0.1.0"
