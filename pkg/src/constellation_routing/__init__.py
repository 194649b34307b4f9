"""Percolation-Dijkstra routing for mega-constellation torus grids."""

from .analysis import (
    ComplexityPrediction,
    OpComparison,
    XEstimate,
    efficiency,
    estimate_x,
    predicted_vs_measured,
)
from .bench import (
    BenchRecord,
    emit_results,
    load_results,
    run_scaling_sweep,
    run_typical_constellations,
)
from .routing import (
    INF,
    Frontier,
    OpCounters,
    ShortestPathResult,
    SsspState,
    UnreachableError,
    dijkstra_heap,
    dijkstra_naive,
    dynamic_min_search,
    extract_path,
    percolate,
    percolation_dijkstra,
)
from .topology import (
    ConstellationGrid,
    ExplicitWeights,
    GridSpec,
    GridSpecError,
    SeamPolicy,
    UniformWeights,
    UnitWeights,
    build_grid,
)

__version__ = "0.1.0"
