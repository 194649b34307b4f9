"""Operation-count model for percolation routing.

The percolation solver does at most 4 relaxations per node plus one
frontier scan per extraction. If X is the mean frontier length scanned,
its cost is ``(4 + X) * N`` against ``2 * N**2`` for array Dijkstra.
"""

from __future__ import annotations

import random
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .routing import NAIVE, ShortestPathResult, percolation_dijkstra
from .topology import GridSpec, build_grid

# Reference ratio X / N reported for the percolation frontier.
REFERENCE_X_RATIO = 1 / 7.5


@dataclass(frozen=True)
class ComplexityPrediction:
    n: int
    x: float
    proposed_ops: float
    dijkstra_ops: float
    eta: float

    @property
    def speedup(self) -> float:
        return 1.0 / self.eta


def efficiency(n: int, x: float) -> ComplexityPrediction:
    """Ratio of ``(4 + x) * n`` to ``2 * n**2``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    proposed = (4 + x) * n
    naive = 2 * n * n
    return ComplexityPrediction(n, x, proposed, naive, proposed / naive)


def run_x(result: ShortestPathResult) -> float:
    """Mean frontier length scanned per extraction for one run."""
    c = result.counters
    return c.frontier_scan_total / c.extractions


@dataclass(frozen=True)
class XEstimate:
    spec: GridSpec
    trials: int
    mean_x: float
    std_x: float
    ratio_to_n: float
    sources: tuple[int, ...] = ()
    samples: tuple[float, ...] = ()


def estimate_x(
    spec: GridSpec, trials: int, seed: int = 0, *, workers: Optional[int] = None
) -> XEstimate:
    """Monte Carlo estimate of the average frontier scan length.

    Sources are drawn uniformly from ``random.Random(seed)``. With
    ``workers`` > 1 trials run on a thread pool; results are aggregated in
    trial order, so the estimate does not depend on scheduling.
    """
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    grid = build_grid(spec)
    rng = random.Random(seed)
    sources = [rng.randrange(grid.node_count) for _ in range(trials)]

    def one(src: int) -> float:
        return run_x(percolation_dijkstra(grid, src))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(one, sources))
    else:
        samples = [one(s) for s in sources]

    mean_x = statistics.fmean(samples)
    std_x = statistics.pstdev(samples)
    return XEstimate(
        spec=spec,
        trials=trials,
        mean_x=mean_x,
        std_x=std_x,
        ratio_to_n=mean_x / grid.node_count,
        sources=tuple(sources),
        samples=tuple(samples),
    )


@dataclass(frozen=True)
class OpComparison:
    """Measured counters of one run next to the cost model."""

    algorithm: str
    n: int
    measured_ops: int
    min_search_comparisons: int
    relaxations: int
    measured_x: Fraction
    predicted_ops: Fraction
    naive_model_ops: Optional[int]
    ratio: float

    @property
    def identity_holds(self) -> bool:
        return self.predicted_ops == self.measured_ops


def predicted_vs_measured(result: ShortestPathResult) -> OpComparison:
    """Compare a run's counters with ``(4 + X) * N`` (and ``2 * N**2``).

    ``X`` is the measured frontier scan total divided by the extraction
    count; kept as a Fraction so the model reproduces the counters exactly
    when every node was extracted.
    """
    c = result.counters
    n = result.n
    x = Fraction(c.frontier_scan_total, c.extractions) if c.extractions else Fraction(0)
    predicted = (4 + x) * n
    measured = c.min_search_comparisons + c.relaxations
    naive_model = 2 * n * n if result.algorithm == NAIVE else None
    denom = naive_model if naive_model is not None else predicted
    return OpComparison(
        algorithm=result.algorithm,
        n=n,
        measured_ops=measured,
        min_search_comparisons=c.min_search_comparisons,
        relaxations=c.relaxations,
        measured_x=x,
        predicted_ops=predicted,
        naive_model_ops=naive_model,
        ratio=float(measured / denom) if denom else float("nan"),
    )


def model_ratio(n: int, x_ratio: float = REFERENCE_X_RATIO) -> float:
    """Predicted percolation / naive cost at ``n`` nodes with ``X = x_ratio * n``."""
    return efficiency(n, x_ratio * n).eta

