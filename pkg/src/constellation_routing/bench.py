"""Benchmark harness: orbit-count sweep and named constellations.

Counters are deterministic and carry the checks; wall times are
reported for inspection only.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .routing import HEAP, NAIVE, PERCOLATION, SOLVERS, ShortestPathResult
from .topology import GridSpec, UniformWeights, UnitWeights, build_grid

ALGORITHMS = (PERCOLATION, NAIVE, HEAP)

SWEEP_SLOTS = 18
SWEEP_PLANES = range(3, 37)

# label -> (planes, slots)
TYPICAL_CONSTELLATIONS = {
    "oneweb": (18, 36),
    "kuiper": (34, 34),
    "starlink-a": (72, 22),
    "starlink-b": (24, 66),
}


class BenchError(RuntimeError):
    pass


@dataclass(frozen=True)
class BenchRecord:
    label: str
    planes: int
    slots: int
    n: int
    algorithm: str
    repetitions: int
    median_ns: int
    min_search_comparisons: int
    relaxations: int
    frontier_peak: int
    measured_x: float

    @property
    def total_ops(self) -> int:
        return self.min_search_comparisons + self.relaxations


FIELDNAMES = tuple(f.name for f in fields(BenchRecord))
TIMING_FIELD = "median_ns"
_INT_FIELDS = {f.name for f in fields(BenchRecord) if f.type in ("int", int)}


def _time_solver(grid, algorithm: str, source: int, repetitions: int):
    solver = SOLVERS[algorithm]
    timings = []
    result: Optional[ShortestPathResult] = None
    for _ in range(repetitions):
        t0 = time.perf_counter_ns()
        run = solver(grid, source)
        timings.append(time.perf_counter_ns() - t0)
        if result is not None and run.counters != result.counters:
            raise BenchError(f"{algorithm}: counters differ between repetitions")
        result = run
    assert result is not None
    return result, int(statistics.median(timings))


def bench_grid(
    label: str,
    spec: GridSpec,
    repetitions: int = 1,
    source: int = 0,
    algorithms: Sequence[str] = ALGORITHMS,
) -> list[BenchRecord]:
    """Run every solver on one grid; fails if their distances disagree."""
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    grid = build_grid(spec)
    records = []
    reference: Optional[ShortestPathResult] = None
    for algorithm in algorithms:
        result, median_ns = _time_solver(grid, algorithm, source, repetitions)
        if reference is not None and result.distance != reference.distance:
            raise BenchError(
                f"{label}: {algorithm} distances disagree with {reference.algorithm}"
            )
        reference = reference or result
        c = result.counters
        records.append(
            BenchRecord(
                label=label,
                planes=spec.planes,
                slots=spec.slots,
                n=grid.node_count,
                algorithm=algorithm,
                repetitions=repetitions,
                median_ns=median_ns,
                min_search_comparisons=c.min_search_comparisons,
                relaxations=c.relaxations,
                frontier_peak=c.frontier_peak,
                measured_x=c.min_search_comparisons / grid.node_count,
            )
        )
    return records


def _weights(weighted: bool, seed: int):
    return UniformWeights(0.5, 1.5, seed) if weighted else UnitWeights()


def run_scaling_sweep(
    repetitions: int = 1,
    seed: int = 0,
    *,
    planes: Iterable[int] = SWEEP_PLANES,
    slots: int = SWEEP_SLOTS,
    weighted: bool = False,
) -> list[BenchRecord]:
    """P x 18 grids for P = 3..36, all solvers from node 0.

    ``seed`` only matters with ``weighted=True`` (uniform weights in
    [0.5, 1.5]); the default unit-weight sweep is seed-independent.
    """
    records = []
    for p in planes:
        spec = GridSpec(p, slots, weight_model=_weights(weighted, seed))
        records.extend(bench_grid(f"sweep-{p}x{slots}", spec, repetitions))
    return records


def run_typical_constellations(
    repetitions: int = 1, seed: int = 0, *, weighted: bool = False
) -> list[BenchRecord]:
    records = []
    for label, (p, s) in TYPICAL_CONSTELLATIONS.items():
        spec = GridSpec(p, s, weight_model=_weights(weighted, seed))
        records.extend(bench_grid(label, spec, repetitions))
    return records


def ops_crossover(
    records: Sequence[BenchRecord], algorithm: str = PERCOLATION, baseline: str = HEAP
) -> Optional[int]:
    """Smallest N at which ``algorithm`` needs more ops than ``baseline``.

    Informational only. ``None`` if it never does.
    """
    by_key = {(r.label, r.algorithm): r for r in records}
    for r in sorted(records, key=lambda r: r.n):
        if r.algorithm != algorithm:
            continue
        base = by_key.get((r.label, baseline))
        if base is not None and r.total_ops > base.total_ops:
            return r.n
    return None


def time_crossover(
    records: Sequence[BenchRecord], algorithm: str = PERCOLATION, baseline: str = HEAP
) -> Optional[int]:
    """Like :func:`ops_crossover` but on median wall time."""
    by_key = {(r.label, r.algorithm): r for r in records}
    for r in sorted(records, key=lambda r: r.n):
        if r.algorithm != algorithm:
            continue
        base = by_key.get((r.label, baseline))
        if base is not None and r.median_ns > base.median_ns:
            return r.n
    return None


# -- serialization -----------------------------------------------------------


def _columns(include_timing: bool) -> list[str]:
    return [f for f in FIELDNAMES if include_timing or f != TIMING_FIELD]


def format_results(
    records: Sequence[BenchRecord], fmt: str = "csv", *, include_timing: bool = True
) -> str:
    """Render records as CSV (header + one row each) or a JSON array."""
    if not records:
        raise ValueError("no benchmark records to emit")
    cols = _columns(include_timing)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in records:
            row = asdict(r)
            writer.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in cols])
        return buf.getvalue()
    if fmt == "json":
        rows = [{c: asdict(r)[c] for c in cols} for r in records]
        return json.dumps(rows, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r} (use csv or json)")


def emit_results(
    records: Sequence[BenchRecord],
    fmt: str,
    destination: Union[str, Path],
    *,
    include_timing: bool = True,
) -> Path:
    text = format_results(records, fmt, include_timing=include_timing)
    path = Path(destination)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror or exc}") from exc
    return path


def _record_from_row(row: dict) -> BenchRecord:
    missing = [c for c in FIELDNAMES if c not in row]
    if missing:
        raise ValueError(f"result row is missing columns: {', '.join(missing)}")
    values = {}
    for name in FIELDNAMES:
        v = row[name]
        if name in _INT_FIELDS:
            values[name] = int(v)
        elif name == "measured_x":
            values[name] = float(v)
        else:
            values[name] = str(v)
    return BenchRecord(**values)


def parse_results(text: str, fmt: str) -> list[BenchRecord]:
    if fmt == "csv":
        return [_record_from_row(row) for row in csv.DictReader(io.StringIO(text))]
    if fmt == "json":
        return [_record_from_row(row) for row in json.loads(text)]
    raise ValueError(f"unknown format {fmt!r} (use csv or json)")


def load_results(source: Union[str, Path], fmt: Optional[str] = None) -> list[BenchRecord]:
    path = Path(source)
    fmt = fmt or format_for_path(path)
    return parse_results(path.read_text(encoding="utf-8"), fmt)


def format_for_path(path: Union[str, Path]) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".csv":
        return "csv"
    raise ValueError(f"cannot infer format from {str(path)!r}; pass csv or json explicitly")
