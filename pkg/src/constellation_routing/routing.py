"""Single-source shortest paths on constellation grids.

Three solvers share one result contract:

* :func:`percolation_dijkstra` expands each settled node to its (at most
  four) grid neighbours and keeps discovered-but-unsettled nodes in a
  small unordered array that is scanned linearly for the next minimum.
* :func:`dijkstra_naive` is the textbook O(N^2) variant that scans every
  node on each extraction.
* :func:`dijkstra_heap` uses a binary heap with lazy deletion.

All solvers settle nodes in the same ``(distance, node id)`` order, so on
identical inputs they produce identical distance and predecessor arrays.
Operation counters are always collected.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .topology import ConstellationGrid

# Largest finite double; never used in arithmetic.
INF = sys.float_info.max

PERCOLATION = "percolation"
NAIVE = "naive"
HEAP = "heap"


class UnreachableError(LookupError):
    """Target has no path from the source."""


class InvariantViolation(AssertionError):
    """Raised by the debug checks when solver state becomes inconsistent."""


@dataclass
class OpCounters:
    min_search_comparisons: int = 0
    relaxations: int = 0
    frontier_peak: int = 0
    frontier_scan_total: int = 0
    extractions: int = 0
    # heap solver only
    heap_pushes: int = 0

    @property
    def total_ops(self) -> int:
        return self.min_search_comparisons + self.relaxations

    def as_dict(self) -> dict[str, int]:
        return {
            "min_search_comparisons": self.min_search_comparisons,
            "relaxations": self.relaxations,
            "frontier_peak": self.frontier_peak,
            "frontier_scan_total": self.frontier_scan_total,
            "extractions": self.extractions,
            "heap_pushes": self.heap_pushes,
        }


class Frontier:
    """Unordered set of discovered, unsettled nodes.

    Backed by a list plus a per-node membership flag; removal swaps the
    victim with the last element, so order carries no meaning.
    """

    __slots__ = ("members", "in_frontier")

    def __init__(self, n: int):
        self.members: list[int] = []
        self.in_frontier: list[bool] = [False] * n

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, node: int) -> bool:
        return self.in_frontier[node]

    def add(self, node: int) -> bool:
        """Append ``node`` unless already present. Returns True if added."""
        if self.in_frontier[node]:
            return False
        self.in_frontier[node] = True
        self.members.append(node)
        return True

    def pop_at(self, index: int) -> int:
        members = self.members
        node = members[index]
        last = members.pop()
        if index < len(members):
            members[index] = last
        self.in_frontier[node] = False
        return node


@dataclass
class SsspState:
    distance: list[float]
    visited: list[bool]
    predecessor: list[Optional[int]]
    frontier: Frontier
    counters: OpCounters = field(default_factory=OpCounters)

    @classmethod
    def start(cls, n: int, source: int) -> "SsspState":
        """Fresh state with ``source`` settled at distance 0."""
        state = cls(
            distance=[INF] * n,
            visited=[False] * n,
            predecessor=[None] * n,
            frontier=Frontier(n),
        )
        state.distance[source] = 0.0
        state.visited[source] = True
        state.counters.extractions = 1
        return state


@dataclass(frozen=True)
class ShortestPathResult:
    source: int
    distance: tuple[float, ...]
    predecessor: tuple[Optional[int], ...]
    counters: OpCounters
    algorithm: str = PERCOLATION
    # settle order; handy for monotonicity checks
    order: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.distance)

    def reachable(self, node: int) -> bool:
        return self.distance[node] != INF


def _check_source(grid: ConstellationGrid, source: int) -> None:
    if not 0 <= source < grid.node_count:
        raise IndexError(f"source {source} outside [0, {grid.node_count})")


# -- percolation solver ------------------------------------------------------


def percolate(grid: ConstellationGrid, current: int, state: SsspState) -> None:
    """Relax the grid links of the settled node ``current``.

    Every neighbour is counted as a relaxation; settled ones are skipped,
    the rest get their distance improved if possible and join the frontier.
    """
    dist = state.distance
    visited = state.visited
    pred = state.predecessor
    frontier = state.frontier
    base = dist[current]
    nbrs = grid.neighbors(current)
    state.counters.relaxations += len(nbrs)
    for v, w in nbrs:
        if visited[v]:
            continue
        nd = base + w
        if nd < dist[v]:
            dist[v] = nd
            pred[v] = current
        frontier.add(v)
    if len(frontier) > state.counters.frontier_peak:
        state.counters.frontier_peak = len(frontier)


def dynamic_min_search(state: SsspState) -> Optional[int]:
    """Settle and return the frontier node with the smallest distance.

    Ties go to the smaller node id. Returns ``None`` once the frontier is
    empty.
    """
    members = state.frontier.members
    size = len(members)
    counters = state.counters
    counters.min_search_comparisons += size
    counters.frontier_scan_total += size
    if not size:
        return None
    dist = state.distance
    best_i = 0
    best = members[0]
    best_d = dist[best]
    for i in range(1, size):
        node = members[i]
        d = dist[node]
        if d < best_d or (d == best_d and node < best):
            best_i, best, best_d = i, node, d
    state.frontier.pop_at(best_i)
    state.visited[best] = True
    counters.extractions += 1
    return best


def check_state(state: SsspState) -> None:
    """Frontier consistency checks; raises :class:`InvariantViolation`."""
    frontier = state.frontier
    members = frontier.members
    if len(set(members)) != len(members):
        raise InvariantViolation("frontier holds duplicate nodes")
    flagged = sum(frontier.in_frontier)
    if flagged != len(members) or not all(frontier.in_frontier[m] for m in members):
        raise InvariantViolation("frontier members and membership flags disagree")
    for m in members:
        if state.visited[m]:
            raise InvariantViolation(f"visited node {m} still in frontier")


def percolation_dijkstra(
    grid: ConstellationGrid,
    source: int,
    *,
    check_invariants: bool = False,
    on_extract: Optional[Callable[[int, SsspState], None]] = None,
) -> ShortestPathResult:
    """Shortest distances from ``source`` via percolation + dynamic min-search.

    With ``check_invariants`` the frontier is validated after every
    extraction. ``on_extract`` is called with each settled node and the
    live state (debug hook).
    """
    _check_source(grid, source)
    state = SsspState.start(grid.node_count, source)
    order = [source]
    current: Optional[int] = source
    while current is not None:
        percolate(grid, current, state)
        current = dynamic_min_search(state)
        if current is not None:
            order.append(current)
            if check_invariants:
                check_state(state)
            if on_extract is not None:
                on_extract(current, state)
    return ShortestPathResult(
        source=source,
        distance=tuple(state.distance),
        predecessor=tuple(state.predecessor),
        counters=state.counters,
        algorithm=PERCOLATION,
        order=tuple(order),
    )


# -- baselines ---------------------------------------------------------------


def dijkstra_naive(grid: ConstellationGrid, source: int) -> ShortestPathResult:
    """Array Dijkstra: each extraction scans all N nodes."""
    _check_source(grid, source)
    n = grid.node_count
    dist = [INF] * n
    pred: list[Optional[int]] = [None] * n
    visited = [False] * n
    dist[source] = 0.0
    counters = OpCounters()
    order = []
    for _ in range(n):
        u = -1
        best = INF
        for i in range(n):
            if not visited[i] and dist[i] < best:
                best = dist[i]
                u = i
        counters.min_search_comparisons += n
        counters.frontier_scan_total += n
        if u < 0:
            break
        visited[u] = True
        counters.extractions += 1
        order.append(u)
        nbrs = grid.neighbors(u)
        counters.relaxations += len(nbrs)
        for v, w in nbrs:
            if visited[v]:
                continue
            nd = best + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
    counters.frontier_peak = n
    return ShortestPathResult(
        source, tuple(dist), tuple(pred), counters, NAIVE, tuple(order)
    )


class _CountingHeap:
    """Binary min-heap of ``(distance, node)`` keys that counts comparisons."""

    __slots__ = ("items", "comparisons")

    def __init__(self) -> None:
        self.items: list[tuple[float, int]] = []
        self.comparisons = 0

    def __len__(self) -> int:
        return len(self.items)

    def push(self, item: tuple[float, int]) -> None:
        items = self.items
        items.append(item)
        i = len(items) - 1
        while i > 0:
            parent = (i - 1) >> 1
            self.comparisons += 1
            if item < items[parent]:
                items[i] = items[parent]
                i = parent
            else:
                break
        items[i] = item

    def pop(self) -> tuple[float, int]:
        items = self.items
        top = items[0]
        last = items.pop()
        if items:
            size = len(items)
            i = 0
            while True:
                child = 2 * i + 1
                if child >= size:
                    break
                right = child + 1
                if right < size:
                    self.comparisons += 1
                    if items[right] < items[child]:
                        child = right
                self.comparisons += 1
                if items[child] < last:
                    items[i] = items[child]
                    i = child
                else:
                    break
            items[i] = last
        return top


def dijkstra_heap(grid: ConstellationGrid, source: int) -> ShortestPathResult:
    """Binary-heap Dijkstra with lazy deletion of stale entries.

    ``min_search_comparisons`` counts heap key comparisons and
    ``heap_pushes`` the insertions; ``frontier_peak`` is the largest heap.
    """
    _check_source(grid, source)
    n = grid.node_count
    dist = [INF] * n
    pred: list[Optional[int]] = [None] * n
    visited = [False] * n
    dist[source] = 0.0
    counters = OpCounters()
    heap = _CountingHeap()
    heap.push((0.0, source))
    counters.heap_pushes = 1
    order = []
    peak = 1
    while heap:
        d, u = heap.pop()
        if visited[u]:
            continue
        visited[u] = True
        counters.extractions += 1
        order.append(u)
        nbrs = grid.neighbors(u)
        counters.relaxations += len(nbrs)
        for v, w in nbrs:
            if visited[v]:
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heap.push((nd, v))
                counters.heap_pushes += 1
        if len(heap) > peak:
            peak = len(heap)
    counters.min_search_comparisons = heap.comparisons
    counters.frontier_peak = peak
    return ShortestPathResult(
        source, tuple(dist), tuple(pred), counters, HEAP, tuple(order)
    )


SOLVERS: dict[str, Callable[[ConstellationGrid, int], ShortestPathResult]] = {
    PERCOLATION: percolation_dijkstra,
    NAIVE: dijkstra_naive,
    HEAP: dijkstra_heap,
}


def extract_path(result: ShortestPathResult, target: int) -> list[int]:
    """Source-first node sequence ending at ``target``."""
    if not 0 <= target < result.n:
        raise IndexError(f"target {target} outside [0, {result.n})")
    if result.distance[target] == INF:
        raise UnreachableError(f"node {target} is unreachable from {result.source}")
    path = [target]
    node = target
    while node != result.source:
        node = result.predecessor[node]
        if node is None or len(path) > result.n:
            raise UnreachableError(f"broken predecessor chain at node {path[-1]}")
        path.append(node)
    path.reverse()
    return path
