"""Torus-grid model of a mega-constellation backbone.

Satellites are addressed as ``(plane, slot)`` and flattened to
``plane * slots + slot``. Each satellite links to its two intra-plane
neighbours (slot +/- 1) and its two inter-plane neighbours (plane +/- 1,
same slot). Adjacency is computed from coordinates; only the weights
are stored, four per node.
"""

from __future__ import annotations

import enum
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Mapping, Union

# Neighbour directions, in the order neighbors() reports them.
INTRA_PREV, INTRA_NEXT, INTER_LEFT, INTER_RIGHT = range(4)
DIRECTIONS = ("intra-prev", "intra-next", "inter-left", "inter-right")
_OPPOSITE = (INTRA_NEXT, INTRA_PREV, INTER_RIGHT, INTER_LEFT)

MIN_RING = 3


class GridSpecError(ValueError):
    """Invalid grid parameters."""


class SeamPolicy(enum.Enum):
    FULL_TORUS = "torus"
    SEAM = "seam"


@dataclass(frozen=True)
class UnitWeights:
    """Every link costs 1.0 (hop count)."""


@dataclass(frozen=True)
class UniformWeights:
    """Independent link weights drawn from U(lo, hi) with a fixed seed."""

    lo: float
    hi: float
    seed: int = 0


@dataclass(frozen=True)
class ExplicitWeights:
    """Caller-supplied weight for every undirected link.

    Keys are ``(u, v)`` node-id pairs in either orientation.
    """

    table: Mapping[tuple[int, int], float] = field(hash=False)


WeightModel = Union[UnitWeights, UniformWeights, ExplicitWeights]


@dataclass(frozen=True)
class GridSpec:
    planes: int
    slots: int
    seam_policy: SeamPolicy = SeamPolicy.FULL_TORUS
    weight_model: WeightModel = field(default_factory=UnitWeights)

    def validate(self) -> None:
        for name, value in (("planes", self.planes), ("slots", self.slots)):
            if isinstance(value, bool) or not isinstance(value, int):
                raise GridSpecError(f"{name} must be an integer, got {value!r}")
            if value < MIN_RING:
                raise GridSpecError(
                    f"{name} must be >= {MIN_RING} (got {value}); smaller rings "
                    "create self-loops or parallel links"
                )
        if not isinstance(self.seam_policy, SeamPolicy):
            raise GridSpecError(f"unknown seam policy {self.seam_policy!r}")
        wm = self.weight_model
        if isinstance(wm, UniformWeights):
            if not (math.isfinite(wm.lo) and math.isfinite(wm.hi)):
                raise GridSpecError("uniform weight bounds must be finite")
            if not 0 < wm.lo <= wm.hi:
                raise GridSpecError(
                    f"uniform weight bounds need 0 < lo <= hi, got lo={wm.lo}, hi={wm.hi}"
                )
        elif not isinstance(wm, (UnitWeights, ExplicitWeights)):
            raise GridSpecError(f"unknown weight model {wm!r}")

    @property
    def node_count(self) -> int:
        return self.planes * self.slots


@dataclass(frozen=True, eq=False)
class ConstellationGrid:
    """Immutable P x S constellation grid.

    ``weights`` is a flat table of length ``4 * N``; entry ``4 * node + d``
    holds the weight of the link in direction ``d``, or NaN when the link
    is absent (seam).
    """

    spec: GridSpec
    weights: tuple[float, ...] = field(repr=False)

    @property
    def planes(self) -> int:
        return self.spec.planes

    @property
    def slots(self) -> int:
        return self.spec.slots

    @property
    def node_count(self) -> int:
        return self.spec.planes * self.spec.slots

    @property
    def n(self) -> int:
        return self.node_count

    def node_id(self, plane: int, slot: int) -> int:
        if not (0 <= plane < self.planes and 0 <= slot < self.slots):
            raise IndexError(
                f"coordinates ({plane},{slot}) outside {self.planes}x{self.slots} grid"
            )
        return plane * self.slots + slot

    def coords(self, node: int) -> tuple[int, int]:
        self._check_node(node)
        return divmod(node, self.slots)

    def _check_node(self, node: int) -> None:
        if not 0 <= node < self.node_count:
            raise IndexError(f"node {node} outside [0, {self.node_count})")

    def neighbor_ids(self, node: int) -> list[Union[int, None]]:
        """All four direction slots; ``None`` where a seam removes the link."""
        P, S = self.planes, self.slots
        plane, slot = divmod(node, S)
        base = plane * S
        left = ((plane - 1) % P) * S + slot
        right = ((plane + 1) % P) * S + slot
        if self.spec.seam_policy is SeamPolicy.SEAM:
            if plane == 0:
                left = None
            if plane == P - 1:
                right = None
        return [base + (slot - 1) % S, base + (slot + 1) % S, left, right]

    def neighbors(self, node: int) -> list[tuple[int, float]]:
        """``(neighbor, weight)`` pairs in intra-prev, intra-next,
        inter-left, inter-right order, skipping absent seam links."""
        self._check_node(node)
        w = self.weights
        k = 4 * node
        return [
            (v, w[k + d])
            for d, v in enumerate(self.neighbor_ids(node))
            if v is not None
        ]

    def degree(self, node: int) -> int:
        return len(self.neighbors(node))

    def weight(self, u: int, v: int) -> float:
        for nb, w in self.neighbors(u):
            if nb == v:
                return w
        raise KeyError(f"no link between {u} and {v}")

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected link once, as ``(u, v, w)`` with the link owned
        by its intra-next / inter-right endpoint ``u``."""
        for u in range(self.node_count):
            ids = self.neighbor_ids(u)
            for d in (INTRA_NEXT, INTER_RIGHT):
                v = ids[d]
                if v is not None:
                    yield u, v, self.weights[4 * u + d]

    @property
    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())

    def scaled(self, factor: float) -> "ConstellationGrid":
        """Copy with every weight multiplied by ``factor`` (> 0)."""
        if not factor > 0:
            raise ValueError(f"scale factor must be positive, got {factor}")
        return ConstellationGrid(self.spec, tuple(w * factor for w in self.weights))

    def to_adjacency(self) -> dict[str, Any]:
        """JSON-ready adjacency dump."""
        nodes = []
        for u in range(self.node_count):
            plane, slot = divmod(u, self.slots)
            nodes.append(
                {
                    "id": u,
                    "plane": plane,
                    "slot": slot,
                    "neighbors": [[v, w] for v, w in self.neighbors(u)],
                }
            )
        return {
            "planes": self.planes,
            "slots": self.slots,
            "seam": self.spec.seam_policy.value,
            "n": self.node_count,
            "edges": self.edge_count,
            "nodes": nodes,
        }


def build_grid(spec: GridSpec) -> ConstellationGrid:
    """Build the grid described by ``spec``.

    Uniform weights are drawn in :meth:`ConstellationGrid.edges` order from
    ``random.Random(seed)``, so identical specs give identical tables.
    """
    spec.validate()
    P, S = spec.planes, spec.slots
    n = P * S
    table = [math.nan] * (4 * n)
    # Skeleton grid to enumerate link ownership; weights filled below.
    skeleton = ConstellationGrid(spec, tuple(table))
    wm = spec.weight_model
    rng = random.Random(wm.seed) if isinstance(wm, UniformWeights) else None
    explicit = _normalise_explicit(wm.table) if isinstance(wm, ExplicitWeights) else None

    for u in range(n):
        ids = skeleton.neighbor_ids(u)
        for d in (INTRA_NEXT, INTER_RIGHT):
            v = ids[d]
            if v is None:
                continue
            if rng is not None:
                w = rng.uniform(wm.lo, wm.hi)
            elif explicit is not None:
                key = (min(u, v), max(u, v))
                if key not in explicit:
                    raise GridSpecError(f"explicit weight table is missing link {key}")
                w = explicit.pop(key)
            else:
                w = 1.0
            table[4 * u + d] = w
            table[4 * v + _OPPOSITE[d]] = w

    if explicit:
        extra = sorted(explicit)[:3]
        raise GridSpecError(f"explicit weight table has entries for non-links, e.g. {extra}")
    return ConstellationGrid(spec, tuple(table))


def _normalise_explicit(table: Mapping[tuple[int, int], float]) -> dict[tuple[int, int], float]:
    out: dict[tuple[int, int], float] = {}
    for (u, v), w in table.items():
        w = float(w)
        if not math.isfinite(w) or w < 0:
            raise GridSpecError(f"explicit weight for ({u},{v}) must be finite and >= 0, got {w}")
        key = (min(u, v), max(u, v))
        if key in out and out[key] != w:
            raise GridSpecError(f"conflicting explicit weights for link {key}")
        out[key] = w
    return out


# -- plain-text config -------------------------------------------------------

_SEAM_ALIASES = {
    "torus": SeamPolicy.FULL_TORUS,
    "full": SeamPolicy.FULL_TORUS,
    "fulltorus": SeamPolicy.FULL_TORUS,
    "full_torus": SeamPolicy.FULL_TORUS,
    "seam": SeamPolicy.SEAM,
}


def parse_seam(value: Any) -> SeamPolicy:
    if isinstance(value, SeamPolicy):
        return value
    try:
        return _SEAM_ALIASES[str(value).strip().lower()]
    except KeyError:
        raise GridSpecError(f"unknown seam policy {value!r} (use 'torus' or 'seam')") from None


def spec_from_mapping(cfg: Mapping[str, Any]) -> GridSpec:
    """Build a :class:`GridSpec` from flat config keys.

    Recognised keys: ``planes``, ``slots``, ``seam``, ``weight_model``
    (``unit`` / ``uniform`` / ``explicit``), ``seed``, ``lo``, ``hi``
    (or ``bounds`` as a two-element list or ``"lo,hi"``) and ``weights``
    (a list of ``[u, v, w]`` triples for the explicit model).
    """
    known = {"planes", "slots", "seam", "weight_model", "seed", "lo", "hi", "bounds", "weights"}
    unknown = set(cfg) - known
    if unknown:
        raise GridSpecError(f"unknown grid config keys: {', '.join(sorted(unknown))}")
    try:
        planes = int(cfg["planes"])
        slots = int(cfg["slots"])
    except KeyError as exc:
        raise GridSpecError(f"grid config is missing {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise GridSpecError(f"planes/slots must be integers: {exc}") from None

    seam = parse_seam(cfg.get("seam", "torus"))
    kind = str(cfg.get("weight_model", "unit")).strip().lower()
    if kind == "unit":
        model: WeightModel = UnitWeights()
    elif kind == "uniform":
        lo, hi = cfg.get("lo"), cfg.get("hi")
        if "bounds" in cfg:
            bounds = cfg["bounds"]
            if isinstance(bounds, str):
                bounds = bounds.split(",")
            if len(bounds) != 2:
                raise GridSpecError(f"bounds must have two values, got {cfg['bounds']!r}")
            lo, hi = bounds
        if lo is None or hi is None:
            raise GridSpecError("uniform weight model needs lo and hi bounds")
        model = UniformWeights(float(lo), float(hi), int(cfg.get("seed", 0)))
    elif kind == "explicit":
        triples = cfg.get("weights")
        if not triples:
            raise GridSpecError("explicit weight model needs a 'weights' list of [u, v, w]")
        model = ExplicitWeights({(int(u), int(v)): float(w) for u, v, w in triples})
    else:
        raise GridSpecError(f"unknown weight model {kind!r}")
    spec = GridSpec(planes, slots, seam, model)
    spec.validate()
    return spec


def parse_grid_spec(text: str) -> GridSpec:
    """Parse a grid config given as JSON or as ``key=value`` lines."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            cfg = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GridSpecError(f"invalid JSON grid config: {exc}") from None
        if not isinstance(cfg, dict):
            raise GridSpecError("JSON grid config must be an object")
        return spec_from_mapping(cfg)

    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise GridSpecError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        cfg[key.strip()] = value.strip()
    return spec_from_mapping(cfg)


def load_grid_spec(path: Union[str, Path]) -> GridSpec:
    return parse_grid_spec(Path(path).read_text(encoding="utf-8"))
