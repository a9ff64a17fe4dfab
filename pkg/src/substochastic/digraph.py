"""Finite weighted digraphs, weighting classes, and JSON I/O.

Vertices are 0-based internally; the JSON interchange format is 1-based.
Weights are positive and either exact (``int``/``Fraction``) or ``float``;
a digraph whose weights are all exact drives the exact-arithmetic code paths.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping

import numpy as np

from .rational import is_exact_number, parse_weight, weight_to_str

Arc = tuple[int, int]


class Tag(str, Enum):
    """Weighting classes ordered by how much out-weight slack they certify."""

    NOT_SUBSTOCHASTIC = "not-substochastic"
    SUBSTOCHASTIC = "substochastic"
    STOCHASTIC = "stochastic"
    TRUTHLY_SUBSTOCHASTIC = "truthly-substochastic"
    STRICTLY_SUBSTOCHASTIC = "strictly-substochastic"

    def implies(self, other: "Tag") -> bool:
        if self is other:
            return True
        implied = {
            Tag.STRICTLY_SUBSTOCHASTIC: {Tag.TRUTHLY_SUBSTOCHASTIC, Tag.SUBSTOCHASTIC},
            Tag.TRUTHLY_SUBSTOCHASTIC: {Tag.SUBSTOCHASTIC},
            Tag.STOCHASTIC: {Tag.SUBSTOCHASTIC},
        }
        return other in implied.get(self, set())


#: rank used by the monotonicity property: adding out-weight mass can only
#: move a weighting toward a *less* strict class.
STRICTNESS_RANK = {
    Tag.NOT_SUBSTOCHASTIC: 0,
    Tag.STOCHASTIC: 1,
    Tag.SUBSTOCHASTIC: 1,
    Tag.TRUTHLY_SUBSTOCHASTIC: 2,
    Tag.STRICTLY_SUBSTOCHASTIC: 3,
}


@dataclass(frozen=True)
class WeightingClass:
    tag: Tag
    witness: int | None = None


@dataclass(frozen=True)
class WeightedDigraph:
    """A finite digraph with positive arc weights; loops allowed, no multi-arcs."""

    order: int
    arcs: Mapping[Arc, object]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        for (u, v), w in self.arcs.items():
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"arc ({u},{v}) outside vertex range [0,{self.order})")
            if not w > 0:
                raise ValueError(f"arc ({u},{v}) has nonpositive weight {w!r}")

    # -- basic views --------------------------------------------------------

    @cached_property
    def adjacency(self) -> dict[int, dict[int, object]]:
        out: dict[int, dict[int, object]] = {v: {} for v in range(self.order)}
        for (u, v), w in self.arcs.items():
            out[u][v] = w
        return out

    @cached_property
    def is_exact(self) -> bool:
        return all(is_exact_number(w) for w in self.arcs.values())

    def out_weight(self, v: int):
        return sum(self.adjacency[v].values(), start=Fraction(0) if self.is_exact else 0.0)

    def out_weights(self) -> list:
        return [self.out_weight(v) for v in range(self.order)]

    def weight(self, u: int, v: int):
        return self.arcs.get((u, v))

    def rows_exact(self) -> list[list[Fraction]]:
        if not self.is_exact:
            raise TypeError("digraph carries float weights; exact rows unavailable")
        rows = [[Fraction(0)] * self.order for _ in range(self.order)]
        for (u, v), w in self.arcs.items():
            rows[u][v] = Fraction(w)
        return rows

    def to_numpy(self) -> np.ndarray:
        m = np.zeros((self.order, self.order))
        for (u, v), w in self.arcs.items():
            m[u, v] = float(w)
        return m

    def induced(self, vertices: Iterable[int]) -> "WeightedDigraph":
        """Induced subdigraph, reindexed by the sorted vertex list."""
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        arcs = {
            (pos[u], pos[v]): w
            for (u, v), w in self.arcs.items()
            if u in pos and v in pos
        }
        return WeightedDigraph(len(vs), arcs)

    def map_weights(self, fn) -> "WeightedDigraph":
        return WeightedDigraph(self.order, {a: fn(w) for a, w in self.arcs.items()})

    def to_float(self) -> "WeightedDigraph":
        return self.map_weights(float)

    # -- JSON interchange (1-based vertex ids) ------------------------------

    def to_json_dict(self) -> dict:
        arcs = sorted(((u + 1, v + 1, weight_to_str(w)) for (u, v), w in self.arcs.items()))
        return {"order": self.order, "arcs": [list(a) for a in arcs]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @staticmethod
    def from_json_dict(obj: Mapping, mode: str = "exact") -> "WeightedDigraph":
        order = int(obj["order"])
        arcs = {}
        for u, v, w in obj["arcs"]:
            key = (int(u) - 1, int(v) - 1)
            if key in arcs:
                raise ValueError(f"duplicate arc {u}->{v}")
            arcs[key] = parse_weight(str(w), mode)
        return WeightedDigraph(order, arcs)

    @staticmethod
    def from_json(text: str, mode: str = "exact") -> "WeightedDigraph":
        return WeightedDigraph.from_json_dict(json.loads(text), mode)


def digraph_from_arcs(order: int, arcs: Mapping[Arc, object]) -> WeightedDigraph:
    return WeightedDigraph(order, dict(arcs))


# ---------------------------------------------------------------------------
# Connectivity
# ---------------------------------------------------------------------------


def strongly_connected_components(
    succ: Mapping[int, Iterable[int]], vertices: Iterable[int] | None = None
) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    verts = list(vertices) if vertices is not None else list(succ)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0

    for root in verts:
        if root in index:
            continue
        work: list[tuple[int, Iterator[int]]] = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is not None:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.append(x)
                    if x == v:
                        break
                comps.append(comp)
    return comps


def is_strongly_connected(d: WeightedDigraph) -> bool:
    """True iff every ordered vertex pair is path-connected (order <= 1 is strong)."""
    if d.order <= 1:
        return True
    comps = strongly_connected_components(
        {v: list(d.adjacency[v]) for v in range(d.order)}, range(d.order)
    )
    return len(comps) == 1


# ---------------------------------------------------------------------------
# Weighting classification
# ---------------------------------------------------------------------------


def classify_weighting(d: WeightedDigraph, tol=0) -> WeightingClass:
    """Strongest weighting class of ``d`` with a witness vertex.

    The comparison tolerance applies only to float weights; exact weights are
    compared exactly. ``tol=0`` is a strict IEEE comparison.
    """
    if d.order == 0:
        return WeightingClass(Tag.STOCHASTIC, None)
    over: int | None = None
    under: list[int] = []
    weights = d.out_weights()
    for v, ow in enumerate(weights):
        if ow > 1 + tol:
            if over is None or ow > weights[over]:
                over = v
        elif ow < 1 - tol:
            under.append(v)
    if over is not None:
        return WeightingClass(Tag.NOT_SUBSTOCHASTIC, over)
    if not under:
        return WeightingClass(Tag.STOCHASTIC, None)
    witness = min(under, key=lambda v: (weights[v], v))
    if len(under) == d.order:
        return WeightingClass(Tag.STRICTLY_SUBSTOCHASTIC, witness)
    return WeightingClass(Tag.TRUTHLY_SUBSTOCHASTIC, witness)
