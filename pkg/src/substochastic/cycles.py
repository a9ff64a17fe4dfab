"""Simple-cycle machinery: enumeration, gains, transversals, packings.

Enumeration follows Johnson's blocked search (unbounded) and a lock-based
bounded search, both run per strongly connected component from the minimal
vertex, which yields each cycle exactly once with its minimal vertex first.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Iterator

from .digraph import WeightedDigraph, strongly_connected_components
from .errors import BudgetExceededError
from .rational import is_exact_number, safe_log


# ---------------------------------------------------------------------------
# Gains: stored as (weight, length) so rational weights compare exactly.
# ---------------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class Gain:
    """``weight ** (1/length)`` kept in cross-powering form.

    A weight of 0 is the "no qualifying cycle" marker.
    """

    weight: object
    length: int

    @property
    def value(self) -> float:
        if self.weight == 0:
            return 0.0
        return math.exp(safe_log(self.weight) / self.length)

    def _cross(self, other: "Gain"):
        """Return (lhs, rhs) with gain comparison equivalent to lhs ? rhs."""
        if is_exact_number(self.weight) and is_exact_number(other.weight):
            return Fraction(self.weight) ** other.length, Fraction(other.weight) ** self.length
        return (
            other.length * safe_log(self.weight),
            self.length * safe_log(other.weight),
        )

    def __eq__(self, other):
        if not isinstance(other, Gain):
            return NotImplemented
        if (self.weight == 0) or (other.weight == 0):
            return self.weight == other.weight == 0
        lhs, rhs = self._cross(other)
        return lhs == rhs

    def __lt__(self, other):
        if not isinstance(other, Gain):
            return NotImplemented
        if self.weight == 0:
            return other.weight != 0
        if other.weight == 0:
            return False
        lhs, rhs = self._cross(other)
        return lhs < rhs

    def __hash__(self):
        return hash((float(self.value), 0))


GAIN_ZERO = Gain(0, 1)


@dataclass(frozen=True)
class Cycle:
    """A simple directed cycle, canonically rotated (minimal vertex first)."""

    vertices: tuple[int, ...]
    weight: object

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def gain(self) -> Gain:
        return Gain(self.weight, self.length)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @staticmethod
    def from_path(path: Iterable[int], weight) -> "Cycle":
        vs = tuple(path)
        k = vs.index(min(vs))
        return Cycle(vs[k:] + vs[:k], weight)


@dataclass(frozen=True)
class CycleUnion:
    """A set of pairwise vertex-disjoint cycles with the Coates sign data."""

    cycles: tuple[Cycle, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for c in self.cycles:
            if seen & c.vertex_set:
                raise ValueError("cycles in a union must be vertex-disjoint")
            seen |= c.vertex_set

    @property
    def count(self) -> int:
        return len(self.cycles)

    @property
    def total_length(self) -> int:
        return sum(c.length for c in self.cycles)

    @property
    def weight(self):
        w = 1
        for c in self.cycles:
            w = w * c.weight
        return w


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _weighted_adjacency(d: WeightedDigraph, drop_loops: bool) -> dict[int, list[tuple[int, object]]]:
    adj: dict[int, list[tuple[int, object]]] = {v: [] for v in range(d.order)}
    for (u, v), w in d.arcs.items():
        if drop_loops and u == v:
            continue
        adj[u].append((v, w))
    return adj


def _johnson_paths(adj, start):
    """Yield (live_path, weight) for every simple cycle through ``start``.

    ``live_path`` is reused between yields; callers that keep it must copy.
    """
    path = [start]
    prefix = [1]
    blocked = {start}
    closed = [False]
    blocked_deps: dict[int, set[int]] = defaultdict(set)
    stack: list[Iterator[tuple[int, object]]] = [iter(adj[start])]
    while stack:
        advanced = False
        for w, wt in stack[-1]:
            if w == start:
                yield path, prefix[-1] * wt
                closed[-1] = True
            elif w not in blocked:
                path.append(w)
                prefix.append(prefix[-1] * wt)
                closed.append(False)
                blocked.add(w)
                stack.append(iter(adj[w]))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        v = path.pop()
        prefix.pop()
        if closed.pop():
            if closed:
                closed[-1] = True
            unblock = {v}
            while unblock:
                u = unblock.pop()
                if u in blocked:
                    blocked.discard(u)
                    unblock.update(blocked_deps[u])
                    blocked_deps[u].clear()
        else:
            for w, _ in adj[v]:
                blocked_deps[w].add(v)


def _bounded_paths(adj, start, bound):
    """Length-bounded variant (lock/relax search); yields like ``_johnson_paths``."""
    path = [start]
    on_path = {start}
    prefix = [1]
    lock = {start: 0}
    deps: dict[int, set[int]] = defaultdict(set)
    seen_bound = [bound]
    stack: list[Iterator[tuple[int, object]]] = [iter(adj[start])]
    while stack:
        advanced = False
        for w, wt in stack[-1]:
            if w == start:
                yield path, prefix[-1] * wt
                seen_bound[-1] = 1
            elif len(path) < lock.get(w, bound):
                path.append(w)
                on_path.add(w)
                prefix.append(prefix[-1] * wt)
                lock[w] = len(path)
                seen_bound.append(bound)
                stack.append(iter(adj[w]))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        v = path.pop()
        on_path.discard(v)
        prefix.pop()
        b = seen_bound.pop()
        if seen_bound:
            seen_bound[-1] = min(seen_bound[-1], b)
        if b < bound:
            relax = [(b, v)]
            while relax:
                bl, u = relax.pop()
                if lock.get(u, bound) < bound - bl + 1:
                    lock[u] = bound - bl + 1
                    relax.extend((bl + 1, x) for x in deps[u] if x not in on_path)
        else:
            for w, _ in adj[v]:
                deps[w].add(v)


def _cycle_paths(d: WeightedDigraph, max_length=None):
    """Yield (live_path, weight) over all simple cycles, minimal vertex first."""
    if max_length is not None and max_length < 1:
        return
    for v in range(d.order):
        w = d.arcs.get((v, v))
        if w is not None:
            yield [v], w
    if max_length == 1:
        return
    adj = _weighted_adjacency(d, drop_loops=True)
    succ = {v: [w for w, _ in adj[v]] for v in range(d.order)}
    comps = [set(c) for c in strongly_connected_components(succ, range(d.order)) if len(c) >= 2]
    while comps:
        comp = comps.pop()
        start = min(comp)
        local = {v: [(w, wt) for w, wt in adj[v] if w in comp] for v in comp}
        if max_length is None:
            yield from _johnson_paths(local, start)
        else:
            yield from _bounded_paths(local, start, max_length)
        comp.discard(start)
        sub = {v: [w for w in succ[v] if w in comp] for v in comp}
        comps.extend(set(c) for c in strongly_connected_components(sub, comp) if len(c) >= 2)


class CycleStream:
    """Iterator over cycles with a ``truncated`` flag set when max_count hits."""

    def __init__(self, source: Iterator[Cycle], max_count: int | None):
        self._source = source
        self._max = max_count
        self.count = 0
        self.truncated = False

    def __iter__(self):
        return self

    def __next__(self) -> Cycle:
        if self._max is not None and self.count >= self._max:
            self.truncated = True
            raise StopIteration
        item = next(self._source)
        self.count += 1
        return item


def enumerate_cycles(
    d: WeightedDigraph, max_length: int | None = None, max_count: int | None = None
) -> CycleStream:
    """Stream every simple cycle of length <= max_length exactly once.

    Cycles come out rotated so the minimal vertex leads.  When ``max_count``
    stops the stream early its ``truncated`` flag is set.
    """

    def gen():
        for path, weight in _cycle_paths(d, max_length):
            yield Cycle(tuple(path), weight)

    return CycleStream(gen(), max_count)


# ---------------------------------------------------------------------------
# Supremum of cycle gains
# ---------------------------------------------------------------------------


def sup_cycle_gain(
    d: WeightedDigraph,
    max_length: int | None = None,
    proper_only: bool = True,
    max_count: int | None = None,
) -> Gain:
    """Largest gain over simple cycles of length <= max_length.

    A cycle using every arc of ``d`` (i.e. ``d`` itself is one directed cycle)
    is excluded unless ``proper_only=False``.  Returns the zero-gain marker
    when no cycle qualifies.  If ``max_count`` is exhausted the partial
    maximum (a valid lower bound) rides on the raised
    :class:`BudgetExceededError`.
    """
    arc_total = len(d.arcs)
    best = GAIN_ZERO
    seen = 0
    for path, weight in _cycle_paths(d, max_length):
        if proper_only and len(path) == arc_total:
            continue
        seen += 1
        g = Gain(weight, len(path))
        if best < g:
            best = g
        if max_count is not None and seen >= max_count:
            raise BudgetExceededError(
                f"cycle budget {max_count} exhausted; partial max gain attached",
                partial=best,
            )
    return best


# ---------------------------------------------------------------------------
# Shortest cycles, packing, transversals, length extremes
# ---------------------------------------------------------------------------


def _succ_sets(d: WeightedDigraph) -> dict[int, set[int]]:
    succ: dict[int, set[int]] = {v: set() for v in range(d.order)}
    for (u, v) in d.arcs:
        succ[u].add(v)
    return succ


def _shortest_cycle(succ: dict[int, set[int]], alive: set[int]) -> list[int] | None:
    """Vertex list of a shortest cycle within ``alive``, or None if acyclic."""
    for v in sorted(alive):
        if v in succ[v]:
            return [v]
    best: list[int] | None = None
    for s in sorted(alive):
        if best is not None and len(best) == 2:
            break
        parent = {s: None}
        queue = deque([s])
        found = None
        while queue:
            u = queue.popleft()
            for w in succ[u]:
                if w not in alive:
                    continue
                if w == s:
                    found = u
                    queue.clear()
                    break
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
            if found is not None:
                break
        if found is not None:
            cyc = [found]
            while parent[cyc[-1]] is not None:
                cyc.append(parent[cyc[-1]])
            cyc.reverse()
            if best is None or len(cyc) < len(best):
                best = cyc
    return best


def _cycle_weight(d: WeightedDigraph, cyc: list[int]):
    w = 1
    for i, u in enumerate(cyc):
        w = w * d.arcs[(u, cyc[(i + 1) % len(cyc)])]
    return w


def disjoint_cycle_packing(d: WeightedDigraph) -> list[Cycle]:
    """Greedy shortest-first family of vertex-disjoint cycles.

    Its size lower-bounds the minimum cycle transversal.
    """
    succ = _succ_sets(d)
    alive = set(range(d.order))
    out: list[Cycle] = []
    while True:
        cyc = _shortest_cycle(succ, alive)
        if cyc is None:
            return out
        out.append(Cycle.from_path(cyc, _cycle_weight(d, cyc)))
        alive -= set(cyc)


def _packing_count(succ, alive: set[int]) -> int:
    alive = set(alive)
    count = 0
    while True:
        cyc = _shortest_cycle(succ, alive)
        if cyc is None:
            return count
        count += 1
        alive -= set(cyc)


@dataclass(frozen=True)
class TransversalResult:
    vertices: frozenset[int]
    size: int
    optimality: str  # "exact" | "upper-bound"


def min_cycle_transversal(d: WeightedDigraph, budget: int = 200_000) -> TransversalResult:
    """Minimum directed feedback vertex set by branch and bound.

    Branches over the vertices of a shortest uncovered cycle with sibling
    exclusion, pruned by the disjoint-cycle-packing lower bound.  When the
    node budget runs out the best-found set is returned with
    ``optimality="upper-bound"``.  The result is always re-verified to leave
    an acyclic digraph.
    """
    succ = _succ_sets(d)
    all_vs = set(range(d.order))

    # greedy initial upper bound: hit shortest cycles at maximum-degree vertices
    greedy: set[int] = set()
    while True:
        cyc = _shortest_cycle(succ, all_vs - greedy)
        if cyc is None:
            break
        greedy.add(max(cyc, key=lambda v: len(succ[v]) + sum(v in succ[u] for u in all_vs)))

    best = set(greedy)
    nodes = 0
    exhausted = False

    def rec(removed: set[int], banned: frozenset[int]):
        nonlocal best, nodes, exhausted
        if exhausted or len(removed) >= len(best):
            return
        nodes += 1
        if nodes > budget:
            exhausted = True
            return
        cyc = _shortest_cycle(succ, all_vs - removed)
        if cyc is None:
            best = set(removed)
            return
        if len(removed) + 1 >= len(best):
            return
        lb = _packing_count(succ, all_vs - removed)
        if len(removed) + lb >= len(best):
            return
        skip = set(banned)
        for v in cyc:
            if v in banned:
                continue
            rec(removed | {v}, frozenset(skip))
            skip.add(v)

    rec(set(), frozenset())

    assert _shortest_cycle(succ, all_vs - best) is None, "transversal re-verification failed"
    return TransversalResult(frozenset(best), len(best), "upper-bound" if exhausted else "exact")


def is_cycle_transversal(d: WeightedDigraph, vertices: Iterable[int]) -> bool:
    succ = _succ_sets(d)
    return _shortest_cycle(succ, set(range(d.order)) - set(vertices)) is None


@dataclass(frozen=True)
class LengthExtremes:
    l_min: int | None
    l_max: int | None
    l_max_exact: bool


def cycle_length_extremes(d: WeightedDigraph, budget: int = 2_000_000) -> LengthExtremes:
    """Shortest and longest simple-cycle lengths.

    The shortest is exact (BFS).  The longest runs an exhaustive path search
    with pruning; if the step budget is exhausted the returned value is only
    a lower bound and ``l_max_exact`` is False.
    """
    succ = _succ_sets(d)
    shortest = _shortest_cycle(succ, set(range(d.order)))
    if shortest is None:
        return LengthExtremes(None, None, True)
    l_min = len(shortest)

    comps = [set(c) for c in strongly_connected_components(succ, range(d.order))]
    best = 1 if any(v in succ[v] for v in range(d.order)) else 0
    steps = 0
    exact = True

    def dfs(comp: set[int], start: int):
        nonlocal best, steps, exact
        path = [start]
        used = {start}
        iters = [iter(sorted(succ[start] & comp))]
        while iters:
            steps += 1
            if steps > budget:
                exact = False
                return
            w = next(iters[-1], None)
            if w is None:
                iters.pop()
                used.discard(path.pop())
                continue
            if w == start:
                if len(path) > best:
                    best = len(path)
                continue
            if w in used or w < start:
                continue
            if len(path) + len(comp - used) <= best:
                continue
            path.append(w)
            used.add(w)
            iters.append(iter(sorted(succ[w] & comp)))

    for comp in sorted(comps, key=len, reverse=True):
        if len(comp) <= best or len(comp) < 2:
            continue
        for start in sorted(comp):
            if len(comp) - sorted(comp).index(start) <= best:
                break
            dfs(comp, start)
            if not exact:
                break
        if not exact:
            break
    return LengthExtremes(l_min, max(best, l_min), exact)
