"""Shared fixtures: tiny named digraphs and independent brute-force oracles.

The oracles here deliberately avoid the library's algorithmic code paths:
determinants go through Leibniz permutation sums, cycle sets through a naive
path search, acyclicity through Kahn peeling, and spectra through numpy's
dense eigensolver.
"""

import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest

from substochastic import WeightedDigraph
from substochastic.inequalities import random_strong_digraph


# ---------------------------------------------------------------------------
# Named digraphs
# ---------------------------------------------------------------------------


def loop(w=F(7, 10)) -> WeightedDigraph:
    return WeightedDigraph(1, {(0, 0): w})


def two_cycle(p=F(1, 2), q=F(1, 2)) -> WeightedDigraph:
    return WeightedDigraph(2, {(0, 1): p, (1, 0): q})


def triangle(a=F(1, 3), b=F(1, 4), c=F(1, 5)) -> WeightedDigraph:
    return WeightedDigraph(3, {(0, 1): a, (1, 2): b, (2, 0): c})


def k3(w=F(1, 4)) -> WeightedDigraph:
    return WeightedDigraph(3, {(u, v): w for u in range(3) for v in range(3) if u != v})


def acyclic3() -> WeightedDigraph:
    return WeightedDigraph(3, {(0, 1): F(1, 2), (0, 2): F(1, 3), (1, 2): F(1, 4)})


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def brute_cycles(d: WeightedDigraph, max_length=None) -> set[tuple[int, ...]]:
    """All simple cycles as canonical (min-vertex-first) tuples; naive DFS."""
    succ = {v: sorted(w for (u, w) in d.arcs if u == v) for v in range(d.order)}
    found: set[tuple[int, ...]] = set()

    def walk(start, path, seen):
        if max_length is not None and len(path) > max_length:
            return
        for w in succ[path[-1]]:
            if w == start and (max_length is None or len(path) <= max_length):
                found.add(tuple(path))
            if w > start and w not in seen:
                walk(start, path + [w], seen | {w})

    for s in range(d.order):
        walk(s, [s], {s})
    return found


def brute_is_acyclic(d: WeightedDigraph, removed=frozenset()) -> bool:
    """Kahn peeling; loops count as cycles."""
    keep = [v for v in range(d.order) if v not in removed]
    arcs = [(u, v) for (u, v) in d.arcs if u in keep and v in keep]
    if any(u == v for u, v in arcs):
        return False
    indeg = {v: 0 for v in keep}
    for _u, v in arcs:
        indeg[v] += 1
    queue = [v for v in keep if indeg[v] == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for (x, v) in arcs:
            if x == u:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
    return seen == len(keep)


def brute_min_fvs(d: WeightedDigraph) -> int:
    for size in range(d.order + 1):
        for subset in itertools.combinations(range(d.order), size):
            if brute_is_acyclic(d, frozenset(subset)):
                return size
    raise AssertionError("removing all vertices is always acyclic")


def leibniz_det(rows) -> F:
    n = len(rows)
    total = F(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        term = F(sign)
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def eig_radius(d: WeightedDigraph) -> float:
    if d.order == 0:
        return 0.0
    return float(max(abs(np.linalg.eigvals(d.to_numpy()))))


def brute_reachable(d: WeightedDigraph) -> bool:
    """Strong connectivity via Floyd-Warshall closure."""
    n = d.order
    reach = [[u == v for v in range(n)] for u in range(n)]
    for (u, v) in d.arcs:
        reach[u][v] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return all(reach[i][j] for i in range(n) for j in range(n))


def seeded_digraph(seed: int, order_max: int = 6, weighting: str = "truthly") -> WeightedDigraph:
    rng = random.Random(f"test:{seed}")
    order = rng.randint(2, order_max)
    return random_strong_digraph(rng, order, weighting=weighting)


@pytest.fixture
def rng():
    return random.Random(20240811)
