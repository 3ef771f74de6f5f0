"""Shared fixtures and independent reference implementations.

The BFS component reference here is deliberately separate from both the
union-find and the scipy paths in the package; it is the oracle side of
the component checks.
"""

from __future__ import annotations

import warnings
from collections import deque

import numpy as np
import pytest

from degperc import DegreeSequence, HalfEdgeGraph, SparseRegimeWarning, bond_percolate


@pytest.fixture(autouse=True)
def _quiet_regime_warning():
    # tiny fixtures sit outside the sparse asymptotic regime by design
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SparseRegimeWarning)
        yield


def bfs_component_sizes(n: int, edges) -> list[int]:
    """Independent reference: component sizes by breadth-first search."""
    adjacency = [[] for _ in range(n)]
    for u, v in edges:
        if u != v:
            adjacency[u].append(v)
            adjacency[v].append(u)
    seen = [False] * n
    sizes = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        size = 1
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    size += 1
                    queue.append(y)
        sizes.append(size)
    return sizes


def outcome_from_edges(n: int, edges):
    """Build a p=1 bond outcome whose surviving edges are exactly ``edges``.

    Constructs the half-edge layout by hand: each edge consumes the next
    free point of each endpoint (a loop consumes two points of its vertex).
    """
    degrees = np.zeros(n, dtype=np.int64)
    for u, v in edges:
        degrees[u] += 1
        degrees[v] += 1
    seq = DegreeSequence(degrees)
    offsets = np.concatenate(([0], np.cumsum(degrees)))
    next_free = offsets[:-1].copy()
    matching = np.empty((len(edges), 2), dtype=np.int64)
    for row, (u, v) in enumerate(edges):
        a = next_free[u]
        next_free[u] += 1
        b = next_free[v]
        next_free[v] += 1
        matching[row] = (a, b)
    graph = HalfEdgeGraph(
        degrees=seq, owner=seq.point_owners(), matching=matching, seed=0
    )
    return bond_percolate(graph, 1.0, 0)


def random_degree_sequence(rng: np.random.Generator, n: int, max_degree: int = 5):
    """Random valid degree sequence with even sum."""
    degrees = rng.integers(0, max_degree + 1, size=n)
    if degrees.sum() % 2 != 0:
        at = int(rng.integers(n))
        degrees[at] += 1 if degrees[at] < max_degree else -1
    return DegreeSequence(degrees)
