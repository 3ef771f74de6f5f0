"""Bond and site percolation on a half-edge graph.

Bond percolation keeps each matched pair independently with probability
``p``; the surviving edge count is Binomial(M, p).  Site percolation keeps
each vertex independently with probability ``p`` and an edge survives iff
both endpoint owners are retained; vertices are decided first and edges
filtered afterwards, matching the reverse-order coupling the two
independent experiments admit.

Retention is decided by ``u < p`` on uniform [0,1) draws consumed in index
order (matching rows for bond, vertices for site), so outcomes replay
bit-exactly from their seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .configuration import HalfEdgeGraph
from .degrees import DegreeSequence


class PercolationOutcome:
    """Surviving matching plus the induced degree sequence d'.

    ``retained_vertices``/``deleted_vertices``/``boundary_count`` are None
    for bond percolation.  ``boundary_count`` is the number of matched pairs
    with exactly one endpoint owned by a deleted vertex.  Immutable by
    convention; the induced degree sequence is computed on first access.
    """

    def __init__(
        self,
        kind: str,
        p: float,
        graph: HalfEdgeGraph,
        survivor_matching: np.ndarray,
        seed: int,
        retained_vertices: np.ndarray | None = None,
        deleted_vertices: np.ndarray | None = None,
        boundary_count: int | None = None,
    ) -> None:
        self.kind = kind
        self.p = p
        self.graph = graph
        self.survivor_matching = survivor_matching
        self.surviving_edge_count = int(survivor_matching.shape[0])
        self.seed = seed
        self.retained_vertices = retained_vertices
        self.deleted_vertices = deleted_vertices
        self.boundary_count = boundary_count

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def induced_degrees(self) -> DegreeSequence:
        """Degree sequence d' induced by the surviving edges (all n
        vertices; deleted or isolated vertices at degree 0)."""
        surviving_points = self.survivor_matching.ravel()
        counts = np.bincount(self.graph.owner[surviving_points], minlength=self.graph.n)
        return DegreeSequence(counts)

    def survivor_edge_owners(self) -> np.ndarray:
        """(k, 2) vertex pairs of the surviving edges, rows sorted."""
        if self.surviving_edge_count == 0:
            return np.empty((0, 2), dtype=np.int64)
        return np.sort(self.graph.owner[self.survivor_matching], axis=1)

    def __repr__(self) -> str:
        return (
            f"PercolationOutcome(kind={self.kind!r}, p={self.p}, n={self.n}, "
            f"k={self.surviving_edge_count})"
        )


@dataclass(frozen=True)
class SurvivorStats:
    """Survivor counts with the concentration-window diagnostics.

    Bond outcomes get the edge-count window ``|k - Mp| <= ln(n) sqrt(n)``;
    site outcomes get the retained-degree window
    ``|M2 - 2Mp| <= n^(2/3) ln(n)`` and the boundary window
    ``|b - 2Mp(1-p)| <= n^(2/3) ln(n)^2``.  Fields not applicable to the
    outcome kind are None.
    """

    k: int
    k_expected: float
    k_in_window: bool | None
    k_window: float | None
    m2: int | None = None
    m2_expected: float | None = None
    m2_in_window: bool | None = None
    m2_window: float | None = None
    boundary: int | None = None
    boundary_expected: float | None = None
    boundary_in_window: bool | None = None
    boundary_window: float | None = None


def bond_percolate(graph: HalfEdgeGraph, p: float, rng_seed: int) -> PercolationOutcome:
    """Keep each matched pair independently with probability ``p``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"retention probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(rng_seed)
    keep = rng.random(graph.num_edges) < p
    survivors = graph.matching[keep]
    survivors.setflags(write=False)
    return PercolationOutcome(
        kind="bond",
        p=p,
        graph=graph,
        survivor_matching=survivors,
        seed=int(rng_seed),
    )


def site_percolate(graph: HalfEdgeGraph, p: float, rng_seed: int) -> PercolationOutcome:
    """Retain each vertex independently with probability ``p``; an edge
    survives iff both endpoint owners are retained."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"retention probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(rng_seed)
    retained = rng.random(graph.n) < p
    a_kept = retained[graph.owner[graph.matching[:, 0]]]
    b_kept = retained[graph.owner[graph.matching[:, 1]]]
    survivors = graph.matching[a_kept & b_kept]
    survivors.setflags(write=False)
    retained.setflags(write=False)
    deleted = np.flatnonzero(~retained)
    deleted.setflags(write=False)
    return PercolationOutcome(
        kind="site",
        p=p,
        graph=graph,
        survivor_matching=survivors,
        seed=int(rng_seed),
        retained_vertices=retained,
        deleted_vertices=deleted,
        boundary_count=int(np.sum(a_kept ^ b_kept)),
    )


def induced_degree_counts(outcome: PercolationOutcome) -> dict[int, int]:
    """Exact map ``i -> D_i'`` over all n vertices (degree 0 included)."""
    counts = outcome.induced_degrees.counts
    return {i: int(c) for i, c in enumerate(counts.tolist()) if c > 0}


def survivor_statistics(outcome: PercolationOutcome) -> SurvivorStats:
    """Survivor counts and whether they fall inside the concentration
    windows appropriate to the outcome kind."""
    graph = outcome.graph
    n, m, p = graph.n, graph.num_edges, outcome.p
    k = outcome.surviving_edge_count
    k_expected = m * p
    if outcome.kind == "bond":
        window = math.log(n) * math.sqrt(n)
        return SurvivorStats(
            k=k,
            k_expected=k_expected,
            k_in_window=abs(k - k_expected) <= window,
            k_window=window,
        )
    retained = outcome.retained_vertices
    m2 = int(graph.degrees.degrees[retained].sum())
    m2_expected = 2.0 * m * p
    m2_window = n ** (2.0 / 3.0) * math.log(n)
    b = outcome.boundary_count
    b_expected = 2.0 * m * p * (1.0 - p)
    b_window = n ** (2.0 / 3.0) * math.log(n) ** 2
    return SurvivorStats(
        k=k,
        k_expected=k_expected,
        k_in_window=None,
        k_window=None,
        m2=m2,
        m2_expected=m2_expected,
        m2_in_window=abs(m2 - m2_expected) <= m2_window,
        m2_window=m2_window,
        boundary=b,
        boundary_expected=b_expected,
        boundary_in_window=abs(b - b_expected) <= b_window,
        boundary_window=b_window,
    )


def outcome_record(outcome: PercolationOutcome) -> dict:
    """JSON-ready summary of one percolation outcome."""
    record = {
        "kind": outcome.kind,
        "p": outcome.p,
        "n": outcome.n,
        "M": outcome.graph.num_edges,
        "k": outcome.surviving_edge_count,
        "degree_counts": {str(i): c for i, c in induced_degree_counts(outcome).items()},
        "seed": outcome.seed,
    }
    if outcome.kind == "site":
        stats = survivor_statistics(outcome)
        record["b"] = outcome.boundary_count
        record["M2"] = stats.m2
    return record
