"""Configuration-model sampling: points, uniform matchings, projection.

A degree sequence ``d`` spans a set of ``2M`` points (half-edges), ``d_i``
of them owned by vertex ``i``.  A uniformly random perfect matching on the
points, projected back onto the vertices, gives the configuration-model
multigraph.  There are ``(2M)! / (M! 2^M)`` perfect matchings; shuffling the
point array and pairing consecutive entries samples them uniformly in O(M).

Conditioning a draw on producing a simple graph (no loops, no multi-edges)
yields the uniform distribution over simple graphs with that degree
sequence; :func:`uniform_simple_graph` rejection-samples accordingly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .degrees import DegreeSequence
from .rng import derive_seed


class SparseRegimeWarning(UserWarning):
    """Maximum degree exceeds n^(1/9); asymptotic guarantees may not apply."""


class SimplicityExhaustedError(RuntimeError):
    """Rejection sampling failed to produce a simple graph."""

    def __init__(self, attempts: int, predicted_simple_prob: float) -> None:
        super().__init__(
            f"no simple graph after {attempts} attempts "
            f"(predicted simplicity probability {predicted_simple_prob:.4g})"
        )
        self.attempts = attempts
        self.predicted_simple_prob = predicted_simple_prob


@dataclass(frozen=True)
class HalfEdgeGraph:
    """A perfect matching on the point set of a degree sequence.

    ``owner[q]`` is the vertex owning point ``q``; ``matching`` holds M rows
    of point-index pairs.  ``attempts`` records how many matchings were drawn
    to produce this graph (1 unless conditioned on simplicity).  Immutable
    and shareable across threads.
    """

    degrees: DegreeSequence
    owner: np.ndarray
    matching: np.ndarray
    seed: int
    attempts: int = 1

    @property
    def n(self) -> int:
        return self.degrees.n

    @property
    def num_edges(self) -> int:
        return int(self.matching.shape[0])

    def edge_owners(self) -> np.ndarray:
        """(M, 2) array of vertex pairs, one row per matched point pair,
        each row sorted so loops read (u, u)."""
        pairs = self.owner[self.matching]
        return np.sort(pairs, axis=1)


@dataclass(frozen=True)
class SimplicityReport:
    """Loop/multi-edge flags plus the asymptotic simplicity probability
    ``exp(-lam/2 - lam^2/4)`` with ``lam = (1/M) sum_i C(d_i, 2)``."""

    has_loop: bool
    has_multi_edge: bool
    lam: float
    predicted_simple_prob: float

    @property
    def is_simple(self) -> bool:
        return not (self.has_loop or self.has_multi_edge)


def _check_regime(seq: DegreeSequence) -> None:
    if seq.max_degree > seq.n ** (1.0 / 9.0):
        warnings.warn(
            f"max degree {seq.max_degree} exceeds n^(1/9) = {seq.n ** (1/9):.3f}; "
            "asymptotic results assume the sparse regime",
            SparseRegimeWarning,
            stacklevel=3,
        )


def uniform_matching(seq: DegreeSequence, rng_seed: int) -> HalfEdgeGraph:
    """Draw a uniformly random perfect matching on the points of ``seq``.

    Deterministic given the seed.  Requires an even total degree (enforced
    by :class:`DegreeSequence`).
    """
    _check_regime(seq)
    rng = np.random.default_rng(rng_seed)
    perm = rng.permutation(seq.total_degree)
    matching = perm.reshape(-1, 2)
    matching.setflags(write=False)
    return HalfEdgeGraph(
        degrees=seq, owner=seq.point_owners(), matching=matching, seed=int(rng_seed)
    )


def project(graph: HalfEdgeGraph) -> np.ndarray:
    """Project the matching onto the vertices: a lexicographically sorted
    (M, 2) edge list with one row per matched pair.  Loops appear as
    ``(u, u)``; multi-edges as repeated rows."""
    pairs = graph.edge_owners()
    if pairs.shape[0] > 1:
        order = np.lexsort((pairs[:, 1], pairs[:, 0]))
        pairs = pairs[order]
    return pairs


def simplicity(graph: HalfEdgeGraph) -> SimplicityReport:
    """Exact loop/multi-edge flags for ``graph`` plus the degree-sequence
    prediction of the simplicity probability."""
    pairs = project(graph)
    has_loop = bool(np.any(pairs[:, 0] == pairs[:, 1]))
    has_multi = bool(pairs.shape[0] > 1 and np.any(np.all(pairs[1:] == pairs[:-1], axis=1)))
    lam, prob = predicted_simplicity(graph.degrees)
    return SimplicityReport(
        has_loop=has_loop,
        has_multi_edge=has_multi,
        lam=lam,
        predicted_simple_prob=prob,
    )


def predicted_simplicity(seq: DegreeSequence) -> tuple[float, float]:
    """``(lam, exp(-lam/2 - lam^2/4))`` from the degree sequence alone."""
    if seq.num_edges == 0:
        return 0.0, 1.0
    d = seq.degrees.astype(float)
    lam = float(np.sum(d * (d - 1.0) / 2.0)) / seq.num_edges
    return lam, math.exp(-lam / 2.0 - lam * lam / 4.0)


def uniform_simple_graph(
    seq: DegreeSequence, rng_seed: int, max_attempts: int = 1000
) -> HalfEdgeGraph:
    """Rejection-sample uniform matchings until the projection is simple.

    Attempt ``a`` uses the derived seed ``derive_seed(rng_seed, a)``.  The
    result is uniform over simple graphs with degree sequence ``seq``.
    Raises :class:`SimplicityExhaustedError` (carrying the predicted
    simplicity probability) when ``max_attempts`` draws all fail.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    for attempt in range(max_attempts):
        graph = uniform_matching(seq, derive_seed(rng_seed, attempt))
        if simplicity(graph).is_simple:
            return HalfEdgeGraph(
                degrees=graph.degrees,
                owner=graph.owner,
                matching=graph.matching,
                seed=int(rng_seed),
                attempts=attempt + 1,
            )
    _, prob = predicted_simplicity(seq)
    raise SimplicityExhaustedError(max_attempts, prob)


def write_edge_list(graph: HalfEdgeGraph) -> str:
    """Text dump: header ``# n=<n> m=<M>`` then one ``u v`` line per edge,
    loops as ``u u``."""
    lines = [f"# n={graph.n} m={graph.num_edges}"]
    for u, v in project(graph).tolist():
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"
