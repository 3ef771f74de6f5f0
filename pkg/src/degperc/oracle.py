"""Exact brute-force references on tiny instances (2M <= 10).

Everything here enumerates: all perfect matchings on the point set, all
edge subsets (bond) or vertex subsets (site), with probabilities kept as
exact rationals.  The enumeration is the independent side of every
dual-route check in the test suite — it shares no code with the samplers.

The two uniformity facts these oracles certify:

* conditional on ``k`` surviving edges, the surviving point set C is
  uniform over the 2k-subsets of P, each with probability 1/C(2M, 2k);
* conditional on the induced degree sequence d', every perfect matching on
  the points of d' has the same probability k! 2^k / (2k)!.

Component sizes are computed by a local breadth-first search, deliberately
independent of the union-find/scipy paths in :mod:`degperc.components`.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .degrees import DegreeSequence

MAX_POINTS = 10

Matching = tuple[tuple[int, int], ...]


class UnreachableInducedSequenceError(ValueError):
    """The target induced degree sequence has probability zero."""


def matching_count(num_edges: int) -> int:
    """(2M)! / (M! 2^M): the number of perfect matchings on 2M points."""
    m = int(num_edges)
    return math.factorial(2 * m) // (math.factorial(m) * 2**m)


def _check_size(seq: DegreeSequence, limit: int = MAX_POINTS) -> None:
    if seq.total_degree > limit:
        raise ValueError(
            f"instance too large: 2M = {seq.total_degree} exceeds {limit} points"
        )


def enumerate_matchings(seq: DegreeSequence) -> list[Matching]:
    """All perfect matchings on the points of ``seq``, duplicate-free.

    Built by recursively pairing the smallest unmatched point with every
    candidate, so each matching comes out in canonical order: pairs sorted,
    pair lists sorted by first element.
    """
    _check_size(seq)
    return list(_matchings(tuple(range(seq.total_degree))))


def _matchings(points: tuple[int, ...]) -> Iterator[Matching]:
    if not points:
        yield ()
        return
    first = points[0]
    for idx in range(1, len(points)):
        partner = points[idx]
        rest = points[1:idx] + points[idx + 1 :]
        for sub in _matchings(rest):
            yield ((first, partner),) + sub


def point_owners(seq: DegreeSequence) -> np.ndarray:
    """Vertex owning each point, in point order."""
    return np.repeat(np.arange(seq.n, dtype=np.int64), seq.degrees)


def _induced_vector(owners: np.ndarray, n: int, points: Iterable[int]) -> tuple[int, ...]:
    induced = [0] * n
    for q in points:
        induced[owners[q]] += 1
    return tuple(induced)


def exact_survivor_sets(
    seq: DegreeSequence, p: Fraction | float, k: int
) -> dict[frozenset, Fraction]:
    """Exact distribution of the surviving point set C conditional on
    ``|C| = 2k`` under bond percolation at ``p``.

    Uniformity over 2k-subsets holds for any retention probability; ``p``
    only needs to be in (0, 1) for the conditioning event to have positive
    probability.
    """
    _check_size(seq)
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must be strictly between 0 and 1")
    m = seq.num_edges
    if not 0 <= k <= m:
        raise ValueError(f"k must be in [0, {m}]")
    q = 1 - p
    weight = p**k * q ** (m - k)  # same for every k-subset of edges
    totals: dict[frozenset, Fraction] = {}
    for matching in _matchings(tuple(range(seq.total_degree))):
        for kept in combinations(matching, k):
            c = frozenset(point for pair in kept for point in pair)
            totals[c] = totals.get(c, Fraction(0)) + weight
    total = sum(totals.values())
    return {c: w / total for c, w in totals.items()}


def exact_bond_conditional(
    seq: DegreeSequence, p: Fraction | float, target: Iterable[int]
) -> dict[Matching, Fraction]:
    """Exact distribution of the survivor matching, mapped onto the points
    of the induced sequence, conditional on d' = ``target``.

    ``target`` is the per-vertex induced degree vector.  Surviving points of
    each vertex are identified with that vertex's points in P(d') in
    ascending order, so survivor matchings on different point sets C that
    realize the same d' land on the same matching of P(d').  Raises
    :class:`UnreachableInducedSequenceError` when d' has probability zero.
    """
    _check_size(seq, limit=8)
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must be strictly between 0 and 1")
    target = tuple(int(d) for d in target)
    if len(target) != seq.n:
        raise ValueError(f"target must list all {seq.n} vertex degrees")
    if any(d < 0 for d in target) or sum(target) % 2 != 0:
        raise UnreachableInducedSequenceError(f"{target} is not a degree sequence")

    owners = point_owners(seq)
    offsets = [0] * seq.n
    acc = 0
    for v in range(seq.n):
        offsets[v] = acc
        acc += target[v]

    m = seq.num_edges
    q = 1 - p
    totals: dict[Matching, Fraction] = {}
    for matching in _matchings(tuple(range(seq.total_degree))):
        for size in range(m + 1):
            weight = p**size * q ** (m - size)
            for kept in combinations(matching, size):
                points = sorted(pt for pair in kept for pt in pair)
                if _induced_vector(owners, seq.n, points) != target:
                    continue
                seen: dict[int, int] = {}
                relabel = {}
                for pt in points:  # ascending, so ranks within a vertex ascend
                    v = int(owners[pt])
                    relabel[pt] = offsets[v] + seen.get(v, 0)
                    seen[v] = seen.get(v, 0) + 1
                mapped = tuple(
                    sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in kept)
                )
                totals[mapped] = totals.get(mapped, Fraction(0)) + weight
    if not totals:
        raise UnreachableInducedSequenceError(
            f"induced sequence {target} is unreachable from {seq!r}"
        )
    total = sum(totals.values())
    return {matching: w / total for matching, w in totals.items()}


def _bfs_component_sizes(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    adjacency: list[list[int]] = [[] for _ in range(n)]
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
            u = queue.popleft()
            for w in adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    size += 1
                    queue.append(w)
        sizes.append(size)
    return sizes


def exact_l1_distribution(
    seq: DegreeSequence, p: Fraction | float, kind: str
) -> dict[int, Fraction]:
    """Exact law of the largest-component order |L1| under ``kind``
    percolation at ``p``, summing over all matchings and all deletion
    patterns."""
    _check_size(seq)
    if seq.n > 6:
        raise ValueError(f"instance too large: n = {seq.n} exceeds 6")
    if kind not in ("bond", "site"):
        raise ValueError(f"kind must be 'bond' or 'site', got {kind!r}")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")

    owners = point_owners(seq)
    n = seq.n
    m = seq.num_edges
    q = 1 - p
    num_matchings = matching_count(m)
    law: dict[int, Fraction] = {}

    for matching in _matchings(tuple(range(seq.total_degree))):
        edges = [(int(owners[a]), int(owners[b])) for a, b in matching]
        if kind == "bond":
            for size in range(m + 1):
                weight = p**size * q ** (m - size) / num_matchings
                if weight == 0:
                    continue
                for kept in combinations(edges, size):
                    l1 = max(_bfs_component_sizes(n, kept))
                    law[l1] = law.get(l1, Fraction(0)) + weight
        else:
            for r in range(n + 1):
                weight = p**r * q ** (n - r) / num_matchings
                if weight == 0:
                    continue
                for retained in combinations(range(n), r):
                    alive = set(retained)
                    kept = [e for e in edges if e[0] in alive and e[1] in alive]
                    l1 = max(_bfs_component_sizes(n, kept))
                    law[l1] = law.get(l1, Fraction(0)) + weight
    return law
