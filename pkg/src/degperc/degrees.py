"""Degree sequences, limiting degree distributions, and their moments.

Two kinds of objects live here.  A :class:`DegreeSequence` is a concrete
vector of vertex degrees on ``n`` vertices.  A :class:`DegreeDistribution`
is the limiting object: weights ``lambda_i`` summing to one, either as an
explicit finite table or as a power-law tail ``lambda_k = c k^(-gamma)``
for ``k >= min_degree``.

The moments that control the phase transition are the derivatives of the
generating polynomial ``L(s) = sum_i lambda_i s^i`` at 1:

    L'(1)  = sum_i i * lambda_i
    L''(1) = sum_i i * (i - 1) * lambda_i

and the criterion value ``Q = sum_i i(i-2) lambda_i = L''(1) - L'(1)``.
A giant component emerges exactly when Q > 0, and the critical retention
probability for both bond and site percolation is ``L'(1) / L''(1)``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple

import numpy as np

from .zeta import zeta_tail

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-9


class DivergentMomentError(ArithmeticError):
    """A requested moment of the degree distribution is infinite.

    Raised instead of returning ``inf``: power-law tails with gamma <= 3
    have divergent second moment and no critical probability in (0, 1).
    """


class TruncationWarning(UserWarning):
    """Positive weight above the degree cap was dropped when realizing
    a finite sequence."""


class DegreeSequence:
    """Concrete degree vector ``(d_1, ..., d_n)`` with an even sum.

    The raw vector is kept in construction order; ``counts[i]`` caches the
    number of vertices of degree ``i``.  Instances are immutable and safe to
    share across concurrent trials.
    """

    __slots__ = ("degrees", "total_degree", "max_degree", "counts", "_owner")

    def __init__(self, degrees) -> None:
        arr = np.asarray(degrees, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("degree sequence must be a non-empty 1-d vector")
        if np.any(arr < 0):
            raise ValueError("degrees must be non-negative")
        total = int(arr.sum())
        if total % 2 != 0:
            raise ValueError(f"sum of degrees must be even, got {total}")
        arr.setflags(write=False)
        self.degrees = arr
        self.total_degree = total                       # = 2M
        self.max_degree = int(arr.max())
        counts = np.bincount(arr, minlength=self.max_degree + 1)
        counts.setflags(write=False)
        self.counts = counts                            # counts[i] = D_i
        self._owner = None

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    @property
    def num_edges(self) -> int:
        """Number of matched pairs M the sequence spans."""
        return self.total_degree // 2

    def point_owners(self) -> np.ndarray:
        """Vertex owning each of the 2M points, cached after first use."""
        if self._owner is None:
            owner = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
            owner.setflags(write=False)
            self._owner = owner
        return self._owner

    def empirical_distribution(self) -> dict[int, float]:
        """Realized fractions ``D_i / n`` over the support."""
        n = self.n
        return {i: c / n for i, c in enumerate(self.counts.tolist()) if c > 0}

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, DegreeSequence) and np.array_equal(
            self.degrees, other.degrees
        )

    def __hash__(self) -> int:
        return hash(self.degrees.tobytes())

    def __repr__(self) -> str:
        return (
            f"DegreeSequence(n={self.n}, 2M={self.total_degree}, "
            f"max={self.max_degree})"
        )


@dataclass(frozen=True)
class PowerLawSpec:
    """Power-law weights ``lambda_k = c k^(-gamma)`` for ``k >= min_degree``.

    ``gamma`` must exceed 1 for the weights to be normalizable; the first
    and second moments additionally require gamma > 2 and gamma > 3.
    """

    gamma: float
    min_degree: int = 2

    def __post_init__(self) -> None:
        if not self.gamma > 1.0:
            raise ValueError(
                f"power-law exponent must exceed 1 to normalize, got {self.gamma}"
            )
        if self.min_degree < 1:
            raise ValueError("min_degree must be >= 1")

    @property
    def normalization(self) -> float:
        """c = 1 / sum_{k>=min_degree} k^(-gamma)."""
        return 1.0 / zeta_tail(self.gamma, self.min_degree)

    def weight(self, k: int) -> float:
        if k < self.min_degree:
            return 0.0
        return self.normalization * float(k) ** (-self.gamma)


class DegreeDistribution:
    """Limiting degree distribution: finite weight table or power-law tail."""

    __slots__ = ("weights", "tail")

    def __init__(
        self,
        weights: Mapping[int, float] | None = None,
        *,
        tail: PowerLawSpec | None = None,
    ) -> None:
        if (weights is None) == (tail is None):
            raise ValueError("provide exactly one of weights or tail")
        if weights is not None:
            cleaned: dict[int, float] = {}
            for i, w in sorted(weights.items()):
                i = int(i)
                w = float(w)
                if i < 0:
                    raise ValueError(f"degree {i} is negative")
                if w < 0:
                    raise ValueError(f"weight for degree {i} is negative")
                if w > 0:
                    cleaned[i] = w
            total = math.fsum(cleaned.values())
            if abs(total - 1.0) > WEIGHT_TOL:
                raise ValueError(f"weights must sum to 1, got {total!r}")
            if not cleaned:
                raise ValueError("distribution has no positive weight")
            self.weights = cleaned
        else:
            self.weights = None
        self.tail = tail

    # -- constructors ------------------------------------------------------

    @classmethod
    def regular(cls, d: int) -> "DegreeDistribution":
        """Point mass at degree ``d``."""
        if d < 0:
            raise ValueError("degree must be non-negative")
        return cls({int(d): 1.0})

    @classmethod
    def from_weights(cls, weights: Mapping[int, float]) -> "DegreeDistribution":
        return cls(weights)

    @classmethod
    def power_law(cls, gamma: float, min_degree: int = 2) -> "DegreeDistribution":
        return cls(tail=PowerLawSpec(gamma=float(gamma), min_degree=int(min_degree)))

    # -- queries -----------------------------------------------------------

    @property
    def is_power_law(self) -> bool:
        return self.tail is not None

    def weight(self, i: int) -> float:
        if self.tail is not None:
            return self.tail.weight(i)
        return self.weights.get(int(i), 0.0)

    def support(self) -> Iterator[int]:
        """Degrees with positive weight; infinite for power-law tails."""
        if self.tail is not None:
            raise ValueError("power-law support is infinite; truncate() first")
        return iter(self.weights)

    def truncate(self, max_degree: int) -> "DegreeDistribution":
        """Finite table of weights restricted to ``i <= max_degree``,
        renormalized over the surviving support."""
        items = [(i, self.weight(i)) for i in self._support_upto(max_degree)]
        mass = math.fsum(w for _, w in items)
        if mass <= 0:
            raise ValueError(f"no support at or below degree {max_degree}")
        return DegreeDistribution({i: w / mass for i, w in items})

    def _support_upto(self, max_degree: int) -> list[int]:
        if self.tail is not None:
            return list(range(self.tail.min_degree, max_degree + 1))
        return [i for i in self.weights if i <= max_degree]

    def config(self) -> dict:
        """JSON-ready description, the experiment-config wire format."""
        if self.tail is not None:
            return {
                "kind": "powerlaw",
                "gamma": self.tail.gamma,
                "min_degree": self.tail.min_degree,
            }
        if len(self.weights) == 1:
            (d,) = self.weights
            return {"kind": "regular", "d": d}
        return {"kind": "table", "weights": {str(i): w for i, w in self.weights.items()}}

    def __repr__(self) -> str:
        if self.tail is not None:
            return (
                f"DegreeDistribution(powerlaw gamma={self.tail.gamma}, "
                f"min_degree={self.tail.min_degree})"
            )
        return f"DegreeDistribution({self.weights})"


def dist_from_config(config: Mapping | str) -> DegreeDistribution:
    """Build a distribution from the JSON config object or the compact
    CLI string (``regular:3``, ``table:1=0.5,3=0.5``, ``powerlaw:3.5[:min]``).
    """
    if isinstance(config, str):
        return _dist_from_string(config)
    kind = config.get("kind")
    if kind == "regular":
        return DegreeDistribution.regular(int(config["d"]))
    if kind == "table":
        weights = {int(k): float(v) for k, v in config["weights"].items()}
        return DegreeDistribution.from_weights(weights)
    if kind == "powerlaw":
        return DegreeDistribution.power_law(
            float(config["gamma"]), int(config.get("min_degree", 2))
        )
    raise ValueError(f"unknown distribution kind: {kind!r}")


def _dist_from_string(spec: str) -> DegreeDistribution:
    kind, _, rest = spec.partition(":")
    if kind == "regular":
        return DegreeDistribution.regular(int(rest))
    if kind == "table":
        weights = {}
        for item in rest.split(","):
            k, _, v = item.partition("=")
            weights[int(k)] = float(v)
        return DegreeDistribution.from_weights(weights)
    if kind == "powerlaw":
        parts = rest.split(":")
        gamma = float(parts[0])
        min_degree = int(parts[1]) if len(parts) > 1 else 2
        return DegreeDistribution.power_law(gamma, min_degree)
    raise ValueError(f"unknown distribution spec: {spec!r}")


# -- operations -------------------------------------------------------------


def from_distribution(
    dist: DegreeDistribution,
    n: int,
    max_degree_cap: int | None = None,
) -> DegreeSequence:
    """Realize a concrete ``n``-vertex sequence whose empirical fractions
    track ``dist``.

    Counts are ``n * lambda_i`` rounded by the largest-remainder method over
    the support at or below ``max_degree_cap`` (ties broken toward the
    smaller degree), so exactly ``n`` vertices are emitted.  Dropped weight
    above the cap raises :class:`TruncationWarning`.  If the resulting total
    degree is odd, one maximum-degree vertex is decremented by 1 and the
    repair is logged.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if max_degree_cap is None:
        support = sorted(dist.support()) if not dist.is_power_law else None
        if support is None:
            raise ValueError("power-law distributions need an explicit max_degree_cap")
    else:
        support = dist._support_upto(int(max_degree_cap))
        if not support:
            raise ValueError(
                f"distribution has no support at or below cap {max_degree_cap}"
            )

    weights = np.array([dist.weight(i) for i in support], dtype=float)
    kept_mass = float(weights.sum())
    dropped = 1.0 - kept_mass
    if dropped > WEIGHT_TOL:
        warnings.warn(
            f"degree cap {max_degree_cap} drops probability mass {dropped:.6g}",
            TruncationWarning,
            stacklevel=2,
        )

    quotas = n * weights / kept_mass
    counts = np.floor(quotas).astype(np.int64)
    leftover = n - int(counts.sum())
    if leftover > 0:
        remainders = quotas - counts
        # largest remainder first; ties toward the smaller degree (support is
        # sorted ascending and stable sort keeps that order within ties)
        order = np.argsort(-remainders, kind="stable")
        counts[order[:leftover]] += 1

    degrees = np.repeat(np.asarray(support, dtype=np.int64), counts)
    if int(degrees.sum()) % 2 != 0:
        # parity repair: decrement one maximum-degree vertex
        idx = int(np.argmax(degrees))
        old = int(degrees[idx])
        degrees = degrees.copy()
        degrees[idx] = old - 1
        logger.info(
            "parity repair: decremented one degree-%d vertex to %d", old, old - 1
        )
    return DegreeSequence(np.sort(degrees))


class GeneratingDerivatives(NamedTuple):
    """First and second derivatives of ``L(s)`` at ``s = 1``."""

    L1: float
    L2: float


def generating_derivatives(dist: DegreeDistribution) -> GeneratingDerivatives:
    """``(L'(1), L''(1)) = (sum i lambda_i, sum i(i-1) lambda_i)``.

    Power-law tails evaluate in closed form via truncated zeta sums;
    gamma <= 2 (first moment) or gamma <= 3 (second moment) raises
    :class:`DivergentMomentError`.
    """
    if dist.tail is not None:
        gamma, m = dist.tail.gamma, dist.tail.min_degree
        if gamma <= 2.0:
            raise DivergentMomentError(
                f"L'(1) diverges for power-law exponent {gamma} <= 2"
            )
        c = dist.tail.normalization
        l1 = c * zeta_tail(gamma - 1.0, m)
        if gamma <= 3.0:
            raise DivergentMomentError(
                f"L''(1) diverges for power-law exponent {gamma} <= 3"
            )
        l2 = c * (zeta_tail(gamma - 2.0, m) - zeta_tail(gamma - 1.0, m))
        return GeneratingDerivatives(l1, l2)
    l1 = math.fsum(i * w for i, w in dist.weights.items())
    l2 = math.fsum(i * (i - 1) * w for i, w in dist.weights.items())
    return GeneratingDerivatives(l1, l2)


def q_value(seq_or_dist: DegreeSequence | DegreeDistribution) -> float:
    """Criterion value ``sum i(i-2) lambda_i`` (distribution) or
    ``(1/n) sum i(i-2) D_i`` (concrete sequence).

    Positive Q predicts a giant component, negative predicts none.
    """
    if isinstance(seq_or_dist, DegreeSequence):
        seq = seq_or_dist
        i = np.arange(seq.counts.size, dtype=float)
        return float(np.sum(i * (i - 2.0) * seq.counts)) / seq.n
    l1, l2 = generating_derivatives(seq_or_dist)
    return l2 - l1


def offspring_mean(dist: DegreeDistribution) -> float:
    """Expected children of a size-biased vertex, ``L''(1) / L'(1)``.

    This is the branching-process progeny mean seen from an edge endpoint;
    percolation thins it by a factor ``p``, so criticality sits at
    ``p = L'(1) / L''(1)``.
    """
    l1, l2 = generating_derivatives(dist)
    if l1 <= 0:
        raise ValueError("offspring mean undefined: first moment is zero")
    return l2 / l1
