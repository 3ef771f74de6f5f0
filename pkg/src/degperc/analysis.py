"""Closed-form percolation predictions and the Monte Carlo estimators
that confront them.

Binomial thinning is the key operation: a degree-d vertex that keeps each
incident edge with probability p has Binomial(d, p) surviving degree, so

    lambda_i_bond = sum_{d>=i} lambda_d C(d,i) p^i (1-p)^(d-i)

and site percolation scales every term by the vertex's own survival,
``lambda_d_site = p * lambda_d_bond``.  The thinned criterion value

    Q'(p) = sum_i i(i-2) lambda_i'

collapses to ``p (p L''(1) - L'(1))`` for bond and ``p^2 (p L''(1) - L'(1))``
for site, so both vanish at ``p = L'(1) / L''(1)``: the shared critical
probability.  Every closed form here is double-checked against direct
summation over the thinned weights.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import bisect as _bisect
from scipy.stats import binom as _binom

from .components import components
from .configuration import uniform_matching, uniform_simple_graph
from .degrees import (
    DegreeDistribution,
    DegreeSequence,
    DivergentMomentError,
    from_distribution,
    generating_derivatives,
)
from .percolation import PercolationOutcome, bond_percolate, site_percolate
from .rng import derive_seed
from .zeta import zeta_tail

CONSISTENCY_TOL = 1e-10
ROOT_TOL = 1e-12
ROOT_AGREEMENT_TOL = 1e-9

_KINDS = ("bond", "site")


class NoPhaseTransitionError(ValueError):
    """L''(1) <= L'(1): no subcritical-to-supercritical transition in (0, 1)."""


class BracketNotEstablishedError(RuntimeError):
    """The empirical response never produced a supercritical bracket."""

    def __init__(self, message: str, trace: list) -> None:
        super().__init__(message)
        self.trace = trace


def _percolator(kind: str) -> Callable:
    if kind == "bond":
        return bond_percolate
    if kind == "site":
        return site_percolate
    raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")


# -- thinned distributions ---------------------------------------------------


def lambda_bond(dist: DegreeDistribution, p: float) -> DegreeDistribution:
    """Binomially thinned distribution after bond percolation at ``p``.

    Requires finite support; truncate power-law tails explicitly first.
    """
    if dist.is_power_law:
        raise ValueError("thinning needs finite support; use dist.truncate(cap)")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    support = np.array(sorted(dist.weights), dtype=np.int64)
    weights = np.array([dist.weights[d] for d in support], dtype=float)
    max_d = int(support.max())
    i = np.arange(max_d + 1)
    # rows: original degree d, columns: surviving degree i
    pmf = _binom.pmf(i[None, :], support[:, None], p)
    thinned = weights @ pmf
    out = {int(j): float(w) for j, w in enumerate(thinned) if w > 0.0}
    return DegreeDistribution(out)


class SiteThinning(NamedTuple):
    """Per-degree limits of D_d'/n under site percolation, plus the
    deleted-vertex mass that the per-degree limits exclude."""

    weights: dict[int, float]
    deficit: float


def lambda_site(dist: DegreeDistribution, p: float) -> SiteThinning:
    """Site-percolation degree limits ``lambda_d_site = p * lambda_d_bond``.

    The weights sum to ``p``; the returned deficit ``1 - p`` is the deleted
    mass, which empirically shows up as extra degree-0 vertices.
    """
    bond = lambda_bond(dist, p)
    weights = {d: float(p) * w for d, w in bond.weights.items()}
    return SiteThinning(weights=weights, deficit=1.0 - float(p))


def q_prime(dist: DegreeDistribution, p: float, kind: str) -> float:
    """Thinned criterion value Q'(p) for ``kind`` percolation.

    Closed form ``p (p L''(1) - L'(1))`` (bond) or ``p^2 (...)`` (site);
    for finite support this is verified against direct summation of
    ``sum i(i-2) lambda_i'`` to 1e-10 on every call.
    """
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    p = float(p)
    l1, l2 = generating_derivatives(dist)
    closed = p * (p * l2 - l1)
    if kind == "site":
        closed *= p
    if not dist.is_power_law:
        thinned = lambda_bond(dist, p).weights
        direct = math.fsum(i * (i - 2.0) * w for i, w in thinned.items())
        if kind == "site":
            direct *= p
        if abs(closed - direct) > CONSISTENCY_TOL:
            raise RuntimeError(
                f"Q' closed form {closed!r} disagrees with direct sum {direct!r}"
            )
    return closed


# -- critical probabilities --------------------------------------------------


@dataclass(frozen=True)
class ThresholdPrediction:
    """Analytic critical probability with its Q' function."""

    p_hat: float
    kind: str
    dist: DegreeDistribution
    q_function: Callable[[float], float]


def critical_probability(dist: DegreeDistribution, kind: str = "bond") -> float:
    """Critical retention probability ``L'(1) / L''(1)``.

    Identical for bond and site.  The value is verified as the root of
    Q'(p) by bisection on (0, 1] to 1e-12 before being returned.  Raises
    :class:`NoPhaseTransitionError` unless ``L''(1) > L'(1) > 0``.
    """
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    l1, l2 = generating_derivatives(dist)
    if not (l1 > 0.0 and l2 > l1):
        raise NoPhaseTransitionError(
            "no subcritical-to-supercritical transition in (0, 1): "
            f"L'(1) = {l1!r}, L''(1) = {l2!r}"
        )
    p_hat = l1 / l2
    root = _bisect(lambda p: p * (p * l2 - l1), 1e-12, 1.0, xtol=ROOT_TOL)
    if abs(root - p_hat) > ROOT_AGREEMENT_TOL:
        raise RuntimeError(
            f"bisection root {root!r} disagrees with L'(1)/L''(1) = {p_hat!r}"
        )
    return p_hat


def threshold_prediction(dist: DegreeDistribution, kind: str = "bond") -> ThresholdPrediction:
    """Bundle the critical probability with its Q' function."""
    p_hat = critical_probability(dist, kind)
    return ThresholdPrediction(
        p_hat=p_hat,
        kind=kind,
        dist=dist,
        q_function=lambda p: q_prime(dist, p, kind),
    )


@dataclass(frozen=True)
class PowerLawThreshold:
    """Critical probability of a power-law degree sequence.

    ``p_c_zeta`` is the full-zeta ratio ``zeta(g-1)/(zeta(g-2)-zeta(g-1))``;
    ``p_c_truncated`` uses the k >= min_degree sums that the distribution
    actually normalizes over.  ``valid`` flags 3 < gamma < gamma0, the range
    where the zeta ratio lies in (0, 1).
    """

    gamma: float
    min_degree: int
    p_c_zeta: float
    p_c_truncated: float
    valid: bool
    gamma0: float


def powerlaw_gamma0(
    bracket: tuple[float, float] = (3.2, 3.5), tol: float = 1e-6
) -> float:
    """Largest exponent with a zeta-ratio threshold below 1: the root of
    ``g(gamma) = zeta(gamma-2) - 2 zeta(gamma-1)`` located by bisection.

    The bracket signs are validated before bisecting.
    """
    lo, hi = bracket
    g = lambda gamma: zeta_tail(gamma - 2.0) - 2.0 * zeta_tail(gamma - 1.0)
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo > 0.0 > g_hi):
        raise ValueError(
            f"bracket [{lo}, {hi}] does not straddle the root: "
            f"g({lo}) = {g_lo!r}, g({hi}) = {g_hi!r}"
        )
    return float(_bisect(g, lo, hi, xtol=tol))


def powerlaw_threshold(gamma: float, min_degree: int = 2) -> PowerLawThreshold:
    """Zeta-ratio critical probability for exponent ``gamma``.

    gamma <= 3 raises :class:`DivergentMomentError` (divergent second
    moment).  For gamma >= gamma0 the ratio is still returned, flagged
    invalid (it is >= 1, outside the percolation range).
    """
    gamma = float(gamma)
    if gamma <= 3.0:
        raise DivergentMomentError(
            f"second moment diverges for power-law exponent {gamma} <= 3"
        )
    z1 = zeta_tail(gamma - 1.0)
    z2 = zeta_tail(gamma - 2.0)
    p_zeta = z1 / (z2 - z1)
    trunc1 = zeta_tail(gamma - 1.0, min_degree)
    trunc2 = zeta_tail(gamma - 2.0, min_degree)
    p_trunc = trunc1 / (trunc2 - trunc1)
    gamma0 = powerlaw_gamma0()
    return PowerLawThreshold(
        gamma=gamma,
        min_degree=min_degree,
        p_c_zeta=p_zeta,
        p_c_truncated=p_trunc,
        valid=gamma < gamma0,
        gamma0=gamma0,
    )


# -- Monte Carlo experiments -------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    """One graph + percolation draw inside a sweep or threshold probe."""

    p: float
    trial: int
    graph_seed: int
    percolation_seed: int
    l1_frac: float = math.nan
    l2_frac: float = math.nan
    surviving_edges: int = -1
    error: str | None = None


@dataclass(frozen=True)
class GridPointSummary:
    p: float
    trials_requested: int
    trials_ok: int
    mean_l1_frac: float
    sd_l1_frac: float
    mean_l2_frac: float


@dataclass(frozen=True)
class SweepResult:
    """Aggregated largest-component fractions over a probability grid."""

    points: tuple[GridPointSummary, ...]
    records: tuple[TrialRecord, ...]
    metadata: dict = field(default_factory=dict)

    @property
    def p_grid(self) -> tuple[float, ...]:
        return tuple(point.p for point in self.points)

    def csv_text(self) -> str:
        lines = ["p,trials,mean_l1_frac,sd_l1_frac,mean_l2_frac"]
        for pt in self.points:
            lines.append(
                f"{pt.p!r},{pt.trials_ok},{pt.mean_l1_frac!r},"
                f"{pt.sd_l1_frac!r},{pt.mean_l2_frac!r}"
            )
        return "\n".join(lines) + "\n"

    def json_dict(self) -> dict:
        def clean(value):
            if isinstance(value, float) and math.isnan(value):
                return None
            return value

        records = []
        for r in self.records:
            entry = {
                "p": r.p,
                "trial": r.trial,
                "graph_seed": r.graph_seed,
                "percolation_seed": r.percolation_seed,
            }
            if r.error is None:
                entry.update(
                    l1_frac=r.l1_frac,
                    l2_frac=r.l2_frac,
                    surviving_edges=r.surviving_edges,
                )
            else:
                entry["error"] = r.error
            records.append(entry)
        return {
            "metadata": self.metadata,
            "points": [{k: clean(v) for k, v in vars(pt).items()} for pt in self.points],
            "records": records,
        }

    def json_text(self) -> str:
        return json.dumps(self.json_dict(), sort_keys=True, indent=2) + "\n"


def _run_trial(
    seq: DegreeSequence,
    kind: str,
    p: float,
    stream: int,
    base_seed: int,
    trial: int,
    simple_only: bool,
    max_attempts: int,
) -> tuple[TrialRecord, PercolationOutcome | None]:
    graph_seed = derive_seed(base_seed, 2 * stream)
    perc_seed = derive_seed(base_seed, 2 * stream + 1)
    try:
        if simple_only:
            graph = uniform_simple_graph(seq, graph_seed, max_attempts)
        else:
            graph = uniform_matching(seq, graph_seed)
    except Exception as exc:  # generation failure is recorded, not fatal
        return (
            TrialRecord(
                p=p,
                trial=trial,
                graph_seed=graph_seed,
                percolation_seed=perc_seed,
                error=str(exc),
            ),
            None,
        )
    outcome = _percolator(kind)(graph, p, perc_seed)
    summary = components(outcome)
    record = TrialRecord(
        p=p,
        trial=trial,
        graph_seed=graph_seed,
        percolation_seed=perc_seed,
        l1_frac=summary.fraction,
        l2_frac=summary.l2_size / seq.n,
        surviving_edges=outcome.surviving_edge_count,
    )
    return record, outcome


def sweep(
    dist: DegreeDistribution,
    n: int,
    kind: str,
    p_grid: Sequence[float],
    trials: int,
    base_seed: int,
    simple_only: bool = False,
    max_degree_cap: int | None = None,
    max_attempts: int = 1000,
) -> SweepResult:
    """Fraction of vertices in L1, per grid probability, over fresh graphs.

    Each trial draws its own graph and percolation stream: grid point ``j``,
    trial ``t`` uses stream ``j * trials + t``, with the graph on derived
    seed ``2*stream`` and the percolation on ``2*stream + 1``.  Results are
    reduced in trial order, so output depends only on the configuration.
    """
    if n < 10:
        raise ValueError("n must be >= 10")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _percolator(kind)
    seq = from_distribution(dist, n, max_degree_cap)
    points: list[GridPointSummary] = []
    records: list[TrialRecord] = []
    for j, p in enumerate(p_grid):
        fractions: list[float] = []
        l2s: list[float] = []
        for t in range(trials):
            record, _ = _run_trial(
                seq, kind, float(p), j * trials + t, base_seed, t,
                simple_only, max_attempts,
            )
            records.append(record)
            if record.error is None:
                fractions.append(record.l1_frac)
                l2s.append(record.l2_frac)
        if fractions:
            arr = np.asarray(fractions)
            summary = GridPointSummary(
                p=float(p),
                trials_requested=trials,
                trials_ok=len(fractions),
                mean_l1_frac=float(arr.mean()),
                sd_l1_frac=float(arr.std()),
                mean_l2_frac=float(np.mean(l2s)),
            )
        else:
            summary = GridPointSummary(
                p=float(p),
                trials_requested=trials,
                trials_ok=0,
                mean_l1_frac=math.nan,
                sd_l1_frac=math.nan,
                mean_l2_frac=math.nan,
            )
        points.append(summary)
    metadata = {
        "n": n,
        "kind": kind,
        "trials": trials,
        "base_seed": base_seed,
        "simple_only": simple_only,
        "distribution": dist.config(),
        "max_degree_cap": max_degree_cap,
    }
    return SweepResult(points=tuple(points), records=tuple(records), metadata=metadata)


@dataclass(frozen=True)
class ThresholdEstimate:
    """Empirical critical probability from bisection on the mean L1 fraction."""

    estimate: float
    bracket: tuple[float, float]
    epsilon: float
    tolerance: float
    trace: tuple[dict, ...]
    metadata: dict

    def __float__(self) -> float:
        return self.estimate

    def json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "bracket": list(self.bracket),
            "epsilon": self.epsilon,
            "tolerance": self.tolerance,
            "trace": list(self.trace),
            "metadata": self.metadata,
        }


def estimate_threshold(
    dist: DegreeDistribution,
    n: int,
    kind: str,
    epsilon: float = 0.02,
    trials: int = 20,
    tolerance: float = 0.02,
    base_seed: int = 0,
    simple_only: bool = False,
    max_degree_cap: int | None = None,
) -> ThresholdEstimate:
    """Bisection estimate of the percolation threshold.

    A probability counts as supercritical when the mean L1 fraction over
    ``trials`` fresh graphs exceeds ``epsilon``.  p = 0 is subcritical by
    definition (the fraction is exactly 1/n); p = 1 is probed first and
    must come out supercritical, otherwise
    :class:`BracketNotEstablishedError` carries the trace.  Probe ``q``
    uses trial streams ``q * trials + t``.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must be in (0, 1)")
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    if epsilon <= 1.0 / n:
        raise ValueError(f"epsilon {epsilon} is not above the floor 1/n = {1.0 / n}")
    _percolator(kind)
    seq = from_distribution(dist, n, max_degree_cap)
    trace: list[dict] = []
    probe_index = 0

    def probe(p: float) -> bool:
        nonlocal probe_index
        fractions = []
        for t in range(trials):
            record, _ = _run_trial(
                seq, kind, p, probe_index * trials + t, base_seed, t,
                simple_only, 1000,
            )
            if record.error is None:
                fractions.append(record.l1_frac)
        probe_index += 1
        mean = float(np.mean(fractions)) if fractions else math.nan
        supercritical = bool(fractions) and mean > epsilon
        trace.append(
            {
                "p": p,
                "mean_l1_frac": mean,
                "trials_ok": len(fractions),
                "supercritical": supercritical,
            }
        )
        return supercritical

    if not probe(1.0):
        raise BracketNotEstablishedError(
            "p = 1 is not empirically supercritical; no bracket exists "
            f"(epsilon = {epsilon})",
            trace,
        )
    lo, hi = 0.0, 1.0
    while hi - lo >= tolerance:
        mid = (lo + hi) / 2.0
        if probe(mid):
            hi = mid
        else:
            lo = mid
    metadata = {
        "n": n,
        "kind": kind,
        "trials": trials,
        "base_seed": base_seed,
        "simple_only": simple_only,
        "distribution": dist.config(),
    }
    return ThresholdEstimate(
        estimate=(lo + hi) / 2.0,
        bracket=(lo, hi),
        epsilon=epsilon,
        tolerance=tolerance,
        trace=tuple(trace),
        metadata=metadata,
    )


@dataclass(frozen=True)
class DegreeLawComparison:
    """Mean empirical D_i'/n against the thinned-law prediction."""

    kind: str
    p: float
    n: int
    trials: int
    rows: tuple[dict, ...]
    max_abs_deviation: float


def empirical_vs_analytic(
    dist: DegreeDistribution,
    n: int,
    kind: str,
    p: float,
    trials: int,
    base_seed: int = 0,
    max_degree_cap: int | None = None,
) -> DegreeLawComparison:
    """Compare mean induced-degree fractions with the thinned law.

    Bond compares against lambda_i_bond for every degree.  Site compares
    degrees >= 1 against p * lambda_d_bond; at degree 0 the prediction adds
    the deleted-vertex deficit 1 - p.
    """
    seq = from_distribution(dist, n, max_degree_cap)
    if kind == "bond":
        predicted = dict(lambda_bond(dist, p).weights)
    else:
        site = lambda_site(dist, p)
        predicted = dict(site.weights)
        predicted[0] = predicted.get(0, 0.0) + site.deficit
    max_deg = max(predicted)

    sums = np.zeros(max_deg + 1, dtype=float)
    for t in range(trials):
        record, outcome = _run_trial(
            seq, kind, float(p), t, base_seed, t, False, 1000
        )
        if outcome is None:
            raise RuntimeError(f"trial {t} failed: {record.error}")
        counts = outcome.induced_degrees.counts
        take = min(counts.size, max_deg + 1)
        sums[:take] += counts[:take]
    means = sums / (trials * n)

    rows = []
    worst = 0.0
    for i in range(max_deg + 1):
        analytic = predicted.get(i, 0.0)
        deviation = abs(means[i] - analytic)
        worst = max(worst, deviation)
        rows.append(
            {
                "degree": i,
                "empirical": float(means[i]),
                "analytic": analytic,
                "abs_deviation": float(deviation),
            }
        )
    return DegreeLawComparison(
        kind=kind,
        p=float(p),
        n=n,
        trials=trials,
        rows=tuple(rows),
        max_abs_deviation=float(worst),
    )
