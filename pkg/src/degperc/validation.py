"""Self-check suite wiring the exact oracles against the samplers.

Run by ``degperc validate``.  Each check returns a pass/fail line; the
report is deterministic for a fixed seed.  The sampler under test is
injectable so a deliberately biased matcher fails the uniformity check
(the suite's own negative control lives in the tests).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

import numpy as np
from scipy.stats import chisquare

from . import oracle
from .components import components
from .configuration import SparseRegimeWarning, simplicity, uniform_matching
from .degrees import DegreeSequence
from .percolation import bond_percolate, site_percolate
from .rng import derive_seed

CHI2_SIGNIFICANCE = 0.001


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: str


@dataclass(frozen=True)
class ValidationReport:
    seed: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def text(self) -> str:
        lines = [f"validation (seed={self.seed})"]
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            lines.append(f"  [{status}] {check.name}: {check.details}")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def _canonical(matching: np.ndarray) -> tuple:
    pairs = [tuple(sorted(pair)) for pair in matching.tolist()]
    return tuple(sorted(pairs))


def check_matching_counts() -> CheckResult:
    fixtures = [
        DegreeSequence([1, 1]),
        DegreeSequence([2, 2]),
        DegreeSequence([3, 3]),
        DegreeSequence([2, 2, 2, 2]),
        DegreeSequence([3, 3, 2, 1, 1]),
    ]
    bad = []
    for seq in fixtures:
        produced = len(oracle.enumerate_matchings(seq))
        expected = oracle.matching_count(seq.num_edges)
        if produced != expected:
            bad.append(f"2M={seq.total_degree}: {produced} != {expected}")
    if bad:
        return CheckResult("matching counts", False, "; ".join(bad))
    return CheckResult(
        "matching counts", True, f"{len(fixtures)} fixtures match (2M)!/(M!2^M)"
    )


def check_survivor_set_uniformity() -> CheckResult:
    fixtures = [DegreeSequence([2, 2]), DegreeSequence([1, 1, 1, 1]), DegreeSequence([3, 3])]
    p = Fraction(1, 3)
    for seq in fixtures:
        m = seq.num_edges
        for k in range(1, m + 1):
            dist = oracle.exact_survivor_sets(seq, p, k)
            expected = Fraction(1, _binomial(seq.total_degree, 2 * k))
            if len(dist) != _binomial(seq.total_degree, 2 * k):
                return CheckResult(
                    "survivor-set uniformity",
                    False,
                    f"{seq!r} k={k}: {len(dist)} sets reachable, "
                    f"expected {_binomial(seq.total_degree, 2 * k)}",
                )
            if any(prob != expected for prob in dist.values()):
                return CheckResult(
                    "survivor-set uniformity",
                    False,
                    f"{seq!r} k={k}: distribution not exactly 1/C(2M,2k)",
                )
    return CheckResult(
        "survivor-set uniformity",
        True,
        "C | |C|=2k exactly uniform over 2k-subsets on all fixtures",
    )


def check_conditional_matching_uniformity() -> CheckResult:
    fixtures = [
        DegreeSequence([2, 2]),
        DegreeSequence([1, 1, 1, 1]),
        DegreeSequence([3, 3]),
        DegreeSequence([2, 2, 2, 2]),
    ]
    p = Fraction(2, 5)
    checked = 0
    for seq in fixtures:
        for target in _reachable_induced(seq):
            k2 = sum(target)
            if k2 == 0:
                continue
            dist = oracle.exact_bond_conditional(seq, p, target)
            expected = Fraction(1, oracle.matching_count(k2 // 2))
            if len(dist) != oracle.matching_count(k2 // 2):
                return CheckResult(
                    "conditional matching uniformity",
                    False,
                    f"{seq!r} d'={target}: {len(dist)} matchings, "
                    f"expected {oracle.matching_count(k2 // 2)}",
                )
            if any(prob != expected for prob in dist.values()):
                return CheckResult(
                    "conditional matching uniformity",
                    False,
                    f"{seq!r} d'={target}: not exactly k!2^k/(2k)!",
                )
            checked += 1
    return CheckResult(
        "conditional matching uniformity",
        True,
        f"survivor matching | d' exactly uniform for {checked} induced sequences",
    )


def _binomial(n: int, k: int) -> int:
    return math.comb(n, k)


def _reachable_induced(seq: DegreeSequence) -> list[tuple[int, ...]]:
    owners = oracle.point_owners(seq)
    seen = set()
    for matching in oracle.enumerate_matchings(seq):
        for size in range(seq.num_edges + 1):
            for kept in combinations(matching, size):
                points = [pt for pair in kept for pt in pair]
                seen.add(oracle._induced_vector(owners, seq.n, points))
    return sorted(seen)


def check_l1_distribution(seed: int, samples: int = 12000) -> CheckResult:
    fixtures = [
        (DegreeSequence([1, 1]), 0.3, "bond"),
        (DegreeSequence([2, 2]), 0.5, "bond"),
        (DegreeSequence([3, 3]), 0.6, "site"),
    ]
    percolators = {"bond": bond_percolate, "site": site_percolate}
    worst = 0.0
    for fixture_index, (seq, p, kind) in enumerate(fixtures):
        exact = oracle.exact_l1_distribution(seq, Fraction(p), kind)
        observed: dict[int, int] = {}
        base = derive_seed(seed, fixture_index)
        for t in range(samples):
            graph = uniform_matching(seq, derive_seed(base, 2 * t))
            outcome = percolators[kind](graph, p, derive_seed(base, 2 * t + 1))
            l1 = components(outcome).l1_size
            observed[l1] = observed.get(l1, 0) + 1
        support = set(exact) | set(observed)
        tv = 0.5 * sum(
            abs(observed.get(s, 0) / samples - float(exact.get(s, 0))) for s in support
        )
        worst = max(worst, tv)
        if tv > 0.02:
            return CheckResult(
                "L1 law vs oracle",
                False,
                f"{seq!r} {kind} p={p}: TV distance {tv:.4f} > 0.02",
            )
    return CheckResult(
        "L1 law vs oracle",
        True,
        f"max TV distance {worst:.4f} <= 0.02 at {samples} samples",
    )


def check_matching_sampler_chi2(
    seed: int,
    draws: int = 24000,
    matcher: Callable[[DegreeSequence, int], object] = uniform_matching,
) -> CheckResult:
    fixtures = [DegreeSequence([2, 2]), DegreeSequence([1, 1, 1, 3])]
    for fixture_index, seq in enumerate(fixtures):
        universe = {
            m: i for i, m in enumerate(oracle.enumerate_matchings(seq))
        }
        counts = np.zeros(len(universe), dtype=np.int64)
        base = derive_seed(seed, 100 + fixture_index)
        for t in range(draws):
            graph = matcher(seq, derive_seed(base, t))
            counts[universe[_canonical(graph.matching)]] += 1
        stat, pvalue = chisquare(counts)
        if pvalue < CHI2_SIGNIFICANCE:
            return CheckResult(
                "sampler uniformity (chi^2)",
                False,
                f"{seq!r}: p-value {pvalue:.2e} < {CHI2_SIGNIFICANCE}",
            )
    return CheckResult(
        "sampler uniformity (chi^2)",
        True,
        f"all matchings equally likely at significance {CHI2_SIGNIFICANCE} "
        f"({draws} draws/fixture)",
    )


def check_simplicity_rate(seed: int, n: int = 500, draws: int = 2500) -> CheckResult:
    seq = DegreeSequence([3] * n)
    base = derive_seed(seed, 200)
    simple = 0
    predicted = None
    for t in range(draws):
        report = simplicity(uniform_matching(seq, derive_seed(base, t)))
        predicted = report.predicted_simple_prob
        simple += report.is_simple
    rate = simple / draws
    ok = abs(rate - predicted) <= 0.03
    return CheckResult(
        "simplicity rate",
        ok,
        f"3-regular n={n}: empirical {rate:.4f} vs predicted {predicted:.4f} "
        f"(tolerance 0.03)",
    )


def run_validation(
    seed: int = 0,
    matcher: Callable[[DegreeSequence, int], object] = uniform_matching,
) -> ValidationReport:
    """Run the oracle suite; deterministic for fixed ``seed``."""
    with warnings.catch_warnings():
        # tiny fixtures sit deliberately outside the sparse asymptotic regime
        warnings.simplefilter("ignore", SparseRegimeWarning)
        checks = (
            check_matching_counts(),
            check_survivor_set_uniformity(),
            check_conditional_matching_uniformity(),
            check_l1_distribution(seed),
            check_matching_sampler_chi2(seed, matcher=matcher),
            check_simplicity_rate(seed),
        )
    return ValidationReport(seed=seed, checks=checks)
