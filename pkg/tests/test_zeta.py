import numpy as np
import pytest
from scipy.special import zeta as hurwitz_zeta

from degperc.zeta import zeta_tail

ORACLE_CUTOFF = 10**6


def partial_sum_oracle(s: float, min_term: int = 1) -> float:
    """Independent reference: plain partial sums to 1e6 terms plus the
    integral remainder; its own error is below cutoff^(-s)/2."""
    k = np.arange(min_term, ORACLE_CUTOFF + 1, dtype=float)
    return float(np.sum(k ** (-s))) + float(ORACLE_CUTOFF) ** (1.0 - s) / (s - 1.0)


@pytest.mark.parametrize(
    "s,m",
    [(1.1, 1), (1.3, 1), (2.0, 1), (2.3, 1), (4.0, 2), (3.0, 2), (1.2, 2), (6.5, 1)],
)
def test_matches_partial_sum_oracle(s, m):
    oracle_error = 0.5 * float(ORACLE_CUTOFF) ** (-s)
    assert zeta_tail(s, m) == pytest.approx(
        partial_sum_oracle(s, m), abs=max(1e-12, 2 * oracle_error)
    )


@pytest.mark.parametrize("s", [1.05, 1.5, 2.0, 3.3, 4.7, 9.0])
@pytest.mark.parametrize("m", [1, 2, 5, 100])
def test_matches_scipy_hurwitz(s, m):
    assert zeta_tail(s, m) == pytest.approx(hurwitz_zeta(s, m), abs=1e-12)


def test_known_value_basel():
    assert zeta_tail(2.0) == pytest.approx(np.pi**2 / 6.0, abs=1e-12)


def test_tail_decomposition():
    s = 2.7
    head = sum(k ** (-s) for k in range(1, 7))
    assert zeta_tail(s, 7) == pytest.approx(zeta_tail(s, 1) - head, abs=1e-12)


@pytest.mark.parametrize("s", [1.0, 0.5, 0.0, -2.0])
def test_divergent_exponent_rejected(s):
    with pytest.raises(ValueError, match="diverges"):
        zeta_tail(s)


def test_bad_min_term_rejected():
    with pytest.raises(ValueError):
        zeta_tail(2.0, 0)
