"""Truncated Riemann zeta sums for power-law degree distributions.

``zeta_tail(s, m)`` evaluates ``sum_{k>=m} k^(-s)`` for real ``s > 1`` by
Euler-Maclaurin-corrected partial sums: terms up to a cutoff ``N`` are summed
directly and the remainder is expanded at ``N`` with Bernoulli corrections
through B8.  The size of the first omitted correction bounds the truncation
error; the call fails loudly if that bound exceeds ``abs_tol`` (default
1e-12) rather than return a silently degraded value.
"""

from __future__ import annotations

import math

ABS_TOL = 1e-12

# B_{2j} / (2j)! for j = 1..4; B_10/10! drives the error bound.
_BERNOULLI_OVER_FACT = (
    1.0 / 12.0,        # B2/2!
    -1.0 / 720.0,      # B4/4!
    1.0 / 30240.0,     # B6/6!
    -1.0 / 1209600.0,  # B8/8!
)
_B10_OVER_FACT = (5.0 / 66.0) / 3628800.0


def zeta_tail(s: float, min_term: int = 1, abs_tol: float = ABS_TOL) -> float:
    """Return ``sum_{k>=min_term} k^(-s)`` for ``s > 1``.

    Raises ValueError when the sum diverges (``s <= 1``) or the truncation
    bound cannot be certified below ``abs_tol``.
    """
    s = float(s)
    if not math.isfinite(s):
        raise ValueError(f"exponent must be finite, got {s}")
    if s <= 1.0:
        raise ValueError(f"zeta tail diverges for exponent {s} <= 1")
    if min_term < 1:
        raise ValueError("min_term must be >= 1")

    cutoff = max(64, int(min_term))
    partial = math.fsum(k ** (-s) for k in range(min_term, cutoff))

    # Euler-Maclaurin expansion of sum_{k>=N} k^(-s) at N = cutoff.
    tail = cutoff ** (1.0 - s) / (s - 1.0) + 0.5 * cutoff ** (-s)
    poch = s                          # s (s+1) ... (s + 2j - 2)
    power = cutoff ** (-s - 1.0)      # N^(-s - 2j + 1)
    for j, coeff in enumerate(_BERNOULLI_OVER_FACT, start=1):
        tail += coeff * poch * power
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        power /= float(cutoff) * float(cutoff)
    error_bound = _B10_OVER_FACT * poch * power
    if abs(error_bound) > abs_tol:
        raise ValueError(
            f"zeta tail truncation bound {error_bound:.3e} exceeds tolerance {abs_tol:.1e}"
        )
    return partial + tail
