"""Closed-form exchangeable measures on {-1, 1}^N."""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .core import OrbitMeasure, mix


def _require_even(n: int, minimum: int) -> None:
    if n % 2:
        raise ValueError(f"requires even n, got {n}")
    if n < minimum:
        raise ValueError(f"requires n >= {minimum}, got {n}")


def antipodal(n: int) -> OrbitMeasure:
    """Half mass on all +1, half on all -1.

    Rademacher marginals only (1-wise independent); |sum eps| = n surely,
    which is the equality case of the Hoelder bound sqrt(n)*||a||_2.
    """
    if n < 1:
        raise ValueError(f"requires n >= 1, got {n}")
    q = [Fraction(0)] * (n + 1)
    q[0] += Fraction(1, 2)
    q[n] += Fraction(1, 2)
    return OrbitMeasure(n, q)


def balanced(n: int) -> OrbitMeasure:
    """Uniform measure on vectors with exactly n/2 entries equal to +1."""
    _require_even(n, 2)
    q = [Fraction(0)] * (n + 1)
    q[n // 2] = Fraction(1)
    return OrbitMeasure(n, q)


def extremal_pairwise(n: int) -> OrbitMeasure:
    """The mixture (1/n)*antipodal + ((n-1)/n)*balanced.

    Pairwise (indeed 3-wise) independent, and maximizes E|sum eps|^p over
    pairwise independent Rademacher vectors for every p >= 2, with value
    n^(p-1).  At n = 2 it coincides with the independent measure.
    """
    _require_even(n, 2)
    return mix([(Fraction(1, n), antipodal(n)), (Fraction(n - 1, n), balanced(n))])


def independent(n: int) -> OrbitMeasure:
    """Product of n independent Rademacher coordinates."""
    if n < 1:
        raise ValueError(f"requires n >= 1, got {n}")
    return OrbitMeasure(n, [Fraction(comb(n, w), 2**n) for w in range(n + 1)])


def extremal_fourth_correlation(n: int) -> Fraction:
    """E[eps_1 eps_2 eps_3 eps_4] under :func:`extremal_pairwise` (= 1/(n-3)).

    Nonzero, so that measure is not 4-wise independent.  With a = all-ones
    the quartic moment splits as 3n^2 - 2n + c * n(n-1)(n-2)(n-3) = n^3,
    which forces c = 1/(n-3).
    """
    _require_even(n, 4)
    return Fraction(1, n - 3)


CONSTRUCTORS = {
    "extremal-pairwise": extremal_pairwise,
    "antipodal": antipodal,
    "balanced": balanced,
    "independent": independent,
}
