"""Khintchine-type linear programs over k-wise independent Rademacher laws.

For a fixed coefficient vector ``a`` the best p-th moment

    sup E|sum_i a_i eps_i|^p   over k-wise independent Rademacher eps

is a linear program in the law of eps.  Two formulations are built here:

* the *orbit* LP, restricted to exchangeable laws, with one variable per
  Hamming-weight orbit (a = all-ones);
* the *full* LP with one variable per point of {-1, 1}^N (N <= 14).

k-wise independence is imposed as vanishing mixed moments of orders 1..k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb, prod
from typing import Sequence

import mpmath

from . import core
from .constructions import extremal_pairwise, independent
from .core import (
    APPROX_PREC,
    AtomicMeasure,
    Coefficients,
    OrbitMeasure,
    coefficients,
    correlation,
    is_kwise_independent,
    l2_norm_squared,
    moment,
    ones,
    orbit_correlation,
)
from .simplex import INFEASIBLE, OPTIMAL, LPProblem, LPSolution, solve_lp

MAX_FULL_N = 14


class InfeasibleLPError(RuntimeError):
    """The Khintchine LP came back infeasible; the independent law is always
    feasible, so this means the LP was built wrongly."""


class NotPairwiseIndependentError(ValueError):
    def __init__(self, report: core.IndependenceReport):
        self.report = report
        super().__init__(
            f"measure is not pairwise independent: E[prod eps_i for i in {report.witness}]"
            f" = {report.witness_correlation}"
        )


# ---------------------------------------------------------------------------
# LP builders


def _check_p(p):
    if p < 2:
        raise ValueError(f"moment order must be >= 2, got {p}")


def _to_fraction(x) -> Fraction:
    man, exp = x.man_exp
    return Fraction(int(man)) * (Fraction(2) ** int(exp))


def _power_coeff(base: Fraction, p) -> Fraction:
    """|base|^p, exact for integer p, rounded to APPROX_PREC bits otherwise."""
    base = abs(Fraction(base))
    if core._is_integral(p):
        return base ** int(p)
    with mpmath.workprec(APPROX_PREC):
        if isinstance(p, Fraction):
            pp = mpmath.mpf(p.numerator) / p.denominator
        else:
            pp = mpmath.mpf(p)
        return _to_fraction(mpmath.power(mpmath.mpf(base.numerator) / base.denominator, pp))


def build_orbit_lp(n: int, p, k: int) -> LPProblem:
    """Variables q_0..q_N (orbit masses); a = all-ones.

    Rows: sum q_w = 1, then sum_w q_w rho_j(w) = 0 for j = 1..k, where
    rho_j(w) is the j-fold correlation on the weight-w orbit.  Objective
    coefficients |2w - N|^p.
    """
    _check_p(p)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    core._orbit_guard(n)
    matrix = [[Fraction(1)] * (n + 1)]
    for j in range(1, k + 1):
        matrix.append([orbit_correlation(n, w, j) for w in range(n + 1)])
    rhs = [Fraction(1)] + [Fraction(0)] * k
    objective = [_power_coeff(2 * w - n, p) for w in range(n + 1)]
    return LPProblem(objective, matrix, rhs)


def full_lp_atoms(n: int) -> list[tuple[int, ...]]:
    return list(core.sign_vectors(n))


def full_lp_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """Constraint subsets (1-based) in row order: by size, then lexicographic."""
    return [s for j in range(1, k + 1) for s in itertools.combinations(range(1, n + 1), j)]


def build_full_lp(n: int, p, k: int, a: Sequence | None = None) -> LPProblem:
    """Variables P(x) for every x in {-1, 1}^N, ordered as :func:`full_lp_atoms`."""
    _check_p(p)
    if not 1 <= n <= MAX_FULL_N:
        raise core.GuardError(f"full LP needs 1 <= N <= {MAX_FULL_N}, got {n}")
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    a = ones(n) if a is None else coefficients(a, n)
    if not any(a):
        raise ValueError("coefficient vector a must not be zero")
    atoms = full_lp_atoms(n)
    matrix = [[Fraction(1)] * len(atoms)]
    for s in full_lp_subsets(n, k):
        idx = [i - 1 for i in s]
        matrix.append([Fraction(prod(x[i] for i in idx)) for x in atoms])
    rhs = [Fraction(1)] + [Fraction(0)] * (len(matrix) - 1)
    objective = [_power_coeff(sum(ai * xi for ai, xi in zip(a, x)), p) for x in atoms]
    return LPProblem(objective, matrix, rhs)


# ---------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class ConstantCell:
    n: int
    p: object
    k: int
    mode: str
    a: Coefficients
    moment_value: Fraction
    constant: object  # mpmath.mpf, APPROX_PREC bits
    optimizer: OrbitMeasure | AtomicMeasure
    is_vertex: bool
    approximate: bool = False
    multiple_optima: bool = False
    optimizer_is_paper_measure: bool = False
    solution: LPSolution | None = field(default=None, repr=False, compare=False)


def normalized_constant(moment_value: Fraction, p, a: Sequence):
    """moment_value^(1/p) / ||a||_2 as an mpf with APPROX_PREC bits."""
    with mpmath.workprec(APPROX_PREC):
        mv = mpmath.mpf(moment_value.numerator) / moment_value.denominator
        pp = mpmath.mpf(p.numerator) / p.denominator if isinstance(p, Fraction) else mpmath.mpf(p)
        norm2 = l2_norm_squared(a)
        return mpmath.power(mv, 1 / pp) / mpmath.sqrt(mpmath.mpf(norm2.numerator) / norm2.denominator)


def _is_paper_measure(m) -> bool:
    if not isinstance(m, OrbitMeasure) or m.n % 2 or m.n < 2:
        return False
    return m == extremal_pairwise(m.n)


def khintchine_cell(
    n: int,
    p,
    k: int,
    mode: str = "orbit",
    a: Sequence | None = None,
    *,
    guide: bool | None = None,
) -> ConstantCell:
    """Solve one (N, p, k) Khintchine LP and package the optimum.

    ``mode="orbit"`` optimizes over exchangeable laws and needs a constant
    coefficient vector; ``mode="full"`` optimizes over all laws on the cube.
    """
    a = ones(n) if a is None else coefficients(a, n)
    if not any(a):
        raise ValueError("coefficient vector a must not be zero")
    approximate = not core._is_integral(p)
    if mode == "orbit":
        if any(x != a[0] for x in a):
            raise ValueError("orbit mode needs a constant coefficient vector")
        prob = build_orbit_lp(n, p, k)
        sol = solve_lp(prob, guide=bool(guide))
        if sol.status == OPTIMAL and sol.multiple_optima:
            sol = _break_ties(prob, sol, n, p)
        scale = _power_coeff(a[0], p)
    elif mode == "full":
        prob = build_full_lp(n, p, k, a)
        sol = solve_lp(prob, guide=(prob.num_vars > 64) if guide is None else guide)
        scale = Fraction(1)
    else:
        raise ValueError(f"mode must be 'orbit' or 'full', got {mode!r}")
    if sol.status == INFEASIBLE:
        raise InfeasibleLPError(f"LP for N={n}, p={p}, k={k} ({mode}) is infeasible")
    if sol.status != OPTIMAL:
        raise InfeasibleLPError(f"LP for N={n}, p={p}, k={k} ({mode}) is {sol.status}")

    if mode == "orbit":
        optimizer: OrbitMeasure | AtomicMeasure = OrbitMeasure(n, sol.primal)
    else:
        atoms = full_lp_atoms(n)
        optimizer = AtomicMeasure(n, {atoms[j]: x for j, x in enumerate(sol.primal) if x})
    value = sol.value * scale
    return ConstantCell(
        n=n,
        p=p,
        k=k,
        mode=mode,
        a=a,
        moment_value=value,
        constant=normalized_constant(value, p, a),
        optimizer=optimizer,
        is_vertex=sol.is_vertex,
        approximate=approximate,
        multiple_optima=sol.multiple_optima,
        optimizer_is_paper_measure=_is_paper_measure(optimizer),
        solution=sol,
    )


def _break_ties(prob: LPProblem, sol: LPSolution, n: int, p) -> LPSolution:
    """Among all orbit-LP optima pick the one maximizing E|sum eps|^(p+1).

    The optimal set is a face of the feasible polytope, so the refined
    optimizer is still a vertex.  The reported optimum value is unchanged.
    """
    secondary = [_power_coeff(2 * w - n, p + 1) for w in range(n + 1)]
    refined = solve_lp(
        LPProblem(secondary, prob.matrix + (prob.objective,), prob.rhs + (sol.value,))
    )
    if refined.status != OPTIMAL:
        return sol
    return replace(
        sol,
        primal=refined.primal,
        basis=refined.basis,
        pivots=sol.pivots + refined.pivots,
    )


def orbit_optimum(n: int, p: int, k: int) -> Fraction:
    sol = solve_lp(build_orbit_lp(n, p, k))
    if sol.status != OPTIMAL:
        raise InfeasibleLPError(f"orbit LP N={n}, p={p}, k={k}: {sol.status}")
    return sol.value


# ---------------------------------------------------------------------------
# dual certificate


@dataclass(frozen=True)
class DualCertificate:
    """Values of a pair function u on {-1, 1}^2."""

    n: int
    p: int
    u11: Fraction
    u1m: Fraction
    um1: Fraction
    umm: Fraction

    def __post_init__(self):
        if self.u11 != self.umm or self.u1m != self.um1:
            raise ValueError("certificate must satisfy u(1,1) = u(-1,-1) and u(1,-1) = u(-1,1)")


@dataclass(frozen=True)
class CertificateReport:
    feasible: bool
    equality_weights: tuple[int, ...]
    certified_value: Fraction
    matches_primal: bool
    primal_value: Fraction
    slacks: tuple[Fraction, ...]  # rhs - lhs of the pointwise inequality, per weight
    violations: tuple[int, ...] = ()


def paper_certificate(n: int, p: int) -> DualCertificate:
    """u(1,1) = u(-1,-1) = N^p / C(N,2);  u(1,-1) = u(-1,1) = -((N-2)/N) u(1,1)."""
    if n % 2 or n < 4:
        raise ValueError(f"requires even n >= 4, got {n}")
    if not core._is_integral(p) or p < 2:
        raise ValueError(f"requires integer p >= 2, got {p}")
    p = int(p)
    u11 = Fraction(n**p, comb(n, 2))
    u1m = -Fraction(n - 2, n) * u11
    return DualCertificate(n, p, u11, u1m, u1m, u11)


def certificate_rhs(cert: DualCertificate, w: int) -> Fraction:
    """sum_{i<j} u(eps_i, eps_j) at any vector with w entries equal to +1."""
    n = cert.n
    return comb(w, 2) * cert.u11 + comb(n - w, 2) * cert.umm + w * (n - w) * cert.u1m


def certified_value(cert: DualCertificate) -> Fraction:
    """Dual objective: sum_{i<j} E u(eps_i, eps_j) under pairwise independence."""
    return comb(cert.n, 2) * (cert.u11 + cert.u1m + cert.um1 + cert.umm) / 4


def verify_certificate(
    cert: DualCertificate, primal_value: Fraction | None = None
) -> CertificateReport:
    """Check |2w - N|^p <= sum_{i<j} u(eps_i, eps_j) on every weight class.

    ``primal_value`` defaults to the orbit LP optimum at k = 2.
    """
    n, p = cert.n, cert.p
    slacks = []
    for w in range(n + 1):
        slacks.append(certificate_rhs(cert, w) - Fraction(abs(2 * w - n)) ** p)
    violations = tuple(w for w, s in enumerate(slacks) if s < 0)
    value = certified_value(cert)
    if primal_value is None:
        primal_value = orbit_optimum(n, p, 2)
    return CertificateReport(
        feasible=not violations,
        equality_weights=tuple(w for w, s in enumerate(slacks) if s == 0),
        certified_value=value,
        matches_primal=value == primal_value,
        primal_value=primal_value,
        slacks=tuple(slacks),
        violations=violations,
    )


# ---------------------------------------------------------------------------
# quartic machinery for exchangeable pairwise independent laws


@dataclass(frozen=True)
class QuarticDecomposition:
    independent_part: Fraction
    c: Fraction
    cross_sum: Fraction
    total: Fraction
    direct_moment: Fraction

    @property
    def consistent(self) -> bool:
        return self.total == self.independent_part + self.c * self.cross_sum == self.direct_moment


def elementary_symmetric(a: Sequence[Fraction], r: int) -> Fraction:
    e = [Fraction(1)] + [Fraction(0)] * r
    for x in a:
        for j in range(r, 0, -1):
            e[j] += e[j - 1] * x
    return e[r]


def independent_quartic(a: Sequence[Fraction]) -> Fraction:
    """E(sum a_i eps_i)^4 for independent eps: 3||a||_2^4 - 2||a||_4^4."""
    s2 = sum((Fraction(x) ** 2 for x in a), Fraction(0))
    s4 = sum((Fraction(x) ** 4 for x in a), Fraction(0))
    return 3 * s2 * s2 - 2 * s4


def distinct_quadruple_sum(a: Sequence[Fraction]) -> Fraction:
    """sum of a_i a_j a_k a_l over ordered quadruples of distinct indices."""
    return 24 * elementary_symmetric(a, 4)


def _require_pairwise(m: OrbitMeasure) -> None:
    if m.n < 4:
        raise ValueError(f"quartic decomposition needs N >= 4, got {m.n}")
    rep = is_kwise_independent(m, 2)
    if not rep.ok:
        raise NotPairwiseIndependentError(rep)


def quartic_decompose(m: OrbitMeasure, a: Sequence) -> QuarticDecomposition:
    """Split E(sum a_i eps_i)^4 into its independent part and c * cross_sum.

    Under pairwise independence every quartic monomial with a repeated index
    has the same expectation as for independent signs; only the all-distinct
    terms see the 4-fold correlation c.
    """
    if not isinstance(m, OrbitMeasure):
        raise TypeError("quartic_decompose needs an exchangeable (orbit) measure")
    _require_pairwise(m)
    a = coefficients(a, m.n)
    ind = independent_quartic(a)
    c = correlation(m, (1, 2, 3, 4))
    cross = distinct_quadruple_sum(a)
    return QuarticDecomposition(
        independent_part=ind,
        c=c,
        cross_sum=cross,
        total=ind + c * cross,
        direct_moment=moment(m, a, 4),
    )


def maclaurin_gap(a: Sequence) -> tuple[Fraction, Fraction]:
    """(cross_sum, 24*C(N,4)/N^2) for a non-negative unit vector a."""
    a = coefficients(a)
    if any(x < 0 for x in a):
        raise ValueError("maclaurin_gap needs non-negative coefficients")
    if l2_norm_squared(a) != 1:
        raise ValueError("maclaurin_gap needs sum(a_i^2) == 1 exactly")
    n = len(a)
    return distinct_quadruple_sum(a), Fraction(24 * comb(n, 4), n * n)


def equal_coefficient_quartic(m: OrbitMeasure) -> Fraction:
    """E(sum eps_i / sqrt(N))^4 = (1/N^2) sum_w q_w (2w - N)^4, kept rational."""
    n = m.n
    return Fraction(1, n * n) * sum(
        (q * (2 * w - n) ** 4 for w, q in enumerate(m.weights) if q), Fraction(0)
    )


def lemma_p4_check(m: OrbitMeasure, a: Sequence) -> bool:
    """E(sum a_i eps_i)^4 <= max(equal-coefficient moment, independent moment)."""
    if not isinstance(m, OrbitMeasure):
        raise TypeError("lemma_p4_check needs an exchangeable (orbit) measure")
    _require_pairwise(m)
    a = coefficients(a, m.n)
    if l2_norm_squared(a) != 1:
        raise ValueError("lemma_p4_check needs sum(a_i^2) == 1 exactly")
    lhs = moment(m, a, 4)
    return lhs <= max(equal_coefficient_quartic(m), independent_quartic(a))


def independent_moment(n: int, p: int, a: Sequence | None = None) -> Fraction:
    """E|sum a_i eps_i|^p for independent signs (a defaults to all-ones)."""
    return moment(independent(n), ones(n) if a is None else a, p)
