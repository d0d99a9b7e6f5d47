"""Exact rational linear programming.

Problems are stated in equality form ``max c.x  s.t.  A x = b, x >= 0`` with
:class:`fractions.Fraction` data.  :func:`solve_lp` runs a two-phase primal
simplex with Bland's rule on a fraction-free integer tableau, so every
returned number is exact: primal values, dual multipliers and the optimum.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from ._kernel import IMPLEMENTATION, PyTableau, Tableau

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPValidationError(ValueError):
    """Malformed LP data (ragged rows, mismatched lengths)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise LPValidationError(f"LP data must be exact (int or Fraction), got {type(x).__name__}")


@dataclass(frozen=True)
class LPProblem:
    """``maximize objective . x`` subject to ``matrix x = rhs`` and ``x >= 0``."""

    objective: tuple[Fraction, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __init__(self, objective, matrix, rhs):
        c = tuple(_frac(x) for x in objective)
        A = tuple(tuple(_frac(x) for x in row) for row in matrix)
        b = tuple(_frac(x) for x in rhs)
        if not c:
            raise LPValidationError("LP needs at least one variable")
        if len(A) != len(b):
            raise LPValidationError(f"{len(A)} constraint rows but {len(b)} right-hand sides")
        for i, row in enumerate(A):
            if len(row) != len(c):
                raise LPValidationError(f"row {i} has {len(row)} entries, expected {len(c)}")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "rhs", b)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.rhs)


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    duals: tuple[Fraction, ...] = ()
    basis: tuple[int, ...] = ()
    is_vertex: bool = False
    removed_rows: tuple[int, ...] = ()
    multiple_optima: bool = False
    pivots: int = 0
    warm_started: bool = False
    kernel: str = IMPLEMENTATION
    ray: tuple[Fraction, ...] = field(default=(), repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, x in enumerate(self.primal) if x)

    def dual_value(self, prob: LPProblem) -> Fraction:
        return sum((y * b for y, b in zip(self.duals, prob.rhs)), Fraction(0))


class _Solver:
    """One solve: owns the integer tableau and the bookkeeping around it.

    Tableau layout: rows ``0..R-1`` constraints, row ``R`` the phase-2
    reduced costs, row ``R+1`` the phase-1 reduced costs.  Columns
    ``0..V-1`` structural, ``V..V+R-1`` artificial, last column the rhs.
    """

    def __init__(self, prob: LPProblem, tableau_cls):
        self.prob = prob
        R, V = prob.num_rows, prob.num_vars
        self.R, self.V = R, V
        self.W = V + R
        # scale rows to integers and flip them so that rhs >= 0
        self.row_scale: list[int] = []
        int_rows: list[list[int]] = []
        int_rhs: list[int] = []
        for row, b in zip(prob.matrix, prob.rhs):
            m = lcm(*(x.denominator for x in row), b.denominator)
            if b < 0:
                m = -m
            self.row_scale.append(m)
            int_rows.append([int(x * m) for x in row])
            int_rhs.append(int(b * m))
        self.obj_scale = lcm(*(x.denominator for x in prob.objective))
        int_c = [int(x * self.obj_scale) for x in prob.objective]

        rows = []
        for i in range(R):
            art = [0] * R
            art[i] = 1
            rows.append(int_rows[i] + art + [int_rhs[i]])
        rows.append([-x for x in int_c] + [0] * R + [0])
        rows.append(
            [-sum(int_rows[i][j] for i in range(R)) for j in range(V)] + [0] * R + [-sum(int_rhs)]
        )
        self.T = tableau_cls(rows)
        self.basis = list(range(V, V + R))
        self.redundant: set[int] = set()
        self.pivots = 0

    # -- primitive steps -------------------------------------------------
    def _pivot(self, r: int, s: int) -> None:
        self.T.pivot(r, s)
        self.basis[r] = s
        self.pivots += 1

    def _run(self, obj_row: int, allowed: int, stop_at_zero: bool = False) -> str:
        T, R, W = self.T, self.R, self.W
        while True:
            if stop_at_zero and T.sign(obj_row, W) == 0:
                return OPTIMAL
            s = T.first_negative(obj_row, allowed)
            if s < 0:
                return OPTIMAL
            r = T.ratio_test(s, W, R, self.basis)
            if r < 0:
                self.unbounded_column = s
                return UNBOUNDED
            self._pivot(r, s)

    def _drive_out_artificials(self) -> None:
        """Replace zero-level artificials by structural columns; rows with no
        structural entry left are linearly dependent and get marked."""
        T, V = self.T, self.V
        for i in range(self.R):
            if self.basis[i] < V:
                continue
            j = T.first_nonzero(i, V)
            if j < 0:
                self.redundant.add(i)
            else:
                self._pivot(i, j)

    def crash(self, columns: Sequence[int]) -> bool:
        """Pivot the given structural columns into the basis (Gaussian
        elimination on artificial-held rows).  Returns whether the resulting
        basis is primal feasible."""
        T, V, W = self.T, self.V, self.W
        for j in columns:
            if not 0 <= j < V or j in self.basis:
                continue
            r = -1
            for i in range(self.R):
                if self.basis[i] >= V and T.sign(i, j) != 0:
                    r = i
                    break
            if r >= 0:
                self._pivot(r, j)
        for i in range(self.R):
            sgn = T.sign(i, W)
            if sgn < 0 or (sgn > 0 and self.basis[i] >= V):
                return False
        return True

    def solve(self, warm_start: Sequence[int] | None = None) -> LPSolution | None:
        R, V, W = self.R, self.V, self.W
        warm = False
        if warm_start is not None:
            warm = self.crash(warm_start)
            if not warm:
                return None
        status = self._run(R + 1, V, stop_at_zero=True)
        if status != OPTIMAL:  # phase 1 is bounded above by zero
            raise AssertionError("phase 1 cannot be unbounded")
        if self.T.sign(R + 1, W) < 0:
            return LPSolution(status=INFEASIBLE, pivots=self.pivots, warm_started=warm)
        self._drive_out_artificials()
        status = self._run(R, V)
        if status == UNBOUNDED:
            return LPSolution(
                status=UNBOUNDED, pivots=self.pivots, warm_started=warm, ray=self._ray()
            )
        return self._package(warm)

    def _ray(self) -> tuple[Fraction, ...]:
        s = self.unbounded_column
        d = self.T.denominator
        ray = [Fraction(0)] * self.V
        ray[s] = Fraction(1)
        for i, j in enumerate(self.basis):
            if j < self.V:
                ray[j] = -Fraction(self.T.get(i, s), d)
        return tuple(ray)

    def _package(self, warm: bool) -> LPSolution:
        T, R, V, W = self.T, self.R, self.V, self.W
        d = T.denominator
        primal = [Fraction(0)] * V
        for i, j in enumerate(self.basis):
            if j < V:
                primal[j] = Fraction(T.get(i, W), d)
        zrow = T.row(R)
        # objective-row entries under the artificial columns are c_B B^-1
        duals = tuple(
            Fraction(zrow[V + i] * self.row_scale[i], d * self.obj_scale) for i in range(R)
        )
        value = Fraction(zrow[W], d * self.obj_scale)
        basic = set(self.basis)
        multiple = any(zrow[j] == 0 for j in range(V) if j not in basic)
        return LPSolution(
            status=OPTIMAL,
            value=value,
            primal=tuple(primal),
            duals=duals,
            basis=tuple(j for j in self.basis if j < V),
            is_vertex=True,
            removed_rows=tuple(sorted(self.redundant)),
            multiple_optima=multiple,
            pivots=self.pivots,
            warm_started=warm,
        )


def solve_lp(
    prob: LPProblem,
    *,
    warm_start: Sequence[int] | None = None,
    guide: bool = False,
    pure_python: bool = False,
) -> LPSolution:
    """Solve ``prob`` exactly.

    ``warm_start`` proposes structural basis columns; ``guide=True`` asks the
    floating-point simplex in :mod:`kwise.simplex.guide` for them.  A
    proposal that does not give a primal feasible basis is discarded and
    the solve restarts cold, so either way the result is the exact optimum
    certified by the returned duals.
    """
    if not isinstance(prob, LPProblem):
        raise LPValidationError("solve_lp expects an LPProblem")
    tableau_cls = PyTableau if pure_python else Tableau
    if guide and warm_start is None and prob.num_rows:
        from .guide import float_basis

        warm_start = float_basis(
            [[float(x) for x in row] for row in prob.matrix],
            [float(x) for x in prob.rhs],
            [float(x) for x in prob.objective],
        )
    if warm_start is not None:
        sol = _Solver(prob, tableau_cls).solve(warm_start)
        if sol is not None:
            return sol
        log.debug("warm start rejected; solving cold")
    return _Solver(prob, tableau_cls).solve()


__all__ = [
    "INFEASIBLE",
    "IMPLEMENTATION",
    "LPProblem",
    "LPSolution",
    "LPValidationError",
    "OPTIMAL",
    "UNBOUNDED",
    "solve_lp",
]
