"""Pure-Python fraction-free simplex tableau.

Every entry is an integer numerator over one shared positive denominator
(the determinant of the current basis).  Pivots use the integer-preserving
update ``(t_ij * p - t_is * t_rj) / d_old``, whose division is always exact.
"""

from __future__ import annotations

from typing import Sequence

IMPLEMENTATION = "python"


class Tableau:
    __slots__ = ("_rows", "_d", "_ncols")

    def __init__(self, rows: Sequence[Sequence[int]]):
        self._rows = [[int(x) for x in row] for row in rows]
        if not self._rows:
            raise ValueError("tableau needs at least one row")
        self._ncols = len(self._rows[0])
        if any(len(row) != self._ncols for row in self._rows):
            raise ValueError("tableau rows must have equal length")
        self._d = 1

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def denominator(self) -> int:
        return self._d

    def get(self, i: int, j: int) -> int:
        return self._rows[i][j]

    def sign(self, i: int, j: int) -> int:
        x = self._rows[i][j]
        return (x > 0) - (x < 0)

    def row(self, i: int) -> list[int]:
        return list(self._rows[i])

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self._rows]

    def pivot(self, r: int, s: int) -> None:
        rows = self._rows
        pr = rows[r]
        p = pr[s]
        if p == 0:
            raise ZeroDivisionError("pivot element is zero")
        d = self._d
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[s]
            if f == 0:
                if p != d:
                    rows[i] = [x * p // d for x in row]
            else:
                rows[i] = [(x * p - f * y) // d for x, y in zip(row, pr)]
        if p < 0:
            self._rows = [[-x for x in row] for row in rows]
            self._d = -p
        else:
            self._d = p

    def first_negative(self, i: int, stop: int) -> int:
        """Smallest column index ``j < stop`` with a negative entry in row ``i``."""
        row = self._rows[i]
        for j in range(stop):
            if row[j] < 0:
                return j
        return -1

    def first_nonzero(self, i: int, stop: int) -> int:
        row = self._rows[i]
        for j in range(stop):
            if row[j]:
                return j
        return -1

    def ratio_test(self, s: int, rhs: int, nrows: int, keys: Sequence[int]) -> int:
        """Row minimising ``t[i][rhs] / t[i][s]`` over ``t[i][s] > 0``.

        Ties go to the smallest ``keys[i]`` (Bland's leaving rule).
        """
        best = -1
        best_a = best_b = 0
        for i in range(nrows):
            row = self._rows[i]
            a = row[s]
            if a <= 0:
                continue
            b = row[rhs]
            if best < 0:
                best, best_a, best_b = i, a, b
                continue
            lhs = b * best_a
            rhs_ = best_b * a
            if lhs < rhs_ or (lhs == rhs_ and keys[i] < keys[best]):
                best, best_a, best_b = i, a, b
        return best
