"""Floating-point simplex used only to propose a starting basis.

The exact solver re-derives everything from the proposed columns, so the
only cost of a bad guess is a few extra exact pivots (or a cold start).
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

_PIVOT_TOL = 1e-9
_OPT_TOL = 1e-9
_REFACTOR_EVERY = 40


def float_basis(
    matrix: Sequence[Sequence[float]],
    rhs: Sequence[float],
    objective: Sequence[float],
    max_pivots: int = 20_000,
    perturb: float = 1e-6,
) -> list[int] | None:
    """Return structural columns of an (approximately) optimal basis.

    Maximizes ``objective @ x`` subject to ``matrix @ x = rhs``, ``x >= 0``
    with a dense two-phase tableau and Dantzig pricing.  The right-hand
    side is shifted by small deterministic amounts so that the many
    zero-rhs rows of the Khintchine LPs do not trap the run in degenerate
    pivots, and the tableau is recomputed from the original data every
    ``_REFACTOR_EVERY`` pivots to keep rounding drift out of the pricing.
    Returns ``None`` when the float run is inconclusive.
    """
    A = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    c = np.array(objective, dtype=float)
    R, V = A.shape
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    scale = np.abs(A).max(axis=1)
    scale[scale == 0] = 1.0
    A /= scale[:, None]
    b /= scale
    cmax = np.abs(c).max()
    if cmax > 0:
        c = c / cmax
    if perturb:
        rng = np.random.default_rng(0)
        b = b + perturb * (1.0 + rng.random(R))

    W = V + R
    ext = np.hstack([A, np.eye(R)])
    costs = {
        1: np.concatenate([np.zeros(V), -np.ones(R)]),
        2: np.concatenate([c, np.zeros(R)]),
    }
    basis = list(range(V, W))

    def factor():
        Binv = np.linalg.inv(ext[:, basis])
        body = Binv @ ext
        xb = Binv @ b
        return body, xb

    def run(phase: int, allowed: int) -> str:
        cost = costs[phase]
        pivots = 0
        while pivots < max_pivots:
            if pivots % _REFACTOR_EVERY == 0:
                try:
                    body, xb = factor()
                except np.linalg.LinAlgError:
                    return "singular"
                np.maximum(xb, 0.0, out=xb)
            y = cost[basis] @ body
            z = y[:allowed] - cost[:allowed]
            if phase == 1 and cost[basis] @ xb > -_OPT_TOL:
                return "optimal"
            s = int(np.argmin(z))
            if z[s] >= -_OPT_TOL:
                return "optimal"
            col = body[:, s]
            ok = col > _PIVOT_TOL
            if not ok.any():
                return "unbounded"
            ratios = np.full(R, np.inf)
            ratios[ok] = xb[ok] / col[ok]
            r = int(np.argmin(ratios))
            piv = col[r]
            theta = xb[r] / piv
            xb -= theta * col
            xb[r] = theta
            prow = body[r] / piv
            body -= np.outer(col, prow)
            body[r] = prow
            basis[r] = s
            pivots += 1
        return "limit"

    status = run(1, V)
    if status != "optimal":
        log.debug("float phase 1 inconclusive: %s", status)
        return None
    status = run(2, V)
    if status != "optimal":
        log.debug("float phase 2 inconclusive: %s", status)
        return None
    return [j for j in basis if j < V]
