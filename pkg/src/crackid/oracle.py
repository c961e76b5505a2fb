"""Piecewise reference solver used to cross-check the closed-form deflection.

This is the classical alternative to the single-expression solution: split
the span at every crack and point load, write an independent cubic plus the
uniform-load quartic on each segment, and glue the pieces together with
matching conditions.  At a crack the deflection, curvature and shear stay
continuous while the slope jumps by flexibility times curvature; at a point
load the first three stay continuous while the third derivative jumps by
the load intensity.  The four support conditions close the square linear
system.

Deliberately shares no solution machinery with :mod:`crackid.beam` (only
the problem types), so agreement between the two is a meaningful check.
Intended for verification at small scale: at most eight cracks.
"""

from __future__ import annotations

import numpy as np

from .beam import BeamProblem, BoundaryCondition

__all__ = ["SingularBeamSystemError", "OracleSolution", "oracle_deflection"]

MAX_CRACKS = 8

#: Reject assembled systems whose condition number exceeds 1/1e-10.
CONDITION_LIMIT = 1e10


class SingularBeamSystemError(RuntimeError):
    """The assembled piecewise system is numerically singular."""


def _row(breaks, segment: int, xi: float, d: int) -> np.ndarray:
    """Coefficient row of the d-th derivative of segment ``segment`` at ``xi``.

    Segment s has unknowns (a, b, c, e) for a + b*xi + c*xi^2 + e*xi^3 in
    global coordinates; the uniform-load particular quartic is handled by
    the caller because it is common to all segments.
    """
    n_seg = len(breaks) + 1
    row = np.zeros(4 * n_seg)
    base = 4 * segment
    if d == 0:
        row[base : base + 4] = (1.0, xi, xi * xi, xi**3)
    elif d == 1:
        row[base : base + 4] = (0.0, 1.0, 2.0 * xi, 3.0 * xi * xi)
    elif d == 2:
        row[base : base + 4] = (0.0, 0.0, 2.0, 6.0 * xi)
    else:
        row[base : base + 4] = (0.0, 0.0, 0.0, 6.0)
    return row


class OracleSolution:
    """Assembled and solved piecewise representation of a beam problem."""

    def __init__(self, problem: BeamProblem):
        if len(problem.cracks) > MAX_CRACKS:
            raise ValueError(
                f"oracle supports at most {MAX_CRACKS} cracks, got {len(problem.cracks)}"
            )
        self.problem = problem
        q0 = problem.load.q0

        # Breakpoints: crack positions and point-load positions, merged.
        flex = {c.position: c.flexibility for c in problem.cracks}
        force: dict[float, float] = {}
        for pl in problem.load.point_loads:
            force[pl.position] = force.get(pl.position, 0.0) + pl.intensity
        breaks = sorted(set(flex) | set(force))
        self._breaks = breaks
        n_seg = len(breaks) + 1
        n = 4 * n_seg

        rows = []
        rhs = []

        def bc_row(segment, xi, d, value=0.0):
            rows.append(_row(breaks, segment, xi, d))
            rhs.append(value - _particular(q0, xi, d))

        # Support conditions (two per end).
        kind = problem.bc
        last = n_seg - 1
        if kind is BoundaryCondition.PINNED_PINNED:
            bc_row(0, 0.0, 0)
            bc_row(0, 0.0, 2)
            bc_row(last, 1.0, 0)
            bc_row(last, 1.0, 2)
        elif kind is BoundaryCondition.CLAMPED_CLAMPED:
            bc_row(0, 0.0, 0)
            bc_row(0, 0.0, 1)
            bc_row(last, 1.0, 0)
            bc_row(last, 1.0, 1)
        elif kind is BoundaryCondition.CANTILEVER:
            bc_row(0, 0.0, 0)
            bc_row(0, 0.0, 1)
            bc_row(last, 1.0, 2)
            bc_row(last, 1.0, 3)
        else:
            raise ValueError(f"unknown boundary condition {kind!r}")

        # Matching conditions at each breakpoint between segments s and s+1.
        for s, beta in enumerate(breaks):
            lam = flex.get(beta, 0.0)
            jump = force.get(beta, 0.0)

            # Deflection continuous.
            rows.append(_row(breaks, s + 1, beta, 0) - _row(breaks, s, beta, 0))
            rhs.append(0.0)

            # Slope jump equals flexibility times the (continuous) curvature.
            r = _row(breaks, s + 1, beta, 1) - _row(breaks, s, beta, 1)
            r -= lam * _row(breaks, s, beta, 2)
            rows.append(r)
            rhs.append(lam * _particular(q0, beta, 2))

            # Curvature continuous.
            rows.append(_row(breaks, s + 1, beta, 2) - _row(breaks, s, beta, 2))
            rhs.append(0.0)

            # Third derivative jumps by the concentrated load.
            rows.append(_row(breaks, s + 1, beta, 3) - _row(breaks, s, beta, 3))
            rhs.append(jump)

        matrix = np.array(rows)
        vector = np.array(rhs)
        assert matrix.shape == (n, n)

        cond = np.linalg.cond(matrix)
        if not np.isfinite(cond) or cond > CONDITION_LIMIT:
            raise SingularBeamSystemError(
                f"piecewise system condition number {cond:.3e} exceeds limit"
            )
        self._coeffs = np.linalg.solve(matrix, vector)
        self._q0 = q0

    def _segment(self, xi: float) -> int:
        s = 0
        for beta in self._breaks:
            if xi >= beta:
                s += 1
            else:
                break
        return min(s, len(self._breaks))

    def derivative(self, xi: float, d: int, segment: int | None = None) -> float:
        if segment is None:
            segment = self._segment(xi)
        row = _row(self._breaks, segment, xi, d)
        return float(row @ self._coeffs) + _particular(self._q0, xi, d)

    def deflection(self, xi: float) -> float:
        return self.derivative(xi, 0)

    def slope_jump(self, i: int) -> float:
        """Slope discontinuity at crack ``i`` straight from the segment polynomials."""
        beta = self.problem.cracks[i].position
        left = self._breaks.index(beta)
        return self.derivative(beta, 1, segment=left + 1) - self.derivative(
            beta, 1, segment=left
        )


def _particular(q0: float, xi: float, d: int) -> float:
    """Uniform-load particular quartic and its derivatives."""
    if d == 0:
        return q0 * xi**4 / 24.0
    if d == 1:
        return q0 * xi**3 / 6.0
    if d == 2:
        return q0 * xi * xi / 2.0
    return q0 * xi


def oracle_deflection(problem: BeamProblem, xi: float) -> float:
    """Deflection at ``xi`` from the piecewise reference solver."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"evaluation point {xi} outside [0, 1]")
    return OracleSolution(problem).deflection(xi)
