"""Closed-form static deflection of Euler-Bernoulli beams with concentrated cracks.

Every crack is modelled as an internal hinge restrained by a rotational
spring, which enters the solution as a slope discontinuity proportional to
the local curvature.  The deflection over the whole span is a single
expression built from five basis functions whose crack corrections are
Heaviside ramps, so no segment-by-segment matching is required: only the
four boundary conditions fix the solution.

All quantities are dimensionless.  Positions live in (0, 1) as fractions of
the span, loads are normalised by the bending stiffness, and the deflection
comes out in the same normalised units.  Conventions used throughout:

* the Heaviside step is right-continuous, ``U(0) = 1``;
* load antiderivatives are taken with zero integration constants at the
  left end (any other anchor is absorbed by the boundary constants);
* derivatives of the closed form are the classical (function) parts only,
  which is all the boundary conditions and spring law ever sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "BoundaryCondition",
    "Crack",
    "CrackSet",
    "PointLoad",
    "LoadCase",
    "BeamProblem",
    "DegenerateBeamError",
    "load_integral",
    "basis_f",
    "integration_constants",
    "deflection",
    "deflection_profile",
    "slope",
    "curvature",
    "rotation_jump",
]

#: Denominators of the boundary-constant formulas below this magnitude are
#: treated as a degenerate configuration.
DENOMINATOR_FLOOR = 1e-14


class DegenerateBeamError(RuntimeError):
    """The boundary-condition system has no usable solution."""


class BoundaryCondition(Enum):
    """Supported end restraints.

    ``CANTILEVER`` is clamped at the left end (position 0) and free at the
    right end (position 1).
    """

    PINNED_PINNED = "pinned-pinned"
    CLAMPED_CLAMPED = "clamped-clamped"
    CANTILEVER = "cantilever"


@dataclass(frozen=True)
class Crack:
    """A concentrated crack: position in (0, 1) and spring flexibility >= 0."""

    position: float
    flexibility: float

    def __post_init__(self):
        if not 0.0 < self.position < 1.0:
            raise ValueError(f"crack position {self.position} outside (0, 1)")
        if self.flexibility < 0.0:
            raise ValueError(f"crack flexibility {self.flexibility} negative")


@dataclass(frozen=True)
class CrackSet:
    """Ordered collection of cracks with strictly increasing positions.

    A flexibility of zero is allowed and behaves exactly as if the crack
    were absent.
    """

    cracks: tuple[Crack, ...] = ()

    def __post_init__(self):
        for left, right in zip(self.cracks, self.cracks[1:]):
            if right.position <= left.position:
                raise ValueError(
                    "crack positions must be strictly increasing, got "
                    f"{left.position} then {right.position}"
                )

    @classmethod
    def from_pairs(cls, pairs) -> "CrackSet":
        """Build from an iterable of (position, flexibility) pairs."""
        ordered = sorted(pairs, key=lambda p: p[0])
        return cls(tuple(Crack(float(p), float(f)) for p, f in ordered))

    def __len__(self) -> int:
        return len(self.cracks)

    def __iter__(self):
        return iter(self.cracks)

    def __getitem__(self, i) -> Crack:
        return self.cracks[i]

    def positions(self) -> tuple[float, ...]:
        return tuple(c.position for c in self.cracks)

    def flexibilities(self) -> tuple[float, ...]:
        return tuple(c.flexibility for c in self.cracks)


@dataclass(frozen=True)
class PointLoad:
    """Concentrated transverse load of given intensity at a position in (0, 1)."""

    intensity: float
    position: float

    def __post_init__(self):
        if not 0.0 < self.position < 1.0:
            raise ValueError(f"point-load position {self.position} outside (0, 1)")


@dataclass(frozen=True)
class LoadCase:
    """Uniform load intensity plus any number of concentrated loads."""

    q0: float = 0.0
    point_loads: tuple[PointLoad, ...] = ()

    @classmethod
    def uniform(cls, q0: float) -> "LoadCase":
        return cls(q0=float(q0))

    @classmethod
    def point(cls, intensity: float, position: float) -> "LoadCase":
        return cls(q0=0.0, point_loads=(PointLoad(float(intensity), float(position)),))

    def scaled(self, factor: float) -> "LoadCase":
        return LoadCase(
            q0=self.q0 * factor,
            point_loads=tuple(
                PointLoad(p.intensity * factor, p.position) for p in self.point_loads
            ),
        )


@dataclass(frozen=True)
class BeamProblem:
    """Immutable forward-problem instance: supports, cracks and loading."""

    bc: BoundaryCondition
    cracks: CrackSet = CrackSet()
    load: LoadCase = LoadCase()


def _step(t: float) -> float:
    """Right-continuous Heaviside step."""
    return 1.0 if t >= 0.0 else 0.0


def _load_antiderivative(load: LoadCase, xi: float, p: int) -> float:
    """p-th antiderivative of the load, zero at the left end, p in 1..4."""
    fact = math.factorial(p)
    total = load.q0 * xi**p / fact
    pfact = math.factorial(p - 1)
    for pl in load.point_loads:
        t = xi - pl.position
        if t >= 0.0:
            total += pl.intensity * t ** (p - 1) / pfact
    return total


def load_integral(load: LoadCase, xi: float, p: int) -> float:
    """Repeated integral of the load function, order ``p`` in {2, 3, 4}.

    Antiderivative constants are zero at position 0; the step convention
    makes a point load contribute from its own abscissa onwards.
    """
    if p not in (2, 3, 4):
        raise ValueError(f"integral order must be 2, 3 or 4, got {p}")
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"evaluation point {xi} outside [0, 1]")
    return _load_antiderivative(load, xi, p)


def basis_f(j: int, d: int, xi: float, cracks: CrackSet, load: LoadCase) -> float:
    """Basis function ``f_j`` (j in 1..5) or its d-th classical derivative.

    ``f_1``..``f_4`` are the homogeneous building blocks (constants,
    linear, and the quadratic/cubic terms with crack ramp corrections);
    ``f_5`` carries the load.  Derivatives of order >= 1 drop the
    distributional spikes, returning the function part only, with the step
    evaluated right-continuously.
    """
    if j not in (1, 2, 3, 4, 5):
        raise ValueError(f"basis index must be 1..5, got {j}")
    if d not in (0, 1, 2, 3):
        raise ValueError(f"derivative order must be 0..3, got {d}")

    if j == 1:
        return 1.0 if d == 0 else 0.0
    if j == 2:
        return (xi, 1.0, 0.0, 0.0)[d]

    if j == 3:
        if d == 0:
            acc = xi * xi
            for c in cracks:
                t = xi - c.position
                if t >= 0.0:
                    acc += 2.0 * c.flexibility * t
            return acc
        if d == 1:
            acc = 2.0 * xi
            for c in cracks:
                acc += 2.0 * c.flexibility * _step(xi - c.position)
            return acc
        return 2.0 if d == 2 else 0.0

    if j == 4:
        if d == 0:
            acc = xi**3
            for c in cracks:
                t = xi - c.position
                if t >= 0.0:
                    acc += 6.0 * c.flexibility * c.position * t
            return acc
        if d == 1:
            acc = 3.0 * xi * xi
            for c in cracks:
                acc += 6.0 * c.flexibility * c.position * _step(xi - c.position)
            return acc
        return 6.0 * xi if d == 2 else 6.0

    # j == 5: load-driven part.  The crack ramps are weighted by the second
    # load integral evaluated at the crack itself.
    if d == 0:
        acc = _load_antiderivative(load, xi, 4)
        for c in cracks:
            t = xi - c.position
            if t >= 0.0:
                acc += c.flexibility * _load_antiderivative(load, c.position, 2) * t
        return acc
    if d == 1:
        acc = _load_antiderivative(load, xi, 3)
        for c in cracks:
            acc += (
                c.flexibility
                * _load_antiderivative(load, c.position, 2)
                * _step(xi - c.position)
            )
        return acc
    if d == 2:
        return _load_antiderivative(load, xi, 2)
    return _load_antiderivative(load, xi, 1)


def integration_constants(problem: BeamProblem) -> tuple[float, float, float, float]:
    """Boundary constants (c1, c2, c3, c4) of the closed-form deflection.

    Each support type pins two constants directly and solves a 2x2 system
    for the remaining pair from the end conditions at position 1.
    """
    cracks, load = problem.cracks, problem.load

    def f(j, d=0, xi=1.0):
        return basis_f(j, d, xi, cracks, load)

    kind = problem.bc
    if kind is BoundaryCondition.PINNED_PINNED:
        # u(0) = u''(0) = 0 give c1 = c3 = 0; u(1) = u''(1) = 0 fix the rest.
        den = f(4, 2)
        if abs(den) < DENOMINATOR_FLOOR:
            raise DegenerateBeamError("pinned-pinned system is degenerate")
        c4 = -f(5, 2) / den
        c2 = (f(5, 2) / den) * f(4) - f(5)
        return (0.0, c2, 0.0, c4)

    if kind is BoundaryCondition.CLAMPED_CLAMPED:
        # u(0) = u'(0) = 0 give c1 = c2 = 0; u(1) = u'(1) = 0 fix the rest.
        den = f(3) * f(4, 1) - f(3, 1) * f(4)
        if abs(den) < DENOMINATOR_FLOOR:
            raise DegenerateBeamError("clamped-clamped system is degenerate")
        c3 = (f(5, 1) * f(4) - f(5) * f(4, 1)) / den
        c4 = (f(3, 1) * f(5) - f(3) * f(5, 1)) / den
        return (0.0, 0.0, c3, c4)

    if kind is BoundaryCondition.CANTILEVER:
        # u(0) = u'(0) = 0 give c1 = c2 = 0; the free end imposes
        # u''(1) = u'''(1) = 0.
        den = f(3, 2) * f(4, 3) - f(3, 3) * f(4, 2)
        if abs(den) < DENOMINATOR_FLOOR:
            raise DegenerateBeamError("cantilever system is degenerate")
        c3 = (f(5, 3) * f(4, 2) - f(5, 2) * f(4, 3)) / den
        c4 = (f(5, 2) * f(3, 3) - f(5, 3) * f(3, 2)) / den
        return (0.0, 0.0, c3, c4)

    raise ValueError(f"unknown boundary condition {kind!r}")


def _evaluate(problem: BeamProblem, xi: float, d: int, constants) -> float:
    c1, c2, c3, c4 = constants
    cracks, load = problem.cracks, problem.load
    return (
        c1 * basis_f(1, d, xi, cracks, load)
        + c2 * basis_f(2, d, xi, cracks, load)
        + c3 * basis_f(3, d, xi, cracks, load)
        + c4 * basis_f(4, d, xi, cracks, load)
        + basis_f(5, d, xi, cracks, load)
    )


def deflection(problem: BeamProblem, xi: float) -> float:
    """Normalised transverse deflection at ``xi`` in [0, 1]."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"evaluation point {xi} outside [0, 1]")
    return _evaluate(problem, xi, 0, integration_constants(problem))


def deflection_profile(problem: BeamProblem, xis) -> list[float]:
    """Deflections at many points, computing the boundary constants once."""
    constants = integration_constants(problem)
    out = []
    for xi in xis:
        if not 0.0 <= xi <= 1.0:
            raise ValueError(f"evaluation point {xi} outside [0, 1]")
        out.append(_evaluate(problem, xi, 0, constants))
    return out


def slope(problem: BeamProblem, xi: float) -> float:
    """Classical first derivative of the deflection (right limit at cracks)."""
    return _evaluate(problem, xi, 1, integration_constants(problem))


def curvature(problem: BeamProblem, xi: float) -> float:
    """Classical second derivative of the deflection.

    The curvature is continuous across cracks, so no side convention is
    needed.
    """
    return _evaluate(problem, xi, 2, integration_constants(problem))


def rotation_jump(problem: BeamProblem, i: int) -> float:
    """Slope discontinuity at crack ``i``: flexibility times local curvature."""
    crack = problem.cracks[i]
    if crack.flexibility == 0.0:
        return 0.0
    return crack.flexibility * curvature(problem, crack.position)
