"""Piecewise reference solver, and its agreement with the closed form."""

import numpy as np
import pytest

from crackid.beam import (
    BeamProblem,
    BoundaryCondition,
    CrackSet,
    LoadCase,
    PointLoad,
    deflection,
    rotation_jump,
)
from crackid.oracle import OracleSolution, oracle_deflection

from test_beam import pinned_single_crack, random_problem

PP = BoundaryCondition.PINNED_PINNED


def test_no_cracks_matches_analytic():
    problem = BeamProblem(PP, CrackSet(), LoadCase.uniform(50.0))
    assert oracle_deflection(problem, 0.5) == pytest.approx(5 * 50 / 384, rel=1e-12)


def test_single_crack_reference_value():
    assert oracle_deflection(pinned_single_crack(), 0.1) == pytest.approx(
        0.221175, abs=5e-7
    )


def test_randomized_agreement_with_closed_form():
    rng = np.random.default_rng(2024)
    for _ in range(40):
        problem = random_problem(rng)
        solution = OracleSolution(problem)
        probes = rng.uniform(0.0, 1.0, size=10)
        for x in probes:
            reference = solution.deflection(float(x))
            value = deflection(problem, float(x))
            assert value == pytest.approx(
                reference, rel=1e-10, abs=1e-12 * max(1.0, abs(reference))
            )


def test_slope_jump_matches_spring_law():
    rng = np.random.default_rng(5)
    for _ in range(15):
        problem = random_problem(rng, max_cracks=4)
        solution = OracleSolution(problem)
        for i in range(len(problem.cracks)):
            assert solution.slope_jump(i) == pytest.approx(
                rotation_jump(problem, i), rel=1e-9, abs=1e-12
            )


def test_point_load_shear_jump():
    # third derivative jumps by the load intensity across its abscissa
    problem = BeamProblem(PP, CrackSet(), LoadCase.point(3.0, 0.5))
    solution = OracleSolution(problem)
    below = solution.derivative(0.5, 3, segment=0)
    above = solution.derivative(0.5, 3, segment=1)
    assert above - below == pytest.approx(3.0, rel=1e-12)


def test_coincident_crack_and_load():
    cracks = CrackSet.from_pairs([(0.5, 0.05)])
    problem = BeamProblem(PP, cracks, LoadCase(10.0, (PointLoad(2.0, 0.5),)))
    for x in (0.25, 0.5, 0.75):
        assert deflection(problem, x) == pytest.approx(
            oracle_deflection(problem, x), rel=1e-10
        )


def test_rejects_too_many_cracks():
    pairs = [(0.1 * k, 0.01) for k in range(1, 10)]
    problem = BeamProblem(PP, CrackSet.from_pairs(pairs), LoadCase.uniform(1.0))
    with pytest.raises(ValueError):
        OracleSolution(problem)
