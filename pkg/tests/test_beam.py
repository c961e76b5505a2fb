"""Closed-form solver: frozen values, classical limits and invariants."""

import math

import numpy as np
import pytest

from crackid.beam import (
    BeamProblem,
    BoundaryCondition,
    Crack,
    CrackSet,
    LoadCase,
    PointLoad,
    basis_f,
    curvature,
    deflection,
    deflection_profile,
    integration_constants,
    load_integral,
    rotation_jump,
    slope,
)

PP = BoundaryCondition.PINNED_PINNED
CC = BoundaryCondition.CLAMPED_CLAMPED
CL = BoundaryCondition.CANTILEVER


def pinned_single_crack():
    return BeamProblem(PP, CrackSet.from_pairs([(0.6, 0.07)]), LoadCase.uniform(50.0))


def random_problem(rng, max_cracks=5):
    bc = rng.choice([PP, CC, CL])
    n = rng.integers(0, max_cracks + 1)
    positions = np.sort(rng.uniform(0.05, 0.95, size=n))
    while len(positions) > 1 and np.min(np.diff(positions)) < 1e-3:
        positions = np.sort(rng.uniform(0.05, 0.95, size=n))
    lams = rng.uniform(0.01, 0.1, size=n)
    cracks = CrackSet.from_pairs(zip(positions, lams))
    q0 = rng.uniform(0.0, 60.0)
    loads = tuple(
        PointLoad(rng.uniform(0.5, 5.0), rng.uniform(0.1, 0.9))
        for _ in range(rng.integers(0, 3))
    )
    if q0 < 1.0 and not loads:
        q0 = 10.0
    return BeamProblem(bc, cracks, LoadCase(q0=q0, point_loads=loads))


class TestLoadIntegral:
    def test_uniform_fourth(self):
        load = LoadCase.uniform(50.0)
        assert load_integral(load, 0.5, 4) == pytest.approx(50 * 0.5**4 / 24, abs=1e-15)

    def test_point_fourth(self):
        load = LoadCase.point(1.0, 0.5)
        assert load_integral(load, 1.0, 4) == pytest.approx(0.5**3 / 6, abs=1e-15)

    def test_heaviside_inactive(self):
        load = LoadCase.point(1.0, 0.5)
        assert load_integral(load, 0.4, 2) == 0.0

    def test_heaviside_active_at_load_point(self):
        # step convention: the load contributes from its own abscissa on
        load = LoadCase.point(2.0, 0.5)
        assert load_integral(load, 0.5, 2) == 0.0  # ramp value is zero there
        assert load_integral(load, 0.6, 2) == pytest.approx(2.0 * 0.1, abs=1e-15)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            load_integral(LoadCase.uniform(1.0), 0.5, 1)
        with pytest.raises(ValueError):
            load_integral(LoadCase.uniform(1.0), 0.5, 5)


class TestBasisFunctions:
    def test_f3_with_crack(self):
        cracks = CrackSet.from_pairs([(0.5, 0.1)])
        value = basis_f(3, 0, 0.75, cracks, LoadCase())
        assert value == pytest.approx(0.75**2 + 2 * 0.1 * 0.25, abs=1e-15)

    def test_f4_second_derivative(self):
        assert basis_f(4, 2, 1.0, CrackSet(), LoadCase()) == 6.0

    def test_f2_first_derivative(self):
        for x in (0.0, 0.3, 1.0):
            assert basis_f(2, 1, x, CrackSet(), LoadCase()) == 1.0

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            basis_f(6, 0, 0.5, CrackSet(), LoadCase())
        with pytest.raises(ValueError):
            basis_f(1, 4, 0.5, CrackSet(), LoadCase())


class TestIntegrationConstants:
    def test_pinned_uniform(self):
        q0 = 50.0
        problem = BeamProblem(PP, CrackSet(), LoadCase.uniform(q0))
        c1, c2, c3, c4 = integration_constants(problem)
        assert c1 == 0.0
        assert c3 == 0.0
        assert c4 == pytest.approx(-q0 / 12, rel=1e-15)
        assert c2 == pytest.approx(q0 / 24, rel=1e-15)

    def test_clamped_end_conditions_hold(self):
        problem = BeamProblem(
            CC, CrackSet.from_pairs([(0.3, 0.05)]), LoadCase(50.0, (PointLoad(2.0, 0.7),))
        )
        c1, c2, _, _ = integration_constants(problem)
        assert c1 == 0.0 and c2 == 0.0
        assert deflection(problem, 1.0) == pytest.approx(0.0, abs=1e-12)
        assert slope(problem, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_cantilever_tip(self):
        q0 = 50.0
        problem = BeamProblem(CL, CrackSet(), LoadCase.uniform(q0))
        assert deflection(problem, 1.0) == pytest.approx(q0 / 8, rel=1e-13)


class TestDeflection:
    def test_single_crack_reference_values(self):
        problem = pinned_single_crack()
        assert deflection(problem, 0.1) == pytest.approx(0.221175, abs=5e-7)
        assert deflection(problem, 0.9) == pytest.approx(0.229575, abs=5e-7)

    def test_undamaged_pinned_midspan(self):
        problem = BeamProblem(PP, CrackSet(), LoadCase.uniform(50.0))
        assert deflection(problem, 0.5) == pytest.approx(5 * 50 / 384, rel=1e-13)

    def test_point_load_reference_values(self):
        problem = BeamProblem(
            PP,
            CrackSet.from_pairs([(0.57143, 0.086785)]),
            LoadCase.point(0.00175, 0.7143),
        )
        # published values are rounded to their last printed digit
        assert deflection(problem, 0.14286) == pytest.approx(1.22e-5, abs=5e-8)
        assert deflection(problem, 0.85714) == pytest.approx(1.6e-5, abs=5e-7)
        assert deflection(problem, 0.5) == pytest.approx(3.316e-5, abs=5e-9)

    def test_profile_matches_pointwise(self):
        problem = pinned_single_crack()
        xs = [0.0, 0.1, 0.37, 0.6, 0.88, 1.0]
        profile = deflection_profile(problem, xs)
        for x, u in zip(xs, profile):
            assert u == deflection(problem, x)

    def test_rejects_outside_span(self):
        with pytest.raises(ValueError):
            deflection(pinned_single_crack(), 1.2)


class TestRotationJump:
    def test_zero_flexibility(self):
        problem = BeamProblem(
            PP, CrackSet.from_pairs([(0.5, 0.0)]), LoadCase.uniform(10.0)
        )
        assert rotation_jump(problem, 0) == 0.0

    def test_reference_value(self):
        # by hand: curvature at the crack is 6*c4*0.6 + q''(0.6) = -15 + 9 = -6
        problem = pinned_single_crack()
        assert rotation_jump(problem, 0) == pytest.approx(0.07 * -6.0, rel=1e-13)

    def test_matches_finite_difference_probe(self):
        problem = pinned_single_crack()
        x = 0.6
        h = 1e-6
        right = (-3 * deflection(problem, x) + 4 * deflection(problem, x + h)
                 - deflection(problem, x + 2 * h)) / (2 * h)
        left = (3 * deflection(problem, x) - 4 * deflection(problem, x - h)
                + deflection(problem, x - 2 * h)) / (2 * h)
        assert right - left == pytest.approx(rotation_jump(problem, 0), rel=1e-9)


class TestInvariants:
    def test_boundary_residuals(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            problem = random_problem(rng)
            if problem.bc is PP:
                checks = [deflection(problem, 0.0), curvature(problem, 0.0),
                          deflection(problem, 1.0), curvature(problem, 1.0)]
            elif problem.bc is CC:
                checks = [deflection(problem, 0.0), slope(problem, 0.0),
                          deflection(problem, 1.0), slope(problem, 1.0)]
            else:
                checks = [deflection(problem, 0.0), slope(problem, 0.0),
                          curvature(problem, 1.0)]
            scale = max(1.0, abs(deflection(problem, 0.5)))
            for value in checks:
                assert abs(value) <= 1e-12 * max(1.0, scale)

    def test_zero_flexibility_equals_no_cracks(self):
        load = LoadCase(30.0, (PointLoad(2.0, 0.4),))
        dead = CrackSet.from_pairs([(0.3, 0.0), (0.7, 0.0)])
        for bc in (PP, CC, CL):
            with_dead = BeamProblem(bc, dead, load)
            without = BeamProblem(bc, CrackSet(), load)
            for x in np.linspace(0, 1, 21):
                assert abs(deflection(with_dead, x) - deflection(without, x)) <= 1e-14

    def test_continuity_at_cracks(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            problem = random_problem(rng)
            for crack in problem.cracks:
                below = deflection(problem, crack.position - 1e-9)
                above = deflection(problem, crack.position + 1e-9)
                assert abs(above - below) <= 1e-7 * max(1.0, abs(above)) + 1e-12

    def test_slope_jump_matches_rotation_jump(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            problem = random_problem(rng)
            for i, crack in enumerate(problem.cracks):
                if crack.flexibility < 0.01:
                    continue
                x, h = crack.position, 1e-6
                right = (-3 * deflection(problem, x) + 4 * deflection(problem, x + h)
                         - deflection(problem, x + 2 * h)) / (2 * h)
                left = (3 * deflection(problem, x) - 4 * deflection(problem, x - h)
                        + deflection(problem, x - 2 * h)) / (2 * h)
                expected = rotation_jump(problem, i)
                assert right - left == pytest.approx(expected, rel=1e-6, abs=1e-9)

    def test_linearity_in_load(self):
        problem = pinned_single_crack()
        scaled = BeamProblem(problem.bc, problem.cracks, problem.load.scaled(3.5))
        for x in (0.2, 0.45, 0.8):
            assert deflection(scaled, x) == pytest.approx(
                3.5 * deflection(problem, x), rel=1e-12
            )

    def test_fourth_difference_recovers_load(self):
        q0 = 50.0
        problem = BeamProblem(
            PP, CrackSet.from_pairs([(0.6, 0.07)]), LoadCase.uniform(q0)
        )
        h = 1e-3
        for x in (0.2, 0.4, 0.8):
            stencil = (
                deflection(problem, x - 2 * h)
                - 4 * deflection(problem, x - h)
                + 6 * deflection(problem, x)
                - 4 * deflection(problem, x + h)
                + deflection(problem, x + 2 * h)
            ) / h**4
            assert stencil == pytest.approx(q0, rel=1e-4)


class TestValidation:
    def test_crack_position_bounds(self):
        with pytest.raises(ValueError):
            Crack(0.0, 0.1)
        with pytest.raises(ValueError):
            Crack(1.0, 0.1)

    def test_negative_flexibility(self):
        with pytest.raises(ValueError):
            Crack(0.5, -0.01)

    def test_positions_strictly_increasing(self):
        with pytest.raises(ValueError):
            CrackSet((Crack(0.5, 0.1), Crack(0.5, 0.2)))

    def test_from_pairs_sorts(self):
        cracks = CrackSet.from_pairs([(0.7, 0.01), (0.2, 0.02)])
        assert cracks.positions() == (0.2, 0.7)
