"""Mesh encoding, objective, crack-count penalty and fitness."""

import itertools
import math

import numpy as np
import pytest

from crackid.beam import BoundaryCondition, CrackSet, LoadCase
from crackid.inverse import (
    Chromosome,
    MeasurementSet,
    Mesh,
    Scenario,
    cost_h,
    decode,
    encode,
    fitness,
    fitness_batch,
    identifiable_cracks,
    objective,
)

PP = BoundaryCondition.PINNED_PINNED


def single_crack_scenario():
    mesh = Mesh.uniform(19, 0.1, 10)
    truth = CrackSet.from_pairs([(0.6, 0.07)])
    scenario = Scenario.simulated(PP, LoadCase.uniform(50.0), mesh, [0.1, 0.9], truth)
    return scenario, truth


class TestMesh:
    def test_uniform_nodes(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        assert mesh.nodes[11] == pytest.approx(0.6, abs=1e-15)
        assert mesh.size == 19
        assert mesh.delta_lambda == pytest.approx(0.01, abs=1e-18)
        assert mesh.spacing == pytest.approx(0.05)

    def test_chromosome_space_size(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        assert mesh.chromosome_space_size() == 11**19
        assert float(mesh.chromosome_space_size()) == pytest.approx(
            6.115909044841455e19, rel=1e-15
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            Mesh((0.2, 0.2), 0.1, 10)
        with pytest.raises(ValueError):
            Mesh((0.5,), 0.0, 10)
        with pytest.raises(ValueError):
            Mesh((0.5,), 0.1, 0)


class TestDecodeEncode:
    def test_decode_reference_gene(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        genes = [0] * 19
        genes[11] = 7
        cracks = decode(Chromosome(tuple(genes)), mesh)
        assert len(cracks) == 1
        assert cracks[0].position == pytest.approx(0.6)
        assert cracks[0].flexibility == pytest.approx(0.07)

    def test_decode_all_zero(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        assert len(decode(Chromosome((0,) * 19), mesh)) == 0

    def test_decode_two_cracks_fine_mesh(self):
        mesh = Mesh.uniform(99, 0.1, 10)
        genes = [0] * 99
        genes[19] = 2   # node 20 sits at 0.20
        genes[39] = 4   # node 40 sits at 0.40
        cracks = decode(Chromosome(tuple(genes)), mesh)
        assert [(c.position, c.flexibility) for c in cracks] == [
            (pytest.approx(0.2), pytest.approx(0.02)),
            (pytest.approx(0.4), pytest.approx(0.04)),
        ]

    def test_encode_reference(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        chrom = encode(CrackSet.from_pairs([(0.6, 0.07)]), mesh)
        assert chrom.genes[11] == 7
        assert chrom.sigma() == 1

    def test_encode_truncates(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        chrom = encode(CrackSet.from_pairs([(0.57143, 0.086785)]), mesh)
        # 0.086785 / 0.01 = 8.6785 truncates to 8
        assert max(chrom.genes) == 8

    def test_encode_empty(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        assert encode(CrackSet(), mesh).genes == (0,) * 19

    def test_encode_rejects_excess_intensity(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        with pytest.raises(ValueError):
            encode(CrackSet.from_pairs([(0.5, 0.2)]), mesh)

    def test_encode_rejects_collision(self):
        mesh = Mesh.uniform(9, 0.1, 10)
        with pytest.raises(ValueError):
            encode(CrackSet.from_pairs([(0.49, 0.05), (0.51, 0.05)]), mesh)

    def test_roundtrip_on_grid(self):
        mesh = Mesh.uniform(19, 0.1, 10)
        rng = np.random.default_rng(3)
        for _ in range(50):
            genes = np.zeros(19, dtype=int)
            for node in rng.choice(19, size=rng.integers(1, 4), replace=False):
                genes[node] = rng.integers(1, 11)
            chrom = Chromosome(tuple(int(g) for g in genes))
            assert encode(decode(chrom, mesh), mesh) == chrom


class TestIdentifiableCracks:
    def test_values(self):
        assert identifiable_cracks(2) == 1
        assert identifiable_cracks(4) == 2
        assert identifiable_cracks(5) == 2

    def test_rejects_too_few(self):
        with pytest.raises(ValueError):
            identifiable_cracks(1)


class TestCostH:
    # Below the identifiable count the penalty must stay strictly
    # decreasing as cracks are removed, including the last step onto the
    # count itself; a flat zero there lets "true cracks plus a
    # barely-visible extra" outrank the true set.
    def test_over(self):
        assert cost_h(3, 2) == 1.0
        assert cost_h(5, 2) == 3.0

    def test_at_count(self):
        assert cost_h(2, 2) == pytest.approx(0.01)

    def test_under(self):
        assert cost_h(1, 2) == pytest.approx(0.005)
        assert cost_h(0, 2) == pytest.approx(0.01 / 3)

    def test_monotone_below_count(self):
        values = [cost_h(s, 4) for s in range(5)]
        assert values == sorted(values)

    def test_unit_increments_above(self):
        for s in range(4, 8):
            assert cost_h(s + 1, 3) - cost_h(s, 3) == pytest.approx(1.0)


class TestObjective:
    def test_zero_at_generating_chromosome(self):
        scenario, truth = single_crack_scenario()
        chrom = encode(truth, scenario.mesh)
        assert objective(chrom, scenario) == pytest.approx(0.0, abs=1e-13)

    def test_positive_for_wrong_chromosome(self):
        scenario, _ = single_crack_scenario()
        assert objective(Chromosome((0,) * 19), scenario) > 0.01

    def test_zero_chromosome_value_from_first_principles(self):
        # undamaged pinned-pinned deflection is q0*(x^4 - 2x^3 + x)/24
        scenario, _ = single_crack_scenario()
        q0 = 50.0
        u_h = [q0 * (x**4 - 2 * x**3 + x) / 24 for x in (0.1, 0.9)]
        u_e = scenario.measurements.values()
        expected = math.sqrt(sum(((h - e) / h) ** 2 for h, e in zip(u_h, u_e)))
        value = objective(Chromosome((0,) * 19), scenario)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_batch_matches_scalar(self):
        scenario, _ = single_crack_scenario()
        rng = np.random.default_rng(17)
        pop = rng.integers(0, 11, size=(40, 19))
        batch = scenario.objective_batch(pop)
        for row, expected in zip(pop, batch):
            value = objective(Chromosome(tuple(int(g) for g in row)), scenario)
            assert value == pytest.approx(expected, rel=1e-11, abs=1e-13)

    def test_batch_matches_scalar_other_supports(self):
        rng = np.random.default_rng(19)
        mesh = Mesh.uniform(30, 0.1, 10)
        for bc in (BoundaryCondition.CLAMPED_CLAMPED, BoundaryCondition.CANTILEVER):
            scenario = Scenario.simulated(
                bc, LoadCase(20.0, ()), mesh, [0.21, 0.52, 0.83],
                CrackSet.from_pairs([(0.4, 0.05)]),
            )
            pop = rng.integers(0, 11, size=(25, 30))
            batch = scenario.objective_batch(pop)
            for row, expected in zip(pop, batch):
                value = objective(Chromosome(tuple(int(g) for g in row)), scenario)
                assert value == pytest.approx(expected, rel=1e-11, abs=1e-13)


class TestFitness:
    def test_generating_chromosome(self):
        scenario, truth = single_crack_scenario()
        chrom = encode(truth, scenario.mesh)
        # misfit zero; the parsimony term at the identifiable count is 0.01
        assert fitness(chrom, scenario) == pytest.approx(150.0 - 0.01, abs=1e-12)

    def test_penalty_composition(self):
        scenario, _ = single_crack_scenario()
        chrom = Chromosome((0,) * 19)
        expected = 150.0 - objective(chrom, scenario) - 0.005
        assert fitness(chrom, scenario) == pytest.approx(expected, abs=1e-12)

    def test_batch_matches_scalar(self):
        scenario, _ = single_crack_scenario()
        rng = np.random.default_rng(23)
        pop = rng.integers(0, 11, size=(30, 19))
        batch = fitness_batch(pop, scenario, 150.0)
        for row, expected in zip(pop, batch):
            value = fitness(Chromosome(tuple(int(g) for g in row)), scenario)
            assert value == pytest.approx(expected, rel=1e-11)

    def test_generating_chromosome_is_global_max_tiny_mesh(self):
        # exhaustive check over every chromosome of a small mesh
        mesh = Mesh.uniform(5, 0.09, 3)
        truth = CrackSet.from_pairs([(mesh.nodes[1], 0.06), (mesh.nodes[3], 0.03)])
        scenario = Scenario.simulated(
            PP, LoadCase.uniform(40.0), mesh, [0.22, 0.41, 0.62, 0.81], truth
        )
        assert scenario.n_c == 2
        space = np.array(list(itertools.product(range(4), repeat=5)))
        fits = fitness_batch(space, scenario, 150.0)
        best = space[int(np.argmax(fits))]
        expected = np.asarray(encode(truth, mesh).genes)
        assert (best == expected).all()


class TestMeasurementSet:
    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            MeasurementSet.from_pairs([(0.5, 1.0)])

    def test_distinct_positions(self):
        with pytest.raises(ValueError):
            MeasurementSet.from_pairs([(0.5, 1.0), (0.5, 2.0)])

    def test_interior_positions(self):
        with pytest.raises(ValueError):
            MeasurementSet.from_pairs([(0.0, 1.0), (0.5, 2.0)])


class TestScenario:
    def test_rejects_vanishing_normalisation(self):
        mesh = Mesh.uniform(9, 0.1, 10)
        # cantilever: undamaged deflection at the clamp is zero
        with pytest.raises(ValueError):
            Scenario.simulated(
                BoundaryCondition.CANTILEVER, LoadCase.uniform(50.0), mesh,
                [1e-9, 0.5], CrackSet(),
            )

    def test_undamaged_cache(self):
        scenario, _ = single_crack_scenario()
        q0 = 50.0
        for x, cached in zip((0.1, 0.9), scenario.undamaged):
            assert cached == pytest.approx(q0 * (x**4 - 2 * x**3 + x) / 24, rel=1e-13)

    def test_with_mesh_keeps_measurements(self):
        scenario, _ = single_crack_scenario()
        finer = Mesh.uniform(39, 0.1, 20)
        other = scenario.with_mesh(finer)
        assert other.measurements is scenario.measurements
        assert other.mesh.size == 39
        assert other.undamaged == scenario.undamaged
