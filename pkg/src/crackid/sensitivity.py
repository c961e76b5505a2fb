"""Measurement layouts, instrumental noise and identification error metrics.

Covers the experiment machinery around the identification core: placing
sensor pairs so each sought crack falls between two of them, corrupting
clean simulated measurements with an additive uniform error of bounded
amplitude, scoring identified parameters against ground truth, and the two
sweep experiments (moving one measurement point; growing the noise
amplitude and watching the identification degrade).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .beam import BoundaryCondition, CrackSet, LoadCase
from .ga import GaParams, run_events
from .inverse import Measurement, MeasurementSet, Mesh, Scenario
from .remesh import RemeshPolicy, iterate_identify
from .seeding import derive_rng, derive_seed

__all__ = [
    "NoiseModel",
    "SweepPoint",
    "SensitivityPoint",
    "placement",
    "corrupt",
    "error_eta",
    "err_pct",
    "sweep_measurement_position",
    "sensitivity_curve",
]


@dataclass(frozen=True)
class NoiseModel:
    """Additive instrumental error: amplitude and Monte Carlo repetitions."""

    epsilon: float
    realizations: int = 5

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise ValueError("noise amplitude must be nonnegative")
        if self.realizations < 1:
            raise ValueError("at least one realization is required")


def placement(n: int) -> list[float]:
    """2n sensor positions such that crack i of n equally spaced cracks
    falls strictly between positions 2i-1 and 2i."""
    if n < 1:
        raise ValueError("at least one crack is required")
    out = []
    for i in range(1, n + 1):
        out.append((i - 1.0 / 3.0) / (n + 1))
        out.append((i + 1.0 / 3.0) / (n + 1))
    return out


def corrupt(
    clean: MeasurementSet, noise: NoiseModel, rng: np.random.Generator
) -> MeasurementSet:
    """Perturb each measured value independently by epsilon times U[-1, 1)."""
    draws = rng.uniform(-1.0, 1.0, size=len(clean))
    return MeasurementSet(
        tuple(
            Measurement(m.position, m.value + noise.epsilon * float(r))
            for m, r in zip(clean, draws)
        )
    )


def error_eta(
    identified_means: tuple[float, float], real: tuple[float, float]
) -> tuple[float, float]:
    """Relative errors of the mean identified position and intensity."""
    mu_pos, mu_lam = identified_means
    real_pos, real_lam = real
    if real_pos <= 0.0 or real_lam <= 0.0:
        raise ValueError("reference position and intensity must be positive")
    return abs(mu_pos - real_pos) / real_pos, abs(mu_lam - real_lam) / real_lam


def err_pct(
    identified: tuple[float, float],
    real: tuple[float, float],
    lambda_max: float,
) -> tuple[float, float]:
    """Percentage errors: absolute for position, relative to the representable
    intensity range for intensity."""
    if lambda_max <= 0.0:
        raise ValueError("lambda_max must be positive")
    pos_err = 100.0 * abs(identified[0] - real[0])
    lam_err = 100.0 * abs(identified[1] - real[1]) / lambda_max
    return pos_err, lam_err


@dataclass(frozen=True)
class SweepPoint:
    """Identification statistics for one position of the moving sensor."""

    varying_position: float
    mean_position: float
    std_position: float
    mean_intensity: float
    std_intensity: float
    matched_events: int


def sweep_measurement_position(
    bc: BoundaryCondition,
    load: LoadCase,
    mesh: Mesh,
    true_cracks: CrackSet,
    fixed_position: float,
    varying_positions,
    params: GaParams,
    events_per_point: int = 10,
    jobs: int = 1,
) -> list[SweepPoint]:
    """Identify with one sensor fixed while the other moves.

    For each varying position the clean measurements are regenerated from
    the forward solver and ``events_per_point`` independent GA events run;
    the returned statistics are aligned to the true cracks.
    """
    out = []
    for index, position in enumerate(varying_positions):
        positions = sorted((fixed_position, position))
        scenario = Scenario.simulated(bc, load, mesh, positions, true_cracks)
        point_params = replace(
            params, events=events_per_point, seed=derive_seed(params.seed, index)
        )
        stats = run_events(scenario, point_params, reference=true_cracks, jobs=jobs)
        cs = stats.crack_stats[0]
        out.append(
            SweepPoint(
                varying_position=position,
                mean_position=cs.mean_position,
                std_position=cs.std_position,
                mean_intensity=cs.mean_intensity,
                std_intensity=cs.std_intensity,
                matched_events=cs.matched_events,
            )
        )
    return out


@dataclass(frozen=True)
class SensitivityPoint:
    """Identification error at one noise amplitude."""

    epsilon: float
    eta_position: float
    eta_intensity: float
    mean_position: float
    mean_intensity: float


def sensitivity_curve(
    bc: BoundaryCondition,
    load: LoadCase,
    mesh: Mesh,
    positions,
    true_cracks: CrackSet,
    epsilons,
    noise_realizations: int,
    params: GaParams,
    policy: RemeshPolicy,
    jobs: int = 1,
) -> list[SensitivityPoint]:
    """Identification error versus noise amplitude for a single-crack case.

    For each amplitude the clean simulated measurements are corrupted
    ``noise_realizations`` times on independent streams; each corrupted set
    goes through the full refinement pipeline, and the relative errors are
    computed from the means of the per-realization identified parameters.
    """
    if len(true_cracks) != 1:
        raise ValueError("the sensitivity sweep handles exactly one true crack")
    real = (true_cracks[0].position, true_cracks[0].flexibility)

    clean_scenario = Scenario.simulated(bc, load, mesh, positions, true_cracks)
    clean = clean_scenario.measurements

    out = []
    for ei, epsilon in enumerate(epsilons):
        identified: list[tuple[float, float]] = []
        for r in range(noise_realizations):
            noisy = corrupt(
                clean, NoiseModel(float(epsilon), 1), derive_rng(params.seed, ei, r)
            )
            scenario = Scenario(bc, load, mesh, noisy)
            run_params = replace(params, seed=derive_seed(params.seed, ei, r, 1))
            trace = iterate_identify(scenario, policy, run_params, jobs=jobs)
            final = trace[-1].cracks
            if final:
                identified.append(final[0])
        if not identified:
            out.append(
                SensitivityPoint(float(epsilon), np.nan, np.nan, np.nan, np.nan)
            )
            continue
        mu_pos = float(np.mean([c[0] for c in identified]))
        mu_lam = float(np.mean([c[1] for c in identified]))
        eta_pos, eta_lam = error_eta((mu_pos, mu_lam), real)
        out.append(SensitivityPoint(float(epsilon), eta_pos, eta_lam, mu_pos, mu_lam))
    return out
