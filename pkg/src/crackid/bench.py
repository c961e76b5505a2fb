"""Built-in benchmark scenarios reproducing the published tables and figures.

Each benchmark target regenerates one table or figure of the study this
package reimplements, entirely from the library's own forward solver and
identification pipeline, and grades the outcome against the published
reference values at the acceptance tolerances. Targets return
:class:`BenchResult` (CSV-ready rows plus an overall pass flag); the CLI
writes them to disk and exits nonzero when a benchmark fails.

Each target carries a pinned default seed so benchmark runs are
reproducible; passing an explicit seed overrides it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .beam import BoundaryCondition, CrackSet, LoadCase
from .ga import GaParams, RunStatistics, run_events
from .inverse import Mesh, Scenario, decode, encode
from .remesh import RemeshPolicy, iterate_identify
from .sensitivity import (
    placement,
    sensitivity_curve,
    sweep_measurement_position,
)

__all__ = ["BenchResult", "BENCH_TARGETS", "run_bench", "bench_targets"]

QUANT_POS = 0.01   # node spacing of the 99-node mesh
QUANT_LAM = 0.01   # intensity step at g_max = 10


@dataclass
class BenchResult:
    target: str
    header: list[str]
    rows: list[list]
    passed: bool
    details: dict

    def failures(self) -> list[list]:
        flag = self.header.index("pass")
        return [r for r in self.rows if r[flag] is False]


def _mesh99() -> Mesh:
    return Mesh.uniform(99, 0.1, 10)


def _uniform_positions(count: int) -> list[float]:
    return [k / (count + 1) for k in range(1, count + 1)]


def _best_cracks(stats: RunStatistics, mesh: Mesh) -> list[tuple[float, float]]:
    cracks = decode(stats.best_event.best_chromosome, mesh)
    return [(c.position, c.flexibility) for c in cracks]


def _match(identified, truth, tol_pos, tol_lam):
    """Slot-by-slot comparison; crack counts must agree."""
    if len(identified) != len(truth):
        return False
    return all(
        abs(identified[k][0] - truth[k].position) <= tol_pos + 1e-12
        and abs(identified[k][1] - truth[k].flexibility) <= tol_lam + 1e-12
        for k in range(len(truth))
    )


# -- single-crack reference case (two measurements, 19-node mesh) -----------

SINGLE_CRACK_SEED = 3


def single_crack_scenario() -> tuple[Scenario, CrackSet]:
    """Pinned-pinned beam under uniform load with one mid-severity crack.

    The canonical validation case: crack at 0.6 with intensity 0.07,
    sensed at 0.1 and 0.9 under a uniform load of 50.
    """
    truth = CrackSet.from_pairs([(0.6, 0.07)])
    mesh = Mesh.uniform(19, 0.1, 10)
    scenario = Scenario.simulated(
        BoundaryCondition.PINNED_PINNED, LoadCase.uniform(50.0), mesh, [0.1, 0.9], truth
    )
    return scenario, truth


def run_single_crack(seed: int | None = None, events: int = 100, jobs: int = 1):
    scenario, truth = single_crack_scenario()
    params = GaParams(seed=SINGLE_CRACK_SEED if seed is None else seed, events=events)
    stats = run_events(scenario, params, reference=truth, jobs=jobs)
    return stats, scenario, truth


# -- table 3: two cracks on a cantilever ------------------------------------

TABLE3_SEED = 42


def table3_config() -> tuple[Scenario, CrackSet]:
    truth = CrackSet.from_pairs([(0.2, 0.02), (0.4, 0.04)])
    scenario = Scenario.simulated(
        BoundaryCondition.CANTILEVER,
        LoadCase.uniform(50.0),
        _mesh99(),
        [0.25, 0.35, 0.65, 0.95],
        truth,
    )
    return scenario, truth


def run_table3(seed: int | None = None, events: int = 100, jobs: int = 1) -> BenchResult:
    scenario, truth = table3_config()
    params = GaParams(seed=TABLE3_SEED if seed is None else seed, events=events)
    stats = run_events(scenario, params, reference=truth, jobs=jobs)
    identified = _best_cracks(stats, scenario.mesh)
    exact = stats.best_event.best_chromosome == encode(truth, scenario.mesh)
    rows = []
    for k, crack in enumerate(truth):
        ident = identified[k] if k < len(identified) else (math.nan, math.nan)
        ok = (
            len(identified) == len(truth)
            and abs(ident[0] - crack.position) <= 1e-12
            and abs(ident[1] - crack.flexibility) <= 1e-12
        )
        rows.append(
            [k + 1, crack.position, crack.flexibility, ident[0], ident[1], ok]
        )
    return BenchResult(
        target="table3",
        header=["crack", "real_position", "real_intensity",
                "identified_position", "identified_intensity", "pass"],
        rows=rows,
        passed=exact,
        details={"stats": stats, "scenario": scenario, "truth": truth},
    )


# -- table 4 / figure 10: one to five equally spaced cracks -----------------

TABLE4_SEED = 42

#: Published identified values (informational columns in the CSV).
TABLE4_PUBLISHED = {
    1: [(0.5, 0.05)],
    2: [(0.33, 0.05), (0.67, 0.05)],
    3: [(0.21, 0.05), (0.5, 0.06), (0.77, 0.05)],
    4: [(0.17, 0.05), (0.41, 0.05), (0.61, 0.06)],
    5: [(0.19, 0.05), (0.39, 0.06), (0.54, 0.05), (0.70, 0.06), (0.86, 0.03)],
}


def table4_config(n: int) -> tuple[Scenario, CrackSet]:
    """``n`` equally spaced cracks of intensity 0.05, grid-aligned."""
    truth = CrackSet.from_pairs(
        [(round(i / (n + 1), 2), 0.05) for i in range(1, n + 1)]
    )
    scenario = Scenario.simulated(
        BoundaryCondition.PINNED_PINNED,
        LoadCase.uniform(50.0),
        _mesh99(),
        placement(n),
        truth,
    )
    return scenario, truth


def run_table4(
    seed: int | None = None, events: int = 100, jobs: int = 1, counts=(1, 2, 3, 4, 5)
) -> BenchResult:
    rows = []
    all_ok = True
    runs = {}
    for n in counts:
        scenario, truth = table4_config(n)
        params = GaParams(seed=TABLE4_SEED + n if seed is None else seed + n, events=events)
        stats = run_events(scenario, params, reference=truth, jobs=jobs)
        runs[n] = (stats, scenario, truth)
        identified = _best_cracks(stats, scenario.mesh)
        tol_pos, tol_lam = (0.0, 0.0) if n <= 2 else (0.05, 0.02)
        count_ok = len(identified) == n
        published = TABLE4_PUBLISHED[n]
        for k, crack in enumerate(truth):
            ident = identified[k] if k < len(identified) else (math.nan, math.nan)
            err_pos = 100.0 * abs(ident[0] - crack.position)
            err_lam = 100.0 * abs(ident[1] - crack.flexibility) / scenario.mesh.lambda_max
            ok = (
                count_ok
                and err_pos <= 100.0 * tol_pos + 1e-9
                and abs(ident[1] - crack.flexibility) <= tol_lam + 1e-12
            )
            all_ok = all_ok and ok
            pub = published[k] if k < len(published) else (math.nan, math.nan)
            rows.append(
                [n, k + 1, crack.position, crack.flexibility,
                 ident[0], ident[1], err_pos, err_lam, pub[0], pub[1], ok]
            )
    return BenchResult(
        target="table4",
        header=["cracks", "crack", "real_position", "real_intensity",
                "identified_position", "identified_intensity",
                "err_position_pct", "err_intensity_pct",
                "published_position", "published_intensity", "pass"],
        rows=rows,
        passed=all_ok,
        details={"runs": runs},
    )


def run_figure10(seed: int | None = None, events: int = 100, jobs: int = 1) -> BenchResult:
    """Per-crack identification errors for the one-to-five-crack scenarios."""
    table = run_table4(seed=seed, events=events, jobs=jobs)
    rows = [
        [r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[10]] for r in table.rows
    ]
    return BenchResult(
        target="figure10",
        header=["cracks", "crack", "real_position", "real_intensity",
                "identified_position", "identified_intensity",
                "err_position_pct", "err_intensity_pct", "pass"],
        rows=rows,
        passed=table.passed,
        details=table.details,
    )


# -- tables 5 and 6: fewer cracks than identifiable -------------------------

TABLE5_SEED = 42
TABLE6_SEED = 42


def table5_configs() -> list[tuple[str, Scenario, CrackSet]]:
    mesh = _mesh99()
    out = []
    truth_a = CrackSet.from_pairs([(0.8, 0.08)])
    out.append((
        "n_c=2",
        Scenario.simulated(
            BoundaryCondition.PINNED_PINNED, LoadCase.uniform(50.0), mesh,
            _uniform_positions(4), truth_a,
        ),
        truth_a,
    ))
    truth_b = CrackSet.from_pairs([(0.71, 0.03)])
    out.append((
        "n_c=3",
        Scenario.simulated(
            BoundaryCondition.PINNED_PINNED, LoadCase.uniform(50.0), mesh,
            _uniform_positions(6), truth_b,
        ),
        truth_b,
    ))
    return out


def run_table5(seed: int | None = None, events: int = 100, jobs: int = 1) -> BenchResult:
    rows = []
    all_ok = True
    runs = {}
    for i, (case, scenario, truth) in enumerate(table5_configs()):
        params = GaParams(seed=TABLE5_SEED + i if seed is None else seed + i, events=events)
        stats = run_events(scenario, params, reference=truth, jobs=jobs)
        runs[case] = (stats, scenario, truth)
        identified = _best_cracks(stats, scenario.mesh)
        ok = _match(identified, truth, 0.0, 0.0)
        all_ok = all_ok and ok
        ident = identified[0] if identified else (math.nan, math.nan)
        rows.append(
            [case, truth[0].position, truth[0].flexibility, ident[0], ident[1], ok]
        )
    return BenchResult(
        target="table5",
        header=["case", "real_position", "real_intensity",
                "identified_position", "identified_intensity", "pass"],
        rows=rows,
        passed=all_ok,
        details={"runs": runs},
    )


def table6_configs() -> list[tuple[str, Scenario, CrackSet]]:
    mesh = _mesh99()
    out = []
    truth_a = CrackSet.from_pairs([(0.35, 0.05), (0.8, 0.05)])
    out.append((
        "n_c=3",
        Scenario.simulated(
            BoundaryCondition.PINNED_PINNED, LoadCase.uniform(50.0), mesh,
            _uniform_positions(6), truth_a,
        ),
        truth_a,
    ))
    truth_b = CrackSet.from_pairs([(0.25, 0.05), (0.5, 0.05)])
    out.append((
        "n_c=4",
        Scenario.simulated(
            BoundaryCondition.PINNED_PINNED, LoadCase.uniform(50.0), mesh,
            _uniform_positions(8), truth_b,
        ),
        truth_b,
    ))
    return out


def run_table6(seed: int | None = None, events: int = 100, jobs: int = 1) -> BenchResult:
    """First crack must be exact; the second within one node, intensity exact."""
    rows = []
    all_ok = True
    runs = {}
    for i, (case, scenario, truth) in enumerate(table6_configs()):
        params = GaParams(seed=TABLE6_SEED + 10 + i if seed is None else seed + i, events=events)
        stats = run_events(scenario, params, reference=truth, jobs=jobs)
        runs[case] = (stats, scenario, truth)
        identified = _best_cracks(stats, scenario.mesh)
        if len(identified) == 2:
            first_ok = (
                abs(identified[0][0] - truth[0].position) <= 1e-12
                and abs(identified[0][1] - truth[0].flexibility) <= 1e-12
            )
            second_ok = (
                abs(identified[1][0] - truth[1].position) <= QUANT_POS + 1e-12
                and abs(identified[1][1] - truth[1].flexibility) <= 1e-12
            )
        else:
            first_ok = second_ok = False
        all_ok = all_ok and first_ok and second_ok
        for k, crack in enumerate(truth):
            ident = identified[k] if k < len(identified) else (math.nan, math.nan)
            ok = first_ok if k == 0 else second_ok
            rows.append(
                [case, k + 1, crack.position, crack.flexibility, ident[0], ident[1], ok]
            )
    return BenchResult(
        target="table6",
        header=["case", "crack", "real_position", "real_intensity",
                "identified_position", "identified_intensity", "pass"],
        rows=rows,
        passed=all_ok,
        details={"runs": runs},
    )


# -- table 7: three cracks, four identifiable, clamped-clamped --------------

TABLE7_SEED = 42
TABLE7_PUBLISHED = [(0.26, 0.03), (0.5, 0.05), (0.76, 0.04)]


def table7_config() -> tuple[Scenario, CrackSet]:
    truth = CrackSet.from_pairs([(0.25, 0.05), (0.5, 0.05), (0.75, 0.05)])
    scenario = Scenario.simulated(
        BoundaryCondition.CLAMPED_CLAMPED,
        LoadCase.point(1.0, 0.4),
        _mesh99(),
        _uniform_positions(8),
        truth,
    )
    return scenario, truth


def run_table7(seed: int | None = None, events: int = 100, jobs: int = 1) -> BenchResult:
    scenario, truth = table7_config()
    params = GaParams(seed=TABLE7_SEED if seed is None else seed, events=events)
    stats = run_events(scenario, params, reference=truth, jobs=jobs)
    identified = _best_cracks(stats, scenario.mesh)
    count_ok = len(identified) == len(truth)
    rows = []
    all_ok = count_ok
    for k, crack in enumerate(truth):
        ident = identified[k] if k < len(identified) else (math.nan, math.nan)
        pub = TABLE7_PUBLISHED[k]
        ok = (
            count_ok
            and abs(ident[0] - crack.position) <= 0.02 + 1e-12
            and abs(ident[1] - crack.flexibility) <= 2 * QUANT_LAM + 1e-12
        )
        all_ok = all_ok and ok
        rows.append(
            [k + 1, crack.position, crack.flexibility,
             ident[0], ident[1], pub[0], pub[1], ok]
        )
    return BenchResult(
        target="table7",
        header=["crack", "real_position", "real_intensity",
                "identified_position", "identified_intensity",
                "published_position", "published_intensity", "pass"],
        rows=rows,
        passed=all_ok,
        details={"stats": stats, "scenario": scenario, "truth": truth},
    )


# -- figure 5: influence of the moving measurement point --------------------

FIGURE5_SEED = 42


def figure5_cases():
    mesh = _mesh99()
    load = LoadCase.uniform(50.0)
    return [
        ("crack_at_0.33", CrackSet.from_pairs([(0.33, 0.07)]), 0.1,
         [round(0.2 + 0.1 * i, 1) for i in range(8)], mesh, load),
        ("crack_at_0.73", CrackSet.from_pairs([(0.73, 0.07)]), 0.9,
         [round(0.1 + 0.1 * i, 1) for i in range(8)], mesh, load),
    ]


def run_figure5(
    seed: int | None = None, events: int = 10, jobs: int = 1
) -> BenchResult:
    rows = []
    all_ok = True
    details = {}
    base_seed = FIGURE5_SEED if seed is None else seed
    for ci, (case, truth, fixed, varying, mesh, load) in enumerate(figure5_cases()):
        params = GaParams(seed=base_seed + ci)
        points = sweep_measurement_position(
            BoundaryCondition.PINNED_PINNED, load, mesh, truth,
            fixed, varying, params, events_per_point=events, jobs=jobs,
        )
        details[case] = points
        crack = truth[0]
        straddle_stds = []
        sameside_stds = []
        for p in points:
            straddling = (
                min(fixed, p.varying_position) < crack.position < max(fixed, p.varying_position)
            )
            mean_err = abs(p.mean_position - crack.position)
            ok = mean_err <= 0.02 + 1e-12 if straddling else True
            all_ok = all_ok and ok
            (straddle_stds if straddling else sameside_stds).append(p.std_position)
            rows.append(
                [case, p.varying_position, straddling, p.mean_position,
                 p.std_position, p.mean_intensity, p.std_intensity, ok]
            )
        if straddle_stds and sameside_stds:
            separation = max(straddle_stds) < max(sameside_stds)
            all_ok = all_ok and separation
    return BenchResult(
        target="figure5",
        header=["case", "varying_position", "straddling", "mean_position",
                "std_position", "mean_intensity", "std_intensity", "pass"],
        rows=rows,
        passed=all_ok,
        details=details,
    )


# -- figure 6: remeshing refinement ------------------------------------------

FIGURE6_SEED = 47

#: Published per-iteration means (position, intensity) for reference.
FIGURE6_PUBLISHED = [(0.550, 0.09), (0.589, 0.085), (0.577, 0.087), (0.572, 0.086)]
FIGURE6_FINAL = (0.572, 0.086)


def figure6_config() -> tuple[Scenario, CrackSet, RemeshPolicy]:
    """Off-grid single crack under a point load, sensed at two stations."""
    truth = CrackSet.from_pairs([(0.57143, 0.086785)])
    mesh = Mesh.uniform(19, 0.1, 10)
    scenario = Scenario.simulated(
        BoundaryCondition.PINNED_PINNED,
        LoadCase.point(0.00175, 0.7143),
        mesh,
        [0.14286, 0.85714],
        truth,
    )
    return scenario, truth, RemeshPolicy()


def run_figure6(seed: int | None = None, events: int | None = None, jobs: int = 1) -> BenchResult:
    scenario, truth, policy = figure6_config()
    if events is not None:
        policy = replace(policy, events_per_iteration=events)
    params = GaParams(seed=FIGURE6_SEED if seed is None else seed)
    trace = iterate_identify(scenario, policy, params, jobs=jobs)
    rows = []
    for i, step in enumerate(trace):
        pos, lam = step.cracks[0] if step.cracks else (math.nan, math.nan)
        pub = FIGURE6_PUBLISHED[i] if i < len(FIGURE6_PUBLISHED) else (math.nan, math.nan)
        final = i == len(trace) - 1
        ok = (
            abs(pos - FIGURE6_FINAL[0]) <= step.spacing + 1e-12
            and abs(lam - FIGURE6_FINAL[1]) <= step.delta_lambda + 1e-12
        ) if final else True
        rows.append(
            [i + 1, step.spacing, step.delta_lambda, pos, lam, pub[0], pub[1], ok]
        )
    passed = bool(rows) and rows[-1][-1] is True
    return BenchResult(
        target="figure6",
        header=["iteration", "position_step", "intensity_step",
                "mean_position", "mean_intensity",
                "published_position", "published_intensity", "pass"],
        rows=rows,
        passed=passed,
        details={"trace": trace, "truth": truth},
    )


# -- figure 7: sensitivity to instrumental error ------------------------------

FIGURE7_SEED = 53

#: Seven evenly spaced noise amplitudes spanning the studied range.
FIGURE7_EPSILONS = tuple(1.5e-6 * i / 6 for i in range(7))


def figure7_layouts():
    base = [0.14286, 0.85714]
    return [("two_measurements", base), ("three_measurements", base + [0.5])]


def run_figure7(
    seed: int | None = None, events: int | None = None, jobs: int = 1
) -> BenchResult:
    scenario, truth, policy = figure6_config()
    if events is not None:
        policy = replace(policy, events_per_iteration=events)
    base_seed = FIGURE7_SEED if seed is None else seed
    rows = []
    curves = {}
    for li, (layout, positions) in enumerate(figure7_layouts()):
        params = GaParams(seed=base_seed + li)
        curve = sensitivity_curve(
            scenario.bc, scenario.load, scenario.mesh, positions, truth,
            FIGURE7_EPSILONS, noise_realizations=5, params=params,
            policy=policy, jobs=jobs,
        )
        curves[layout] = curve
        for point in curve:
            rows.append(
                [layout, point.epsilon, point.eta_position, point.eta_intensity,
                 point.mean_position, point.mean_intensity, True]
            )

    final_step = 0.05 / 2 ** (policy.iterations - 1)
    final_dlam = 0.01 / 2 ** (policy.iterations - 1)
    crack = truth[0]
    two = curves["two_measurements"]
    three = curves["three_measurements"]
    zero_ok = all(
        c[0].eta_position * crack.position <= final_step + 1e-12
        and c[0].eta_intensity * crack.flexibility <= final_dlam + 1e-12
        for c in (two, three)
    )
    mean_eta = lambda curve, attr: sum(getattr(p, attr) for p in curve) / len(curve)
    three_no_worse = (
        mean_eta(three, "eta_position") <= mean_eta(two, "eta_position") + 1e-12
        and mean_eta(three, "eta_intensity") <= mean_eta(two, "eta_intensity") + 1e-12
    )
    max_ok = all(
        p.eta_position <= 0.5 and p.eta_intensity <= 0.5 for p in (two[-1], three[-1])
    )
    passed = zero_ok and three_no_worse and max_ok
    for row in rows:
        row[-1] = passed
    return BenchResult(
        target="figure7",
        header=["layout", "epsilon", "eta_position", "eta_intensity",
                "mean_position", "mean_intensity", "pass"],
        rows=rows,
        passed=passed,
        details={"curves": curves, "zero_ok": zero_ok,
                 "three_no_worse": three_no_worse, "max_ok": max_ok},
    )


# -- experimental clamped-clamped beam (measured data) -----------------------

TABLE2_SEED = 61

#: Measured deflections of the cut beam under the off-centre load case.
TABLE2_MEASURED = [(0.15, 0.000319667), (0.35, 0.000813833), (0.75, 0.000304667)]
TABLE2_TRUTH = (0.425, 0.03)
TABLE2_PUBLISHED = (0.4266, 0.0299)


def table2_config() -> Scenario:
    from .inverse import MeasurementSet

    return Scenario(
        BoundaryCondition.CLAMPED_CLAMPED,
        LoadCase.point(0.2857, 0.25),
        _mesh99(),
        MeasurementSet.from_pairs(TABLE2_MEASURED),
    )


def run_table2(seed: int | None = None, events: int = 10, jobs: int = 1) -> BenchResult:
    scenario = table2_config()
    params = GaParams(seed=TABLE2_SEED if seed is None else seed, events=events)
    stats = run_events(scenario, params, jobs=jobs)
    cs = stats.crack_stats[0]
    pos_ok = abs(cs.mean_position - TABLE2_TRUTH[0]) <= 0.16 + 1e-12
    lam_ok = abs(cs.mean_intensity - TABLE2_TRUTH[1]) <= 0.03 + 1e-12
    passed = pos_ok and lam_ok
    rows = [[
        TABLE2_TRUTH[0], TABLE2_TRUTH[1],
        cs.mean_position, cs.std_position, cs.mean_intensity, cs.std_intensity,
        TABLE2_PUBLISHED[0], TABLE2_PUBLISHED[1], passed,
    ]]
    return BenchResult(
        target="table2",
        header=["real_position", "real_intensity",
                "mean_position", "std_position", "mean_intensity", "std_intensity",
                "published_position", "published_intensity", "pass"],
        rows=rows,
        passed=passed,
        details={"stats": stats, "scenario": scenario},
    )


BENCH_TARGETS = {
    "table2": run_table2,
    "table3": run_table3,
    "table4": run_table4,
    "table5": run_table5,
    "table6": run_table6,
    "table7": run_table7,
    "figure5": run_figure5,
    "figure6": run_figure6,
    "figure7": run_figure7,
    "figure10": run_figure10,
}


def bench_targets() -> list[str]:
    return sorted(BENCH_TARGETS)


def run_bench(
    target: str, seed: int | None = None, events: int | None = None, jobs: int = 1
) -> BenchResult:
    """Run one benchmark target by name."""
    if target not in BENCH_TARGETS:
        raise ValueError(
            f"unknown benchmark target {target!r}; available: {', '.join(bench_targets())}"
        )
    runner = BENCH_TARGETS[target]
    kwargs = {"seed": seed, "jobs": jobs}
    if events is not None:
        kwargs["events"] = events
    return runner(**kwargs)
