"""YAML scenario configuration: parsing, validation and object building.

A configuration file is one YAML document describing a complete
identification task. Two modes exist: simulation mode states the true
cracks and the measurement positions, and the measured deflections are
generated by the forward solver (optionally corrupted by the configured
noise); data mode states measured position/deflection pairs directly.
Exactly one of the two must be present.

Validation errors carry the key path of the offending entry so a bad file
can be fixed without reading the parser.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .beam import BoundaryCondition, CrackSet, LoadCase, PointLoad
from .ga import GaParams
from .inverse import MeasurementSet, Mesh, Scenario
from .remesh import RemeshPolicy
from .sensitivity import NoiseModel, corrupt
from .seeding import derive_rng

__all__ = ["ConfigError", "ScenarioConfig", "load_config", "parse_config"]

BC_NAMES = {
    "pinned-pinned": BoundaryCondition.PINNED_PINNED,
    "clamped-clamped": BoundaryCondition.CLAMPED_CLAMPED,
    "cantilever": BoundaryCondition.CANTILEVER,
}


class ConfigError(ValueError):
    """A configuration file failed validation; the message names the key."""


@dataclass(frozen=True)
class SweepSpec:
    """One measurement point fixed, the other swept over candidate positions."""

    fixed_position: float
    varying_positions: tuple[float, ...]
    events_per_point: int = 10


@dataclass(frozen=True)
class SensitivitySpec:
    """Noise-amplitude sweep settings."""

    epsilons: tuple[float, ...]
    realizations: int = 5


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario description plus the raw document for echoing."""

    boundary: BoundaryCondition
    load: LoadCase
    mesh: Mesh
    true_cracks: CrackSet | None
    measurement_positions: tuple[float, ...] | None
    measured: MeasurementSet | None
    ga: GaParams
    remesh: RemeshPolicy | None
    noise: NoiseModel | None
    sweep: SweepSpec | None
    sensitivity: SensitivitySpec | None
    raw: dict = field(repr=False)

    @property
    def simulation_mode(self) -> bool:
        return self.true_cracks is not None

    def clean_measurements(self) -> MeasurementSet:
        """Measurements before any noise: simulated in simulation mode."""
        if self.measured is not None:
            return self.measured
        scenario = Scenario.simulated(
            self.boundary,
            self.load,
            self.mesh,
            self.measurement_positions,
            self.true_cracks,
        )
        return scenario.measurements

    def build_scenario(self, apply_noise: bool = True) -> Scenario:
        """Scenario ready for identification.

        In simulation mode with a nonzero noise amplitude, the simulated
        measurements are corrupted once, on the stream derived from the
        master seed (index 0).
        """
        measurements = self.clean_measurements()
        if (
            apply_noise
            and self.simulation_mode
            and self.noise is not None
            and self.noise.epsilon > 0.0
        ):
            measurements = corrupt(
                measurements, self.noise, derive_rng(self.ga.seed, 0xE0)
            )
        return Scenario(self.boundary, self.load, self.mesh, measurements)


def _expect_mapping(node, path):
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected a mapping")
    return node


def _number(node, path, minimum=None, maximum=None):
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {node!r}")
    value = float(node)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: {value} is below the minimum {minimum}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"{path}: {value} is above the maximum {maximum}")
    return value


def _integer(node, path, minimum=None):
    if isinstance(node, bool) or not isinstance(node, int):
        raise ConfigError(f"{path}: expected an integer, got {node!r}")
    if minimum is not None and node < minimum:
        raise ConfigError(f"{path}: {node} is below the minimum {minimum}")
    return node


def _position(node, path):
    value = _number(node, path)
    if not 0.0 < value < 1.0:
        raise ConfigError(f"{path}: position {value} must lie strictly inside (0, 1)")
    return value


def _parse_beam(doc):
    beam = _expect_mapping(doc.get("beam"), "beam")
    name = beam.get("boundary")
    if name not in BC_NAMES:
        raise ConfigError(
            f"beam.boundary: expected one of {sorted(BC_NAMES)}, got {name!r}"
        )
    load_node = _expect_mapping(beam.get("load", {}), "beam.load")
    q0 = _number(load_node.get("q0", 0.0), "beam.load.q0")
    points = []
    for i, item in enumerate(load_node.get("points", []) or []):
        node = _expect_mapping(item, f"beam.load.points[{i}]")
        points.append(
            PointLoad(
                intensity=_number(node.get("intensity"), f"beam.load.points[{i}].intensity"),
                position=_position(node.get("position"), f"beam.load.points[{i}].position"),
            )
        )
    load = LoadCase(q0=q0, point_loads=tuple(points))
    if load.q0 == 0.0 and not load.point_loads:
        raise ConfigError("beam.load: at least one of q0 or points is required")
    return BC_NAMES[name], load


def _parse_mesh(doc):
    mesh = _expect_mapping(doc.get("mesh"), "mesh")
    lambda_max = _number(mesh.get("lambda_max"), "mesh.lambda_max", minimum=1e-12)
    g_max = _integer(mesh.get("g_max"), "mesh.g_max", minimum=1)
    if "nodes" in mesh and "node_count" in mesh:
        raise ConfigError("mesh: give either node_count or nodes, not both")
    if "node_count" in mesh:
        count = _integer(mesh.get("node_count"), "mesh.node_count", minimum=1)
        return Mesh.uniform(count, lambda_max, g_max)
    if "nodes" in mesh:
        nodes = mesh.get("nodes")
        if not isinstance(nodes, list) or not nodes:
            raise ConfigError("mesh.nodes: expected a nonempty list of positions")
        values = [_position(x, f"mesh.nodes[{i}]") for i, x in enumerate(nodes)]
        try:
            return Mesh(tuple(values), lambda_max, g_max)
        except ValueError as exc:
            raise ConfigError(f"mesh.nodes: {exc}") from exc
    raise ConfigError("mesh: node_count or nodes is required")


def _parse_damage_and_measurements(doc):
    damage = doc.get("damage")
    measurements = _expect_mapping(doc.get("measurements"), "measurements")
    has_values = "values" in measurements

    if damage is not None and has_values:
        raise ConfigError(
            "exactly one of damage.cracks (simulation mode) or "
            "measurements.values (data mode) may be present"
        )

    if damage is not None:
        damage = _expect_mapping(damage, "damage")
        cracks = damage.get("cracks")
        if not isinstance(cracks, list):
            raise ConfigError("damage.cracks: expected a list of [position, intensity]")
        pairs = []
        for i, item in enumerate(cracks):
            if not isinstance(item, list) or len(item) != 2:
                raise ConfigError(
                    f"damage.cracks[{i}]: expected a [position, intensity] pair"
                )
            pos = _position(item[0], f"damage.cracks[{i}][0]")
            lam = _number(item[1], f"damage.cracks[{i}][1]", minimum=0.0)
            pairs.append((pos, lam))
        try:
            true_cracks = CrackSet.from_pairs(pairs)
        except ValueError as exc:
            raise ConfigError(f"damage.cracks: {exc}") from exc

        positions = measurements.get("positions")
        if not isinstance(positions, list) or len(positions) < 2:
            raise ConfigError(
                "measurements.positions: simulation mode needs at least two positions"
            )
        pos_values = tuple(
            _position(x, f"measurements.positions[{i}]") for i, x in enumerate(positions)
        )
        return true_cracks, pos_values, None

    if not has_values:
        raise ConfigError(
            "exactly one of damage.cracks (simulation mode) or "
            "measurements.values (data mode) must be present"
        )
    values = measurements.get("values")
    if not isinstance(values, list) or len(values) < 2:
        raise ConfigError("measurements.values: expected at least two [position, value] pairs")
    pairs = []
    for i, item in enumerate(values):
        if not isinstance(item, list) or len(item) != 2:
            raise ConfigError(f"measurements.values[{i}]: expected a [position, value] pair")
        pos = _position(item[0], f"measurements.values[{i}][0]")
        val = _number(item[1], f"measurements.values[{i}][1]")
        pairs.append((pos, val))
    try:
        measured = MeasurementSet.from_pairs(pairs)
    except ValueError as exc:
        raise ConfigError(f"measurements.values: {exc}") from exc
    return None, None, measured


def _parse_ga(doc, seed_default):
    node = _expect_mapping(doc.get("ga", {}) or {}, "ga")
    kwargs = {}
    mapping = {
        "population": ("population", _integer, dict(minimum=2)),
        "generations": ("generations", _integer, dict(minimum=1)),
        "crossover_rate": ("crossover_rate", _number, dict(minimum=0.0, maximum=1.0)),
        "mutation_rate": ("mutation_rate", _number, dict(minimum=0.0, maximum=1.0)),
        "tournament_size": ("tournament_size", _integer, dict(minimum=2)),
        "fitness_constant": ("k", _number, {}),
        "events": ("events", _integer, dict(minimum=1)),
        "migration_scale": ("migration_scale", _number, dict(minimum=0.0)),
    }
    for key, (attr, parse, extra) in mapping.items():
        if key in node:
            kwargs[attr] = parse(node[key], f"ga.{key}", **extra)
    seed = doc.get("seed", seed_default)
    kwargs["seed"] = _integer(seed, "seed", minimum=0)
    try:
        return GaParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"ga: {exc}") from exc


def _parse_remesh(doc):
    if "remesh" not in doc or doc["remesh"] is None:
        return None
    node = _expect_mapping(doc["remesh"], "remesh")
    try:
        return RemeshPolicy(
            iterations=_integer(node.get("iterations", 4), "remesh.iterations", minimum=1),
            window_halfwidth_steps=_integer(
                node.get("window_halfwidth_steps", 2),
                "remesh.window_halfwidth_steps",
                minimum=1,
            ),
            events_per_iteration=_integer(
                node.get("events_per_iteration", 10),
                "remesh.events_per_iteration",
                minimum=1,
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"remesh: {exc}") from exc


def _parse_noise(doc):
    if "noise" not in doc or doc["noise"] is None:
        return None
    node = _expect_mapping(doc["noise"], "noise")
    try:
        return NoiseModel(
            epsilon=_number(node.get("epsilon", 0.0), "noise.epsilon", minimum=0.0),
            realizations=_integer(
                node.get("realizations", 5), "noise.realizations", minimum=1
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"noise: {exc}") from exc


def _parse_sweep(doc):
    if "sweep" not in doc or doc["sweep"] is None:
        return None
    node = _expect_mapping(doc["sweep"], "sweep")
    fixed = _position(node.get("fixed_position"), "sweep.fixed_position")
    varying = node.get("varying_positions")
    if not isinstance(varying, list) or not varying:
        raise ConfigError("sweep.varying_positions: expected a nonempty list")
    positions = tuple(
        _position(x, f"sweep.varying_positions[{i}]") for i, x in enumerate(varying)
    )
    return SweepSpec(
        fixed_position=fixed,
        varying_positions=positions,
        events_per_point=_integer(
            node.get("events_per_point", 10), "sweep.events_per_point", minimum=1
        ),
    )


def _parse_sensitivity(doc):
    if "sensitivity" not in doc or doc["sensitivity"] is None:
        return None
    node = _expect_mapping(doc["sensitivity"], "sensitivity")
    eps = node.get("epsilons")
    if not isinstance(eps, list) or not eps:
        raise ConfigError("sensitivity.epsilons: expected a nonempty list")
    values = tuple(
        _number(x, f"sensitivity.epsilons[{i}]", minimum=0.0) for i, x in enumerate(eps)
    )
    return SensitivitySpec(
        epsilons=values,
        realizations=_integer(
            node.get("realizations", 5), "sensitivity.realizations", minimum=1
        ),
    )


def parse_config(doc: dict, seed_default: int = 1) -> ScenarioConfig:
    """Validate a parsed YAML document and build the typed configuration."""
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected a mapping")
    boundary, load = _parse_beam(doc)
    mesh = _parse_mesh(doc)
    true_cracks, positions, measured = _parse_damage_and_measurements(doc)
    ga = _parse_ga(doc, seed_default)
    config = ScenarioConfig(
        boundary=boundary,
        load=load,
        mesh=mesh,
        true_cracks=true_cracks,
        measurement_positions=positions,
        measured=measured,
        ga=ga,
        remesh=_parse_remesh(doc),
        noise=_parse_noise(doc),
        sweep=_parse_sweep(doc),
        sensitivity=_parse_sensitivity(doc),
        raw=doc,
    )
    if config.true_cracks is not None:
        for crack in config.true_cracks:
            if crack.flexibility > mesh.lambda_max:
                raise ConfigError(
                    f"damage.cracks: intensity {crack.flexibility} exceeds "
                    f"mesh.lambda_max {mesh.lambda_max}"
                )
    return config


def load_config(path: str | Path, seed_default: int = 1) -> ScenarioConfig:
    """Read and validate a YAML configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if doc is None:
        raise ConfigError(f"{path}: empty configuration")
    return parse_config(doc, seed_default=seed_default)
