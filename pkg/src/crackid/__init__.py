"""Static crack identification for Euler-Bernoulli beams.

Forward problem: closed-form deflection of a beam with any number of
concentrated cracks (rotational-spring model) under uniform and point
loads, for pinned-pinned, clamped-clamped and cantilever supports, plus an
independent piecewise reference solver. Inverse problem: an integer-gene
genetic algorithm that recovers crack positions and intensities from a
handful of measured static deflections, with mesh-refinement and
measurement-noise studies, all behind a reproducible seeded API and a CLI.
"""

__version__ = "0.1.0"

from .beam import (
    BeamProblem,
    BoundaryCondition,
    Crack,
    CrackSet,
    DegenerateBeamError,
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
from .oracle import OracleSolution, SingularBeamSystemError, oracle_deflection
from .inverse import (
    Chromosome,
    Measurement,
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
from .ga import (
    CrackStatistic,
    EventResult,
    GaParams,
    RunStatistics,
    crossover,
    diversity,
    init_population,
    mutate,
    run_event,
    run_events,
    step_generation,
    tournament_select,
)
from .remesh import IterationEstimate, RemeshPolicy, iterate_identify, refine_mesh
from .sensitivity import (
    NoiseModel,
    SensitivityPoint,
    SweepPoint,
    corrupt,
    err_pct,
    error_eta,
    placement,
    sensitivity_curve,
    sweep_measurement_position,
)

__all__ = [name for name in dir() if not name.startswith("_")]
