"""Bisection-style refinement of the candidate mesh around identified cracks.

One pass of identification on a coarse mesh can only resolve cracks to the
node spacing and the intensity step. Refinement halves both: a new node
grid with half the spacing is anchored at each current estimate and covers
a window of a few old steps around it, and the intensity resolution doubles
by doubling ``g_max`` while keeping the representable range. Iterating
converges on the crack parameters to any grid precision the measurements
support.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .ga import GaParams, RunStatistics, run_events
from .inverse import Mesh, Scenario
from .seeding import derive_seed

__all__ = [
    "RemeshPolicy",
    "RemeshWindowError",
    "IterationEstimate",
    "refine_mesh",
    "iterate_identify",
]

#: Nodes closer than this are merged when refinement windows overlap.
NODE_MERGE_TOLERANCE = 1e-12

#: Keep refined nodes strictly inside the span by at least this margin.
EDGE_MARGIN = 1e-9


class RemeshWindowError(RuntimeError):
    """A refinement window fell entirely outside the span."""


@dataclass(frozen=True)
class RemeshPolicy:
    """How many refinement passes to run and how wide to search.

    ``window_halfwidth_steps`` is measured in steps of the mesh being
    refined, so a value of 2 keeps everything within two old nodes of the
    current estimate.
    """

    iterations: int = 4
    window_halfwidth_steps: int = 2
    events_per_iteration: int = 10

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.window_halfwidth_steps < 1:
            raise ValueError("window half-width must be at least 1")
        if self.events_per_iteration < 1:
            raise ValueError("events per iteration must be at least 1")


@dataclass(frozen=True)
class IterationEstimate:
    """Per-iteration record: grid resolution and mean identified cracks."""

    spacing: float
    delta_lambda: float
    cracks: tuple[tuple[float, float], ...]  # (position, intensity) means
    run: RunStatistics


def _mesh_spacing(mesh: Mesh) -> float:
    if mesh.spacing is not None:
        return mesh.spacing
    if mesh.size < 2:
        raise ValueError("cannot infer the spacing of a single-node mesh")
    return float(np.diff(np.asarray(mesh.nodes)).min())


def refine_mesh(
    prev_mesh: Mesh,
    estimates,
    window_halfwidth_steps: int = 2,
) -> Mesh:
    """Halve the node spacing and intensity step around the given estimates.

    ``estimates`` is a nonempty list of (position, intensity) pairs. Each
    position anchors a half-step grid covering ``window_halfwidth_steps``
    old steps either side, clipped to the open span; the union of windows
    becomes the new node set. The intensity range is preserved while its
    step halves.
    """
    estimates = list(estimates)
    if not estimates:
        raise ValueError("refinement needs at least one estimate")
    step = _mesh_spacing(prev_mesh)
    new_step = step / 2.0
    reach = 2 * window_halfwidth_steps

    nodes: list[float] = []
    for position, _ in estimates:
        if not 0.0 < position < 1.0:
            raise ValueError(f"estimate position {position} outside (0, 1)")
        for k in range(-reach, reach + 1):
            node = position + k * new_step
            if EDGE_MARGIN < node < 1.0 - EDGE_MARGIN:
                nodes.append(node)
    if not nodes:
        raise RemeshWindowError("every refinement window fell outside the span")

    nodes.sort()
    merged = [nodes[0]]
    for node in nodes[1:]:
        if node - merged[-1] > NODE_MERGE_TOLERANCE:
            merged.append(node)

    return Mesh(
        nodes=tuple(merged),
        lambda_max=prev_mesh.lambda_max,
        g_max=prev_mesh.g_max * 2,
        spacing=new_step,
    )


def iterate_identify(
    scenario: Scenario,
    policy: RemeshPolicy,
    params: GaParams,
    jobs: int = 1,
) -> list[IterationEstimate]:
    """Identify, refine around the event means, and repeat.

    The first iteration runs on the scenario's own mesh; each later one
    runs on the refinement anchored at the previous iteration's per-crack
    mean estimates. Every iteration gets its own derived random stream.
    """
    current = scenario
    trace: list[IterationEstimate] = []
    for iteration in range(policy.iterations):
        iter_params = replace(
            params,
            events=policy.events_per_iteration,
            seed=derive_seed(params.seed, iteration),
        )
        stats = run_events(current, iter_params, jobs=jobs)
        means = tuple(
            (cs.mean_position, cs.mean_intensity)
            for cs in stats.crack_stats
            if cs.matched_events > 0
        )
        trace.append(
            IterationEstimate(
                spacing=_mesh_spacing(current.mesh),
                delta_lambda=current.mesh.delta_lambda,
                cracks=means,
                run=stats,
            )
        )
        if iteration + 1 < policy.iterations:
            if not means:
                raise RemeshWindowError(
                    "no cracks were identified; nothing to refine around"
                )
            refined = refine_mesh(
                current.mesh, means, policy.window_halfwidth_steps
            )
            current = current.with_mesh(refined)
    return trace
