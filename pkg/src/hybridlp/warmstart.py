"""Centered interior warm starts from first-order solutions, and the hybrid driver.

The centering construction floors a primal-dual pair away from the boundary,
then nudges each coordinate pair toward a common complementarity target with
per-coordinate moves clamped to a trust region.  The hybrid driver runs the
full pipeline presolve -> standard form -> scale -> pdhg -> centered start ->
interior point, escalating the floor and retrying from the current iterate
whenever the interior-point solver stalls, and reports violations measured
on the user's original model.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .ipm import IpmParams, IpmState, IpmStats, run_ipm
from .lp_core import (
    GeneralLp,
    InvalidModelError,
    KktPoint,
    StandardLp,
    StandardFormMap,
    ViolationSummary,
    evaluate_general_point,
    restrict_point,
    to_standard_form,
    violation_summary,
)
from .mps_io import SolutionFile, make_solution_file
from .pdhg import PdhgParams, SolveStats, run_pdhg
from .status import SolveStatus
from .transform import (
    PresolveResult,
    PresolveStack,
    PresolveStatus,
    ScalingInfo,
    postsolve,
    presolve,
    ruiz_equilibrate,
    unscale_point,
)


@dataclass
class WarmStartParams:
    mu_min: float = 1e-6
    alpha_min: float = 1e-6
    delta_max: float = 1e-4
    escalation_factor: float = 10.0
    max_escalations: int = 6

    def __post_init__(self):
        if min(self.mu_min, self.alpha_min, self.delta_max) <= 0:
            raise ValueError("mu_min, alpha_min and delta_max must be positive")
        if self.escalation_factor <= 1.0:
            raise ValueError("escalation_factor must exceed 1")


def mu_target(x, z, n: int, mu_min: float) -> float:
    """Complementarity target max(x'z / n, mu_min)."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.size != n or z.size != n or n < 1:
        raise InvalidModelError("x and z must both have length n >= 1")
    return max(float(x @ z) / n, mu_min)


def center_toward_target(
    x, z, mu: float, alpha_min: float, delta_max: float
) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate centering moves toward a given complementarity target.

    Coordinates are floored at alpha_min, then the smaller of each pair moves
    first, each move clamped to +- delta_max around its current value via
    min(max(mu / other, v - delta), v + delta).  A final re-floor keeps every
    output coordinate at or above alpha_min even when a clamped move dipped
    below it.
    """
    a, d = alpha_min, delta_max
    xp = np.maximum(np.asarray(x, dtype=float), a)
    zp = np.maximum(np.asarray(z, dtype=float), a)

    x_first = xp < zp
    # branch where x is smaller: move x toward mu/z, then z toward mu/x'
    x1 = np.clip(mu / zp, xp - d, xp + d)
    z1 = np.clip(mu / x1, zp - d, zp + d)
    # branch where z is smaller (or tied): move z first, then x
    z2 = np.clip(mu / xp, zp - d, zp + d)
    x2 = np.clip(mu / z2, xp - d, xp + d)

    x_new = np.maximum(np.where(x_first, x1, x2), a)
    z_new = np.maximum(np.where(x_first, z1, z2), a)
    return x_new, z_new


def centered_start(pt: KktPoint, params: WarmStartParams | None = None) -> KktPoint:
    """Perturb (x, z) toward max(x'z/n, mu_min) complementarity; y is untouched."""
    if params is None:
        params = WarmStartParams()
    mu = mu_target(pt.x, pt.z, pt.x.size, params.mu_min)
    x_new, z_new = center_toward_target(
        pt.x, pt.z, mu, params.alpha_min, params.delta_max
    )
    return KktPoint(x_new, pt.y.copy(), z_new)


@dataclass
class WarmIpmResult:
    point: KktPoint
    stats: IpmStats
    escalations: int
    total_iterations: int


def warm_started_ipm(
    p: StandardLp,
    start: KktPoint,
    ipm_params: IpmParams,
    ws_params: WarmStartParams,
    time_limit_s: float | None = None,
) -> WarmIpmResult:
    """Run the interior-point solver from a warm point with stall escalation.

    On a stall the floor alpha_min is multiplied by the escalation factor,
    the current iterate's (x, z) are re-floored, and the solve resumes from
    that iterate.  After max_escalations stalls the Stalled status stands.
    """
    t0 = time.monotonic()
    x = np.asarray(start.x, dtype=float).copy()
    y = np.asarray(start.y, dtype=float).copy()
    z = np.asarray(start.z, dtype=float).copy()
    alpha = ws_params.alpha_min
    escalations = 0
    total_iters = 0

    while True:
        remaining = None
        if time_limit_s is not None:
            remaining = max(0.0, time_limit_s - (time.monotonic() - t0))
        pt, stats = run_ipm(
            p, ipm_params, start=IpmState(x, y, z), time_limit_s=remaining
        )
        total_iters += stats.iterations
        if stats.status is SolveStatus.STALLED and escalations < ws_params.max_escalations:
            escalations += 1
            alpha *= ws_params.escalation_factor
            x = np.maximum(pt.x, alpha)
            z = np.maximum(pt.z, alpha)
            y = pt.y.copy()
            continue
        return WarmIpmResult(pt, stats, escalations, total_iters)


# ---------------------------------------------------------------------------
# Shared pipeline plumbing
# ---------------------------------------------------------------------------

@dataclass
class PreparedModel:
    """Everything the solvers need, plus the mappings to undo it all."""

    original: GeneralLp
    presolve_result: PresolveResult
    reduced: GeneralLp | None
    standard: StandardLp | None
    fmap: StandardFormMap | None
    solve_model: StandardLp | None
    scaling: ScalingInfo | None

    @property
    def solved_by_presolve(self) -> bool:
        return self.presolve_result.solved


def prepare_model(
    g: GeneralLp, *, use_presolve: bool = True, use_scaling: bool = True
) -> PreparedModel:
    """presolve -> standard form -> scale; any stage can be switched off."""
    if use_presolve:
        pres = presolve(g)
    else:
        pres = PresolveResult(
            PresolveStatus.REDUCED, g,
            PresolveStack(n_original=g.n_vars, m_original=g.n_rows),
        )
    if pres.status is not PresolveStatus.REDUCED or pres.solved:
        return PreparedModel(g, pres, pres.model, None, None, None, None)

    p_std, fmap = to_standard_form(pres.model)
    if use_scaling:
        p_solve, scaling = ruiz_equilibrate(p_std)
    else:
        p_solve, scaling = p_std, None
    return PreparedModel(g, pres, pres.model, p_std, fmap, p_solve, scaling)


@dataclass
class FinishedPoint:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    violation: ViolationSummary
    scaled_violation: ViolationSummary | None


def finish_point(prep: PreparedModel, pt_solve: KktPoint) -> FinishedPoint:
    """Unscale, postsolve, and measure the point on the original model."""
    scaled_viol = None
    if prep.solve_model is not None:
        scaled_viol = violation_summary(prep.solve_model, pt_solve)
        pt_std = unscale_point(prep.scaling, pt_solve) if prep.scaling else pt_solve
        x_r, y_r, z_r = restrict_point(prep.reduced, prep.fmap, pt_std)
    else:
        x_r = np.zeros(prep.reduced.n_vars if prep.reduced is not None else 0)
        y_r = np.zeros(prep.reduced.n_rows if prep.reduced is not None else 0)
        z_r = np.zeros_like(x_r)
    restored = postsolve(
        prep.presolve_result.stack, KktPoint(x_r, y_r, z_r), prep.original
    )
    viol = evaluate_general_point(prep.original, restored.x, restored.y)
    return FinishedPoint(restored.x, restored.y, restored.z, viol, scaled_viol)


def _zero_point_file(
    g: GeneralLp, status: SolveStatus, method: str, wall: float, message: str
) -> SolutionFile:
    x = np.zeros(g.n_vars)
    y = np.zeros(g.n_rows)
    z = g.c - g.A.T @ y
    viol = evaluate_general_point(g, x, y)
    return make_solution_file(
        g, status, x, y, np.asarray(z), method=method, wall_seconds=wall,
        violation=viol, message=message,
    )


@dataclass
class HybridStats:
    status: SolveStatus
    pdhg_status: SolveStatus | None
    ipm_status: SolveStatus | None
    pdhg_iterations: int
    ipm_iterations: int
    escalations: int
    wall_seconds: float
    violation: ViolationSummary | None
    scaled_violation: ViolationSummary | None
    pdhg_stats: SolveStats | None = None
    ipm_stats: IpmStats | None = None


def hybrid_solve(
    g: GeneralLp,
    pdhg_params: PdhgParams | None = None,
    ipm_params: IpmParams | None = None,
    ws_params: WarmStartParams | None = None,
    *,
    use_presolve: bool = True,
    use_scaling: bool = True,
    seed: int = 0,
    method_tag: str = "hybrid",
) -> tuple[SolutionFile, HybridStats]:
    """First-order solve, centered warm start, interior-point refinement.

    The first-order stage runs at its own (loose) tolerance on the scaled
    model; the refined solution is unscaled, postsolved, and its violation
    evaluated on the original model.  Phase failures propagate with a phase
    tag in the message, always carrying the best point found so far.
    """
    pdhg_params = pdhg_params or PdhgParams()
    ipm_params = ipm_params or IpmParams()
    ws_params = ws_params or WarmStartParams()
    t0 = time.monotonic()

    prep = prepare_model(g, use_presolve=use_presolve, use_scaling=use_scaling)
    pres = prep.presolve_result
    if pres.status is not PresolveStatus.REDUCED:
        wall = time.monotonic() - t0
        status = (
            SolveStatus.INFEASIBLE
            if pres.status is PresolveStatus.INFEASIBLE
            else SolveStatus.UNBOUNDED
        )
        sol = _zero_point_file(g, status, method_tag, wall, f"presolve: {pres.message}")
        stats = HybridStats(status, None, None, 0, 0, 0, wall, sol.violation, None)
        return sol, stats

    if prep.solved_by_presolve:
        finished = finish_point(prep, KktPoint(np.zeros(0), np.zeros(0), np.zeros(0)))
        wall = time.monotonic() - t0
        sol = make_solution_file(
            g, SolveStatus.OPTIMAL, finished.x, finished.y, finished.z,
            method=method_tag, wall_seconds=wall, violation=finished.violation,
            message="solved by presolve",
        )
        stats = HybridStats(
            SolveStatus.OPTIMAL, None, None, 0, 0, 0, wall,
            finished.violation, None,
        )
        return sol, stats

    pdhg_pt, pdhg_stats = run_pdhg(prep.solve_model, pdhg_params, seed=seed)
    if pdhg_stats.status is not SolveStatus.OPTIMAL:
        finished = finish_point(prep, pdhg_pt)
        wall = time.monotonic() - t0
        sol = make_solution_file(
            g, pdhg_stats.status, finished.x, finished.y, finished.z,
            method=method_tag, wall_seconds=wall,
            pdhg_iterations=pdhg_stats.iterations,
            violation=finished.violation,
            message=f"pdhg: {pdhg_stats.status.value}",
        )
        stats = HybridStats(
            pdhg_stats.status, pdhg_stats.status, None,
            pdhg_stats.iterations, 0, 0, wall,
            finished.violation, finished.scaled_violation, pdhg_stats, None,
        )
        return sol, stats

    warm = centered_start(pdhg_pt, ws_params)
    budget = None
    if pdhg_params.time_limit_s is not None:
        budget = max(0.0, pdhg_params.time_limit_s - (time.monotonic() - t0))
    result = warm_started_ipm(prep.solve_model, warm, ipm_params, ws_params, budget)

    finished = finish_point(prep, result.point)
    wall = time.monotonic() - t0
    status = result.stats.status
    message = "" if status is SolveStatus.OPTIMAL else f"ipm: {status.value}"
    sol = make_solution_file(
        g, status, finished.x, finished.y, finished.z,
        method=method_tag, wall_seconds=wall,
        pdhg_iterations=pdhg_stats.iterations,
        ipm_iterations=result.total_iterations,
        escalations=result.escalations,
        violation=finished.violation,
        message=message,
    )
    stats = HybridStats(
        status, pdhg_stats.status, status,
        pdhg_stats.iterations, result.total_iterations, result.escalations,
        wall, finished.violation, finished.scaled_violation,
        pdhg_stats, result.stats,
    )
    return sol, stats
