"""Restarted primal-dual hybrid gradient for standard-form LPs.

The saddle-point iteration alternates a projected primal gradient step and a
dual step on the extrapolated primal iterate, with constant step sizes from
an operator-norm bound, uniform iterate averaging since the last restart,
and adaptive restarts driven by the max-violation score of the better of
the current and averaged iterates.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .lp_core import (
    InvalidModelError,
    KktPoint,
    StandardLp,
    TerminationCheck,
    check_relative_termination,
    residuals,
    violation_summary,
)
from .status import SolveStatus

_WEIGHT_CLIP = (1e-4, 1e4)


@dataclass
class PdhgParams:
    eps_rel: float = 1e-4
    max_kkt_passes: int = 200_000
    time_limit_s: float = 10_000.0
    check_every: int = 64
    restart_beta: float = 0.2
    primal_weight_init: float = 1.0

    def __post_init__(self):
        if self.eps_rel <= 0:
            raise ValueError("eps_rel must be positive")
        if self.check_every < 1:
            raise ValueError("check_every must be at least 1")
        if not 0.0 < self.restart_beta < 1.0:
            raise ValueError("restart_beta must lie in (0, 1)")
        if self.primal_weight_init <= 0:
            raise ValueError("primal_weight_init must be positive")


@dataclass
class PdhgState:
    """Mutable iteration state: iterates, averages, steps, restart snapshot."""

    x: np.ndarray
    y: np.ndarray
    avg_x: np.ndarray
    avg_y: np.ndarray
    avg_weight: float
    tau: float
    sigma: float
    omega: float
    iterations: int
    restarts: int
    restart_x: np.ndarray
    restart_y: np.ndarray
    restart_score: float


@dataclass
class SolveStats:
    status: SolveStatus
    iterations: int
    restarts: int
    wall_seconds: float
    termination: TerminationCheck | None
    max_violation: float


def estimate_opnorm(A, seed: int = 0, tol: float = 1e-4, max_iters: int = 100) -> float:
    """Spectral-norm estimate by power iteration on A'A.

    Returns lam with lam <= ||A||_2 <= 1.05 lam on the matrices this solver
    meets; callers derive safe step sizes from 1/(1.05 lam).
    """
    m, n = A.shape
    if m == 0 or n == 0 or A.nnz == 0:
        raise InvalidModelError("cannot estimate the norm of an empty matrix")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iters):
        w = A.T @ (A @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            break
        new_lam = np.sqrt(norm_w)
        v = w / norm_w
        if lam > 0 and abs(new_lam - lam) <= tol * new_lam:
            lam = new_lam
            break
        lam = new_lam
    # safeguard multiply: one more pass tightens the estimate from below
    w = A.T @ (A @ v)
    norm_w = np.linalg.norm(w)
    if norm_w > 0:
        lam = max(lam, float(np.sqrt(norm_w)))
    return float(lam)


def extract_reduced_costs(p: StandardLp, y: np.ndarray) -> np.ndarray:
    """z = max(0, c - A'y); the clipped negative part shows up in r_d."""
    return np.maximum(0.0, p.c - p.at_y(np.asarray(y, dtype=float)))


def initial_state(p: StandardLp, params: PdhgParams, seed: int = 0) -> PdhgState:
    opnorm = estimate_opnorm(p.A, seed=seed)
    step = 1.0 / (1.05 * opnorm)
    x = np.zeros(p.n)
    y = np.zeros(p.m)
    score = violation_summary(p, KktPoint(x, y, extract_reduced_costs(p, y))).max_violation
    return PdhgState(
        x=x,
        y=y,
        avg_x=np.zeros(p.n),
        avg_y=np.zeros(p.m),
        avg_weight=0.0,
        tau=step,
        sigma=step,
        omega=params.primal_weight_init,
        iterations=0,
        restarts=0,
        restart_x=x.copy(),
        restart_y=y.copy(),
        restart_score=score,
    )


def pdhg_step(state: PdhgState, p: StandardLp) -> PdhgState:
    """One primal-dual step; updates the running averages with unit weight."""
    x_new = np.maximum(0.0, state.x - (state.tau / state.omega) * (p.c - p.at_y(state.y)))
    y_new = state.y + (state.sigma * state.omega) * (p.b - p.A @ (2.0 * x_new - state.x))
    state.x = x_new
    state.y = y_new
    w = state.avg_weight + 1.0
    state.avg_x += (x_new - state.avg_x) / w
    state.avg_y += (y_new - state.avg_y) / w
    state.avg_weight = w
    state.iterations += 1
    return state


def _score(p: StandardLp, x: np.ndarray, y: np.ndarray):
    z = extract_reduced_costs(p, y)
    pt = KktPoint(x, y, z)
    res = residuals(p, pt)
    summary = violation_summary(p, pt)
    return pt, res, summary


def run_pdhg(
    p: StandardLp, params: PdhgParams | None = None, seed: int = 0
) -> tuple[KktPoint, SolveStats]:
    """Iterate to the requested relative tolerance, restarting adaptively.

    Every check_every iterations both the current and the averaged iterate
    are scored; a passing iterate is returned immediately, otherwise the
    better one becomes the restart target once its score beats
    restart_beta times the score at the last restart.  On failure statuses
    the best point seen so far is returned.
    """
    if params is None:
        params = PdhgParams()
    if p.m == 0 or p.n == 0:
        raise InvalidModelError("pdhg requires a nonempty model")
    t0 = time.monotonic()
    state = initial_state(p, params, seed=seed)

    best_pt, _, best_summary = _score(p, state.x, state.y)
    status = SolveStatus.ITERATION_LIMIT
    termination = None

    while True:
        if state.iterations >= params.max_kkt_passes:
            status = SolveStatus.ITERATION_LIMIT
            break
        if time.monotonic() - t0 > params.time_limit_s:
            status = SolveStatus.TIME_LIMIT
            break

        pdhg_step(state, p)

        if not (np.all(np.isfinite(state.x)) and np.all(np.isfinite(state.y))):
            status = SolveStatus.NUMERICAL_FAILURE
            break

        if state.iterations % params.check_every != 0:
            continue

        cur_pt, cur_res, cur_sum = _score(p, state.x, state.y)
        avg_pt, avg_res, avg_sum = _score(p, state.avg_x, state.avg_y)
        cur_term = check_relative_termination(p, cur_pt, params.eps_rel)
        avg_term = check_relative_termination(p, avg_pt, params.eps_rel)

        passing = [
            (pt, term, s)
            for pt, term, s in (
                (cur_pt, cur_term, cur_sum),
                (avg_pt, avg_term, avg_sum),
            )
            if term.ok
        ]
        if passing:
            pt, term, summ = min(passing, key=lambda t: t[2].max_violation)
            stats = SolveStats(
                status=SolveStatus.OPTIMAL,
                iterations=state.iterations,
                restarts=state.restarts,
                wall_seconds=time.monotonic() - t0,
                termination=term,
                max_violation=summ.max_violation,
            )
            return pt, stats

        if avg_sum.max_violation < cur_sum.max_violation:
            cand_pt, cand_res, cand_sum = avg_pt, avg_res, avg_sum
        else:
            cand_pt, cand_res, cand_sum = cur_pt, cur_res, cur_sum

        if cand_sum.max_violation < best_summary.max_violation:
            best_pt, best_summary = cand_pt, cand_sum

        if cand_sum.max_violation <= params.restart_beta * state.restart_score:
            state.x = cand_pt.x.copy()
            state.y = cand_pt.y.copy()
            state.avg_x = cand_pt.x.copy()
            state.avg_y = cand_pt.y.copy()
            state.avg_weight = 0.0
            rp = float(np.linalg.norm(cand_res.r_p))
            rd = float(np.linalg.norm(cand_res.r_d))
            if rp > 0.0 and rd > 0.0:
                state.omega = float(np.clip(rp / rd, *_WEIGHT_CLIP))
            state.restart_x = cand_pt.x.copy()
            state.restart_y = cand_pt.y.copy()
            state.restart_score = cand_sum.max_violation
            state.restarts += 1

    termination = check_relative_termination(p, best_pt, params.eps_rel)
    stats = SolveStats(
        status=status,
        iterations=state.iterations,
        restarts=state.restarts,
        wall_seconds=time.monotonic() - t0,
        termination=termination,
        max_violation=best_summary.max_violation,
    )
    return best_pt, stats
