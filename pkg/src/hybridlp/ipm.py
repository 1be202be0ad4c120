"""Primal-dual path-following interior-point solver (predictor-corrector).

Works in standard form with the normal-equations linear algebra
(A D^2 A' with D^2 = X/Z), an infeasible-start Newton right-hand side, a
fraction-to-boundary step rule, and Mehrotra-style adaptive centering.
Accepts a cold start or an externally supplied strictly positive start.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .lp_core import (
    InvalidModelError,
    KktPoint,
    StandardLp,
    TerminationCheck,
    check_relative_termination,
    violation_summary,
)
from .status import SolveStatus

_REG_LADDER = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6)
_SOLVE_TOL = 1e-8
_D2_CLIP = (1e-32, 1e32)


class NumericalFailure(RuntimeError):
    """The Newton system could not be solved to tolerance."""


@dataclass
class IpmParams:
    eps_rel: float = 1e-8
    max_iters: int = 200
    step_fraction: float = 0.99
    min_step: float = 1e-6
    centering_power: float = 3.0

    def __post_init__(self):
        if not 0.0 < self.step_fraction < 1.0:
            raise ValueError("step_fraction must lie in (0, 1)")
        if self.min_step <= 0:
            raise ValueError("min_step must be positive")


@dataclass
class IpmState:
    """Strictly positive (x, z) with free duals y."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    iterations: int = 0
    last_alpha_p: float = float("nan")
    last_alpha_d: float = float("nan")

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.z = np.asarray(self.z, dtype=float)

    @property
    def mu(self) -> float:
        n = self.x.size
        return float(self.x @ self.z) / n if n else 0.0

    def require_interior(self):
        if not (np.all(self.x > 0) and np.all(self.z > 0)):
            raise InvalidModelError("interior-point state needs strictly positive x and z")


@dataclass
class StepReport:
    alpha_p: float
    alpha_d: float
    mu_before: float
    mu_after: float
    sigma: float

    @property
    def min_alpha(self) -> float:
        return min(self.alpha_p, self.alpha_d)


@dataclass
class IpmStats:
    status: SolveStatus
    iterations: int
    wall_seconds: float
    stall_iteration: int | None
    termination: TerminationCheck | None
    mu: float
    history: list = field(default_factory=list)


class NormalEquationsSolver:
    """Factor A D^2 A' once per iterate and solve Newton systems against it.

    Regularization escalates through a fixed ladder when factorization fails
    or the solved system's relative residual exceeds 1e-8.
    """

    def __init__(self, p: StandardLp, x: np.ndarray, z: np.ndarray):
        self.p = p
        self.x = x
        self.z = z
        self.d2 = np.clip(x / z, *_D2_CLIP)
        AD = p.A @ sp.diags(self.d2)
        self.M = (AD @ p.A.T).tocsc()
        self._level = 0
        self._lu = None
        self._factor()

    def _factor(self):
        while self._level < len(_REG_LADDER):
            delta = _REG_LADDER[self._level]
            M = self.M if delta == 0.0 else self.M + delta * sp.identity(self.M.shape[0], format="csc")
            try:
                self._lu = spla.splu(M.tocsc())
                return
            except RuntimeError:
                self._level += 1
                self._lu = None
        raise NumericalFailure("normal-equations factorization failed at max regularization")

    def _residual_ok(self, dx, dy, dz, rhs_p, rhs_d, rhs_c) -> bool:
        p = self.p
        r1 = p.A @ dx - rhs_p
        r2 = p.at_y(dy) + dz - rhs_d
        r3 = self.z * dx + self.x * dz - rhs_c
        def rel(r, rhs):
            denom = 1.0 + (float(np.max(np.abs(rhs))) if rhs.size else 0.0)
            return (float(np.max(np.abs(r))) if r.size else 0.0) / denom
        return max(rel(r1, rhs_p), rel(r2, rhs_d), rel(r3, rhs_c)) <= _SOLVE_TOL

    def solve(self, rhs_p, rhs_d, rhs_c):
        """Solve A dx = rhs_p, A'dy + dz = rhs_d, Z dx + X dz = rhs_c."""
        p = self.p
        while True:
            w = rhs_d - rhs_c / self.x
            rhs = rhs_p + p.A @ (self.d2 * w)
            dy = self._lu.solve(rhs)
            dx = self.d2 * (p.at_y(dy) - w)
            dz = rhs_d - p.at_y(dy)
            finite = np.all(np.isfinite(dx)) and np.all(np.isfinite(dy)) and np.all(np.isfinite(dz))
            if finite and self._residual_ok(dx, dy, dz, rhs_p, rhs_d, rhs_c):
                return dx, dy, dz
            self._level += 1
            if self._level >= len(_REG_LADDER):
                raise NumericalFailure("Newton system residual above tolerance at max regularization")
            self._factor()


def kkt_solve(p: StandardLp, state: IpmState, rhs_p, rhs_d, rhs_c):
    """One-shot Newton solve at the given state (see NormalEquationsSolver)."""
    state.require_interior()
    solver = NormalEquationsSolver(p, state.x, state.z)
    return solver.solve(
        np.asarray(rhs_p, dtype=float),
        np.asarray(rhs_d, dtype=float),
        np.asarray(rhs_c, dtype=float),
    )


def cold_start_point(p: StandardLp) -> IpmState:
    """Least-norm-flavored default start: x = z = max(1, scale) * ones, y = 0.

    The scale comes from the least-norm solution of Ax = b, so scaled and
    unscaled versions of the same model get different cold starts.
    """
    x_ln = spla.lsqr(p.A, p.b, atol=1e-10, btol=1e-10)[0]
    scale = float(np.max(np.abs(x_ln))) if x_ln.size else 0.0
    alpha = max(1.0, scale)
    n = p.n
    return IpmState(x=np.full(n, alpha), y=np.zeros(p.m), z=np.full(n, alpha))


def _max_step(v: np.ndarray, dv: np.ndarray) -> float:
    neg = dv < 0
    if not neg.any():
        return np.inf
    return float(np.min(v[neg] / -dv[neg]))


def predictor_corrector_iteration(
    p: StandardLp, state: IpmState, params: IpmParams
) -> tuple[IpmState, StepReport]:
    """Affine predictor, adaptive centering corrector, fraction-to-boundary step."""
    state.require_interior()
    x, y, z = state.x, state.y, state.z
    n = x.size
    mu = state.mu

    rhs_p = p.b - p.A @ x
    rhs_d = p.c - p.at_y(y) - z

    solver = NormalEquationsSolver(p, x, z)
    dx_aff, dy_aff, dz_aff = solver.solve(rhs_p, rhs_d, -x * z)

    a_p_aff = min(1.0, _max_step(x, dx_aff))
    a_d_aff = min(1.0, _max_step(z, dz_aff))
    mu_aff = float((x + a_p_aff * dx_aff) @ (z + a_d_aff * dz_aff)) / n
    sigma = (max(mu_aff, 0.0) / mu) ** params.centering_power if mu > 0 else 0.0
    sigma = min(sigma, 1.0)

    rhs_c = sigma * mu - x * z - dx_aff * dz_aff
    dx, dy, dz = solver.solve(rhs_p, rhs_d, rhs_c)

    alpha_p = min(1.0, params.step_fraction * _max_step(x, dx))
    alpha_d = min(1.0, params.step_fraction * _max_step(z, dz))

    state.x = x + alpha_p * dx
    state.y = y + alpha_d * dy
    state.z = z + alpha_d * dz
    state.iterations += 1
    state.last_alpha_p = alpha_p
    state.last_alpha_d = alpha_d

    return state, StepReport(
        alpha_p=alpha_p,
        alpha_d=alpha_d,
        mu_before=mu,
        mu_after=state.mu,
        sigma=sigma,
    )


def run_ipm(
    p: StandardLp,
    params: IpmParams | None = None,
    start: IpmState | None = None,
    time_limit_s: float | None = None,
) -> tuple[KktPoint, IpmStats]:
    """Iterate predictor-corrector steps until the relative criteria hold.

    Stops with Stalled as soon as min(alpha_p, alpha_d) drops below
    min_step on any iteration; the caller (the warm-start driver) owns the
    retry policy.  Iteration counts are accepted predictor-corrector steps.
    """
    if params is None:
        params = IpmParams()
    if p.m == 0 or p.n == 0:
        raise InvalidModelError("interior-point solve requires a nonempty model")
    if start is not None:
        start.require_interior()
        state = IpmState(start.x.copy(), start.y.copy(), start.z.copy())
    else:
        state = cold_start_point(p)

    t0 = time.monotonic()
    history = []
    status = SolveStatus.ITERATION_LIMIT
    stall_iteration = None
    termination = None

    for it in range(params.max_iters + 1):
        pt = KktPoint(state.x, state.y, np.maximum(state.z, 0.0))
        termination = check_relative_termination(p, pt, params.eps_rel)
        if termination.ok:
            status = SolveStatus.OPTIMAL
            break
        if it == params.max_iters:
            status = SolveStatus.ITERATION_LIMIT
            break
        if time_limit_s is not None and time.monotonic() - t0 > time_limit_s:
            status = SolveStatus.TIME_LIMIT
            break
        try:
            state, report = predictor_corrector_iteration(p, state, params)
        except NumericalFailure:
            status = SolveStatus.NUMERICAL_FAILURE
            break
        summary = violation_summary(p, KktPoint(state.x, state.y, state.z))
        history.append(
            {
                "mu": report.mu_after,
                "alpha_p": report.alpha_p,
                "alpha_d": report.alpha_d,
                "sigma": report.sigma,
                "max_violation": summary.max_violation,
            }
        )
        if report.min_alpha < params.min_step:
            status = SolveStatus.STALLED
            stall_iteration = state.iterations
            break

    stats = IpmStats(
        status=status,
        iterations=state.iterations,
        wall_seconds=time.monotonic() - t0,
        stall_iteration=stall_iteration,
        termination=termination,
        mu=state.mu,
        history=history,
    )
    return KktPoint(state.x, state.y, state.z), stats
