"""Benchmark harness: per-model records, geometric-mean summaries, scatter data.

Method tags: pdhg-1e4, pdhg-1e6, pdhg-1e8 (first-order only at the given
tolerance), ipm-cold (interior point from the default start), and hybrid
(first-order warm start + interior-point refinement).  Relative runtimes are
per model against the best method on that model; geometric means aggregate
only over models the method solved.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .ipm import IpmParams, run_ipm
from .lp_core import GeneralLp, KktPoint, ViolationSummary, evaluate_general_point
from .mps_io import SolutionFile, make_solution_file, parse_mps
from .pdhg import PdhgParams, run_pdhg
from .status import SolveStatus
from .transform import PresolveStatus
from .warmstart import (
    WarmStartParams,
    _zero_point_file,
    finish_point,
    hybrid_solve,
    prepare_model,
)

THREADS_ENV = "HYBRIDLP_THREADS"

METHOD_TAGS = ("pdhg-1e4", "pdhg-1e6", "pdhg-1e8", "ipm-cold", "hybrid")
_PDHG_EPS = {"pdhg-1e4": 1e-4, "pdhg-1e6": 1e-6, "pdhg-1e8": 1e-8}

# floors applied before taking logs in geometric means
_GEO_VIOLATION_FLOOR = 1e-16
_GEO_RUNTIME_FLOOR = 1e-9

RATIO_CLAMP = 100.0
VIOLATION_CLAMP = (1e-12, 1e6)


@dataclass
class ResultRecord:
    model: str
    method: str
    status: str
    wall_seconds: float
    pdhg_iterations: int
    ipm_iterations: int
    escalations: int
    primal_inf: float
    dual_inf: float
    rel_gap: float
    max_violation: float
    scaled_max_violation: float
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.status == "Optimal"


def _record_from_solution(model: str, method: str, sol: SolutionFile,
                          scaled_violation) -> ResultRecord:
    v = sol.violation
    return ResultRecord(
        model=model,
        method=method,
        status=sol.status,
        wall_seconds=sol.wall_seconds,
        pdhg_iterations=sol.pdhg_iterations,
        ipm_iterations=sol.ipm_iterations,
        escalations=sol.escalations,
        primal_inf=v.primal_inf if v else math.nan,
        dual_inf=v.dual_inf if v else math.nan,
        rel_gap=v.rel_gap if v else math.nan,
        max_violation=v.max_violation if v else math.nan,
        scaled_max_violation=(
            scaled_violation.max_violation if scaled_violation else math.nan
        ),
        message=sol.message,
    )


def solve_with_method(
    g: GeneralLp,
    method: str,
    *,
    model_name: str = "model",
    time_limit_s: float = 10_000.0,
    eps_rel: float | None = None,
    seed: int = 0,
    use_presolve: bool = True,
    use_scaling: bool = True,
    ipm_params: IpmParams | None = None,
    ws_params: WarmStartParams | None = None,
) -> tuple[SolutionFile, ResultRecord]:
    """Run one (model, method) combination through the full pipeline."""
    if method == "hybrid":
        pdhg_params = PdhgParams(eps_rel=eps_rel or 1e-4, time_limit_s=time_limit_s)
        sol, stats = hybrid_solve(
            g, pdhg_params, ipm_params, ws_params,
            use_presolve=use_presolve, use_scaling=use_scaling, seed=seed,
            method_tag=method,
        )
        return sol, _record_from_solution(model_name, method, sol, stats.scaled_violation)

    if method in _PDHG_EPS or method == "pdhg":
        eps = eps_rel if eps_rel is not None else _PDHG_EPS.get(method, 1e-4)
        return _solve_single_phase(
            g, method, model_name, time_limit_s, seed, use_presolve, use_scaling,
            phase="pdhg", eps_rel=eps,
        )

    if method in ("ipm-cold", "ipm"):
        eps = eps_rel if eps_rel is not None else (ipm_params.eps_rel if ipm_params else 1e-8)
        return _solve_single_phase(
            g, method, model_name, time_limit_s, seed, use_presolve, use_scaling,
            phase="ipm", eps_rel=eps, ipm_params=ipm_params,
        )

    raise ValueError(f"unknown method {method!r}")


def _solve_single_phase(
    g, method, model_name, time_limit_s, seed, use_presolve, use_scaling,
    *, phase, eps_rel, ipm_params=None,
):
    t0 = time.monotonic()
    prep = prepare_model(g, use_presolve=use_presolve, use_scaling=use_scaling)
    pres = prep.presolve_result

    if pres.status is not PresolveStatus.REDUCED:
        wall = time.monotonic() - t0
        status = (
            SolveStatus.INFEASIBLE if pres.status is PresolveStatus.INFEASIBLE
            else SolveStatus.UNBOUNDED
        )
        sol = _zero_point_file(g, status, method, wall, f"presolve: {pres.message}")
        return sol, _record_from_solution(model_name, method, sol, None)

    if prep.solved_by_presolve:
        finished = finish_point(prep, KktPoint(np.zeros(0), np.zeros(0), np.zeros(0)))
        wall = time.monotonic() - t0
        sol = make_solution_file(
            g, SolveStatus.OPTIMAL, finished.x, finished.y, finished.z,
            method=method, wall_seconds=wall, violation=finished.violation,
            message="solved by presolve",
        )
        return sol, _record_from_solution(model_name, method, sol, None)

    if phase == "pdhg":
        params = PdhgParams(eps_rel=eps_rel, time_limit_s=time_limit_s)
        pt, stats = run_pdhg(prep.solve_model, params, seed=seed)
        iters = {"pdhg_iterations": stats.iterations}
        status = stats.status
    else:
        params = ipm_params or IpmParams(eps_rel=eps_rel)
        pt, stats = run_ipm(prep.solve_model, params, time_limit_s=time_limit_s)
        iters = {"ipm_iterations": stats.iterations}
        status = stats.status

    finished = finish_point(prep, pt)
    wall = time.monotonic() - t0
    message = "" if status is SolveStatus.OPTIMAL else f"{phase}: {status.value}"
    sol = make_solution_file(
        g, status, finished.x, finished.y, finished.z,
        method=method, wall_seconds=wall, violation=finished.violation,
        message=message, **iters,
    )
    record = _record_from_solution(model_name, method, sol, finished.scaled_violation)
    return sol, record


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

def geometric_mean(values) -> float | None:
    vals = [v for v in values]
    if not vals:
        return None
    return float(math.exp(sum(math.log(v) for v in vals) / len(vals)))


def relative_runtimes(records: list[ResultRecord]) -> dict[tuple[str, str], float]:
    """wall / best-wall per model, best taken over every method run on it."""
    best: dict[str, float] = {}
    for r in records:
        w = max(r.wall_seconds, _GEO_RUNTIME_FLOOR)
        best[r.model] = min(best.get(r.model, math.inf), w)
    return {
        (r.model, r.method): max(r.wall_seconds, _GEO_RUNTIME_FLOOR) / best[r.model]
        for r in records
    }


@dataclass
class MethodSummary:
    method: str
    models_run: int
    models_solved: int
    geo_relative_runtime: float | None
    geo_max_violation: float | None
    geo_ipm_iteration_ratio: float | None
    solved_in_10_ipm_iters: int | None


@dataclass
class SummaryTable:
    methods: list[MethodSummary]

    def by_method(self) -> dict[str, MethodSummary]:
        return {m.method: m for m in self.methods}


def summarize(records: list[ResultRecord]) -> SummaryTable:
    """Per-method solved counts, geometric means, and warm-start iteration ratios."""
    rel = relative_runtimes(records)
    methods = sorted({r.method for r in records}, key=lambda m: (
        METHOD_TAGS.index(m) if m in METHOD_TAGS else len(METHOD_TAGS), m
    ))
    cold_iters = {
        r.model: r.ipm_iterations
        for r in records
        if r.method == "ipm-cold" and r.solved and r.ipm_iterations > 0
    }

    rows = []
    for method in methods:
        mine = [r for r in records if r.method == method]
        solved = [r for r in mine if r.solved]
        geo_rt = geometric_mean(rel[(r.model, r.method)] for r in solved)
        geo_viol = geometric_mean(
            max(r.max_violation, _GEO_VIOLATION_FLOOR)
            for r in solved
            if not math.isnan(r.max_violation)
        )
        uses_ipm = any(r.ipm_iterations > 0 for r in mine)
        ratio = None
        if method != "ipm-cold" and uses_ipm:
            pairs = [
                r.ipm_iterations / cold_iters[r.model]
                for r in solved
                if r.model in cold_iters and r.ipm_iterations > 0
            ]
            ratio = geometric_mean(pairs)
        ten = None
        if uses_ipm:
            ten = sum(1 for r in solved if 0 < r.ipm_iterations <= 10)
        rows.append(
            MethodSummary(
                method=method,
                models_run=len(mine),
                models_solved=len(solved),
                geo_relative_runtime=geo_rt,
                geo_max_violation=geo_viol,
                geo_ipm_iteration_ratio=ratio,
                solved_in_10_ipm_iters=ten,
            )
        )
    return SummaryTable(rows)


def format_summary(table: SummaryTable) -> str:
    """Aligned text table: solved counts, runtimes, violations, iteration stats."""
    def cell(v, fmt="{:.3g}"):
        if v is None:
            return "-"
        return fmt.format(v)

    headers = ["", *[m.method for m in table.methods]]
    rows = [
        ["Models run", *[str(m.models_run) for m in table.methods]],
        ["Models solved", *[str(m.models_solved) for m in table.methods]],
        ["Relative runtime", *[cell(m.geo_relative_runtime) for m in table.methods]],
        ["Mean max violation", *[cell(m.geo_max_violation, "{:.2e}") for m in table.methods]],
        ["IPM iter ratio vs cold", *[cell(m.geo_ipm_iteration_ratio) for m in table.methods]],
        ["Solved in <=10 IPM iters", *[
            "-" if m.solved_in_10_ipm_iters is None else str(m.solved_in_10_ipm_iters)
            for m in table.methods
        ]],
    ]
    widths = [max(len(r[i]) for r in [headers] + rows) for i in range(len(headers))]
    lines = []
    for r in [headers] + rows:
        lines.append("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# CSV schemas
# ---------------------------------------------------------------------------

_RECORD_FIELDS = [f.name for f in fields(ResultRecord)]


def write_records_csv(records: list[ResultRecord], stream) -> None:
    w = csv.writer(stream)
    w.writerow(_RECORD_FIELDS)
    for r in sorted(records, key=lambda r: (r.model, r.method)):
        w.writerow([getattr(r, name) for name in _RECORD_FIELDS])


def read_records_csv(stream) -> list[ResultRecord]:
    reader = csv.DictReader(stream)
    out = []
    for row in reader:
        out.append(
            ResultRecord(
                model=row["model"],
                method=row["method"],
                status=row["status"],
                wall_seconds=float(row["wall_seconds"]),
                pdhg_iterations=int(row["pdhg_iterations"]),
                ipm_iterations=int(row["ipm_iterations"]),
                escalations=int(row["escalations"]),
                primal_inf=float(row["primal_inf"]),
                dual_inf=float(row["dual_inf"]),
                rel_gap=float(row["rel_gap"]),
                max_violation=float(row["max_violation"]),
                scaled_max_violation=float(row["scaled_max_violation"]),
                message=row.get("message", ""),
            )
        )
    return out


@dataclass
class ScatterRow:
    model: str
    method: str
    relative_runtime: float
    max_violation: float


def scatter_export(records: list[ResultRecord]) -> list[ScatterRow]:
    """Clamped (relative runtime, max violation) pairs for scatter plotting.

    Runtime ratios above 100 are reported as 100; violations are clamped
    into [1e-12, 1e6]; unsolved models are emitted with violation 1e6.
    """
    if not records:
        raise ValueError("no records to export")
    rel = relative_runtimes(records)
    lo, hi = VIOLATION_CLAMP
    rows = []
    for r in sorted(records, key=lambda r: (r.model, r.method)):
        ratio = min(rel[(r.model, r.method)], RATIO_CLAMP)
        if r.solved and not math.isnan(r.max_violation):
            viol = min(max(r.max_violation, lo), hi)
        else:
            viol = hi
        rows.append(ScatterRow(r.model, r.method, ratio, viol))
    return rows


def write_scatter_csv(rows: list[ScatterRow], stream) -> None:
    w = csv.writer(stream)
    w.writerow(["model", "method", "relative_runtime", "max_violation"])
    for r in rows:
        w.writerow([r.model, r.method, r.relative_runtime, r.max_violation])


# ---------------------------------------------------------------------------
# Directory benchmark and the solution checker
# ---------------------------------------------------------------------------

def bench_directory(
    directory: str,
    methods: list[str],
    *,
    time_limit_s: float = 10_000.0,
    seed: int = 0,
    use_presolve: bool = True,
    use_scaling: bool = True,
) -> list[ResultRecord]:
    """One record per (model, method); unreadable models become Error rows."""
    paths = sorted(
        os.path.join(directory, f)
        for f in os.listdir(directory)
        if f.lower().endswith(".mps")
    )
    jobs = []
    for path in paths:
        name = os.path.splitext(os.path.basename(path))[0]
        for method in methods:
            jobs.append((path, name, method))

    def run(job):
        path, name, method = job
        try:
            with open(path) as fh:
                g = parse_mps(fh.read())
            _, record = solve_with_method(
                g, method, model_name=name, time_limit_s=time_limit_s, seed=seed,
                use_presolve=use_presolve, use_scaling=use_scaling,
            )
            return record
        except Exception as exc:  # unreadable model: record and continue
            return ResultRecord(
                model=name, method=method, status="Error",
                wall_seconds=0.0, pdhg_iterations=0, ipm_iterations=0,
                escalations=0, primal_inf=math.nan, dual_inf=math.nan,
                rel_gap=math.nan, max_violation=math.nan,
                scaled_max_violation=math.nan, message=str(exc),
            )

    workers = int(os.environ.get(THREADS_ENV, "1") or "1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run, jobs))
    else:
        records = [run(job) for job in jobs]
    return sorted(records, key=lambda r: (r.model, r.method))


def check_solution(g: GeneralLp, sol: SolutionFile) -> ViolationSummary:
    """Recompute the violation of a stored solution on the original model."""
    if sol.var_names != g.variable_names() or sol.row_names != g.constraint_names():
        raise ValueError("solution file does not match this model's rows/columns")
    return evaluate_general_point(g, sol.x, sol.y)
