"""Core LP data model: general and standard forms, residuals, and KKT metrics.

The canonical solver form is the pure standard form

    min c'x  s.t.  A x = b,  x >= 0

and every richer model (inequalities, bounds, free variables) is mapped onto
it by :func:`to_standard_form`.  The mapping is invertible through a
:class:`StandardFormMap`, which also knows how to embed a general-model point
back into the standard space so that feasibility violations can be measured
on the model the user actually wrote.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

LE = "<="
GE = ">="
EQ = "="
SENSES = (LE, GE, EQ)


class InvalidModelError(ValueError):
    """A model (or point) violates one of its structural invariants."""


def _as_float_array(v, n=None) -> np.ndarray:
    a = np.asarray(v, dtype=float).ravel()
    if n is not None and a.size != n:
        raise InvalidModelError(f"expected array of length {n}, got {a.size}")
    return a


@dataclass
class GeneralLp:
    """A minimization LP with row senses and variable bounds.

    min c'x + obj_offset  s.t.  A[i,:] x (<=, >=, =) rhs[i],  lower <= x <= upper
    """

    c: np.ndarray
    A: sp.csr_matrix
    senses: list
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    obj_offset: float = 0.0
    col_names: list | None = None
    row_names: list | None = None

    def __post_init__(self):
        self.A = sp.csr_matrix(self.A, dtype=float)
        m, n = self.A.shape
        self.c = _as_float_array(self.c, n)
        self.rhs = _as_float_array(self.rhs, m)
        self.lower = _as_float_array(self.lower, n)
        self.upper = _as_float_array(self.upper, n)
        self.senses = list(self.senses)
        if len(self.senses) != m:
            raise InvalidModelError(f"expected {m} senses, got {len(self.senses)}")

    @property
    def n_vars(self) -> int:
        return self.A.shape[1]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def validate(self) -> None:
        """Raise InvalidModelError on non-finite data or crossed bounds."""
        if not np.all(np.isfinite(self.c)):
            raise InvalidModelError("objective coefficients must be finite")
        if not np.all(np.isfinite(self.rhs)):
            raise InvalidModelError("right-hand sides must be finite")
        if not np.all(np.isfinite(self.A.data)):
            raise InvalidModelError("matrix entries must be finite")
        bad = [s for s in self.senses if s not in SENSES]
        if bad:
            raise InvalidModelError(f"unknown row sense {bad[0]!r}")
        crossed = np.nonzero(self.lower > self.upper)[0]
        if crossed.size:
            j = int(crossed[0])
            raise InvalidModelError(
                f"variable {j} has lower bound {self.lower[j]} above upper bound {self.upper[j]}"
            )

    def objective_value(self, x) -> float:
        return float(self.c @ np.asarray(x, dtype=float)) + self.obj_offset

    def variable_names(self) -> list:
        if self.col_names is not None:
            return list(self.col_names)
        return [f"x{j}" for j in range(self.n_vars)]

    def constraint_names(self) -> list:
        if self.row_names is not None:
            return list(self.row_names)
        return [f"r{i}" for i in range(self.n_rows)]


@dataclass
class StandardLp:
    """min c'x s.t. Ax = b, x >= 0, with both row- and column-wise access to A."""

    A: sp.csr_matrix
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.A = sp.csr_matrix(self.A, dtype=float)
        m, n = self.A.shape
        self.b = _as_float_array(self.b, m)
        self.c = _as_float_array(self.c, n)
        if not (np.all(np.isfinite(self.b)) and np.all(np.isfinite(self.c))):
            raise InvalidModelError("b and c must be finite")
        if not np.all(np.isfinite(self.A.data)):
            raise InvalidModelError("matrix entries must be finite")
        self._csc = None

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def A_csc(self) -> sp.csc_matrix:
        """Column-oriented copy of A; transpose products are as common as Ax."""
        if self._csc is None:
            self._csc = self.A.tocsc()
        return self._csc

    def at_y(self, y: np.ndarray) -> np.ndarray:
        """A'y via the column-oriented copy."""
        return self.A_csc.T @ y


@dataclass
class KktPoint:
    """Primal solution x, dual solution y, reduced costs z."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        self.x = _as_float_array(self.x)
        self.y = _as_float_array(self.y)
        self.z = _as_float_array(self.z)

    def copy(self) -> "KktPoint":
        return KktPoint(self.x.copy(), self.y.copy(), self.z.copy())

    def is_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.x))
            and np.all(np.isfinite(self.y))
            and np.all(np.isfinite(self.z))
        )


@dataclass
class Residuals:
    """r_p = b - Ax, r_d = c - A'y - z, plus objective values and x'z."""

    r_p: np.ndarray
    r_d: np.ndarray
    primal_obj: float
    dual_obj: float
    comp: float


@dataclass
class TerminationCheck:
    """Outcome of the three relative convergence inequalities.

    Each criterion is reported as (left side, right side) so callers can see
    the margins, not just the verdict.
    """

    ok: bool
    primal_lhs: float
    primal_rhs: float
    dual_lhs: float
    dual_rhs: float
    gap_lhs: float
    gap_rhs: float

    @property
    def primal_ok(self) -> bool:
        return self.primal_lhs <= self.primal_rhs

    @property
    def dual_ok(self) -> bool:
        return self.dual_lhs <= self.dual_rhs

    @property
    def gap_ok(self) -> bool:
        return self.gap_lhs <= self.gap_rhs


@dataclass
class ViolationSummary:
    """Infinity-norm infeasibilities and the relative complementarity gap.

    max_violation is the maximum of the three components.  rel_gap can be
    negative only when x'z is negative; that case is flagged, never clamped.
    """

    primal_inf: float
    dual_inf: float
    rel_gap: float
    max_violation: float
    comp_negative: bool = False


@dataclass
class StandardFormMap:
    """Invertible record of a GeneralLp -> StandardLp conversion.

    Columns are laid out as [structural | row slacks | bound-row slacks] and
    rows as [general rows | bound rows].  ``obj_shift`` is the constant such
    that c_std'x_std + obj_shift equals the general objective (including the
    general model's own offset).
    """

    n_general: int
    m_general: int
    n_std: int
    m_std: int
    obj_shift: float
    shifts: np.ndarray          # per general var, 0.0 for split variables
    pos_col: np.ndarray         # structural column of each general var
    neg_col: np.ndarray         # second column of a split variable, else -1
    slack_of_row: np.ndarray    # per std row: slack column index or -1
    slack_coef: np.ndarray      # per std row: +1 / -1 coefficient of that slack
    bound_var: np.ndarray       # per std row: general var of a bound row, else -1

    def slack_columns(self) -> np.ndarray:
        return self.slack_of_row[self.slack_of_row >= 0]


def to_standard_form(g: GeneralLp) -> tuple[StandardLp, StandardFormMap]:
    """Convert a GeneralLp to pure standard form.

    Finite lower bounds are shifted to zero (b adjusted, constant recorded),
    variables with no lower bound are split into a difference of two
    nonnegative columns, finite upper bounds become explicit rows with slack
    columns, and inequality rows gain slack (<=) or surplus (>=) columns.
    """
    g.validate()
    m, n = g.n_rows, g.n_vars
    A_csc = g.A.tocsc()

    shifts = np.zeros(n)
    pos_col = np.full(n, -1, dtype=int)
    neg_col = np.full(n, -1, dtype=int)

    rows_ij = []
    cols_ij = []
    vals = []
    c_std = []
    obj_shift = g.obj_offset
    b_work = g.rhs.copy()

    next_col = 0
    for j in range(n):
        start, end = A_csc.indptr[j], A_csc.indptr[j + 1]
        col_rows = A_csc.indices[start:end]
        col_vals = A_csc.data[start:end]
        lo = g.lower[j]
        if np.isfinite(lo):
            pos_col[j] = next_col
            shifts[j] = lo
            rows_ij.extend(col_rows)
            cols_ij.extend([next_col] * col_rows.size)
            vals.extend(col_vals)
            c_std.append(g.c[j])
            if lo != 0.0:
                b_work[col_rows] -= col_vals * lo
                obj_shift += g.c[j] * lo
            next_col += 1
        else:
            pos_col[j] = next_col
            neg_col[j] = next_col + 1
            rows_ij.extend(col_rows)
            cols_ij.extend([next_col] * col_rows.size)
            vals.extend(col_vals)
            rows_ij.extend(col_rows)
            cols_ij.extend([next_col + 1] * col_rows.size)
            vals.extend(-col_vals)
            c_std.extend([g.c[j], -g.c[j]])
            next_col += 2

    # inequality rows get a slack / surplus column each
    row_slack_col = {}
    for i, sense in enumerate(g.senses):
        if sense == EQ:
            continue
        coef = 1.0 if sense == LE else -1.0
        rows_ij.append(i)
        cols_ij.append(next_col)
        vals.append(coef)
        c_std.append(0.0)
        row_slack_col[i] = (next_col, coef)
        next_col += 1

    # finite upper bounds become rows x_j (+ slack) = upper - shift
    b_extra = []
    bound_rows = []
    next_row = m
    for j in range(n):
        up = g.upper[j]
        if not np.isfinite(up):
            continue
        rows_ij.append(next_row)
        cols_ij.append(pos_col[j])
        vals.append(1.0)
        if neg_col[j] >= 0:
            rows_ij.append(next_row)
            cols_ij.append(neg_col[j])
            vals.append(-1.0)
        rows_ij.append(next_row)
        cols_ij.append(next_col)
        vals.append(1.0)
        c_std.append(0.0)
        row_slack_col[next_row] = (next_col, 1.0)
        bound_rows.append((next_row, j))
        b_extra.append(up - shifts[j])
        next_col += 1
        next_row += 1

    m_std, n_std = next_row, next_col
    A_std = sp.csr_matrix(
        (np.asarray(vals, dtype=float), (rows_ij, cols_ij)), shape=(m_std, n_std)
    )
    b_std = np.concatenate([b_work, np.asarray(b_extra, dtype=float)])

    slack_of_row = np.full(m_std, -1, dtype=int)
    slack_coef = np.zeros(m_std)
    for i, (col, coef) in row_slack_col.items():
        slack_of_row[i] = col
        slack_coef[i] = coef
    bound_var = np.full(m_std, -1, dtype=int)
    for r, j in bound_rows:
        bound_var[r] = j

    fmap = StandardFormMap(
        n_general=n,
        m_general=m,
        n_std=n_std,
        m_std=m_std,
        obj_shift=float(obj_shift),
        shifts=shifts,
        pos_col=pos_col,
        neg_col=neg_col,
        slack_of_row=slack_of_row,
        slack_coef=slack_coef,
        bound_var=bound_var,
    )
    return StandardLp(A_std, b_std, np.asarray(c_std, dtype=float)), fmap


def restrict_point(g: GeneralLp, fmap: StandardFormMap, pt: KktPoint):
    """Map a standard-form point back to (x, y, z) over the general model.

    z is the general reduced cost c - A'y; dual values of bound rows are
    folded away (they reappear, if needed, through lift_point).
    """
    if pt.x.size != fmap.n_std or pt.y.size != fmap.m_std:
        raise InvalidModelError("point does not match the standard form of this map")
    x = pt.x[fmap.pos_col] + fmap.shifts
    split = fmap.neg_col >= 0
    if split.any():
        x = np.where(split, pt.x[fmap.pos_col] - pt.x[np.maximum(fmap.neg_col, 0)], x)
    y = pt.y[: fmap.m_general].copy()
    z = g.c - g.A.T @ y
    return x, y, np.asarray(z)


def lift_point(
    g: GeneralLp, p: StandardLp, fmap: StandardFormMap, x: np.ndarray, y: np.ndarray
) -> KktPoint:
    """Embed a general-model point into the standard form for measurement.

    Structural entries come from the shift/split mapping (clamped at zero so
    bound violations surface in the equality residuals), slack entries are
    the clamped row activities, bound-row duals are min(0, reduced cost), and
    z = max(0, c - A'y).  An exactly optimal general point lifts to an
    exactly optimal standard point.
    """
    x = _as_float_array(x, fmap.n_general)
    y = _as_float_array(y, fmap.m_general)

    x_std = np.zeros(fmap.n_std)
    shifted = x - fmap.shifts
    split = fmap.neg_col >= 0
    x_std[fmap.pos_col] = np.maximum(shifted, 0.0)
    if split.any():
        x_std[fmap.neg_col[split]] = np.maximum(-shifted[split], 0.0)

    # slack values from row activities, clamped to stay feasible in sign
    r = p.b - p.A @ x_std
    has_slack = fmap.slack_of_row >= 0
    rows = np.nonzero(has_slack)[0]
    for i in rows:
        col = fmap.slack_of_row[i]
        coef = fmap.slack_coef[i]
        x_std[col] = max(0.0, r[i] / coef)

    y_std = np.zeros(fmap.m_std)
    y_std[: fmap.m_general] = y
    bound_rows = np.nonzero(fmap.bound_var >= 0)[0]
    if bound_rows.size:
        z_gen = g.c - g.A.T @ y
        for i in bound_rows:
            y_std[i] = min(0.0, z_gen[fmap.bound_var[i]])

    z_std = np.maximum(0.0, p.c - p.at_y(y_std))
    return KktPoint(x_std, y_std, z_std)


def residuals(p: StandardLp, pt: KktPoint) -> Residuals:
    """Primal and dual residual vectors plus objectives and complementarity."""
    if pt.x.size != p.n or pt.y.size != p.m or pt.z.size != p.n:
        raise InvalidModelError(
            f"point dims ({pt.x.size}, {pt.y.size}, {pt.z.size}) do not match model ({p.n}, {p.m})"
        )
    r_p = p.b - p.A @ pt.x
    r_d = p.c - p.at_y(pt.y) - pt.z
    return Residuals(
        r_p=np.asarray(r_p),
        r_d=np.asarray(r_d),
        primal_obj=float(p.c @ pt.x),
        dual_obj=float(p.b @ pt.y),
        comp=float(pt.x @ pt.z),
    )


def check_relative_termination(
    p: StandardLp, pt: KktPoint, eps_rel: float
) -> TerminationCheck:
    """The three relative optimality inequalities in the 2-norm.

    ||r_p||_2 <= eps (1 + ||b||_2), ||r_d||_2 <= eps (1 + ||c||_2), and
    |c'x - b'y| <= eps (1 + |c'x| + |b'y|).
    """
    if eps_rel <= 0:
        raise ValueError("eps_rel must be positive")
    res = residuals(p, pt)
    p_lhs = float(np.linalg.norm(res.r_p)) if res.r_p.size else 0.0
    d_lhs = float(np.linalg.norm(res.r_d)) if res.r_d.size else 0.0
    p_rhs = eps_rel * (1.0 + (float(np.linalg.norm(p.b)) if p.b.size else 0.0))
    d_rhs = eps_rel * (1.0 + (float(np.linalg.norm(p.c)) if p.c.size else 0.0))
    gap_lhs = abs(res.primal_obj - res.dual_obj)
    gap_rhs = eps_rel * (1.0 + abs(res.primal_obj) + abs(res.dual_obj))
    ok = p_lhs <= p_rhs and d_lhs <= d_rhs and gap_lhs <= gap_rhs
    return TerminationCheck(ok, p_lhs, p_rhs, d_lhs, d_rhs, gap_lhs, gap_rhs)


def violation_summary(p: StandardLp, pt: KktPoint) -> ViolationSummary:
    """Max primal/dual infeasibility (infinity norms) and relative gap.

    Evaluated on exactly the model it is given; callers who want violations
    on the user's model must lift the point into that model's standard form
    first (see lift_point).
    """
    res = residuals(p, pt)
    primal_inf = float(np.max(np.abs(res.r_p))) if res.r_p.size else 0.0
    dual_inf = float(np.max(np.abs(res.r_d))) if res.r_d.size else 0.0
    rel_gap = res.comp / (1.0 + abs(res.primal_obj))
    return ViolationSummary(
        primal_inf=primal_inf,
        dual_inf=dual_inf,
        rel_gap=rel_gap,
        max_violation=max(primal_inf, dual_inf, rel_gap),
        comp_negative=res.comp < 0,
    )


def evaluate_general_point(g: GeneralLp, x, y) -> ViolationSummary:
    """Violation of a general-model point, measured on that model's standard form."""
    p, fmap = to_standard_form(g)
    pt = lift_point(g, p, fmap, x, y)
    return violation_summary(p, pt)
