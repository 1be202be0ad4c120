"""Solver outcome statuses shared across modules."""

from __future__ import annotations

import enum


class SolveStatus(enum.Enum):
    OPTIMAL = "Optimal"
    TIME_LIMIT = "TimeLimit"
    STALLED = "Stalled"
    ITERATION_LIMIT = "IterationLimit"
    NUMERICAL_FAILURE = "NumericalFailure"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ERROR = "Error"


# statuses a solution file can carry; everything else folds into Error with
# the original status preserved in the message field
_FILE_LEVEL = {
    SolveStatus.OPTIMAL: "Optimal",
    SolveStatus.TIME_LIMIT: "TimeLimit",
    SolveStatus.STALLED: "Stalled",
    SolveStatus.ITERATION_LIMIT: "IterationLimit",
}


def file_status(status: SolveStatus) -> str:
    return _FILE_LEVEL.get(status, "Error")
