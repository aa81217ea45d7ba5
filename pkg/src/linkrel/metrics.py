"""System-level analytics: mean TTTF, Birnbaum and improvement importance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from linkrel import numerics
from linkrel.numerics import Grid
from linkrel.rbd import (
    SystemModel,
    failure_before,
    system_hazard,
    system_pdf,
    system_survival,
)

__all__ = [
    "MeanTTTF",
    "ImportanceRow",
    "SurvivalCurve",
    "AnalysisReport",
    "DEFAULT_GRID",
    "mean_tttf",
    "birnbaum",
    "improvement",
    "importance_ranking",
    "ranked_at",
    "system_curves",
    "analyze",
]

DEFAULT_GRID = Grid(t_max=5.0, steps=500)
DEFAULT_DEADLINES = (0.5, 1.0, 2.0)


class MeanTTTF(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class ImportanceRow:
    component_name: str
    t: float
    birnbaum: float
    improvement: float


@dataclass(frozen=True)
class SurvivalCurve:
    """Sampled values of one reliability function on a grid."""

    quantity: str  # "survival", "hazard", "pdf", ...
    grid: Grid
    values: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return self.grid.points


@dataclass
class AnalysisReport:
    mean_tttf: float
    mean_tttf_error: float
    deadline_failures: list[tuple[float, float]]
    importance: list[ImportanceRow] = field(default_factory=list)
    curves: dict[str, SurvivalCurve] = field(default_factory=dict)


def mean_tttf(model: SystemModel) -> MeanTTTF:
    """Mean transmission time to failure, the integral of ``R_w`` over [0, inf)."""
    res = numerics.integrate_survival(lambda t: system_survival(model, t))
    return MeanTTTF(res.value, res.est_error)


def birnbaum(model: SystemModel, component_name: str, t):
    """``R_w`` with the component perfect minus ``R_w`` with it failed."""
    p = np.asarray(system_survival(model, t, pinned={component_name: 1.0}))
    q = np.asarray(system_survival(model, t, pinned={component_name: 0.0}))
    out = np.clip(p - q, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def improvement(model: SystemModel, component_name: str, t):
    """Survival gained by replacing the component with a perfect one."""
    p = np.asarray(system_survival(model, t, pinned={component_name: 1.0}))
    base = np.asarray(system_survival(model, t))
    out = np.clip(p - base, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _rows_at(model: SystemModel, times: np.ndarray) -> list[ImportanceRow]:
    order = {name: i for i, name in enumerate(model.names)}
    per_component = {
        c.name: (birnbaum(model, c.name, times), improvement(model, c.name, times))
        for c in model.components
    }
    rows = []
    for j, t in enumerate(times):
        for name, (b, imp) in per_component.items():
            rows.append(ImportanceRow(name, float(t), float(b[j]), float(imp[j])))
    # ties keep declaration order
    rows.sort(key=lambda r: (r.t, -r.birnbaum, order[r.component_name]))
    return rows


def importance_ranking(model: SystemModel, grid: Grid = DEFAULT_GRID) -> list[ImportanceRow]:
    """Both importance measures for every component at every grid point.

    Rows are ordered by time, then by descending Birnbaum importance.
    """
    return _rows_at(model, grid.points)


def ranked_at(model: SystemModel, times: Sequence[float]) -> list[ImportanceRow]:
    return _rows_at(model, np.asarray(times, dtype=float))


def system_curves(model: SystemModel, grid: Grid = DEFAULT_GRID) -> dict[str, SurvivalCurve]:
    t = grid.points
    return {
        "survival": SurvivalCurve("survival", grid, np.asarray(system_survival(model, t))),
        "hazard": SurvivalCurve("hazard", grid, np.asarray(system_hazard(model, t))),
        "pdf": SurvivalCurve("pdf", grid, np.asarray(system_pdf(model, t))),
    }


def analyze(
    model: SystemModel,
    grid: Grid = DEFAULT_GRID,
    deadlines: Sequence[float] = DEFAULT_DEADLINES,
    with_importance: bool = False,
) -> AnalysisReport:
    mean = mean_tttf(model)
    return AnalysisReport(
        mean_tttf=mean.value,
        mean_tttf_error=mean.error,
        deadline_failures=[(float(d), float(failure_before(model, d))) for d in deadlines],
        importance=importance_ranking(model, grid) if with_importance else [],
        curves=system_curves(model, grid),
    )
