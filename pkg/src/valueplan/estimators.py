"""Estimator-style front doors over the functional core.

Both classes follow the scikit-learn protocol (get_params/set_params, fit
returning self, fitted attributes with trailing underscores) so they slot
into pipelines and tooling that expect it. They add no mathematics of their
own.
"""

from __future__ import annotations

from dataclasses import replace
from decimal import Decimal
from typing import Iterable, Mapping

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .graph import TypedValueGraph, influence_matrix, signed_closure
from .model import Project, check_project
from .planner import (
    DEFAULT_TIMEOUT,
    OPTIMAL,
    SolveReport,
    project_influences,
    solve_exact,
)


def _as_graphs(X) -> list[TypedValueGraph]:
    if isinstance(X, Project):
        return list(X.graphs)
    if isinstance(X, TypedValueGraph):
        return [X]
    if isinstance(X, Iterable):
        graphs = list(X)
        if all(isinstance(g, TypedValueGraph) for g in graphs):
            return graphs
    raise TypeError(
        "expected a Project, a TypedValueGraph, or an iterable of them"
    )


class InfluenceTransformer(BaseEstimator, TransformerMixin):
    """Maps typed value graphs to their net influence matrices.

    Stateless: ``transform`` recomputes from its input; ``fit`` only
    validates. Output is a (T, n, n) array in [-1, 1] where entry (t, i, j)
    is how requirement j+1 affects the type-(t+1) value of requirement i+1.
    """

    def fit(self, X, y=None):
        if isinstance(X, Project):
            check_project(X)
        else:
            _as_graphs(X)
        return self

    def transform(self, X) -> np.ndarray:
        graphs = _as_graphs(X)
        return np.stack(
            [influence_matrix(signed_closure(g)).values for g in graphs]
        ) if graphs else np.zeros((0, 0, 0))


class ReleasePlanner(BaseEstimator):
    """Exact requirement selection as an estimator.

    Parameters override the project document: ``budget`` and ``betas``
    replace the stored values when given, ``timeout`` caps the search.
    ``fit`` solves and exposes the result through fitted attributes;
    ``predict`` returns the binary selection vector for a project without
    touching fitted state.
    """

    def __init__(
        self,
        budget: Decimal | int | str | None = None,
        betas: Mapping[int, Decimal | int | str] | None = None,
        timeout: float = DEFAULT_TIMEOUT,
    ):
        self.budget = budget
        self.betas = betas
        self.timeout = timeout

    def _effective(self, project: Project) -> Project:
        changes = {}
        if self.budget is not None:
            changes["budget"] = Decimal(str(self.budget))
        if self.betas is not None:
            changes["betas"] = {
                int(t): Decimal(str(v)) for t, v in self.betas.items()
            }
        return replace(project, **changes) if changes else project

    def _solve(self, project: Project) -> tuple[Project, np.ndarray, SolveReport]:
        effective = check_project(self._effective(project))
        influences = project_influences(effective)
        report = solve_exact(effective, influences, timeout=self.timeout)
        return effective, influences, report

    def fit(self, X: Project, y=None):
        _, influences, report = self._solve(X)
        self.influence_ = influences
        self.report_ = report
        self.status_ = report.status
        if report.plan is not None:
            self.selection_ = np.array(report.plan.selection, dtype=int)
            self.objective_ = report.plan.objective
            self.penalties_ = report.plan.penalties
            self.delivered_ = report.plan.delivered
        else:
            self.selection_ = None
            self.objective_ = None
            self.penalties_ = None
            self.delivered_ = None
        return self

    def predict(self, X: Project) -> np.ndarray:
        """Optimal binary selection for a project under this planner's params."""
        _, _, report = self._solve(X)
        if report.plan is None:
            raise ValueError(f"no feasible plan: status {report.status}")
        if report.status != OPTIMAL:
            raise ValueError(f"search ended without proof: status {report.status}")
        return np.array(report.plan.selection, dtype=int)
