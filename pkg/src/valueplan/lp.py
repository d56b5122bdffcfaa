"""Symbolic selection model and LP-format export.

Builds the full mixed-binary linear model for a project: budget, precedence
and conflict rows, delivered-value lower bounds, penalty lower bounds, the
linking rows that tie the auxiliary copy g to x and the penalized values y
to the penalties, plus unit bounds and binary declarations. The text output
is CPLEX-style LP format, consumable by external solvers and by the tests
that re-evaluate every row.

Naming is fixed so the file can be parsed back: variables x{i}, g{i},
y{i}_{t}, th{i}_{t}; rows c_budget, c_prec_*, c_conf_*, c_value_{t},
c_pen_{i}_{j}_{t}, and c_glink1..4_* with _lo/_hi sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Sequence

import numpy as np

from .document import decimal_string
from .graph import InfluenceMatrix
from .model import CONFLICTS, REQUIRES, Project
from .planner import influence_stack

Number = Decimal | float | int

LESS_EQUAL = "<="
GREATER_EQUAL = ">="

BINARY = "binary"
CONTINUOUS = "continuous"


@dataclass(frozen=True)
class VariableDef:
    name: str
    kind: str
    lower: Number
    upper: Number


@dataclass(frozen=True)
class LinearRow:
    """One linear (in)equality: sum of coef * var, a sense, and a constant."""

    name: str
    terms: tuple[tuple[str, Number], ...]
    sense: str
    rhs: Number


@dataclass(frozen=True)
class IlpModel:
    variables: tuple[VariableDef, ...]
    objective: tuple[tuple[str, Number], ...]
    constraints: tuple[LinearRow, ...]

    def rows_named(self, prefix: str) -> list[LinearRow]:
        return [row for row in self.constraints if row.name.startswith(prefix)]


def _x(i: int) -> str:
    return f"x{i}"


def _g(i: int) -> str:
    return f"g{i}"


def _y(i: int, t: int) -> str:
    return f"y{i}_{t}"


def _th(i: int, t: int) -> str:
    return f"th{i}_{t}"


def build_ilp_model(
    project: Project,
    influences: np.ndarray | Sequence[InfluenceMatrix] | None = None,
) -> IlpModel:
    """Assemble the selection model for a validated project."""
    stack = influence_stack(influences, project)
    n = project.n
    t_count = project.type_count

    variables: list[VariableDef] = []
    for i in range(1, n + 1):
        variables.append(VariableDef(_x(i), BINARY, 0, 1))
        variables.append(VariableDef(_g(i), BINARY, 0, 1))
    for i in range(1, n + 1):
        for t in range(1, t_count + 1):
            variables.append(VariableDef(_y(i, t), CONTINUOUS, 0, 1))
            variables.append(VariableDef(_th(i, t), CONTINUOUS, 0, 1))

    objective: list[tuple[str, Number]] = []
    for req in project.requirements:
        value = req.expected_value(1)
        objective.append((_x(req.id), value))
        objective.append((_y(req.id, 1), -value))

    rows: list[LinearRow] = []
    rows.append(LinearRow(
        "c_budget",
        tuple((_x(r.id), r.cost) for r in project.requirements),
        LESS_EQUAL,
        project.budget,
    ))

    name_counts: dict[str, int] = {}

    def unique(name: str) -> str:
        count = name_counts.get(name, 0)
        name_counts[name] = count + 1
        return name if count == 0 else f"{name}_{count + 1}"

    for pair in project.precedences:
        if pair.kind == REQUIRES:
            rows.append(LinearRow(
                unique(f"c_prec_{pair.dependent}_{pair.prerequisite}"),
                ((_x(pair.dependent), 1), (_x(pair.prerequisite), -1)),
                LESS_EQUAL, 0,
            ))
        elif pair.kind == CONFLICTS:
            rows.append(LinearRow(
                unique(f"c_conf_{pair.dependent}_{pair.prerequisite}"),
                ((_x(pair.dependent), 1), (_x(pair.prerequisite), 1)),
                LESS_EQUAL, 1,
            ))

    for t in sorted(project.betas):
        terms: list[tuple[str, Number]] = []
        for req in project.requirements:
            value = req.expected_value(t)
            terms.append((_x(req.id), value))
            terms.append((_y(req.id, t), -value))
        rows.append(LinearRow(
            f"c_value_{t}", tuple(terms), GREATER_EQUAL, project.betas[t],
        ))

    # Penalty lower bounds: th_{i,t} >= (|I| + I)/2 - I * x_j for every
    # ordered pair i != j and every type, one row per term of the maximum.
    for t in range(1, t_count + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                influence = float(stack[t - 1, i - 1, j - 1])
                constant = (abs(influence) + influence) / 2.0
                rows.append(LinearRow(
                    f"c_pen_{i}_{j}_{t}",
                    ((_th(i, t), 1), (_x(j), influence)),
                    GREATER_EQUAL,
                    constant,
                ))

    # Linking: g mirrors x, y mirrors th for selected requirements.
    for i in range(1, n + 1):
        rows.append(LinearRow(f"c_glink1_{i}_lo",
                              ((_x(i), 1), (_g(i), 1)), GREATER_EQUAL, 0))
        rows.append(LinearRow(f"c_glink1_{i}_hi",
                              ((_x(i), 1), (_g(i), -1)), LESS_EQUAL, 0))
        rows.append(LinearRow(f"c_glink2_{i}_lo",
                              ((_x(i), 1), (_g(i), -1)), GREATER_EQUAL, 0))
        rows.append(LinearRow(f"c_glink2_{i}_hi",
                              ((_x(i), 1), (_g(i), 1)), LESS_EQUAL, 2))
    for i in range(1, n + 1):
        for t in range(1, t_count + 1):
            rows.append(LinearRow(f"c_glink3_{i}_{t}_lo",
                                  ((_y(i, t), 1), (_g(i), 1)),
                                  GREATER_EQUAL, 0))
            rows.append(LinearRow(f"c_glink3_{i}_{t}_hi",
                                  ((_y(i, t), 1), (_g(i), -1)),
                                  LESS_EQUAL, 0))
            rows.append(LinearRow(f"c_glink4_{i}_{t}_lo",
                                  ((_y(i, t), 1), (_th(i, t), -1), (_g(i), -1)),
                                  GREATER_EQUAL, -1))
            rows.append(LinearRow(f"c_glink4_{i}_{t}_hi",
                                  ((_y(i, t), 1), (_th(i, t), -1), (_g(i), 1)),
                                  LESS_EQUAL, 1))

    return IlpModel(tuple(variables), tuple(objective), tuple(rows))


def _number(value: Number) -> str:
    if isinstance(value, Decimal):
        return decimal_string(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _terms(terms: Sequence[tuple[str, Number]]) -> str:
    parts = []
    for var, coef in terms:
        sign = "-" if coef < 0 else "+"
        parts.append(f"{sign} {_number(abs(coef))} {var}")
    # A termless row can only come from a degenerate empty project; keep the
    # file parseable with a bare constant.
    return " ".join(parts) if parts else "0"


def render_lp(model: IlpModel) -> str:
    """CPLEX-style LP text for a model."""
    lines = ["Maximize", f" obj: {_terms(model.objective)}", "Subject To"]
    for row in model.constraints:
        lines.append(f" {row.name}: {_terms(row.terms)} {row.sense} {_number(row.rhs)}")
    lines.append("Bounds")
    for var in model.variables:
        if var.kind == CONTINUOUS:
            lines.append(f" {_number(var.lower)} <= {var.name} <= {_number(var.upper)}")
    lines.append("Binaries")
    for var in model.variables:
        if var.kind == BINARY:
            lines.append(f" {var.name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(
    project: Project,
    influences: np.ndarray | Sequence[InfluenceMatrix] | None = None,
) -> str:
    """Render the complete selection model in LP text format."""
    return render_lp(build_ilp_model(project, influences))
