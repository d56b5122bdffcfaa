"""Core domain types for release-plan projects and structural validation.

Money and value amounts are decimals at the model boundary so budget
feasibility never depends on binary float rounding; only graph strengths and
derived penalties live in float space. All types are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Mapping

from .graph import TypedValueGraph

REQUIRES = "requires"
CONFLICTS = "conflicts"
PRECEDENCE_KINDS = (REQUIRES, CONFLICTS)

ECONOMIC_TYPE = 1


@dataclass(frozen=True)
class ValueType:
    """One entry of the value-type catalog; index 1 is the economic type."""

    index: int
    name: str


@dataclass(frozen=True)
class Requirement:
    """A candidate feature with a cost and one expected value per type."""

    id: int
    label: str
    cost: Decimal
    expected_values: tuple[Decimal, ...]

    def expected_value(self, value_type: int) -> Decimal:
        return self.expected_values[value_type - 1]


@dataclass(frozen=True)
class PrecedencePair:
    """A requires/conflicts relation constraining co-selection.

    ``requires``: the dependent can only be selected together with its
    prerequisite. ``conflicts``: the two can never be selected together.
    """

    dependent: int
    prerequisite: int
    kind: str


@dataclass(frozen=True)
class Project:
    """A complete planning instance.

    ``graphs`` holds exactly one typed value graph per value type, in catalog
    order. ``betas`` maps non-economic type indices to delivered-value lower
    bounds; type 1 is optimized, never bounded.
    """

    requirements: tuple[Requirement, ...]
    value_types: tuple[ValueType, ...]
    graphs: tuple[TypedValueGraph, ...]
    precedences: tuple[PrecedencePair, ...]
    budget: Decimal
    betas: Mapping[int, Decimal]

    @property
    def n(self) -> int:
        return len(self.requirements)

    @property
    def type_count(self) -> int:
        return len(self.value_types)


@dataclass(frozen=True)
class Violation:
    """One broken structural rule: the field it lives on, the rule, and ids."""

    field: str
    rule: str
    ids: tuple
    message: str

    def __str__(self) -> str:
        return self.message


def _violation(field: str, rule: str, ids: tuple, message: str) -> Violation:
    return Violation(field, rule, ids, message)


def validate_project(project: Project) -> list[Violation]:
    """Check every structural invariant; an empty list means the project is valid.

    Pure: never mutates or raises. A project that validates cleanly satisfies
    the preconditions of every downstream operation in this package.
    """
    out: list[Violation] = []
    t_count = project.type_count

    if t_count < 1:
        out.append(_violation(
            "value_types", "at-least-one-type", (),
            "a project needs at least the economic value type",
        ))
    for position, vt in enumerate(project.value_types):
        if vt.index != position + 1:
            out.append(_violation(
                "value_types", "contiguous-indices", (vt.index,),
                f"value type at position {position} has index {vt.index}, "
                f"expected {position + 1}",
            ))

    n = project.n
    ids = set()
    for position, req in enumerate(project.requirements):
        if req.id != position + 1:
            out.append(_violation(
                "requirements", "dense-ids", (req.id,),
                f"requirement at position {position} has id {req.id}, "
                f"expected {position + 1}",
            ))
        ids.add(req.id)
        if len(req.expected_values) != t_count:
            out.append(_violation(
                "requirements", "expected-values-length", (req.id,),
                f"requirement {req.id} has {len(req.expected_values)} expected "
                f"values, expected {t_count}",
            ))
        if req.cost < 0:
            out.append(_violation(
                "requirements", "nonnegative-cost", (req.id,),
                f"requirement {req.id} has negative cost {req.cost}",
            ))
        for t_index, value in enumerate(req.expected_values, start=1):
            if value < 0:
                out.append(_violation(
                    "requirements", "nonnegative-value", (req.id, t_index),
                    f"requirement {req.id} has negative expected value for "
                    f"type {t_index}",
                ))

    seen_kinds: dict[tuple[int, int], set[str]] = {}
    for pair in project.precedences:
        if pair.kind not in PRECEDENCE_KINDS:
            out.append(_violation(
                "precedences", "known-kind", (pair.dependent, pair.prerequisite),
                f"precedence pair ({pair.dependent}, {pair.prerequisite}) has "
                f"unknown kind {pair.kind!r}",
            ))
            continue
        if pair.dependent == pair.prerequisite:
            out.append(_violation(
                "precedences", "distinct-requirements", (pair.dependent,),
                f"precedence pair ({pair.dependent}, {pair.prerequisite}) "
                "relates a requirement to itself",
            ))
        for rid in (pair.dependent, pair.prerequisite):
            if rid not in ids:
                out.append(_violation(
                    "precedences", "existing-requirement",
                    (pair.dependent, pair.prerequisite),
                    f"precedence pair ({pair.dependent}, {pair.prerequisite}) "
                    f"references unknown requirement {rid}",
                ))
        kinds = seen_kinds.setdefault((pair.dependent, pair.prerequisite), set())
        if pair.kind not in kinds and kinds:
            out.append(_violation(
                "precedences", "requires-conflicts-exclusive",
                (pair.dependent, pair.prerequisite),
                f"pair ({pair.dependent}, {pair.prerequisite}) is listed as "
                "both requires and conflicts",
            ))
        kinds.add(pair.kind)

    if len(project.graphs) != t_count:
        out.append(_violation(
            "graphs", "one-graph-per-type",
            tuple(g.value_type for g in project.graphs),
            f"project has {len(project.graphs)} graphs for {t_count} value types",
        ))
    for position, graph in enumerate(project.graphs):
        if position < t_count and graph.value_type != position + 1:
            out.append(_violation(
                "graphs", "graph-type-order", (graph.value_type,),
                f"graph at position {position} is for type {graph.value_type}, "
                f"expected {position + 1}",
            ))
        if graph.n != n:
            out.append(_violation(
                "graphs", "node-set-matches-requirements", (graph.value_type,),
                f"graph for type {graph.value_type} has {graph.n} nodes for "
                f"{n} requirements",
            ))
        for (i, j), dep in graph.edges.items():
            edge_ids = (graph.value_type, i, j)
            if i == j:
                out.append(_violation(
                    "graphs", "no-self-edges", edge_ids,
                    f"graph for type {graph.value_type} has a self-edge on r{i}",
                ))
            if i not in ids or j not in ids:
                out.append(_violation(
                    "graphs", "edge-endpoints-exist", edge_ids,
                    f"edge ({i}, {j}) in graph for type {graph.value_type} "
                    "references an unknown requirement",
                ))
            if not 0 < dep.strength <= 1:
                out.append(_violation(
                    "graphs", "strength-range", edge_ids,
                    f"edge ({i}, {j}) in graph for type {graph.value_type} has "
                    f"strength {dep.strength}, expected within (0, 1]",
                ))

    if project.budget < 0:
        out.append(_violation(
            "budget", "nonnegative-budget", (),
            f"budget {project.budget} is negative",
        ))

    for t, bound in project.betas.items():
        if t == ECONOMIC_TYPE:
            out.append(_violation(
                "betas", "economic-type-unbounded", (t,),
                "the economic type is optimized, not bounded; remove beta for type 1",
            ))
        elif not 1 <= t <= t_count:
            out.append(_violation(
                "betas", "existing-type", (t,),
                f"beta references unknown value type {t}",
            ))
        if bound < 0:
            out.append(_violation(
                "betas", "nonnegative-beta", (t,),
                f"beta for type {t} is negative",
            ))

    return out


def check_project(project: Project) -> Project:
    """Validation helper that raises on the first trouble instead of reporting.

    Raises ValueError listing all violations; returns the project unchanged
    when it is structurally valid.
    """
    violations = validate_project(project)
    if violations:
        lines = "; ".join(v.message for v in violations)
        raise ValueError(f"invalid project: {lines}")
    return project
