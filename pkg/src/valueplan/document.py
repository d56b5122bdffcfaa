"""Project document format: JSON with exact decimal numbers.

Documents are parsed with decimal semantics for every number so costs,
budgets, and bounds survive the trip without float rounding. Serialization
is canonical: sorted keys, requirements by id, edges by (type, from, to),
normalized number spellings. Two equal projects always serialize to
byte-identical documents.
"""

from __future__ import annotations

import json
from decimal import Decimal, InvalidOperation
from typing import Any

from .graph import ExplicitDependency, TypedValueGraph, sign_from_label, sign_label
from .model import (
    PRECEDENCE_KINDS,
    PrecedencePair,
    Project,
    Requirement,
    ValueType,
    Violation,
    validate_project,
)


class DocumentError(ValueError):
    """Base for everything that can go wrong with a project document."""


class ParseError(DocumentError):
    """Malformed document: bad syntax or a structure the schema rejects."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class ValidationFailure(DocumentError):
    """Well-formed document whose project breaks structural invariants."""

    def __init__(self, violations: list[Violation]):
        super().__init__(
            "; ".join(v.message for v in violations) or "project is invalid"
        )
        self.violations = violations


def decimal_string(value: Decimal) -> str:
    """Canonical plain spelling of a decimal: no exponent, no trailing zeros."""
    return format(value.normalize(), "f")


def canonical_json(value: Any, indent: int = 0) -> str:
    """Deterministic JSON with decimals written as exact numeric literals."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {canonical_json(v, indent + 1)}"
            for k, v in sorted(value.items())
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [f"{inner}{canonical_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(value, Decimal):
        return decimal_string(value)
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, float, str)):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def machine_json(value: Any) -> str:
    """Compact deterministic JSON for machine-readable payloads."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


_TOP_LEVEL = {
    "requirements", "value_types", "graphs", "precedences", "budget", "betas",
}


def _require(obj: Any, kind: type, where: str) -> Any:
    names = {dict: "object", list: "array", str: "string"}
    if not isinstance(obj, kind) or isinstance(obj, bool):
        raise ParseError(f"{where} must be a JSON {names.get(kind, kind.__name__)}")
    return obj


def _decimal(obj: Any, where: str) -> Decimal:
    if isinstance(obj, Decimal):
        return obj
    if isinstance(obj, int) and not isinstance(obj, bool):
        return Decimal(obj)
    raise ParseError(f"{where} must be a number")


def _int(obj: Any, where: str) -> int:
    if isinstance(obj, int) and not isinstance(obj, bool):
        return obj
    raise ParseError(f"{where} must be an integer")


def _fields(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(
            f"{where} has unknown field(s): {', '.join(sorted(unknown))}"
        )


def parse_project(text: str) -> Project:
    """Parse and validate a project document.

    Raises ParseError with position info on malformed syntax, ParseError
    with a field path on schema trouble, and ValidationFailure carrying the
    violation list when the parsed project breaks a structural rule.
    """
    try:
        raw = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    _require(raw, dict, "document")
    _fields(raw, _TOP_LEVEL, "document")
    if "requirements" not in raw:
        raise ParseError("document is missing 'requirements'")
    if "budget" not in raw:
        raise ParseError("document is missing 'budget'")

    value_types = _parse_value_types(raw.get("value_types"))
    t_count = len(value_types)
    requirements = _parse_requirements(raw["requirements"])
    n = len(requirements)
    graphs = _parse_graphs(raw.get("graphs", []), n, t_count)
    precedences = _parse_precedences(raw.get("precedences", []))
    budget = _decimal(raw["budget"], "budget")
    betas = _parse_betas(raw.get("betas", {}))

    project = Project(
        requirements=requirements,
        value_types=value_types,
        graphs=graphs,
        precedences=precedences,
        budget=budget,
        betas=betas,
    )
    violations = validate_project(project)
    if violations:
        raise ValidationFailure(violations)
    return project


def _parse_value_types(raw: Any) -> tuple[ValueType, ...]:
    if raw is None:
        return (ValueType(1, "Wealth"),)
    _require(raw, list, "value_types")
    out = []
    for pos, entry in enumerate(raw):
        where = f"value_types[{pos}]"
        _require(entry, dict, where)
        _fields(entry, {"index", "name"}, where)
        out.append(ValueType(
            _int(entry.get("index"), f"{where}.index"),
            _require(entry.get("name"), str, f"{where}.name"),
        ))
    out.sort(key=lambda vt: vt.index)
    return tuple(out)


def _parse_requirements(raw: Any) -> tuple[Requirement, ...]:
    _require(raw, list, "requirements")
    out = []
    for pos, entry in enumerate(raw):
        where = f"requirements[{pos}]"
        _require(entry, dict, where)
        _fields(entry, {"id", "label", "cost", "expected_values"}, where)
        values = _require(entry.get("expected_values"), list,
                          f"{where}.expected_values")
        out.append(Requirement(
            id=_int(entry.get("id"), f"{where}.id"),
            label=_require(entry.get("label", ""), str, f"{where}.label"),
            cost=_decimal(entry.get("cost"), f"{where}.cost"),
            expected_values=tuple(
                _decimal(v, f"{where}.expected_values[{k}]")
                for k, v in enumerate(values)
            ),
        ))
    out.sort(key=lambda r: r.id)
    return tuple(out)


def _parse_graphs(raw: Any, n: int, t_count: int) -> tuple[TypedValueGraph, ...]:
    _require(raw, list, "graphs")
    by_type: dict[int, dict[tuple[int, int], ExplicitDependency]] = {}
    for pos, entry in enumerate(raw):
        where = f"graphs[{pos}]"
        _require(entry, dict, where)
        _fields(entry, {"type", "edges"}, where)
        t = _int(entry.get("type"), f"{where}.type")
        if t in by_type:
            raise ParseError(f"{where} repeats graph for type {t}")
        edges: dict[tuple[int, int], ExplicitDependency] = {}
        for k, edge in enumerate(_require(entry.get("edges", []), list,
                                          f"{where}.edges")):
            ewhere = f"{where}.edges[{k}]"
            _require(edge, dict, ewhere)
            _fields(edge, {"from", "to", "strength", "sign"}, ewhere)
            i = _int(edge.get("from"), f"{ewhere}.from")
            j = _int(edge.get("to"), f"{ewhere}.to")
            if (i, j) in edges:
                raise ParseError(f"{ewhere} repeats edge ({i}, {j})")
            try:
                sign = sign_from_label(
                    _require(edge.get("sign"), str, f"{ewhere}.sign"))
            except ValueError as exc:
                raise ParseError(f"{ewhere}.sign: {exc}") from exc
            strength = _decimal(edge.get("strength"), f"{ewhere}.strength")
            edges[(i, j)] = ExplicitDependency(float(strength), sign)
        by_type[t] = edges
    known = {t for t in by_type if 1 <= t <= t_count}
    stray = set(by_type) - known
    if stray:
        raise ParseError(
            f"graphs reference unknown value type(s): "
            f"{', '.join(str(t) for t in sorted(stray))}"
        )
    return tuple(
        TypedValueGraph(t, n, by_type.get(t, {})) for t in range(1, t_count + 1)
    )


def _parse_precedences(raw: Any) -> tuple[PrecedencePair, ...]:
    _require(raw, list, "precedences")
    out = []
    for pos, entry in enumerate(raw):
        where = f"precedences[{pos}]"
        _require(entry, dict, where)
        _fields(entry, {"dependent", "prerequisite", "kind"}, where)
        kind = _require(entry.get("kind"), str, f"{where}.kind")
        if kind not in PRECEDENCE_KINDS:
            raise ParseError(
                f"{where}.kind must be one of {PRECEDENCE_KINDS}, got {kind!r}"
            )
        out.append(PrecedencePair(
            dependent=_int(entry.get("dependent"), f"{where}.dependent"),
            prerequisite=_int(entry.get("prerequisite"), f"{where}.prerequisite"),
            kind=kind,
        ))
    return tuple(out)


def _parse_betas(raw: Any) -> dict[int, Decimal]:
    _require(raw, dict, "betas")
    out: dict[int, Decimal] = {}
    for key, value in raw.items():
        try:
            t = int(key)
        except (TypeError, ValueError):
            raise ParseError(f"betas key {key!r} is not a value-type index")
        out[t] = _decimal(value, f"betas[{key}]")
    return out


def _float_decimal(value: float) -> Decimal:
    try:
        return Decimal(repr(value))
    except InvalidOperation:  # pragma: no cover - repr of a finite float parses
        raise ValueError(f"cannot serialize strength {value!r}")


def project_to_data(project: Project) -> dict:
    """Plain-data view of a project in canonical ordering."""
    return {
        "betas": {
            str(t): project.betas[t] for t in sorted(project.betas)
        },
        "budget": project.budget,
        "graphs": [
            {
                "type": graph.value_type,
                "edges": [
                    {
                        "from": i,
                        "to": j,
                        "strength": _float_decimal(dep.strength),
                        "sign": sign_label(dep.sign),
                    }
                    for (i, j), dep in sorted(graph.edges.items())
                ],
            }
            for graph in project.graphs
            if graph.edges
        ],
        "precedences": [
            {
                "dependent": pair.dependent,
                "prerequisite": pair.prerequisite,
                "kind": pair.kind,
            }
            for pair in project.precedences
        ],
        "requirements": [
            {
                "id": req.id,
                "label": req.label,
                "cost": req.cost,
                "expected_values": list(req.expected_values),
            }
            for req in sorted(project.requirements, key=lambda r: r.id)
        ],
        "value_types": [
            {"index": vt.index, "name": vt.name}
            for vt in sorted(project.value_types, key=lambda vt: vt.index)
        ],
    }


def serialize_project(project: Project) -> str:
    """Canonical document text; parse(serialize(p)) == p for valid projects."""
    return canonical_json(project_to_data(project)) + "\n"
