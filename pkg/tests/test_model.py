"""Structural validation of projects."""

import copy
from dataclasses import replace
from decimal import Decimal

from helpers import make_project

from valueplan import (
    CONFLICTS,
    REQUIRES,
    PrecedencePair,
    Project,
    Requirement,
    TypedValueGraph,
    ValueType,
    check_project,
    validate_project,
)


def test_empty_project_is_valid():
    project = Project(
        requirements=(),
        value_types=(ValueType(1, "Wealth"),),
        graphs=(TypedValueGraph(1, 0, {}),),
        precedences=(),
        budget=Decimal(0),
        betas={},
    )
    assert validate_project(project) == []


def test_demo_style_project_is_valid():
    project = make_project(
        [5, 4, 3], [[10, 4], [8, 2], [6, 6]], 8,
        edges=[(2, 1, 2, 0.4, 1), (2, 2, 3, 0.6, -1)],
        betas={2: 0},
    )
    assert validate_project(project) == []


def test_wrong_expected_values_length_names_the_requirement():
    project = make_project([1, 1, 1], [[1, 1], [1, 1], [1, 1]], 5)
    broken = replace(
        project,
        requirements=project.requirements[:2] + (
            replace(project.requirements[2], expected_values=(Decimal(1),)),
        ),
    )
    violations = validate_project(broken)
    assert len(violations) == 1
    assert violations[0].rule == "expected-values-length"
    assert violations[0].ids == (3,)


def test_pair_listed_as_requires_and_conflicts():
    project = make_project(
        [1, 1], [[1], [1]], 5,
        precedences=[
            PrecedencePair(1, 2, REQUIRES),
            PrecedencePair(1, 2, CONFLICTS),
        ],
    )
    violations = validate_project(project)
    assert len(violations) == 1
    assert violations[0].rule == "requires-conflicts-exclusive"
    assert violations[0].ids == (1, 2)


def test_duplicate_same_kind_pair_is_allowed():
    project = make_project(
        [1, 1], [[1], [1]], 5,
        precedences=[
            PrecedencePair(1, 2, REQUIRES),
            PrecedencePair(1, 2, REQUIRES),
        ],
    )
    assert validate_project(project) == []


def test_graph_node_count_mismatch():
    project = make_project([1, 1], [[1], [1]], 5)
    broken = replace(project, graphs=(TypedValueGraph(1, 3, {}),))
    rules = {v.rule for v in validate_project(broken)}
    assert "node-set-matches-requirements" in rules


def test_beta_on_economic_type_rejected():
    project = make_project([1], [[1]], 5, betas={1: 1})
    rules = {v.rule for v in validate_project(project)}
    assert "economic-type-unbounded" in rules


def test_negative_cost_and_value():
    project = make_project([1], [[1]], 5)
    broken = replace(
        project,
        requirements=(
            Requirement(1, "r1", Decimal(-1), (Decimal(-2),)),
        ),
    )
    rules = {v.rule for v in validate_project(broken)}
    assert rules == {"nonnegative-cost", "nonnegative-value"}


def test_self_precedence_rejected():
    project = make_project(
        [1, 1], [[1], [1]], 5,
        precedences=[PrecedencePair(2, 2, REQUIRES)],
    )
    rules = {v.rule for v in validate_project(project)}
    assert "distinct-requirements" in rules


def test_strength_out_of_range_names_the_edge():
    project = make_project([1, 1], [[1], [1]], 5, edges=[(1, 1, 2, 1.5, 1)])
    violations = validate_project(project)
    assert len(violations) == 1
    assert violations[0].rule == "strength-range"
    assert violations[0].ids == (1, 1, 2)


def test_validate_is_pure():
    project = make_project(
        [5, 4], [[10, 1], [8, 2]], 8,
        edges=[(2, 1, 2, 0.4, 1)],
        precedences=[PrecedencePair(1, 2, REQUIRES)],
        betas={2: 1},
    )
    before = copy.deepcopy(project)
    first = validate_project(project)
    second = validate_project(project)
    assert first == second == []
    assert project == before


def test_check_project_raises_with_messages():
    project = make_project([1], [[1]], 5, betas={1: 1})
    try:
        check_project(project)
    except ValueError as exc:
        assert "type 1" in str(exc)
    else:
        raise AssertionError("expected ValueError")
