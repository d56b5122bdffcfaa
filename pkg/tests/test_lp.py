"""Model assembly and LP-format export."""

import itertools

import pytest

from helpers import (
    eval_terms,
    lp_point_for_selection,
    make_project,
    parse_lp,
    random_project,
    row_satisfied,
)

from valueplan import (
    CONFLICTS,
    POSITIVE,
    REQUIRES,
    PrecedencePair,
    build_ilp_model,
    export_lp,
    evaluate_plan,
    oracle_solve,
    project_influences,
    solve_exact,
)

from random import Random


def small_instance():
    return make_project([5, 4, 3], [[10], [8], [6]], 8)


def test_row_counts_minimal_model():
    project = make_project([1], [[2]], 1)
    text = export_lp(project)
    _, rows, bounds, binaries = parse_lp(text)
    names = [name for name, *_ in rows]
    assert names.count("c_budget") == 1
    assert not any(name.startswith("c_pen") for name in names)
    linking = [n for n in names if n.startswith("c_glink")]
    assert len(linking) == 8
    assert set(binaries) == {"x1", "g1"}
    assert bounds == {"y1_1": (0.0, 1.0), "th1_1": (0.0, 1.0)}


def test_penalty_row_count_is_pairs_times_types():
    rng = Random(3)
    project = random_project(rng, 4, 3)
    _, rows, _, _ = parse_lp(export_lp(project, project_influences(project)))
    pen_rows = [n for n, *_ in rows if n.startswith("c_pen_")]
    assert len(pen_rows) == 4 * 3 * 3


def test_no_value_rows_without_betas():
    _, rows, _, _ = parse_lp(export_lp(small_instance()))
    assert not any(name.startswith("c_value") for name, *_ in rows)


def test_value_rows_per_bounded_type():
    project = make_project(
        [1, 1], [[1, 2, 3], [1, 2, 3]], 5, betas={2: 1, 3: 2}, t_count=3
    )
    _, rows, _, _ = parse_lp(export_lp(project))
    value_rows = sorted(n for n, *_ in rows if n.startswith("c_value"))
    assert value_rows == ["c_value_2", "c_value_3"]


def test_precedence_and_conflict_rows():
    project = make_project(
        [1, 1, 1], [[1], [1], [1]], 5,
        precedences=[
            PrecedencePair(1, 2, REQUIRES),
            PrecedencePair(2, 3, CONFLICTS),
        ],
    )
    _, rows, _, _ = parse_lp(export_lp(project))
    by_name = {name: (terms, sense, rhs) for name, terms, sense, rhs in rows}
    terms, sense, rhs = by_name["c_prec_1_2"]
    assert dict(terms) == {"x1": 1.0, "x2": -1.0} and sense == "<=" and rhs == 0.0
    terms, sense, rhs = by_name["c_conf_2_3"]
    assert dict(terms) == {"x2": 1.0, "x3": 1.0} and sense == "<=" and rhs == 1.0


def test_exported_model_optimum_matches_solver():
    """Brute-force the exported file itself: for every binary selection take
    g = x, penalties at their implied lower bounds, y = x * theta; the best
    row-feasible objective must equal the built-in optimum."""
    project = small_instance()
    influences = project_influences(project)
    objective, rows, bounds, binaries = parse_lp(export_lp(project, influences))
    n = project.n

    best = None
    for bits in itertools.product((0, 1), repeat=n):
        assignment = {f"x{i + 1}": float(bits[i]) for i in range(n)}
        assignment.update({f"g{i + 1}": float(bits[i]) for i in range(n)})
        for i in range(1, n + 1):
            for t in range(1, project.type_count + 1):
                lower = 0.0
                for name, terms, sense, rhs in rows:
                    if not name.startswith(f"c_pen_{i}_"):
                        continue
                    coeffs = dict(terms)
                    if f"th{i}_{t}" not in coeffs:
                        continue
                    rest = sum(
                        coef * assignment[var]
                        for var, coef in terms if var != f"th{i}_{t}"
                    )
                    lower = max(lower, rhs - rest)
                assignment[f"th{i}_{t}"] = lower
                assignment[f"y{i}_{t}"] = lower * bits[i - 1]
        if all(row_satisfied(row, assignment) for row in rows):
            value = eval_terms(objective, assignment)
            if best is None or value > best:
                best = value

    report = solve_exact(project, influences)
    assert best == pytest.approx(report.plan.objective, abs=1e-9)


def test_optimum_satisfies_every_row():
    rng = Random(41)
    for _ in range(10):
        project = random_project(rng, rng.randint(1, 8), rng.randint(1, 3))
        influences = project_influences(project)
        report = solve_exact(project, influences)
        if report.plan is None:
            continue
        objective, rows, _, _ = parse_lp(export_lp(project, influences))
        point = lp_point_for_selection(project, influences, report.plan.selection)
        for row in rows:
            assert row_satisfied(row, point), row
        assert eval_terms(objective, point) == pytest.approx(
            report.plan.objective, abs=1e-9
        )


def test_variable_naming_scheme():
    project = make_project(
        [1, 1], [[1, 1], [1, 1]], 5,
        edges=[(2, 1, 2, 0.5, POSITIVE)], t_count=2,
    )
    model = build_ilp_model(project, project_influences(project))
    names = {v.name for v in model.variables}
    assert {"x1", "x2", "g1", "g2", "y1_1", "y2_2", "th1_2", "th2_1"} <= names
    pen = model.rows_named("c_pen_1_2_2")
    assert len(pen) == 1
    assert dict(pen[0].terms)["x2"] == 0.5
    assert pen[0].rhs == 0.5


def test_infeasible_betas_visible_to_external_solver():
    # No selection reaches the bound, so every binary point must break a row.
    project = make_project([1], [[1, 1]], 5, betas={2: 99}, t_count=2)
    influences = project_influences(project)
    objective, rows, _, _ = parse_lp(export_lp(project, influences))
    for bits in itertools.product((0, 1), repeat=1):
        point = lp_point_for_selection(project, influences, list(bits))
        assert not all(row_satisfied(row, point) for row in rows)
    assert oracle_solve(project).status == "infeasible"
