"""Shared builders, independent oracles, and parsers for the test suite."""

from __future__ import annotations

import math
import re
from decimal import Decimal
from random import Random

import numpy as np

from valueplan import (
    CONFLICTS,
    NEGATIVE,
    POSITIVE,
    REQUIRES,
    PrecedencePair,
    Project,
    Requirement,
    TypedValueGraph,
    ValueType,
)

STRENGTH_CHOICES = tuple(k / 10 for k in range(1, 11))


def make_project(
    costs,
    values,
    budget,
    edges=(),
    precedences=(),
    betas=None,
    t_count=None,
):
    """Compact project builder.

    ``values`` is a per-requirement list of per-type expected values;
    ``edges`` holds (type, from, to, strength, sign) tuples.
    """
    if t_count is None:
        t_count = len(values[0]) if values else 1
    requirements = tuple(
        Requirement(
            i + 1,
            f"r{i + 1}",
            Decimal(str(c)),
            tuple(Decimal(str(v)) for v in vals),
        )
        for i, (c, vals) in enumerate(zip(costs, values))
    )
    value_types = tuple(ValueType(t + 1, f"T{t + 1}") for t in range(t_count))
    by_type: dict[int, list] = {}
    for t, i, j, strength, sign in edges:
        by_type.setdefault(t, []).append((i, j, strength, sign))
    graphs = tuple(
        TypedValueGraph.from_edges(t + 1, len(costs), by_type.get(t + 1, []))
        for t in range(t_count)
    )
    return Project(
        requirements=requirements,
        value_types=value_types,
        graphs=graphs,
        precedences=tuple(precedences),
        budget=Decimal(str(budget)),
        betas={int(t): Decimal(str(v)) for t, v in (betas or {}).items()},
    )


def random_graph(rng: Random, n: int, density: float, value_type: int = 1):
    edges = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and rng.random() < density:
                edges.append((
                    i, j,
                    rng.choice(STRENGTH_CHOICES),
                    rng.choice((POSITIVE, NEGATIVE)),
                ))
    return TypedValueGraph.from_edges(value_type, n, edges)


def random_project(
    rng: Random,
    n: int,
    t_count: int,
    density: float = 0.3,
    precedence_limit: int | None = None,
    beta_prob: float = 0.5,
    edge_free: bool = False,
):
    costs = [Decimal(rng.randint(0, 100)) / 10 for _ in range(n)]
    values = [
        [Decimal(rng.randint(0, 100)) / 10 for _ in range(t_count)]
        for _ in range(n)
    ]
    total = sum(costs, start=Decimal(0))
    budget = total * Decimal(rng.randint(20, 80)) / 100
    edges = []
    if not edge_free:
        for t in range(1, t_count + 1):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i != j and rng.random() < density:
                        edges.append((
                            t, i, j,
                            rng.choice(STRENGTH_CHOICES),
                            rng.choice((POSITIVE, NEGATIVE)),
                        ))
    precedences = []
    if precedence_limit is None:
        precedence_limit = n // 2
    used = set()
    for _ in range(rng.randint(0, precedence_limit) if n >= 2 else 0):
        a, b = rng.sample(range(1, n + 1), 2)
        if (a, b) in used:
            continue
        used.add((a, b))
        precedences.append(
            PrecedencePair(a, b, rng.choice((REQUIRES, CONFLICTS)))
        )
    betas = {}
    for t in range(2, t_count + 1):
        if rng.random() < beta_prob:
            reachable = sum((v[t - 1] for v in values), start=Decimal(0))
            betas[t] = reachable * Decimal(rng.randint(5, 60)) / 100
    return make_project(
        costs, values, budget, edges=edges, precedences=precedences,
        betas=betas, t_count=t_count,
    )


def naive_closure(graph: TypedValueGraph):
    """Ground-truth closure by full enumeration, no pruning.

    Walks over (node, parity) states, each state used at most once except
    that a walk may close back on its start state; any longer walk reduces
    to one of these without losing strength or changing sign. Exponential,
    keep n tiny.
    """
    n = graph.n
    adjacency = [[] for _ in range(n)]
    for (i, j), dep in graph.edges.items():
        adjacency[i - 1].append(
            (j - 1, dep.strength, 0 if dep.sign == POSITIVE else 1)
        )
    positive = np.zeros((n, n))
    negative = np.zeros((n, n))
    for src in range(n):
        best = [[0.0, 0.0] for _ in range(n)]
        start = (src, 0)

        def walk(node, parity, strength, visited):
            for nxt, weight, flip in adjacency[node]:
                s = min(strength, weight)
                p = parity ^ flip
                state = (nxt, p)
                if state == start:
                    best[nxt][p] = max(best[nxt][p], s)
                    continue
                if state in visited:
                    continue
                best[nxt][p] = max(best[nxt][p], s)
                walk(nxt, p, s, visited | {state})

        walk(src, 0, math.inf, frozenset({start}))
        for j in range(n):
            positive[src, j] = best[j][0]
            negative[src, j] = best[j][1]
    return positive, negative


def knapsack_best(costs: list[int], values: list[float], budget: int) -> float:
    """0/1 knapsack optimum by dynamic programming over integer costs."""
    dp = [0.0] * (budget + 1)
    for cost, value in zip(costs, values):
        if cost > budget:
            continue
        for room in range(budget, cost - 1, -1):
            candidate = dp[room - cost] + value
            if candidate > dp[room]:
                dp[room] = candidate
    return dp[budget]


_ROW_RE = re.compile(r"^\s*(\S+):\s*(.*?)\s*(<=|>=)\s*(\S+)\s*$")
_BOUND_RE = re.compile(r"^\s*(\S+)\s*<=\s*(\S+)\s*<=\s*(\S+)\s*$")


def _parse_terms(expr: str) -> list[tuple[str, float]]:
    tokens = expr.split()
    if tokens == ["0"]:
        return []
    assert len(tokens) % 3 == 0, f"bad term list: {expr!r}"
    terms = []
    for k in range(0, len(tokens), 3):
        sign, coef, var = tokens[k:k + 3]
        assert sign in "+-", f"bad sign in {expr!r}"
        value = float(coef)
        terms.append((var, -value if sign == "-" else value))
    return terms


def parse_lp(text: str):
    """Parse LP text back into objective, rows, bounds, and binaries."""
    objective = None
    rows = []
    bounds = {}
    binaries = []
    section = None
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped in ("Maximize", "Subject To", "Bounds", "Binaries", "End"):
            section = stripped
            continue
        if section == "Maximize":
            name, _, expr = stripped.partition(":")
            assert name.strip() == "obj"
            objective = _parse_terms(expr.strip())
        elif section == "Subject To":
            match = _ROW_RE.match(stripped)
            assert match, f"unparseable row: {stripped!r}"
            name, expr, sense, rhs = match.groups()
            rows.append((name, _parse_terms(expr), sense, float(rhs)))
        elif section == "Bounds":
            match = _BOUND_RE.match(stripped)
            assert match, f"unparseable bound: {stripped!r}"
            lo, var, hi = match.groups()
            bounds[var] = (float(lo), float(hi))
        elif section == "Binaries":
            binaries.append(stripped)
    return objective, rows, bounds, binaries


def eval_terms(terms, assignment) -> float:
    return sum(coef * assignment[var] for var, coef in terms)


def row_satisfied(row, assignment, tol=1e-9) -> bool:
    _, terms, sense, rhs = row
    left = eval_terms(terms, assignment)
    if sense == "<=":
        return left <= rhs + tol
    return left >= rhs - tol


def lp_point_for_selection(project, influences, x) -> dict[str, float]:
    """The assignment a selection induces: g=x, theta at its lower bound,
    y = x * theta, expressed over the exported variable names."""
    from valueplan import evaluate_plan

    plan = evaluate_plan(project, influences, x)
    assignment: dict[str, float] = {}
    for i in range(1, project.n + 1):
        assignment[f"x{i}"] = float(x[i - 1])
        assignment[f"g{i}"] = float(x[i - 1])
        for t in range(1, project.type_count + 1):
            theta = float(plan.penalties[i - 1, t - 1])
            assignment[f"th{i}_{t}"] = theta
            assignment[f"y{i}_{t}"] = theta * x[i - 1]
    return assignment
