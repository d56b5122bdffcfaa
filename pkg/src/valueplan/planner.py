"""Release-plan evaluation and exact selection.

Everything downstream of the influence matrices is determined by the binary
selection vector x: penalties sit at their greatest lower bound, the
auxiliary selection copies equal x, and the penalized values are x times the
penalties. The solver therefore searches over x alone with depth-first
branch and bound, and a brute-force enumerator doubles as its oracle.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from decimal import Decimal
from typing import Callable, Sequence

import numpy as np

from .graph import InfluenceMatrix, influence_matrix, signed_closure
from .model import CONFLICTS, REQUIRES, Project

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
TIMEOUT_WITH_INCUMBENT = "timeout_with_incumbent"
TIMEOUT_NO_INCUMBENT = "timeout_no_incumbent"

DEFAULT_TIMEOUT = 60.0

# Absolute safety margin for float-valued pruning decisions. Bounds are
# admissible in exact arithmetic; the margin covers summation-order noise so
# a subtree holding the true optimum is never discarded.
PRUNE_EPS = 1e-9


@dataclass(frozen=True)
class ReleasePlan:
    """A selection with everything derived from it.

    ``selection`` is the binary vector x indexed by requirement position.
    ``penalties`` (theta) and ``penalized_values`` (x * theta) are n x T;
    ``delivered`` holds the penalty-adjusted value sums per type, and
    ``objective`` is the delivered economic value.
    """

    selection: tuple[int, ...]
    penalties: np.ndarray
    penalized_values: np.ndarray
    delivered: np.ndarray
    objective: float

    def selected_ids(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, x in enumerate(self.selection) if x)


@dataclass(frozen=True)
class ConstraintViolation:
    """A broken plan constraint: which one, on what, and by how much."""

    constraint: str
    ids: tuple
    slack: object
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class SolveReport:
    plan: ReleasePlan | None
    status: str
    nodes_explored: int
    wall_time: float


def project_influences(project: Project) -> np.ndarray:
    """Influence matrices for every value type, stacked to shape (T, n, n)."""
    n = project.n
    out = np.zeros((project.type_count, n, n))
    for idx, graph in enumerate(project.graphs):
        out[idx] = influence_matrix(signed_closure(graph)).values
    return out


def influence_stack(
    influences: np.ndarray | Sequence[InfluenceMatrix], project: Project | None = None
) -> np.ndarray:
    """Coerce per-type influence matrices to a (T, n, n) float array."""
    if influences is None:
        if project is None:
            raise ValueError("influences or a project to derive them from required")
        return project_influences(project)
    if isinstance(influences, np.ndarray):
        return influences
    return np.stack([m.values for m in influences])


def _term_matrices(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-pair penalty terms for both choices of the influencer.

    term_sel[t, i, j] is the penalty term on requirement i when j is
    selected, max(-I, 0); term_ign[t, i, j] applies when j is ignored,
    max(I, 0). Diagonals are zeroed: a requirement never penalizes itself,
    and since all terms are nonnegative the zero also serves as the empty
    maximum.
    """
    magnitude = np.abs(stack)
    term_sel = (magnitude - stack) / 2.0
    term_ign = (magnitude + stack) / 2.0
    idx = np.arange(stack.shape[1])
    term_sel[:, idx, idx] = 0.0
    term_ign[:, idx, idx] = 0.0
    return term_sel, term_ign


def _theta(
    term_sel: np.ndarray, term_ign: np.ndarray, selection: np.ndarray
) -> np.ndarray:
    """Penalties of every requirement and type for a selection, shape (T, n)."""
    t_count, n, _ = term_sel.shape
    if n == 0:
        return np.zeros((t_count, 0))
    chosen = np.where(selection.astype(bool)[None, None, :], term_sel, term_ign)
    return chosen.max(axis=2)


def _as_selection(selection: Sequence[int], n: int) -> np.ndarray:
    arr = np.asarray(selection, dtype=np.int8)
    if arr.shape != (n,):
        raise ValueError(f"selection must have length {n}, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("selection entries must be 0 or 1")
    return arr


def penalty(
    influences: np.ndarray | Sequence[InfluenceMatrix],
    selection: Sequence[int],
    i: int,
    t: int,
) -> float:
    """Penalty on the type-t value of requirement i under a selection.

    The worst single influencer decides: for each other requirement j the
    term is (|I| + (1 - 2 x_j) I) / 2, which is |I| exactly when a positive
    influencer is ignored or a negative one is selected, else 0. With no
    other requirements the penalty is 0, the greatest lower bound the model
    admits.
    """
    stack = influence_stack(influences)
    x = _as_selection(selection, stack.shape[1])
    term_sel, term_ign = _term_matrices(stack)
    row = np.where(x.astype(bool), term_sel[t - 1, i - 1], term_ign[t - 1, i - 1])
    row[i - 1] = 0.0
    return float(row.max()) if row.size else 0.0


class _Prepared:
    """Float views and lookup tables shared by evaluation and search."""

    def __init__(self, project: Project, stack: np.ndarray):
        self.project = project
        self.stack = stack
        self.n = project.n
        self.t_count = project.type_count
        self.term_sel, self.term_ign = _term_matrices(stack)
        self.values = np.array(
            [[float(v) for v in r.expected_values] for r in project.requirements]
        ).reshape(self.n, self.t_count)
        self.economic = self.values[:, 0] if self.t_count else np.zeros(self.n)
        self.costs = [r.cost for r in project.requirements]
        self.betas = sorted(
            (t - 1, float(bound)) for t, bound in project.betas.items()
        )

    def evaluate(self, x: np.ndarray) -> ReleasePlan:
        theta = _theta(self.term_sel, self.term_ign, x).T  # (n, T)
        y = x[:, None] * theta
        delivered = ((x[:, None] - y) * self.values).sum(axis=0)
        objective = float(delivered[0]) if self.t_count else 0.0
        return ReleasePlan(
            selection=tuple(int(v) for v in x),
            penalties=theta,
            penalized_values=y,
            delivered=delivered,
            objective=objective,
        )

    def meets_betas(self, delivered: np.ndarray) -> bool:
        return all(delivered[t_idx] >= bound for t_idx, bound in self.betas)


def _prepare(
    project: Project, influences: np.ndarray | Sequence[InfluenceMatrix] | None
) -> _Prepared:
    return _Prepared(project, influence_stack(influences, project))


def evaluate_plan(
    project: Project,
    influences: np.ndarray | Sequence[InfluenceMatrix] | None,
    selection: Sequence[int],
) -> ReleasePlan:
    """Derive the full plan a selection determines.

    Penalties are reported for unselected requirements too; they carry no
    weight in the objective (y is zero there) but show what selecting the
    requirement would forfeit.
    """
    prepared = _prepare(project, influences)
    return prepared.evaluate(_as_selection(selection, project.n))


def check_feasibility(
    project: Project,
    influences: np.ndarray | Sequence[InfluenceMatrix] | None,
    selection: Sequence[int],
) -> list[ConstraintViolation]:
    """All constraint violations of a selection; empty means feasible.

    Budget comparison is exact decimal arithmetic. Value lower bounds compare
    the penalty-adjusted delivered values, which are float, against the beta
    thresholds.
    """
    prepared = _prepare(project, influences)
    x = _as_selection(selection, project.n)
    out: list[ConstraintViolation] = []

    spent = sum(
        (c for c, v in zip(prepared.costs, x) if v), start=Decimal(0)
    )
    if spent > project.budget:
        excess = spent - project.budget
        out.append(ConstraintViolation(
            "budget", tuple(int(i) + 1 for i in np.flatnonzero(x)), excess,
            f"selection costs {spent}, exceeding budget {project.budget} by {excess}",
        ))

    for pair in project.precedences:
        xd = int(x[pair.dependent - 1])
        xp = int(x[pair.prerequisite - 1])
        if pair.kind == REQUIRES and xd > xp:
            out.append(ConstraintViolation(
                "precedence", (pair.dependent, pair.prerequisite), 1,
                f"requirement {pair.dependent} is selected without its "
                f"prerequisite {pair.prerequisite}",
            ))
        elif pair.kind == CONFLICTS and xd + xp > 1:
            out.append(ConstraintViolation(
                "conflict", (pair.dependent, pair.prerequisite), 1,
                f"requirements {pair.dependent} and {pair.prerequisite} "
                "conflict but are both selected",
            ))

    if prepared.betas:
        delivered = prepared.evaluate(x).delivered
        for t_idx, bound in prepared.betas:
            if delivered[t_idx] < bound:
                shortfall = bound - float(delivered[t_idx])
                out.append(ConstraintViolation(
                    "value", (t_idx + 1,), shortfall,
                    f"delivered type-{t_idx + 1} value {delivered[t_idx]:g} "
                    f"falls short of the bound {bound:g}",
                ))
    return out


class _Timeout(Exception):
    pass


class _Search:
    """Depth-first branch and bound over the selection vector.

    Branches in requirement order, zero first, so among equal-objective
    optima the lexicographically smallest selection is reported. Precedence
    implications are propagated eagerly; the bound adds a fractional
    knapsack of the undecided requirements at full economic value on top of
    the decided part with its penalties so far, which can only grow.
    """

    def __init__(
        self,
        prepared: _Prepared,
        timeout: float,
        incumbent_callback: Callable[[ReleasePlan], None] | None,
    ):
        self.p = prepared
        self.deadline = time.monotonic() + timeout
        self.callback = incumbent_callback
        n = prepared.n

        self.requires_of: list[list[int]] = [[] for _ in range(n)]
        self.required_by: list[list[int]] = [[] for _ in range(n)]
        self.conflicts_with: list[list[int]] = [[] for _ in range(n)]
        for pair in prepared.project.precedences:
            d, q = pair.dependent - 1, pair.prerequisite - 1
            if pair.kind == REQUIRES:
                self.requires_of[d].append(q)
                self.required_by[q].append(d)
            else:
                self.conflicts_with[d].append(q)
                self.conflicts_with[q].append(d)

        costs_f = [float(c) for c in prepared.costs]
        self.density_order = sorted(
            range(n),
            key=lambda i: (
                -math.inf
                if costs_f[i] == 0
                else -prepared.economic[i] / costs_f[i],
                i,
            ),
        )
        self.costs_f = costs_f

        self.assignment = np.full(n, -1, dtype=np.int8)
        self.spent = Decimal(0)
        self.theta_low = np.zeros((prepared.t_count, n))
        self.undecided = n

        self.best_obj: float | None = None
        self.best_x: tuple[int, ...] | None = None
        self.best_plan: ReleasePlan | None = None
        self.nodes = 0

    # -- assignment bookkeeping -------------------------------------------

    def _push_term(self, j: int, value: int) -> None:
        terms = self.p.term_sel if value else self.p.term_ign
        np.maximum(self.theta_low, terms[:, :, j], out=self.theta_low)

    def assign(self, i: int, value: int, trail: list[int]) -> bool:
        """Set x_i and propagate; False on contradiction or budget overrun."""
        queue = [(i, value)]
        while queue:
            node, val = queue.pop()
            current = self.assignment[node]
            if current != -1:
                if current != val:
                    return False
                continue
            if val == 1:
                spent = self.spent + self.p.costs[node]
                if spent > self.p.project.budget:
                    return False
                self.spent = spent
            self.assignment[node] = val
            self.undecided -= 1
            trail.append(node)
            self._push_term(node, val)
            if val == 1:
                queue.extend((q, 1) for q in self.requires_of[node])
                queue.extend((q, 0) for q in self.conflicts_with[node])
            else:
                queue.extend((d, 0) for d in self.required_by[node])
        return True

    def undo(self, trail: list[int], theta_snapshot: np.ndarray, spent: Decimal):
        for node in trail:
            self.assignment[node] = -1
            self.undecided += 1
        self.spent = spent
        self.theta_low = theta_snapshot

    # -- bounding ----------------------------------------------------------

    def upper_bound(self) -> float:
        selected = self.assignment == 1
        fixed = float(
            ((1.0 - self.theta_low[0]) * self.p.economic * selected).sum()
        ) if self.p.t_count else 0.0
        remaining = self.p.project.budget - self.spent
        room = math.nextafter(float(remaining), math.inf)
        bound = fixed
        for i in self.density_order:
            if self.assignment[i] != -1:
                continue
            cost = self.costs_f[i]
            value = float(self.p.economic[i])
            if cost <= room:
                bound += value
                room -= cost
            elif cost > 0:
                bound += value * (room / cost)
                break
        return bound

    def betas_reachable(self) -> bool:
        if not self.p.betas:
            return True
        selected = self.assignment == 1
        undecided = self.assignment == -1
        for t_idx, bound in self.p.betas:
            optimistic = float(
                ((1.0 - self.theta_low[t_idx]) * self.p.values[:, t_idx]
                 * selected).sum()
                + (self.p.values[:, t_idx] * undecided).sum()
            )
            if optimistic < bound - PRUNE_EPS:
                return False
        return True

    # -- search ------------------------------------------------------------

    def offer(self, plan: ReleasePlan) -> None:
        x = plan.selection
        if (
            self.best_obj is None
            or plan.objective > self.best_obj
            or (plan.objective == self.best_obj and x < self.best_x)
        ):
            self.best_obj = plan.objective
            self.best_x = x
            self.best_plan = plan
            if self.callback is not None:
                self.callback(plan)

    def seed_incumbent(self) -> None:
        """Greedy warm start: density order, budget-checked, then verified."""
        x = np.zeros(self.p.n, dtype=np.int8)
        spent = Decimal(0)
        for i in self.density_order:
            tentative = spent + self.p.costs[i]
            if tentative <= self.p.project.budget:
                x[i] = 1
                spent = tentative
        if not self._precedence_ok(x):
            return
        plan = self.p.evaluate(x)
        if self.p.meets_betas(plan.delivered):
            self.offer(plan)

    def _precedence_ok(self, x: np.ndarray) -> bool:
        for pair in self.p.project.precedences:
            xd, xp = x[pair.dependent - 1], x[pair.prerequisite - 1]
            if pair.kind == REQUIRES and xd > xp:
                return False
            if pair.kind == CONFLICTS and xd + xp > 1:
                return False
        return True

    def node(self) -> None:
        self.nodes += 1
        if time.monotonic() > self.deadline:
            raise _Timeout

        if self.undecided == 0:
            plan = self.p.evaluate(self.assignment.astype(np.int8))
            if self.p.meets_betas(plan.delivered):
                self.offer(plan)
            return

        if not self.betas_reachable():
            return
        if self.best_obj is not None and (
            self.upper_bound() <= self.best_obj - PRUNE_EPS
        ):
            return

        branch = int(np.argmax(self.assignment == -1))
        for value in (0, 1):
            trail: list[int] = []
            theta_snapshot = self.theta_low.copy()
            spent_snapshot = self.spent
            if self.assign(branch, value, trail):
                self.node()
            self.undo(trail, theta_snapshot, spent_snapshot)

    def run(self) -> tuple[str, ReleasePlan | None]:
        self.seed_incumbent()
        try:
            self.node()
        except _Timeout:
            if self.best_plan is None:
                return TIMEOUT_NO_INCUMBENT, None
            return TIMEOUT_WITH_INCUMBENT, self.best_plan
        if self.best_plan is None:
            return INFEASIBLE, None
        return OPTIMAL, self.best_plan


def solve_exact(
    project: Project,
    influences: np.ndarray | Sequence[InfluenceMatrix] | None = None,
    *,
    timeout: float = DEFAULT_TIMEOUT,
    incumbent_callback: Callable[[ReleasePlan], None] | None = None,
) -> SolveReport:
    """Provably optimal selection by branch and bound, or the best incumbent
    found when the timeout strikes first.

    Among equal-objective optima the lexicographically smallest selection
    wins. The search is deterministic for fixed inputs.
    """
    started = time.monotonic()
    prepared = _prepare(project, influences)
    search = _Search(prepared, timeout, incumbent_callback)
    status, plan = search.run()
    return SolveReport(
        plan=plan,
        status=status,
        nodes_explored=search.nodes,
        wall_time=time.monotonic() - started,
    )


def oracle_solve(
    project: Project,
    influences: np.ndarray | Sequence[InfluenceMatrix] | None = None,
    max_requirements: int = 15,
) -> SolveReport:
    """Optimal selection by exhaustive enumeration of all 2^n selections.

    Filters exactly like :func:`check_feasibility` and scores with
    :func:`evaluate_plan`; ties go to the lexicographically smallest
    selection. Guarded to small instances; this is the reference the branch
    and bound is held to.
    """
    n = project.n
    if n > max_requirements:
        raise ValueError(
            f"exhaustive enumeration is limited to {max_requirements} "
            f"requirements, got {n}"
        )
    started = time.monotonic()
    prepared = _prepare(project, influences)
    budget = project.budget

    best_plan: ReleasePlan | None = None
    count = 0
    for bits in itertools.product((0, 1), repeat=n):
        count += 1
        spent = sum(
            (c for c, v in zip(prepared.costs, bits) if v), start=Decimal(0)
        )
        if spent > budget:
            continue
        x = np.array(bits, dtype=np.int8)
        if not _precedences_hold(project, x):
            continue
        plan = prepared.evaluate(x)
        if not prepared.meets_betas(plan.delivered):
            continue
        if best_plan is None or plan.objective > best_plan.objective:
            best_plan = plan
    status = OPTIMAL if best_plan is not None else INFEASIBLE
    return SolveReport(
        plan=best_plan,
        status=status,
        nodes_explored=count,
        wall_time=time.monotonic() - started,
    )


def _precedences_hold(project: Project, x: np.ndarray) -> bool:
    for pair in project.precedences:
        xd, xp = x[pair.dependent - 1], x[pair.prerequisite - 1]
        if pair.kind == REQUIRES and xd > xp:
            return False
        if pair.kind == CONFLICTS and xd + xp > 1:
            return False
    return True
