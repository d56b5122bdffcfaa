"""Signed fuzzy value-dependency graphs: path algebra, closures, influences.

A typed value graph holds, per ordered requirement pair, an optional explicit
dependency with a strength in (0, 1] and a sign. Walks compose strengths by
minimum and signs by product; the closure keeps, per pair and per resulting
sign, the strongest walk. Closures range over walks, not simple paths: a
cycle that flips the sign can carry a strong negative connection that no
simple path provides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

POSITIVE = 1
NEGATIVE = -1

_SIGN_LABELS = {POSITIVE: "+", NEGATIVE: "-"}


class PathError(ValueError):
    """Raised when a node sequence traverses a missing edge."""


@dataclass(frozen=True)
class ExplicitDependency:
    """A direct dependency edge: strength in (0, 1], sign POSITIVE or NEGATIVE.

    Zero-strength dependencies are represented by the absence of an edge, so a
    stored edge always carries a definite sign. Range violations are reported
    by :func:`valueplan.model.validate_project`, not at construction.
    """

    strength: float
    sign: int


@dataclass(frozen=True)
class TypedValueGraph:
    """Signed directed fuzzy graph for one value type.

    Nodes are requirement ids 1..n. ``edges`` maps ordered pairs (i, j) to
    the explicit dependency of i's value on j's presence. Instances are
    treated as immutable after construction.
    """

    value_type: int
    n: int
    edges: Mapping[tuple[int, int], ExplicitDependency]

    @classmethod
    def from_edges(
        cls,
        value_type: int,
        n: int,
        edges: Iterable[tuple[int, int, float, int]] = (),
    ) -> "TypedValueGraph":
        """Build a graph from (from_id, to_id, strength, sign) tuples."""
        table: dict[tuple[int, int], ExplicitDependency] = {}
        for i, j, strength, sign in edges:
            if (i, j) in table:
                raise ValueError(f"duplicate edge ({i}, {j})")
            table[(i, j)] = ExplicitDependency(float(strength), sign)
        return cls(value_type, n, table)

    def edge(self, i: int, j: int) -> ExplicitDependency | None:
        return self.edges.get((i, j))


@dataclass(frozen=True)
class SignedClosure:
    """Strongest positive and negative walk strengths between all pairs.

    Matrices are 0-indexed: entry [i-1][j-1] is the strongest walk from
    requirement i to requirement j of the given resulting sign, or 0 when no
    such walk exists. Diagonal entries describe cyclic self-influence; they
    are computed but the planner never reads them.
    """

    value_type: int
    positive: np.ndarray
    negative: np.ndarray


@dataclass(frozen=True)
class InfluenceMatrix:
    """Net influence per pair: positive minus negative closure, in [-1, 1].

    Entry [i-1][j-1] is how requirement j affects requirement i's value of
    this type.
    """

    value_type: int
    values: np.ndarray


def _edge_or_raise(graph: TypedValueGraph, i: int, j: int) -> ExplicitDependency:
    dep = graph.edges.get((i, j))
    if dep is None:
        raise PathError(f"no explicit dependency from r{i} to r{j}")
    return dep


def _check_path(path: Sequence[int]) -> None:
    if len(path) < 2:
        raise PathError("a dependency path needs at least two nodes")


def path_strength(graph: TypedValueGraph, path: Sequence[int]) -> float:
    """Strength of a dependency path: the minimum edge strength along it."""
    _check_path(path)
    return min(
        _edge_or_raise(graph, i, j).strength for i, j in zip(path, path[1:])
    )


def path_quality(graph: TypedValueGraph, path: Sequence[int]) -> int:
    """Sign of a dependency path: the product of its edge signs.

    Returns POSITIVE or NEGATIVE; equivalently the result is NEGATIVE iff the
    path has an odd number of negative edges.
    """
    _check_path(path)
    sign = POSITIVE
    for i, j in zip(path, path[1:]):
        sign *= _edge_or_raise(graph, i, j).sign
    return sign


def adjacency_matrices(graph: TypedValueGraph) -> tuple[np.ndarray, np.ndarray]:
    """Split a graph into (positive, negative) strength matrices, 0-indexed."""
    n = graph.n
    pos = np.zeros((n, n))
    neg = np.zeros((n, n))
    for (i, j), dep in graph.edges.items():
        target = pos if dep.sign == POSITIVE else neg
        target[i - 1, j - 1] = dep.strength
    return pos, neg


def closure_from_adjacency(
    pos: np.ndarray, neg: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Max-min walk closure of a signed graph given its adjacency matrices.

    Works on the sign-expanded graph: each node i becomes states (i, even)
    and (i, odd) tracking the parity of negative edges used so far, a
    positive edge preserves parity and a negative edge flips it. Ordinary
    max-min Floyd-Warshall on the 2n expanded states is then exact for walks
    in the original graph, in O(n^3). Only min/max selections are performed,
    so every output value is drawn from the input strength set.
    """
    pos = np.asarray(pos, dtype=float)
    neg = np.asarray(neg, dtype=float)
    n = pos.shape[0]
    m = 2 * n
    w = np.zeros((m, m))
    w[:n, :n] = pos
    w[n:, n:] = pos
    w[:n, n:] = neg
    w[n:, :n] = neg
    for k in range(m):
        np.maximum(w, np.minimum(w[:, k, None], w[None, k, :]), out=w)
    return w[:n, :n].copy(), w[:n, n:].copy()


def signed_closure(graph: TypedValueGraph) -> SignedClosure:
    """Strongest positive/negative walk strengths for all ordered pairs."""
    pos, neg = adjacency_matrices(graph)
    positive, negative = closure_from_adjacency(pos, neg)
    return SignedClosure(graph.value_type, positive, negative)


def influence_matrix(closure: SignedClosure) -> InfluenceMatrix:
    """Net influence: entrywise positive minus negative closure."""
    return InfluenceMatrix(closure.value_type, closure.positive - closure.negative)


def oracle_closure(graph: TypedValueGraph, max_nodes: int = 10) -> SignedClosure:
    """Closure by direct walk enumeration, for cross-checking the main path.

    From each source, explores walks in which no (node, sign-parity) state
    repeats; dropping a cycle between repeated states preserves the walk's
    sign and cannot lower its minimum edge strength, so these walks suffice.
    An extension is skipped when it cannot improve the best strength already
    recorded for its target state (walk strengths never increase along the
    walk, so dominated extensions contribute nothing). Guarded to small
    graphs; use :func:`signed_closure` for real work.
    """
    if graph.n > max_nodes:
        raise ValueError(
            f"walk enumeration is limited to {max_nodes} nodes, got {graph.n}"
        )
    n = graph.n
    adjacency: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
    for (i, j), dep in graph.edges.items():
        flip = 0 if dep.sign == POSITIVE else 1
        adjacency[i - 1].append((j - 1, dep.strength, flip))

    positive = np.zeros((n, n))
    negative = np.zeros((n, n))
    for source in range(n):
        best = [[0.0, 0.0] for _ in range(n)]

        def extend(node: int, parity: int, strength: float) -> None:
            for nxt, weight, flip in adjacency[node]:
                s = weight if weight < strength else strength
                p = parity ^ flip
                if s > best[nxt][p]:
                    best[nxt][p] = s
                    extend(nxt, p, s)

        extend(source, 0, math.inf)
        for j in range(n):
            positive[source, j] = best[j][0]
            negative[source, j] = best[j][1]
    return SignedClosure(graph.value_type, positive, negative)


def sign_label(sign: int) -> str:
    return _SIGN_LABELS[sign]


def sign_from_label(label: str) -> int:
    for sign, text in _SIGN_LABELS.items():
        if label == text:
            return sign
    raise ValueError(f"sign must be '+' or '-', got {label!r}")
