"""Reference adaptive algorithms that interact with a LazyOracle.

``dfs_long_path`` is the depth-first long-path finder: the active stack
always forms a path, new neighbours are probed in a caller-supplied vertex
order, and the search stops as soon as the stack reaches the target
length.  ``discover_component`` grows a spanning tree of the component of
a start vertex by sweeping the pairs that leave the current tree.

Both are pure functions over a borrowed oracle; parallelism belongs at
the experiment layer, one oracle per trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidInputError
from .oracle import LazyOracle

_PROBE_CHUNK = 1024


@dataclass(frozen=True)
class Path:
    """An ordered sequence of distinct vertex ids.

    Length counts edges, size counts vertices (size = length + 1).
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInputError("path vertices must be distinct")
        if not self.vertices:
            raise InvalidInputError("a path has at least one vertex")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def size(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(min(a, b), max(a, b)) for a, b in zip(vs, vs[1:])]


@dataclass
class SearchOutcome:
    """Result of one oracle-driven search run with exact query accounting."""

    path: Optional[Path]
    queries_used: int
    positives_used: int
    succeeded: bool


def _validated_order(vertex_order: Sequence[int], n: int) -> np.ndarray:
    order = np.asarray(vertex_order, dtype=np.int64)
    if order.ndim != 1 or order.size == 0:
        raise InvalidInputError("vertex order must be a non-empty 1-d sequence")
    if int(order.min()) < 0 or int(order.max()) >= n:
        raise InvalidInputError("vertex order contains a vertex outside [0, n)")
    if np.unique(order).size != order.size:
        raise InvalidInputError("vertex order contains duplicates")
    return order


def dfs_long_path(
    oracle: LazyOracle,
    vertex_order: Sequence[int],
    target_length: int,
    query_budget: int | None = None,
    observer: Callable[[str, list[int]], None] | None = None,
) -> SearchOutcome:
    """Depth-first search for a path of ``target_length`` edges.

    From the stack top, vertices not yet visited are probed in
    ``vertex_order``; a positive answer pushes the neighbour, exhaustion
    pops the top.  The stack is a path at every step.  The search stops on
    reaching the target, on exploring every listed vertex, or when
    ``query_budget`` distinct pairs have been drawn.  The longest
    stack-path seen is returned even on failure.

    ``vertex_order`` may cover only a subset of the oracle's vertices, in
    which case the search is confined to that subset.  ``observer``, when
    given, is called with ("push"|"pop", current stack copy).
    """
    if target_length < 0:
        raise InvalidInputError("target_length must be >= 0")
    if query_budget is not None and query_budget < 0:
        raise InvalidInputError("query_budget must be >= 0 when given")
    n = oracle.n
    order = _validated_order(vertex_order, n)
    norder = int(order.size)

    q0 = oracle.queries
    pos0 = oracle.positives
    budget_left = math.inf if query_budget is None else int(query_budget)

    visited = np.zeros(n, dtype=bool)
    ptr: dict[int, int] = {}
    stack: list[int] = []
    best: list[int] = []
    best_len = -1
    root_scan = 0

    while True:
        if best_len >= target_length:
            break
        if not stack:
            while root_scan < norder and visited[order[root_scan]]:
                root_scan += 1
            if root_scan == norder:
                break  # every listed vertex explored
            v = int(order[root_scan])
            root_scan += 1
            visited[v] = True
            ptr[v] = 0
            stack.append(v)
            if observer is not None:
                observer("push", list(stack))
            if len(stack) - 1 > best_len:
                best_len = len(stack) - 1
                best = list(stack)
            continue

        u = stack[-1]
        i = ptr[u]
        if i >= norder:
            stack.pop()
            if observer is not None:
                observer("pop", list(stack))
            continue
        if budget_left <= 0:
            break

        window = order[i : i + _PROBE_CHUNK]
        unv_idx = np.nonzero(~visited[window])[0]
        if unv_idx.size == 0:
            ptr[u] = i + int(window.size)
            continue
        limited = budget_left < unv_idx.size
        probe_idx = unv_idx[: int(budget_left)] if limited else unv_idx
        cand = window[probe_idx]

        hit, fresh = oracle.probe_first(u, cand)
        budget_left -= fresh

        if hit >= 0:
            ptr[u] = i + int(probe_idx[hit]) + 1
            w = int(cand[hit])
            visited[w] = True
            ptr[w] = 0
            stack.append(w)
            if observer is not None:
                observer("push", list(stack))
            if len(stack) - 1 > best_len:
                best_len = len(stack) - 1
                best = list(stack)
        elif limited:
            ptr[u] = i + int(probe_idx[-1]) + 1
        else:
            ptr[u] = i + int(window.size)

    succeeded = best_len >= target_length
    return SearchOutcome(
        path=Path(tuple(best)) if best else None,
        queries_used=oracle.queries - q0,
        positives_used=oracle.positives - pos0,
        succeeded=succeeded,
    )


def discover_component(
    oracle: LazyOracle,
    start: int,
    query_budget: int | None = None,
) -> tuple[list[tuple[int, int]], set[int], int]:
    """Grow a spanning tree of the component of ``start``.

    Each round sweeps the pairs between tree and outside vertices (outside
    vertices in increasing id, tree vertices in insertion order) and
    appends the first edge found.  Terminates when a full sweep finds no
    edge, or when the budget of distinct drawn pairs is exhausted.  With
    an unlimited budget the tree spans the whole component.

    Returns (tree edge list, component vertex set, queries used).
    """
    oracle._check_vertex(start)
    q0 = oracle.queries
    tree_edges: list[tuple[int, int]] = []
    in_tree: list[int] = [start]
    outside = [v for v in range(oracle.n) if v != start]

    def budget_hit() -> bool:
        return query_budget is not None and oracle.queries - q0 >= query_budget

    growing = True
    while growing:
        growing = False
        found: tuple[int, int] | None = None
        for v in outside:
            for u in in_tree:
                if not oracle.is_revealed(u, v) and budget_hit():
                    return tree_edges, set(in_tree), oracle.queries - q0
                if oracle.query(u, v):
                    found = (u, v)
                    break
            if found:
                break
        if found:
            u, v = found
            tree_edges.append((min(u, v), max(u, v)))
            in_tree.append(v)
            outside.remove(v)
            growing = True

    return tree_edges, set(in_tree), oracle.queries - q0
