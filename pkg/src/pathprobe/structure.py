"""Exact structural analysis of revealed graphs.

Components, 2-core peeling, longest paths in sparse components, maximum
vertex-disjoint path packings in forests (both the covered-vertex and the
path-count objective), the bad-edge path splitter, and a brute-force
packing oracle for small instances.

All operations are pure functions on immutable inputs.  A Forest is just
a SimpleGraph that happens to be acyclic; the forest operations validate
acyclicity and treat the minimum-id vertex of each tree as its root.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import InvalidInputError, SizeLimitError
from .pathfind import Path

_NEG = -(1 << 50)


class SimpleGraph:
    """Undirected simple graph on vertices 0..n-1, sorted adjacency lists."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: list[list[int]]):
        self.n = n
        self.adj = adj

    @classmethod
    def from_edges(cls, n: int, edges) -> "SimpleGraph":
        if n < 0:
            raise InvalidInputError("vertex count must be >= 0")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u}, {v}) outside vertex range [0, {n})")
            if u == v:
                raise InvalidInputError(f"loop at vertex {u} not allowed")
            seen.add((u, v) if u < v else (v, u))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in seen:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        return cls(n, adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])


Forest = SimpleGraph


@dataclass
class ComponentSummary:
    """Connected components sorted by decreasing size (ties: smallest id)."""

    components: list[list[int]]
    largest: list[int]
    second_largest_size: int


@dataclass
class CoreResult:
    """The 2-core: maximal induced subgraph of minimum degree >= 2."""

    core_vertices: set[int]
    core_edges: list[tuple[int, int]]


@dataclass
class PathCoverResult:
    """A vertex-disjoint set of paths meeting a per-path length floor."""

    covered_vertices: int
    paths: list[Path]
    objective: str  # "max-coverage" | "max-count"


def connected_components(g: SimpleGraph) -> ComponentSummary:
    """Exact component partition via breadth-first search."""
    n = g.n
    comp_id = [-1] * n
    comps: list[list[int]] = []
    for s in range(n):
        if comp_id[s] >= 0:
            continue
        cid = len(comps)
        comp_id[s] = cid
        members = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.adj[v]:
                if comp_id[w] < 0:
                    comp_id[w] = cid
                    members.append(w)
                    queue.append(w)
        comps.append(sorted(members))
    comps.sort(key=lambda c: (-len(c), c[0]))
    largest = comps[0] if comps else []
    second = len(comps[1]) if len(comps) > 1 else 0
    return ComponentSummary(components=comps, largest=largest, second_largest_size=second)


def two_core(g: SimpleGraph) -> CoreResult:
    """Iteratively peel vertices of degree <= 1 until stable."""
    n = g.n
    deg = [len(a) for a in g.adj]
    removed = [False] * n
    stack = [v for v in range(n) if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if removed[v]:
            continue
        removed[v] = True
        for w in g.adj[v]:
            if not removed[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    stack.append(w)
    core_vertices = {v for v in range(n) if not removed[v]}
    core_edges = sorted(
        (u, w) for u in core_vertices for w in g.adj[u] if u < w and w in core_vertices
    )
    return CoreResult(core_vertices=core_vertices, core_edges=core_edges)


def is_forest(g: SimpleGraph) -> bool:
    """True when the graph is acyclic (union-find cycle test)."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def read_edge_list(path, n: int | None = None) -> SimpleGraph:
    """Read the fixture format: one "u v" pair per line, 0-based,
    whitespace-separated; blank lines and #-comments ignored.

    The vertex count defaults to 1 + the largest endpoint mentioned.
    """
    edges = []
    largest = -1
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) != 2:
                raise InvalidInputError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as e:
                raise InvalidInputError(f"{path}:{lineno}: non-integer endpoint") from e
            edges.append((u, v))
            largest = max(largest, u, v)
    if n is None:
        n = largest + 1
    return SimpleGraph.from_edges(n, edges)


def write_edge_list(path, g: SimpleGraph) -> None:
    """Write a graph in the one-"u v"-per-line fixture format."""
    with open(path, "w") as fh:
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# Longest path in a sparse component
# ---------------------------------------------------------------------------


def _bfs_far(adj: list[list[int]], start: int, excluded: set[tuple[int, int]] | None):
    """Farthest vertex from start and its distance, skipping excluded edges."""
    dist = {start: 0}
    queue = deque([start])
    far, far_d = start, 0
    while queue:
        v = queue.popleft()
        dv = dist[v]
        for w in adj[v]:
            if excluded and ((v, w) if v < w else (w, v)) in excluded:
                continue
            if w not in dist:
                dist[w] = dv + 1
                if dv + 1 > far_d:
                    far, far_d = w, dv + 1
                queue.append(w)
    return far, far_d, len(dist)


def _tree_diameter(adj: list[list[int]], excluded: set[tuple[int, int]] | None = None) -> int:
    """Double sweep: exact longest path length of a tree."""
    if not adj:
        return 0
    u, _, _ = _bfs_far(adj, 0, excluded)
    _, d, _ = _bfs_far(adj, u, excluded)
    return d


def _bridge_edges(adj: list[list[int]]) -> set[tuple[int, int]]:
    """Bridges of a graph given by local adjacency lists (iterative)."""
    k = len(adj)
    disc = [-1] * k
    low = [0] * k
    parent = [-1] * k
    ptr = [0] * k
    bridges: set[tuple[int, int]] = set()
    timer = 0
    for s in range(k):
        if disc[s] >= 0:
            continue
        disc[s] = low[s] = timer
        timer += 1
        stack = [s]
        while stack:
            v = stack[-1]
            if ptr[v] < len(adj[v]):
                w = adj[v][ptr[v]]
                ptr[v] += 1
                if disc[w] < 0:
                    parent[w] = v
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append(w)
                elif w != parent[v]:
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            else:
                stack.pop()
                if stack:
                    p = stack[-1]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] > disc[p]:
                        bridges.add((p, v) if p < v else (v, p))
    return bridges


def longest_path_in_component(
    g: SimpleGraph,
    component,
    spanning_tree_cap: int = 4096,
) -> tuple[int, bool]:
    """Length of the longest simple path in the induced subgraph.

    Trees are solved by the double sweep.  Components with cycles are
    solved by maximizing the diameter over all spanning trees: every
    simple path extends to a spanning tree, so the maximum spanning-tree
    diameter equals the longest path.  Only non-bridge edges can be
    dropped, which keeps the enumeration small for the near-critical
    components this is used on.  If more than ``spanning_tree_cap``
    spanning trees exist (or the removal-set scan explodes), the best
    diameter so far is returned with exact=False.
    """
    comp = sorted(set(component))
    if not comp:
        raise InvalidInputError("component must be non-empty")
    idx = {v: i for i, v in enumerate(comp)}
    k = len(comp)
    adj: list[list[int]] = [[] for _ in range(k)]
    edges_local: list[tuple[int, int]] = []
    for v in comp:
        if not 0 <= v < g.n:
            raise InvalidInputError(f"vertex {v} outside graph")
        for w in g.adj[v]:
            if w in idx and v < w:
                a, b = idx[v], idx[w]
                adj[a].append(b)
                adj[b].append(a)
                edges_local.append((a, b) if a < b else (b, a))
    _, _, reached = _bfs_far(adj, 0, None)
    if reached != k:
        raise InvalidInputError("component is not connected in the graph")

    m = len(edges_local)
    if m == k - 1:
        return _tree_diameter(adj), True

    excess = m - (k - 1)
    removable = sorted(set(edges_local) - _bridge_edges(adj))
    best = 0
    trees_found = 0
    scanned = 0
    scan_limit = max(1 << 16, spanning_tree_cap * 16)
    for combo in itertools.combinations(removable, excess):
        scanned += 1
        if scanned > scan_limit:
            return best, False
        dropped = set(combo)
        parent = list(range(k))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for e in edges_local:
            if e in dropped:
                continue
            ru, rv = find(e[0]), find(e[1])
            if ru == rv:
                acyclic = False
                break
            parent[ru] = rv
        if not acyclic:
            continue
        trees_found += 1
        if trees_found > spanning_tree_cap:
            return best, False
        d = _tree_diameter(adj, dropped)
        if d > best:
            best = d
    return best, True


# ---------------------------------------------------------------------------
# Exact vertex-disjoint path packing in forests
# ---------------------------------------------------------------------------


class _ForestPackingDP:
    """Tree DP for disjoint path packing with a per-path length floor L.

    The state at a vertex is the edge count d of a "dangling" segment: a
    path end hanging below the vertex, still extendable upward.  Dangling
    vertices are paid for only when their segment is finalized, either
    straight (d >= L) or by joining two child segments through the vertex.
    Danglings are capped (2L for the coverage objective, L for the count
    objective): any packing normalizes to one whose paths are short enough
    that longer segments never help, so the cap preserves exactness while
    keeping the state space O(n * L).

    Children merge in increasing vertex id.  Witness paths are rebuilt by
    re-running each vertex's merge from the stored child exports, so the
    forward pass only keeps O(n * L) integers.
    """

    def __init__(self, g: SimpleGraph, min_length: int, objective: str):
        self.g = g
        self.L = min_length
        self.cover = objective == "max-coverage"
        self.cap = 2 * min_length if self.cover else min_length
        n = g.n
        self.children: list[list[int]] = [[] for _ in range(n)]
        self.E: list[list[int] | None] = [None] * n
        self.T = [0] * n
        self.roots: list[int] = []
        self.total = 0

    # -- forward pass -----------------------------------------------------

    def run(self) -> int:
        g = self.g
        n = g.n
        parent = [-2] * n  # -2 unseen, -1 root
        for r in range(n):
            if parent[r] != -2:
                continue
            parent[r] = -1
            order = []
            stack = [r]
            while stack:
                v = stack.pop()
                order.append(v)
                kids = [w for w in g.adj[v] if w != parent[v]]
                self.children[v] = kids
                for w in kids:
                    parent[w] = v
                    stack.append(w)
            for v in reversed(order):
                f0, f1, f2, _ = self._merge(v, want_stages=False)
                self.E[v], self.T[v] = self._export(f0, f1, f2)
            self.roots.append(r)
            self.total += self.T[r]
        return self.total

    def _merge(self, v: int, want_stages: bool):
        cap, L, cover = self.cap, self.L, self.cover
        f0 = 0
        f1 = [_NEG] * (cap + 1)
        f2 = _NEG
        stages = [(f0, f1[:], f2)] if want_stages else None
        for c in self.children[v]:
            Ec = self.E[c]
            Tc = self.T[c]
            # suffix max over d of f1[d] + d (cover pays vertices, count pays 1)
            suf = [_NEG] * (cap + 2)
            for d in range(cap, 0, -1):
                s = f1[d] + d if cover else f1[d]
                suf[d] = s if s > suf[d + 1] else suf[d + 1]
            join = _NEG
            for dc in range(cap + 1):
                e = Ec[dc]
                if e <= _NEG // 2:
                    continue
                need = L - 1 - dc
                if need < 1:
                    need = 1
                if need <= cap and suf[need] > _NEG // 2:
                    val = e + suf[need] + (dc + 2 if cover else 1)
                    if val > join:
                        join = val
            nf2 = f2 + Tc
            if join > nf2:
                nf2 = join
            nf1 = [_NEG] * (cap + 1)
            for d in range(1, cap + 1):
                a = f1[d] + Tc
                ec = Ec[d - 1]
                b = f0 + ec if ec > _NEG // 2 else _NEG
                nf1[d] = a if a >= b else b
            f0, f1, f2 = f0 + Tc, nf1, nf2
            if want_stages:
                stages.append((f0, f1[:], f2))
        return f0, f1, f2, stages

    def _export(self, f0: int, f1: list[int], f2: int):
        cap, L, cover = self.cap, self.L, self.cover
        E = [f0] + f1[1:]
        T = f0 if f0 > f2 else f2
        for d in range(1, cap + 1):
            x = f1[d]
            if x <= _NEG // 2:
                continue
            if x > T:
                T = x  # drop the dangling, its vertices stay uncovered
            if d >= L:
                y = x + (d + 1 if cover else 1)
                if y > T:
                    T = y
        return E, T

    # -- witness reconstruction -------------------------------------------

    def witnesses(self) -> list[tuple[int, ...]]:
        paths: list[tuple[int, ...]] = []
        work: list[tuple] = [("T", r) for r in self.roots]
        while work:
            item = work.pop()
            kind = item[0]
            if kind == "T":
                self._resolve_terminal(item[1], work)
            elif kind == "D":
                self._resolve_dangling(item, work)
            elif kind == "EMIT":
                paths.append(tuple(item[1]))
            else:  # EMIT_JOIN
                left, right = item[1], item[2]
                paths.append(tuple(reversed(left)) + tuple(right))
        return paths

    def _resolve_terminal(self, v: int, work: list) -> None:
        cap, L, cover = self.cap, self.L, self.cover
        f0, f1, f2, stages = self._merge(v, want_stages=True)
        target = self.T[v]
        if f0 == target:
            for c in self.children[v]:
                work.append(("T", c))
            return
        for d in range(L, cap + 1):
            if f1[d] > _NEG // 2 and f1[d] + (d + 1 if cover else 1) == target:
                seg: list[int] = []
                work.append(("EMIT", seg))
                work.append(("D", v, d, seg, len(self.children[v]), stages))
                return
        if f2 == target:
            self._resolve_joined(v, stages, work)
            return
        for d in range(1, cap + 1):
            if f1[d] == target:
                seg = []
                work.append(("D", v, d, seg, len(self.children[v]), stages))
                return
        raise AssertionError("terminal state does not decompose")

    def _resolve_joined(self, v: int, stages: list, work: list) -> None:
        cap, L, cover = self.cap, self.L, self.cover
        kids = self.children[v]
        i = len(kids)
        while i >= 1:
            f0p, f1p, f2p = stages[i - 1]
            f2c = stages[i][2]
            c = kids[i - 1]
            if f2p > _NEG // 2 and f2p + self.T[c] == f2c:
                work.append(("T", c))
                i -= 1
                continue
            Ec = self.E[c]
            for d in range(1, cap + 1):
                if f1p[d] <= _NEG // 2:
                    continue
                for dc in range(cap + 1):
                    if Ec[dc] <= _NEG // 2 or d + dc + 1 < L:
                        continue
                    if f1p[d] + Ec[dc] + (d + dc + 2 if cover else 1) == f2c:
                        left: list[int] = []
                        right: list[int] = []
                        work.append(("EMIT_JOIN", left, right))
                        work.append(("D", c, dc, right, None, None))
                        work.append(("D", v, d, left, i - 1, stages))
                        return
            raise AssertionError("joined state does not decompose")
        raise AssertionError("join chain had no join")

    def _resolve_dangling(self, item: tuple, work: list) -> None:
        _, v, d, seg, upto, stages = item
        if stages is None:
            _, _, _, stages = self._merge(v, want_stages=True)
            upto = len(self.children[v])
        seg.append(v)
        kids = self.children[v]
        i = upto
        cur = d
        while cur > 0:
            assert i >= 1, "dangling outlives the child stages"
            f0p, f1p, _ = stages[i - 1]
            f1c = stages[i][1]
            c = kids[i - 1]
            if f1p[cur] > _NEG // 2 and f1p[cur] + self.T[c] == f1c[cur]:
                work.append(("T", c))
                i -= 1
                continue
            Ec = self.E[c]
            assert Ec[cur - 1] > _NEG // 2 and f0p + Ec[cur - 1] == f1c[cur]
            work.append(("D", c, cur - 1, seg, None, None))
            for j in range(i - 1):
                work.append(("T", kids[j]))
            return
        for j in range(i):
            work.append(("T", kids[j]))


def _packing(f: SimpleGraph, min_length: int, objective: str) -> PathCoverResult:
    if min_length < 1:
        raise InvalidInputError("minimum path length must be >= 1")
    if not is_forest(f):
        raise InvalidInputError("input graph has a cycle; expected a forest")
    dp = _ForestPackingDP(f, min_length, objective)
    value = dp.run()
    witness = [Path(p) for p in dp.witnesses()]
    for p in witness:
        assert p.length >= min_length
    covered = sum(p.size for p in witness)
    if objective == "max-coverage":
        assert covered == value, "witness coverage disagrees with DP value"
    else:
        assert len(witness) == value, "witness count disagrees with DP value"
    return PathCoverResult(covered_vertices=covered, paths=witness, objective=objective)


def forest_max_path_cover(f: SimpleGraph, min_length: int) -> PathCoverResult:
    """Maximum vertices covered by disjoint paths of length >= min_length."""
    return _packing(f, min_length, "max-coverage")


def forest_max_path_count(f: SimpleGraph, min_length: int) -> PathCoverResult:
    """Maximum number of disjoint paths of length >= min_length."""
    return _packing(f, min_length, "max-count")


# ---------------------------------------------------------------------------
# Path splitting around bad edges
# ---------------------------------------------------------------------------


def split_path(p: Path, bad_edges, alpha) -> list[Path]:
    """Delete ``bad_edges`` from the path and keep the long fragments.

    With |bad_edges| <= alpha * length and alpha >= 1/length, the kept
    fragments each have length >= 1/(3*alpha) and together cover at least
    (1/3 - alpha) * length vertices.  Thresholds are evaluated in exact
    rational arithmetic; float alphas snap to the nearest rational with
    denominator <= 10^12, so a float 1/9 means the exact ninth and the
    boundary case alpha = 1/length stays admissible.
    """
    length = p.length
    if length < 1:
        raise InvalidInputError("path must have at least one edge")
    alpha_f = alpha if isinstance(alpha, Rational) else Fraction(alpha).limit_denominator(10**12)
    if alpha_f <= 0:
        raise InvalidInputError("alpha must be positive")
    if alpha_f < Fraction(1, length):
        raise InvalidInputError("alpha must be at least 1/length")
    path_edges = set(p.edges())
    bad = set()
    for u, v in bad_edges:
        e = (u, v) if u < v else (v, u)
        if e not in path_edges:
            raise InvalidInputError(f"edge {e} is not an edge of the path")
        bad.add(e)
    if len(bad) > alpha_f * length:
        raise InvalidInputError("bad edge set exceeds alpha * length")

    threshold = 1 / (3 * alpha_f)
    out: list[Path] = []
    seg = [p.vertices[0]]
    for a, b in zip(p.vertices, p.vertices[1:]):
        e = (a, b) if a < b else (b, a)
        if e in bad:
            if len(seg) - 1 >= threshold:
                out.append(Path(tuple(seg)))
            seg = [b]
        else:
            seg.append(b)
    if len(seg) - 1 >= threshold:
        out.append(Path(tuple(seg)))
    return out


# ---------------------------------------------------------------------------
# Brute-force packing oracle for small instances
# ---------------------------------------------------------------------------


def brute_force_path_cover(
    g: SimpleGraph,
    min_length: int,
    objective: str = "max-coverage",
) -> PathCoverResult:
    """Exhaustive disjoint-path packing over all simple paths.

    A test oracle: enumerates every simple path of length >= min_length
    (deduplicated by vertex set), then solves the exact set-packing DP
    over the 2^n vertex subsets.  Limited to 14 vertices.
    """
    n = g.n
    if n > 14:
        raise SizeLimitError(f"brute force limited to 14 vertices, got {n}")
    if min_length < 1:
        raise InvalidInputError("minimum path length must be >= 1")

    masks: dict[int, tuple[int, ...]] = {}
    steps = 0
    for s in range(n):
        stack: list[tuple[int, int, tuple[int, ...]]] = [(s, 1 << s, (s,))]
        while stack:
            v, mask, pth = stack.pop()
            if len(pth) >= min_length + 1 and mask not in masks:
                masks[mask] = pth
            for w in g.adj[v]:
                if not (mask >> w) & 1:
                    steps += 1
                    if steps > 5_000_000:
                        raise SizeLimitError("path enumeration exploded")
                    stack.append((w, mask | (1 << w), pth + (w,)))

    by_low: dict[int, list[int]] = {v: [] for v in range(n)}
    for mask in masks:
        by_low[(mask & -mask).bit_length() - 1].append(mask)

    cover = objective == "max-coverage"
    size = 1 << n
    f = [0] * size
    choice = [0] * size
    for S in range(1, size):
        lowbit = S & -S
        low = lowbit.bit_length() - 1
        best = f[S ^ lowbit]
        best_t = 0
        for t in by_low[low]:
            if t & S == t:
                val = f[S ^ t] + (t.bit_count() if cover else 1)
                if val > best:
                    best, best_t = val, t
        f[S], choice[S] = best, best_t

    paths: list[Path] = []
    S = size - 1
    while S:
        t = choice[S]
        if t:
            paths.append(Path(masks[t]))
            S ^= t
        else:
            S ^= S & -S
    covered = sum(p.size for p in paths)
    if cover:
        assert covered == f[size - 1]
    return PathCoverResult(covered_vertices=covered, paths=paths, objective=objective)
