"""Galton-Watson and random labeled tree toolkit.

Covers the subcritical dual parameter, the Borel size law of Poisson
branching trees, Poisson-GW sampling, uniform labeled trees via Prüfer
decoding, the random-map tree construction, height/diameter statistics,
Monte Carlo long-path probabilities, and the random-map union bound.

Monte Carlo helpers consume integer seeds and derive one child seed per
trial, so runs are reproducible and trials could be farmed out in any
order.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapExceededError, DomainError, InvalidInputError
from .rng import derive_seed

_Z99 = 2.5758293035489004  # two-sided 99% normal quantile

#: epsilon range in which the dual parameter obeys mu <= 1 - eps/2
DUAL_EPSILON_GUARD = 0.2

#: hard cap on sampled branching-tree size
GW_VERTEX_CAP = 10_000_000


@dataclass(frozen=True)
class DualParameter:
    """Subcritical conjugate of a supercritical excess epsilon.

    mu in (0, 1) solves mu * exp(-mu) = (1 + eps) * exp(-(1 + eps)).
    """

    epsilon: float
    mu: float
    residual: float


@dataclass
class RootedTree:
    """Rooted tree as parent links plus per-vertex depth (root depth 0)."""

    t: int
    parent: list[int]  # parent[root] == -1
    depth: list[int]
    root: int

    def undirected_edges(self) -> list[tuple[int, int]]:
        return [
            (v, p) if v < p else (p, v)
            for v, p in enumerate(self.parent)
            if p >= 0
        ]


@dataclass
class TreeStatRecord:
    """Height/diameter summary of one tree, with an optional path event."""

    t: int
    height: int
    diameter: int
    has_path_geq: bool | None = None


@dataclass(frozen=True)
class CalibrationConfig:
    """Path-length constant C with its derived scales.

    ell = ceil((C / eps) * ln(1 / eps)) is the per-path length floor and
    t0 = ceil((15 / eps^2) * ln(1 / eps)) the tree-size horizon used when
    bounding long-path mass.  Ceilings keep both integer; t0 >= ell holds
    whenever eps <= 15 / C.
    """

    C: float
    epsilon: float
    ell: int
    t0: int

    @classmethod
    def create(cls, C: float, epsilon: float) -> "CalibrationConfig":
        if not 0.0 < epsilon < 1.0:
            raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
        if C <= 0:
            raise DomainError(f"constant C must be positive, got {C!r}")
        log_inv = math.log(1.0 / epsilon)
        ell = math.ceil((C / epsilon) * log_inv)
        t0 = math.ceil((15.0 / epsilon**2) * log_inv)
        return cls(C=C, epsilon=epsilon, ell=ell, t0=t0)


def solve_dual_mu(epsilon: float) -> DualParameter:
    """Solve mu * e^-mu = (1+eps) * e^-(1+eps) for mu in (0, 1) by bisection."""
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    target = (1.0 + epsilon) * math.exp(-(1.0 + epsilon))
    lo, hi = 1e-15, 1.0 - 1e-15
    if target <= lo * math.exp(-lo):
        raise DomainError(f"epsilon={epsilon!r} too large: dual parameter underflows")
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:  # bracket reached float resolution
            break
        if mid * math.exp(-mid) < target:
            lo = mid
        else:
            hi = mid
    mu = lo
    residual = abs(mu * math.exp(-mu) - target)
    assert residual <= 1e-12, f"bisection failed to converge: residual {residual}"
    if epsilon <= DUAL_EPSILON_GUARD:
        assert mu <= 1.0 - epsilon / 2.0
    return DualParameter(epsilon=epsilon, mu=mu, residual=residual)


def borel_pmf(mu: float, t: int) -> float:
    """P[total branching-tree size = t] = t^(t-1) (mu e^-mu)^t / (mu t!).

    Evaluated in log space so it stays finite out to t ~ 10^6.
    """
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu!r}")
    if not isinstance(t, int) or t < 1:
        raise DomainError(f"t must be a positive integer, got {t!r}")
    log_p = (t - 1) * math.log(t) + t * (math.log(mu) - mu) - math.log(mu) - math.lgamma(t + 1)
    return math.exp(log_p)


def sample_gw_tree(mu: float, rng_seed: int, max_vertices: int = GW_VERTEX_CAP) -> RootedTree:
    """Breadth-first Poisson(mu) branching tree; a.s. finite for mu < 1.

    Offspring counts are drawn by inversion of the Poisson CDF.  Trees
    about to exceed ``max_vertices`` abort with CapExceededError.
    """
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu!r}")
    rng = random.Random(rng_seed)
    exp_neg_mu = math.exp(-mu)
    parent = [-1]
    depth = [0]
    i = 0
    while i < len(parent):
        u = rng.random()
        k = 0
        pk = exp_neg_mu
        acc = pk
        while u > acc and pk > 0.0:
            k += 1
            pk *= mu / k
            acc += pk
        if len(parent) + k > max_vertices:
            raise CapExceededError(f"branching tree exceeded {max_vertices} vertices")
        d = depth[i] + 1
        for _ in range(k):
            parent.append(i)
            depth.append(d)
        i += 1
    return RootedTree(t=len(parent), parent=parent, depth=depth, root=0)


def _decode_prufer(code: list[int], t: int) -> list[tuple[int, int]]:
    """Linear-time Prüfer decoding to an edge list on {0..t-1}."""
    degree = [1] * t
    for x in code:
        degree[x] += 1
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    edges = []
    for x in code:
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, t - 1))
    return edges


def _rooted_from_edges(t: int, edges: list[tuple[int, int]], root: int) -> RootedTree:
    adj: list[list[int]] = [[] for _ in range(t)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    parent = [-1] * t
    depth = [0] * t
    seen = [False] * t
    seen[root] = True
    queue = deque([root])
    reached = 1
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                depth[w] = depth[v] + 1
                reached += 1
                queue.append(w)
    if reached != t:
        raise InvalidInputError("edge list does not form a tree")
    return RootedTree(t=t, parent=parent, depth=depth, root=root)


def sample_uniform_labeled_tree(t: int, rooted: bool, rng_seed: int) -> RootedTree:
    """Uniform labeled tree on {0..t-1} via a random Prüfer code.

    With ``rooted`` the root is drawn uniformly and independently (drawn
    after the code), matching the t^(t-1) rooted count; otherwise vertex 0
    anchors the parent links.
    """
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t!r}")
    rng = random.Random(rng_seed)
    if t == 1:
        return RootedTree(t=1, parent=[-1], depth=[0], root=0)
    code = [rng.randrange(t) for _ in range(t - 2)]
    edges = _decode_prufer(code, t)
    root = rng.randrange(t) if rooted else 0
    return _rooted_from_edges(t, edges, root)


def joyal_tree_from_map(f) -> RootedTree:
    """Tree on {0..t-1} built from a map f: [t] -> [t].

    The functional digraph i -> f(i) has a maximal vertex set M on which f
    restricts to a permutation (the vertices lying on cycles).  Edges
    inside M are replaced by the path f(i_1), f(i_2), ..., f(i_m) for
    i_1 < ... < i_m in M; orientations are dropped; the root is f(i_m).
    Every labeled tree arises from exactly t^2 of the t^t maps.
    """
    f = list(f)
    t = len(f)
    if t < 1:
        raise InvalidInputError("map must have at least one point")
    for i, fi in enumerate(f):
        if not isinstance(fi, int) or not 0 <= fi < t:
            raise InvalidInputError(f"f({i}) = {fi!r} is not a vertex in [0, {t})")

    indeg = [0] * t
    for fi in f:
        indeg[fi] += 1
    queue = deque(v for v in range(t) if indeg[v] == 0)
    off_cycle = [False] * t
    while queue:
        v = queue.popleft()
        off_cycle[v] = True
        w = f[v]
        indeg[w] -= 1
        if indeg[w] == 0 and not off_cycle[w]:
            queue.append(w)
    cycle_vertices = [v for v in range(t) if not off_cycle[v]]

    edges = [(i, f[i]) for i in range(t) if off_cycle[i]]
    images = [f[i] for i in cycle_vertices]
    edges.extend(zip(images, images[1:]))
    root = images[-1]
    return _rooted_from_edges(t, edges, root)


def tree_metrics(tree: RootedTree, path_threshold: int | None = None) -> TreeStatRecord:
    """Height (max depth) and diameter (double sweep, exact on trees)."""
    t = tree.t
    height = max(tree.depth)
    if t == 1:
        diameter = 0
    else:
        adj: list[list[int]] = [[] for _ in range(t)]
        for v, p in enumerate(tree.parent):
            if p >= 0:
                adj[v].append(p)
                adj[p].append(v)
        # the deepest vertex is a farthest vertex from the root, hence an
        # endpoint of some longest path
        start = max(range(t), key=tree.depth.__getitem__)
        dist = [-1] * t
        dist[start] = 0
        queue = deque([start])
        diameter = 0
        while queue:
            v = queue.popleft()
            dv = dist[v]
            if dv > diameter:
                diameter = dv
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
    has = None if path_threshold is None else diameter >= path_threshold
    return TreeStatRecord(t=t, height=height, diameter=diameter, has_path_geq=has)


@lru_cache(maxsize=64)
def _uniform_tree_diameters(t: int, trials: int, rng_seed: int) -> np.ndarray:
    """Sorted diameters of ``trials`` uniform rooted labeled trees."""
    out = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        tree = sample_uniform_labeled_tree(t, True, derive_seed(rng_seed, i))
        out[i] = tree_metrics(tree).diameter
    out.sort()
    return out


def estimate_p_t_ell(t: int, ell: int, trials: int, rng_seed: int) -> tuple[float, float]:
    """Monte Carlo estimate of the fraction of labeled trees on t vertices
    containing a path of length >= ell, with a 99% normal half-width.

    Memoized on (t, trials, rng_seed): re-estimating at a different ell
    reuses the same sampled trees, which also makes threshold sweeps
    exactly monotone.
    """
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t!r}")
    if not 0 <= ell <= t:
        raise DomainError(f"ell must lie in [0, t], got {ell!r}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    diams = _uniform_tree_diameters(t, trials, rng_seed)
    hits = int(trials - np.searchsorted(diams, ell, side="left"))
    p_hat = hits / trials
    halfwidth = _Z99 * math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return p_hat, halfwidth


@dataclass
class TEllStatistic:
    """Sample moments of the size-if-long-path variable over GW trees."""

    mean: float
    variance: float
    ci_halfwidth: float
    accepted: int
    rejected: int


def t_ell_statistic(mu: float, ell: int, trials: int, rng_seed: int) -> TEllStatistic:
    """Monte Carlo of T = |tree| * 1{tree has a path of length >= ceil(ell/3)}
    over Poisson(mu) branching trees.

    Trees hitting the vertex cap are rejected and counted.  Trees too
    small to contain the threshold path contribute 0 without a metrics
    pass (the diameter of a t-vertex tree is at most t - 1).
    """
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu!r}")
    if ell < 3:
        raise DomainError(f"ell must be >= 3, got {ell!r}")
    threshold = -(-ell // 3)
    total = 0
    total_sq = 0
    accepted = 0
    rejected = 0
    for i in range(trials):
        try:
            tree = sample_gw_tree(mu, derive_seed(rng_seed, i))
        except CapExceededError:
            rejected += 1
            continue
        accepted += 1
        if tree.t - 1 < threshold:
            continue
        rec = tree_metrics(tree, path_threshold=threshold)
        if rec.has_path_geq:
            total += tree.t
            total_sq += tree.t * tree.t
    mean = total / accepted if accepted else 0.0
    if accepted > 1:
        variance = (total_sq - accepted * mean * mean) / (accepted - 1)
        variance = max(variance, 0.0)
    else:
        variance = 0.0
    ci = _Z99 * math.sqrt(variance / accepted) if accepted else 0.0
    return TEllStatistic(mean=mean, variance=variance, ci_halfwidth=ci,
                         accepted=accepted, rejected=rejected)


@dataclass
class MapUnionBound:
    """Union-bound terms for b disjoint directed a-paths in a random map."""

    exact_term: float
    product_term: float
    exponential_bound: float


def map_union_bound(t: int, a: int, b: int) -> MapUnionBound:
    """Evaluate t!/((t-(a+1)b)! b!) (1/t)^(ab) and its exponential bound.

    Both the factorial form and the equivalent product form
    (t^b / b!) * prod_{i=1}^{(a+1)b-1} (1 - i/t) are computed in log
    space; the exponential upper bound is e^(b + b ln(t/b) - C((a+1)b,2)/t).
    """
    if a < 1 or b < 1:
        raise DomainError(f"a and b must be >= 1, got a={a!r}, b={b!r}")
    if (a + 1) * b > t:
        raise DomainError(f"(a+1)*b = {(a + 1) * b} exceeds t = {t}")
    k = (a + 1) * b
    log_exact = (
        math.lgamma(t + 1) - math.lgamma(t - k + 1) - math.lgamma(b + 1)
        - a * b * math.log(t)
    )
    log_prod = (
        b * math.log(t) - math.lgamma(b + 1)
        + sum(math.log1p(-i / t) for i in range(1, k))
    )
    log_bound = b + b * math.log(t / b) - (k * (k - 1) // 2) / t
    exact = math.exp(log_exact)
    bound = math.exp(log_bound)
    assert log_exact <= log_bound + 1e-12, "exact term exceeded its upper bound"
    return MapUnionBound(exact_term=exact, product_term=math.exp(log_prod),
                         exponential_bound=bound)


@dataclass
class HeightTailFit:
    """Empirical height-tail profile with a fitted sub-Gaussian shape.

    points hold (t, lambda, P[height >= lambda * sqrt(t)]); the fit is
    log P ~ log(C_hat) - c_hat * lambda^2 over points with positive mass.
    The constants are reported, never asserted.
    """

    points: list[tuple[int, float, float]]
    C_hat: float
    c_hat: float


def height_tail_profile(ts, lambdas, trials: int, rng_seed: int) -> HeightTailFit:
    """Tail probabilities of height / sqrt(t) for uniform rooted trees."""
    points: list[tuple[int, float, float]] = []
    for ti, t in enumerate(ts):
        heights = np.empty(trials, dtype=np.int64)
        for i in range(trials):
            tree = sample_uniform_labeled_tree(t, True, derive_seed(rng_seed, ti, i))
            heights[i] = max(tree.depth)
        for lam in lambdas:
            prob = float(np.mean(heights >= lam * math.sqrt(t)))
            points.append((t, float(lam), prob))
    xs = [lam * lam for _, lam, p in points if p > 0]
    ys = [math.log(p) for _, _, p in points if p > 0]
    if len(xs) >= 2 and max(xs) > min(xs):
        slope, intercept = np.polyfit(xs, ys, 1)
        c_hat = -float(slope)
        C_hat = float(math.exp(intercept))
    else:
        c_hat = float("nan")
        C_hat = float("nan")
    return HeightTailFit(points=points, C_hat=C_hat, c_hat=c_hat)
