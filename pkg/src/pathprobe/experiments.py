"""Experiment orchestration: the coverage-ceiling verifier, the query
amplification reduction, constant calibration, DFS scaling studies, the
random-tree disjoint-path Monte Carlo, and concentration-bound helpers.

Every experiment is a pure function of (config, master seed): per-trial
and per-round seeds are derived with ``derive_seed``, full G(n, p)
instances come from a geometric-skip sampler, and reruns reproduce
results byte for byte.
"""

from __future__ import annotations

import math
import random
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, ProtocolViolationError
from .gw import (
    CalibrationConfig,
    map_union_bound,
    sample_uniform_labeled_tree,
    estimate_p_t_ell,
)
from .oracle import LazyOracle, OracleConfig, RevealedGraph, new_oracle
from .pathfind import Path, dfs_long_path
from .rng import derive_seed
from .structure import (
    SimpleGraph,
    connected_components,
    forest_max_path_cover,
    forest_max_path_count,
    longest_path_in_component,
    split_path,
    two_core,
)

_Z99 = 2.5758293035489004

#: warn (don't refuse) above this excess; the theory targets small epsilon
EPSILON_APPLICABILITY = 0.2

#: covered-vertex ceiling is CEILING_COEFF * eps^2 * n
CEILING_COEFF = 13.0

#: grid resolution for the calibration sum over tree sizes
CALIBRATION_GRID_POINTS = 32


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared experiment parameters; p = (1 + epsilon) / n."""

    n: int
    epsilon: float
    q: float
    calibration: CalibrationConfig
    trials: int
    master_seed: int

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n!r}")
        if self.epsilon <= 0:
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon!r}")
        if not 0.0 < self.p < 1.0:
            raise ConfigurationError(
                f"p = (1 + eps)/n = {self.p!r} must lie in (0, 1); increase n"
            )
        if not 0.0 < self.q < 1.0:
            raise ConfigurationError(f"q must lie in (0, 1), got {self.q!r}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials!r}")

    @property
    def p(self) -> float:
        return (1.0 + self.epsilon) / self.n


def default_config(
    n: int,
    epsilon: float,
    C: float,
    q: float = 0.5,
    trials: int = 1,
    master_seed: int = 0,
) -> ExperimentConfig:
    cfg = ExperimentConfig(
        n=n,
        epsilon=epsilon,
        q=q,
        calibration=CalibrationConfig.create(C, epsilon),
        trials=trials,
        master_seed=master_seed,
    )
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# Full-instance G(n, p) generation
# ---------------------------------------------------------------------------


def pair_from_index(n: int, idx: int) -> tuple[int, int]:
    """The idx-th unordered pair in lexicographic order over 0 <= i < j < n."""
    b = 2 * n - 1
    i = (b - math.isqrt(b * b - 8 * idx)) // 2

    def cum(r: int) -> int:
        return r * (2 * n - r - 1) // 2

    while cum(i + 1) <= idx:
        i += 1
    while cum(i) > idx:
        i -= 1
    return i, i + 1 + (idx - cum(i))


def sample_gnp_edges(n: int, p: float, seed: int) -> list[tuple[int, int]]:
    """Edge list of one G(n, p) draw via geometric skips over the pair
    sequence: expected O(n + p n^2) time, never one Bernoulli per pair."""
    m_total = n * (n - 1) // 2
    if p <= 0.0 or m_total == 0:
        return []
    if p >= 1.0:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng = random.Random(seed)
    ln_q = math.log1p(-p)
    edges: list[tuple[int, int]] = []
    idx = -1
    while True:
        idx += 1 + int(math.log(1.0 - rng.random()) / ln_q)
        if idx >= m_total:
            return edges
        edges.append(pair_from_index(n, idx))


# ---------------------------------------------------------------------------
# Coverage-ceiling verification
# ---------------------------------------------------------------------------


@dataclass
class CoverageReport:
    """Structural accounting of one G(n, p) instance against the
    disjoint-long-path coverage ceiling.

    X_ell counts vertices of small components (below the component-size
    threshold, excluding the largest component) that contain a path of
    length >= ell; Z_ell is the optimal disjoint-path coverage at
    threshold ceil(ell/3) in the forest left when the 2-core's edges are
    removed from the largest component.  The surrogate
    X_ell + 6*core + 6*Z_ell upper-bounds total long-path coverage and is
    compared against ceiling = 13 * eps^2 * n.
    """

    n: int
    epsilon: float
    seed: int
    ell: int
    X_ell: int
    C1_size: int
    core_size: int
    Z_ell: int
    surrogate: int
    ceiling: float
    small_component_threshold: int
    second_size: int
    inexact_components: int

    SCALAR_FIELDS = (
        "n", "epsilon", "seed", "ell", "X_ell", "C1_size", "core_size",
        "Z_ell", "surrogate", "ceiling", "small_component_threshold",
        "second_size", "inexact_components",
    )

    def row(self) -> list:
        return [getattr(self, f) for f in self.SCALAR_FIELDS]


def coverage_verify(
    config: ExperimentConfig,
    trial: int = 0,
    spanning_tree_cap: int = 4096,
) -> CoverageReport:
    """Generate one fully revealed G(n, p) instance and account for every
    term of the long-path coverage surrogate."""
    config.validate()
    eps = config.epsilon
    n = config.n
    if eps > EPSILON_APPLICABILITY:
        warnings.warn(
            f"epsilon={eps} above the applicability threshold "
            f"{EPSILON_APPLICABILITY}; ceiling checks may not be meaningful",
            RuntimeWarning,
            stacklevel=2,
        )
    seed = derive_seed(config.master_seed, trial)
    g = SimpleGraph.from_edges(n, sample_gnp_edges(n, config.p, seed))

    summary = connected_components(g)
    c1 = summary.largest
    c1_set = set(c1)
    ell = config.calibration.ell
    threshold = math.ceil((20.0 / eps**2) * math.log(n)) if n > 1 else 1

    # vertices in small components (never the largest one) with a long path
    x_ell = 0
    inexact = 0
    for comp in summary.components[1:]:
        size = len(comp)
        if size > threshold or size < ell + 1:
            continue
        length, exact = longest_path_in_component(g, comp, spanning_tree_cap)
        if not exact:
            inexact += 1
        if length >= ell or not exact:
            x_ell += size

    core = two_core(g)
    core_c1 = core.core_vertices & c1_set
    core_edges_c1 = {e for e in core.core_edges if e[0] in c1_set}

    index = {v: i for i, v in enumerate(c1)}
    forest_edges = [
        (index[u], index[v])
        for u in c1
        for v in g.adj[u]
        if u < v and v in c1_set and (u, v) not in core_edges_c1
    ]
    pendant_forest = SimpleGraph.from_edges(len(c1), forest_edges)
    z_threshold = -(-ell // 3)
    z_ell = forest_max_path_cover(pendant_forest, z_threshold).covered_vertices

    surrogate = x_ell + 6 * len(core_c1) + 6 * z_ell
    return CoverageReport(
        n=n,
        epsilon=eps,
        seed=seed,
        ell=ell,
        X_ell=x_ell,
        C1_size=len(c1),
        core_size=len(core_c1),
        Z_ell=z_ell,
        surrogate=surrogate,
        ceiling=CEILING_COEFF * eps**2 * n,
        small_component_threshold=threshold,
        second_size=summary.second_largest_size,
        inexact_components=inexact,
    )


def coverage_sweep(config: ExperimentConfig) -> list[CoverageReport]:
    return [coverage_verify(config, trial=t) for t in range(config.trials)]


# ---------------------------------------------------------------------------
# The amplification reduction
# ---------------------------------------------------------------------------

#: an adaptive algorithm: (oracle, ordered vertices, target length, budget)
#: -> Path or None
AdaptiveAlgorithm = Callable[[LazyOracle, Sequence[int], int, Optional[int]], Optional[Path]]


def dfs_algorithm(
    oracle: LazyOracle,
    ordered_vertices: Sequence[int],
    target_length: int,
    query_budget: int | None,
) -> Path | None:
    """The depth-first finder wrapped in the reduction's algorithm interface."""
    outcome = dfs_long_path(oracle, ordered_vertices, target_length, query_budget)
    return outcome.path if outcome.succeeded else None


@dataclass
class RoundRecord:
    index: int
    permutation_seed: int
    L_size: int  # pairs newly revealed this round
    K_size: int  # positive pairs newly revealed this round
    succeeded: bool
    path: tuple[int, ...] | None
    B_size: int | None  # path edges first revealed in an earlier round
    kept: bool | None  # bad-edge share small enough to split


@dataclass
class ReductionTranscript:
    """Full record of one amplification run.

    The same pair-keyed oracle over the inflated vertex set serves every
    round, so a pair is Bernoulli-sampled exactly once globally and the
    assembled graph H (all positively answered pairs) automatically obeys
    the first-query rule.
    """

    n: int
    epsilon: float
    q: float
    trial: int
    n_prime: int
    s: int
    target_length: int
    subpath_floor: int
    alpha: float
    per_round_budget: int
    rounds: list[RoundRecord]
    vertex_counts: list[int]
    H: RevealedGraph
    I_size: int
    coverage_in_H: int
    successes: int

    SCALAR_FIELDS = (
        "n", "epsilon", "q", "trial", "n_prime", "s", "target_length",
        "subpath_floor", "alpha", "per_round_budget", "I_size",
        "coverage_in_H", "successes", "total_queries", "total_positives",
    )

    @property
    def total_queries(self) -> int:
        return sum(r.L_size for r in self.rounds)

    @property
    def total_positives(self) -> int:
        return sum(r.K_size for r in self.rounds)

    def row(self) -> list:
        return [getattr(self, f) for f in self.SCALAR_FIELDS]

    def to_dict(self) -> dict:
        """Canonical JSON-able form (H abbreviated to its positive edges)."""
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "q": self.q,
            "trial": self.trial,
            "n_prime": self.n_prime,
            "s": self.s,
            "target_length": self.target_length,
            "subpath_floor": self.subpath_floor,
            "alpha": self.alpha,
            "per_round_budget": self.per_round_budget,
            "rounds": [
                [r.index, r.permutation_seed, r.L_size, r.K_size,
                 int(r.succeeded), list(r.path) if r.path else None,
                 r.B_size, None if r.kept is None else int(r.kept)]
                for r in self.rounds
            ],
            "vertex_counts": self.vertex_counts,
            "H_positive_edges": [list(e) for e in self.H.positive_edges],
            "H_queried_count": len(self.H.queried_pairs),
            "I_size": self.I_size,
            "coverage_in_H": self.coverage_in_H,
            "successes": self.successes,
        }


def theorem1_query_budget(config: ExperimentConfig, target_length: int) -> int:
    """The per-round query cap q*ell / (8640 C p eps ln(1/eps))."""
    eps = config.epsilon
    C = config.calibration.C
    denom = 8640.0 * C * config.p * eps * math.log(1.0 / eps)
    return max(1, math.floor(config.q * target_length / denom))


def reduction_run(
    config: ExperimentConfig,
    alg: AdaptiveAlgorithm,
    per_round_budget: int | None = None,
    trial: int = 0,
) -> ReductionTranscript:
    """Run the round-based reduction against an adaptive algorithm.

    The vertex set is inflated to n' = ceil((1 + 720 eps^2/q) n); in each
    of s = ceil(720 eps^2 n / (q (ell+1))) rounds the algorithm sees the
    surviving vertices under a fresh uniform permutation and a fixed query
    budget.  A successful round removes the found path's vertices.  Paths
    are de-rated by their edges already revealed in earlier rounds: rounds
    whose stale-edge count stays below alpha * ell are split into fresh
    subpaths, whose total size is the reported coverage inside H.
    """
    config.validate()
    eps = config.epsilon
    q = config.q
    n = config.n
    cal = config.calibration
    target = 3 * cal.ell
    log_inv = math.log(1.0 / eps)
    alpha = eps / (3.0 * cal.C * log_inv)
    n_prime = math.ceil((1.0 + 720.0 * eps**2 / q) * n)
    s = math.ceil(720.0 * eps**2 * n / (q * (target + 1)))
    if per_round_budget is None:
        per_round_budget = theorem1_query_budget(config, target)

    oracle = new_oracle(OracleConfig(n=n_prime, p=config.p, seed=derive_seed(config.master_seed, trial)))
    survivors = np.arange(n_prime, dtype=np.int64)
    rounds: list[RoundRecord] = []
    vertex_counts = [n_prime]
    boundaries: list[int] = []
    successes = 0

    for i in range(1, s + 1):
        assert survivors.size >= n, "vertex pool dropped below n"
        perm_seed = derive_seed(config.master_seed, trial, i)
        perm = np.random.Generator(np.random.PCG64(perm_seed)).permutation(survivors)
        q_before = oracle.queries
        pos_before = oracle.positives
        found = alg(oracle, perm, target, per_round_budget)
        l_size = oracle.queries - q_before
        k_size = oracle.positives - pos_before

        path_tuple: tuple[int, ...] | None = None
        if found is not None:
            _validate_claimed_path(oracle, found, survivors, target)
            path_tuple = found.vertices[: target + 1]
            successes += 1
            survivors = survivors[~np.isin(survivors, np.asarray(path_tuple, dtype=np.int64))]
        rounds.append(RoundRecord(
            index=i,
            permutation_seed=perm_seed,
            L_size=l_size,
            K_size=k_size,
            succeeded=found is not None,
            path=path_tuple,
            B_size=None,
            kept=None,
        ))
        vertex_counts.append(int(survivors.size))
        boundaries.append(oracle.queries)

    # round of first reveal per pair, from the oracle's insertion order
    first_index = {pair: j for j, pair in enumerate(oracle.revealed_in_order())}
    # alpha * target >= 1 holds in exact arithmetic; guard the float version
    alpha_exact = max(Fraction(alpha), Fraction(1, target))
    i_size = 0
    coverage = 0
    for r in rounds:
        if not r.succeeded:
            continue
        path = Path(r.path)
        bad = [
            e for e in path.edges()
            if bisect_right(boundaries, first_index[e]) + 1 < r.index
        ]
        r.B_size = len(bad)
        r.kept = len(bad) <= alpha_exact * target
        if r.kept:
            i_size += 1
            for piece in split_path(path, bad, alpha_exact):
                coverage += piece.size

    return ReductionTranscript(
        n=n,
        epsilon=eps,
        q=q,
        trial=trial,
        n_prime=n_prime,
        s=s,
        target_length=target,
        subpath_floor=cal.ell,
        alpha=alpha,
        per_round_budget=per_round_budget,
        rounds=rounds,
        vertex_counts=vertex_counts,
        H=oracle.snapshot(),
        I_size=i_size,
        coverage_in_H=coverage,
        successes=successes,
    )


def _validate_claimed_path(
    oracle: LazyOracle,
    path: Path,
    survivors: np.ndarray,
    target: int,
) -> None:
    if path.length < target:
        raise ProtocolViolationError(
            f"claimed path has length {path.length}, target {target}"
        )
    pool = set(survivors.tolist())
    for v in path.vertices:
        if v not in pool:
            raise ProtocolViolationError(f"claimed path uses removed vertex {v}")
    for u, v in path.edges():
        if oracle.revealed_edge(u, v) is not True:
            raise ProtocolViolationError(
                f"claimed path edge ({u}, {v}) was not revealed positive"
            )


def audit_transcript(t: ReductionTranscript) -> None:
    """Re-check the structural invariants of a finished reduction run."""
    assert t.vertex_counts[0] == t.n_prime
    removal = t.target_length + 1
    removed = 0
    for r, before, after in zip(t.rounds, t.vertex_counts, t.vertex_counts[1:]):
        delta = before - after
        assert delta in (0, removal), f"round {r.index}: removed {delta} vertices"
        assert (delta == removal) == r.succeeded
        removed += delta
    assert removed == t.successes * removal
    assert t.vertex_counts[-1] >= t.n, "fewer than n vertices survived"
    assert len(t.H.queried_pairs) == t.total_queries
    assert len(t.H.positive_edges) == t.total_positives
    positive = set(t.H.positive_edges)
    queried = set(t.H.queried_pairs)
    assert positive <= queried
    for r in t.rounds:
        if r.path is None:
            continue
        for e in Path(r.path).edges():
            assert e in positive, f"path edge {e} missing from H"


def reduction_sweep(
    config: ExperimentConfig,
    alg: AdaptiveAlgorithm | None = None,
    per_round_budget: int | None = None,
) -> list[ReductionTranscript]:
    alg = alg if alg is not None else dfs_algorithm
    return [
        reduction_run(config, alg, per_round_budget=per_round_budget, trial=t)
        for t in range(config.trials)
    ]


# ---------------------------------------------------------------------------
# Calibration of the path-length constant
# ---------------------------------------------------------------------------


@dataclass
class CalibrationEstimate:
    C: float
    t: int
    weight: int
    p_hat: float
    ci_halfwidth: float


@dataclass
class CalibrationResult:
    """Outcome of the grid search for the path-length constant.

    ``chosen_C`` is None when no grid value certifies the long-path mass
    below epsilon^3 (a calibration-failure report, not an exception).
    """

    epsilon: float
    t0: int
    trials_per_point: int
    chosen_C: float | None
    sums: list[tuple[float, float]]  # (C, upper estimate of the mass)
    estimates: list[CalibrationEstimate]

    @property
    def ok(self) -> bool:
        return self.chosen_C is not None


def _geometric_grid(lo: int, hi: int, points: int) -> list[int]:
    if hi <= lo:
        return [hi]
    ratio = (hi / lo) ** (1.0 / (points - 1))
    grid = sorted({min(hi, max(lo, math.ceil(lo * ratio**j))) for j in range(points)})
    if grid[-1] != hi:
        grid.append(hi)
    return grid


def calibrate_constant(
    epsilon: float,
    C_grid: Sequence[float],
    trials: int,
    rng_seed: int,
) -> CalibrationResult:
    """Smallest grid C whose estimated long-path mass over tree sizes
    ell..t0 stays below epsilon^3.

    Allocation (documented): uniform labeled trees are sampled at
    CALIBRATION_GRID_POINTS geometrically spaced sizes shared by all grid
    C values, ``trials`` trees per size, seeded by size, so the same
    trees serve every C and estimates are monotone along the grid.  The
    mass of each block of sizes is bounded by its right endpoint's
    estimate plus the 99% normal half-width (tree diameters grow
    stochastically with size, making the right endpoint the conservative
    representative).
    """
    if not C_grid:
        raise DomainError("C grid must be non-empty")
    grid = list(C_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("C grid must be strictly increasing")
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if trials < 1:
        raise DomainError("trials must be >= 1")

    t0 = CalibrationConfig.create(grid[0], epsilon).t0
    budget = epsilon**3
    ells = {C: CalibrationConfig.create(C, epsilon).ell for C in grid}
    ell_min = min(ells.values())
    sample_ts = _geometric_grid(max(2, ell_min + 1), t0, CALIBRATION_GRID_POINTS) \
        if ell_min < t0 else []

    estimates: list[CalibrationEstimate] = []
    sums: list[tuple[float, float]] = []
    chosen: float | None = None
    for C in grid:
        ell = ells[C]
        if ell > t0:
            sums.append((C, 0.0))
            if chosen is None:
                chosen = C
            continue
        upper = 0.0
        prev = ell  # sizes <= ell cannot hold a path of length ell
        for tj in sample_ts:
            if tj <= prev:
                continue
            p_hat, hw = estimate_p_t_ell(tj, ell, trials, derive_seed(rng_seed, tj))
            weight = tj - prev
            prev = tj
            estimates.append(CalibrationEstimate(C=C, t=tj, weight=weight,
                                                 p_hat=p_hat, ci_halfwidth=hw))
            upper += weight * (p_hat + hw)
        sums.append((C, upper))
        if chosen is None and upper <= budget:
            chosen = C
    return CalibrationResult(
        epsilon=epsilon,
        t0=t0,
        trials_per_point=trials,
        chosen_C=chosen,
        sums=sums,
        estimates=estimates,
    )


# ---------------------------------------------------------------------------
# DFS scaling study
# ---------------------------------------------------------------------------


@dataclass
class ScalingRow:
    epsilon: float
    trial: int
    target: int
    succeeded: bool
    path_length: int
    queries: int
    positives: int
    law: float  # target / (p * eps)
    ratio: float  # queries / law


@dataclass
class ScalingSummary:
    epsilon: float
    target: int
    trials: int
    success_rate: float
    mean_queries: float
    law: float
    mean_ratio: float


def dfs_scaling_study(
    n: int,
    eps_list: Sequence[float],
    trials: int,
    master_seed: int,
) -> tuple[list[ScalingRow], list[ScalingSummary]]:
    """Query cost of the DFS finder at target length eps^2 n / 5, per
    epsilon, against the ell / (p eps) law."""
    rows: list[ScalingRow] = []
    summaries: list[ScalingSummary] = []
    for ei, eps in enumerate(eps_list):
        p = (1.0 + eps) / n
        target = math.floor(eps**2 * n / 5.0)
        law = target / (p * eps)
        cells: list[ScalingRow] = []
        for trial in range(trials):
            oracle = new_oracle(OracleConfig(n=n, p=p, seed=derive_seed(master_seed, ei, trial, 0)))
            order = np.random.Generator(
                np.random.PCG64(derive_seed(master_seed, ei, trial, 1))
            ).permutation(n)
            out = dfs_long_path(oracle, order, target)
            cells.append(ScalingRow(
                epsilon=eps,
                trial=trial,
                target=target,
                succeeded=out.succeeded,
                path_length=out.path.length if out.path else 0,
                queries=out.queries_used,
                positives=out.positives_used,
                law=law,
                ratio=out.queries_used / law if law > 0 else 0.0,
            ))
        rows.extend(cells)
        summaries.append(ScalingSummary(
            epsilon=eps,
            target=target,
            trials=trials,
            success_rate=sum(c.succeeded for c in cells) / trials,
            mean_queries=sum(c.queries for c in cells) / trials,
            law=law,
            mean_ratio=sum(c.ratio for c in cells) / trials,
        ))
    return rows, summaries


# ---------------------------------------------------------------------------
# Random-tree disjoint path probability
# ---------------------------------------------------------------------------


@dataclass
class TreePathsEstimate:
    t: int
    a: int
    b: int
    trials: int
    estimate: float
    ci_halfwidth: float
    exact_term: float | None
    exponential_bound: float | None


def tree_paths_probability(
    t: int,
    a: int,
    b: int,
    trials: int,
    rng_seed: int,
) -> TreePathsEstimate:
    """Monte Carlo probability that a uniform labeled tree on t vertices
    packs b disjoint paths of length >= a, reported next to the
    random-map union bound."""
    if a < 1 or b < 1:
        raise DomainError(f"a and b must be >= 1, got a={a!r} b={b!r}")
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t!r}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if (a + 1) * b > t:
        # pigeonhole: b disjoint paths of length >= a need (a+1) b vertices
        return TreePathsEstimate(t=t, a=a, b=b, trials=trials, estimate=0.0,
                                 ci_halfwidth=0.0, exact_term=None,
                                 exponential_bound=None)
    bound = map_union_bound(t, a, b)
    hits = 0
    for i in range(trials):
        tree = sample_uniform_labeled_tree(t, False, derive_seed(rng_seed, i))
        g = SimpleGraph.from_edges(t, tree.undirected_edges())
        if len(forest_max_path_count(g, a).paths) >= b:
            hits += 1
    p_hat = hits / trials
    hw = _Z99 * math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return TreePathsEstimate(t=t, a=a, b=b, trials=trials, estimate=p_hat,
                             ci_halfwidth=hw, exact_term=bound.exact_term,
                             exponential_bound=bound.exponential_bound)


# ---------------------------------------------------------------------------
# Concentration-bound helpers
# ---------------------------------------------------------------------------


def chernoff_upper_tail(mean: float, a: float) -> float:
    """Binomial upper-tail bound e^(-a^2 mean / 3), valid for 0 < a < 3/2."""
    if mean <= 0:
        raise DomainError(f"mean must be positive, got {mean!r}")
    if not 0.0 < a < 1.5:
        raise DomainError(f"a must lie in (0, 3/2), got {a!r}")
    return math.exp(-a * a * mean / 3.0)


@dataclass
class MartingaleTolerance:
    deviation: float
    probability_bound: float


def martingale_tolerance(C: float, alpha: float, n: int, p: float) -> MartingaleTolerance:
    """Edge-exposure deviation threshold C alpha sqrt(n^2 p) with its
    failure bound 2 e^(-alpha^2 / 4); used to size pass/fail margins for
    edge-Lipschitz statistics."""
    if C <= 0:
        raise DomainError(f"C must be positive, got {C!r}")
    if n < 1 or p <= 0:
        raise DomainError("need n >= 1 and p > 0")
    limit = 2.0 * math.sqrt(n * n * p)
    if not 0.0 < alpha < limit:
        raise DomainError(f"alpha must lie in (0, {limit}), got {alpha!r}")
    return MartingaleTolerance(
        deviation=C * alpha * math.sqrt(n * n * p),
        probability_bound=2.0 * math.exp(-alpha * alpha / 4.0),
    )
