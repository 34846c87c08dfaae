import itertools
import math
from collections import Counter

import pytest
from scipy.optimize import brentq

from pathprobe.errors import CapExceededError, DomainError, InvalidInputError
from pathprobe.gw import (
    CalibrationConfig,
    borel_pmf,
    estimate_p_t_ell,
    joyal_tree_from_map,
    map_union_bound,
    sample_gw_tree,
    sample_uniform_labeled_tree,
    solve_dual_mu,
    t_ell_statistic,
    tree_metrics,
)
from pathprobe.rng import derive_seed


# -- dual parameter ---------------------------------------------------------


def _mu_oracle(eps):
    target = (1 + eps) * math.exp(-(1 + eps))
    return brentq(lambda m: m * math.exp(-m) - target, 1e-12, 1 - 1e-12, xtol=1e-14)


def test_mu_limit_at_zero_excess():
    assert abs(solve_dual_mu(1e-9).mu - 1.0) < 1e-3


@pytest.mark.parametrize("eps", [1.0, 0.1, 0.5, 0.05, 0.01])
def test_mu_matches_independent_root_finder(eps):
    dual = solve_dual_mu(eps)
    assert abs(dual.mu - _mu_oracle(eps)) < 1e-9
    assert dual.residual <= 1e-12


def test_mu_known_values():
    assert abs(solve_dual_mu(1.0).mu - 0.40637) < 1e-4
    assert abs(solve_dual_mu(0.1).mu - 0.9061) < 1e-3


def test_mu_decreasing_in_eps():
    mus = [solve_dual_mu(e).mu for e in (0.01, 0.05, 0.1, 0.2, 0.5, 1.0)]
    assert mus == sorted(mus, reverse=True)


def test_mu_rejects_bad_eps():
    with pytest.raises(DomainError):
        solve_dual_mu(0.0)
    with pytest.raises(DomainError):
        solve_dual_mu(-1.0)


# -- Borel law --------------------------------------------------------------


def test_borel_closed_forms():
    for mu in (0.3, 0.9061):
        assert abs(borel_pmf(mu, 1) - math.exp(-mu)) < 1e-14
        assert abs(borel_pmf(mu, 2) - mu * math.exp(-2 * mu)) < 1e-14


def test_borel_sums_to_one():
    mu = solve_dual_mu(0.1).mu
    total = sum(borel_pmf(mu, t) for t in range(1, 200_000))
    assert abs(total - 1.0) < 1e-6


def test_borel_domain():
    with pytest.raises(DomainError):
        borel_pmf(1.2, 3)
    with pytest.raises(DomainError):
        borel_pmf(0.5, 0)


# -- branching-tree sampler ---------------------------------------------------


def test_gw_singleton_probability():
    mu = 0.5
    hits = sum(sample_gw_tree(mu, derive_seed(4, i)).t == 1 for i in range(20_000))
    assert abs(hits / 20_000 - math.exp(-0.5)) < 0.01


def test_gw_tiny_mu_mostly_singletons():
    hits = sum(sample_gw_tree(0.01, derive_seed(6, i)).t == 1 for i in range(2000))
    assert hits / 2000 > 0.97


def test_gw_tree_structure_consistent():
    tree = sample_gw_tree(0.9, 123)
    assert tree.parent[tree.root] == -1
    for v in range(tree.t):
        if v != tree.root:
            assert tree.depth[v] == tree.depth[tree.parent[v]] + 1


def test_gw_cap_raises():
    with pytest.raises(CapExceededError):
        # mu near 1 with a tiny cap aborts quickly on any multi-vertex tree
        for i in range(1000):
            sample_gw_tree(0.99, derive_seed(9, i), max_vertices=2)


def test_gw_size_distribution_vs_borel():
    mu = 0.5
    counts = Counter(sample_gw_tree(mu, derive_seed(77, i)).t for i in range(20_000))
    tv = 0.0
    tail_emp = 1.0
    for t in range(1, 31):
        emp = counts.get(t, 0) / 20_000
        tv += abs(emp - borel_pmf(mu, t))
        tail_emp -= emp
    tv += abs(tail_emp - (1.0 - sum(borel_pmf(mu, t) for t in range(1, 31))))
    assert tv / 2 < 0.02


# -- uniform labeled trees ----------------------------------------------------


def test_uniform_tree_degenerate_sizes():
    t1 = sample_uniform_labeled_tree(1, True, 5)
    assert t1.t == 1 and t1.parent == [-1]
    t2 = sample_uniform_labeled_tree(2, False, 5)
    assert sorted(t2.undirected_edges()) == [(0, 1)]
    roots = {sample_uniform_labeled_tree(2, True, derive_seed(1, i)).root for i in range(50)}
    assert roots == {0, 1}


def test_uniform_tree_t4_uniformity():
    counts = Counter()
    for i in range(20_000):
        tree = sample_uniform_labeled_tree(4, False, derive_seed(10, i))
        counts[tuple(sorted(tree.undirected_edges()))] += 1
    assert len(counts) == 16
    for c in counts.values():
        assert abs(c / 20_000 - 1 / 16) < 0.012


def test_uniform_tree_rejects_bad_t():
    with pytest.raises(DomainError):
        sample_uniform_labeled_tree(0, True, 1)


# -- random-map construction --------------------------------------------------


def test_joyal_fixed_point_map():
    tree = joyal_tree_from_map([0])
    assert tree.t == 1 and tree.parent == [-1]


def test_joyal_enumeration_t3():
    counts = Counter()
    for f in itertools.product(range(3), repeat=3):
        tree = joyal_tree_from_map(list(f))
        counts[tuple(sorted(tree.undirected_edges()))] += 1
    assert len(counts) == 3
    assert set(counts.values()) == {9}


def test_joyal_enumeration_t4():
    counts = Counter()
    for f in itertools.product(range(4), repeat=4):
        tree = joyal_tree_from_map(list(f))
        counts[tuple(sorted(tree.undirected_edges()))] += 1
    assert len(counts) == 16
    assert set(counts.values()) == {16}


def test_joyal_rejects_non_total_maps():
    with pytest.raises(InvalidInputError):
        joyal_tree_from_map([0, 5])
    with pytest.raises(InvalidInputError):
        joyal_tree_from_map([])


# -- metrics ------------------------------------------------------------------


def test_metrics_path_rooted_at_end():
    tree = joyal_tree_from_map([0, 0, 1, 2, 3])  # path 0-1-2-3-4 rooted at 0
    rec = tree_metrics(tree)
    assert (rec.height, rec.diameter) == (4, 4)


def test_metrics_star():
    star = sample_uniform_labeled_tree(2, False, 0)
    import pathprobe.gw as gw

    tree = gw.RootedTree(t=5, parent=[-1, 0, 0, 0, 0], depth=[0, 1, 1, 1, 1], root=0)
    rec = tree_metrics(tree)
    assert (rec.height, rec.diameter) == (1, 2)
    assert tree_metrics(star).diameter == 1


def _brute_diameter(edges, t):
    adj = [[] for _ in range(t)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    best = 0
    for s in range(t):
        stack = [(s, {s}, 0)]
        while stack:
            v, used, ln = stack.pop()
            best = max(best, ln)
            for w in adj[v]:
                if w not in used:
                    stack.append((w, used | {w}, ln + 1))
    return best


@pytest.mark.parametrize("seed", range(10))
def test_metrics_diameter_matches_bruteforce(seed):
    tree = sample_uniform_labeled_tree(12, True, derive_seed(3, seed))
    assert tree_metrics(tree).diameter == _brute_diameter(tree.undirected_edges(), 12)


def test_metrics_threshold_flag():
    tree = joyal_tree_from_map([0, 0, 1, 2, 3])
    assert tree_metrics(tree, path_threshold=4).has_path_geq is True
    assert tree_metrics(tree, path_threshold=5).has_path_geq is False


# -- p_{t, ell} ---------------------------------------------------------------


def test_p_t_ell_boundaries():
    assert estimate_p_t_ell(2, 1, 500, 0)[0] == 1.0
    assert estimate_p_t_ell(3, 2, 500, 0)[0] == 1.0
    for t in (2, 5, 9):
        assert estimate_p_t_ell(t, 0, 200, 1)[0] == 1.0
        assert estimate_p_t_ell(t, t, 200, 1)[0] == 0.0


def test_p_t_ell_t4():
    est, hw = estimate_p_t_ell(4, 3, 30_000, 7)
    assert abs(est - 0.75) < 0.02
    assert hw > 0


def test_p_t_ell_domain():
    with pytest.raises(DomainError):
        estimate_p_t_ell(4, 5, 10, 0)


# -- T_ell statistic ----------------------------------------------------------


def test_t_ell_zero_when_threshold_unreachable():
    res = t_ell_statistic(0.3, 600, 2000, 3)
    assert res.mean == 0.0 and res.variance == 0.0
    assert res.accepted == 2000 and res.rejected == 0


def test_t_ell_closed_form_mu_half():
    # threshold ceil(3/3)=1: T = |tree| unless the tree is a singleton
    res = t_ell_statistic(0.5, 3, 60_000, 11)
    expected = 2.0 - math.exp(-0.5)
    assert abs(res.mean - expected) < max(3 * res.ci_halfwidth / 2.5758, 0.02)


def test_t_ell_mean_non_increasing_in_ell():
    means = [t_ell_statistic(0.5, ell, 4000, 13).mean for ell in (3, 6, 12, 24)]
    assert means == sorted(means, reverse=True)


# -- union bound --------------------------------------------------------------


def test_map_union_bound_exact_small_case():
    res = map_union_bound(10, 1, 1)
    assert abs(res.exact_term - 9.0) < 1e-9
    assert res.exact_term <= res.exponential_bound


@pytest.mark.parametrize("t,a,b", [(10, 1, 1), (100, 10, 2), (50, 3, 4), (1000, 30, 5)])
def test_map_union_bound_forms_agree(t, a, b):
    res = map_union_bound(t, a, b)
    assert abs(res.exact_term - res.product_term) <= 1e-9 * res.exact_term
    assert res.exact_term <= res.exponential_bound


def test_map_union_bound_domain():
    with pytest.raises(DomainError):
        map_union_bound(10, 4, 3)
    with pytest.raises(DomainError):
        map_union_bound(10, 0, 1)


# -- calibration config -------------------------------------------------------


def test_calibration_config_scales():
    cal = CalibrationConfig.create(4.0, 0.1)
    assert cal.ell == math.ceil(40 * math.log(10))
    assert cal.t0 == math.ceil(1500 * math.log(10))
    assert cal.t0 >= cal.ell >= 1


def test_calibration_config_domain():
    with pytest.raises(DomainError):
        CalibrationConfig.create(4.0, 0.0)
    with pytest.raises(DomainError):
        CalibrationConfig.create(0.0, 0.1)
