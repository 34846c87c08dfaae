"""Command-line entry point.

Each subcommand runs one experiment family, emits CSV (stdout or --out)
plus a JSON run manifest next to the output file, and exits 0 on
completion, 1 on configuration errors, 2 when --check assertions fail.
Flag values override --config file values; data rows are a pure function
of the flags and the seed, so a manifest is enough to reproduce a run.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path as FsPath

from . import __version__, experiments as ex
from .errors import ConfigurationError, DomainError, InvalidInputError
from .gw import CalibrationConfig, map_union_bound, sample_gw_tree, solve_dual_mu, tree_metrics
from .rng import derive_seed

_CONFIG_KEYS = {
    "n": int,
    "eps": float,
    "q": float,
    "C": float,
    "trials": int,
    "seed": int,
}
_CONFIG_DEFAULTS = {"q": 0.5, "C": 4.0, "trials": 1, "seed": 0}
_CHECK_FRACTION = 0.95


@dataclass
class RunManifest:
    """Everything needed to reproduce a run's data rows byte for byte
    (timestamp excluded from the reproducibility contract)."""

    subcommand: str
    config: dict
    master_seed: int
    output_paths: list[str]
    timestamp: str
    version: str


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are configuration errors: exit 1
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def load_config(path: str) -> dict:
    """Load a flat JSON config; unknown keys rejected, defaults filled."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"cannot read config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a flat JSON object")
    for key in raw:
        if key not in _CONFIG_KEYS:
            raise ConfigurationError(f"unknown config key {key!r}")
    cfg = dict(_CONFIG_DEFAULTS)
    for key, value in raw.items():
        want = _CONFIG_KEYS[key]
        if want is int and not (isinstance(value, int) and not isinstance(value, bool)):
            raise ConfigurationError(f"config key {key!r} must be an integer")
        if want is float and not isinstance(value, (int, float)):
            raise ConfigurationError(f"config key {key!r} must be numeric")
        cfg[key] = want(value)
    for key in ("n", "eps"):
        if key not in cfg:
            raise ConfigurationError(f"config key {key!r} is required")
    return cfg


def experiment_config(args) -> ex.ExperimentConfig:
    base = load_config(args.config) if getattr(args, "config", None) else dict(_CONFIG_DEFAULTS)
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            base[key] = flag
    for key in ("n", "eps"):
        if key not in base or base[key] is None:
            raise ConfigurationError(f"missing required parameter {key!r}")
    cfg = ex.ExperimentConfig(
        n=base["n"],
        epsilon=base["eps"],
        q=base["q"],
        calibration=CalibrationConfig.create(base["C"], base["eps"]),
        trials=base["trials"],
        master_seed=base["seed"],
    )
    cfg.validate()
    return cfg


def _format(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(args, header, rows, manifest_config: dict) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([[_format(v) for v in row] for row in rows])
        manifest = RunManifest(
            subcommand=args.cmd,
            config=manifest_config,
            master_seed=manifest_config.get("seed", 0),
            output_paths=[out],
            timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"),
            version=__version__,
        )
        manifest_path = FsPath(out).with_suffix(FsPath(out).suffix + ".manifest.json")
        manifest_path.write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n")
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([[_format(v) for v in row] for row in rows])


def _fraction_ok(flags: list[bool]) -> bool:
    return sum(flags) >= _CHECK_FRACTION * len(flags)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def _cmd_dfs_run(args) -> int:
    cfg = experiment_config(args)
    n, eps = cfg.n, cfg.epsilon
    target = args.target if args.target is not None else int(eps**2 * n / 5.0)
    rows = []
    import numpy as np

    from .oracle import OracleConfig, new_oracle
    from .pathfind import dfs_long_path

    for trial in range(cfg.trials):
        oracle = new_oracle(OracleConfig(n=n, p=cfg.p, seed=derive_seed(cfg.master_seed, trial, 0)))
        order = np.random.Generator(
            np.random.PCG64(derive_seed(cfg.master_seed, trial, 1))
        ).permutation(n)
        out = dfs_long_path(oracle, order, target, args.budget)
        rows.append([
            derive_seed(cfg.master_seed, trial, 0), n, eps, target,
            out.succeeded, out.path.length if out.path else 0,
            out.queries_used, out.positives_used,
        ])
    header = ["seed", "n", "eps", "target", "succeeded", "path_len", "queries", "positives"]
    _emit(args, header, rows, {"n": n, "eps": eps, "target": target,
                               "budget": args.budget, "trials": cfg.trials,
                               "seed": cfg.master_seed})
    if args.check and not _fraction_ok([bool(r[4]) for r in rows]):
        print("check failed: success rate below threshold", file=sys.stderr)
        return 2
    return 0


def _cmd_coverage_verify(args) -> int:
    cfg = experiment_config(args)
    reports = ex.coverage_sweep(cfg)
    rows = [r.row() for r in reports]
    _emit(args, list(ex.CoverageReport.SCALAR_FIELDS), rows, {
        "n": cfg.n, "eps": cfg.epsilon, "C": cfg.calibration.C,
        "q": cfg.q, "trials": cfg.trials, "seed": cfg.master_seed,
    })
    if args.check:
        eps, n = cfg.epsilon, cfg.n
        ok = (
            _fraction_ok([r.surrogate < r.ceiling for r in reports])
            and _fraction_ok([eps * n <= r.C1_size <= 3 * eps * n for r in reports])
            and _fraction_ok([r.second_size <= r.small_component_threshold for r in reports])
            and _fraction_ok([r.core_size <= 2 * eps**2 * n for r in reports])
        )
        if not ok:
            print("check failed: structural bounds violated too often", file=sys.stderr)
            return 2
    return 0


def _cmd_reduction_sim(args) -> int:
    cfg = experiment_config(args)
    transcripts = ex.reduction_sweep(cfg, per_round_budget=args.budget)
    rows = [t.row() for t in transcripts]
    _emit(args, list(ex.ReductionTranscript.SCALAR_FIELDS), rows, {
        "n": cfg.n, "eps": cfg.epsilon, "C": cfg.calibration.C,
        "q": cfg.q, "trials": cfg.trials, "seed": cfg.master_seed,
        "budget": args.budget,
    })
    if args.check:
        for t in transcripts:
            ex.audit_transcript(t)
        ceiling = [
            t.coverage_in_H < ex.CEILING_COEFF * (2 * cfg.epsilon) ** 2 * t.n_prime
            for t in transcripts
        ]
        if not _fraction_ok(ceiling):
            print("check failed: coverage ceiling violated too often", file=sys.stderr)
            return 2
    return 0


def _cmd_gw_sample(args) -> int:
    if args.mu is None and args.eps is None:
        raise ConfigurationError("gw-sample needs --mu or --eps")
    mu = args.mu if args.mu is not None else solve_dual_mu(args.eps).mu
    rows = []
    for trial in range(args.trials):
        tree = sample_gw_tree(mu, derive_seed(args.seed, trial))
        rec = tree_metrics(tree)
        rows.append([trial, rec.t, rec.height, rec.diameter])
    _emit(args, ["trial", "t", "height", "diameter"], rows,
          {"mu": mu, "eps": args.eps, "trials": args.trials, "seed": args.seed})
    return 0


def _cmd_calibrate_c(args) -> int:
    grid = [float(x) for x in args.grid.split(",") if x.strip()]
    result = ex.calibrate_constant(args.eps, grid, args.trials, args.seed)
    rows = [[e.C, e.t, e.weight, e.p_hat, e.ci_halfwidth] for e in result.estimates]
    _emit(args, ["C", "t", "weight", "p_hat", "ci_halfwidth"], rows,
          {"eps": args.eps, "grid": grid, "trials": args.trials, "seed": args.seed})
    for C, total in result.sums:
        print(f"C={C}: mass_upper_bound={repr(total)}", file=sys.stderr)
    if result.ok:
        print(f"chosen_C={result.chosen_C}")
    else:
        print("calibration-failure: no grid constant certified the mass bound")
        if args.check:
            return 2
    return 0


def _cmd_map_bound(args) -> int:
    bound = map_union_bound(args.t, args.a, args.b)
    print(f"exact_term={_format(bound.exact_term)}")
    print(f"product_term={_format(bound.product_term)}")
    print(f"exponential_bound={_format(bound.exponential_bound)}")
    return 0


def _cmd_tree_paths(args) -> int:
    est = ex.tree_paths_probability(args.t, args.a, args.b, args.trials, args.seed)
    print(f"estimate={_format(est.estimate)}")
    print(f"ci_halfwidth={_format(est.ci_halfwidth)}")
    if est.exact_term is not None:
        print(f"exact_term={_format(est.exact_term)}")
        print(f"exponential_bound={_format(est.exponential_bound)}")
    return 0


def _cmd_scaling_study(args) -> int:
    eps_list = [float(x) for x in args.eps_list.split(",") if x.strip()]
    rows, summaries = ex.dfs_scaling_study(args.n, eps_list, args.trials, args.seed)
    table = [[r.epsilon, r.trial, r.target, r.succeeded, r.path_length,
              r.queries, r.positives, r.law, r.ratio] for r in rows]
    _emit(args, ["eps", "trial", "target", "succeeded", "path_len",
                 "queries", "positives", "law", "ratio"], table,
          {"n": args.n, "eps_list": eps_list, "trials": args.trials, "seed": args.seed})
    for s in summaries:
        print(f"eps={s.epsilon}: target={s.target} success={s.success_rate}"
              f" mean_queries={s.mean_queries} ratio={s.mean_ratio}", file=sys.stderr)
    if args.check:
        ratios = [s.mean_ratio for s in summaries if s.law > 0]
        ok = all(s.success_rate >= _CHECK_FRACTION for s in summaries)
        if ratios and max(ratios) > 3.0 * min(ratios):
            ok = False
        if not ok:
            print("check failed: scaling law violated", file=sys.stderr)
            return 2
    return 0


# --------------------------------------------------------------------------


def _add_common(sub, config=True, out=True, check=True):
    if config:
        sub.add_argument("--config", help="flat JSON config file; flags override")
    if out:
        sub.add_argument("--out", help="CSV output path (stdout when omitted)")
    if check:
        sub.add_argument("--check", action="store_true",
                         help="exit 2 when acceptance thresholds fail")


def build_parser() -> _Parser:
    parser = _Parser(prog="pathprobe", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="cmd", required=True)

    p = subs.add_parser("dfs-run", help="run the DFS long-path finder")
    p.add_argument("--n", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--target", type=int, help="path length target (default eps^2 n / 5)")
    p.add_argument("--budget", type=int, help="query budget per run")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--C", type=float)
    _add_common(p)
    p.set_defaults(func=_cmd_dfs_run)

    p = subs.add_parser("coverage-verify", help="verify the coverage ceiling on full instances")
    for flag, typ in (("--n", int), ("--eps", float), ("--C", float),
                      ("--q", float), ("--trials", int), ("--seed", int)):
        p.add_argument(flag, type=typ)
    _add_common(p)
    p.set_defaults(func=_cmd_coverage_verify)

    p = subs.add_parser("reduction-sim", help="run the amplification reduction with the DFS algorithm")
    for flag, typ in (("--n", int), ("--eps", float), ("--C", float),
                      ("--q", float), ("--trials", int), ("--seed", int),
                      ("--budget", int)):
        p.add_argument(flag, type=typ)
    _add_common(p)
    p.set_defaults(func=_cmd_reduction_sim)

    p = subs.add_parser("gw-sample", help="sample branching trees and their metrics")
    p.add_argument("--mu", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, check=False)
    p.set_defaults(func=_cmd_gw_sample)

    p = subs.add_parser("calibrate-c", help="calibrate the path-length constant")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--grid", default="1,2,4,8,16")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_calibrate_c)

    p = subs.add_parser("map-bound", help="random-map disjoint-path union bound")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    _add_common(p, config=False, out=False, check=False)
    p.set_defaults(func=_cmd_map_bound)

    p = subs.add_parser("tree-paths", help="probability a random tree packs b disjoint a-paths")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, config=False, out=False, check=False)
    p.set_defaults(func=_cmd_tree_paths)

    p = subs.add_parser("scaling-study", help="DFS query scaling across epsilon")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps-list", default="0.1,0.15,0.2")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, config=False)
    p.set_defaults(func=_cmd_scaling_study)

    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (ConfigurationError, DomainError, InvalidInputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    code = dispatch(sys.argv[1:] if argv is None else argv)
    raise SystemExit(code)


if __name__ == "__main__":
    main()
