"""Command-line front end.

Subcommands: ``analytic``, ``sweep``, ``threshold``, ``validate``,
``generate``.  An experiment is a single JSON config document; flags
override config fields.  All randomness flows from one seed recorded in
every output, and outputs carry a hash of the resolved configuration, so a
re-run with the same config and seed is byte-identical.

Exit codes: 0 success, 2 invalid configuration, 3 divergent-moment
distribution, 4 I/O failure, 5 threshold bracket not established,
1 validation failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import analysis
from .configuration import uniform_matching, uniform_simple_graph, write_edge_list
from .degrees import (
    DegreeDistribution,
    DivergentMomentError,
    dist_from_config,
    from_distribution,
    generating_derivatives,
    offspring_mean,
    q_value,
)
from .validation import run_validation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_DIVERGENT = 3
EXIT_IO = 4
EXIT_BRACKET = 5


class ConfigError(ValueError):
    pass


class OutputError(RuntimeError):
    pass


def _config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _resolve(args: argparse.Namespace, fields: list[str]) -> dict:
    """Merge the optional JSON config document with CLI overrides."""
    config: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as handle:
                config = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from exc
    for field in fields:
        value = getattr(args, field, None)
        if value is not None:
            config[field] = value
    return config


def _dist(config: dict) -> DegreeDistribution:
    if "dist" not in config:
        raise ConfigError("a distribution is required (--dist or config)")
    try:
        return dist_from_config(config["dist"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad distribution {config['dist']!r}: {exc}") from exc


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w") as handle:
            handle.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        _write(out, text)
    sys.stdout.write(text)


def cmd_analytic(args: argparse.Namespace) -> int:
    config = _resolve(args, ["dist", "out"])
    dist = _dist(config)
    try:
        l1, l2 = generating_derivatives(dist)
        payload = {
            "config_hash": _config_hash({"dist": dist.config()}),
            "distribution": dist.config(),
            "L1": l1,
            "L2": l2,
            "Q": q_value(dist),
            "offspring_mean": offspring_mean(dist),
        }
        try:
            payload["p_hat"] = analysis.critical_probability(dist)
        except analysis.NoPhaseTransitionError as exc:
            payload["p_hat"] = None
            payload["no_transition"] = str(exc)
        if dist.is_power_law:
            threshold = analysis.powerlaw_threshold(
                dist.tail.gamma, dist.tail.min_degree
            )
            payload["powerlaw"] = {
                "p_c_zeta": threshold.p_c_zeta,
                "p_c_truncated": threshold.p_c_truncated,
                "gamma0": threshold.gamma0,
                "valid": threshold.valid,
            }
    except DivergentMomentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    _emit(payload, config.get("out"))
    return EXIT_OK


def _parse_grid(raw) -> list[float]:
    if isinstance(raw, (list, tuple)):
        return [float(p) for p in raw]
    return [float(item) for item in str(raw).split(",") if item != ""]


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _resolve(
        args, ["dist", "n", "kind", "p_grid", "p", "trials", "seed", "simple_only", "out"]
    )
    dist = _dist(config)
    grid_raw = config.get("p_grid", config.get("p"))
    if grid_raw is None:
        raise ConfigError("a probability grid is required (--p-grid or --p)")
    try:
        grid = _parse_grid(grid_raw)
        n = int(config.get("n", 10000))
        kind = config.get("kind", "bond")
        trials = int(config.get("trials", 20))
        seed = int(config.get("seed", 0))
        simple_only = bool(config.get("simple_only", False))
        cap = config.get("max_degree_cap")  # config-only knob
        cap = int(cap) if cap is not None else None
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    out = config.get("out")
    if not out:
        raise ConfigError("an output path is required (--out)")

    try:
        result = analysis.sweep(
            dist, n, kind, grid, trials, seed, simple_only=simple_only,
            max_degree_cap=cap,
        )
    except DivergentMomentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    resolved = dict(result.metadata)
    resolved["p_grid"] = grid
    config_hash = _config_hash(resolved)
    result.metadata["config_hash"] = config_hash

    csv_path = out if out.endswith(".csv") else out + ".csv"
    json_path = csv_path[: -len(".csv")] + ".json"
    _write(csv_path, f"# config_hash={config_hash}\n" + result.csv_text())
    _write(json_path, result.json_text())
    sys.stdout.write(
        json.dumps(
            {"config_hash": config_hash, "csv": csv_path, "json": json_path},
            sort_keys=True,
        )
        + "\n"
    )
    return EXIT_OK


def cmd_threshold(args: argparse.Namespace) -> int:
    config = _resolve(
        args,
        ["dist", "n", "kind", "epsilon", "tolerance", "trials", "seed", "simple_only", "out"],
    )
    dist = _dist(config)
    try:
        n = int(config.get("n", 10000))
        kind = config.get("kind", "bond")
        epsilon = float(config.get("epsilon", 0.02))
        tolerance = float(config.get("tolerance", 0.02))
        trials = int(config.get("trials", 20))
        seed = int(config.get("seed", 0))
        simple_only = bool(config.get("simple_only", False))
        cap = config.get("max_degree_cap")
        cap = int(cap) if cap is not None else None
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    try:
        estimate = analysis.estimate_threshold(
            dist,
            n,
            kind,
            epsilon=epsilon,
            trials=trials,
            tolerance=tolerance,
            base_seed=seed,
            simple_only=simple_only,
            max_degree_cap=cap,
        )
    except analysis.BracketNotEstablishedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        payload = {"error": str(exc), "trace": exc.trace}
        if config.get("out"):
            _write(config["out"], json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return EXIT_BRACKET
    except DivergentMomentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    payload = estimate.json_dict()
    payload["config_hash"] = _config_hash(payload["metadata"])
    _emit(payload, config.get("out"))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    seed = int(args.seed) if args.seed is not None else 0
    report = run_validation(seed)
    sys.stdout.write(report.text())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_generate(args: argparse.Namespace) -> int:
    config = _resolve(args, ["dist", "n", "seed", "simple_only", "out"])
    dist = _dist(config)
    try:
        n = int(config.get("n", 100))
        seed = int(config.get("seed", 0))
        simple_only = bool(config.get("simple_only", False))
        seq = from_distribution(dist, n)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    graph = (
        uniform_simple_graph(seq, seed) if simple_only else uniform_matching(seq, seed)
    )
    text = write_edge_list(graph)
    if config.get("out"):
        _write(config["out"], text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="degperc",
        description="Percolation experiments on random graphs with a given degree sequence",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, needs_n: bool = True) -> None:
        p.add_argument("--config", help="JSON experiment config; flags override")
        p.add_argument(
            "--dist",
            help="regular:3 | table:1=0.5,3=0.5 | powerlaw:3.5[:min_degree]",
        )
        if needs_n:
            p.add_argument("--n", type=int, help="number of vertices")
            p.add_argument("--kind", choices=["bond", "site"], help="percolation kind")
            p.add_argument("--trials", type=int, help="trials per probability")
            p.add_argument("--seed", type=int, help="base seed")
            p.add_argument(
                "--simple-only",
                dest="simple_only",
                action="store_const",
                const=True,
                help="condition every graph on being simple",
            )
        p.add_argument("--out", help="output path")

    p_analytic = sub.add_parser("analytic", help="closed-form predictions")
    common(p_analytic, needs_n=False)
    p_analytic.set_defaults(func=cmd_analytic)

    p_sweep = sub.add_parser("sweep", help="L1 fraction over a probability grid")
    common(p_sweep)
    p_sweep.add_argument("--p-grid", dest="p_grid", help="comma-separated probabilities")
    p_sweep.add_argument("--p", help="single probability (shorthand grid)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_threshold = sub.add_parser("threshold", help="bisection threshold estimate")
    common(p_threshold)
    p_threshold.add_argument("--epsilon", type=float, help="supercriticality cutoff")
    p_threshold.add_argument("--tolerance", type=float, help="bracket width target")
    p_threshold.set_defaults(func=cmd_threshold)

    p_validate = sub.add_parser("validate", help="run the exact-oracle self checks")
    p_validate.add_argument("--seed", type=int, help="seed for the sampled checks")
    p_validate.set_defaults(func=cmd_validate)

    p_generate = sub.add_parser("generate", help="dump one graph as an edge list")
    common(p_generate)
    p_generate.set_defaults(func=cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergentMomentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
