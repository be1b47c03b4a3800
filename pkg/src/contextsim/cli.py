"""Command-line entry point.

Commands: pm, kcbs, pentagon, bell (inequality evaluations), bounds
(extremum searches), selftest (acceptance checks). Exit codes: 0 success,
2 invalid configuration, 3 bound search did not converge, 4 output I/O
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import bounds as bounds_mod
from .inequalities import (
    METHODS,
    eval_kcbs_temporal,
    eval_pentagon_lg,
    eval_pm,
    eval_transformed_bell,
)
from .noise import NoiseModel, depolarize
from .report import emit_bounds, emit_report, with_noise
from .scattering import parse_angle
from .selftest import selftest_text
from .states import state_from_literal

OUTPUT_DIR_ENV = "CONTEXTSIM_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CONVERGENCE = 3
EXIT_IO = 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    state: str = "00"
    method: str = "direct"
    theta: float | None = None
    noise: NoiseModel | None = None
    seed: int = 0
    output_path: str | None = None
    format: str = "table"
    target: str = "all"
    resolution: int = 8
    sweeps: int = 40
    restarts: int = 8
    iterations: int = 200
    tol: float = 1e-9


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextsim",
        description="Evaluate contextuality and temporal-correlation inequalities "
        "on small qubit registers.",
    )
    parser.add_argument("--config", help="JSON file with default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_state):
        p.add_argument("--state", default=default_state,
                       help='bitstring, "bell", or a file of "re im" amplitude lines')
        p.add_argument("--method", default="direct", choices=METHODS)
        p.add_argument("--noise-p", type=float, default=None,
                       help="state depolarizing probability")
        p.add_argument("--visibility", type=float, default=None,
                       help="per-block readout visibility")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", default="table", choices=("table", "json", "csv"))
        p.add_argument("--output", default=None, help="write the report here instead of stdout")

    common(sub.add_parser("pm", help="six-context state-independent combination"), "00")
    kcbs = sub.add_parser("kcbs", help="five-term cyclic two-time combination")
    common(kcbs, "0")
    kcbs.add_argument("--theta", required=True,
                      help='angle in radians; accepts floats, "pi", "acos(-0.75)"')
    pentagon = sub.add_parser("pentagon", help="ten-pair two-time combination")
    common(pentagon, "0")
    pentagon.add_argument("--theta", required=True)
    common(sub.add_parser("bell", help="five cross correlators with side conditions"), "bell")

    bounds_p = sub.add_parser("bounds", help="extremum searches for the five-cycle family")
    bounds_p.add_argument("--target", default="all", choices=bounds_mod.TARGETS + ("all",))
    bounds_p.add_argument("--resolution", type=int, default=8)
    bounds_p.add_argument("--sweeps", type=int, default=40)
    bounds_p.add_argument("--restarts", type=int, default=8)
    bounds_p.add_argument("--iterations", type=int, default=200)
    bounds_p.add_argument("--tol", type=float, default=1e-9)
    bounds_p.add_argument("--seed", type=int, default=0)
    bounds_p.add_argument("--format", default="table", choices=("table", "json", "csv"))
    bounds_p.add_argument("--output", default=None)

    sub.add_parser("selftest", help="run the acceptance checks")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    noise = None
    noise_p = getattr(args, "noise_p", None)
    visibility = getattr(args, "visibility", None)
    if noise_p is not None or visibility is not None:
        noise = NoiseModel(
            state_depolarizing_p=noise_p if noise_p is not None else 0.0,
            block_visibility_v=visibility if visibility is not None else 1.0,
        )
    theta = getattr(args, "theta", None)
    return RunConfig(
        command=args.command,
        state=getattr(args, "state", "00"),
        method=getattr(args, "method", "direct"),
        theta=None if theta is None else parse_angle(theta),
        noise=noise,
        seed=getattr(args, "seed", 0),
        output_path=getattr(args, "output", None),
        format=getattr(args, "format", "table"),
        target=getattr(args, "target", "all"),
        resolution=getattr(args, "resolution", 8),
        sweeps=getattr(args, "sweeps", 40),
        restarts=getattr(args, "restarts", 8),
        iterations=getattr(args, "iterations", 200),
        tol=getattr(args, "tol", 1e-9),
    )


def _evaluate(config: RunConfig):
    state = state_from_literal(config.state)
    def evaluate(st):
        if config.command == "pm":
            return eval_pm(st, config.method)
        if config.command == "kcbs":
            return eval_kcbs_temporal(st, config.theta, config.method)
        if config.command == "pentagon":
            return eval_pentagon_lg(st, config.theta, config.method)
        if config.command == "bell":
            return eval_transformed_bell(st, config.method)
        raise ValueError(f"unknown command {config.command!r}")

    ideal = evaluate(state)
    if config.noise is None:
        return ideal
    noisy = evaluate(depolarize(state, config.noise.state_depolarizing_p))
    return with_noise(ideal, noisy, config.noise)


def _run_bounds(config: RunConfig):
    results = []
    targets = bounds_mod.TARGETS if config.target == "all" else (config.target,)
    for target in targets:
        if target == "bell-kcbs":
            results.append(
                bounds_mod.tsirelson_search_bell(config.resolution, config.sweeps, config.tol)
            )
        elif target == "temporal-kcbs":
            results.append(bounds_mod.temporal_bound_kcbs(config.resolution, config.tol))
        elif target == "contextual-kcbs":
            results.append(
                bounds_mod.contextual_bound_kcbs(config.iterations, config.restarts, config.tol)
            )
        elif target == "pentagon-lg":
            results.append(bounds_mod.pentagon_scan())
    return results


def _write(text: str, path: str | None) -> int:
    if path is None:
        sys.stdout.write(text)
        return EXIT_OK
    if not os.path.isabs(path) and os.environ.get(OUTPUT_DIR_ENV):
        path = os.path.join(os.environ[OUTPUT_DIR_ENV], path)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        sys.stderr.write(f"error: cannot write {path!r}: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def run(config: RunConfig) -> int:
    if config.command == "selftest":
        text, ok = selftest_text()
        sys.stdout.write(text)
        return EXIT_OK if ok else 1
    if config.command == "bounds":
        results = _run_bounds(config)
        status = _write(emit_bounds(results, config.format), config.output_path)
        if status != EXIT_OK:
            return status
        if any(not r.converged for r in results):
            return EXIT_NO_CONVERGENCE
        return EXIT_OK
    report = _evaluate(config)
    return _write(emit_report(report, config.format), config.output_path)


def main(argv=None) -> int:
    parser = _build_parser()
    # first pass picks up --config so its values become defaults for the rest
    probe, _ = parser.parse_known_args(argv)
    if getattr(probe, "config", None):
        try:
            with open(probe.config, "r", encoding="utf-8") as fh:
                defaults = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            sys.stderr.write(f"error: bad config file {probe.config!r}: {exc}\n")
            return EXIT_CONFIG
        parser.set_defaults(**defaults)
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return run(config)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
