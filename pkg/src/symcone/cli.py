"""Command-line front-end for the experiment harness.

Subcommands: regret-cone, regret-ball, compare-ogd, svm-game, level-curves,
selftest. Each run is described by a JSON config document; command-line flags
override config fields, and a seed is mandatory. Exit codes: 0 on success,
1 on an invariant violation, 2 on I/O or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    ExperimentConfig,
    InvariantViolation,
    run_compare_ogd,
    run_level_curves,
    run_regret_ball,
    run_regret_cone,
    run_selftest,
    run_svm_game,
)

_RUNNERS = {
    "regret_cone": run_regret_cone,
    "regret_ball": run_regret_ball,
    "compare_ogd": run_compare_ogd,
    "svm_game": run_svm_game,
    "level_curves": run_level_curves,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its fields")
    parser.add_argument("--seed", type=int, help="base RNG seed (mandatory)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--instances", type=int, help="number of seeded instances")
    parser.add_argument("--horizon", type=int, help="number of time steps T")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symcone",
        description="Regret and game experiments for online optimization over symmetric cones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regret-cone", help="doubling-trick regret over a cone structure")
    _add_common(p)
    p.add_argument("--preset", help="named cone preset (see --list-presets)")
    p.add_argument("--structure", help="inline JSON block list")
    p.add_argument("--stepsize-mode", choices=["doubling", "optimized"])

    p = sub.add_parser("regret-ball", help="doubling-trick regret on the unit ball")
    _add_common(p)
    p.add_argument("--dim", type=int, help="ball dimension")
    p.add_argument("--stepsize-mode", choices=["doubling", "optimized"])

    p = sub.add_parser("compare-ogd", help="ball learner vs projected gradient descent")
    _add_common(p)
    p.add_argument("--dim", type=int, help="ball dimension")

    p = sub.add_parser("svm-game", help="margin game batch over a (d, T) grid")
    _add_common(p)
    p.add_argument("--dims", type=int, nargs="+", help="classifier dimensions")
    p.add_argument("--horizons", type=int, nargs="+", help="time horizons")
    p.add_argument("--n-points", type=int, help="data points per instance")
    p.add_argument("--margin", type=float, help="target separation margin")
    p.add_argument("--traces", choices=["first", "all", "none"])

    p = sub.add_parser("level-curves", help="entropy/divergence samples on the soc(2) slice")
    _add_common(p)
    p.add_argument("--resolution", type=int, help="grid points per axis (>= 10)")

    p = sub.add_parser("selftest", help="run the fast invariant sweep")
    p.add_argument("--seed", type=int, default=0)

    return parser


_KIND_BY_COMMAND = {
    "regret-cone": "regret_cone",
    "regret-ball": "regret_ball",
    "compare-ogd": "compare_ogd",
    "svm-game": "svm_game",
    "level-curves": "level_curves",
}


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    data["kind"] = _KIND_BY_COMMAND[args.command]

    overrides = {
        "seed": args.seed,
        "out_dir": args.out,
        "instances": args.instances,
        "horizon": args.horizon,
        "dim": getattr(args, "dim", None),
        "dims": getattr(args, "dims", None),
        "horizons": getattr(args, "horizons", None),
        "n_points": getattr(args, "n_points", None),
        "margin": getattr(args, "margin", None),
        "resolution": getattr(args, "resolution", None),
        "traces": getattr(args, "traces", None),
        "stepsize_mode": getattr(args, "stepsize_mode", None),
    }
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    if getattr(args, "preset", None) is not None:
        data["structure"] = args.preset
    elif getattr(args, "structure", None) not in (None,):
        data["structure"] = json.loads(args.structure)

    if "seed" not in data or data["seed"] is None:
        raise ValueError("a seed is mandatory (use --seed or the config file)")
    if "out_dir" not in data or data["out_dir"] is None:
        raise ValueError("an output directory is mandatory (use --out or the config file)")
    return ExperimentConfig.from_json(data)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            run_selftest(args.seed)
            print("selftest: all invariant suites passed")
            return 0
        config = _load_config(args)
        written = _RUNNERS[config.kind](config)
        print(f"{args.command}: wrote {len(written)} files to {config.out_dir}")
        return 0
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
