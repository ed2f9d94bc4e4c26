"""Command-line driver for the search experiments.

Subcommands: ``run <experiment>``, ``brute <experiment>``, and
``ensemble <experiment>``.  Every experiment has a complete built-in
config, so e.g. ``grovermin run gp`` works with no arguments; a JSON
config file and a handful of flags override the defaults.  All output is
deterministic for a fixed (config, seed) pair: traces are JSON with
sorted keys, histograms and distributions are CSV, and nothing
time-dependent is ever written.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baseline import grid_brute_min
from .encoding import GridLayout, VariableSpec
from .grover import iterate
from .minsearch import (
    NumericFailure,
    Schedule,
    SearchResult,
    SearchSetup,
    StopRule,
    adapted_grover_min,
    run_ensemble,
)
from .objectives import get_objective
from .pivot import GrowthConfig, PivotConfig, lj_growth, pivot_grover_search
from .statevector import (
    MarkedSet,
    Statevector,
    dense_reference_operators,
    phase_flip,
    uniform_superposition,
)

MINSEARCH_EXPERIMENTS = ("gp", "lj-trimer")
EXPERIMENTS = ("appendix-demo", "gp", "lj-trimer", "shubert-pivot", "lj-grow")

_PI = math.pi

DEFAULT_CONFIGS = {
    "appendix-demo": {
        "experiment": "appendix-demo",
        "seed": 0,
    },
    "gp": {
        "experiment": "gp",
        "objective": "gp",
        "seed": 0,
        "runs": 1,
        "schedule": "baritompa",
        "layout": [
            {"name": "x1", "lo": -3.2, "hi": 3.0, "qubits": 5},
            {"name": "x2", "lo": -3.2, "hi": 3.0, "qubits": 5},
        ],
        "stop": {"stall_window": 8, "max_rounds": None, "target": None},
        "strict": False,
    },
    "lj-trimer": {
        "experiment": "lj-trimer",
        "objective": "lj-trimer",
        "seed": 0,
        "runs": 1,
        "schedule": "incremental",
        "layout": [
            {"name": "B", "lo": 0.0001, "hi": 2.0, "qubits": 5},
            {"name": "A", "lo": 0.0001, "hi": _PI, "qubits": 4},
        ],
        "stop": {"stall_window": 8, "max_rounds": None, "target": None},
        "strict": False,
    },
    "shubert-pivot": {
        "experiment": "shubert-pivot",
        "objective": "shubert",
        "seed": 0,
        "runs": 1,
        "box": [[-10.0, 10.0], [-10.0, 10.0]],
        "qubits": 10,
        "pivot": {
            "fraction": 0.15,
            "kT": 50.0,
            "sigma_scale": 8.0,
            "sigma_decay": 0.9,
            "sigma_floor": 1e-4,
            "stall_generations": 20,
            "stall_tol": 0.0,
            "max_generations": 200,
            "elitism": True,
        },
    },
    "lj-grow": {
        "experiment": "lj-grow",
        "seed": 0,
        "runs": 1,
        "growth": {
            "target_atoms": 5,
            "method": 2,
            "qubits_per_axis": 5,
            "bond": None,
            "trimer_qubits": 10,
            "mirror_fifth": True,
        },
        "pivot": {
            "fraction": 0.15,
            "kT": 50.0,
            "sigma_scale": 8.0,
            "sigma_decay": 0.9,
            "sigma_floor": 1e-4,
            "stall_generations": 20,
            "stall_tol": 0.0,
            "max_generations": 200,
            "elitism": True,
        },
    },
}


class ConfigError(Exception):
    pass


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in out:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(out[key], dict) and isinstance(value, dict):
            out[key] = _merge(out[key], value, where)
        else:
            out[key] = value
    return out


def load_config(experiment: str, config_path: str | None) -> dict:
    """Built-in defaults for the experiment, overlaid with the JSON file."""
    if experiment not in DEFAULT_CONFIGS:
        raise ConfigError(f"unknown experiment {experiment!r}; known: {EXPERIMENTS}")
    config = copy.deepcopy(DEFAULT_CONFIGS[experiment])
    if config_path is None:
        return config
    try:
        text = Path(config_path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {config_path}: {exc}") from exc
    try:
        overrides = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{config_path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(overrides, dict):
        raise ConfigError(f"{config_path}: top level must be an object")
    if overrides.get("experiment", experiment) != experiment:
        raise ConfigError(
            f"{config_path}: config is for experiment "
            f"{overrides['experiment']!r}, not {experiment!r}"
        )
    return _merge(config, overrides)


def build_layout(config: dict) -> GridLayout:
    variables = []
    for i, spec in enumerate(config["layout"]):
        try:
            variables.append(
                VariableSpec(spec["name"], float(spec["lo"]), float(spec["hi"]), int(spec["qubits"]))
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"layout[{i}]: {exc}") from exc
    return GridLayout(variables)


def build_stop(config: dict) -> StopRule:
    stop = config.get("stop", {})
    try:
        return StopRule(
            stall_window=stop.get("stall_window"),
            target=stop.get("target"),
            max_rounds=stop.get("max_rounds"),
        )
    except ValueError as exc:
        raise ConfigError(f"stop: {exc}") from exc


def build_setup(config: dict) -> SearchSetup:
    objective = get_objective(config["objective"])
    layout = build_layout(config)
    if objective.arity != layout.arity:
        raise ConfigError(
            f"objective {objective.name!r} takes {objective.arity} variables, "
            f"layout defines {layout.arity}"
        )
    try:
        schedule = Schedule.parse(config["schedule"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return SearchSetup(
        objective=objective,
        layout=layout,
        schedule=schedule,
        stop=build_stop(config),
        strict=bool(config.get("strict", False)),
    )


def build_pivot_config(config: dict) -> PivotConfig:
    try:
        return PivotConfig(**config["pivot"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"pivot: {exc}") from exc


def build_growth_config(config: dict) -> GrowthConfig:
    growth = dict(config["growth"])
    target = growth.pop("target_atoms", 5)
    try:
        return GrowthConfig(pivot=build_pivot_config(config), **growth), int(target)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"growth: {exc}") from exc


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n")


def write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(x) if isinstance(x, float) else str(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def emit_distribution(state: Statevector, layout: GridLayout, values, path: Path) -> None:
    """Pre-measurement Born-rule distribution, one CSV row per grid index."""
    probs = state.probabilities()
    points = layout.all_points()
    header = ["index"] + [v.name for v in layout.variables] + ["value", "probability"]
    rows = []
    for i in range(layout.size):
        rows.append(
            [i]
            + [float(x) for x in points[i]]
            + [float(values[i]), float(probs[i])]
        )
    write_csv(path, header, rows)


def search_result_json(result: SearchResult, run_id: int, seed: int, config: dict) -> dict:
    return {
        "run_id": run_id,
        "seed": seed,
        "experiment": config["experiment"],
        "schedule": config["schedule"],
        "rounds": [
            {
                "round": r.round,
                "iterations": r.iterations,
                "extended": r.extended,
                "index": r.index,
                "point": list(r.point),
                "value": r.value,
                "threshold": r.threshold_after,
            }
            for r in result.trace.rounds
        ],
        "best_value": result.best_value,
        "best_index": result.best_index,
        "best_point": list(result.best_point),
        "total_iterations": result.total_iterations,
        "iterations_to_best": result.iterations_to_best,
        "converged": result.converged,
    }


def pivot_result_json(result, run_id: int, seed: int, config: dict) -> dict:
    return {
        "run_id": run_id,
        "seed": seed,
        "experiment": config["experiment"],
        "box": config["box"],
        "qubits": config["qubits"],
        "generations": [
            {
                "generation": g.generation,
                "num_pivots": g.num_pivots,
                "sigma": list(g.sigma),
                "threshold": g.threshold,
                "optimal_k": g.optimal_k,
                "grover_iterations": g.grover_iterations,
                "rejected_draws": g.rejected_draws,
                "best_value": g.best_value,
            }
            for g in result.generations
        ],
        "best_value": result.best_value,
        "best_point": list(result.best_point),
        "total_iterations": result.total_iterations,
        "converged": result.converged,
    }


def growth_result_json(result, run_id: int, seed: int, config: dict) -> dict:
    stages = []
    for stage in result.stages:
        stages.append(
            {
                "num_atoms": stage.num_atoms,
                "positions": _jsonable(stage.positions),
                "energy": stage.energy,
                "box": stage.box,
                "search_best": stage.search.best_value if stage.search else None,
                "search_generations": stage.search.num_generations if stage.search else None,
                "search_iterations": stage.search.total_iterations if stage.search else None,
                "search_converged": stage.search.converged if stage.search else None,
            }
        )
    return {
        "run_id": run_id,
        "seed": seed,
        "experiment": config["experiment"],
        "method": config["growth"]["method"],
        "stages": stages,
        "final_energy": result.final_energy,
        "final_positions": _jsonable(result.final_positions),
        "total_iterations": result.total_iterations,
    }


def run_rngs(seed: int, runs: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(runs)]


def appendix_demo() -> dict:
    """Two-qubit walkthrough: one amplification step pins the lowest corner.

    The register's four indices decode to the corners of the GP search
    square; the corner with the lowest value is marked classically, phase
    inverted, and amplified once, taking the uniform state to a basis state.
    """
    layout = GridLayout(
        [VariableSpec("x1", -3.2, 3.0, 1), VariableSpec("x2", -3.2, 3.0, 1)]
    )
    objective = get_objective("gp")
    reference = grid_brute_min(objective, layout)
    marked = MarkedSet.from_indices(2, [reference.index])
    state = uniform_superposition(2)
    p_s, p_t = dense_reference_operators(2, marked)
    after_flip = phase_flip(state, marked)
    final = iterate(state, marked, 1)
    return {
        "layout": [
            {"name": v.name, "lo": v.lo, "hi": v.hi, "qubits": v.qubits}
            for v in layout.variables
        ],
        "grid_points": _jsonable(layout.all_points()),
        "grid_values": _jsonable(objective.batch(layout.all_points())),
        "marked_index": reference.index,
        "marked_point": list(reference.point),
        "uniform": _jsonable(state.amplitudes.real),
        "p_s": _jsonable(p_s),
        "p_t": _jsonable(p_t),
        "after_phase_flip": _jsonable(after_flip.amplitudes.real),
        "final": _jsonable(final.amplitudes.real),
    }


def _print_matrix(name: str, matrix) -> None:
    print(f"{name} =")
    for row in matrix:
        print("  [" + "  ".join(f"{x:5.2f}" for x in row) + "]")


def cmd_run(args) -> int:
    config = load_config(args.experiment, args.config)
    config = _apply_flag_overrides(config, args)
    out = Path(args.out) if args.out else None
    seed = int(config["seed"])

    if config["experiment"] == "appendix-demo":
        demo = appendix_demo()
        print("two-qubit demo over the GP corner grid")
        print(f"uniform state     |s> = {demo['uniform']}")
        _print_matrix("P_s", demo["p_s"])
        _print_matrix("P_t", demo["p_t"])
        print(f"marked index {demo['marked_index']} -> point {demo['marked_point']}")
        print(f"P_t|s> = {demo['after_phase_flip']}")
        print(f"G|s>   = {demo['final']}")
        if out is not None:
            write_json(out / "appendix_demo.json", demo)
        return 0

    runs = int(config.get("runs", 1))
    rngs = run_rngs(seed, runs)

    if config["experiment"] in MINSEARCH_EXPERIMENTS:
        setup = build_setup(config)
        values = setup.objective.batch(setup.layout.all_points())
        for run_id, rng in enumerate(rngs):
            observer = None
            snapshots: list[tuple[int, Statevector]] = []
            if args.emit_distributions and out is not None:
                observer = lambda r, state, mask, thr: snapshots.append((r, state))
            try:
                result = adapted_grover_min(
                    setup.objective,
                    setup.layout,
                    setup.schedule,
                    setup.stop,
                    rng,
                    values=values,
                    strict=setup.strict,
                    observer=observer,
                )
            except NumericFailure as exc:
                if out is not None:
                    write_json(
                        out / f"run_{run_id:03d}.json",
                        {
                            "run_id": run_id,
                            "seed": seed,
                            "experiment": config["experiment"],
                            "error": str(exc),
                            "rounds_completed": exc.trace.num_rounds,
                        },
                    )
                print(f"run {run_id}: numeric failure: {exc}", file=sys.stderr)
                return 1
            print(
                f"experiment={config['experiment']} run={run_id} "
                f"best={result.best_value!r} point={tuple(result.best_point)} "
                f"rounds={result.num_rounds} total_iterations={result.total_iterations} "
                f"converged={result.converged}"
            )
            if out is not None:
                write_json(
                    out / f"run_{run_id:03d}.json",
                    search_result_json(result, run_id, seed, config),
                )
                for round_index, state in snapshots:
                    emit_distribution(
                        state,
                        setup.layout,
                        values,
                        out / f"dist_run{run_id:03d}_round{round_index:03d}.csv",
                    )
        return 0

    if config["experiment"] == "shubert-pivot":
        objective = get_objective(config["objective"])
        pivot_config = build_pivot_config(config)
        box = [tuple(b) for b in config["box"]]
        for run_id, rng in enumerate(rngs):
            result = pivot_grover_search(
                objective, box, int(config["qubits"]), pivot_config, rng
            )
            print(
                f"experiment={config['experiment']} run={run_id} "
                f"best={result.best_value!r} point={tuple(result.best_point)} "
                f"generations={result.num_generations} "
                f"total_iterations={result.total_iterations} converged={result.converged}"
            )
            if out is not None:
                write_json(
                    out / f"run_{run_id:03d}.json",
                    pivot_result_json(result, run_id, seed, config),
                )
        return 0

    if config["experiment"] == "lj-grow":
        growth_config, target_atoms = build_growth_config(config)
        for run_id, rng in enumerate(rngs):
            result = lj_growth(target_atoms, growth_config, rng)
            for stage in result.stages:
                print(
                    f"experiment=lj-grow run={run_id} atoms={stage.num_atoms} "
                    f"energy={stage.energy!r}"
                )
            print(
                f"experiment=lj-grow run={run_id} final_energy={result.final_energy!r} "
                f"total_iterations={result.total_iterations}"
            )
            if out is not None:
                write_json(
                    out / f"run_{run_id:03d}.json",
                    growth_result_json(result, run_id, seed, config),
                )
        return 0

    raise ConfigError(f"experiment {config['experiment']!r} has no run handler")


def cmd_brute(args) -> int:
    if args.experiment not in MINSEARCH_EXPERIMENTS:
        raise ConfigError(
            f"brute needs a grid experiment, one of {MINSEARCH_EXPERIMENTS}"
        )
    config = load_config(args.experiment, args.config)
    objective = get_objective(config["objective"])
    layout = build_layout(config)
    reference = grid_brute_min(objective, layout)
    payload = {
        "experiment": config["experiment"],
        "value": reference.value,
        "point": list(reference.point),
        "index": reference.index,
        "num_evaluations": reference.num_evaluations,
    }
    print(json.dumps(_jsonable(payload), sort_keys=True))
    if args.out:
        write_json(Path(args.out) / "brute.json", payload)
    return 0


def cmd_ensemble(args) -> int:
    if args.experiment not in MINSEARCH_EXPERIMENTS:
        raise ConfigError(
            f"ensemble needs a grid experiment, one of {MINSEARCH_EXPERIMENTS}"
        )
    config = load_config(args.experiment, args.config)
    config = _apply_flag_overrides(config, args)
    runs = int(config.get("runs", 1))
    seed = int(config["seed"])
    setup = build_setup(config)
    stats = run_ensemble(setup, runs, seed)
    print(
        f"experiment={config['experiment']} runs={runs} "
        f"success_fraction={stats.success_fraction!r} "
        f"mean_rounds={stats.mean_rounds!r} median_rounds={stats.median_rounds!r} "
        f"mean_total_iterations={stats.mean_total_iterations!r} "
        f"median_total_iterations={stats.median_total_iterations!r} "
        f"mean_iterations_to_best={stats.mean_iterations_to_best!r}"
    )
    if args.out:
        out = Path(args.out)
        payload = {
            "experiment": config["experiment"],
            "seed": seed,
            "runs": runs,
            "schedule": config["schedule"],
            "reference_value": stats.reference_value,
            "success_fraction": stats.success_fraction,
            "mean_rounds": stats.mean_rounds,
            "median_rounds": stats.median_rounds,
            "mean_total_iterations": stats.mean_total_iterations,
            "median_total_iterations": stats.median_total_iterations,
            "mean_iterations_to_best": stats.mean_iterations_to_best,
            "median_iterations_to_best": stats.median_iterations_to_best,
            "rounds_histogram": {str(k): v for k, v in stats.rounds_histogram.items()},
            "runs_detail": [
                search_result_json(result, run_id, seed, config)
                for run_id, result in enumerate(stats.results)
            ],
        }
        write_json(out / "ensemble.json", payload)
        write_csv(
            out / "rounds_histogram.csv",
            ["bin", "count"],
            sorted(stats.rounds_histogram.items()),
        )
    return 0


def _apply_flag_overrides(config: dict, args) -> dict:
    if getattr(args, "seed", None) is not None:
        config["seed"] = args.seed
    if getattr(args, "runs", None) is not None:
        if "runs" not in config:
            raise ConfigError(f"experiment {config['experiment']!r} takes no --runs")
        config["runs"] = args.runs
    if getattr(args, "schedule", None) is not None:
        if "schedule" not in config:
            raise ConfigError(f"experiment {config['experiment']!r} takes no --schedule")
        config["schedule"] = args.schedule
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grovermin",
        description="Statevector simulations of amplified minimum search.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config overriding the built-in defaults")
    common.add_argument("--seed", type=int, help="base seed (64-bit unsigned)")
    common.add_argument("--out", help="directory for JSON traces and CSV files")

    p_run = sub.add_parser("run", parents=[common], help="run one experiment")
    p_run.add_argument("experiment", choices=EXPERIMENTS)
    p_run.add_argument("--runs", type=int, help="number of independent seeded runs")
    p_run.add_argument(
        "--schedule",
        help="round schedule: baritompa, incremental, or constant:K",
    )
    p_run.add_argument(
        "--emit-distributions",
        action="store_true",
        help="write per-round pre-measurement distributions as CSV (needs --out)",
    )
    p_run.set_defaults(func=cmd_run)

    p_brute = sub.add_parser(
        "brute", parents=[common], help="exhaustive grid minimum for an experiment layout"
    )
    p_brute.add_argument("experiment", choices=MINSEARCH_EXPERIMENTS)
    p_brute.set_defaults(func=cmd_brute)

    p_ens = sub.add_parser(
        "ensemble", parents=[common], help="seeded ensemble statistics for a grid experiment"
    )
    p_ens.add_argument("experiment", choices=MINSEARCH_EXPERIMENTS)
    p_ens.add_argument("--runs", type=int, help="ensemble size")
    p_ens.add_argument(
        "--schedule",
        help="round schedule: baritompa, incremental, or constant:K",
    )
    p_ens.set_defaults(func=cmd_ensemble)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FloatingPointError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
