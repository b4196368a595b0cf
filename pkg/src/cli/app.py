# -*- coding: utf-8 -*-
"""
Command-line interface.

Usage:
    python main.py hamiltonian --n 6 --p 20 [--sector 3] [--validate]
    python main.py experiment --config config/experiments/random_p48.yaml [--threads 4]
    python main.py train --config config/experiments/smoke.yaml --instance 0
    python main.py predict --gamma 0.05 --q 20
    python main.py crt --config crt.yaml
    python main.py spectrum --config spectrum.yaml
    python main.py --from-manifest runs/random_p48/manifest.yaml --output-dir runs/random_p48-rerun

Precedence: command-line flags, then environment variables, then
config/settings.yaml. Exit codes: 0 success, 1 user error, 2 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type

import yaml
from pydantic import BaseModel

from src.cli.commands import (
    RunContext,
    cmd_crt,
    cmd_experiment,
    cmd_hamiltonian,
    cmd_predict,
    cmd_spectrum,
    cmd_train,
)
from src.core.config import (
    CrtConfig,
    ExperimentConfig,
    FermiHubbardSpec,
    PredictConfig,
    SpectrumConfig,
    get_settings,
    load_yaml_config,
    validate_run_config,
)
from src.core.exceptions import ConfigurationError, DimensionError, LandscapeError, NumericalError
from src.core.log import configure_logging, get_logger

logger = get_logger("CLI")

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_NUMERICAL_ERROR = 2

COMMAND_MODELS: Dict[str, Type[BaseModel]] = {
    "hamiltonian": FermiHubbardSpec,
    "experiment": ExperimentConfig,
    "train": ExperimentConfig,
    "predict": PredictConfig,
    "crt": CrtConfig,
    "spectrum": SpectrumConfig,
}

# Config key each command's --seed overrides
SEED_KEYS: Dict[str, Tuple[str, ...]] = {
    "hamiltonian": ("seed",),
    "experiment": ("master_seed",),
    "train": ("master_seed",),
    "predict": ("hamiltonian", "seed"),
    "crt": ("seed",),
    "spectrum": ("seed",),
}


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per pipeline and the shared run flags."""
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", type=str, default=None, help="YAML run config")
    shared.add_argument("--seed", type=int, default=None, help="Override the config's seed")
    shared.add_argument("--threads", type=int, default=None, help="Worker cap")
    shared.add_argument("--output-dir", type=str, default=None, help="Artifact directory")
    shared.add_argument("--log-level", type=str, default=None, help="Logging level")

    parser = argparse.ArgumentParser(
        prog="vqa-landscape-lab",
        description="Loss-landscape laboratory for randomized variational quantum algorithms",
        parents=[shared],
    )
    parser.add_argument("--from-manifest", type=str, default=None, help="Rerun a manifest's command and config")
    subparsers = parser.add_subparsers(dest="command")

    hamiltonian = subparsers.add_parser("hamiltonian", parents=[shared], help="Spectral statistics of a Fermi-Hubbard chain")
    hamiltonian.add_argument("--n", type=int, default=None, help="Qubit count")
    hamiltonian.add_argument("--p", type=int, default=None, help="Parameter count for gamma")
    hamiltonian.add_argument("--sector", type=int, default=None, help="Fermion-number sector")
    hamiltonian.add_argument("--validate", action="store_true", help="Run the loss-histogram and MGF checks")
    hamiltonian.add_argument("--draws", type=int, default=2000, help="Ansatz draws for --validate")

    experiment = subparsers.add_parser("experiment", parents=[shared], help="Batch of VQE training instances")
    experiment.add_argument("--p", type=int, default=None, help="Override the parameter count (random family)")
    experiment.add_argument("--f", type=int, default=None, help="Override the parameter-split factor (hva family)")

    train = subparsers.add_parser("train", parents=[shared], help="One training instance with its trajectory")
    train.add_argument("--instance", type=int, default=0, help="Instance index")

    predict = subparsers.add_parser("predict", parents=[shared], help="Theory predictions for gamma")
    predict.add_argument("--gamma", type=float, default=None, help="Overparameterization factor")
    predict.add_argument("--q", type=int, default=None, help="Total rotation count")
    predict.add_argument("--r", type=int, default=None, help="Rotations per parameter")

    subparsers.add_parser("crt", parents=[shared], help="Monte Carlo critical-point profile")
    subparsers.add_parser("spectrum", parents=[shared], help="Random-matrix eigenvalue samples")
    return parser


def _set_nested(raw: Dict[str, Any], keys: Tuple[str, ...], value: Any) -> None:
    target = raw
    for key in keys[:-1]:
        if target.get(key) is None:
            return
        target = target[key]
    target[keys[-1]] = value


def _raw_config(args: argparse.Namespace, command: str) -> Dict[str, Any]:
    raw: Dict[str, Any] = {}
    if args.config:
        if not Path(args.config).exists():
            raise ConfigurationError(args.config, "config file not found")
        try:
            raw = load_yaml_config(args.config)
        except yaml.YAMLError as e:
            raise ConfigurationError(args.config, f"malformed YAML: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigurationError(args.config, "config must be a mapping")
    if command == "hamiltonian":
        raw = dict(raw.get("hamiltonian", raw))
        if args.n is not None:
            raw["n"] = args.n
    elif command == "predict":
        for key in ("gamma", "q", "r"):
            if getattr(args, key) is not None:
                raw[key] = getattr(args, key)
    elif command in ("experiment", "train"):
        if "training" not in raw:
            raw["training"] = get_settings().training.model_dump()
        for key in ("p", "f"):
            if getattr(args, key, None) is not None:
                raw[key] = getattr(args, key)
    if args.seed is not None:
        _set_nested(raw, SEED_KEYS[command], args.seed)
    return raw


def _output_dir(args: argparse.Namespace, command: str, config: BaseModel) -> str:
    if args.output_dir:
        return args.output_dir
    configured = getattr(config, "output_dir", None)
    if configured:
        return configured
    return str(Path(get_settings().runtime.output_dir) / command)


def _dispatch(command: str, config: BaseModel, args: argparse.Namespace, ctx: RunContext) -> Any:
    if command == "hamiltonian":
        return cmd_hamiltonian(
            config,
            p=getattr(args, "p", None),
            sector=getattr(args, "sector", None),
            validate=getattr(args, "validate", False),
            draws=getattr(args, "draws", 2000),
            ctx=ctx,
        )
    if command == "experiment":
        return cmd_experiment(config, ctx)
    if command == "train":
        return cmd_train(config, ctx, getattr(args, "instance", 0))
    if command == "predict":
        return cmd_predict(config, ctx)
    if command == "crt":
        return cmd_crt(config, ctx)
    return cmd_spectrum(config, ctx)


def _from_manifest(args: argparse.Namespace) -> Tuple[str, Dict[str, Any], Optional[int]]:
    path = Path(args.from_manifest)
    if not path.exists():
        raise ConfigurationError(str(path), "manifest not found")
    manifest = load_yaml_config(str(path))
    command = manifest.get("command")
    if command not in COMMAND_MODELS:
        raise ConfigurationError(str(path), f"unknown command {command!r}")
    for key, value in (manifest.get("options") or {}).items():
        setattr(args, key, value)
    return command, dict(manifest.get("config") or {}), manifest.get("threads")


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and map failures to exit codes.

    Returns:
        0 on success, 1 for configuration or dimension errors, 2 for numerical failures.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    configure_logging(args.log_level or settings.logging.level)

    try:
        manifest_threads = None
        if args.from_manifest:
            command, raw, manifest_threads = _from_manifest(args)
        elif args.command is None:
            parser.print_help()
            return EXIT_USER_ERROR
        else:
            command = args.command
            raw = _raw_config(args, command)

        config = validate_run_config(raw, COMMAND_MODELS[command])
        threads = args.threads or manifest_threads or settings.runtime.threads
        ctx = RunContext(output_dir=_output_dir(args, command, config), threads=max(1, threads))
        result = _dispatch(command, config, args, ctx)
    except (ConfigurationError, DimensionError) as e:
        logger.error(str(e))
        return EXIT_USER_ERROR
    except NumericalError as e:
        logger.error(str(e))
        return EXIT_NUMERICAL_ERROR
    except LandscapeError as e:
        logger.error(str(e))
        return EXIT_USER_ERROR
    except ValueError as e:
        logger.error(f"invalid input: {e}")
        return EXIT_USER_ERROR

    if command == "predict" and result.overparameterized:
        print(result.message)
    print(json.dumps(result.model_dump(mode="json"), indent=2))
    return EXIT_OK


def main() -> None:
    """Console entry point."""
    sys.exit(run())
