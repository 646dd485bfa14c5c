# backend/app/commands/router.py
import argparse
import logging
from pathlib import Path
from typing import Dict, Optional, Tuple

from . import estimate, simulate, dgp_gen
from ..core.config import Settings
from ..core.profiles import get_profile
from ..models.run_config import RunConfig

logger = logging.getLogger(__name__)

COMMANDS = {
    "estimate": estimate,
    "simulate": simulate,
    "dgp-gen": dgp_gen,
}


def positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def add_common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, help="master seed (fallback: DMLPANEL_SEED, then profile)")
    parser.add_argument("--profile", choices=["desk", "paper", "full"], help="named simulation profile")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--threads", type=positive_int, help="maximum worker threads (default: all cores)")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmlpanel",
        description="Double machine learning for panel data: estimation and Monte Carlo bias experiments",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, module in COMMANDS.items():
        sub = subparsers.add_parser(name, help=module.HELP)
        add_common_arguments(sub)
        module.add_arguments(sub)
    return parser


def resolve_seed(args: argparse.Namespace, settings: Settings, profile: str) -> Tuple[int, str]:
    """Flag > DMLPANEL_SEED > semilla del perfil."""
    if args.seed is not None:
        return args.seed, "flag"
    if settings.SEED is not None:
        return settings.SEED, "env"
    return get_profile(profile).seed, "profile"


def build_run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    module = COMMANDS[args.command]
    profile = args.profile or settings.DEFAULT_PROFILE
    seed, seed_source = resolve_seed(args, settings, profile)
    return RunConfig(
        command=args.command,
        seed=seed,
        seed_source=seed_source,
        profile=profile,
        output=args.out if args.out is not None else settings.OUTPUT_DIR / args.command,
        **module.config_values(args),
    )


def resolve_threads(args: argparse.Namespace, settings: Settings) -> Optional[int]:
    return args.threads if args.threads is not None else settings.THREADS


def dispatch(args: argparse.Namespace, settings: Settings) -> Dict[str, Path]:
    cfg = build_run_config(args, settings)
    n_jobs = resolve_threads(args, settings)
    logger.info(f"{settings.PROJECT_NAME} {settings.VERSION}: running '{cfg.command}' "
                f"with seed {cfg.seed} ({cfg.seed_source}), profile '{cfg.profile}'")
    return COMMANDS[cfg.command].handle(cfg, n_jobs)
