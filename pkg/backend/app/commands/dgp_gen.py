import argparse
from pathlib import Path
from typing import Dict, Optional

from ..models.run_config import RunConfig
from ..services.simulation_service import SimulationService
from .simulate import add_dgp_arguments

HELP = "Export one synthetic panel with its schema and truth files"


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--replication", type=int, default=0, help="replication index of the draw")
    add_dgp_arguments(parser)


def config_values(args: argparse.Namespace) -> Dict:
    return {
        "replication": args.replication,
        "k": args.k,
        "entities": args.entities,
        "periods": args.periods,
        "theta0": args.theta0,
        "urban_share": args.urban_share,
    }


def handle(cfg: RunConfig, n_jobs: Optional[int]) -> Dict[str, Path]:
    return SimulationService.generate(cfg)
