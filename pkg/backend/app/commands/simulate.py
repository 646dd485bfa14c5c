import argparse
from pathlib import Path
from typing import Dict, Optional

from ..models.run_config import RunConfig
from ..services.simulation_service import SimulationService

HELP = "Run the Monte Carlo bias experiment"


def add_dgp_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--k", type=int, help="number of controls")
    parser.add_argument("--entities", type=int, help="number of entities (J)")
    parser.add_argument("--periods", type=int, help="number of periods (T)")
    parser.add_argument("--theta0", type=float, help="true treatment effect")
    parser.add_argument("--urban-share", type=float, help="share of entities labelled urban")


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--estimator", "--estimators", dest="estimators", default="ols_subset,dml_lasso,dml_dw",
                        help="comma list of ols_subset, dml_lasso, dml_dw, dml_oracle")
    parser.add_argument("--reps", type=int, help="Monte Carlo replications")
    parser.add_argument("--dml-reps", type=int, help="DML repetitions per replication (odd)")
    parser.add_argument("--max-epochs", type=int, help="deep-wide training epochs")
    parser.add_argument("--lasso-lambda", type=float, help="fixed LASSO penalty instead of cross-validation")
    add_dgp_arguments(parser)


def config_values(args: argparse.Namespace) -> Dict:
    return {
        "estimators": [e.strip() for e in args.estimators.split(",") if e.strip()],
        "reps": args.reps,
        "dml_reps": args.dml_reps,
        "max_epochs": args.max_epochs,
        "lasso_lambda": args.lasso_lambda,
        "k": args.k,
        "entities": args.entities,
        "periods": args.periods,
        "theta0": args.theta0,
        "urban_share": args.urban_share,
    }


def handle(cfg: RunConfig, n_jobs: Optional[int]) -> Dict[str, Path]:
    return SimulationService.run(cfg, n_jobs)
