import argparse
from pathlib import Path
from typing import Dict, Optional

from ..models.run_config import RunConfig
from ..services.estimation_service import EstimationService

HELP = "Estimate OLS-FE and DML effects on a panel CSV"


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--input", type=Path, help="panel CSV")
    parser.add_argument("--schema", dest="schema_path", type=Path, help="JSON schema with column roles")
    parser.add_argument("--estimator", "--estimators", dest="estimators", default="ols,dml-dw",
                        help="comma list of ols, dml-lasso, dml-dw")
    parser.add_argument("--groups", help="comma list of control groups for DML (default: all)")
    parser.add_argument("--group-sweep", action="store_true", help="one DML column per control group")
    parser.add_argument("--class", dest="county_class", default="all", help="all, urban or rural")
    parser.add_argument("--outcome", help="outcome column (default: schema outcome)")
    parser.add_argument("--treatment", help="treatment column (default: schema treatment)")
    parser.add_argument("--reps", type=int, help="DML repetitions (odd, default 51)")
    parser.add_argument("--max-epochs", type=int, help="deep-wide training epochs")
    parser.add_argument("--lasso-lambda", type=float, help="fixed LASSO penalty instead of cross-validation")
    parser.add_argument("--score", choices=["treatment", "partialling_out"], default="partialling_out",
                        help="denominator of the orthogonal score (default: partialling_out)")


def config_values(args: argparse.Namespace) -> Dict:
    groups: Optional[list] = None
    if args.groups is not None:
        groups = [g.strip() for g in args.groups.split(",") if g.strip()]
    return {
        "input": args.input,
        "schema_path": args.schema_path,
        "estimators": [e.strip() for e in args.estimators.split(",") if e.strip()],
        "groups": groups,
        "group_sweep": args.group_sweep,
        "county_class": args.county_class,
        "outcome": args.outcome,
        "treatment": args.treatment,
        "reps": args.reps,
        "max_epochs": args.max_epochs,
        "lasso_lambda": args.lasso_lambda,
        "score": args.score,
    }


def handle(cfg: RunConfig, n_jobs: Optional[int]) -> Dict[str, Path]:
    return EstimationService.run(cfg, n_jobs)
