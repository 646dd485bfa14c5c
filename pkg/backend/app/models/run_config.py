from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

Command = Literal["estimate", "simulate", "dgp-gen"]
ClassFilter = Literal["all", "urban", "rural"]

ESTIMATE_ESTIMATORS = ("ols", "dml-lasso", "dml-dw")
SIMULATE_ESTIMATORS = ("ols_subset", "dml_lasso", "dml_dw", "dml_oracle")

# Alias de línea de comandos -> nombre del estimador en la simulación
SIMULATE_ALIASES = {
    "ols": "ols_subset",
    "dml-lasso": "dml_lasso",
    "dml-dw": "dml_dw",
    "dml-oracle": "dml_oracle",
}


class RunConfig(BaseModel):
    """
    Configuración resuelta de una ejecución (flags > perfil > entorno > valores por defecto).

    Se copia íntegra en cada archivo de salida; el número de hilos no forma parte de ella.
    """
    command: Command
    seed: int
    seed_source: Literal["flag", "env", "profile"]
    profile: Literal["desk", "paper", "full"] = "desk"
    output: Path

    input: Optional[Path] = None
    schema_path: Optional[Path] = None
    estimators: List[str] = Field(default_factory=list)
    groups: Optional[List[str]] = None
    group_sweep: bool = False
    county_class: ClassFilter = "all"
    outcome: Optional[str] = None
    treatment: Optional[str] = None

    reps: Optional[int] = Field(default=None, ge=1)
    dml_reps: Optional[int] = Field(default=None, ge=1)
    k: Optional[int] = Field(default=None, ge=1)
    entities: Optional[int] = Field(default=None, ge=2)
    periods: Optional[int] = Field(default=None, ge=2)
    theta0: Optional[float] = None
    urban_share: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    replication: int = Field(default=0, ge=0)
    max_epochs: Optional[int] = Field(default=None, ge=0)
    lasso_lambda: Optional[float] = Field(default=None, ge=0.0)
    score: Literal["treatment", "partialling_out"] = "partialling_out"

    @field_validator("estimators")
    @classmethod
    def _unique(cls, estimators: List[str]) -> List[str]:
        return list(dict.fromkeys(estimators))

    @model_validator(mode="after")
    def _required_per_command(self) -> "RunConfig":
        if self.command == "estimate":
            if self.input is None or self.schema_path is None:
                raise ValueError("estimate requires --input and --schema")
            unknown = [e for e in self.estimators if e not in ESTIMATE_ESTIMATORS]
            if unknown:
                raise ValueError(f"unknown estimators {unknown}; expected {list(ESTIMATE_ESTIMATORS)}")
            if not self.estimators:
                raise ValueError("at least one estimator is required")
            if self.reps is not None and self.reps % 2 == 0:
                raise ValueError(f"DML repetitions must be odd, got {self.reps}")
        elif self.command == "simulate":
            self.estimators = [SIMULATE_ALIASES.get(e, e) for e in self.estimators]
            unknown = [e for e in self.estimators if e not in SIMULATE_ESTIMATORS]
            if unknown:
                raise ValueError(f"unknown estimators {unknown}; expected {list(SIMULATE_ESTIMATORS)}")
            if not self.estimators:
                raise ValueError("at least one estimator is required")
        if self.dml_reps is not None and self.dml_reps % 2 == 0:
            raise ValueError(f"DML repetitions must be odd, got {self.dml_reps}")
        return self

    def echo(self) -> Dict[str, Any]:
        # Sin el directorio de salida
        return self.model_dump(mode="json", exclude={"output"})
