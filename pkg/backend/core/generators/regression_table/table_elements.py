from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

SIGNIFICANCE_LEVELS = ((0.01, "***"), (0.05, "**"), (0.1, "*"))
SIGNIFICANCE_NOTE = "* p<.1, ** p<.05, *** p<.01"


def significance_stars(p_value: float) -> str:
    for level, stars in SIGNIFICANCE_LEVELS:
        if p_value < level:
            return stars
    return ""


@dataclass(frozen=True)
class TableColumn:
    """
    Una especificación estimada: coeficiente del tratamiento, error estándar y metadatos de la fila de controles.
    """
    label: str
    estimator: str
    theta: float
    standard_error: float
    p_value: float
    n_obs: int
    groups: Tuple[str, ...] = ()
    standard_controls: bool = False
    clustered: bool = False
    n_clusters: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def stars(self) -> str:
        return significance_stars(self.p_value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "estimator": self.estimator,
            "theta": self.theta,
            "se": self.standard_error,
            "p_value": self.p_value,
            "stars": self.stars,
            "n": self.n_obs,
            "groups": list(self.groups),
            "standard_controls": self.standard_controls,
            "clustered": self.clustered,
            "n_clusters": self.n_clusters,
            "details": self.details,
        }


@dataclass(frozen=True)
class RegressionTable:
    outcome: str
    treatment: str
    columns: Tuple[TableColumn, ...]
    group_rows: Tuple[str, ...]
    config: Dict[str, Any] = field(default_factory=dict)
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "outcome": self.outcome,
            "treatment": self.treatment,
            "columns": [c.to_dict() for c in self.columns],
            "group_rows": list(self.group_rows),
            "significance": SIGNIFICANCE_NOTE,
            "notes": list(self.notes),
            "config": self.config,
        }

    def labels(self) -> List[str]:
        return [c.label for c in self.columns]
