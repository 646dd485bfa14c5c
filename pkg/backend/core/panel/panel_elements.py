from __future__ import annotations
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Any

import numpy as np

from .exceptions import PanelSchemaError, PanelValidationError, DuplicateRowError

CONTROL_GROUP_TAGS = (
    "housing",
    "migration",
    "political",
    "labor",
    "demographic",
    "economic",
    "public_finance",
    "ps_inputs",
    "ps_outputs",
    "schooling",
    "standard",
)

COUNTY_CLASSES = ("urban", "rural")


def ordinal_levels(values: Iterable[str]) -> List[str]:
    """
    Niveles únicos ordenados: numéricamente si todos son números, si no lexicográficamente.
    """
    unique = sorted(set(str(v) for v in values))
    try:
        return sorted(unique, key=lambda v: (float(v), v))
    except ValueError:
        return unique


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class RowRejection:
    """Fila del CSV descartada durante la carga."""
    line: int
    reason: str

    def to_dict(self) -> Dict[str, Any]:
        return {"line": self.line, "reason": self.reason}


@dataclass(frozen=True)
class PanelDataset:
    """
    Panel rectangular entidad x periodo con resultado, tratamiento y controles.

    Los arreglos se congelan al construir; las operaciones devuelven paneles nuevos.
    """
    entity_ids: np.ndarray
    period_ids: np.ndarray
    outcome: np.ndarray
    treatment: np.ndarray
    controls: np.ndarray
    control_names: Tuple[str, ...] = ()
    control_groups: Dict[str, str] = field(default_factory=dict)
    outcome_name: str = "outcome"
    treatment_name: str = "treatment"
    county_class: Optional[Dict[str, str]] = None
    source_name: Optional[str] = None
    rejected_rows: Tuple[RowRejection, ...] = ()

    def __post_init__(self):
        n = len(self.outcome)
        controls = np.asarray(self.controls, dtype=float)
        if controls.ndim == 1 and controls.size == 0:
            controls = controls.reshape(n, 0)

        object.__setattr__(self, "entity_ids", _frozen(np.asarray(self.entity_ids, dtype=str).astype(object)))
        object.__setattr__(self, "period_ids", _frozen(np.asarray(self.period_ids, dtype=str).astype(object)))
        object.__setattr__(self, "outcome", _frozen(np.asarray(self.outcome, dtype=float)))
        object.__setattr__(self, "treatment", _frozen(np.asarray(self.treatment, dtype=float)))
        object.__setattr__(self, "controls", _frozen(controls))
        object.__setattr__(self, "control_names", tuple(self.control_names))

        self._validate()

    def _validate(self):
        n = self.n_obs

        for name, vector in (("entity_ids", self.entity_ids),
                             ("period_ids", self.period_ids),
                             ("treatment", self.treatment)):
            if len(vector) != n:
                raise PanelValidationError(f"{name} has length {len(vector)}, expected {n}", self.source_name)

        if self.controls.ndim != 2 or self.controls.shape[0] != n:
            raise PanelValidationError(
                f"controls has shape {self.controls.shape}, expected ({n}, k)",
                self.source_name
            )

        if len(self.control_names) != self.controls.shape[1]:
            raise PanelValidationError(
                f"{len(self.control_names)} control names for {self.controls.shape[1]} control columns",
                self.source_name
            )

        for name, values in (("outcome", self.outcome), ("treatment", self.treatment)):
            if not np.all(np.isfinite(values)):
                raise PanelValidationError(f"{name} contains non-finite values", self.source_name)
        if not np.all(np.isfinite(self.controls)):
            raise PanelValidationError("controls contain non-finite values", self.source_name)

        seen: Dict[Tuple[str, str], int] = {}
        for row, pair in enumerate(zip(self.entity_ids, self.period_ids)):
            if pair in seen:
                raise DuplicateRowError(pair, [seen[pair], row], self.source_name)
            seen[pair] = row

        for column in self.control_groups:
            if column not in self.control_names:
                raise PanelSchemaError("group tag assigned to a column that is not a control", column)

    @property
    def n_obs(self) -> int:
        return len(self.outcome)

    @property
    def n_controls(self) -> int:
        return self.controls.shape[1]

    @property
    def entities(self) -> List[str]:
        return ordinal_levels(self.entity_ids)

    @property
    def periods(self) -> List[str]:
        return ordinal_levels(self.period_ids)

    @property
    def n_entities(self) -> int:
        return len(set(self.entity_ids))

    @property
    def n_periods(self) -> int:
        return len(set(self.period_ids))

    @property
    def groups(self) -> List[str]:
        """Grupos de controles presentes, en el orden de la taxonomía."""
        present = set(self.control_groups.values())
        return [tag for tag in CONTROL_GROUP_TAGS if tag in present]

    @property
    def column_names(self) -> List[str]:
        return [self.outcome_name, self.treatment_name, *self.control_names]

    def column(self, name: str) -> np.ndarray:
        """Obtiene una columna numérica por nombre, sea cual sea su rol."""
        if name == self.outcome_name:
            return self.outcome
        if name == self.treatment_name:
            return self.treatment
        if name in self.control_names:
            return self.controls[:, self.control_names.index(name)]
        raise PanelSchemaError("unknown column", name, self.source_name)

    def columns_in_groups(self, groups: Iterable[str]) -> List[str]:
        wanted = set(groups)
        return [name for name in self.control_names if self.control_groups.get(name) in wanted]

    def row_classes(self) -> np.ndarray:
        if self.county_class is None:
            raise PanelSchemaError("class labels absent", source=self.source_name)
        return np.array([self.county_class.get(entity) for entity in self.entity_ids], dtype=object)

    def take(self, rows: Sequence[int]) -> PanelDataset:
        rows = np.asarray(rows, dtype=int)
        county_class = None
        if self.county_class is not None:
            kept = set(self.entity_ids[rows])
            county_class = {e: c for e, c in self.county_class.items() if e in kept}

        return replace(
            self,
            entity_ids=self.entity_ids[rows],
            period_ids=self.period_ids[rows],
            outcome=self.outcome[rows],
            treatment=self.treatment[rows],
            controls=self.controls[rows, :],
            county_class=county_class,
            rejected_rows=(),
        )

    def with_roles(self,
                   outcome: str,
                   treatment: str,
                   control_names: Optional[Sequence[str]] = None) -> PanelDataset:
        """
        Reasigna roles: cualquier columna numérica puede ser resultado o tratamiento.
        """
        if outcome == treatment:
            raise PanelSchemaError("outcome and treatment must be different columns", outcome, self.source_name)

        pool: Dict[str, np.ndarray] = {name: self.column(name) for name in self.column_names}
        groups = dict(self.control_groups)

        if control_names is None:
            control_names = [name for name in self.control_names if name not in (outcome, treatment)]
        control_names = list(control_names)

        for name in [outcome, treatment, *control_names]:
            if name not in pool:
                raise PanelSchemaError("unknown column", name, self.source_name)

        if control_names:
            controls = np.column_stack([pool[name] for name in control_names])
        else:
            controls = np.empty((self.n_obs, 0))

        return replace(
            self,
            outcome=pool[outcome],
            treatment=pool[treatment],
            controls=controls,
            control_names=tuple(control_names),
            control_groups={name: groups[name] for name in control_names if name in groups},
            outcome_name=outcome,
            treatment_name=treatment,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Resumen serializable del panel."""
        return {
            "source_name": self.source_name,
            "n_obs": self.n_obs,
            "n_entities": self.n_entities,
            "n_periods": self.n_periods,
            "n_controls": self.n_controls,
            "outcome": self.outcome_name,
            "treatment": self.treatment_name,
            "groups": self.groups,
            "rejected_rows": [r.to_dict() for r in self.rejected_rows],
        }


@dataclass(frozen=True)
class StandardizationStats:
    """Media y desviación estándar muestral (N-1) por columna estandarizada."""
    means: Dict[str, float]
    stds: Dict[str, float]

    def to_dict(self) -> Dict[str, Any]:
        return {"means": dict(self.means), "stds": dict(self.stds)}


@dataclass(frozen=True)
class FixedEffectDesign:
    """
    Diseño de efectos fijos: intercepto + (J-1) dummies de entidad + (T-1) dummies de periodo.
    """
    matrix: np.ndarray
    column_names: Tuple[str, ...]
    entity_levels: Tuple[str, ...]
    period_levels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(np.asarray(self.matrix, dtype=float)))
        object.__setattr__(self, "column_names", tuple(self.column_names))

    @property
    def reference_entity(self) -> str:
        return self.entity_levels[0]

    @property
    def reference_period(self) -> str:
        return self.period_levels[0]

    @property
    def dummies(self) -> np.ndarray:
        """Bloque de dummies sin intercepto (entrada del camino ancho)."""
        return self.matrix[:, 1:]

    @property
    def n_dummies(self) -> int:
        return self.matrix.shape[1] - 1

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    def take(self, rows: Sequence[int]) -> FixedEffectDesign:
        return replace(self, matrix=self.matrix[np.asarray(rows, dtype=int), :])


@dataclass(frozen=True)
class CrossFitSplit:
    """Partición de filas en muestra principal I y auxiliar I^c."""
    main: np.ndarray
    auxiliary: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "main", _frozen(np.asarray(self.main, dtype=int)))
        object.__setattr__(self, "auxiliary", _frozen(np.asarray(self.auxiliary, dtype=int)))

    def swapped(self) -> CrossFitSplit:
        return CrossFitSplit(main=self.auxiliary, auxiliary=self.main)


@dataclass(frozen=True)
class TrainValSplit:
    """Partición entrenamiento / validación de las filas suministradas."""
    train: np.ndarray
    validation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "train", _frozen(np.asarray(self.train, dtype=int)))
        object.__setattr__(self, "validation", _frozen(np.asarray(self.validation, dtype=int)))
