import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, field_validator

from .exceptions import (
    PanelDataError,
    PanelSchemaError,
    PanelValidationError,
    NonNumericValueError,
    DuplicateRowError,
)
from .panel_elements import (
    CONTROL_GROUP_TAGS,
    COUNTY_CLASSES,
    PanelDataset,
    RowRejection,
)

logger = logging.getLogger(__name__)

MISSING_TOKENS = {"", "NA", "N/A", "NaN", "nan", "null", "NULL", "None"}
DEFAULT_GROUP = "economic"


class PanelSchema(BaseModel):
    """Roles de columnas del CSV de panel (archivo JSON lateral)."""
    entity: str
    period: str
    outcome: str
    treatment: str
    class_column: Optional[str] = None
    groups: Dict[str, str] = Field(default_factory=dict)

    @field_validator("groups")
    @classmethod
    def _known_tags(cls, groups: Dict[str, str]) -> Dict[str, str]:
        unknown = sorted({tag for tag in groups.values() if tag not in CONTROL_GROUP_TAGS})
        if unknown:
            raise ValueError(f"unknown group tags {unknown}; expected one of {list(CONTROL_GROUP_TAGS)}")
        return groups

    @property
    def reserved_columns(self) -> List[str]:
        reserved = [self.entity, self.period]
        if self.class_column:
            reserved.append(self.class_column)
        return reserved


class PanelLoader:
    """
    Cargador de paneles desde CSV + esquema JSON.
    """

    @staticmethod
    def load_schema(schema_path: Union[str, Path]) -> PanelSchema:
        schema_path = Path(schema_path)

        if not schema_path.exists():
            raise FileNotFoundError(f"Schema file not found: {schema_path}")

        try:
            with open(schema_path, "r", encoding="utf-8") as f:
                raw = json.load(f)
            return PanelSchema(**raw)
        except json.JSONDecodeError as e:
            raise PanelSchemaError(f"Invalid schema JSON: {str(e)}", source=str(schema_path))
        except ValidationError as e:
            raise PanelSchemaError(f"Invalid schema: {str(e)}", source=str(schema_path))
        except TypeError as e:
            raise PanelSchemaError(f"Invalid schema: {str(e)}", source=str(schema_path))

    @staticmethod
    def load_from_file(file_path: Union[str, Path],
                       schema: Union[PanelSchema, str, Path]) -> PanelDataset:
        """
        Carga y valida un CSV de panel. Las filas con campos faltantes se descartan y se reportan.
        """
        file_path = Path(file_path)

        if not file_path.exists():
            raise FileNotFoundError(f"Panel CSV not found: {file_path}")

        if not isinstance(schema, PanelSchema):
            schema = PanelLoader.load_schema(schema)

        source = file_path.name

        try:
            frame = pd.read_csv(file_path, dtype=str, keep_default_na=False, encoding="utf-8")
        except UnicodeDecodeError as e:
            raise PanelValidationError(f"Encoding error: {str(e)}", source)
        except pd.errors.ParserError as e:
            raise PanelValidationError(f"Invalid CSV format: {str(e)}", source)
        except pd.errors.EmptyDataError:
            raise PanelValidationError("Empty CSV file", source)

        return PanelLoader.load_from_frame(frame, schema, source)

    @staticmethod
    def load_from_frame(frame: pd.DataFrame, schema: PanelSchema, source: Optional[str] = None) -> PanelDataset:
        columns = [str(c) for c in frame.columns]
        frame = frame.copy()
        frame.columns = columns

        for role, column in (("entity", schema.entity),
                             ("period", schema.period),
                             ("outcome", schema.outcome),
                             ("treatment", schema.treatment),
                             ("class_column", schema.class_column)):
            if column is not None and column not in columns:
                raise PanelSchemaError(f"{role} column missing from CSV header", column, source)

        numeric_columns = [c for c in columns if c not in schema.reserved_columns]
        control_names = [c for c in numeric_columns if c not in (schema.outcome, schema.treatment)]

        for column in schema.groups:
            if column not in control_names:
                raise PanelSchemaError("group tag assigned to a column that is not a control", column, source)

        text = frame.apply(lambda s: s.astype(str).str.strip())
        # Línea 1 es el encabezado
        lines = np.arange(len(text)) + 2

        missing = np.zeros(len(text), dtype=bool)
        reasons: Dict[int, List[str]] = {}

        def mark(mask: np.ndarray, reason: str):
            for idx in np.flatnonzero(mask):
                reasons.setdefault(int(idx), []).append(reason)
            missing[mask] = True

        for column in schema.reserved_columns:
            mark(text[column].isin(MISSING_TOKENS).to_numpy(), f"missing {column}")

        values: Dict[str, np.ndarray] = {}
        for column in numeric_columns:
            raw = text[column].to_numpy()
            absent = np.isin(raw, list(MISSING_TOKENS))
            parsed = np.full(len(raw), np.nan)
            parsed[~absent] = PanelLoader._parse_numeric(raw[~absent], lines[~absent], column, source)
            mark(absent, f"missing {column}")
            mark(~absent & ~np.isfinite(parsed), f"non-finite {column}")
            values[column] = parsed

        rejected = tuple(
            RowRejection(line=int(lines[idx]), reason="; ".join(reasons[idx]))
            for idx in sorted(reasons)
        )
        if rejected:
            logger.warning(f"Rejected {len(rejected)} rows from {source}: "
                           f"{[r.line for r in rejected[:10]]}{'...' if len(rejected) > 10 else ''}")

        keep = ~missing
        entity_ids = text[schema.entity].to_numpy()[keep]
        period_ids = text[schema.period].to_numpy()[keep]
        kept_lines = lines[keep]

        PanelLoader._check_duplicates(entity_ids, period_ids, kept_lines, source)

        county_class = None
        if schema.class_column:
            county_class = PanelLoader._entity_classes(
                entity_ids, text[schema.class_column].to_numpy()[keep], source
            )

        if len(set(entity_ids)) < 2 or len(set(period_ids)) < 2:
            raise PanelValidationError(
                f"need at least 2 entities and 2 periods, got {len(set(entity_ids))} and {len(set(period_ids))}",
                source
            )

        groups = {}
        untagged = []
        for column in control_names:
            if column in schema.groups:
                groups[column] = schema.groups[column]
            else:
                groups[column] = DEFAULT_GROUP
                untagged.append(column)
        if untagged:
            logger.warning(f"{len(untagged)} control columns without group tag default to '{DEFAULT_GROUP}'")

        if control_names:
            controls = np.column_stack([values[c][keep] for c in control_names])
        else:
            controls = np.empty((int(keep.sum()), 0))

        dataset = PanelDataset(
            entity_ids=entity_ids,
            period_ids=period_ids,
            outcome=values[schema.outcome][keep],
            treatment=values[schema.treatment][keep],
            controls=controls,
            control_names=tuple(control_names),
            control_groups=groups,
            outcome_name=schema.outcome,
            treatment_name=schema.treatment,
            county_class=county_class,
            source_name=source,
            rejected_rows=rejected,
        )

        logger.info(f"Loaded panel {source}: N={dataset.n_obs}, J={dataset.n_entities}, "
                    f"T={dataset.n_periods}, k={dataset.n_controls}")
        return dataset

    @staticmethod
    def _parse_numeric(raw: np.ndarray, lines: np.ndarray, column: str, source: Optional[str]) -> np.ndarray:
        try:
            return raw.astype(float)
        except ValueError:
            for value, line in zip(raw, lines):
                try:
                    float(value)
                except ValueError:
                    raise NonNumericValueError(column, int(line), str(value), source)
            raise

    @staticmethod
    def _check_duplicates(entity_ids: np.ndarray, period_ids: np.ndarray, lines: np.ndarray, source: Optional[str]):
        seen: Dict[tuple, int] = {}
        for entity, period, line in zip(entity_ids, period_ids, lines):
            pair = (str(entity), str(period))
            if pair in seen:
                raise DuplicateRowError(pair, [seen[pair], int(line)], source)
            seen[pair] = int(line)

    @staticmethod
    def _entity_classes(entity_ids: np.ndarray, labels: np.ndarray, source: Optional[str]) -> Dict[str, str]:
        classes: Dict[str, str] = {}
        for entity, label in zip(entity_ids, labels):
            label = str(label).lower()
            if label not in COUNTY_CLASSES:
                raise PanelSchemaError(f"class label {label!r} not in {list(COUNTY_CLASSES)}", str(entity), source)
            previous = classes.setdefault(str(entity), label)
            if previous != label:
                raise PanelSchemaError("entity has conflicting class labels", str(entity), source)
        return classes


def load_csv(path: Union[str, Path], schema: Union[PanelSchema, str, Path]) -> PanelDataset:
    """Carga un panel validado desde CSV y esquema."""
    try:
        return PanelLoader.load_from_file(path, schema)
    except (PanelDataError, FileNotFoundError):
        raise
    except Exception as e:
        raise PanelDataError(f"Unexpected error loading panel: {str(e)}", str(path))
