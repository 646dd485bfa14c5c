import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import pandas as pd

from .dgp import DGPDraw
from .exceptions import ExportError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
ENTITY_COLUMN = "entity"
PERIOD_COLUMN = "period"
CLASS_COLUMN = "class"


@dataclass(frozen=True)
class ExportPaths:
    csv: Path
    schema: Path
    truth: Path


def _sidecar(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}.json")


def export_dgp_csv(draw: DGPDraw, path: Union[str, Path]) -> ExportPaths:
    """
    Escribe el panel en el formato CSV de carga, su esquema JSON y un archivo de verdad con las piezas estructurales.
    """
    if path is None or str(path).strip() == "":
        raise ExportError("output path is empty")

    path = Path(path)
    dataset = draw.dataset

    frame = pd.DataFrame({
        ENTITY_COLUMN: dataset.entity_ids,
        PERIOD_COLUMN: dataset.period_ids,
    })
    schema = {
        "entity": ENTITY_COLUMN,
        "period": PERIOD_COLUMN,
        "outcome": dataset.outcome_name,
        "treatment": dataset.treatment_name,
        "groups": dict(dataset.control_groups),
    }
    if dataset.county_class is not None:
        frame[CLASS_COLUMN] = [dataset.county_class[e] for e in dataset.entity_ids]
        schema["class_column"] = CLASS_COLUMN

    frame[dataset.outcome_name] = dataset.outcome
    frame[dataset.treatment_name] = dataset.treatment
    controls = pd.DataFrame(dataset.controls, columns=list(dataset.control_names))
    frame = pd.concat([frame, controls], axis=1)

    paths = ExportPaths(csv=path, schema=_sidecar(path, "schema"), truth=_sidecar(path, "truth"))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(paths.csv, index=False, float_format=FLOAT_FORMAT, encoding="utf-8", lineterminator="\n")
        with open(paths.schema, "w", encoding="utf-8") as f:
            json.dump(schema, f, indent=2)
        with open(paths.truth, "w", encoding="utf-8") as f:
            json.dump(draw.truth(), f, indent=2)
    except OSError as e:
        raise ExportError(str(e), str(path))

    logger.info(f"Exported synthetic panel to {paths.csv} ({dataset.n_obs} rows, {dataset.n_controls} controls)")
    return paths
