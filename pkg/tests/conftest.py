import dataclasses
import json
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pandas as pd
import pytest

from backend.core.panel import PanelDataset

GROUP_CYCLE = ("standard", "housing", "economic", "labor")


def linear_panel(n_entities: int = 40,
                 n_periods: int = 5,
                 k: int = 4,
                 theta: float = -0.5,
                 noise_sd: float = 0.5,
                 seed: int = 0,
                 classes: bool = False) -> PanelDataset:
    """
    Panel lineal: tau = X a + delta_j + xi_t + v, p = theta * tau + X b + gamma_j + eta_t + u.
    """
    rng = np.random.default_rng(seed)
    n = n_entities * n_periods
    entity = np.repeat(np.arange(n_entities), n_periods)
    period = np.tile(np.arange(n_periods), n_entities)

    controls = rng.standard_normal((n, k))
    a = rng.normal(0.0, 0.5, k)
    b = rng.normal(0.0, 0.5, k)
    gamma, delta = rng.normal(0.0, 0.5, n_entities), rng.normal(0.0, 0.5, n_entities)
    eta, xi = rng.normal(0.0, 0.5, n_periods), rng.normal(0.0, 0.5, n_periods)

    treatment = controls @ a + delta[entity] + xi[period] + noise_sd * rng.standard_normal(n)
    outcome = (theta * treatment + controls @ b + gamma[entity] + eta[period]
               + noise_sd * rng.standard_normal(n))

    names = tuple(f"c{i}" for i in range(k))
    entity_ids = np.array([f"m{j:03d}" for j in range(n_entities)], dtype=object)
    county_class = None
    if classes:
        county_class = {e: ("urban" if j % 2 == 0 else "rural") for j, e in enumerate(entity_ids)}

    return PanelDataset(
        entity_ids=entity_ids[entity],
        period_ids=np.array([str(2010 + t) for t in range(n_periods)], dtype=object)[period],
        outcome=outcome,
        treatment=treatment,
        controls=controls,
        control_names=names,
        control_groups={name: GROUP_CYCLE[i % len(GROUP_CYCLE)] for i, name in enumerate(names)},
        outcome_name="price",
        treatment_name="tax",
        county_class=county_class,
        source_name="linear",
    )


def write_panel(dataset: PanelDataset, directory: Path, name: str = "panel") -> Dict[str, Path]:
    """Escribe un panel como CSV + esquema JSON en el formato de carga."""
    frame = pd.DataFrame({"municipality": dataset.entity_ids, "year": dataset.period_ids})
    schema: Dict = {
        "entity": "municipality",
        "period": "year",
        "outcome": dataset.outcome_name,
        "treatment": dataset.treatment_name,
        "groups": dict(dataset.control_groups),
    }
    if dataset.county_class is not None:
        frame["county_class"] = [dataset.county_class[e] for e in dataset.entity_ids]
        schema["class_column"] = "county_class"
    frame[dataset.outcome_name] = dataset.outcome
    frame[dataset.treatment_name] = dataset.treatment
    for j, column in enumerate(dataset.control_names):
        frame[column] = dataset.controls[:, j]

    csv_path = directory / f"{name}.csv"
    schema_path = directory / f"{name}.schema.json"
    frame.to_csv(csv_path, index=False, float_format="%.17g")
    schema_path.write_text(json.dumps(schema), encoding="utf-8")
    return {"csv": csv_path, "schema": schema_path}


@pytest.fixture
def panel_factory():
    return linear_panel


@pytest.fixture
def small_panel() -> PanelDataset:
    return linear_panel()


@pytest.fixture
def classed_panel() -> PanelDataset:
    return linear_panel(n_entities=20, n_periods=4, classes=True)


@pytest.fixture
def classed_panel_files(tmp_path, classed_panel) -> Dict[str, Path]:
    """Panel con clases donde c1 es constante entre los municipios urbanos."""
    controls = classed_panel.controls.copy()
    controls[classed_panel.row_classes() == "urban", 1] = 3.0
    return write_panel(dataclasses.replace(classed_panel, controls=controls), tmp_path)


@pytest.fixture
def panel_files(tmp_path, small_panel) -> Dict[str, Path]:
    return write_panel(small_panel, tmp_path)


@pytest.fixture
def schema_dict() -> Dict:
    return {
        "entity": "municipality",
        "period": "year",
        "outcome": "price",
        "treatment": "tax",
        "groups": {"income": "economic"},
    }


@pytest.fixture
def write_csv(tmp_path):
    def _write(text: str, schema: Optional[Dict] = None, name: str = "data"):
        csv_path = tmp_path / f"{name}.csv"
        csv_path.write_text(text, encoding="utf-8")
        schema_path = None
        if schema is not None:
            schema_path = tmp_path / f"{name}.schema.json"
            schema_path.write_text(json.dumps(schema), encoding="utf-8")
        return csv_path, schema_path
    return _write
