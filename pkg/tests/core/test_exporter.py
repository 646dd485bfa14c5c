import json

import numpy as np
import pytest

from backend.core.panel import load_csv
from backend.core.simulation import DGPConfig, ExportError, draw_dgp, export_dgp_csv, generate_panel


@pytest.fixture
def draw():
    return draw_dgp(DGPConfig(k=4, entities=6, periods=3, urban_share=0.5, seed=5), replication=1)


class TestExportDgpCsv:

    def test_round_trip_through_loader(self, tmp_path, draw):
        paths = export_dgp_csv(draw, tmp_path / "panel.csv")
        dataset = load_csv(paths.csv, paths.schema)

        np.testing.assert_array_equal(dataset.outcome, draw.dataset.outcome)
        np.testing.assert_array_equal(dataset.treatment, draw.dataset.treatment)
        np.testing.assert_array_equal(dataset.controls, draw.dataset.controls)
        assert dataset.control_groups == draw.dataset.control_groups
        assert dataset.county_class == draw.dataset.county_class

    def test_sidecar_names(self, tmp_path, draw):
        paths = export_dgp_csv(draw, tmp_path / "synthetic.csv")

        assert paths.schema.name == "synthetic.schema.json"
        assert paths.truth.name == "synthetic.truth.json"
        truth = json.loads(paths.truth.read_text(encoding="utf-8"))
        assert truth["theta0"] == -0.5
        assert truth["replication"] == 1

    def test_header_order(self, tmp_path, draw):
        paths = export_dgp_csv(draw, tmp_path / "panel.csv")
        header = paths.csv.read_text(encoding="utf-8").splitlines()[0]

        assert header == "entity,period,class,price,tax,x001,x002,x003,x004"

    def test_byte_identical_for_same_seed(self, tmp_path):
        cfg = DGPConfig(k=3, entities=4, periods=2, seed=9)
        first = generate_panel(cfg, tmp_path / "a" / "panel.csv")
        second = generate_panel(cfg, tmp_path / "b" / "panel.csv")

        assert first.csv.read_bytes() == second.csv.read_bytes()
        assert first.truth.read_bytes() == second.truth.read_bytes()

    def test_empty_path(self, draw):
        with pytest.raises(ExportError):
            export_dgp_csv(draw, "")

    def test_unwritable_location(self, tmp_path, draw):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")

        with pytest.raises(ExportError):
            export_dgp_csv(draw, blocker / "panel.csv")
