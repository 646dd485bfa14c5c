import json

import pytest

from backend.core.estimators.dml import DMLConfig, OlsNuisance, estimate_effect
from backend.core.generators.regression_table import (
    RegressionTableBuilder,
    RegressionTableWriter,
    ols_fixed_effects,
    significance_stars,
)


@pytest.fixture
def dml_result(small_panel):
    return estimate_effect(small_panel, "price", "tax", ["standard", "economic"],
                           DMLConfig(repetitions=3, nuisance=OlsNuisance()))


class TestSignificanceStars:

    @pytest.mark.parametrize("p_value, stars", [(0.001, "***"), (0.03, "**"), (0.07, "*"), (0.5, ""), (0.01, "**")])
    def test_thresholds(self, p_value, stars):
        assert significance_stars(p_value) == stars


class TestOlsFixedEffects:

    def test_clustered_by_entity(self, small_panel):
        fit = ols_fixed_effects(small_panel, ["c0", "c1", "c2", "c3"])

        assert fit.covariance_type == "clustered"
        assert fit.n_clusters == small_panel.n_entities
        assert fit.coefficient("tax") == pytest.approx(-0.5, abs=0.2)


class TestRegressionTableBuilder:

    def test_columns_and_group_rows(self, small_panel, dml_result):
        builder = RegressionTableBuilder(small_panel)
        builder.add_ols("OLS-FE")
        builder.add_ols("OLS-FE+std", with_standard_controls=True)
        builder.add_dml("DML-DW", "dml_dw", dml_result, ["standard", "economic"])
        table = builder.build({"seed": 1})

        assert table.labels() == ["OLS-FE", "OLS-FE+std", "DML-DW"]
        assert table.columns[1].groups == ("standard",)
        assert table.columns[2].groups == ("economic", "standard")
        assert "standard" in table.group_rows
        assert table.columns[0].clustered and not table.columns[2].clustered
        assert table.config == {"seed": 1}

    def test_missing_standard_controls_skip_column(self, small_panel):
        bare = small_panel.with_roles("price", "tax", ["c1", "c2"])
        builder = RegressionTableBuilder(bare)

        assert builder.add_ols("OLS-FE+std", with_standard_controls=True) is None
        assert builder.build().notes
        assert builder.build().columns == ()


class TestRegressionTableWriter:

    def test_writes_json_and_aligned_text(self, tmp_path, small_panel, dml_result):
        builder = RegressionTableBuilder(small_panel)
        builder.add_ols("OLS-FE")
        builder.add_dml("DML-LASSO", "dml_lasso", dml_result, ["standard", "economic"])
        table = builder.build()

        json_path, text_path = RegressionTableWriter().write(table, tmp_path)

        payload = json.loads(json_path.read_text(encoding="utf-8"))
        assert [c["label"] for c in payload["columns"]] == ["OLS-FE", "DML-LASSO"]
        assert payload["significance"] == "* p<.1, ** p<.05, *** p<.01"

        lines = text_path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "Dependent variable: price"
        assert "(1)" in lines[1] and "(2)" in lines[1]
        assert f"{table.columns[0].theta:.4f}" in lines[4]
        assert any(line.startswith("Clustered SE") and "CL" in line for line in lines)
        assert len({len(line) for line in lines[1:7] if not line.startswith("-")}) == 1

    def test_rendering_is_deterministic(self, small_panel):
        builder = RegressionTableBuilder(small_panel)
        builder.add_ols("OLS-FE")
        table = builder.build()

        writer = RegressionTableWriter()
        assert writer.render_text(table) == writer.render_text(table)
