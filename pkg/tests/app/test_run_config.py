from pathlib import Path

import pytest
from pydantic import ValidationError

from backend.app.core.profiles import get_profile
from backend.app.models.run_config import RunConfig


def estimate_config(**overrides) -> RunConfig:
    values = {
        "command": "estimate",
        "seed": 1,
        "seed_source": "flag",
        "output": Path("out"),
        "input": Path("panel.csv"),
        "schema_path": Path("panel.schema.json"),
        "estimators": ["ols", "dml-dw"],
    }
    values.update(overrides)
    return RunConfig(**values)


class TestRunConfig:

    def test_valid_estimate(self):
        cfg = estimate_config()
        assert cfg.county_class == "all"
        assert cfg.estimators == ["ols", "dml-dw"]

    def test_estimate_requires_input_and_schema(self):
        with pytest.raises(ValidationError, match="--input and --schema"):
            estimate_config(schema_path=None)

    def test_unknown_estimator(self):
        with pytest.raises(ValidationError):
            estimate_config(estimators=["dml-forest"])

    def test_even_repetitions(self):
        with pytest.raises(ValidationError, match="odd"):
            estimate_config(reps=4)

    def test_unknown_class(self):
        with pytest.raises(ValidationError):
            estimate_config(county_class="suburban")

    def test_simulate_aliases(self):
        cfg = RunConfig(command="simulate", seed=0, seed_source="profile", output=Path("o"),
                        estimators=["ols", "dml-lasso", "dml_dw", "ols"])
        assert cfg.estimators == ["ols_subset", "dml_lasso", "dml_dw"]

    def test_echo_omits_output_directory(self):
        echo = estimate_config().echo()
        assert "output" not in echo
        assert echo["seed"] == 1
        assert echo["seed_source"] == "flag"


class TestProfiles:

    def test_known_profiles(self):
        assert get_profile("desk").k == 50
        assert get_profile("paper").entities == 290
        assert get_profile("paper").k == 947
        assert get_profile("full") == get_profile("paper")

    def test_unknown_profile(self):
        with pytest.raises(ValueError):
            get_profile("cluster")
