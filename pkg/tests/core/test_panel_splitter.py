import numpy as np
import pytest

from backend.core.panel import (
    SplitError,
    EmptyPanelError,
    PanelSchemaError,
    split_crossfit,
    split_train_val,
    subset_by_class,
)


class TestSplitCrossfit:

    def test_even_halves(self):
        split = split_crossfit(1764, seed=3)

        assert len(split.main) == 882
        assert len(split.auxiliary) == 882

    def test_partition_of_all_rows(self):
        split = split_crossfit(101, seed=5)

        assert len(split.main) == 51
        assert len(split.auxiliary) == 50
        np.testing.assert_array_equal(np.sort(np.concatenate([split.main, split.auxiliary])), np.arange(101))

    def test_same_seed_same_split(self):
        first, second = split_crossfit(500, seed=11), split_crossfit(500, seed=11)
        np.testing.assert_array_equal(first.main, second.main)
        assert not np.array_equal(first.main, split_crossfit(500, seed=12).main)

    def test_swapped(self):
        split = split_crossfit(10, seed=0)
        np.testing.assert_array_equal(split.swapped().main, split.auxiliary)

    def test_too_few_rows(self):
        with pytest.raises(SplitError):
            split_crossfit(1, seed=0)


class TestSplitTrainVal:

    def test_twenty_percent_validation(self):
        rows = np.arange(1000, 1882)
        split = split_train_val(rows, seed=2)

        assert len(split.train) == 706
        assert len(split.validation) == 176
        assert set(split.train) | set(split.validation) == set(rows)
        assert not set(split.train) & set(split.validation)

    def test_rounds_to_nearest(self):
        assert len(split_train_val(np.arange(12), seed=0).validation) == 2
        assert len(split_train_val(np.arange(8), seed=0).validation) == 2
        assert len(split_train_val(np.arange(13), seed=0).validation) == 3

    def test_too_few_rows(self):
        with pytest.raises(SplitError):
            split_train_val(np.arange(4), seed=0)


class TestSubsetByClass:

    def test_keeps_only_class_rows(self, classed_panel):
        urban = subset_by_class(classed_panel, "urban")

        assert urban.n_entities == 10
        assert urban.n_obs == 40
        assert set(urban.county_class.values()) == {"urban"}

    def test_unknown_class(self, classed_panel):
        with pytest.raises(PanelSchemaError):
            subset_by_class(classed_panel, "suburban")

    def test_missing_labels(self, small_panel):
        with pytest.raises(PanelSchemaError, match="class labels absent"):
            subset_by_class(small_panel, "rural")

    def test_empty_class(self, classed_panel):
        rural = subset_by_class(classed_panel, "rural")
        with pytest.raises(EmptyPanelError):
            subset_by_class(rural, "urban")
