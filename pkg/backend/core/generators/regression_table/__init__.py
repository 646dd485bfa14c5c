from backend.core.generators.regression_table.table_elements import (
    TableColumn,
    RegressionTable,
    significance_stars,
    SIGNIFICANCE_NOTE,
)
from backend.core.generators.regression_table.table_builder import RegressionTableBuilder, ols_fixed_effects
from backend.core.generators.regression_table.table_writer import RegressionTableWriter
from backend.core.generators.regression_table.exceptions import ReportGenerationError, TemplateRenderError

__all__ = [
    'TableColumn',
    'RegressionTable',
    'RegressionTableBuilder',
    'RegressionTableWriter',
    'ols_fixed_effects',
    'significance_stars',
    'SIGNIFICANCE_NOTE',
    'ReportGenerationError',
    'TemplateRenderError',
]
