import json
import logging
from pathlib import Path
from typing import Tuple, Union

from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateError

from .exceptions import ReportGenerationError, TemplateRenderError
from .table_elements import RegressionTable, SIGNIFICANCE_NOTE

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"
TEMPLATE_NAME = "regression_table.txt.j2"
JSON_FILENAME = "regression_table.json"
TEXT_FILENAME = "regression_table.txt"
MIN_COLUMN_WIDTH = 14


class RegressionTableWriter:
    """
    Escribe la tabla como JSON y como texto alineado con estrellas de significancia.
    """

    def __init__(self):
        self.environment = Environment(
            loader=FileSystemLoader(str(TEMPLATE_DIR)),
            undefined=StrictUndefined,
            keep_trailing_newline=True,
            autoescape=False,
        )

    def render_text(self, table: RegressionTable) -> str:
        labels = [table.treatment, *table.group_rows, "Entity and period FE", "Clustered SE"]
        label_width = max(len(label) for label in labels) + 2
        column_width = max([MIN_COLUMN_WIDTH, *[len(c.label) + 2 for c in table.columns]])
        try:
            template = self.environment.get_template(TEMPLATE_NAME)
            return template.render(
                table=table,
                label_width=label_width,
                column_width=column_width,
                rule="-" * (label_width + column_width * len(table.columns)),
                significance=SIGNIFICANCE_NOTE,
            )
        except TemplateError as e:
            raise TemplateRenderError(f"Cannot render regression table: {str(e)}")

    def write(self, table: RegressionTable, output_dir: Union[str, Path]) -> Tuple[Path, Path]:
        output_dir = Path(output_dir)
        json_path = output_dir / JSON_FILENAME
        text_path = output_dir / TEXT_FILENAME
        text = self.render_text(table)

        try:
            with open(json_path, "w", encoding="utf-8") as f:
                json.dump(table.to_dict(), f, indent=2)
                f.write("\n")
            with open(text_path, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise ReportGenerationError(f"Cannot write regression table: {str(e)}", str(output_dir))

        logger.info(f"Regression table written to {json_path} and {text_path}")
        return json_path, text_path
