import json
import logging
from pathlib import Path
from typing import Dict, Union

import pandas as pd

from backend.core.simulation import BiasReport
from backend.core.generators.regression_table.exceptions import ReportGenerationError

logger = logging.getLogger(__name__)

JSON_FILENAME = "bias_report.json"
FLOAT_FORMAT = "%.17g"


def kde_filename(estimator: str) -> str:
    return f"kde_{estimator}.csv"


class BiasReportWriter:
    """
    Escribe el informe de sesgos como JSON y una curva KDE (grid, density) por estimador.
    """

    @staticmethod
    def write(report: BiasReport, output_dir: Union[str, Path]) -> Dict[str, Path]:
        output_dir = Path(output_dir)
        paths: Dict[str, Path] = {"report": output_dir / JSON_FILENAME}

        try:
            with open(paths["report"], "w", encoding="utf-8") as f:
                json.dump(report.to_dict(), f, indent=2)
                f.write("\n")

            for name in report.estimators:
                curve = report.curves[name]
                if curve is None:
                    continue
                path = output_dir / kde_filename(name)
                frame = pd.DataFrame({"grid": curve.grid, "density": curve.density})
                frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8", lineterminator="\n")
                paths[name] = path
        except OSError as e:
            raise ReportGenerationError(f"Cannot write bias report: {str(e)}", str(output_dir))

        logger.info(f"Bias report written to {paths['report']} ({len(paths) - 1} density files)")
        return paths
