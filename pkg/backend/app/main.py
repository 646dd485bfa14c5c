import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .commands.router import build_parser, dispatch
from .core.config import get_settings
from .core.storage import StorageError
from ..core.panel import PanelDataError
from ..core.estimators.deep_wide import DeepWideError
from ..core.estimators.linear import LinearModelError
from ..core.estimators.dml import DMLError, UnknownControlGroupError
from ..core.simulation import SimulationError, ExportError
from ..core.generators.regression_table import ReportGenerationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INVALID_CONFIG = 2
EXIT_PANEL_ERROR = 3
EXIT_ESTIMATION_ERROR = 4
EXIT_SIMULATION_ERROR = 5
EXIT_IO_ERROR = 6

# Orden relevante: las subclases antes que sus bases
EXIT_CODES = (
    (ValidationError, EXIT_INVALID_CONFIG),
    (UnknownControlGroupError, EXIT_PANEL_ERROR),
    (PanelDataError, EXIT_PANEL_ERROR),
    (ExportError, EXIT_IO_ERROR),
    (StorageError, EXIT_IO_ERROR),
    (ReportGenerationError, EXIT_IO_ERROR),
    (OSError, EXIT_IO_ERROR),
    (DMLError, EXIT_ESTIMATION_ERROR),
    (LinearModelError, EXIT_ESTIMATION_ERROR),
    (DeepWideError, EXIT_ESTIMATION_ERROR),
    (SimulationError, EXIT_SIMULATION_ERROR),
)


def exit_code_for(error: BaseException) -> int:
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return EXIT_UNEXPECTED


def configure_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Punto de entrada de la línea de comandos. Devuelve el código de salida.
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
    except ValidationError as e:
        print(f"Invalid environment configuration: {e}", file=sys.stderr)
        return EXIT_INVALID_CONFIG

    configure_logging(args.log_level or settings.LOG_LEVEL)

    try:
        outputs = dispatch(args, settings)
    except Exception as e:
        code = exit_code_for(e)
        if code == EXIT_UNEXPECTED:
            logger.error(f"Unexpected error in '{args.command}': {str(e)}", exc_info=True)
        else:
            logger.error(f"'{args.command}' failed: {str(e)}")
        return code

    for name, path in outputs.items():
        logger.info(f"{name}: {path}")
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
