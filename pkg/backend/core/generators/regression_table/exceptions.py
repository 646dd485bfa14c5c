from typing import Optional


class ReportGenerationError(Exception):
    """Error base al generar tablas e informes."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"{message}{f' ({path})' if path else ''}")


class TemplateRenderError(ReportGenerationError):
    """Fallo al renderizar la plantilla de texto."""
    pass
