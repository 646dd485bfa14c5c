from typing import List, Optional, Tuple


class PanelDataError(Exception):
    """Error base para todos los errores de datos de panel."""

    def __init__(self, message: str, source: Optional[str] = None):
        self.source = source
        self.source_context = f" (source: {source})" if source else ""
        super().__init__(f"{message}{self.source_context}")


class PanelValidationError(PanelDataError):
    """Error cuando el panel no cumple con sus invariantes."""

    def __init__(self, message: str, source: Optional[str] = None):
        super().__init__(f"Panel validation failed: {message}", source)


class DuplicateRowError(PanelValidationError):
    """Error cuando un par (entidad, periodo) aparece más de una vez."""

    def __init__(self, pair: Tuple[str, str], lines: List[int], source: Optional[str] = None):
        self.pair = pair
        self.lines = lines
        super().__init__(
            f"duplicate (entity, period) pair {pair} at lines {lines}",
            source
        )


class NonNumericValueError(PanelValidationError):
    """Error cuando una columna numérica contiene texto."""

    def __init__(self, column: str, line: int, value: str, source: Optional[str] = None):
        self.column = column
        self.line = line
        self.value = value
        super().__init__(
            f"non-numeric value {value!r} in column '{column}' at line {line}",
            source
        )


class PanelSchemaError(PanelDataError):
    """Error relacionado con el esquema de roles de columnas."""

    def __init__(self,
                 message: str,
                 column: Optional[str] = None,
                 source: Optional[str] = None):
        self.column = column
        context = f" for column: {column}" if column else ""
        super().__init__(f"Panel schema error: {message}{context}", source)


class ZeroVarianceError(PanelDataError):
    """Error cuando se intenta estandarizar una columna constante."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"Column '{column}' has zero variance and cannot be standardized")


class EmptyPanelError(PanelDataError):
    """Error cuando una operación deja el panel sin filas."""
    pass


class SplitError(PanelDataError):
    """Error en la partición de filas."""
    pass
