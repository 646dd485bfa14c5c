from typing import List, Optional


class SimulationError(Exception):
    """Error base de la simulación Monte Carlo."""
    pass


class ReplicationFailureError(SimulationError):
    """Demasiadas réplicas fallidas en un experimento."""

    def __init__(self, n_failed: int, n_total: int, diagnostics: List[str]):
        self.n_failed = n_failed
        self.n_total = n_total
        self.diagnostics = diagnostics
        shown = "; ".join(diagnostics[:5])
        super().__init__(f"{n_failed} of {n_total} replications failed: {shown}")


class KDEError(SimulationError):
    """Muestras insuficientes o sin varianza para estimar una densidad."""

    def __init__(self, message: str, n_samples: Optional[int] = None):
        self.n_samples = n_samples
        super().__init__(f"KDE error: {message}")


class ExportError(SimulationError):
    """Error al escribir un panel sintético."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"Export error{f' ({path})' if path else ''}: {message}")
