from typing import Optional, Tuple


class DeepWideError(Exception):
    """Error base de la red deep-wide."""
    pass


class DimensionMismatchError(DeepWideError):
    """Error cuando las entradas no coinciden con las dimensiones de los parámetros."""

    def __init__(self, what: str, expected: int, got: int):
        self.what = what
        self.expected = expected
        self.got = got
        super().__init__(f"Dimension mismatch for {what}: expected {expected}, got {got}")


class TrainingDivergedError(DeepWideError):
    """Error cuando la pérdida deja de ser finita durante el entrenamiento."""

    def __init__(self, epoch: int, loss: Optional[float] = None):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"Training diverged at epoch {epoch} (loss={loss})")
