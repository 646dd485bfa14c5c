from typing import Iterable, List, Optional


class DMLError(Exception):
    """Error base del estimador DML."""
    pass


class DegenerateTreatmentResidualError(DMLError):
    """
    El denominador sum(v_hat * tau) es prácticamente cero: m_hat reproduce el tratamiento
    y no queda variación identificadora.
    """

    def __init__(self, denominator: float, threshold: float, n_obs: int):
        self.denominator = denominator
        self.threshold = threshold
        self.n_obs = n_obs
        super().__init__(
            f"Degenerate treatment residual: |sum(v_hat * tau)| = {abs(denominator):.3e} "
            f"<= {threshold:.3e} over {n_obs} rows"
        )


class ScoreOrthogonalityError(DMLError):
    """La suma del score ortogonalizado en el pliegue no es cero dentro de la tolerancia."""

    def __init__(self, score_sum: float, bound: float):
        self.score_sum = score_sum
        self.bound = bound
        super().__init__(f"Score sum {score_sum:.3e} exceeds bound {bound:.3e}")


class RepetitionFailureError(DMLError):
    """Demasiadas repeticiones fallidas; incluye el diagnóstico de cada fallo."""

    def __init__(self, n_failed: int, n_total: int, diagnostics: List[str]):
        self.n_failed = n_failed
        self.n_total = n_total
        self.diagnostics = diagnostics
        shown = "; ".join(diagnostics[:5])
        super().__init__(f"{n_failed} of {n_total} DML repetitions failed: {shown}")


class UnknownControlGroupError(DMLError):
    """Grupo de controles solicitado que no existe en el panel."""

    def __init__(self, groups: Iterable[str], available: Optional[Iterable[str]] = None):
        self.groups = sorted(groups)
        self.available = list(available) if available is not None else []
        super().__init__(f"Unknown control groups {self.groups}; available: {self.available}")
