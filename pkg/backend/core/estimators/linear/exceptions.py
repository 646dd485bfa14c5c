from typing import List, Optional


class LinearModelError(Exception):
    """Error base para modelos lineales."""
    pass


class RankDeficiencyError(LinearModelError):
    """Error cuando la matriz de diseño no tiene rango completo de columnas."""

    def __init__(self, dependent_columns: List[str], rank: int, n_columns: int):
        self.dependent_columns = dependent_columns
        self.rank = rank
        self.n_columns = n_columns
        shown = dependent_columns[:10]
        more = f" (+{len(dependent_columns) - 10} more)" if len(dependent_columns) > 10 else ""
        super().__init__(
            f"Design matrix is rank deficient (rank {rank} < {n_columns} columns); "
            f"linearly dependent columns: {shown}{more}"
        )


class ClusterError(LinearModelError):
    """Error en la especificación de clusters."""

    def __init__(self, message: str, n_clusters: Optional[int] = None):
        self.n_clusters = n_clusters
        super().__init__(f"Cluster error: {message}")


class LassoConfigurationError(LinearModelError):
    """Error en la configuración de LASSO o de su validación cruzada."""
    pass
