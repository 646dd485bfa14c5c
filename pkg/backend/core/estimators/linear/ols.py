from __future__ import annotations
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from .exceptions import RankDeficiencyError, ClusterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClusterSpec:
    """Etiqueta de cluster por fila (la entidad en los paneles)."""
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1:
            raise ClusterError("cluster labels must be a vector")
        if any(label is None for label in labels):
            raise ClusterError("every row must carry a cluster label")
        object.__setattr__(self, "labels", labels)

    @property
    def n_clusters(self) -> int:
        return len(np.unique(self.labels.astype(str)))

    def codes(self) -> np.ndarray:
        _, codes = np.unique(self.labels.astype(str), return_inverse=True)
        return codes


@dataclass(frozen=True)
class OLSFit:
    """
    Resultado de mínimos cuadrados: coeficientes, residuos y covarianza (clásica o por clusters).
    """
    coefficients: np.ndarray
    residuals: np.ndarray
    fitted_values: np.ndarray
    covariance: np.ndarray
    column_names: Tuple[str, ...]
    xtx_inverse: np.ndarray
    covariance_type: str = "classical"
    n_clusters: Optional[int] = None

    @property
    def n_obs(self) -> int:
        return len(self.residuals)

    @property
    def n_params(self) -> int:
        return len(self.coefficients)

    @property
    def standard_errors(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    def index_of(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise KeyError(f"Unknown coefficient: {name}")

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.index_of(name)])

    def standard_error(self, name: str) -> float:
        return float(self.standard_errors[self.index_of(name)])

    def with_covariance(self, covariance: np.ndarray, covariance_type: str,
                        n_clusters: Optional[int] = None) -> OLSFit:
        return replace(self, covariance=covariance, covariance_type=covariance_type, n_clusters=n_clusters)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coefficients": dict(zip(self.column_names, self.coefficients.tolist())),
            "standard_errors": dict(zip(self.column_names, self.standard_errors.tolist())),
            "covariance_type": self.covariance_type,
            "n_obs": self.n_obs,
            "n_clusters": self.n_clusters,
        }


def ols_fit(design: np.ndarray,
            y: np.ndarray,
            column_names: Optional[Sequence[str]] = None) -> OLSFit:
    """
    Mínimos cuadrados por descomposición QR con pivoteo de columnas (sin ecuaciones normales explícitas).
    """
    design = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    n, p = design.shape
    names = tuple(column_names) if column_names is not None else tuple(f"x{j}" for j in range(p))

    if len(names) != p:
        raise ValueError(f"{len(names)} column names for {p} design columns")
    if y.shape[0] != n:
        raise ValueError(f"y has length {y.shape[0]}, design has {n} rows")
    if p > n:
        raise RankDeficiencyError(list(names[n:]), n, p)

    q, r, pivots = linalg.qr(design, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    tolerance = max(n, p) * np.finfo(float).eps * (diagonal[0] if p else 0.0)
    rank = int(np.sum(diagonal > tolerance))

    if rank < p:
        dependent = [names[j] for j in pivots[rank:]]
        raise RankDeficiencyError(dependent, rank, p)

    coefficients = np.empty(p)
    coefficients[pivots] = linalg.solve_triangular(r, q.T @ y)

    r_inverse = linalg.solve_triangular(r, np.eye(p))
    xtx_inverse = np.empty((p, p))
    xtx_inverse[np.ix_(pivots, pivots)] = r_inverse @ r_inverse.T

    fitted = design @ coefficients
    residuals = y - fitted
    dof = n - p
    sigma2 = float(residuals @ residuals) / dof if dof > 0 else np.nan

    return OLSFit(
        coefficients=coefficients,
        residuals=residuals,
        fitted_values=fitted,
        covariance=sigma2 * xtx_inverse,
        column_names=names,
        xtx_inverse=xtx_inverse,
    )


def clustered_covariance(fit: OLSFit,
                         design: np.ndarray,
                         clusters: ClusterSpec) -> np.ndarray:
    """
    Covarianza sándwich robusta por clusters con factor G/(G-1) * (N-1)/(N-p).
    """
    design = np.asarray(design, dtype=float)
    if not isinstance(clusters, ClusterSpec):
        clusters = ClusterSpec(np.asarray(clusters))

    n, p = design.shape
    if len(clusters.labels) != n:
        raise ClusterError(f"{len(clusters.labels)} cluster labels for {n} rows")

    codes = clusters.codes()
    n_clusters = int(codes.max()) + 1 if n else 0
    if n_clusters < 2:
        raise ClusterError("at least 2 clusters are required", n_clusters)

    scores = design * fit.residuals[:, None]
    cluster_scores = np.zeros((n_clusters, p))
    np.add.at(cluster_scores, codes, scores)
    meat = cluster_scores.T @ cluster_scores

    factor = n_clusters / (n_clusters - 1) * (n - 1) / (n - p)
    covariance = factor * fit.xtx_inverse @ meat @ fit.xtx_inverse
    return 0.5 * (covariance + covariance.T)


def ols_clustered(design: np.ndarray,
                  y: np.ndarray,
                  clusters: ClusterSpec,
                  column_names: Optional[Sequence[str]] = None) -> OLSFit:
    """Ajuste OLS con errores estándar agrupados."""
    if not isinstance(clusters, ClusterSpec):
        clusters = ClusterSpec(np.asarray(clusters))
    fit = ols_fit(design, y, column_names)
    covariance = clustered_covariance(fit, design, clusters)
    return fit.with_covariance(covariance, "clustered", clusters.n_clusters)
