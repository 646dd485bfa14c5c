from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import LassoConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-7
DEFAULT_MAX_ITER = 100_000
DEFAULT_CV_FOLDS = 5
DEFAULT_GRID_SIZE = 50
DEFAULT_GRID_RATIO = 1e-4


@dataclass(frozen=True)
class LassoFit:
    """
    Solución de LASSO sobre datos centrados; el intercepto no se penaliza.

    iterations cuenta barridos completos o sobre el conjunto activo.
    """
    coefficients: np.ndarray
    intercept: float
    lambda_: float
    converged: bool
    iterations: int
    objective_history: Tuple[float, ...] = ()

    @property
    def n_nonzero(self) -> int:
        return int(np.count_nonzero(self.coefficients))

    def predict(self, design: np.ndarray) -> np.ndarray:
        return np.asarray(design, dtype=float) @ self.coefficients + self.intercept

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": self.lambda_,
            "intercept": self.intercept,
            "n_nonzero": self.n_nonzero,
            "converged": self.converged,
            "iterations": self.iterations,
        }


def soft_threshold(z: float, threshold: float) -> float:
    """S(z, t) = sign(z) * max(|z| - t, 0)."""
    if z > threshold:
        return z - threshold
    if z < -threshold:
        return z + threshold
    return 0.0


def lasso_objective(design: np.ndarray, y: np.ndarray, coefficients: np.ndarray, lam: float) -> float:
    """(1 / 2N) ||y_c - X_c b||^2 + lambda ||b||_1 con intercepto implícito."""
    design = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    residual = (y - y.mean()) - (design - design.mean(axis=0)) @ coefficients
    return float(0.5 * residual @ residual / len(y) + lam * np.sum(np.abs(coefficients)))


def lambda_max(design: np.ndarray, y: np.ndarray) -> float:
    """Menor lambda para la que todos los coeficientes son cero."""
    design = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if design.shape[1] == 0:
        return 0.0
    correlation = (design - design.mean(axis=0)).T @ (y - y.mean()) / len(y)
    return float(np.max(np.abs(correlation)))


def lambda_grid(design: np.ndarray,
                y: np.ndarray,
                size: int = DEFAULT_GRID_SIZE,
                ratio: float = DEFAULT_GRID_RATIO) -> np.ndarray:
    """Rejilla logarítmica decreciente de lambda_max a ratio * lambda_max."""
    if size < 1:
        raise LassoConfigurationError(f"grid size must be >= 1, got {size}")
    top = lambda_max(design, y)
    if top <= 0.0:
        return np.zeros(1)
    return np.geomspace(top, top * ratio, size)


class _CenteredProblem:
    """Estadísticos suficientes (Gram y covarianzas) de un problema centrado."""

    def __init__(self, design: np.ndarray, y: np.ndarray):
        n = design.shape[0]
        self.n = n
        self.x_mean = design.mean(axis=0)
        self.y_mean = float(y.mean())
        centered = design - self.x_mean
        y_centered = y - self.y_mean
        self.gram = centered.T @ centered / n
        self.xty = centered.T @ y_centered / n
        self.yty = float(y_centered @ y_centered) / n
        self.col_sq = np.diag(self.gram).copy()
        self.usable = self.col_sq > 1e-12

    def objective(self, beta: np.ndarray, lam: float) -> float:
        quadratic = self.yty - 2.0 * beta @ self.xty + beta @ self.gram @ beta
        return float(0.5 * quadratic + lam * np.sum(np.abs(beta)))

    def solve(self,
              lam: float,
              beta: np.ndarray,
              tol: float,
              max_iter: int,
              record_objective: bool) -> Tuple[np.ndarray, bool, int, List[float]]:
        beta = beta.copy()
        # gradient = X'y/n - G beta
        gradient = self.xty - self.gram @ beta
        history: List[float] = []
        iterations = 0
        all_columns = np.flatnonzero(self.usable)
        full_sweep = True

        while iterations < max_iter:
            columns = all_columns if full_sweep else np.flatnonzero(beta != 0.0)
            max_change = 0.0
            for j in columns:
                old = beta[j]
                rho = gradient[j] + self.col_sq[j] * old
                new = soft_threshold(rho, lam) / self.col_sq[j]
                if new != old:
                    delta = new - old
                    beta[j] = new
                    gradient -= self.gram[:, j] * delta
                    max_change = max(max_change, abs(delta))
            iterations += 1
            if record_objective:
                history.append(self.objective(beta, lam))

            if max_change < tol:
                if full_sweep:
                    return beta, True, iterations, history
                full_sweep = True
            else:
                full_sweep = False

        return beta, False, iterations, history


def _prepare(design: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    design = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if design.ndim != 2:
        raise LassoConfigurationError(f"design must be 2-D, got shape {design.shape}")
    if design.shape[0] != y.shape[0]:
        raise LassoConfigurationError(f"design has {design.shape[0]} rows, y has {y.shape[0]}")
    if design.shape[0] < 2:
        raise LassoConfigurationError("at least 2 rows are required")
    return design, y


def _finish(problem: _CenteredProblem,
            beta: np.ndarray,
            lam: float,
            converged: bool,
            iterations: int,
            history: List[float]) -> LassoFit:
    if not converged:
        logger.warning(f"LASSO did not converge at lambda={lam:.6g} after {iterations} sweeps")
    return LassoFit(
        coefficients=beta,
        intercept=problem.y_mean - float(problem.x_mean @ beta),
        lambda_=float(lam),
        converged=converged,
        iterations=iterations,
        objective_history=tuple(history),
    )


def lasso_fit(design: np.ndarray,
              y: np.ndarray,
              lam: float,
              tol: float = DEFAULT_TOLERANCE,
              max_iter: int = DEFAULT_MAX_ITER,
              warm_start: Optional[np.ndarray] = None,
              record_objective: bool = False) -> LassoFit:
    """
    LASSO por descenso coordenado cíclico con actualizaciones de covarianza.

    Minimiza (1/2N)||y_c - X_c b||^2 + lam ||b||_1. Converge cuando el mayor cambio de un coeficiente
    en un barrido completo es menor que tol.
    """
    if lam < 0:
        raise LassoConfigurationError(f"lambda must be >= 0, got {lam}")
    design, y = _prepare(design, y)
    problem = _CenteredProblem(design, y)

    beta = np.zeros(design.shape[1]) if warm_start is None else np.asarray(warm_start, dtype=float).copy()
    beta[~problem.usable] = 0.0
    beta, converged, iterations, history = problem.solve(lam, beta, tol, max_iter, record_objective)
    return _finish(problem, beta, lam, converged, iterations, history)


def lasso_path(design: np.ndarray,
               y: np.ndarray,
               lambdas: Sequence[float],
               tol: float = DEFAULT_TOLERANCE,
               max_iter: int = DEFAULT_MAX_ITER) -> List[LassoFit]:
    """
    Ajusta una secuencia de lambdas en orden decreciente con arranque en caliente.

    Devuelve los ajustes en el orden de lambdas recibido.
    """
    design, y = _prepare(design, y)
    lambdas = np.asarray(lambdas, dtype=float)
    problem = _CenteredProblem(design, y)

    order = np.argsort(-lambdas, kind="stable")
    fits: List[Optional[LassoFit]] = [None] * len(lambdas)
    beta = np.zeros(design.shape[1])
    for index in order:
        beta, converged, iterations, history = problem.solve(lambdas[index], beta, tol, max_iter, False)
        fits[index] = _finish(problem, beta, lambdas[index], converged, iterations, history)
    return fits


def lasso_lambda_cv(design: np.ndarray,
                    y: np.ndarray,
                    folds: int = DEFAULT_CV_FOLDS,
                    grid: Optional[Sequence[float]] = None,
                    seed: int = 0,
                    tol: float = DEFAULT_TOLERANCE,
                    max_iter: int = DEFAULT_MAX_ITER) -> float:
    """
    Elige lambda por validación cruzada K-fold minimizando el MSE fuera de muestra promedio.

    Los empates se resuelven a favor del lambda mayor.
    """
    design, y = _prepare(design, y)
    n = design.shape[0]

    if folds < 2:
        raise LassoConfigurationError(f"folds must be >= 2, got {folds}")
    if folds > n:
        raise LassoConfigurationError(f"folds ({folds}) exceeds number of rows ({n})")

    grid = lambda_grid(design, y) if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise LassoConfigurationError("lambda grid is empty")
    if np.any(grid < 0):
        raise LassoConfigurationError("lambda grid contains negative values")

    permutation = np.random.default_rng(seed).permutation(n)
    fold_rows = np.array_split(permutation, folds)
    errors = np.zeros((folds, grid.size))

    for f, held_out in enumerate(fold_rows):
        train_rows = np.setdiff1d(permutation, held_out)
        fits = lasso_path(design[train_rows], y[train_rows], grid, tol, max_iter)
        for g, fit in enumerate(fits):
            residual = y[held_out] - fit.predict(design[held_out])
            errors[f, g] = float(np.mean(residual ** 2))

    mean_error = errors.mean(axis=0)
    best = float(np.min(mean_error))
    tied = np.flatnonzero(mean_error <= best)
    chosen = float(np.max(grid[tied]))
    logger.debug(f"LASSO CV selected lambda={chosen:.6g} (mean MSE {best:.6g}, {folds} folds, {grid.size} values)")
    return chosen
