from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from scipy import integrate, stats

from .exceptions import KDEError

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 512
GRID_CHUNK = 256
# Paso máximo de la rejilla en unidades de ancho de banda
MAX_STEP_BANDWIDTHS = 0.25
MAX_GRID_SIZE = 1 << 20


@dataclass(frozen=True)
class KDECurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        return float(integrate.trapezoid(self.density, self.grid))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bandwidth": self.bandwidth,
            "grid": self.grid.tolist(),
            "density": self.density.tolist(),
        }


def silverman_bandwidth(samples: np.ndarray) -> float:
    """0.9 * min(sd, IQR / 1.34) * n^(-1/5); si el IQR es cero se usa sd."""
    samples = np.asarray(samples, dtype=float)
    sd = float(np.std(samples, ddof=1))
    q75, q25 = np.percentile(samples, [75, 25])
    spread = sd if q75 - q25 <= 0 else min(sd, (q75 - q25) / 1.34)
    return 0.9 * spread * samples.size ** (-0.2)


def kde(samples: np.ndarray, grid_size: int = DEFAULT_GRID_SIZE) -> KDECurve:
    """
    Densidad con kernel gaussiano sobre una rejilla [min - 3h, max + 3h].

    grid_size es el mínimo de puntos; la rejilla se densifica hasta un paso <= h / 4 para que
    la integral trapezoidal siga cerca de 1 con valores atípicos lejanos.
    """
    samples = np.asarray(samples, dtype=float).reshape(-1)
    if samples.size < 2:
        raise KDEError("at least 2 samples are required", samples.size)
    if not np.all(np.isfinite(samples)):
        raise KDEError("samples contain non-finite values", samples.size)
    if grid_size < 2:
        raise KDEError(f"grid_size must be >= 2, got {grid_size}", samples.size)
    if np.ptp(samples) == 0:
        raise KDEError("samples have zero variance", samples.size)

    bandwidth = silverman_bandwidth(samples)
    low, high = samples.min() - 3 * bandwidth, samples.max() + 3 * bandwidth
    grid_size = max(grid_size, math.ceil((high - low) / (MAX_STEP_BANDWIDTHS * bandwidth)) + 1)
    if grid_size > MAX_GRID_SIZE:
        logger.warning(f"KDE grid of {grid_size} points capped at {MAX_GRID_SIZE}; "
                       f"range {high - low:.3g} is {(high - low) / bandwidth:.3g} bandwidths wide")
        grid_size = MAX_GRID_SIZE
    grid = np.linspace(low, high, grid_size)

    density = np.empty(grid_size)
    for start in range(0, grid_size, GRID_CHUNK):
        points = grid[start:start + GRID_CHUNK]
        kernel = stats.norm.pdf((points[:, None] - samples[None, :]) / bandwidth)
        density[start:start + GRID_CHUNK] = kernel.mean(axis=1) / bandwidth

    return KDECurve(grid=grid, density=density, bandwidth=bandwidth)
