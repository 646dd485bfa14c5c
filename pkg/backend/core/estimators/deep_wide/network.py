from __future__ import annotations
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Literal, Sequence, Tuple, Union, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .exceptions import DimensionMismatchError


class DeepWideSpec(BaseModel):
    """
    Arquitectura: camino profundo (controles, ReLU en capas ocultas) + camino ancho (dummies de efectos fijos),
    combinados linealmente en la salida.
    """
    model_config = ConfigDict(frozen=True)

    deep_layer_sizes: Tuple[int, ...] = (16, 8)
    hidden_activation: Literal["relu", "identity"] = "relu"
    l2_penalty: float = Field(default=0.05, ge=0.0)

    @field_validator("deep_layer_sizes")
    @classmethod
    def _positive_layers(cls, sizes: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(sizes) < 1:
            raise ValueError("at least one deep layer is required")
        if any(size < 1 for size in sizes):
            raise ValueError(f"layer sizes must be positive, got {sizes}")
        return tuple(sizes)


@dataclass(frozen=True)
class NetInputs:
    """Filas de entrada: controles (n x k) y dummies de efectos fijos (n x f)."""
    controls: np.ndarray
    fixed_effects: np.ndarray

    def __post_init__(self):
        controls = np.atleast_2d(np.asarray(self.controls, dtype=float))
        fixed_effects = np.atleast_2d(np.asarray(self.fixed_effects, dtype=float))
        if controls.shape[0] != fixed_effects.shape[0]:
            raise DimensionMismatchError("row count", controls.shape[0], fixed_effects.shape[0])
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "fixed_effects", fixed_effects)

    @property
    def n_rows(self) -> int:
        return self.controls.shape[0]

    def take(self, rows: Sequence[int]) -> NetInputs:
        rows = np.asarray(rows, dtype=int)
        return NetInputs(self.controls[rows], self.fixed_effects[rows])


@dataclass(frozen=True)
class DeepWideParams:
    """
    Pesos y sesgos de la red conjunta.

    deep_weights[l] tiene forma (fan_in, fan_out); merge_weights combina la última capa profunda;
    wide_weights tiene un peso por columna de efectos fijos.
    """
    deep_weights: Tuple[np.ndarray, ...]
    deep_biases: Tuple[np.ndarray, ...]
    merge_weights: np.ndarray
    wide_weights: np.ndarray
    output_bias: float

    @property
    def n_controls(self) -> int:
        return self.deep_weights[0].shape[0]

    @property
    def n_fixed_effects(self) -> int:
        return self.wide_weights.shape[0]

    def arrays(self) -> List[np.ndarray]:
        """Orden canónico: (W1, b1, ..., WL, bL, merge, wide, bias)."""
        out: List[np.ndarray] = []
        for weight, bias in zip(self.deep_weights, self.deep_biases):
            out.extend([weight, bias])
        out.extend([self.merge_weights, self.wide_weights, np.array([self.output_bias])])
        return out

    @classmethod
    def from_arrays(cls, arrays: Sequence[np.ndarray]) -> DeepWideParams:
        arrays = list(arrays)
        n_layers = (len(arrays) - 3) // 2
        return cls(
            deep_weights=tuple(arrays[2 * l] for l in range(n_layers)),
            deep_biases=tuple(arrays[2 * l + 1] for l in range(n_layers)),
            merge_weights=arrays[-3],
            wide_weights=arrays[-2],
            output_bias=float(np.asarray(arrays[-1]).reshape(-1)[0]),
        )

    def hidden_weight_penalty(self) -> float:
        """Suma de cuadrados de los pesos entre capas ocultas (término L2)."""
        return float(sum(np.sum(w * w) for w in self.deep_weights))

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.arrays())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "deep_layers": [
                {"weights": w.tolist(), "biases": b.tolist()}
                for w, b in zip(self.deep_weights, self.deep_biases)
            ],
            "merge_weights": self.merge_weights.tolist(),
            "wide_weights": self.wide_weights.tolist(),
            "output_bias": self.output_bias,
        }


def init_params(spec: DeepWideSpec, k: int, f: int, seed: int) -> DeepWideParams:
    """
    Inicialización uniforme escalada sqrt(6 / (fan_in + fan_out)) en el camino profundo;
    pesos anchos, de combinación y sesgos en cero (una red sin entrenar predice una constante).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if f < 1:
        raise ValueError(f"f must be >= 1, got {f}")

    rng = np.random.default_rng(seed)
    sizes = [k, *spec.deep_layer_sizes]
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))

    return DeepWideParams(
        deep_weights=tuple(weights),
        deep_biases=tuple(biases),
        merge_weights=np.zeros(sizes[-1]),
        wide_weights=np.zeros(f),
        output_bias=0.0,
    )


def _activate(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(z, 0.0)
    return z


def _activation_derivative(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return (z > 0.0).astype(float)
    return np.ones_like(z)


def _check_inputs(params: DeepWideParams, inputs: NetInputs):
    if inputs.controls.shape[1] != params.n_controls:
        raise DimensionMismatchError("controls", params.n_controls, inputs.controls.shape[1])
    if inputs.fixed_effects.shape[1] != params.n_fixed_effects:
        raise DimensionMismatchError("fixed effects", params.n_fixed_effects, inputs.fixed_effects.shape[1])


def _forward_pass(params: DeepWideParams,
                  spec: DeepWideSpec,
                  inputs: NetInputs) -> Tuple[List[np.ndarray], List[np.ndarray], np.ndarray]:
    activations = [inputs.controls]
    pre_activations = []
    for weight, bias in zip(params.deep_weights, params.deep_biases):
        z = activations[-1] @ weight + bias
        pre_activations.append(z)
        activations.append(_activate(z, spec.hidden_activation))

    output = (activations[-1] @ params.merge_weights
              + inputs.fixed_effects @ params.wide_weights
              + params.output_bias)
    return activations, pre_activations, output


def predict(params: DeepWideParams, spec: DeepWideSpec, inputs: NetInputs) -> np.ndarray:
    _check_inputs(params, inputs)
    _, _, output = _forward_pass(params, spec, inputs)
    return output


def forward(params: DeepWideParams,
            spec: DeepWideSpec,
            controls_row: np.ndarray,
            fe_row: np.ndarray) -> float:
    """Salida para una sola fila: merge(deep(controles)) + wide(efectos fijos) + sesgo."""
    controls_row = np.asarray(controls_row, dtype=float)
    fe_row = np.asarray(fe_row, dtype=float)
    if controls_row.ndim != 1:
        raise DimensionMismatchError("controls row rank", 1, controls_row.ndim)
    if fe_row.ndim != 1:
        raise DimensionMismatchError("fixed-effect row rank", 1, fe_row.ndim)
    inputs = NetInputs(controls_row[None, :], fe_row[None, :])
    return float(predict(params, spec, inputs)[0])


def loss_and_gradient(params: DeepWideParams,
                      spec: DeepWideSpec,
                      batch: NetInputs,
                      targets: np.ndarray,
                      l2: float) -> Tuple[float, DeepWideParams]:
    """
    Pérdida MAE + l2 * suma de pesos ocultos al cuadrado, y su gradiente por retropropagación.

    En residuo exactamente cero se usa el subgradiente 0.
    """
    if batch.n_rows == 0:
        raise ValueError("batch must be non-empty")
    _check_inputs(params, batch)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if targets.shape[0] != batch.n_rows:
        raise DimensionMismatchError("targets", batch.n_rows, targets.shape[0])

    activations, pre_activations, output = _forward_pass(params, spec, batch)
    residual = output - targets
    n = batch.n_rows

    loss = float(np.mean(np.abs(residual))) + l2 * params.hidden_weight_penalty()

    d_output = np.sign(residual) / n
    grad_merge = activations[-1].T @ d_output
    grad_wide = batch.fixed_effects.T @ d_output
    grad_bias = float(np.sum(d_output))

    n_layers = len(params.deep_weights)
    grad_weights: List[np.ndarray] = [None] * n_layers
    grad_biases: List[np.ndarray] = [None] * n_layers

    delta = np.outer(d_output, params.merge_weights) * _activation_derivative(
        pre_activations[-1], spec.hidden_activation
    )
    for layer in reversed(range(n_layers)):
        weight = params.deep_weights[layer]
        grad_weights[layer] = activations[layer].T @ delta + 2.0 * l2 * weight
        grad_biases[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ weight.T) * _activation_derivative(pre_activations[layer - 1], spec.hidden_activation)

    grads = DeepWideParams(
        deep_weights=tuple(grad_weights),
        deep_biases=tuple(grad_biases),
        merge_weights=grad_merge,
        wide_weights=grad_wide,
        output_bias=grad_bias,
    )
    return loss, grads


def save_params(params: DeepWideParams, path: Union[str, Path]) -> Path:
    """Vuelca los parámetros a JSON para depuración (formato sin garantía de estabilidad)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(params.to_dict(), f, indent=2)
    return path
