"""RMSProp with per-parameter squared-gradient accumulators."""

from __future__ import annotations

import numpy as np


class RMSProp:
    """acc <- decay*acc + (1-decay)*g^2;  p <- p - lr*g/(sqrt(acc)+eps)."""

    def __init__(
        self,
        params: list[tuple[str, np.ndarray]],
        learning_rate: float = 0.001,
        decay: float = 0.9,
        eps: float = 1e-8,
    ):
        self.learning_rate = learning_rate
        self.decay = decay
        self.eps = eps
        self.acc: dict[str, np.ndarray] = {
            name: np.zeros_like(arr) for name, arr in params
        }

    def step(
        self,
        params: list[tuple[str, np.ndarray]],
        grads: list[tuple[str, np.ndarray]],
    ) -> None:
        """Update parameters in place; params and grads must align by name."""
        grad_by_name = dict(grads)
        for name, arr in params:
            g = grad_by_name.get(name)
            if g is None:
                raise KeyError(f"no gradient for parameter {name}")
            acc = self.acc[name]
            acc *= self.decay
            acc += (1.0 - self.decay) * (g * g)
            arr -= self.learning_rate * g / (np.sqrt(acc) + self.eps)

    def state_arrays(self) -> dict[str, np.ndarray]:
        return dict(self.acc)

    def load_state_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        for name, acc in self.acc.items():
            if name not in arrays:
                raise KeyError(f"missing optimizer state for {name}")
            src = arrays[name]
            if src.shape != acc.shape:
                raise ValueError(f"{name}: shape {src.shape} != {acc.shape}")
            self.acc[name] = src.astype(acc.dtype, copy=True)
