"""Layers with explicit forward/backward passes on numpy arrays.

Every layer keeps its parameters and, after ``backward``, their gradients.
Weights use He-uniform initialization; batch norm scales start at one and
shifts at zero.  The float type is a constructor argument so the same layers
run in float32 for training and float64 for finite-difference checks.

Spatial activations flow through the conv stack in NHWC layout (channels
last), which keeps the im2col gather and the col2im scatter on contiguous
channel runs; weights stay in the conventional (out, in, kh, kw) shape.
"""

from __future__ import annotations

import numpy as np


def he_uniform(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, dtype) -> np.ndarray:
    limit = np.sqrt(6.0 / fan_in)
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


class Conv2d:
    """2D convolution via im2col and one matmul per pass; NHWC activations."""

    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        kernel: int = 5,
        stride: int = 2,
        padding: int = 2,
        rng: np.random.Generator | None = None,
        dtype=np.float32,
    ):
        if rng is None:
            rng = np.random.default_rng()
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel = kernel
        self.stride = stride
        self.padding = padding
        fan_in = in_channels * kernel * kernel
        self.weight = he_uniform(rng, (out_channels, in_channels, kernel, kernel), fan_in, dtype)
        self.bias = np.zeros(out_channels, dtype=dtype)
        self.dweight = np.zeros_like(self.weight)
        self.dbias = np.zeros_like(self.bias)
        self._cache = None

    def output_hw(self, h: int, w: int) -> tuple[int, int]:
        oh = (h + 2 * self.padding - self.kernel) // self.stride + 1
        ow = (w + 2 * self.padding - self.kernel) // self.stride + 1
        return oh, ow

    def _wmat(self) -> np.ndarray:
        # (kh, kw, in, out) column layout matching the im2col row layout
        return np.ascontiguousarray(self.weight.transpose(2, 3, 1, 0)).reshape(
            -1, self.out_channels
        )

    def _im2col(self, x: np.ndarray) -> tuple[np.ndarray, tuple[int, int]]:
        n, h, w, c = x.shape
        if c != self.in_channels:
            raise ValueError(f"expected {self.in_channels} input channels, got {c}")
        k, s, p = self.kernel, self.stride, self.padding
        oh, ow = self.output_hw(h, w)
        if oh < 1 or ow < 1:
            raise ValueError(f"kernel {k} does not fit a {h}x{w} input with padding {p}")
        if p:
            xp = np.zeros((n, h + 2 * p, w + 2 * p, c), dtype=x.dtype)
            xp[:, p : p + h, p : p + w, :] = x
        else:
            xp = x
        windows = np.lib.stride_tricks.sliding_window_view(xp, (k, k), axis=(1, 2))
        windows = windows[:, ::s, ::s]  # (n, oh, ow, c, k, k)
        cols = np.ascontiguousarray(windows.transpose(0, 1, 2, 4, 5, 3)).reshape(
            n * oh * ow, k * k * c
        )
        return cols, (oh, ow)

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        n, h, w, _ = x.shape
        cols, (oh, ow) = self._im2col(x)
        wmat = self._wmat()
        out = cols @ wmat + self.bias
        self._cache = (cols, wmat, (n, h, w, self.in_channels), (oh, ow))
        return out.reshape(n, oh, ow, self.out_channels)

    def infer(
        self, x: np.ndarray, scale: np.ndarray | None = None, shift: np.ndarray | None = None
    ) -> np.ndarray:
        """Forward pass without caching; optionally folds a per-channel affine
        (such as inference-mode batch norm) into the matmul."""
        n = x.shape[0]
        cols, (oh, ow) = self._im2col(x)
        wmat = self._wmat()
        bias = self.bias
        if scale is not None:
            wmat = wmat * scale
            bias = bias * scale + (shift if shift is not None else 0.0)
        out = cols @ wmat + bias
        return out.reshape(n, oh, ow, self.out_channels)

    def backward(self, dout: np.ndarray, need_input_grad: bool = True) -> np.ndarray | None:
        if self._cache is None:
            raise RuntimeError("backward before forward")
        cols, wmat, (n, h, w, c), (oh, ow) = self._cache
        k, s, p = self.kernel, self.stride, self.padding
        dmat = np.ascontiguousarray(dout).reshape(n * oh * ow, self.out_channels)
        dwmat = cols.T @ dmat
        self.dweight = np.ascontiguousarray(
            dwmat.reshape(k, k, c, self.out_channels).transpose(3, 2, 0, 1)
        )
        self.dbias = dmat.sum(axis=0)
        if not need_input_grad:
            return None
        # col2im: reorder so each (i, j) tap is a contiguous block, then
        # accumulate per stride-parity lattice to keep destinations contiguous
        dcols = (dmat @ wmat.T).reshape(n, oh, ow, k, k, c)
        dk = np.ascontiguousarray(dcols.transpose(3, 4, 0, 1, 2, 5))
        hp, wp = h + 2 * p, w + 2 * p
        dxp = np.empty((n, hp, wp, c), dtype=dout.dtype)
        for pi in range(s):
            rows = (hp - pi + s - 1) // s
            for pj in range(s):
                cols_out = (wp - pj + s - 1) // s
                lat = np.zeros((n, rows, cols_out, c), dtype=dout.dtype)
                for i in range(pi, k, s):
                    ro = i // s
                    for j in range(pj, k, s):
                        co = j // s
                        lat[:, ro : ro + oh, co : co + ow, :] += dk[i, j]
                dxp[:, pi::s, pj::s, :] = lat
        return dxp[:, p : p + h, p : p + w, :] if p else dxp

    def params(self):
        return [("weight", self.weight), ("bias", self.bias)]

    def grads(self):
        return [("weight", self.dweight), ("bias", self.dbias)]

    def buffers(self):
        return []


class BatchNorm2d:
    """Per-channel batch norm over NHWC activations with running statistics."""

    def __init__(self, channels: int, momentum: float = 0.1, eps: float = 1e-5, dtype=np.float32):
        self.channels = channels
        self.momentum = momentum
        self.eps = eps
        self.gamma = np.ones(channels, dtype=dtype)
        self.beta = np.zeros(channels, dtype=dtype)
        self.running_mean = np.zeros(channels, dtype=dtype)
        self.running_var = np.ones(channels, dtype=dtype)
        self.dgamma = np.zeros_like(self.gamma)
        self.dbeta = np.zeros_like(self.beta)
        self._cache = None

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        if x.shape[-1] != self.channels:
            raise ValueError(f"expected {self.channels} channels, got {x.shape[-1]}")
        if training:
            if x.shape[0] < 2:
                raise ValueError("training mode needs a batch of at least 2")
            axes = tuple(range(x.ndim - 1))
            mean = x.mean(axis=axes)
            var = x.var(axis=axes)  # biased, matching the normalization below
            inv_std = 1.0 / np.sqrt(var + self.eps)
            xhat = (x - mean) * inv_std
            m = self.momentum
            self.running_mean = ((1 - m) * self.running_mean + m * mean).astype(x.dtype)
            self.running_var = ((1 - m) * self.running_var + m * var).astype(x.dtype)
            self._cache = (xhat, inv_std)
        else:
            inv_std = 1.0 / np.sqrt(self.running_var + self.eps)
            xhat = (x - self.running_mean) * inv_std
            self._cache = None
        return self.gamma * xhat + self.beta

    def backward(self, dout: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError("backward needs a preceding training-mode forward")
        xhat, inv_std = self._cache
        axes = tuple(range(dout.ndim - 1))
        self.dgamma = (dout * xhat).sum(axis=axes)
        self.dbeta = dout.sum(axis=axes)
        # dxhat = gamma * dout, so its per-channel means are gamma * dbeta / n
        # and gamma * dgamma / n; reuse the sums instead of reducing again
        n = dout.size // dout.shape[-1]
        return (self.gamma * inv_std) * (dout - self.dbeta / n - xhat * (self.dgamma / n))

    def params(self):
        return [("gamma", self.gamma), ("beta", self.beta)]

    def grads(self):
        return [("gamma", self.dgamma), ("beta", self.dbeta)]

    def buffers(self):
        return [("running_mean", self.running_mean), ("running_var", self.running_var)]


class ReLU:
    def __init__(self):
        self._mask = None

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        self._mask = x > 0
        return x * self._mask

    def backward(self, dout: np.ndarray) -> np.ndarray:
        if self._mask is None:
            raise RuntimeError("backward before forward")
        return dout * self._mask

    def params(self):
        return []

    def grads(self):
        return []

    def buffers(self):
        return []


class Linear:
    def __init__(
        self,
        in_features: int,
        out_features: int,
        rng: np.random.Generator | None = None,
        dtype=np.float32,
    ):
        if rng is None:
            rng = np.random.default_rng()
        self.in_features = in_features
        self.out_features = out_features
        self.weight = he_uniform(rng, (out_features, in_features), in_features, dtype)
        self.bias = np.zeros(out_features, dtype=dtype)
        self.dweight = np.zeros_like(self.weight)
        self.dbias = np.zeros_like(self.bias)
        self._cache = None

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        if x.shape[1] != self.in_features:
            raise ValueError(f"expected {self.in_features} features, got {x.shape[1]}")
        self._cache = x
        return x @ self.weight.T + self.bias

    def backward(self, dout: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError("backward before forward")
        x = self._cache
        self.dweight = dout.T @ x
        self.dbias = dout.sum(axis=0)
        return dout @ self.weight

    def params(self):
        return [("weight", self.weight), ("bias", self.bias)]

    def grads(self):
        return [("weight", self.dweight), ("bias", self.dbias)]

    def buffers(self):
        return []
