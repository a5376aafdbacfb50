"""Q-network: a stack of conv+batchnorm+relu blocks feeding two linear layers.

The default shape consumes a (2, 25, 24) state image with three 5x5 stride-2
padding-2 convolutions (16/32/32 channels), flattens to 384 features, and maps
through a 192-unit hidden layer to one Q-value per action.  A single-block
variant ("shallow") keeps the same interface.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .layers import BatchNorm2d, Conv2d, Linear, ReLU


@dataclass(frozen=True)
class NetworkConfig:
    input_planes: int = 2
    input_rows: int = 25
    input_cols: int = 24
    conv_channels: tuple[int, ...] = (16, 32, 32)
    kernel: int = 5
    stride: int = 2
    padding: int = 2
    fc_hidden: int = 192
    n_actions: int = 3

    def __post_init__(self) -> None:
        object.__setattr__(self, "conv_channels", tuple(self.conv_channels))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["conv_channels"] = list(self.conv_channels)
        return d


def shallow_config(base: NetworkConfig = NetworkConfig()) -> NetworkConfig:
    """Single conv block variant used for depth comparisons."""
    return NetworkConfig(
        input_planes=base.input_planes,
        input_rows=base.input_rows,
        input_cols=base.input_cols,
        conv_channels=base.conv_channels[:1],
        kernel=base.kernel,
        stride=base.stride,
        padding=base.padding,
        fc_hidden=base.fc_hidden,
        n_actions=base.n_actions,
    )


class QNetwork:
    """Composable layer stack with explicit backward and flat parameter access."""

    def __init__(
        self,
        config: NetworkConfig = NetworkConfig(),
        rng: np.random.Generator | None = None,
        dtype=np.float32,
    ):
        if rng is None:
            rng = np.random.default_rng()
        self.config = config
        self.dtype = np.dtype(dtype)
        self._named_layers: list[tuple[str, object]] = []
        rows, cols = config.input_rows, config.input_cols
        in_ch = config.input_planes
        for i, out_ch in enumerate(config.conv_channels, start=1):
            conv = Conv2d(
                in_ch, out_ch, config.kernel, config.stride, config.padding, rng, dtype
            )
            rows, cols = conv.output_hw(rows, cols)
            if rows < 1 or cols < 1:
                raise ValueError(f"conv{i} output collapsed to {rows}x{cols}")
            self._named_layers.append((f"conv{i}", conv))
            self._named_layers.append((f"bn{i}", BatchNorm2d(out_ch, dtype=dtype)))
            self._named_layers.append((f"relu{i}", ReLU()))
            in_ch = out_ch
        self._conv_out_shape = (rows, cols, in_ch)
        self.flat_features = in_ch * rows * cols
        self._named_layers.append(
            ("fc1", Linear(self.flat_features, config.fc_hidden, rng, dtype))
        )
        self._named_layers.append(("fc1_relu", ReLU()))
        self._named_layers.append(("out", Linear(config.fc_hidden, config.n_actions, rng, dtype)))
        self._n_flatten_at = 3 * len(config.conv_channels)

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        x = np.asarray(x)
        expected = (self.config.input_planes, self.config.input_rows, self.config.input_cols)
        if x.ndim != 4 or x.shape[1:] != expected:
            raise ValueError(f"expected input (n, {expected[0]}, {expected[1]}, {expected[2]})")
        # conv stack runs channels-last internally
        x = np.ascontiguousarray(x.transpose(0, 2, 3, 1), dtype=self.dtype)
        if training:
            for i, (_, layer) in enumerate(self._named_layers):
                if i == self._n_flatten_at:
                    x = x.reshape(x.shape[0], -1)
                x = layer.forward(x, training=True)
            return x
        # inference: fold batch norm's affine into each conv matmul, skip caches
        for b in range(len(self.config.conv_channels)):
            conv = self._named_layers[3 * b][1]
            bn = self._named_layers[3 * b + 1][1]
            scale = bn.gamma / np.sqrt(bn.running_var + bn.eps)
            shift = bn.beta - bn.running_mean * scale
            x = np.maximum(conv.infer(x, scale, shift), 0.0)
        x = x.reshape(x.shape[0], -1)
        fc1 = self._named_layers[self._n_flatten_at][1]
        out = self._named_layers[self._n_flatten_at + 2][1]
        x = np.maximum(x @ fc1.weight.T + fc1.bias, 0.0)
        return x @ out.weight.T + out.bias

    def backward(self, dout: np.ndarray) -> list[tuple[str, np.ndarray]]:
        """Backpropagate dL/dQ; returns named gradients aligned with parameters()."""
        grad = np.ascontiguousarray(dout, dtype=self.dtype)
        n = grad.shape[0]
        for i in range(len(self._named_layers) - 1, 0, -1):
            _, layer = self._named_layers[i]
            grad = layer.backward(grad)
            if i == self._n_flatten_at:
                grad = grad.reshape(n, *self._conv_out_shape)
        # the first conv's input gradient is never consumed; skip its col2im
        self._named_layers[0][1].backward(grad, need_input_grad=False)
        return self.gradients()

    def parameters(self) -> list[tuple[str, np.ndarray]]:
        return [
            (f"{name}.{pname}", arr)
            for name, layer in self._named_layers
            for pname, arr in layer.params()
        ]

    def gradients(self) -> list[tuple[str, np.ndarray]]:
        return [
            (f"{name}.{pname}", arr)
            for name, layer in self._named_layers
            for pname, arr in layer.grads()
        ]

    def buffers(self) -> list[tuple[str, np.ndarray]]:
        return [
            (f"{name}.{bname}", arr)
            for name, layer in self._named_layers
            for bname, arr in layer.buffers()
        ]

    def state_arrays(self) -> dict[str, np.ndarray]:
        return {name: arr for name, arr in self.parameters() + self.buffers()}

    def load_state_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        for name, layer in self._named_layers:
            for pname, arr in layer.params() + layer.buffers():
                key = f"{name}.{pname}"
                if key not in arrays:
                    raise KeyError(f"missing array {key}")
                src = arrays[key]
                if src.shape != arr.shape:
                    raise ValueError(f"{key}: shape {src.shape} != {arr.shape}")
                setattr(layer, pname, src.astype(arr.dtype, copy=True))

    def copy_from(self, other: "QNetwork") -> None:
        """Overwrite parameters and running stats with another net's (exact copy)."""
        self.load_state_arrays(other.state_arrays())

    def clone(self) -> "QNetwork":
        twin = QNetwork(self.config, rng=np.random.default_rng(0), dtype=self.dtype)
        twin.copy_from(self)
        return twin


def huber_loss(delta: np.ndarray) -> np.ndarray:
    """Elementwise: quadratic inside |delta| <= 1, linear outside."""
    delta = np.asarray(delta)
    a = np.abs(delta)
    return np.where(a <= 1.0, 0.5 * delta * delta, a - 0.5)


def huber_grad(delta: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(delta), -1.0, 1.0)


def masked_huber_backward(
    net: QNetwork, states: np.ndarray, actions: np.ndarray, targets: np.ndarray
) -> tuple[float, list[tuple[str, np.ndarray]]]:
    """Mean Huber loss on the taken actions' Q-values; populates gradients.

    Only the rows selected by ``actions`` receive gradient; the other action
    outputs are untouched, as their Q-values do not enter the loss.
    """
    n = len(actions)
    q = net.forward(states, training=True)
    idx = np.arange(n)
    delta = q[idx, actions] - targets.astype(q.dtype)
    loss = float(huber_loss(delta).mean())
    dq = np.zeros_like(q)
    dq[idx, actions] = huber_grad(delta) / n
    grads = net.backward(dq)
    return loss, grads
