"""Minimal CNN stack on numpy arrays: layers, Q-network, optimizer, checkpoints."""

from .layers import BatchNorm2d, Conv2d, Linear, ReLU
from .network import (
    NetworkConfig,
    QNetwork,
    huber_loss,
    huber_grad,
    masked_huber_backward,
)
from .optim import RMSProp
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "BatchNorm2d",
    "Conv2d",
    "Linear",
    "ReLU",
    "NetworkConfig",
    "QNetwork",
    "huber_loss",
    "huber_grad",
    "masked_huber_backward",
    "RMSProp",
    "load_checkpoint",
    "save_checkpoint",
]
