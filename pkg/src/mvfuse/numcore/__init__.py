"""Numerical substrate: dense matrices, reverse-mode gradients, Adam, RNG."""

from . import autodiff
from .autodiff import Node, as_matrix, backward, const, param
from .gaussian import gaussian_sample, kl_diag, kl_std_normal, log_sigmoid_loss
from .optim import Adam, adam_step
from .rng import GENERATOR_NAME, RNG_VERSION, derive_seed, make_rng

__all__ = [
    "Adam", "GENERATOR_NAME", "Node", "RNG_VERSION", "adam_step", "as_matrix",
    "autodiff", "backward", "const", "derive_seed", "gaussian_sample", "kl_diag",
    "kl_std_normal", "log_sigmoid_loss", "make_rng", "param",
]
