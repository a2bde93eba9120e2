"""Multi-view autoencoders: joint functions, the seven model kinds, training."""

from .config import ADVERSARIAL_KINDS, MODEL_KINDS, GRID_LATENT_DIMS, VARIATIONAL_KINDS, MvaeConfig
from .io import dumps_mvae, load_mvae, loads_mvae, save_mvae
from .joint import GaussianPosterior, joint_mean, joint_mopoe, joint_poe, view_subsets
from .losses import critic_loss, forward, generator_term, model_loss
from .train import TrainedMvae, encode_joint, train_mvae

__all__ = [
    "ADVERSARIAL_KINDS", "GaussianPosterior", "MODEL_KINDS", "MvaeConfig",
    "GRID_LATENT_DIMS", "TrainedMvae", "VARIATIONAL_KINDS", "critic_loss",
    "dumps_mvae", "encode_joint", "forward", "generator_term", "joint_mean",
    "joint_mopoe", "joint_poe", "load_mvae", "loads_mvae", "model_loss",
    "save_mvae", "train_mvae", "view_subsets",
]
