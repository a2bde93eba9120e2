from dataclasses import asdict, dataclass, field

from ..errors import ConfigError

# Order is part of the model file format (kind byte = index).
MODEL_KINDS = ("jointAAE", "wAAE", "mVAE", "me_mVAE", "DVCCA", "MoPoEVAE", "mvtCAE")
ADVERSARIAL_KINDS = frozenset({"jointAAE", "wAAE"})
VARIATIONAL_KINDS = frozenset(MODEL_KINDS) - ADVERSARIAL_KINDS

GRID_LATENT_DIMS = (7, 21, 70, 350, 700, 3500)


@dataclass
class MvaeConfig:
    """Hyperparameters of one multi-view autoencoder.

    ``gamma`` weights the adversarial term, ``beta`` the KL terms and
    ``gp_weight`` the critic gradient penalty (``wAAE`` only).
    """

    kind: str = "jointAAE"
    latent_dim: int = 70
    input_dims: list = field(default_factory=list)
    hidden: int = 256
    disc_hidden: int = 64
    epochs: int = 200
    batch_size: int = 64
    lr: float = 1e-3
    seed: int = 0
    gamma: float = 1.0
    beta: float = 1.0
    gp_weight: float = 10.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")
        if self.latent_dim < 1:
            raise ConfigError("latent_dim must be >= 1")
        if self.epochs < 0:
            raise ConfigError("epochs must be >= 0")
        if self.batch_size < 1 or self.hidden < 1 or self.disc_hidden < 1:
            raise ConfigError("batch_size and hidden widths must be >= 1")
        if any(int(d) < 1 for d in self.input_dims):
            raise ConfigError("every view needs at least one feature")
        self.input_dims = [int(d) for d in self.input_dims]

    @property
    def variational(self):
        return self.kind in VARIATIONAL_KINDS

    def to_dict(self):
        return asdict(self)
