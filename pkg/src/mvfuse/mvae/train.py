"""Training loop and the frozen, encoder-only model used downstream."""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError, IntegrityError, NumericalError, TrainingError
from ..numcore import Adam, autodiff as ad, make_rng
from .config import ADVERSARIAL_KINDS, VARIATIONAL_KINDS, MvaeConfig
from .joint import GaussianPosterior, joint_mean, joint_mopoe, joint_poe
from .losses import critic_loss, forward, model_loss
from .networks import Critic, Decoder, Encoder, forward_values

STD_FLOOR = 1e-8


def _as_arrays(views):
    names, arrays = [], []
    for i, v in enumerate(views):
        if hasattr(v, "matrix"):
            names.append(v.name)
            arrays.append(np.asarray(v.matrix, dtype=np.float64))
        else:
            names.append(f"view{i}")
            arrays.append(ad.as_matrix(v))
    return names, arrays


def fit_normalization(x):
    """Per-feature mean and std; near-constant features keep unit scale."""
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std < STD_FLOOR, 1.0, std)
    return mean, std


@dataclass
class TrainedMvae:
    """Per-view encoders plus everything needed to encode new rows.

    Encoder parameters are held as float32 (the on-disk precision), so a
    saved and reloaded model encodes bit-identically.
    """

    kind: str
    view_names: list
    input_dims: list
    latent_dim: int
    hidden: int
    means: list
    stds: list
    encoder_params: list
    loss_history: list = field(default_factory=list)
    recon_history: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.encoder_params = [[np.asarray(p, dtype=np.float32) for p in ps]
                               for ps in self.encoder_params]
        self.means = [np.asarray(m, dtype=np.float64) for m in self.means]
        self.stds = [np.asarray(s, dtype=np.float64) for s in self.stds]
        if len(self.encoder_params) != len(self.view_names):
            raise IntegrityError("one encoder per view is required")

    @property
    def variational(self):
        return self.kind in VARIATIONAL_KINDS

    def _check(self, arrays, names):
        if len(arrays) != len(self.view_names):
            raise DimensionError(f"model expects {len(self.view_names)} views "
                                 f"{self.view_names}, got {len(arrays)}")
        rows = {a.shape[0] for a in arrays}
        if len(rows) > 1:
            raise IntegrityError(f"views have different row counts {sorted(rows)}")
        for name, a, d in zip(self.view_names, arrays, self.input_dims):
            if a.shape[1] != d:
                raise DimensionError(f"view {name!r}: expected {d} features, got {a.shape[1]}")

    def encode_views(self, views):
        """Per-view encoder outputs ``(mu, logvar or None)`` for raw view rows."""
        names, arrays = _as_arrays(views)
        self._check(arrays, names)
        out = []
        for a, m, s, ps in zip(arrays, self.means, self.stds, self.encoder_params):
            x = (a - m) / s
            out.append(forward_values([p.astype(np.float64) for p in ps], x, self.variational))
        return out

    def encode_joint(self, views):
        """Deterministic joint latent (posterior means for variational kinds)."""
        encoded = self.encode_views(views)
        if self.kind in ADVERSARIAL_KINDS or self.kind == "DVCCA":
            z = joint_mean([mu for mu, _ in encoded])
        else:
            posts = [GaussianPosterior(mu, lv) for mu, lv in encoded]
            if self.kind == "MoPoEVAE":
                z = joint_mopoe(posts)[1]
            else:
                z = joint_poe(posts, include_prior=True).mu
        return z.value

    def digest(self):
        from .io import dumps_mvae
        return hashlib.sha256(dumps_mvae(self)).hexdigest()


class _Nets:
    def __init__(self, cfg, rng):
        variational = cfg.variational
        self.encoders = [Encoder(rng, d, cfg.hidden, cfg.latent_dim, variational, f"enc{i}")
                         for i, d in enumerate(cfg.input_dims)]
        self.decoders = [Decoder(rng, cfg.latent_dim, cfg.hidden, d, f"dec{i}")
                         for i, d in enumerate(cfg.input_dims)]
        self.critic = (Critic(rng, cfg.latent_dim, cfg.disc_hidden)
                       if cfg.kind in ADVERSARIAL_KINDS else None)

    @property
    def ae_params(self):
        ps = []
        for e in self.encoders:
            ps += e.params
        for d in self.decoders:
            ps += d.params
        return ps


def _batches(n, batch, rng):
    order = rng.permutation(n)
    return [order[i:i + batch] for i in range(0, n, batch)]


def train_mvae(views, cfg):
    """Fit a multi-view autoencoder and return its encoders.

    Parameters
    ----------
    views : list of ViewMatrix or array
        Training rows of every view (same row count).
    cfg : MvaeConfig
        ``input_dims`` is filled from the data when left empty.

    Returns
    -------
    TrainedMvae
        ``loss_history`` and ``recon_history`` hold one row-weighted mean per
        epoch.
    """
    names, arrays = _as_arrays(views)
    if not arrays:
        raise IntegrityError("at least one view is required")
    rows = [a.shape[0] for a in arrays]
    if len(set(rows)) > 1:
        raise IntegrityError(f"views have different row counts: "
                             + ", ".join(f"{n}={r}" for n, r in zip(names, rows)))
    n = rows[0]
    if n < 1:
        raise IntegrityError("no training rows")
    bad = [nm for nm, a in zip(names, arrays) if not np.all(np.isfinite(a))]
    if bad:
        raise IntegrityError(f"non-finite values in view(s) {bad}")
    dims = [a.shape[1] for a in arrays]
    if cfg.input_dims and list(cfg.input_dims) != dims:
        bad = [nm for nm, d, e in zip(names, dims, cfg.input_dims) if d != e]
        raise DimensionError(f"view dimensions {dims} do not match config "
                             f"{list(cfg.input_dims)} (views {bad})")
    cfg = MvaeConfig(**{**cfg.to_dict(), "input_dims": dims})

    stats = [fit_normalization(a) for a in arrays]
    xs_all = [(a - m) / s for a, (m, s) in zip(arrays, stats)]

    nets = _Nets(cfg, make_rng(cfg.seed, "init"))
    shuffle_rng = make_rng(cfg.seed, "shuffle")
    noise_rng = make_rng(cfg.seed, "noise")
    prior_rng = make_rng(cfg.seed, "prior")
    ae_params = nets.ae_params
    opt = Adam(ae_params, lr=cfg.lr)
    opt_critic = Adam(nets.critic.params, lr=cfg.lr) if nets.critic is not None else None
    batch = min(cfg.batch_size, n)

    loss_hist, rec_hist = [], []
    for epoch in range(cfg.epochs):
        tot_sum = rec_sum = 0.0
        for b, idx in enumerate(_batches(n, batch, shuffle_rng)):
            xs = [ad.const(x[idx]) for x in xs_all]
            try:
                # overflow surfaces as NumericalError from the finiteness checks
                with np.errstate(over="ignore", invalid="ignore"):
                    if opt_critic is not None:
                        fake = joint_mean([e(x)[0] for e, x in zip(nets.encoders, xs)]).value
                        prior = prior_rng.standard_normal(fake.shape)
                        d_loss = critic_loss(cfg.kind, nets.critic, fake, prior, noise_rng, cfg)
                        opt_critic.step(ad.backward(d_loss, nets.critic.params), epoch, b)
                    products = forward(cfg.kind, nets, xs, noise_rng)
                    terms = model_loss(cfg.kind, xs, products, cfg)
                    opt.step(ad.backward(terms.total, ae_params), epoch, b)
            except NumericalError as exc:
                raise TrainingError(f"{cfg.kind}: {exc}", epoch=epoch, batch=b) from exc
            tot_sum += float(terms.total.value[0, 0]) * len(idx)
            rec_sum += float(terms.reconstruction.value[0, 0]) * len(idx)
        loss_hist.append(tot_sum / n)
        rec_hist.append(rec_sum / n)
        if not np.isfinite(loss_hist[-1]):
            raise TrainingError(f"{cfg.kind}: non-finite epoch loss", epoch=epoch)

    return TrainedMvae(
        kind=cfg.kind,
        view_names=names,
        input_dims=dims,
        latent_dim=cfg.latent_dim,
        hidden=cfg.hidden,
        means=[m for m, _ in stats],
        stds=[s for _, s in stats],
        encoder_params=[[p.value for p in e.params] for e in nets.encoders],
        loss_history=loss_hist,
        recon_history=rec_hist,
        config=cfg.to_dict(),
    )


def encode_joint(model, views):
    """Joint latent matrix for raw view rows (functional alias)."""
    return model.encode_joint(views)
