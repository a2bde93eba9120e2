"""Gaussian helpers built from graph operations, so they are differentiable."""

from ..errors import DimensionError
from . import autodiff as ad
from .rng import make_rng


def _same_shape(a, b, what):
    if a.shape != b.shape:
        raise DimensionError(f"{what}: shapes {a.shape} and {b.shape} differ")


def gaussian_sample(mu, logvar, rng):
    """Reparameterised draw ``mu + exp(logvar / 2) * eps``.

    ``eps`` is drawn from ``rng`` (a seed or Generator) and held constant, so
    the result is differentiable with respect to ``mu`` and ``logvar``.
    """
    mu, logvar = ad.const(mu), ad.const(logvar)
    _same_shape(mu, logvar, "gaussian_sample")
    eps = make_rng(rng).standard_normal(mu.shape)
    return ad.add(mu, ad.mul(ad.exp(ad.scale(logvar, 0.5)), eps))


def kl_std_normal(mu, logvar):
    """``KL(N(mu, e^logvar) || N(0, I))`` summed over every entry (1x1 node)."""
    mu, logvar = ad.const(mu), ad.const(logvar)
    _same_shape(mu, logvar, "kl_std_normal")
    inner = ad.sub(ad.add(ad.square(mu), ad.exp(logvar)), ad.add(logvar, 1.0))
    return ad.scale(ad.sum(inner), 0.5)


def kl_diag(mu1, logvar1, mu2, logvar2):
    """``KL(q1 || q2)`` for diagonal Gaussians, summed over every entry."""
    mu1, logvar1 = ad.const(mu1), ad.const(logvar1)
    mu2, logvar2 = ad.const(mu2), ad.const(logvar2)
    for other in (logvar1, mu2, logvar2):
        _same_shape(mu1, other, "kl_diag")
    ratio = ad.exp(ad.sub(logvar1, logvar2))
    gap = ad.div(ad.square(ad.sub(mu1, mu2)), ad.exp(logvar2))
    inner = ad.sub(ad.add(ad.sub(logvar2, logvar1), ad.add(ratio, gap)), 1.0)
    return ad.scale(ad.sum(inner), 0.5)


def log_sigmoid_loss(logits):
    """Mean of ``-ln sigmoid(logits)``: the non-saturating GAN term."""
    return ad.mean(ad.softplus(ad.scale(logits, -1.0)))


def std_normal_like(shape, rng):
    return make_rng(rng).standard_normal(shape)

