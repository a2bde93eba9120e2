"""Joint functions: how per-view encoder outputs become one latent code."""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..errors import ContractError, DimensionError
from ..numcore import autodiff as ad


@dataclass
class GaussianPosterior:
    """Diagonal Gaussian given by graph nodes ``mu`` and ``logvar``."""

    mu: ad.Node
    logvar: ad.Node

    def __post_init__(self):
        self.mu, self.logvar = ad.const(self.mu), ad.const(self.logvar)
        if self.mu.shape != self.logvar.shape:
            raise DimensionError(f"posterior shapes differ: {self.mu.shape} vs {self.logvar.shape}")

    @property
    def shape(self):
        return self.mu.shape


def _check_shapes(shapes, what):
    if len(set(shapes)) > 1:
        raise DimensionError(f"{what}: inputs have different shapes {sorted(set(shapes))}")


def joint_mean(latents):
    """Elementwise mean of per-view latent matrices."""
    if not latents:
        raise ContractError("joint_mean needs at least one latent matrix")
    nodes = [ad.const(z) for z in latents]
    _check_shapes([n.shape for n in nodes], "joint_mean")
    if len(nodes) == 1:
        return nodes[0]
    # first + mean offset from first: exact when all inputs are equal
    base = nodes[0]
    offset = ad.sub(nodes[1], base)
    for n in nodes[2:]:
        offset = ad.add(offset, ad.sub(n, base))
    return ad.add(base, ad.scale(offset, 1.0 / len(nodes)))


def joint_poe(posteriors, include_prior=True, shape=None):
    """Product of Gaussian experts in closed form.

    Precision is the sum of expert precisions (plus one for the standard
    normal prior); the mean is the precision-weighted average of expert means.
    ``shape`` is only needed when ``posteriors`` is empty.
    """
    posteriors = list(posteriors)
    if not posteriors:
        if not include_prior:
            raise ContractError("joint_poe needs an expert or the prior")
        if shape is None:
            raise ContractError("shape is required for a prior-only product")
        return GaussianPosterior(np.zeros(shape), np.zeros(shape))
    _check_shapes([p.shape for p in posteriors], "joint_poe")
    if len(posteriors) == 1 and not include_prior:
        return posteriors[0]

    precisions = [ad.exp(ad.scale(p.logvar, -1.0)) for p in posteriors]
    weighted = [ad.mul(p.mu, w) for p, w in zip(posteriors, precisions)]
    precision, num = precisions[0], weighted[0]
    for w, m in zip(precisions[1:], weighted[1:]):
        precision, num = ad.add(precision, w), ad.add(num, m)
    if include_prior:
        precision = ad.add(precision, 1.0)
    return GaussianPosterior(ad.div(num, precision), ad.scale(ad.log(precision), -1.0))


def view_subsets(n):
    """All non-empty subsets of ``range(n)``, by size then lexicographically."""
    if n < 1:
        raise ContractError("at least one view is required")
    return [s for k in range(1, n + 1) for s in combinations(range(n), k)]


def joint_mopoe(posteriors):
    """Mixture of products of experts over every non-empty view subset.

    Returns
    -------
    subsets : list of (tuple, GaussianPosterior)
        One prior-including product per subset (uniform mixture weights).
    joint : Node
        Deterministic representation: mean of the subset means.
    """
    posteriors = list(posteriors)
    subsets = [(s, joint_poe([posteriors[i] for i in s], include_prior=True))
               for s in view_subsets(len(posteriors))]
    return subsets, joint_mean([post.mu for _, post in subsets])
