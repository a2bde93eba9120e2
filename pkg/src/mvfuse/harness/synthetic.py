"""Synthetic multi-view datasets with known structure."""

import numpy as np

from ..numcore import make_rng


def low_rank_views(seed=0, rows=400, dim=8, rank=3, n_views=2, noise=0.1):
    """Views that are noisy linear images of one shared Gaussian factor.

    Returns
    -------
    list of ndarray
        ``n_views`` matrices of shape ``(rows, dim)``.
    """
    rng = make_rng(seed, "low_rank")
    z = rng.standard_normal((rows, rank))
    return [z @ rng.standard_normal((rank, dim)) + noise * rng.standard_normal((rows, dim))
            for _ in range(n_views)]


def xor_views(seed=0, rows=1000, dim=8, noise=0.5):
    """Two views each carrying one latent bit; the label is their XOR.

    Each view is ``(2 b - 1) * u + noise`` for a fixed random unit direction
    ``u``, so either view alone is independent of the label.

    Returns
    -------
    views : list of two ndarray of shape (rows, dim)
    y : ndarray of int
    """
    rng = make_rng(seed, "xor")
    bits = rng.integers(0, 2, size=(rows, 2))
    views = []
    for j in range(2):
        u = rng.standard_normal(dim)
        u /= np.linalg.norm(u)
        sign = (2.0 * bits[:, j] - 1.0)[:, None]
        views.append(sign * u + noise * rng.standard_normal((rows, dim)))
    return views, bits[:, 0] ^ bits[:, 1]
