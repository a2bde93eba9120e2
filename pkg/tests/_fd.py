"""Central finite differences, independent of the reverse pass."""

import numpy as np


def numeric_grad(f, p, h=1e-5):
    """d f() / d p.value by central differences; ``f`` returns a float."""
    g = np.zeros_like(p.value)
    base = p.value
    for idx in np.ndindex(base.shape):
        plus = base.copy()
        plus[idx] += h
        p.value = plus
        fp = f()
        minus = base.copy()
        minus[idx] -= h
        p.value = minus
        fm = f()
        g[idx] = (fp - fm) / (2 * h)
    p.value = base
    return g


def rel_error(a, b):
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1e-6)
    return float(np.linalg.norm(a - b) / scale)
