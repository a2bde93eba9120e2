"""Gradients and joint functions, by hand.

Builds a small loss with the reverse-mode engine, compares its gradient
with central finite differences, then fuses two Gaussian experts the way
the variational autoencoders do.
"""

import numpy as np

from mvfuse.mvae import GaussianPosterior, joint_mean, joint_poe, view_subsets
from mvfuse.numcore import autodiff as ad, backward, kl_std_normal, param

# A two-layer expression: loss = sum(tanh(X W)^2).
rng = np.random.default_rng(0)
X = rng.normal(size=(5, 3))
W = param(rng.normal(size=(3, 2)), name="W")


def loss():
    return ad.sum(ad.square(ad.tanh(ad.matmul(X, W))))


grad = backward(loss(), [W])[W]

# Central differences, one entry at a time.
h = 1e-5
num = np.zeros_like(W.value)
base = W.value.copy()
for idx in np.ndindex(base.shape):
    for sign in (1, -1):
        W.value = base.copy()
        W.value[idx] += sign * h
        num[idx] += sign * float(loss().value[0, 0]) / (2 * h)
W.value = base
print("reverse-mode gradient:\n", grad)
print("relative error vs finite differences:",
      np.linalg.norm(grad - num) / np.linalg.norm(num))

# Adversarial kinds fuse per-view codes by their mean.
za, zb = np.array([[1.0, 3.0]]), np.array([[3.0, 5.0]])
print("joint mean:", joint_mean([za, zb]).value)

# Variational kinds multiply Gaussian experts: precisions add.
a = GaussianPosterior(np.array([[0.0]]), np.array([[0.0]]))
b = GaussianPosterior(np.array([[2.0]]), np.array([[0.0]]))
fused = joint_poe([a, b], include_prior=True)
print("PoE with prior: mean %.6f, variance %.6f"
      % (fused.mu.value[0, 0], np.exp(fused.logvar.value[0, 0])))

# The mixture form averages over every non-empty subset of experts.
print("subsets of 3 views:", view_subsets(3))

# KL of a single unit-variance Gaussian shifted by one.
print("KL(N(1, 1) || N(0, 1)) =", kl_std_normal([[1.0]], [[0.0]]).value[0, 0])
