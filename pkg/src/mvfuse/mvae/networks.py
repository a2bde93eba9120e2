"""Small MLP building blocks on top of the graph engine."""

import numpy as np

from ..numcore import autodiff as ad


def glorot(rng, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class Dense:
    def __init__(self, rng, fan_in, fan_out, name):
        self.W = ad.param(glorot(rng, fan_in, fan_out), name=f"{name}.W")
        self.b = ad.param(np.zeros((1, fan_out)), name=f"{name}.b")

    @property
    def params(self):
        return [self.W, self.b]

    def __call__(self, x):
        return ad.add(ad.matmul(x, self.W), self.b)


class Encoder:
    """``input -> hidden (ReLU) -> latent``; variational encoders add a logvar head."""

    def __init__(self, rng, in_dim, hidden, latent, variational, name="enc"):
        self.hidden = Dense(rng, in_dim, hidden, f"{name}.h")
        self.mu = Dense(rng, hidden, latent, f"{name}.mu")
        self.logvar = Dense(rng, hidden, latent, f"{name}.lv") if variational else None

    @property
    def params(self):
        ps = self.hidden.params + self.mu.params
        if self.logvar is not None:
            ps += self.logvar.params
        return ps

    def __call__(self, x):
        h = ad.relu(self.hidden(x))
        return self.mu(h), (self.logvar(h) if self.logvar is not None else None)


class Decoder:
    def __init__(self, rng, latent, hidden, out_dim, name="dec"):
        self.hidden = Dense(rng, latent, hidden, f"{name}.h")
        self.out = Dense(rng, hidden, out_dim, f"{name}.out")

    @property
    def params(self):
        return self.hidden.params + self.out.params

    def __call__(self, z):
        return self.out(ad.relu(self.hidden(z)))


class Critic:
    """``latent -> hidden (ReLU) -> 1``. Returns raw scores (logits)."""

    def __init__(self, rng, latent, hidden, name="disc"):
        self.hidden = Dense(rng, latent, hidden, f"{name}.h")
        self.out = Dense(rng, hidden, 1, f"{name}.out")

    @property
    def params(self):
        return self.hidden.params + self.out.params

    def __call__(self, z):
        return self.out(ad.relu(self.hidden(z)))

    def input_gradient_norm(self, z):
        """Per-row ``||d score / d z||`` as a differentiable ``m x 1`` node.

        The ReLU mask is piecewise constant in the parameters, so it is held
        as a constant.
        """
        z = ad.const(z)
        mask = (z.value @ self.hidden.W.value + self.hidden.b.value) > 0
        gated = ad.mul(mask.astype(np.float64), ad.transpose(self.out.W))
        grad = ad.matmul(gated, ad.transpose(self.hidden.W))
        return ad.sqrt(ad.add(ad.row_sum(ad.square(grad)), 1e-12))


def rowwise_matmul(x, W):
    """``x @ W`` computed one row at a time.

    Blocked matrix products may round a row differently depending on how
    many rows share the call; a per-row product makes every output row a
    function of its input row alone.
    """
    out = np.empty((x.shape[0], W.shape[1]))
    for i in range(x.shape[0]):
        out[i] = x[i] @ W
    return out


def forward_values(layers_params, x, variational):
    """Numpy-only encoder pass from raw parameter arrays (no graph).

    Invariant to how rows are batched.
    """
    W1, b1, W2, b2 = layers_params[:4]
    pre = rowwise_matmul(x, W1) + b1
    h = np.where(pre > 0, pre, 0.0)
    mu = rowwise_matmul(h, W2) + b2
    if variational:
        W3, b3 = layers_params[4:6]
        return mu, rowwise_matmul(h, W3) + b3
    return mu, None
