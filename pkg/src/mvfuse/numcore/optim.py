import numpy as np

from ..errors import DimensionError, TrainingError


class Adam:
    """Adam with bias correction, updating parameter nodes in place.

    Parameters
    ----------
    params : list of Node
        Parameter nodes; their ``value`` arrays are replaced on each step.
    lr, beta1, beta2, eps : float
        Usual Adam hyperparameters.
    weight_decay : float
        L2 coefficient added to each gradient (coupled decay).
    """

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8,
                 weight_decay=0.0):
        self.params = list(params)
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.weight_decay = weight_decay
        self.step_count = 0
        self.m = [np.zeros_like(p.value) for p in self.params]
        self.v = [np.zeros_like(p.value) for p in self.params]

    def step(self, grads, epoch=None, batch=None):
        """Apply one update. ``grads`` maps parameter nodes to arrays."""
        arrays = []
        for p in self.params:
            g = grads[p]
            if g.shape != p.value.shape:
                raise DimensionError(
                    f"gradient shape {g.shape} does not match parameter {p.value.shape}")
            if not np.all(np.isfinite(g)):
                raise TrainingError("non-finite gradient", epoch=epoch, batch=batch)
            arrays.append(g)
        self.step_count += 1
        t = self.step_count
        c1 = 1.0 - self.beta1 ** t
        c2 = 1.0 - self.beta2 ** t
        for i, (p, g) in enumerate(zip(self.params, arrays)):
            if self.weight_decay:
                g = g + self.weight_decay * p.value
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g
            m_hat = self.m[i] / c1
            v_hat = self.v[i] / c2
            p.value = p.value - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def adam_step(params, grads, state, epoch=None, batch=None):
    """Functional wrapper: one Adam update on ``state`` (an :class:`Adam`)."""
    if list(params) != state.params:
        raise DimensionError("parameter list does not match optimizer state")
    state.step(grads, epoch=epoch, batch=batch)
    return state.params
