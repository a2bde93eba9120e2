"""Gradient-trained classifiers: softmax regression, linear SVM, one-layer MLP.

Learned weights are rounded to float32 once training ends (the on-disk
precision); scoring upcasts to float64.
"""

import numpy as np

from ..numcore import Adam, autodiff as ad
from ..mvae.networks import glorot
from .base import ClassifierModel, softmax_rows


def _f32(arrays):
    return [np.asarray(a, dtype=np.float32) for a in arrays]


def cross_entropy(logits, onehot):
    """Mean softmax cross-entropy as a graph node."""
    shift = ad.row_broadcast(ad.const(logits.value.max(axis=1, keepdims=True)),
                             logits.shape[1])
    s = ad.sub(logits, shift)
    lse = ad.log(ad.row_sum(ad.exp(s)))
    picked = ad.row_sum(ad.mul(s, onehot))
    return ad.mean(ad.sub(lse, picked))


def _l2(params, weight):
    reg = ad.sum(ad.square(params[0]))
    for p in params[1:]:
        reg = ad.add(reg, ad.sum(ad.square(p)))
    return ad.scale(reg, 0.5 * weight)


class LogisticRegression(ClassifierModel):
    """Multinomial softmax regression, full-batch Adam with L2 decay."""

    kind = "logreg"
    defaults = {"epochs": 300, "lr": 0.01, "weight_decay": 1e-4}

    def _fit(self, X, y_idx, rng):
        k = self.n_classes
        W = ad.param(np.zeros((X.shape[1], k)))
        b = ad.param(np.zeros((1, k)))
        onehot = np.eye(k)[y_idx]
        x = ad.const(X)
        opt = Adam([W, b], lr=self.hyper["lr"])
        for epoch in range(self.hyper["epochs"]):
            loss = ad.add(cross_entropy(ad.add(ad.matmul(x, W), b), onehot),
                          _l2([W], self.hyper["weight_decay"]))
            opt.step(ad.backward(loss, [W, b]), epoch=epoch)
        self.W, self.b = _f32([W.value, b.value])

    def _proba(self, X):
        return softmax_rows(X @ self.W.astype(np.float64) + self.b.astype(np.float64))

    def state(self):
        return {}, [("W", self.W), ("b", self.b)]

    def load_state(self, meta, arrays):
        self.W, self.b = _f32([arrays["W"], arrays["b"]])


class LinearSVM(ClassifierModel):
    """One-vs-rest linear SVM: hinge loss, per-sample SGD, ``lr / (1 + epoch)``.

    Probabilities are a softmax over the per-class margins.
    """

    kind = "svm"
    defaults = {"epochs": 200, "lr": 1e-2, "alpha": 1e-4}

    def _fit(self, X, y_idx, rng):
        n, d = X.shape
        k = self.n_classes
        W = np.zeros((d, k))
        b = np.zeros(k)
        signs = np.where(np.eye(k)[y_idx] > 0, 1.0, -1.0)
        alpha = self.hyper["alpha"]
        for epoch in range(self.hyper["epochs"]):
            lr = self.hyper["lr"] / (1.0 + epoch)
            for i in rng.permutation(n):
                margin = signs[i] * (X[i] @ W + b)
                active = (margin < 1.0) * signs[i]
                W *= 1.0 - lr * alpha
                W += lr * np.outer(X[i], active)
                b += lr * active
        self.W, self.b = _f32([W, b.reshape(1, -1)])

    def decision_function(self, X):
        X = self._check_X(X)
        return X @ self.W.astype(np.float64) + self.b.astype(np.float64)

    def _proba(self, X):
        return softmax_rows(X @ self.W.astype(np.float64) + self.b.astype(np.float64))

    def state(self):
        return {}, [("W", self.W), ("b", self.b)]

    def load_state(self, meta, arrays):
        self.W, self.b = _f32([arrays["W"], arrays["b"]])


class MLPClassifier(ClassifierModel):
    """One hidden ReLU layer and a softmax output, trained with minibatch Adam."""

    kind = "mlp"
    defaults = {"hidden": 100, "epochs": 200, "lr": 1e-3, "batch_size": 200,
                "weight_decay": 1e-4}

    def _fit(self, X, y_idx, rng):
        n, d = X.shape
        k, h = self.n_classes, self.hyper["hidden"]
        W1 = ad.param(glorot(rng, d, h))
        b1 = ad.param(np.zeros((1, h)))
        W2 = ad.param(glorot(rng, h, k))
        b2 = ad.param(np.zeros((1, k)))
        params = [W1, b1, W2, b2]
        onehot = np.eye(k)[y_idx]
        opt = Adam(params, lr=self.hyper["lr"])
        batch = min(self.hyper["batch_size"], n)
        decay = self.hyper["weight_decay"]
        for epoch in range(self.hyper["epochs"]):
            order = rng.permutation(n)
            for bi, start in enumerate(range(0, n, batch)):
                idx = order[start:start + batch]
                hid = ad.relu(ad.add(ad.matmul(ad.const(X[idx]), W1), b1))
                logits = ad.add(ad.matmul(hid, W2), b2)
                loss = ad.add(cross_entropy(logits, onehot[idx]),
                              ad.scale(_l2([W1, W2], decay), len(idx) / n))
                opt.step(ad.backward(loss, params), epoch=epoch, batch=bi)
        self.W1, self.b1, self.W2, self.b2 = _f32([p.value for p in params])

    def _proba(self, X):
        W1, b1, W2, b2 = (a.astype(np.float64) for a in (self.W1, self.b1, self.W2, self.b2))
        pre = X @ W1 + b1
        return softmax_rows(np.where(pre > 0, pre, 0.0) @ W2 + b2)

    def state(self):
        return {}, [("W1", self.W1), ("b1", self.b1), ("W2", self.W2), ("b2", self.b2)]

    def load_state(self, meta, arrays):
        self.W1, self.b1, self.W2, self.b2 = _f32([arrays[k] for k in ("W1", "b1", "W2", "b2")])
