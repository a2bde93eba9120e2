import numpy as np

from .base import ClassifierModel

_CHUNK = 512


class KNeighbors(ClassifierModel):
    """Majority vote of the ``k`` nearest training rows (Euclidean).

    Equal distances resolve to the lower training-row index; tied votes to
    the smaller class label. Probabilities are vote fractions.
    """

    kind = "knn"
    defaults = {"k": 5}

    def _fit(self, X, y_idx, rng):
        self.X_ = X.copy()
        self.y_ = y_idx.astype(np.int32)

    def kneighbors(self, X):
        X = self._check_X(X)
        k = min(self.hyper["k"], len(self.X_))
        out = np.empty((X.shape[0], k), dtype=np.int64)
        for start in range(0, X.shape[0], _CHUNK):
            q = X[start:start + _CHUNK]
            d2 = ((q[:, None, :] - self.X_[None, :, :]) ** 2).sum(axis=2)
            out[start:start + len(q)] = np.argsort(d2, axis=1, kind="stable")[:, :k]
        return out

    def _proba(self, X):
        nbrs = self.kneighbors(X)
        votes = np.zeros((X.shape[0], self.n_classes))
        labels = self.y_[nbrs]
        for j in range(labels.shape[1]):
            np.add.at(votes, (np.arange(len(labels)), labels[:, j]), 1.0)
        return votes / labels.shape[1]

    def state(self):
        return {}, [("X", self.X_), ("y", self.y_)]

    def load_state(self, meta, arrays):
        self.X_ = np.asarray(arrays["X"], dtype=np.float64)
        self.y_ = np.asarray(arrays["y"], dtype=np.int32)


class GaussianNaiveBayes(ClassifierModel):
    """Gaussian class-conditionals; variances smoothed by ``1e-9 * max variance``."""

    kind = "naive_bayes"
    defaults = {"var_smoothing": 1e-9}

    def _fit(self, X, y_idx, rng):
        k = self.n_classes
        eps = self.hyper["var_smoothing"] * X.var(axis=0).max()
        self.means_ = np.stack([X[y_idx == c].mean(axis=0) for c in range(k)])
        self.vars_ = np.stack([X[y_idx == c].var(axis=0) for c in range(k)]) + eps
        self.log_prior_ = np.log(np.bincount(y_idx, minlength=k) / len(y_idx))

    def joint_log_likelihood(self, X):
        ll = []
        for c in range(self.n_classes):
            v = self.vars_[c]
            ll.append(self.log_prior_[c] - 0.5 * np.sum(np.log(2.0 * np.pi * v))
                      - 0.5 * np.sum((X - self.means_[c]) ** 2 / v, axis=1))
        return np.stack(ll, axis=1)

    def _proba(self, X):
        jll = self.joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)

    def state(self):
        return {}, [("means", self.means_), ("vars", self.vars_), ("log_prior", self.log_prior_)]

    def load_state(self, meta, arrays):
        self.means_ = np.asarray(arrays["means"], dtype=np.float64)
        self.vars_ = np.asarray(arrays["vars"], dtype=np.float64)
        self.log_prior_ = np.asarray(arrays["log_prior"], dtype=np.float64)
