import numpy as np

from ..errors import ConfigError, ContractError, DimensionError, IntegrityError

CLASSIFIER_KINDS = ("logreg", "svm", "random_forest", "naive_bayes", "mlp",
                    "extra_trees", "knn")


def softmax_rows(scores):
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class ClassifierModel:
    """Common surface of every classifier kind.

    Subclasses implement ``_fit(X, y_idx, rng)`` on dense float64 features
    and integer class indices, ``_proba(X)``, and the ``state``/``from_state``
    pair used for serialisation. ``predict`` is always the argmax of
    ``predict_proba`` (ties resolve to the smaller label).
    """

    kind = None
    defaults = {}

    def __init__(self, seed=0, **hyper):
        unknown = set(hyper) - set(self.defaults)
        if unknown:
            raise ConfigError(f"{self.kind}: unknown hyperparameters {sorted(unknown)}")
        self.hyper = {**self.defaults, **hyper}
        self.seed = int(seed)
        self.classes_ = None
        self.n_features = None
        self.constant = False

    def fit(self, X, y):
        from ..numcore import make_rng

        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] == 0:
            raise ContractError("training data must be a non-empty 2-D matrix")
        if X.shape[0] != y.shape[0]:
            raise ContractError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        if not np.all(np.isfinite(X)):
            raise IntegrityError("training features contain NaN or infinite values")
        self.classes_ = np.unique(y)
        self.n_features = X.shape[1]
        if len(self.classes_) == 1:
            self.constant = True
            return self
        y_idx = np.searchsorted(self.classes_, y)
        self._fit(X, y_idx, make_rng(self.seed, self.kind))
        return self

    @property
    def n_classes(self):
        return len(self.classes_)

    def _check_X(self, X):
        if self.classes_ is None:
            raise ContractError("classifier is not trained")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features:
            raise DimensionError(f"{self.kind}: expected {self.n_features} features, "
                                 f"got {X.shape[1]}")
        return X

    def predict_proba(self, X):
        X = self._check_X(X)
        if self.constant:
            return np.ones((X.shape[0], 1))
        return self._proba(X)

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]

    def score(self, X, y):
        return float(np.mean(self.predict(X) == np.asarray(y)))

    # subclasses override
    def _fit(self, X, y_idx, rng):
        raise NotImplementedError

    def _proba(self, X):
        raise NotImplementedError

    def state(self):
        """(json-able meta, list of (name, array)) describing learned parameters."""
        return {}, []

    def load_state(self, meta, arrays):
        pass
