"""Downstream classifiers on the joint latent, and their evaluation."""

from .base import CLASSIFIER_KINDS, ClassifierModel, softmax_rows
from .io import dumps_classifier, load_classifier, loads_classifier, save_classifier
from .linear import LinearSVM, LogisticRegression, MLPClassifier
from .metrics import Metrics, confusion_matrix, evaluate
from .neighbors import GaussianNaiveBayes, KNeighbors
from .trees import DecisionTree, ExtraTrees, RandomForest
from ..errors import ConfigError

CLASSES = {c.kind: c for c in (LogisticRegression, LinearSVM, RandomForest,
                               GaussianNaiveBayes, MLPClassifier, ExtraTrees, KNeighbors)}


def make_classifier(kind, hyper=None, seed=0):
    if kind not in CLASSES:
        raise ConfigError(f"unknown classifier kind {kind!r}; expected one of {list(CLASSIFIER_KINDS)}")
    return CLASSES[kind](seed=seed, **(hyper or {}))


def train_classifier(z, y, kind, hyper=None, seed=0):
    """Fit a classifier of ``kind`` on latent rows ``z`` with labels ``y``.

    Parameters
    ----------
    z : array of shape (n, d)
    y : array of shape (n,)
    kind : str
        One of ``CLASSIFIER_KINDS``.
    hyper : dict, optional
        Overrides of the kind's defaults.
    seed : int

    Returns
    -------
    ClassifierModel
    """
    return make_classifier(kind, hyper, seed).fit(z, y)


def predict(model, z):
    return model.predict(z)


def predict_proba(model, z):
    return model.predict_proba(z)


__all__ = [
    "CLASSES", "CLASSIFIER_KINDS", "ClassifierModel", "DecisionTree", "ExtraTrees",
    "GaussianNaiveBayes", "KNeighbors", "LinearSVM", "LogisticRegression",
    "MLPClassifier", "Metrics", "RandomForest", "confusion_matrix", "dumps_classifier",
    "evaluate", "load_classifier", "loads_classifier", "make_classifier", "predict",
    "predict_proba", "save_classifier", "softmax_rows", "train_classifier",
]
