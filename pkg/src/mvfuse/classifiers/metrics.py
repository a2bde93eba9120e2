from dataclasses import dataclass

import numpy as np

from ..errors import ContractError


@dataclass(frozen=True)
class Metrics:
    """Accuracy, macro F1 and the per-class view behind them.

    ``confusion[i, j]`` counts rows of true class ``labels[i]`` predicted as
    ``labels[j]``.
    """

    labels: tuple
    accuracy: float
    f1_macro: float
    precision: tuple
    recall: tuple
    f1: tuple
    confusion: np.ndarray

    def to_dict(self):
        return {
            "labels": [_plain(l) for l in self.labels],
            "accuracy": self.accuracy,
            "f1_macro": self.f1_macro,
            "precision": list(self.precision),
            "recall": list(self.recall),
            "f1": list(self.f1),
            "confusion": self.confusion.tolist(),
        }


def _plain(v):
    return v.item() if hasattr(v, "item") else v


def confusion_matrix(y_true, y_pred, labels):
    index = {_plain(l): i for i, l in enumerate(labels)}
    cm = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        t, p = _plain(t), _plain(p)
        if t not in index or p not in index:
            raise ContractError(f"label {t if t not in index else p!r} not in label set")
        cm[index[t], index[p]] += 1
    return cm


def evaluate(y_true, y_pred, labels=None):
    """Score predictions against ground truth.

    Parameters
    ----------
    y_true, y_pred : sequence
        Equal-length label sequences.
    labels : sequence, optional
        Label set; defaults to the sorted union of both inputs.

    Returns
    -------
    Metrics
        Classes with no true and no predicted rows get precision, recall
        and F1 of 0.

    Examples
    --------
    >>> m = evaluate([0, 0, 1, 1], [0, 1, 1, 1])
    >>> m.accuracy, round(m.f1_macro, 4)
    (0.75, 0.7333)
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape[0] == 0:
        raise ContractError("cannot evaluate empty predictions")
    if y_true.shape != y_pred.shape:
        raise ContractError(f"{len(y_true)} true labels but {len(y_pred)} predictions")
    if labels is None:
        labels = np.unique(np.concatenate([y_true, y_pred]))
    labels = tuple(_plain(l) for l in labels)
    cm = confusion_matrix(y_true, y_pred, labels)
    tp = np.diag(cm).astype(np.float64)
    pred_tot = cm.sum(axis=0)
    true_tot = cm.sum(axis=1)
    precision = np.divide(tp, pred_tot, out=np.zeros_like(tp), where=pred_tot > 0)
    recall = np.divide(tp, true_tot, out=np.zeros_like(tp), where=true_tot > 0)
    denom = precision + recall
    f1 = np.divide(2 * precision * recall, denom, out=np.zeros_like(tp), where=denom > 0)
    return Metrics(
        labels=labels,
        accuracy=float(tp.sum() / cm.sum()),
        f1_macro=float(f1.mean()),
        precision=tuple(float(v) for v in precision),
        recall=tuple(float(v) for v in recall),
        f1=tuple(float(v) for v in f1),
        confusion=cm,
    )
