"""Classifier file: magic ``MVCL``, u16 version, kind byte, JSON metadata
(label list, hyperparameters, seed) and the learned parameter blocks."""

from pathlib import Path

import numpy as np

from .. import _binio
from ..errors import FormatError
from .base import CLASSIFIER_KINDS

MAGIC = b"MVCL"
VERSION = 1


def _plain(v):
    return v.item() if hasattr(v, "item") else v


def dumps_classifier(model):
    if model.classes_ is None:
        raise FormatError("cannot serialise an untrained classifier")
    extra, arrays = ({}, []) if model.constant else model.state()
    meta = {
        "classes": [_plain(c) for c in model.classes_],
        "n_features": int(model.n_features),
        "hyper": model.hyper,
        "seed": model.seed,
        "constant": model.constant,
        "state": extra,
    }
    return _binio.pack(MAGIC, VERSION, CLASSIFIER_KINDS.index(model.kind), meta, arrays)


def loads_classifier(data):
    from . import CLASSES

    _, kind, meta, blocks = _binio.unpack(data, MAGIC, {VERSION})
    if kind >= len(CLASSIFIER_KINDS):
        raise FormatError(f"classifier kind byte {kind} out of range")
    cls = CLASSES[CLASSIFIER_KINDS[kind]]
    try:
        model = cls(seed=meta["seed"], **meta["hyper"])
        model.classes_ = np.asarray(meta["classes"])
        model.n_features = int(meta["n_features"])
        model.constant = bool(meta["constant"])
        if not model.constant:
            model.load_state(meta["state"], blocks)
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise FormatError(f"incomplete classifier file: {exc}") from None
    return model


def save_classifier(model, path):
    Path(path).write_bytes(dumps_classifier(model))


def load_classifier(path):
    return loads_classifier(Path(path).read_bytes())
