"""Loaders for the benchmark corpora and for user CSV files.

Every loader returns texts in file order and labels as dense integers.
When a dataset ships its own train/test files the split is returned too.
"""

import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigError, IntegrityError, MappingError, SchemaError

DATASET_NAMES = ("fakes", "liar2", "liar6", "isot", "custom")

# published sample counts of the three benchmark corpora
DATASET_SIZES = {"fakes": 804, "liar": 12791, "isot": 44896}

LIAR_LABELS = ("pants-fire", "false", "barely-true", "half-true", "mostly-true", "true")
LIAR_BINARY = {"pants-fire": "fake", "false": "fake", "barely-true": "fake",
               "half-true": "real", "mostly-true": "real", "true": "real"}
LIAR_FILES = ("train.tsv", "valid.tsv", "test.tsv")
LIAR_LABEL_COL = 1
LIAR_TEXT_COL = 2
ISOT_FILES = {"real": "True.csv", "fake": "Fake.csv"}

csv.field_size_limit(min(sys.maxsize, 2 ** 31 - 1))


@dataclass
class DatasetSpec:
    """Where a corpus lives and how to read it.

    Parameters
    ----------
    name : {"fakes", "liar2", "liar6", "isot", "custom"}
    path : str
        A CSV file (fakes, custom) or a directory holding the dataset's
        files (``train.tsv``/``valid.tsv``/``test.tsv`` for LIAR,
        ``True.csv``/``Fake.csv`` for ISOT).
    text_column, label_column : str, optional
        Column names; defaults depend on ``name``.
    label_mapping : dict, optional
        Raw label value -> class name. Unmapped values are an error.
    predefined_split : bool, optional
        Use the dataset's own train/test files (LIAR only).
    """

    name: str
    path: str
    text_column: str = None
    label_column: str = None
    label_mapping: dict = None
    predefined_split: bool = None

    def __post_init__(self):
        if self.name not in DATASET_NAMES:
            raise ConfigError(f"unknown dataset {self.name!r}; expected one of {DATASET_NAMES}")
        defaults = {
            "fakes": ("article_content", "labels"),
            "isot": ("text", None),
            "custom": ("text", "label"),
            "liar2": (None, None),
            "liar6": (None, None),
        }[self.name]
        self.text_column = self.text_column or defaults[0]
        self.label_column = self.label_column or defaults[1]
        if self.predefined_split is None:
            self.predefined_split = self.name in ("liar2", "liar6")
        if self.label_mapping is None and self.name == "liar2":
            self.label_mapping = dict(LIAR_BINARY)
        if self.label_mapping is not None:
            self.label_mapping = {str(k): str(v) for k, v in self.label_mapping.items()}


@dataclass
class Dataset:
    """Texts with dense labels ``0..k-1`` indexing ``label_names``."""

    name: str
    texts: list
    labels: np.ndarray
    label_names: list
    split: tuple = None
    label_mapping: dict = None

    def __len__(self):
        return len(self.texts)


def _read_csv(path, text_column, label_column):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"dataset file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        wanted = [c for c in (text_column, label_column) if c is not None]
        missing = [c for c in wanted if c not in header]
        if missing:
            raise SchemaError(f"{path.name}: missing column(s) {missing}; found {header}")
        texts, labels = [], []
        for row in reader:
            texts.append(row[text_column] or "")
            if label_column is not None:
                labels.append((row[label_column] or "").strip())
    return texts, labels


def _read_liar(path):
    texts, labels = [], []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
            if not row:
                continue
            if len(row) <= LIAR_TEXT_COL:
                raise SchemaError(f"{Path(path).name} line {lineno}: expected 14 tab-separated "
                                  f"columns, found {len(row)}")
            labels.append(row[LIAR_LABEL_COL].strip())
            texts.append(row[LIAR_TEXT_COL])
    return texts, labels


def encode_labels(raw, mapping=None, order=None):
    """Map raw label strings to dense integers.

    Class names are ``mapping`` images when a mapping is given. The class
    order is ``order`` when given, otherwise sorted.
    """
    raw = [str(r) for r in raw]
    if mapping is not None:
        unmapped = sorted({r for r in raw if r not in mapping})
        if unmapped:
            raise MappingError(f"label value(s) with no mapping: {unmapped}")
        named = [mapping[r] for r in raw]
    else:
        named = raw
    if order is None:
        order = sorted(set(named))
    else:
        unknown = sorted(set(named) - set(order))
        if unknown:
            raise MappingError(f"unexpected label value(s): {unknown}")
        order = list(order)
    index = {n: i for i, n in enumerate(order)}
    return np.array([index[n] for n in named], dtype=np.int64), list(order)


def load_dataset(spec, base_dir=None):
    """Read a corpus described by ``spec``.

    Returns
    -------
    Dataset
        ``split`` is ``(train_idx, test_idx)`` for datasets with predefined
        files (LIAR: train and validation files form the training part),
        else ``None``.
    """
    path = Path(spec.path)
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    split = None

    if spec.name in ("liar2", "liar6"):
        parts = []
        for fname in LIAR_FILES:
            f = path / fname
            if not f.is_file():
                raise ConfigError(f"LIAR file not found: {f}")
            parts.append(_read_liar(f))
        texts = [t for p in parts for t in p[0]]
        raw = [l for p in parts for l in p[1]]
        n_train = len(parts[0][0]) + len(parts[1][0])
        if spec.predefined_split:
            split = (np.arange(n_train), np.arange(n_train, len(texts)))
        if spec.name == "liar6":
            labels, names = encode_labels(raw, spec.label_mapping,
                                          None if spec.label_mapping else LIAR_LABELS)
        else:
            labels, names = encode_labels(raw, spec.label_mapping,
                                          ["fake", "real"] if spec.label_mapping == LIAR_BINARY
                                          else None)
    elif spec.name == "isot":
        texts, raw = [], []
        for cls in ("real", "fake"):
            f = path / ISOT_FILES[cls]
            t, _ = _read_csv(f, spec.text_column, None)
            texts += t
            raw += [cls] * len(t)
        labels, names = encode_labels(raw, spec.label_mapping, None if spec.label_mapping
                                      else ["fake", "real"])
    else:
        texts, raw = _read_csv(path, spec.text_column, spec.label_column)
        labels, names = encode_labels(raw, spec.label_mapping)

    if not texts:
        raise IntegrityError(f"dataset {spec.name!r} at {path} has no rows")
    return Dataset(spec.name, texts, labels, names, split, spec.label_mapping)
