"""Experiment records and their CSV form."""

import csv
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from ..errors import IntegrityError

REPORT_COLUMNS = ("dataset", "ae_model", "latent_dim", "classifier", "views", "seed",
                  "accuracy", "f1_macro", "train_time_s", "status", "error")
EXTRA_COLUMNS = ("experiment", "f1_average", "stratified", "label_mapping", "loss_digest",
                 "model_digest", "better_than_all")
VIEW_SEP = "+"


@dataclass
class ExperimentRecord:
    """One grid cell's outcome.

    ``status`` is ``"ok"`` or ``"failed"``; failed records carry the error
    text and NaN metrics. ``better_than_all`` is only set by the view
    combination study.
    """

    dataset: str
    ae_model: str
    latent_dim: int
    classifier: str
    views: tuple
    seed: int
    accuracy: float = math.nan
    f1_macro: float = math.nan
    train_time_s: float = 0.0
    status: str = "ok"
    error: str = ""
    experiment: str = "sweep"
    f1_average: str = "macro"
    stratified: bool = True
    label_mapping: str = ""
    loss_digest: str = ""
    model_digest: str = ""
    better_than_all: bool = None

    def __post_init__(self):
        self.views = tuple(self.views)
        if not self.views:
            raise IntegrityError("a record needs at least one view")

    @property
    def ok(self):
        return self.status == "ok"

    def key(self):
        """Grid coordinates plus metrics; everything except timing."""
        d = asdict(self)
        d.pop("train_time_s")
        return d

    def to_row(self):
        d = asdict(self)
        d["views"] = VIEW_SEP.join(self.views)
        d["better_than_all"] = "" if self.better_than_all is None else str(self.better_than_all)
        d["stratified"] = str(self.stratified)
        for k in ("accuracy", "f1_macro", "train_time_s"):
            d[k] = "" if math.isnan(d[k]) else repr(float(d[k]))
        return d

    @classmethod
    def from_row(cls, row):
        kw = {}
        for f in fields(cls):
            if f.name not in row:
                continue
            v = row[f.name]
            if f.name in ("latent_dim", "seed"):
                v = int(v)
            elif f.name in ("accuracy", "f1_macro", "train_time_s"):
                v = math.nan if v == "" else float(v)
            elif f.name == "views":
                v = tuple(v.split(VIEW_SEP)) if v else ()
            elif f.name in ("stratified", "better_than_all"):
                v = None if v == "" else v == "True"
            kw[f.name] = v
        return cls(**kw)


def write_records(records, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS + EXTRA_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow(r.to_row())
    return path


def read_records(path):
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        missing = [c for c in REPORT_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise IntegrityError(f"{path.name}: not a record file (missing {missing})")
        return [ExperimentRecord.from_row(row) for row in reader]
