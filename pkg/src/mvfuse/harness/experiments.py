"""Sweep, baseline and view-combination experiments.

The unit of work is one autoencoder: it is trained once on the training rows
of its views and every requested classifier is then fitted on its joint
latent. Seeds are hashed from the top-level seed and the cell coordinates,
so any worker count produces the same records.
"""

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ..classifiers import CLASSIFIER_KINDS, evaluate, train_classifier
from ..errors import ContractError
from ..mvae import MODEL_KINDS, GRID_LATENT_DIMS, MvaeConfig, train_mvae, view_subsets
from ..numcore import derive_seed
from ..textviews import fit_views
from .records import ExperimentRecord
from .split import stratified_split


@dataclass
class ExperimentData:
    """View matrices for every document, labels and the train/test split."""

    dataset: str
    views: dict
    labels: np.ndarray
    train_idx: np.ndarray
    test_idx: np.ndarray
    stratified: bool = True
    label_mapping: dict = None
    label_names: list = field(default_factory=list)

    @property
    def view_names(self):
        return list(self.views)

    def mapping_text(self):
        if not self.label_mapping:
            return ""
        return json.dumps(self.label_mapping, sort_keys=True, separators=(",", ":"))


def prepare_experiment(dataset, specs, options=None, ratio=0.7, seed=0, base_dir=None):
    """Split ``dataset`` and fit every view on its training part.

    Returns
    -------
    data : ExperimentData
    pipeline : TextPipeline
    """
    if dataset.split is not None:
        train_idx, test_idx = dataset.split
        stratified = False
    else:
        train_idx, test_idx = stratified_split(dataset.labels, ratio, seed)
        stratified = True
    pipeline, views = fit_views(dataset.texts, train_idx, specs, options, base_dir=base_dir)
    data = ExperimentData(dataset.name, {v.name: v.matrix for v in views}, dataset.labels,
                          train_idx, test_idx, stratified, dataset.label_mapping,
                          list(dataset.label_names))
    return data, pipeline


def history_digest(history):
    return hashlib.sha256(np.asarray(history, dtype="<f8").tobytes()).hexdigest()[:16]


def sweep_cells(latent_dims, ae_kinds, classifiers):
    """Grid coordinates ``(dim, ae_kind, classifier)`` in record order."""
    for grid, what in ((latent_dims, "latent dims"), (ae_kinds, "ae kinds"),
                       (classifiers, "classifiers")):
        if not grid:
            raise ContractError(f"sweep grid of {what} is empty")
    return list(product(latent_dims, ae_kinds, classifiers))


def combination_subsets(view_names):
    return [tuple(view_names[i] for i in s) for s in view_subsets(len(view_names))]


def dry_run(latent_dims=GRID_LATENT_DIMS, ae_kinds=MODEL_KINDS, classifiers=CLASSIFIER_KINDS,
            view_names=None):
    """Counts of the sweep and combination grids without training anything."""
    out = {"sweep": len(sweep_cells(latent_dims, ae_kinds, classifiers))}
    if view_names is not None:
        out["combos"] = len(combination_subsets(list(view_names)))
    return out


# ---- work units --------------------------------------------------------------

_WORKER_DATA = None


def _init_worker(data):
    global _WORKER_DATA
    _WORKER_DATA = data


def _error_text(exc):
    return f"{type(exc).__name__}: {exc}"


def _base_record(data, unit, classifier, **kw):
    return ExperimentRecord(
        dataset=data.dataset, ae_model=unit["ae_kind"], latent_dim=unit["latent_dim"],
        classifier=classifier, views=unit["views"], seed=unit["seed"],
        experiment=unit["experiment"], stratified=data.stratified,
        label_mapping=data.mapping_text(), **kw)


def _fit_and_score(data, z, unit, clf, t_features):
    cs = derive_seed(unit["seed"], "clf", unit["ae_kind"], unit["latent_dim"],
                     unit["views"], clf)
    t0 = time.perf_counter()
    model = train_classifier(z[data.train_idx], data.labels[data.train_idx], clf,
                             unit["clf_hyper"].get(clf), cs)
    m = evaluate(data.labels[data.test_idx], model.predict(z[data.test_idx]),
                 labels=range(len(data.label_names)) if data.label_names else None)
    return dict(accuracy=m.accuracy, f1_macro=m.f1_macro,
                train_time_s=t_features + time.perf_counter() - t0)


def run_unit(unit, data=None):
    """Train one autoencoder (or none) and score each classifier on it."""
    data = data if data is not None else _WORKER_DATA
    records = []
    t0 = time.perf_counter()
    loss_digest = model_digest = ""
    try:
        mats = [data.views[v] for v in unit["views"]]
        if unit["ae_kind"] == "none":
            z = mats[0]
        else:
            cfg = MvaeConfig(**{**unit["ae_base"], "kind": unit["ae_kind"],
                                "latent_dim": unit["latent_dim"], "input_dims": [],
                                "seed": derive_seed(unit["seed"], "ae", unit["ae_kind"],
                                                    unit["latent_dim"], unit["views"])})
            model = train_mvae([m[data.train_idx] for m in mats], cfg)
            loss_digest = history_digest(model.loss_history)
            model_digest = model.digest()[:16]
            z = model.encode_joint(mats)
    except Exception as exc:  # a failed cell is a record, never an abort
        err = _error_text(exc)
        return [_base_record(data, unit, clf, status="failed", error=err,
                             train_time_s=time.perf_counter() - t0)
                for clf in unit["classifiers"]]
    t_features = time.perf_counter() - t0
    for clf in unit["classifiers"]:
        try:
            scores = _fit_and_score(data, z, unit, clf, t_features)
            records.append(_base_record(data, unit, clf, loss_digest=loss_digest,
                                        model_digest=model_digest, **scores))
        except Exception as exc:
            records.append(_base_record(data, unit, clf, status="failed",
                                        error=_error_text(exc), loss_digest=loss_digest,
                                        model_digest=model_digest))
    return records


def default_workers():
    return os.cpu_count() or 1


def run_units(data, units, workers=1):
    """Execute units, in parallel when ``workers > 1``; output keeps unit order."""
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(units) <= 1:
        results = [run_unit(u, data) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(data,)) as pool:
            results = list(pool.map(run_unit, units))
    return [r for rs in results for r in rs]


def _unit(experiment, seed, ae_kind, dim, views, classifiers, ae_base, clf_hyper):
    return {"experiment": experiment, "seed": int(seed), "ae_kind": ae_kind,
            "latent_dim": int(dim), "views": tuple(views), "classifiers": list(classifiers),
            "ae_base": dict(ae_base or {}), "clf_hyper": dict(clf_hyper or {})}


def run_sweep(data, latent_dims=GRID_LATENT_DIMS, ae_kinds=MODEL_KINDS,
              classifiers=CLASSIFIER_KINDS, views=None, seed=0, ae_base=None,
              clf_hyper=None, workers=1):
    """Every (latent dim, autoencoder kind, classifier) cell on the fused views.

    Parameters
    ----------
    data : ExperimentData
    latent_dims, ae_kinds, classifiers : sequence
    views : sequence of str, optional
        Views to fuse; all views by default.
    seed : int
    ae_base : dict, optional
        ``MvaeConfig`` fields shared by every autoencoder (epochs, hidden...).
    clf_hyper : dict, optional
        Classifier kind -> hyperparameter overrides.
    workers : int

    Returns
    -------
    list of ExperimentRecord
        ``len(latent_dims) * len(ae_kinds) * len(classifiers)`` records in
        grid order; failed cells are included with ``status="failed"``.
    """
    sweep_cells(latent_dims, ae_kinds, classifiers)
    views = tuple(views or data.view_names)
    units = [_unit("sweep", seed, kind, dim, views, classifiers, ae_base, clf_hyper)
             for dim in latent_dims for kind in ae_kinds]
    return run_units(data, units, workers)


def run_baselines(data, views=None, classifiers=CLASSIFIER_KINDS, seed=0, clf_hyper=None,
                  workers=1):
    """Each classifier on each raw view; ``ae_model`` is ``"none"``."""
    views = list(views or data.view_names)
    if not views or not classifiers:
        raise ContractError("baselines need at least one view and one classifier")
    units = [_unit("baseline", seed, "none", data.views[v].shape[1], (v,), classifiers,
                   None, clf_hyper) for v in views]
    return run_units(data, units, workers)


def run_view_combinations(data, classifier, ae_kind="jointAAE", latent_dim=70, views=None,
                          seed=0, ae_base=None, clf_hyper=None, workers=1):
    """One record per non-empty view subset, flagged against the all-views subset.

    ``better_than_all`` is true when a subset's macro F1 is strictly higher
    than that of the full view set (so it is false for the full set).
    """
    views = list(views or data.view_names)
    subsets = combination_subsets(views)
    units = [_unit("combos", seed, ae_kind, latent_dim, s, [classifier], ae_base, clf_hyper)
             for s in subsets]
    records = run_units(data, units, workers)
    full = records[-1]
    for r in records:
        r.better_than_all = bool(r.ok and full.ok and r.f1_macro > full.f1_macro)
    return records
