"""Run configuration: one YAML file with ``dataset``, ``views``, ``ae``,
``classifier`` and ``sweep`` sections plus top-level ``seed`` and ``out``.

Relative input paths are resolved against the directory of the config
file; a relative ``out`` is taken relative to the working directory.
Unknown keys are rejected so that typos fail before any work starts.

Example::

    seed: 0
    out: runs/smoke
    dataset:
      name: custom            # fakes | liar2 | liar6 | isot | custom
      path: smoke_corpus.csv
      text_column: article_content
      label_column: labels
      split_ratio: 0.7
    views:
      - {name: cv}
      - {name: tfidf}
      - {name: w2v, path: smoke_embeddings.txt}
    ae: {kind: jointAAE, latent_dim: 8, epochs: 20}
    classifier: {kind: logreg, hyper: {}}
    sweep:
      latent_dims: [4, 8]
      combos: {classifier: logreg, ae_kind: jointAAE, latent_dim: 70}
"""

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import yaml

from .classifiers import CLASSIFIER_KINDS, make_classifier
from .errors import ConfigError, MvfuseError
from .harness import DatasetSpec
from .mvae import MODEL_KINDS, GRID_LATENT_DIMS, MvaeConfig
from .numcore import derive_seed
from .textviews import PreprocessOptions, ViewSpec, check_specs

TOP_KEYS = {"seed", "out", "dataset", "views", "ae", "classifier", "sweep"}
DATASET_KEYS = {"name", "path", "text_column", "label_column", "label_mapping",
                "predefined_split", "split_ratio", "preprocess"}
VIEW_KEYS = {"name", "kind", "path", "max_features"}
AE_KEYS = {f.name for f in fields(MvaeConfig)} - {"input_dims", "seed"}
CLASSIFIER_KEYS = {"kind", "hyper"}
SWEEP_KEYS = {"latent_dims", "ae_kinds", "classifiers", "classifier_hyper", "baseline_classifiers",
              "combos"}
COMBO_KEYS = {"classifier", "ae_kind", "latent_dim"}


def _section(raw, name, allowed, required=()):
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{name}: expected a mapping, got {type(raw).__name__}")
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"{name}: unknown key(s) {unknown}; allowed {sorted(allowed)}")
    missing = [k for k in required if k not in raw]
    if missing:
        raise ConfigError(f"{name}: missing required key(s) {missing}")
    return raw


def _kinds(values, allowed, what):
    values = list(values)
    bad = [v for v in values if v not in allowed]
    if bad:
        raise ConfigError(f"sweep.{what}: unknown value(s) {bad}; expected from {list(allowed)}")
    if not values:
        raise ConfigError(f"sweep.{what} is empty")
    return values


@dataclass
class SweepConfig:
    latent_dims: list = field(default_factory=lambda: list(GRID_LATENT_DIMS))
    ae_kinds: list = field(default_factory=lambda: list(MODEL_KINDS))
    classifiers: list = field(default_factory=lambda: list(CLASSIFIER_KINDS))
    baseline_classifiers: list = None
    classifier_hyper: dict = field(default_factory=dict)
    combos_classifier: str = None
    combos_ae_kind: str = "jointAAE"
    combos_latent_dim: int = 70


@dataclass
class RunConfig:
    """Validated contents of a config file."""

    dataset: DatasetSpec
    views: list
    ae: dict
    classifier_kind: str
    classifier_hyper: dict
    sweep: SweepConfig
    out: Path
    seed: int = 0
    split_ratio: float = 0.7
    preprocess: PreprocessOptions = field(default_factory=PreprocessOptions)
    base_dir: Path = None

    def derived_seeds(self):
        """Seeds of every stage, all derived from ``seed``."""
        return {"split": derive_seed(self.seed, "split"), "ae": derive_seed(self.seed, "ae"),
                "classifier": derive_seed(self.seed, "classifier"), "sweep": self.seed}

    def mvae_config(self, **overrides):
        return MvaeConfig(**{**self.ae, "seed": self.derived_seeds()["ae"], **overrides})


def _resolve(base, p):
    p = Path(p)
    return p if p.is_absolute() else (base / p)


def parse_config(raw, base_dir=".", seed=None, out=None):
    """Validate a config mapping; ``seed`` and ``out`` override the file."""
    base = Path(base_dir).resolve()
    top = _section(raw, "config", TOP_KEYS, required=("dataset", "views"))
    try:
        ds = _section(top["dataset"], "dataset", DATASET_KEYS, required=("name", "path"))
        pre = PreprocessOptions(**_section(ds.get("preprocess"), "dataset.preprocess",
                                           {f.name for f in fields(PreprocessOptions)}))
        ratio = float(ds.get("split_ratio", 0.7))
        if not 0.0 < ratio < 1.0:
            raise ConfigError(f"dataset.split_ratio must lie in (0, 1), got {ratio}")
        spec = DatasetSpec(
            name=ds["name"], path=str(_resolve(base, ds["path"])),
            text_column=ds.get("text_column"), label_column=ds.get("label_column"),
            label_mapping=ds.get("label_mapping"), predefined_split=ds.get("predefined_split"))
        if not Path(spec.path).exists():
            raise ConfigError(f"dataset.path not found: {spec.path}")

        if not isinstance(top["views"], list):
            raise ConfigError("views: expected a list of view entries")
        views = []
        for i, v in enumerate(top["views"]):
            v = _section(v, f"views[{i}]", VIEW_KEYS, required=("name",))
            v = dict(v)
            if v.get("path"):
                v["path"] = str(_resolve(base, v["path"]))
            views.append(ViewSpec(**v))
        check_specs(views)

        ae = dict(_section(top.get("ae"), "ae", AE_KEYS))
        MvaeConfig(**ae)

        clf = _section(top.get("classifier"), "classifier", CLASSIFIER_KEYS)
        clf_kind = clf.get("kind", "logreg")
        clf_hyper = dict(clf.get("hyper") or {})
        make_classifier(clf_kind, clf_hyper)

        sw = _section(top.get("sweep"), "sweep", SWEEP_KEYS)
        combos = _section(sw.get("combos"), "sweep.combos", COMBO_KEYS)
        sweep = SweepConfig()
        if "latent_dims" in sw:
            sweep.latent_dims = [int(d) for d in sw["latent_dims"]]
            if not sweep.latent_dims or min(sweep.latent_dims) < 1:
                raise ConfigError("sweep.latent_dims must be non-empty positive integers")
        if "ae_kinds" in sw:
            sweep.ae_kinds = _kinds(sw["ae_kinds"], MODEL_KINDS, "ae_kinds")
        if "classifiers" in sw:
            sweep.classifiers = _kinds(sw["classifiers"], CLASSIFIER_KINDS, "classifiers")
        if "baseline_classifiers" in sw:
            sweep.baseline_classifiers = _kinds(sw["baseline_classifiers"], CLASSIFIER_KINDS,
                                                "baseline_classifiers")
        sweep.classifier_hyper = dict(sw.get("classifier_hyper") or {})
        for k, h in sweep.classifier_hyper.items():
            make_classifier(k, h)
        if "classifier" in combos:
            sweep.combos_classifier = _kinds([combos["classifier"]], CLASSIFIER_KINDS,
                                             "combos.classifier")[0]
        if "ae_kind" in combos:
            sweep.combos_ae_kind = _kinds([combos["ae_kind"]], MODEL_KINDS, "combos.ae_kind")[0]
        if "latent_dim" in combos:
            sweep.combos_latent_dim = int(combos["latent_dim"])

        seed = int(top.get("seed", 0) if seed is None else seed)
        out_dir = Path(out if out is not None else top.get("out", "out"))
    except ConfigError:
        raise
    except (MvfuseError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    return RunConfig(spec, views, ae, clf_kind, clf_hyper, sweep, out_dir, seed, ratio, pre, base)


def load_config(path, seed=None, out=None):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from None
    return parse_config(raw, path.parent, seed=seed, out=out)


def config_summary(cfg):
    """Plain-data description of a run, written next to its outputs."""
    return {
        "seed": cfg.seed, "derived_seeds": cfg.derived_seeds(),
        "dataset": asdict(cfg.dataset), "split_ratio": cfg.split_ratio,
        "preprocess": asdict(cfg.preprocess), "views": [asdict(v) for v in cfg.views],
        "ae": cfg.ae, "classifier": {"kind": cfg.classifier_kind, "hyper": cfg.classifier_hyper},
        "sweep": asdict(cfg.sweep),
    }
