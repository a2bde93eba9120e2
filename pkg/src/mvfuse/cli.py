"""``mvfuse`` command line.

Commands::

    mvfuse views build --config C      fit views, write views/
    mvfuse ae train    --config C      train the autoencoder, write models/ae.mvae
    mvfuse clf train   --config C      train the classifier, write models/clf.mvcl
    mvfuse predict     --config C --text T [--text T ...] | --file F  [--proba]
    mvfuse sweep       --config C [--dry-run]
    mvfuse baselines   --config C
    mvfuse combos      --config C [--classifier K] [--dry-run]
    mvfuse report      --config C [--records F ...]

Exit codes: 0 success, 1 configuration error, 2 data integrity error,
3 training failure (including failed sweep records unless
``--tolerate-failures`` is given).
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .classifiers import evaluate, load_classifier, save_classifier, train_classifier
from .config import config_summary, load_config
from .errors import (ConfigError, ContractError, FormatError, IntegrityError, MvfuseError,
                     TrainingError)
from .harness import (combination_subsets, dry_run, load_dataset, prepare_experiment,
                      read_records, run_baselines, run_sweep, run_view_combinations, summarize,
                      write_records)
from .harness.experiments import default_workers
from .mvae import load_mvae, save_mvae, train_mvae
from .textviews import TextPipeline

log = logging.getLogger("mvfuse")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_TRAINING = 0, 1, 2, 3
LAYOUT = ("views", "models", "records", "reports")


class MissingArtifactError(IntegrityError):
    """A pipeline stage's output is not on disk yet."""


def _layout(out):
    return {name: Path(out) / name for name in LAYOUT}


def _mkdirs(out, *names):
    dirs = _layout(out)
    for n in names:
        dirs[n].mkdir(parents=True, exist_ok=True)
    return dirs


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _require(path, stage, command):
    if not Path(path).exists():
        raise MissingArtifactError(f"missing {stage} artifact {path}; run `mvfuse {command}` first")
    return path


def _log_seeds(cfg):
    for stage, s in cfg.derived_seeds().items():
        log.info("seed %s = %d", stage, s)


# ---- views / ae / clf -----------------------------------------------------------

def cmd_views_build(cfg, args):
    dataset = load_dataset(cfg.dataset)
    data, pipeline = prepare_experiment(dataset, cfg.views, cfg.preprocess, cfg.split_ratio,
                                        cfg.derived_seeds()["split"])
    dirs = _mkdirs(cfg.out, "views")
    for name, matrix in data.views.items():
        np.save(dirs["views"] / f"{name}.npy", matrix, allow_pickle=False)
    _write_json(dirs["views"] / "pipeline.json", pipeline.to_dict())
    _write_json(dirs["views"] / "dataset.json", {
        "dataset": data.dataset, "label_names": [str(n) for n in data.label_names],
        "labels": data.labels.tolist(), "train_idx": data.train_idx.tolist(),
        "test_idx": data.test_idx.tolist(), "stratified": data.stratified,
        "label_mapping": data.label_mapping, "view_names": data.view_names,
        "config": config_summary(cfg)})
    for name, m in data.views.items():
        print(f"{name}\t{m.shape[0]}x{m.shape[1]}")
    return EXIT_OK


def _load_views(cfg):
    vdir = _layout(cfg.out)["views"]
    meta_path = _require(vdir / "dataset.json", "views", "views build")
    meta = json.loads(Path(meta_path).read_text(encoding="utf-8"))
    wanted = [v.name for v in cfg.views]
    if meta["view_names"] != wanted:
        raise ConfigError(f"built views {meta['view_names']} differ from configured {wanted}; "
                          "rebuild with `mvfuse views build`")
    mats = [np.load(_require(vdir / f"{n}.npy", "views", "views build"), allow_pickle=False)
            for n in wanted]
    return meta, mats


def cmd_ae_train(cfg, args):
    meta, mats = _load_views(cfg)
    mcfg = cfg.mvae_config()
    train_idx = np.asarray(meta["train_idx"], dtype=np.int64)
    from .textviews import ViewMatrix
    views = [ViewMatrix(n, m[train_idx], "loaded") for n, m in zip(meta["view_names"], mats)]
    model = train_mvae(views, mcfg)
    dirs = _mkdirs(cfg.out, "models")
    save_mvae(model, dirs["models"] / "ae.mvae")
    with (dirs["models"] / "ae_loss.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epoch", "loss", "reconstruction"])
        for i, (l, r) in enumerate(zip(model.loss_history, model.recon_history), 1):
            w.writerow([i, repr(l), repr(r)])
    print(f"{model.kind}\tlatent={model.latent_dim}\tepochs={len(model.loss_history)}\t"
          f"digest={model.digest()[:16]}")
    return EXIT_OK


def cmd_clf_train(cfg, args):
    meta, mats = _load_views(cfg)
    model = load_mvae(_require(_layout(cfg.out)["models"] / "ae.mvae", "autoencoder", "ae train"))
    z = model.encode_joint(mats)
    y = np.asarray(meta["labels"], dtype=np.int64)
    tr = np.asarray(meta["train_idx"], dtype=np.int64)
    te = np.asarray(meta["test_idx"], dtype=np.int64)
    clf = train_classifier(z[tr], y[tr], cfg.classifier_kind, cfg.classifier_hyper,
                           cfg.derived_seeds()["classifier"])
    dirs = _mkdirs(cfg.out, "models", "records")
    save_classifier(clf, dirs["models"] / "clf.mvcl")
    result = {"classifier": cfg.classifier_kind, "ae_model": model.kind,
              "latent_dim": model.latent_dim}
    if len(te):
        m = evaluate(y[te], clf.predict(z[te]), labels=range(len(meta["label_names"])))
        result.update(test=m.to_dict())
        print(f"{cfg.classifier_kind}\taccuracy={m.accuracy:.4f}\tf1_macro={m.f1_macro:.4f}")
    _write_json(dirs["records"] / "clf_eval.json", result)
    return EXIT_OK


# ---- predict -----------------------------------------------------------------------

def _read_texts(args):
    texts = list(args.text or [])
    if args.file:
        path = Path(args.file)
        if not path.is_file():
            raise ConfigError(f"--file not found: {path}")
        texts += path.read_text(encoding="utf-8").splitlines()
    if not args.text and not args.file:
        raise ConfigError("predict needs --text or --file")
    return texts


def predict_lines(cfg, texts, proba=False, precomputed=None):
    """Output lines of ``predict`` for ``texts``, in input order."""
    layout = _layout(cfg.out)
    pipe_path = _require(layout["views"] / "pipeline.json", "views", "views build")
    meta = json.loads(_require(layout["views"] / "dataset.json", "views", "views build")
                      .read_text(encoding="utf-8"))
    model = load_mvae(_require(layout["models"] / "ae.mvae", "autoencoder", "ae train"))
    clf = load_classifier(_require(layout["models"] / "clf.mvcl", "classifier", "clf train"))
    pipeline = TextPipeline.from_dict(json.loads(Path(pipe_path).read_text(encoding="utf-8")))
    if pipeline.view_names != model.view_names:
        raise IntegrityError(f"autoencoder views {model.view_names} differ from the fitted "
                             f"views {pipeline.view_names}")
    if not texts:
        return []
    views = pipeline.transform(texts, precomputed)
    z = model.encode_joint(views)
    names = meta["label_names"]
    labels = clf.predict(z)
    lines = []
    if proba:
        p = clf.predict_proba(z)
        for lbl, row in zip(labels, p):
            cells = [f"{names[int(c)]}={float(v)!r}" for c, v in zip(clf.classes_, row)]
            lines.append("\t".join([names[int(lbl)]] + cells))
    else:
        lines = [names[int(lbl)] for lbl in labels]
    return lines


def cmd_predict(cfg, args):
    texts = _read_texts(args)
    precomputed = {}
    for item in args.precomputed or []:
        name, _, path = item.partition("=")
        if not path:
            raise ConfigError(f"--precomputed expects NAME=PATH, got {item!r}")
        precomputed[name] = path
    for line in predict_lines(cfg, texts, args.proba, precomputed):
        print(line)
    return EXIT_OK


# ---- experiments ---------------------------------------------------------------------

def _prepare(cfg):
    dataset = load_dataset(cfg.dataset)
    data, _ = prepare_experiment(dataset, cfg.views, cfg.preprocess, cfg.split_ratio,
                                 cfg.derived_seeds()["split"])
    return data


def _finish(records, path, args):
    failed = [r for r in records if not r.ok]
    print(f"{len(records)} records ({len(failed)} failed) -> {path}")
    for r in failed[:5]:
        print(f"failed: {r.ae_model}/{r.latent_dim}/{r.classifier}: {r.error}", file=sys.stderr)
    if failed and not args.tolerate_failures:
        return EXIT_TRAINING
    return EXIT_OK


def _workers(args):
    return default_workers() if args.workers is None else max(1, args.workers)


def cmd_sweep(cfg, args):
    sw = cfg.sweep
    if args.dry_run:
        n = dry_run(sw.latent_dims, sw.ae_kinds, sw.classifiers)["sweep"]
        print(f"sweep cells: {len(sw.latent_dims)} dims x {len(sw.ae_kinds)} ae kinds x "
              f"{len(sw.classifiers)} classifiers = {n}")
        return EXIT_OK
    data = _prepare(cfg)
    records = run_sweep(data, sw.latent_dims, sw.ae_kinds, sw.classifiers, seed=cfg.seed,
                        ae_base=cfg.ae, clf_hyper=sw.classifier_hyper, workers=_workers(args))
    path = write_records(records, _mkdirs(cfg.out, "records")["records"] / "sweep.csv")
    return _finish(records, path, args)


def cmd_baselines(cfg, args):
    data = _prepare(cfg)
    clfs = cfg.sweep.baseline_classifiers or cfg.sweep.classifiers
    records = run_baselines(data, classifiers=clfs, seed=cfg.seed,
                            clf_hyper=cfg.sweep.classifier_hyper, workers=_workers(args))
    path = write_records(records, _mkdirs(cfg.out, "records")["records"] / "baselines.csv")
    return _finish(records, path, args)


def cmd_combos(cfg, args):
    sw = cfg.sweep
    clf = args.classifier or sw.combos_classifier
    if clf is None:
        raise ConfigError("combos needs a classifier: set sweep.combos.classifier or --classifier")
    names = [v.name for v in cfg.views]
    if args.dry_run:
        print(f"view subsets: 2^{len(names)} - 1 = {len(combination_subsets(names))}")
        return EXIT_OK
    data = _prepare(cfg)
    records = run_view_combinations(data, clf, sw.combos_ae_kind, sw.combos_latent_dim,
                                    seed=cfg.seed, ae_base=cfg.ae,
                                    clf_hyper=sw.classifier_hyper, workers=_workers(args))
    path = write_records(records, _mkdirs(cfg.out, "records")["records"] / "combos.csv")
    return _finish(records, path, args)


def cmd_report(cfg, args):
    if args.records:
        paths = [Path(p) for p in args.records]
    else:
        rdir = _layout(cfg.out)["records"]
        paths = sorted(rdir.glob("*.csv")) if rdir.is_dir() else []
    records = []
    for p in paths:
        if not p.is_file():
            raise ConfigError(f"record file not found: {p}")
        records += read_records(p)
    products = summarize(records, _mkdirs(cfg.out, "reports")["reports"])
    print(f"{len(records)} records from {len(paths)} file(s)")
    for name, (c, s) in products.items():
        print(f"{name}\t{c}\t{s}")
    return EXIT_OK


# ---- parser -----------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="YAML run configuration")
    common.add_argument("--seed", type=int, help="override the config's top-level seed")
    common.add_argument("--out", help="override the output directory")
    common.add_argument("--workers", type=int, help="parallel grid workers (default: cores)")
    common.add_argument("--tolerate-failures", action="store_true",
                        help="exit 0 even when some records failed")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(prog="mvfuse", description=__doc__.split("\n")[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    views = sub.add_parser("views", help="feature views").add_subparsers(dest="action",
                                                                          required=True)
    views.add_parser("build", parents=[common]).set_defaults(func=cmd_views_build)
    ae = sub.add_parser("ae", help="multi-view autoencoder").add_subparsers(dest="action",
                                                                             required=True)
    ae.add_parser("train", parents=[common]).set_defaults(func=cmd_ae_train)
    clf = sub.add_parser("clf", help="classifier").add_subparsers(dest="action", required=True)
    clf.add_parser("train", parents=[common]).set_defaults(func=cmd_clf_train)

    p = sub.add_parser("predict", parents=[common], help="label new texts")
    p.add_argument("--text", action="append", help="a text to classify (repeatable)")
    p.add_argument("--file", help="file with one text per line")
    p.add_argument("--proba", action="store_true", help="append per-class scores")
    p.add_argument("--precomputed", action="append", metavar="NAME=PATH",
                   help="feature file of a precomputed view for these texts")
    p.set_defaults(func=cmd_predict)

    s = sub.add_parser("sweep", parents=[common], help="latent dim x autoencoder x classifier")
    s.add_argument("--dry-run", action="store_true", help="count cells without training")
    s.set_defaults(func=cmd_sweep)
    sub.add_parser("baselines", parents=[common],
                   help="classifiers on single raw views").set_defaults(func=cmd_baselines)
    c = sub.add_parser("combos", parents=[common], help="every non-empty view subset")
    c.add_argument("--classifier", help="classifier kind (overrides sweep.combos.classifier)")
    c.add_argument("--dry-run", action="store_true", help="count subsets without training")
    c.set_defaults(func=cmd_combos)
    r = sub.add_parser("report", parents=[common], help="tables and charts from records")
    r.add_argument("--records", nargs="*", help="record CSVs (default: out/records/*.csv)")
    r.set_defaults(func=cmd_report)
    return parser


def exit_code_for(exc):
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, TrainingError):
        return EXIT_TRAINING
    if isinstance(exc, (IntegrityError, FormatError, ContractError)):
        return EXIT_DATA
    return EXIT_DATA if isinstance(exc, MvfuseError) else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config, seed=args.seed, out=args.out)
        _log_seeds(cfg)
        return args.func(cfg, args)
    except MvfuseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
