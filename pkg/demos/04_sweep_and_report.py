"""A reduced experiment grid and its report.

Runs two latent sizes by two autoencoder kinds by three classifiers on the
smoke corpus, the single-view baselines and every view subset, then writes
the count, box-summary and combination tables with their charts.
"""

import sys
import tempfile
from pathlib import Path

from mvfuse import data_path
from mvfuse.harness import (
    DatasetSpec, dry_run, load_dataset, prepare_experiment, run_baselines, run_sweep,
    run_view_combinations, summarize, write_records,
)
from mvfuse.textviews import ViewSpec

print("full grid:", dry_run(view_names=["cv", "tfidf", "w2v", "a", "b", "c", "d"]))

dataset = load_dataset(DatasetSpec("fakes", str(data_path("smoke_corpus.csv")),
                                   label_mapping={"0": "fake", "1": "real"}))
views = [ViewSpec("cv"), ViewSpec("tfidf"),
         ViewSpec("w2v", path=str(data_path("smoke_embeddings.txt")))]
data, _ = prepare_experiment(dataset, views, seed=0)
ae_base = {"hidden": 32, "disc_hidden": 16, "epochs": 10, "batch_size": 16}

records = run_sweep(data, latent_dims=[4, 8], ae_kinds=["jointAAE", "mVAE"],
                    classifiers=["logreg", "knn", "naive_bayes"], seed=0, ae_base=ae_base)
records += run_baselines(data, classifiers=["logreg"], seed=0)
records += run_view_combinations(data, "logreg", latent_dim=8, seed=0, ae_base=ae_base)

for r in records:
    print(f"{r.experiment:8s} {'+'.join(r.views):14s} {r.ae_model:8s} {r.latent_dim:4d} "
          f"{r.classifier:12s} acc {r.accuracy:.3f} f1 {r.f1_macro:.3f}")

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="mvfuse-"))
write_records(records, out / "records.csv")
for name, (csv_path, svg_path) in summarize(records, out / "reports").items():
    print(f"{name}: {csv_path} {svg_path}")
