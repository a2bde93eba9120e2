"""Report tables and charts over a set of experiment records.

Three products, each a CSV plus an SVG chart:

* ``counts``: per grouping (latent dim, autoencoder, classifier), how many
  successful sweep records score at or above their mean accuracy and how
  many score below it;
* ``box_summary``: five-number accuracy summaries per autoencoder kind;
* ``combos``: the view-subset records with their better-than-all flag.
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

GROUPINGS = ("latent_dim", "ae_model", "classifier")
COUNT_COLUMNS = ("grouping", "value", "above", "below", "total")
BOX_COLUMNS = ("ae_model", "n", "min", "q1", "median", "q3", "max")
COMBO_COLUMNS = ("views", "n_views", "accuracy", "f1_macro", "better_than_all", "status")

# deterministic SVG output: no timestamps, fixed glyph ids
plt.rcParams["svg.hashsalt"] = "mvfuse"
plt.rcParams["svg.fonttype"] = "none"
_SVG_META = {"Date": None, "Creator": "mvfuse"}


def _sort_key(v):
    return (0, v, "") if isinstance(v, (int, np.integer)) else (1, 0, str(v))


def above_below_counts(records):
    """Rows ``(grouping, value, above, below, total)``.

    ``above`` counts accuracy >= the mean over every successful record, so
    ``above + below`` summed over any grouping equals the number of
    successful records. When sweep records are present only they are
    counted (baseline and combination rows answer other questions).
    """
    sweep = [r for r in records if r.experiment == "sweep"]
    ok = [r for r in (sweep or records) if r.ok]
    if not ok:
        return []
    mean = float(np.mean([r.accuracy for r in ok]))
    rows = []
    for g in GROUPINGS:
        values = sorted({getattr(r, g) for r in ok}, key=_sort_key)
        for v in values:
            accs = [r.accuracy for r in ok if getattr(r, g) == v]
            above = sum(a >= mean for a in accs)
            rows.append((g, v, above, len(accs) - above, len(accs)))
    return rows


def five_number(values):
    q = np.percentile(np.asarray(values, dtype=np.float64), [0, 25, 50, 75, 100])
    return tuple(float(x) for x in q)


def box_summaries(records):
    ok = [r for r in records if r.ok]
    kinds = sorted({r.ae_model for r in ok})
    rows = []
    for k in kinds:
        accs = [r.accuracy for r in ok if r.ae_model == k]
        rows.append((k, len(accs)) + five_number(accs))
    return rows


def combination_rows(records):
    combos = [r for r in records if r.experiment == "combos"]
    return [("+".join(r.views), len(r.views), r.accuracy, r.f1_macro,
             bool(r.better_than_all), r.status) for r in combos]


def _write_csv(path, header, rows):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)


def plot_counts(rows, path):
    fig, axes = plt.subplots(1, len(GROUPINGS), figsize=(4 * len(GROUPINGS), 3.5))
    for ax, g in zip(axes, GROUPINGS):
        sub = [r for r in rows if r[0] == g]
        x = np.arange(len(sub))
        ax.bar(x, [r[3] for r in sub], color="tab:red", label="below mean")
        ax.bar(x, [r[2] for r in sub], bottom=[r[3] for r in sub], color="tab:blue",
               label="at/above mean")
        ax.set_xticks(x, [str(r[1]) for r in sub], rotation=45, ha="right")
        ax.set_title(g)
    axes[0].set_ylabel("configurations")
    axes[-1].legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    _save(fig, path)


def plot_boxes(rows, path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    stats = [{"label": r[0], "whislo": r[2], "q1": r[3], "med": r[4], "q3": r[5],
              "whishi": r[6], "fliers": []} for r in rows]
    if stats:
        ax.bxp(stats, showfliers=False)
        ax.tick_params(axis="x", labelrotation=45)
    ax.set_ylabel("accuracy")
    fig.tight_layout()
    _save(fig, path)


def plot_combos(rows, path):
    fig, ax = plt.subplots(figsize=(max(4, 0.35 * len(rows) + 2), 3.5))
    x = np.arange(len(rows))
    f1 = [0.0 if np.isnan(r[3]) else r[3] for r in rows]
    ax.bar(x, f1, color=["tab:green" if r[4] else "tab:gray" for r in rows])
    ax.set_xticks(x, [r[0] for r in rows], rotation=90, fontsize="small")
    ax.set_ylabel("macro F1")
    fig.tight_layout()
    _save(fig, path)


def summarize(records, out_dir):
    """Write the three report tables and charts into ``out_dir``.

    Returns
    -------
    dict
        Product name -> ``(csv_path, svg_path)``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    counts = above_below_counts(records)
    boxes = box_summaries(records)
    combos = combination_rows(records)
    out = {}
    for name, header, rows, plot in (("counts", COUNT_COLUMNS, counts, plot_counts),
                                     ("box_summary", BOX_COLUMNS, boxes, plot_boxes),
                                     ("combos", COMBO_COLUMNS, combos, plot_combos)):
        csv_path, svg_path = out_dir / f"{name}.csv", out_dir / f"{name}.svg"
        _write_csv(csv_path, header, rows)
        plot(rows, svg_path)
        out[name] = (csv_path, svg_path)
    return out
