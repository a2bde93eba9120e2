"""Datasets, splits and the experiment grids built on the other modules."""

from .datasets import (
    DATASET_NAMES, LIAR_BINARY, LIAR_LABELS, DATASET_SIZES, Dataset, DatasetSpec,
    encode_labels, load_dataset,
)
from .experiments import (
    ExperimentData, combination_subsets, dry_run, prepare_experiment, run_baselines, run_sweep,
    run_unit, run_view_combinations, sweep_cells,
)
from .records import REPORT_COLUMNS, ExperimentRecord, read_records, write_records
from .split import stratified_split
from .summarize import above_below_counts, box_summaries, combination_rows, summarize
from .synthetic import low_rank_views, xor_views

__all__ = [
    "DATASET_NAMES", "Dataset", "DatasetSpec", "ExperimentData", "ExperimentRecord",
    "LIAR_BINARY", "LIAR_LABELS", "REPORT_COLUMNS", "DATASET_SIZES", "above_below_counts",
    "box_summaries", "combination_rows", "combination_subsets", "dry_run", "encode_labels",
    "load_dataset", "low_rank_views", "prepare_experiment", "read_records", "run_baselines",
    "run_sweep", "run_unit", "run_view_combinations", "stratified_split", "summarize",
    "sweep_cells", "write_records", "xor_views",
]
