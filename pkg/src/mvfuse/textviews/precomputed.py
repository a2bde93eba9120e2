"""Ingestion of views computed elsewhere (e.g. transformer sentence embeddings)."""

import csv

import numpy as np

from ..errors import IntegrityError, ParseError
from .views import ViewMatrix


def load_precomputed_view(path, corpus_size, name="precomputed"):
    """Read a ``doc_id,f0,...,f{d-1}`` CSV into a view ordered by ``doc_id``.

    Every id in ``0 .. corpus_size-1`` must appear exactly once.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IntegrityError(f"{path}: empty precomputed view file") from None
        dim = len(header) - 1
        if header[0] != "doc_id" or header[1:] != [f"f{j}" for j in range(dim)] or dim < 1:
            raise ParseError("header must be doc_id,f0,...,f{d-1}", line=1)
        ids, rows = [], []
        for no, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != dim + 1:
                raise ParseError(f"expected {dim + 1} fields, found {len(rec)}", line=no)
            try:
                ids.append(int(rec[0]))
                rows.append([float(v) for v in rec[1:]])
            except ValueError as exc:
                raise ParseError(str(exc), line=no) from None

    counts = np.bincount([i for i in ids if 0 <= i < corpus_size], minlength=corpus_size)
    dupes = sorted({i for i in ids if 0 <= i < corpus_size and counts[i] > 1})
    if dupes:
        raise IntegrityError(f"{path}: duplicate doc_id values {dupes}")
    outside = sorted({i for i in ids if not 0 <= i < corpus_size})
    if outside:
        raise IntegrityError(f"{path}: doc_id values outside 0..{corpus_size - 1}: {outside}")
    missing = np.flatnonzero(counts == 0).tolist()
    if missing:
        raise IntegrityError(f"{path}: missing doc_id values {missing}")
    if len(ids) != corpus_size:
        raise IntegrityError(f"{path}: {len(ids)} rows for a corpus of {corpus_size}")

    matrix = np.empty((corpus_size, dim))
    matrix[np.asarray(ids)] = np.asarray(rows)
    return ViewMatrix(name, matrix, "loaded")
