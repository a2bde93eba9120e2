"""Static word-embedding tables and mean-pooled document vectors."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import IntegrityError, ParseError


class EmptyTableError(IntegrityError):
    """The embedding file holds no vectors."""


@dataclass
class EmbeddingTable:
    tokens: list
    vectors: np.ndarray
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        self.index = {t: i for i, t in enumerate(self.tokens)}

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index


def _looks_like_header(fields, next_fields):
    if len(fields) != 2 or not all(f.isdigit() for f in fields):
        return False
    return next_fields is not None and len(next_fields) - 1 == int(fields[1])


def load_embedding_table(path, expected_dim=None):
    """Parse ``token v1 ... vd`` lines (single-space separated).

    A leading word2vec-style ``count dim`` header is skipped when the next
    line has ``dim`` values. Blank lines are ignored; for repeated tokens the
    first occurrence wins.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        raw = [ln.rstrip("\n").rstrip("\r") for ln in fh]
    lines = [(no, ln.split(" ")) for no, ln in enumerate(raw, start=1) if ln]
    if lines and _looks_like_header(lines[0][1], lines[1][1] if len(lines) > 1 else None):
        lines = lines[1:]
    if not lines:
        raise EmptyTableError(f"{path}: no embedding vectors found")

    dim = expected_dim
    tokens, rows, seen = [], [], set()
    for no, fields in lines:
        token, values = fields[0], fields[1:]
        if not token or not values:
            raise ParseError("expected a token followed by values", line=no)
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise ParseError(f"expected {dim} values, found {len(values)}", line=no)
        try:
            vec = [float(v) for v in values]
        except ValueError as exc:
            raise ParseError(f"unreadable float ({exc})", line=no) from None
        if token in seen:
            continue
        seen.add(token)
        tokens.append(token)
        rows.append(vec)
    vectors = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(vectors)):
        raise ParseError("non-finite embedding value")
    return EmbeddingTable(tokens, vectors)


def embed_average(tokens, table):
    """Mean of the vectors of in-table tokens; zeros if none are known."""
    rows = [table.index[t] for t in tokens if t in table.index]
    if not rows:
        return np.zeros(table.dim)
    return table.vectors[rows].mean(axis=0)


def embed_corpus(corpus, table):
    out = np.zeros((len(corpus), table.dim))
    for i, doc in enumerate(corpus):
        out[i] = embed_average(doc, table)
    return out
