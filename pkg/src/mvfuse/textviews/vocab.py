"""Vocabulary fitting and the frequency views (counts and TF-IDF)."""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractError, IntegrityError
from .views import ViewMatrix


class EmptyVocabularyError(IntegrityError):
    """Every candidate term was filtered out."""


@dataclass
class Vocabulary:
    """Ordered terms with their document frequencies over ``n_docs`` documents.

    Terms are ordered by descending document frequency, ties broken
    lexicographically.
    """

    terms: list
    doc_freq: np.ndarray
    n_docs: int
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.terms = list(self.terms)
        self.doc_freq = np.asarray(self.doc_freq, dtype=np.int64)
        if len(self.doc_freq) != len(self.terms):
            raise ContractError("one document frequency per term is required")
        self.index = {t: i for i, t in enumerate(self.terms)}
        if len(self.index) != len(self.terms):
            raise ContractError("vocabulary terms must be unique")

    def __len__(self):
        return len(self.terms)

    @classmethod
    def from_terms(cls, terms, corpus):
        """Vocabulary over given ``terms``, with frequencies counted on ``corpus``."""
        df = Counter(t for doc in corpus for t in set(doc))
        return cls(list(terms), [df.get(t, 0) for t in terms], len(corpus))

    def to_dict(self):
        return {"terms": self.terms, "doc_freq": self.doc_freq.tolist(),
                "n_docs": self.n_docs}

    @classmethod
    def from_dict(cls, d):
        return cls(d["terms"], d["doc_freq"], int(d["n_docs"]))


def term_counts(corpus):
    """Total occurrences of each term across the corpus."""
    return Counter(t for doc in corpus for t in doc)


def fit_vocab(corpus, min_count=2, max_features=None):
    """Fit a vocabulary on tokenised documents.

    Terms occurring fewer than ``min_count`` times in the whole corpus are
    dropped (``min_count=2`` removes hapaxes; a term seen twice in one
    document is kept). ``max_features`` keeps only the leading terms.
    """
    if len(corpus) == 0:
        raise ContractError("cannot fit a vocabulary on an empty corpus")
    totals = term_counts(corpus)
    df = Counter(t for doc in corpus for t in set(doc))
    kept = [t for t, c in totals.items() if c >= min_count]
    if not kept:
        raise EmptyVocabularyError("no term occurs at least "
                                   f"{min_count} times in the corpus")
    kept.sort(key=lambda t: (-df[t], t))
    if max_features is not None:
        kept = kept[:max_features]
    return Vocabulary(kept, [df[t] for t in kept], len(corpus))


def count_matrix(corpus, vocab):
    out = np.zeros((len(corpus), len(vocab)))
    index = vocab.index
    for i, doc in enumerate(corpus):
        for t in doc:
            j = index.get(t)
            if j is not None:
                out[i, j] += 1.0
    return out


def count_vectorize(corpus, vocab, name="cv"):
    """Bag-of-words counts; out-of-vocabulary tokens are ignored."""
    return ViewMatrix(name, count_matrix(corpus, vocab), "fitted")


def idf(vocab):
    """Smoothed inverse document frequency ``ln((1+N)/(1+df)) + 1``."""
    return np.log((1.0 + vocab.n_docs) / (1.0 + vocab.doc_freq)) + 1.0


def tfidf_matrix(counts, vocab):
    weighted = np.asarray(counts, dtype=np.float64) * idf(vocab)
    norms = np.linalg.norm(weighted, axis=1, keepdims=True)
    return np.divide(weighted, norms, out=np.zeros_like(weighted), where=norms > 0)


def tfidf_transform(counts, vocab, name="tfidf"):
    """TF-IDF with L2-normalised rows (all-zero rows stay zero)."""
    return ViewMatrix(name, tfidf_matrix(counts.matrix, vocab), "fitted")
