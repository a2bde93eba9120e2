"""Fitted feature-extraction functions, one per view, and their persistence.

Frequency and embedding views are fitted on the training documents only;
test and query documents go through the frozen vocabulary, idf and tables.
Precomputed views are read from files for the dataset and must be supplied
again for unseen documents.
"""

from dataclasses import asdict, dataclass
from pathlib import Path

from ..errors import ConfigError, IntegrityError
from .embeddings import embed_corpus, load_embedding_table
from .precomputed import load_precomputed_view
from .preprocess import PreprocessOptions, load_lexicons, preprocess
from .views import ViewMatrix
from .vocab import Vocabulary, count_matrix, fit_vocab, term_counts, tfidf_matrix

VIEW_KINDS = ("cv", "tfidf", "embedding", "precomputed")
_DEFAULT_KIND = {
    "cv": "cv", "tfidf": "tfidf",
    "w2v": "embedding", "word2vec": "embedding", "glove": "embedding",
    "fasttext": "embedding", "fast": "embedding",
    "roberta": "precomputed", "falcon": "precomputed",
}


@dataclass
class ViewSpec:
    name: str
    kind: str = None
    path: str = None
    max_features: int = None

    def __post_init__(self):
        if self.kind is None:
            self.kind = _DEFAULT_KIND.get(self.name.lower())
        if self.kind not in VIEW_KINDS:
            raise ConfigError(f"view {self.name!r}: unknown or missing kind {self.kind!r}")
        if self.kind in ("embedding", "precomputed") and not self.path:
            raise ConfigError(f"view {self.name!r} ({self.kind}) needs a path")


def check_specs(specs, base_dir=None):
    """Fail fast on duplicate names and missing files."""
    names = [s.name for s in specs]
    if not specs:
        raise ConfigError("at least one view is required")
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ConfigError(f"duplicate view names: {dupes}")
    for s in specs:
        if s.path and not _resolve(s.path, base_dir).is_file():
            raise ConfigError(f"view {s.name!r}: file not found: {s.path}")


def _resolve(path, base_dir):
    p = Path(path)
    if not p.is_absolute() and base_dir is not None:
        p = Path(base_dir) / p
    return p


class ViewExtractor:
    """The feature-extraction function of one view after fitting."""

    def __init__(self, spec, vocab=None, keep=None, base_dir=None):
        self.spec = spec
        self.vocab = vocab
        self.keep = keep
        self.base_dir = base_dir
        self._table = None

    @property
    def name(self):
        return self.spec.name

    @property
    def table(self):
        if self._table is None:
            self._table = load_embedding_table(_resolve(self.spec.path, self.base_dir))
        return self._table

    def transform(self, corpus):
        kind = self.spec.kind
        if kind == "precomputed":
            raise IntegrityError(f"view {self.name!r} is precomputed; "
                                 "supply its feature file for these documents")
        if kind in ("cv", "tfidf"):
            counts = count_matrix(corpus, self.vocab)
            return counts if kind == "cv" else tfidf_matrix(counts, self.vocab)
        if self.keep is not None:
            corpus = [[t for t in doc if t in self.keep] for doc in corpus]
        return embed_corpus(corpus, self.table)

    def to_dict(self):
        d = {"spec": asdict(self.spec)}
        if self.vocab is not None:
            d["vocab"] = self.vocab.to_dict()
        if self.keep is not None:
            d["keep"] = sorted(self.keep)
        return d

    @classmethod
    def from_dict(cls, d, base_dir=None):
        vocab = Vocabulary.from_dict(d["vocab"]) if "vocab" in d else None
        keep = frozenset(d["keep"]) if "keep" in d else None
        return cls(ViewSpec(**d["spec"]), vocab, keep, base_dir)


class TextPipeline:
    """Preprocessing plus every view's extractor, in configured order."""

    def __init__(self, extractors, options=None, lexicons=None):
        self.extractors = list(extractors)
        self.options = options or PreprocessOptions()
        self.lexicons = lexicons or load_lexicons()

    @property
    def view_names(self):
        return [e.name for e in self.extractors]

    def tokenize(self, texts):
        return [preprocess(t, self.options, self.lexicons) for t in texts]

    def transform(self, texts, precomputed=None):
        """View matrices for new texts.

        ``precomputed`` maps precomputed view names to CSV paths covering
        exactly these texts.
        """
        precomputed = precomputed or {}
        corpus = None
        out = []
        for e in self.extractors:
            if e.spec.kind == "precomputed":
                if e.name not in precomputed:
                    raise IntegrityError(f"view {e.name!r} is precomputed; "
                                         "no feature file supplied for the query texts")
                out.append(load_precomputed_view(precomputed[e.name], len(texts), e.name))
                continue
            if corpus is None:
                corpus = self.tokenize(texts)
            out.append(ViewMatrix(e.name, e.transform(corpus), "fitted"))
        return out

    def to_dict(self):
        return {"options": asdict(self.options), "lexicon_version": self.lexicons.version,
                "views": [e.to_dict() for e in self.extractors]}

    @classmethod
    def from_dict(cls, d, base_dir=None):
        return cls([ViewExtractor.from_dict(v, base_dir) for v in d["views"]],
                   PreprocessOptions(**d["options"]))


def fit_views(texts, train_idx, specs, options=None, lexicons=None, base_dir=None):
    """Fit every view on ``texts[train_idx]`` and transform all ``texts``.

    Returns
    -------
    pipeline : TextPipeline
    views : list of ViewMatrix
        One matrix per spec, with a row for every text.
    """
    check_specs(specs, base_dir)
    if len(texts) == 0:
        raise IntegrityError("dataset has no documents")
    options = options or PreprocessOptions()
    lexicons = lexicons or load_lexicons()
    corpus = [preprocess(t, options, lexicons) for t in texts]
    train_corpus = [corpus[i] for i in train_idx]
    min_count = 2 if options.remove_hapax else 1
    keep = None
    if options.remove_hapax:
        keep = frozenset(t for t, c in term_counts(train_corpus).items() if c >= 2)

    extractors, views = [], []
    for s in specs:
        if s.kind == "precomputed":
            ex = ViewExtractor(s, base_dir=base_dir)
            view = load_precomputed_view(_resolve(s.path, base_dir), len(texts), s.name)
        else:
            if s.kind in ("cv", "tfidf"):
                vocab = fit_vocab(train_corpus, min_count=min_count,
                                  max_features=s.max_features)
                ex = ViewExtractor(s, vocab=vocab, base_dir=base_dir)
            else:
                ex = ViewExtractor(s, keep=keep, base_dir=base_dir)
            view = ViewMatrix(s.name, ex.transform(corpus), "fitted")
        extractors.append(ex)
        views.append(view)
    return TextPipeline(extractors, options, lexicons), views

