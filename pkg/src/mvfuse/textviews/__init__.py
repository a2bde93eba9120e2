"""Document preprocessing and the per-view feature matrices."""

from .embeddings import EmbeddingTable, EmptyTableError, embed_average, load_embedding_table
from .pipeline import TextPipeline, ViewExtractor, ViewSpec, check_specs, fit_views
from .precomputed import load_precomputed_view
from .preprocess import Lexicons, PreprocessOptions, lemmatize, load_lexicons, preprocess
from .views import ViewMatrix
from .vocab import (
    EmptyVocabularyError, Vocabulary, count_vectorize, fit_vocab, idf, tfidf_transform,
)

__all__ = [
    "EmbeddingTable", "EmptyTableError", "EmptyVocabularyError", "Lexicons",
    "PreprocessOptions", "TextPipeline", "ViewExtractor", "ViewMatrix", "ViewSpec",
    "Vocabulary", "check_specs", "count_vectorize", "embed_average", "fit_views",
    "fit_vocab", "idf", "lemmatize", "load_embedding_table", "load_lexicons",
    "load_precomputed_view", "preprocess", "tfidf_transform",
]
