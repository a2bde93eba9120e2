import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvfuse.errors import ConfigError, IntegrityError, ParseError
from mvfuse.textviews import (
    EmptyTableError, EmptyVocabularyError, PreprocessOptions, ViewMatrix, ViewSpec,
    Vocabulary, count_vectorize, embed_average, fit_views, fit_vocab, lemmatize,
    load_embedding_table, load_lexicons, load_precomputed_view, preprocess,
    tfidf_transform,
)


class TestPreprocess:
    def test_empty(self):
        assert preprocess("") == []

    def test_pipeline_order(self):
        assert preprocess("Visit http://a.b/c The CATS running") == ["cat", "run"]

    def test_digits_survive(self):
        assert preprocess("2024 Election!!!") == ["2024", "election"]

    def test_www_urls(self):
        assert preprocess("see www.example.org/path now") == ["see"]

    def test_flags_can_be_disabled(self):
        opts = PreprocessOptions(remove_stopwords=False, lemmatize=False)
        assert preprocess("The CATS", opts) == ["the", "cats"]

    def test_lemmas_are_fixed_points(self):
        lex = load_lexicons()
        for form in list(lex.lemmas) + ["stories", "boxes", "stopped", "dresses"]:
            once = lemmatize(form, lex)
            assert lemmatize(once, lex) == once

    @settings(max_examples=300, deadline=None)
    @given(st.text())
    def test_idempotent(self, text):
        once = preprocess(text)
        assert preprocess(" ".join(once)) == once

    def test_custom_lexicons(self, tmp_path):
        sw = tmp_path / "sw.txt"
        sw.write_text("cat\n")
        lm = tmp_path / "lm.tsv"
        lm.write_text("geese\tgoose\n")
        lex = load_lexicons(sw, lm)
        assert preprocess("the cat geese", lexicons=lex) == ["the", "goose"]


class TestVocabulary:
    def test_hapax_removed(self):
        assert fit_vocab([["a", "b"], ["a"]]).terms == ["a"]

    def test_repeat_within_one_doc_counts(self):
        v = fit_vocab([["a", "a"]])
        assert v.terms == ["a"]
        assert v.doc_freq.tolist() == [1]

    def test_all_hapax(self):
        with pytest.raises(EmptyVocabularyError):
            fit_vocab([["x"], ["y"]])

    def test_ordering(self):
        corpus = [["b", "c", "a"], ["c", "b"], ["a", "d", "d"], ["c"]]
        v = fit_vocab(corpus)
        # df: c=3, a=2, b=2, d=1 (d kept: two occurrences)
        assert v.terms == ["c", "a", "b", "d"]

    def test_ordering_is_input_order_independent(self):
        rng = np.random.default_rng(0)
        corpus = [list(rng.choice(list("abcdefgh"), size=5)) for _ in range(30)]
        shuffled = [corpus[i] for i in rng.permutation(len(corpus))]
        assert fit_vocab(corpus).terms == fit_vocab(shuffled).terms

    def test_max_features(self):
        corpus = [["a", "b"], ["a", "b"], ["a", "c", "c"]]
        assert fit_vocab(corpus, max_features=2).terms == ["a", "b"]


class TestCounts:
    vocab = Vocabulary(["a", "b"], [1, 1], 1)

    def test_direct_count(self):
        np.testing.assert_array_equal(count_vectorize([["a", "a", "b"]], self.vocab).matrix,
                                      [[2.0, 1.0]])

    def test_oov_ignored(self):
        np.testing.assert_array_equal(count_vectorize([["z", "a"]], self.vocab).matrix,
                                      [[1.0, 0.0]])
        np.testing.assert_array_equal(count_vectorize([["z"]], self.vocab).matrix,
                                      [[0.0, 0.0]])

    def test_row_sum_equals_in_vocab_tokens(self):
        rng = np.random.default_rng(1)
        corpus = [list(rng.choice(list("abcdxyz"), size=int(rng.integers(0, 12))))
                  for _ in range(50)]
        v = Vocabulary(list("abcd"), [1] * 4, 50)
        m = count_vectorize(corpus, v).matrix
        assert m.sum(axis=1).tolist() == [sum(t in "abcd" for t in d) for d in corpus]


class TestTfidf:
    def test_hand_computed(self):
        corpus = [["a", "b"], ["a"]]
        v = Vocabulary.from_terms(["a", "b"], corpus)
        got = tfidf_transform(count_vectorize(corpus, v), v).matrix
        idf_b = math.log(3 / 2) + 1
        norm = math.sqrt(1 + idf_b ** 2)
        expected = np.array([[1 / norm, idf_b / norm], [1.0, 0.0]])
        np.testing.assert_allclose(got, expected, atol=1e-9, rtol=0)

    def test_term_everywhere_has_unit_idf(self):
        corpus = [["a"], ["a", "b"], ["a"]]
        v = Vocabulary.from_terms(["a", "b"], corpus)
        from mvfuse.textviews import idf
        assert idf(v)[0] == 1.0

    def test_zero_row(self):
        v = Vocabulary(["a"], [1], 1)
        counts = ViewMatrix("cv", [[0.0], [3.0]])
        np.testing.assert_array_equal(tfidf_transform(counts, v).matrix, [[0.0], [1.0]])

    def test_norms_zero_or_one(self):
        rng = np.random.default_rng(2)
        corpus = [list(rng.choice(list("abcdef"), size=int(rng.integers(0, 6))))
                  for _ in range(40)]
        v = Vocabulary.from_terms(list("abcd"), corpus)
        m = tfidf_transform(count_vectorize(corpus, v), v).matrix
        norms = np.linalg.norm(m, axis=1)
        assert np.all((norms == 0) | np.isclose(norms, 1.0, atol=1e-12))


class TestEmbeddings:
    def test_parse(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("a 1.0 2.0\nb 3.0 4.0")
        t = load_embedding_table(p)
        assert t.dim == 2 and len(t) == 2
        np.testing.assert_array_equal(t.vectors, [[1.0, 2.0], [3.0, 4.0]])

    def test_crlf_and_duplicates(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_bytes(b"a 1 2\r\na 9 9\r\nb 3 4\r\n")
        t = load_embedding_table(p)
        assert t.tokens == ["a", "b"]
        np.testing.assert_array_equal(t.vectors[0], [1.0, 2.0])

    def test_word2vec_header_skipped(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("2 3\na 1 2 3\nb 4 5 6\n")
        assert load_embedding_table(p).tokens == ["a", "b"]

    def test_inconsistent_dim(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("a 1 2 3\nb 1 2\n")
        with pytest.raises(ParseError) as err:
            load_embedding_table(p)
        assert err.value.line == 2

    def test_bad_float(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("a 1 x\n")
        with pytest.raises(ParseError):
            load_embedding_table(p)

    def test_expected_dim(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("a 1 2\n")
        with pytest.raises(ParseError):
            load_embedding_table(p, expected_dim=3)

    def test_empty(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("")
        with pytest.raises(EmptyTableError):
            load_embedding_table(p)

    def test_average(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("x 1 3\ny 3 5\n")
        t = load_embedding_table(p)
        np.testing.assert_array_equal(embed_average([], t), [0.0, 0.0])
        np.testing.assert_array_equal(embed_average(["x"], t), [1.0, 3.0])
        np.testing.assert_array_equal(embed_average(["x", "y", "oov"], t), [2.0, 4.0])

    def test_average_norm_bounded(self, tmp_path):
        rng = np.random.default_rng(3)
        vecs = rng.normal(size=(10, 4))
        p = tmp_path / "e.txt"
        p.write_text("\n".join(f"t{i} " + " ".join(repr(float(v)) for v in row)
                               for i, row in enumerate(vecs)))
        t = load_embedding_table(p)
        bound = np.linalg.norm(vecs, axis=1).max()
        for _ in range(50):
            toks = [f"t{i}" for i in rng.integers(0, 12, size=5)]
            assert np.linalg.norm(embed_average(toks, t)) <= bound + 1e-12


class TestPrecomputed:
    @staticmethod
    def write(path, ids, d=2):
        lines = ["doc_id," + ",".join(f"f{j}" for j in range(d))]
        lines += [f"{i}," + ",".join(str(i + j / 10) for j in range(d)) for i in ids]
        path.write_text("\n".join(lines) + "\n")
        return path

    def test_rows_placed_by_id(self, tmp_path):
        v = load_precomputed_view(self.write(tmp_path / "p.csv", [2, 0, 1]), 3)
        assert v.matrix.shape == (3, 2)
        np.testing.assert_allclose(v.matrix[:, 0], [0, 1, 2])
        assert v.provenance == "loaded"

    def test_duplicate(self, tmp_path):
        with pytest.raises(IntegrityError, match="duplicate"):
            load_precomputed_view(self.write(tmp_path / "p.csv", [0, 0, 2]), 3)

    def test_missing(self, tmp_path):
        with pytest.raises(IntegrityError, match=r"missing doc_id values \[2\]"):
            load_precomputed_view(self.write(tmp_path / "p.csv", [0, 1]), 3)

    def test_bad_header(self, tmp_path):
        p = tmp_path / "p.csv"
        p.write_text("id,a\n0,1\n")
        with pytest.raises(ParseError):
            load_precomputed_view(p, 1)


class TestFitViews:
    texts = ["cats run fast", "dogs run slow", "cats and dogs", "slow cats sleep"]

    def test_fit_on_train_only(self):
        pipe, views = fit_views(self.texts, [0, 1], [ViewSpec("cv"), ViewSpec("tfidf")])
        assert [v.name for v in views] == ["cv", "tfidf"]
        assert views[0].n_rows == 4
        # only "run" occurs twice in the first two documents
        assert pipe.extractors[0].vocab.terms == ["run"]

    def test_transform_matches_fit(self, tmp_path):
        emb = tmp_path / "e.txt"
        emb.write_text("cat 1 0\ndog 0 1\nrun 1 1\n")
        specs = [ViewSpec("cv"), ViewSpec("w2v", path=str(emb))]
        pipe, views = fit_views(self.texts, [0, 1, 2, 3], specs)
        again = pipe.transform(self.texts)
        for a, b in zip(views, again):
            np.testing.assert_array_equal(a.matrix, b.matrix)

    def test_roundtrip_dict(self):
        pipe, views = fit_views(self.texts, [0, 1, 2, 3], [ViewSpec("tfidf")])
        from mvfuse.textviews import TextPipeline
        clone = TextPipeline.from_dict(pipe.to_dict())
        np.testing.assert_array_equal(clone.transform(self.texts)[0].matrix, views[0].matrix)

    def test_duplicate_names(self):
        with pytest.raises(ConfigError):
            fit_views(self.texts, [0], [ViewSpec("cv"), ViewSpec("cv")])

    def test_missing_embedding_file(self):
        with pytest.raises(ConfigError):
            fit_views(self.texts, [0], [ViewSpec("glove", path="/nonexistent.txt")])

    def test_empty_dataset(self):
        with pytest.raises(IntegrityError):
            fit_views([], [], [ViewSpec("cv")])
