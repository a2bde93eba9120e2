"""Text normalisation: lowercase, URL and symbol stripping, stopwords, lemmas."""

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

_URL = re.compile(r"(?:[a-z][a-z0-9+.\-]*://|www\.)\S*")
# \w is "alphanumeric or underscore"; underscores are stripped too.
_NON_ALNUM = re.compile(r"[\W_]+")
_VOWELS = set("aeiouy")
_MIN_STEM = 3
_MAX_LEMMA_STEPS = 8


@dataclass(frozen=True)
class PreprocessOptions:
    lowercase: bool = True
    remove_urls: bool = True
    remove_special: bool = True
    remove_stopwords: bool = True
    lemmatize: bool = True
    remove_hapax: bool = True


@dataclass(frozen=True)
class Lexicons:
    stopwords: frozenset
    lemmas: dict
    version: str = "1"


def _data_lines(name):
    text = resources.files("mvfuse").joinpath("data", name).read_text("utf-8")
    return text.splitlines()


def _read_lines(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _version(lines):
    for line in lines:
        if line.startswith("# version:"):
            return line.split(":", 1)[1].strip()
    return "unversioned"


def parse_stopwords(lines):
    return frozenset(ln.strip() for ln in lines
                     if ln.strip() and not ln.startswith("#"))


def parse_lemmas(lines):
    table = {}
    for ln in lines:
        if not ln.strip() or ln.startswith("#"):
            continue
        form, lemma = ln.rstrip("\r").split("\t")
        table.setdefault(form, lemma)
    return table


@lru_cache(maxsize=None)
def _bundled():
    sw, lm = _data_lines("stopwords.txt"), _data_lines("lemmas.tsv")
    return Lexicons(parse_stopwords(sw), parse_lemmas(lm), _version(sw))


def load_lexicons(stopwords_path=None, lemmas_path=None):
    """Bundled lexicons, or user files in the same formats."""
    if stopwords_path is None and lemmas_path is None:
        return _bundled()
    base = _bundled()
    sw = parse_stopwords(_read_lines(stopwords_path)) if stopwords_path else base.stopwords
    lm = parse_lemmas(_read_lines(lemmas_path)) if lemmas_path else base.lemmas
    return Lexicons(sw, lm, "custom")


def _undouble(stem):
    if len(stem) > _MIN_STEM and stem[-1] == stem[-2] and stem[-1] not in "lsz":
        return stem[:-1]
    return stem


def _suffix_step(w):
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith(("xes", "ches", "shes")):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")) and len(w) > _MIN_STEM:
        return w[:-1]
    for suffix in ("ing", "ed"):
        if w.endswith(suffix) and not w.endswith("eed"):
            stem = w[: -len(suffix)]
            if len(stem) >= _MIN_STEM and _VOWELS & set(stem):
                return _undouble(stem)
    return w


def lemmatize(word, lexicons):
    """Reduce ``word`` to a fixed point of the lookup table and suffix rules.

    A step is rejected if it would yield a stopword or a stem shorter than
    three characters, so the result is stable under a second application.
    """
    table, stop = lexicons.lemmas, lexicons.stopwords
    w = word
    for _ in range(_MAX_LEMMA_STEPS):
        if w in table:
            nxt = table[w]
        elif w.isalpha():
            nxt = _suffix_step(w)
        else:
            nxt = w
        if nxt == w or not nxt or nxt in stop:
            break
        w = nxt
    return w


def preprocess(text, opts=None, lexicons=None):
    """Tokenise one document.

    Steps run in a fixed order: lowercase, URL removal, replacement of every
    non-alphanumeric character by a space, whitespace split, stopword removal,
    lemmatisation. Hapax removal is corpus-level and happens in ``fit_vocab``.
    """
    opts = opts or PreprocessOptions()
    lexicons = lexicons or load_lexicons()
    if opts.lowercase:
        text = text.lower()
    if opts.remove_urls:
        text = _URL.sub(" ", text)
    if opts.remove_special:
        text = _NON_ALNUM.sub(" ", text)
    tokens = text.split()
    if opts.remove_stopwords:
        tokens = [t for t in tokens if t not in lexicons.stopwords]
    if opts.lemmatize:
        tokens = [lemmatize(t, lexicons) for t in tokens]
    return tokens
