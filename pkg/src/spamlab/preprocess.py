"""Rule-based text preprocessing: normalise, tokenise, annotate, filter.

The pipeline mirrors a TEXT / LEMMA / STOP token table: every token keeps
its surface form, a lemma, and stop/numeric/punctuation flags, and
``extract_terms`` decides which of them become features.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, asdict
from functools import lru_cache
from importlib import resources
from pathlib import Path

_WS = re.compile(r"\s+")
# digit runs (with interior . or , between digits) | words with interior
# apostrophes/hyphens | any other single non-space codepoint
_TOKEN = re.compile(
    r"\d+(?:[.,]\d+)*"
    r"|[^\W\d_]+(?:['’\-][^\W\d_]+)*"
    r"|\S"
)
_NUMERIC = re.compile(r"[+\-]?\d+(?:[.,]\d+)*")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    is_stop: bool = False
    is_numeric: bool = False
    is_punct: bool = False


@dataclass(frozen=True)
class TokenizedDoc:
    tokens: tuple[Token, ...]
    source_length: int = 0

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class PreprocessConfig:
    lowercase: bool = True
    remove_stopwords: bool = True
    remove_numbers: bool = True
    remove_punct: bool = True
    use_lemmas: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class LemmaRules:
    exceptions: dict
    suffix_rules: tuple  # (suffix, replacement, min_stem_length), in priority order

    @classmethod
    def parse(cls, text: str) -> "LemmaRules":
        exceptions = {}
        rules = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.rstrip("\r\n").split("\t")
            if fields[0] == "exception" and len(fields) == 3:
                exceptions[fields[1]] = fields[2]
            elif fields[0] == "rule" and len(fields) == 4:
                rules.append((fields[1], fields[2], int(fields[3])))
            else:
                raise ValueError(f"lemma rules line {lineno}: cannot parse {line!r}")
        return cls(exceptions, tuple(rules))

    @classmethod
    def load(cls, path: str | Path) -> "LemmaRules":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def dumps(self) -> str:
        lines = [f"exception\t{s}\t{l}" for s, l in sorted(self.exceptions.items())]
        lines += [f"rule\t{s}\t{r}\t{m}" for s, r, m in self.suffix_rules]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StopwordList:
    words: frozenset

    def __post_init__(self):
        bad = [w for w in self.words if w != w.lower() or not w or any(c.isspace() for c in w)]
        if bad:
            raise ValueError(f"stop words must be lowercase without whitespace: {sorted(bad)[:5]}")

    @classmethod
    def parse(cls, text: str) -> "StopwordList":
        words = set()
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                words.add(line)
        return cls(frozenset(words))

    @classmethod
    def load(cls, path: str | Path) -> "StopwordList":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def dumps(self) -> str:
        return "".join(w + "\n" for w in sorted(self.words))

    def __contains__(self, word):
        return word in self.words


def _data_text(name: str) -> str:
    return resources.files("spamlab.data").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def default_stopwords() -> StopwordList:
    return StopwordList.parse(_data_text("stopwords.txt"))


@lru_cache(maxsize=None)
def default_lemma_rules() -> LemmaRules:
    return LemmaRules.parse(_data_text("lemma_rules.tsv"))


def normalize(text: str) -> str:
    """NFC-compose and collapse whitespace. Case is left alone."""
    return _WS.sub(" ", unicodedata.normalize("NFC", text)).strip()


def tokenize(text: str) -> list[str]:
    """Split normalised text into word, number and single-symbol tokens.

    >>> tokenize("Win $1000 now!!!")
    ['Win', '$', '1000', 'now', '!', '!', '!']
    """
    return _TOKEN.findall(text)


def lemmatize(surface: str, rules: LemmaRules | None = None) -> str:
    if rules is None:
        rules = default_lemma_rules()
    hit = rules.exceptions.get(surface)
    if hit is not None:
        return hit
    for suffix, replacement, min_stem in rules.suffix_rules:
        if surface.endswith(suffix):
            stem = surface[: len(surface) - len(suffix)]
            if len(stem) >= min_stem:
                return stem + replacement
    return surface


def _is_punct(s: str) -> bool:
    # symbols ($, %, +) count as punctuation here
    return bool(s) and all(unicodedata.category(c)[0] in "PS" for c in s)


def annotate(
    surfaces: list[str],
    stopwords: StopwordList | None = None,
    rules: LemmaRules | None = None,
    config: PreprocessConfig | None = None,
) -> TokenizedDoc:
    stopwords = default_stopwords() if stopwords is None else stopwords
    rules = default_lemma_rules() if rules is None else rules
    tokens = []
    for s in surfaces:
        low = s.lower()
        punct = _is_punct(s)
        tokens.append(Token(
            surface=s,
            lemma=lemmatize(low, rules) or low,
            is_stop=low in stopwords,
            is_numeric=not punct and _NUMERIC.fullmatch(s) is not None,
            is_punct=punct,
        ))
    return TokenizedDoc(tuple(tokens), sum(len(s) for s in surfaces))


def extract_terms(doc: TokenizedDoc, config: PreprocessConfig | None = None) -> list[str]:
    config = config or PreprocessConfig()
    terms = []
    for tok in doc.tokens:
        if config.remove_stopwords and tok.is_stop:
            continue
        if config.remove_numbers and tok.is_numeric:
            continue
        if config.remove_punct and tok.is_punct:
            continue
        if config.use_lemmas:
            terms.append(tok.lemma)
        else:
            terms.append(tok.surface.lower() if config.lowercase else tok.surface)
    return terms


@dataclass(frozen=True)
class Preprocessor:
    """The full text -> terms pipeline with its tables bound."""

    config: PreprocessConfig = PreprocessConfig()
    stopwords: StopwordList = None
    rules: LemmaRules = None

    def __post_init__(self):
        if self.stopwords is None:
            object.__setattr__(self, "stopwords", default_stopwords())
        if self.rules is None:
            object.__setattr__(self, "rules", default_lemma_rules())

    def doc(self, text: str) -> TokenizedDoc:
        norm = normalize(text)
        doc = annotate(tokenize(norm), self.stopwords, self.rules, self.config)
        return TokenizedDoc(doc.tokens, len(norm))

    def __call__(self, text: str) -> list[str]:
        return extract_terms(self.doc(text), self.config)
