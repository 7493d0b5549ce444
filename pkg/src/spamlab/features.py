"""Train-frozen vocabulary and sparse bag-of-words vectors."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyVocabulary


class Representation(str, Enum):
    COUNT = "count"
    BINARY = "binary"
    TF = "tf"


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]          # index -> term, lexicographic
    doc_frequency: tuple[int, ...]  # aligned with terms
    min_df: int = 1
    max_size: int | None = None
    provenance: str = ""
    term_to_index: MappingProxyType = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "term_to_index", MappingProxyType({t: i for i, t in enumerate(self.terms)})
        )

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.term_to_index


def build_vocabulary(
    train_docs: Iterable[Sequence[str]],
    min_df: int = 2,
    max_size: int | None = 10000,
    provenance: str = "train",
) -> Vocabulary:
    """Keep terms seen in at least ``min_df`` documents.

    Over ``max_size`` the highest-df terms win, ties going to the
    lexicographically smaller term. Indices follow lexicographic order.
    """
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    if max_size is not None and max_size < 1:
        raise ValueError("max_size must be >= 1")
    df = Counter()
    for doc in train_docs:
        df.update(set(doc))
    kept = [t for t, n in df.items() if n >= min_df]
    if max_size is not None and len(kept) > max_size:
        kept.sort(key=lambda t: (-df[t], t))
        kept = kept[:max_size]
    if not kept:
        raise EmptyVocabulary(f"no term reaches document frequency {min_df}")
    kept.sort()
    return Vocabulary(tuple(kept), tuple(df[t] for t in kept), min_df, max_size, provenance)


@dataclass(frozen=True)
class FeatureVector:
    """Sparse vector: strictly increasing ``indices`` with positive ``values``."""

    indices: tuple[int, ...]
    values: tuple[float, ...]
    representation: Representation = Representation.COUNT

    @property
    def entries(self) -> dict:
        return dict(zip(self.indices, self.values))

    def __len__(self):
        return len(self.indices)

    def dense(self, dim: int) -> np.ndarray:
        out = np.zeros(dim)
        if self.indices:
            out[list(self.indices)] = self.values
        return out


@dataclass(frozen=True)
class LabeledVector:
    vector: FeatureVector
    label: object


def vectorize(terms: Iterable[str], vocab: Vocabulary, representation=Representation.COUNT) -> FeatureVector:
    representation = Representation(representation)
    lookup = vocab.term_to_index
    counts = Counter(lookup[t] for t in terms if t in lookup)
    indices = tuple(sorted(counts))
    if representation is Representation.COUNT:
        values = tuple(float(counts[i]) for i in indices)
    elif representation is Representation.BINARY:
        values = (1.0,) * len(indices)
    else:
        total = sum(counts.values())
        values = tuple(counts[i] / total for i in indices)
    return FeatureVector(indices, values, representation)


def to_csr(vectors: Sequence[FeatureVector]):
    """Stack vectors into CSR arrays ``(indptr, indices, values)``."""
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        indptr[i + 1] = indptr[i] + len(v)
    indices = np.fromiter((j for v in vectors for j in v.indices), dtype=np.int64, count=int(indptr[-1]))
    values = np.fromiter((x for v in vectors for x in v.values), dtype=np.float64, count=int(indptr[-1]))
    return indptr, indices, values


def densify(vectors: Sequence[FeatureVector], dim: int) -> np.ndarray:
    X = np.zeros((len(vectors), dim))
    for i, v in enumerate(vectors):
        if v.indices:
            X[i, list(v.indices)] = v.values
    return X
