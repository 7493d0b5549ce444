"""Multinomial Naive Bayes with additive (Laplace) smoothing, in log space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import IndexOutOfVocabulary, MissingClass, NonPositiveAlpha, EmptyData
from .features import FeatureVector, LabeledVector, to_csr


@dataclass(frozen=True, eq=False)
class NBModel:
    log_priors: np.ndarray       # (C,)
    log_likelihoods: np.ndarray  # (C, V)
    alpha: float
    vocab_size: int
    class_order: tuple

    def _check(self, vector: FeatureVector):
        if vector.indices and (vector.indices[-1] >= self.vocab_size or vector.indices[0] < 0):
            bad = max(vector.indices) if vector.indices[-1] >= self.vocab_size else min(vector.indices)
            raise IndexOutOfVocabulary(f"feature index {bad} outside vocabulary of size {self.vocab_size}")


def fit(data: Sequence[LabeledVector], vocab_size: int, alpha: float = 1.0, class_order=None) -> NBModel:
    """Estimate priors and smoothed per-class term distributions.

    ``log P(t|c) = ln((count(t, c) + alpha) / (total(c) + alpha * V))``
    """
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be > 0, got {alpha}")
    if not data:
        raise EmptyData("no training vectors")
    if class_order is None:
        class_order = tuple(sorted({d.label for d in data}, key=str))
    class_order = tuple(class_order)
    pos = {c: i for i, c in enumerate(class_order)}

    n_docs = np.zeros(len(class_order), dtype=np.int64)
    counts = np.zeros((len(class_order), vocab_size))
    for d in data:
        try:
            c = pos[d.label]
        except KeyError:
            raise ValueError(f"label {d.label!r} not in class_order {class_order}") from None
        n_docs[c] += 1
        if d.vector.indices:
            if d.vector.indices[-1] >= vocab_size:
                raise IndexOutOfVocabulary(f"feature index {d.vector.indices[-1]} >= {vocab_size}")
            counts[c, list(d.vector.indices)] += d.vector.values
    missing = [str(c) for c, k in zip(class_order, n_docs) if k == 0]
    if missing:
        raise MissingClass(f"no training examples for class(es): {', '.join(missing)}")

    log_priors = np.log(n_docs / n_docs.sum())
    totals = counts.sum(axis=1, keepdims=True)
    log_lik = np.log((counts + alpha) / (totals + alpha * vocab_size))
    return NBModel(log_priors, np.ascontiguousarray(log_lik), float(alpha), int(vocab_size), class_order)


def log_joint(model: NBModel, vector: FeatureVector) -> np.ndarray:
    """Unnormalised per-class log scores, in ``class_order``."""
    model._check(vector)
    scores = np.empty(len(model.class_order))
    for c in range(len(model.class_order)):
        ll = model.log_likelihoods[c]
        acc = 0.0
        for j, v in zip(vector.indices, vector.values):
            acc += v * float(ll[j])
        scores[c] = float(model.log_priors[c]) + acc
    return scores


def log_joint_batch(model: NBModel, vectors: Sequence[FeatureVector]) -> np.ndarray:
    for v in vectors:
        model._check(v)
    indptr, indices, values = to_csr(vectors)
    return kernels.nb_scores(indptr, indices, values, model.log_priors, model.log_likelihoods)


def normalize_log(scores: np.ndarray) -> np.ndarray:
    m = np.max(scores, axis=-1, keepdims=True)
    e = np.exp(scores - m)
    return e / e.sum(axis=-1, keepdims=True)


def posterior(model: NBModel, vector: FeatureVector) -> np.ndarray:
    return normalize_log(log_joint(model, vector))


def _argmax_first(scores: np.ndarray) -> int:
    # np.argmax returns the first maximal index, which is the class_order tie-break
    return int(np.argmax(scores))


def predict(model: NBModel, vector: FeatureVector):
    return model.class_order[_argmax_first(log_joint(model, vector))]


def predict_batch(model: NBModel, vectors: Sequence[FeatureVector]) -> list:
    scores = log_joint_batch(model, vectors)
    return [model.class_order[int(i)] for i in np.argmax(scores, axis=1)]
