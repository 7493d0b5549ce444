"""Text -> terms -> vectors -> the three classifiers, as one object."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import c45, mlp, nb
from .corpus import CLASS_ORDER, Corpus, CorpusSplit, Label
from .features import (
    FeatureVector,
    LabeledVector,
    Representation,
    Vocabulary,
    build_vocabulary,
    densify,
    vectorize,
)
from .preprocess import Preprocessor

MODEL_KINDS = ("nb", "c45", "mlp")


@dataclass(frozen=True)
class FeaturePipeline:
    """Everything needed to turn raw text into a model input."""

    preprocessor: Preprocessor
    vocabulary: Vocabulary
    representation: Representation = Representation.COUNT

    def terms(self, text: str) -> list[str]:
        return self.preprocessor(text)

    def vector(self, text: str) -> FeatureVector:
        return vectorize(self.terms(text), self.vocabulary, self.representation)

    def vectors(self, texts: Sequence[str]) -> list[FeatureVector]:
        return [self.vector(t) for t in texts]


def build_feature_pipeline(
    train: Corpus,
    preprocessor: Preprocessor,
    min_df: int = 2,
    max_size: int | None = 10000,
    representation=Representation.COUNT,
) -> FeaturePipeline:
    # the vocabulary may only ever see the training side of a split
    assert train.tag == "train", f"vocabulary built from a {train.tag or 'untagged'} corpus"
    docs = [preprocessor(ex.text) for ex in train]
    vocab = build_vocabulary(docs, min_df=min_df, max_size=max_size, provenance=train.tag)
    return FeaturePipeline(preprocessor, vocab, Representation(representation))


@dataclass(frozen=True, eq=False)
class TrainedModel:
    kind: str
    pipeline: FeaturePipeline
    model: object

    def predict_vectors(self, vectors: Sequence[FeatureVector]) -> list[Label]:
        if self.kind == "nb":
            return nb.predict_batch(self.model, vectors)
        if self.kind == "c45":
            return [c45.predict(self.model, v) for v in vectors]
        X = densify(vectors, len(self.pipeline.vocabulary))
        return [Label.SPAM if p else Label.HAM for p in mlp.predict_batch(self.model, X)]

    def predict(self, texts: Sequence[str]) -> list[Label]:
        return self.predict_vectors(self.pipeline.vectors(texts))

    def score(self, text: str) -> tuple[Label, dict]:
        """Label plus the model's class probabilities for one text."""
        v = self.pipeline.vector(text)
        if self.kind == "nb":
            post = nb.posterior(self.model, v)
            return nb.predict(self.model, v), dict(zip(self.model.class_order, map(float, post)))
        if self.kind == "c45":
            return c45.predict(self.model, v), c45.leaf_distribution(self.model, v)
        p = mlp.forward(self.model, v.dense(len(self.pipeline.vocabulary)))
        label = Label.SPAM if p >= 0.5 else Label.HAM
        return label, {Label.HAM: 1.0 - p, Label.SPAM: p}


@dataclass(frozen=True)
class ModelSettings:
    nb_alpha: float = 1.0
    c45: c45.C45Config = c45.C45Config()
    mlp_hidden: tuple = (64,)
    mlp_activation: str = "sigmoid"
    mlp_learning_rate: float = 0.05
    mlp_epochs: int = 30
    mlp_batch_size: int = 32
    mlp_seed: int = 0


def labeled_vectors(pipeline: FeaturePipeline, corpus: Corpus) -> list[LabeledVector]:
    return [LabeledVector(pipeline.vector(ex.text), ex.label) for ex in corpus]


def fit_model(kind: str, pipeline: FeaturePipeline, data: list[LabeledVector], settings: ModelSettings) -> TrainedModel:
    V = len(pipeline.vocabulary)
    if kind == "nb":
        model = nb.fit(data, V, settings.nb_alpha, CLASS_ORDER)
    elif kind == "c45":
        model = c45.build(data, settings.c45, CLASS_ORDER, V)
    elif kind == "mlp":
        config = mlp.MLPConfig(
            input_dim=V,
            hidden_dims=settings.mlp_hidden,
            hidden_activation=settings.mlp_activation,
            learning_rate=settings.mlp_learning_rate,
            epochs=settings.mlp_epochs,
            batch_size=settings.mlp_batch_size,
            seed=settings.mlp_seed,
        )
        X = densify([d.vector for d in data], V)
        y = np.array([1.0 if d.label == Label.SPAM else 0.0 for d in data])
        model, _ = mlp.train(X, y, config)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    return TrainedModel(kind, pipeline, model)


def train_models(split: CorpusSplit, kinds: Sequence[str], preprocessor: Preprocessor,
                 settings: ModelSettings = ModelSettings(), min_df: int = 2,
                 max_size: int | None = 10000, representation=Representation.COUNT) -> dict:
    pipeline = build_feature_pipeline(split.train, preprocessor, min_df, max_size, representation)
    data = labeled_vectors(pipeline, split.train)
    return {kind: fit_model(kind, pipeline, data, settings) for kind in kinds}
