"""Versioned, checksummed model files.

Layout (all integers little-endian)::

    offset  size  field
    0       8     magic b"SPAMLAB\\x00"
    8       4     format_version (uint32), currently 1
    12      4     kind tag, ASCII, NUL padded: b"nb\\0\\0" | b"c45\\0" | b"mlp\\0"
    16      8     payload length L (uint64)
    24      L     payload: UTF-8 JSON, sorted keys, no insignificant whitespace
    24+L    32    SHA-256 of bytes [0, 24+L)

Floats inside the payload are written with ``float.hex`` and arrays as
base64 of little-endian float64 bytes, so every number round-trips exactly.
"""

from __future__ import annotations

import base64
import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from . import c45, mlp, nb
from .corpus import Label
from .errors import CorruptPayload, VersionMismatch
from .features import Representation, Vocabulary
from .pipeline import FeaturePipeline, TrainedModel
from .preprocess import LemmaRules, PreprocessConfig, Preprocessor, StopwordList

MAGIC = b"SPAMLAB\x00"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sI4sQ")
_KINDS = {"nb": b"nb\0\0", "c45": b"c45\0", "mlp": b"mlp\0"}


def _f(x: float) -> str:
    return float(x).hex()


def _unf(s: str) -> float:
    return float.fromhex(s)


def _arr(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a, dtype="<f8")
    return {"shape": list(a.shape), "data": base64.b64encode(a.tobytes()).decode("ascii")}


def _unarr(d: dict) -> np.ndarray:
    raw = base64.b64decode(d["data"])
    return np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(d["shape"])


# -- payload pieces -------------------------------------------------------

def _pipeline_payload(p: FeaturePipeline) -> dict:
    v = p.vocabulary
    rules = p.preprocessor.rules
    return {
        "preprocess": p.preprocessor.config.to_dict(),
        "stopwords": sorted(p.preprocessor.stopwords.words),
        "lemma_rules": {
            "exceptions": sorted(rules.exceptions.items()),
            "rules": [list(r) for r in rules.suffix_rules],
        },
        "vocabulary": {
            "terms": list(v.terms),
            "doc_frequency": list(v.doc_frequency),
            "min_df": v.min_df,
            "max_size": v.max_size,
            "provenance": v.provenance,
        },
        "representation": p.representation.value,
    }


def _pipeline_from(d: dict) -> FeaturePipeline:
    rules = LemmaRules(
        {s: l for s, l in d["lemma_rules"]["exceptions"]},
        tuple((s, r, int(m)) for s, r, m in d["lemma_rules"]["rules"]),
    )
    pre = Preprocessor(PreprocessConfig(**d["preprocess"]), StopwordList(frozenset(d["stopwords"])), rules)
    v = d["vocabulary"]
    vocab = Vocabulary(tuple(v["terms"]), tuple(v["doc_frequency"]), v["min_df"], v["max_size"], v["provenance"])
    return FeaturePipeline(pre, vocab, Representation(d["representation"]))


def _nb_payload(m: nb.NBModel) -> dict:
    return {
        "class_order": [str(c) for c in m.class_order],
        "alpha": _f(m.alpha),
        "vocab_size": m.vocab_size,
        "log_priors": _arr(m.log_priors),
        "log_likelihoods": _arr(m.log_likelihoods),
    }


def _nb_from(d: dict) -> nb.NBModel:
    return nb.NBModel(
        _unarr(d["log_priors"]),
        np.ascontiguousarray(_unarr(d["log_likelihoods"])),
        _unf(d["alpha"]),
        d["vocab_size"],
        tuple(Label(c) for c in d["class_order"]),
    )


def _c45_payload(t: c45.C45Tree) -> dict:
    nodes = []

    def emit(node) -> int:
        i = len(nodes)
        if isinstance(node, c45.Leaf):
            nodes.append({"label": str(node.label), "counts": list(node.counts)})
            return i
        rec = {
            "feature": node.split.feature_index,
            "threshold": _f(node.split.threshold),
            "gain_ratio": _f(node.split.gain_ratio),
            "gain": _f(node.split.gain),
            "counts": list(node.counts),
        }
        nodes.append(rec)
        rec["left"] = emit(node.left)
        rec["right"] = emit(node.right)
        return i

    emit(t.root)
    cfg = t.config
    return {
        "class_order": [str(c) for c in t.class_order],
        "n_features": t.n_features,
        "config": {
            "min_samples_leaf": cfg.min_samples_leaf,
            "max_depth": cfg.max_depth,
            "prune": cfg.prune,
            "confidence": _f(cfg.confidence),
        },
        "nodes": nodes,
    }


def _c45_from(d: dict) -> c45.C45Tree:
    nodes = d["nodes"]

    def build(i):
        rec = nodes[i]
        if "label" in rec:
            return c45.Leaf(Label(rec["label"]), tuple(rec["counts"]))
        split = c45.SplitCandidate(rec["feature"], _unf(rec["threshold"]), _unf(rec["gain_ratio"]), _unf(rec["gain"]))
        return c45.Internal(split, build(rec["left"]), build(rec["right"]), tuple(rec["counts"]))

    cfg = d["config"]
    config = c45.C45Config(cfg["min_samples_leaf"], cfg["max_depth"], cfg["prune"], _unf(cfg["confidence"]))
    return c45.C45Tree(build(0), tuple(Label(c) for c in d["class_order"]), d["n_features"], config)


def _mlp_payload(m: mlp.MLPModel) -> dict:
    c = m.config
    return {
        "config": {
            "input_dim": c.input_dim,
            "hidden_dims": list(c.hidden_dims),
            "hidden_activation": c.hidden_activation.value,
            "learning_rate": _f(c.learning_rate),
            "epochs": c.epochs,
            "batch_size": c.batch_size,
            "seed": c.seed,
        },
        "weights": [_arr(W) for W in m.weights],
        "biases": [_arr(b) for b in m.biases],
    }


def _mlp_from(d: dict) -> mlp.MLPModel:
    c = dict(d["config"])
    c["learning_rate"] = _unf(c["learning_rate"])
    config = mlp.MLPConfig(**c)
    model = mlp.MLPModel([_unarr(w) for w in d["weights"]], [_unarr(b) for b in d["biases"]], config)
    expected = config.layer_sizes
    for i, W in enumerate(model.weights):
        if W.shape != (expected[i + 1], expected[i]) or model.biases[i].shape != (expected[i + 1],):
            raise CorruptPayload(f"layer {i} has shape {W.shape}, expected {(expected[i + 1], expected[i])}")
    return model


_ENCODE = {"nb": _nb_payload, "c45": _c45_payload, "mlp": _mlp_payload}
_DECODE = {"nb": _nb_from, "c45": _c45_from, "mlp": _mlp_from}
_TYPES = {"nb": nb.NBModel, "c45": c45.C45Tree, "mlp": mlp.MLPModel}


# -- file level -----------------------------------------------------------

def dumps_model(trained: TrainedModel) -> bytes:
    kind = trained.kind
    if kind not in _KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    if not isinstance(trained.model, _TYPES[kind]):
        raise TypeError(f"kind {kind!r} does not match payload {type(trained.model).__name__}")
    doc = {"kind": kind, "pipeline": _pipeline_payload(trained.pipeline), "model": _ENCODE[kind](trained.model)}
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
    head = _HEADER.pack(MAGIC, FORMAT_VERSION, _KINDS[kind], len(payload))
    body = head + payload
    return body + hashlib.sha256(body).digest()


def loads_model(data: bytes) -> TrainedModel:
    if len(data) < _HEADER.size:
        raise CorruptPayload("file shorter than the model header")
    magic, version, tag, length = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptPayload("not a spamlab model file (bad magic)")
    if version != FORMAT_VERSION:
        raise VersionMismatch(version, FORMAT_VERSION)
    end = _HEADER.size + length
    if len(data) != end + 32:
        raise CorruptPayload(f"expected {end + 32} bytes, found {len(data)} (truncated or padded)")
    if hashlib.sha256(data[:end]).digest() != data[end:]:
        raise CorruptPayload("checksum mismatch")
    kinds = {v: k for k, v in _KINDS.items()}
    if tag not in kinds:
        raise CorruptPayload(f"unknown kind tag {tag!r}")
    try:
        doc = json.loads(data[_HEADER.size:end].decode("utf-8"))
        if doc["kind"] != kinds[tag]:
            raise CorruptPayload(f"header kind {kinds[tag]} disagrees with payload kind {doc['kind']}")
        pipeline = _pipeline_from(doc["pipeline"])
        model = _DECODE[doc["kind"]](doc["model"])
    except CorruptPayload:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptPayload(f"malformed payload: {exc}") from None
    return TrainedModel(doc["kind"], pipeline, model)


def save_model(trained: TrainedModel, path: str | Path) -> None:
    Path(path).write_bytes(dumps_model(trained))


def load_model(path: str | Path) -> TrainedModel:
    return loads_model(Path(path).read_bytes())
