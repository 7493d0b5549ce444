"""C4.5 decision tree over numeric (bag-of-words) features.

Binary threshold splits chosen by gain ratio, recursive induction, and
pessimistic subtree-replacement pruning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log2, nan
from typing import Mapping, Sequence, Union

import numpy as np
from scipy.special import betaincinv

from . import kernels
from .errors import EmptyData, PartitionMismatch
from .features import FeatureVector, LabeledVector

# Gains at or below this are rounding noise (e.g. children with the
# parent's exact class proportions).
GAIN_EPS = 1e-12


def _as_counts(counts) -> list:
    if isinstance(counts, Mapping):
        return list(counts.values())
    return list(counts)


def entropy(counts) -> float:
    """Shannon entropy in bits of a class-count vector; 0 for empty counts."""
    counts = _as_counts(counts)
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * log2(p)
    return h


def info_gain(parent, children) -> float:
    parent = _as_counts(parent)
    children = [_as_counts(ch) for ch in children]
    summed = [sum(col) for col in zip(*children)] if children else []
    if summed != parent:
        raise PartitionMismatch(f"children sum to {summed}, parent has {parent}")
    n = sum(parent)
    rem = 0.0
    for ch in children:
        n_k = sum(ch)
        if n_k:
            rem += (n_k / n) * entropy(ch)
    return entropy(parent) - rem


def split_info(sizes) -> float:
    n = sum(sizes)
    if n <= 0:
        raise ValueError("split_info needs a positive total")
    s = 0.0
    for n_k in sizes:
        if n_k > 0:
            p = n_k / n
            s -= p * log2(p)
    return s


def gain_ratio(parent, children) -> float | None:
    """Information gain over split information; None for one-sided splits."""
    gain = info_gain(parent, children)
    si = split_info([sum(_as_counts(ch)) for ch in children])
    if si == 0:
        return None
    return gain / si


# -- tree types -----------------------------------------------------------

@dataclass(frozen=True)
class SplitCandidate:
    feature_index: int
    threshold: float
    gain_ratio: float = field(default=nan, compare=False)
    gain: float = field(default=nan, compare=False)


@dataclass(frozen=True)
class Leaf:
    label: object
    counts: tuple


@dataclass(frozen=True)
class Internal:
    split: SplitCandidate
    left: "TreeNode"   # value <= threshold
    right: "TreeNode"
    counts: tuple


TreeNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class C45Config:
    min_samples_leaf: int = 2
    max_depth: int | None = None
    prune: bool = True
    confidence: float = 0.25

    def __post_init__(self):
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if not 0 < self.confidence <= 0.5:
            raise ValueError("confidence must lie in (0, 0.5]")


@dataclass(frozen=True)
class C45Tree:
    root: TreeNode
    class_order: tuple
    n_features: int
    config: C45Config = C45Config()


# -- induction ------------------------------------------------------------

def _majority(counts, class_order) -> object:
    return class_order[int(np.argmax(counts))]


class _Columns:
    """Column-major view of the training set, entries sorted by value."""

    def __init__(self, data: Sequence[LabeledVector], class_order, n_features):
        pos = {c: i for i, c in enumerate(class_order)}
        self.labels = np.array([pos[d.label] for d in data], dtype=np.int32)
        rows, cols, vals = [], [], []
        for i, d in enumerate(data):
            for j, v in zip(d.vector.indices, d.vector.values):
                if v <= 0:
                    raise ValueError("feature values must be positive")
                if j >= n_features:
                    raise IndexError(f"feature index {j} >= {n_features}")
                rows.append(i)
                cols.append(j)
                vals.append(v)
        rows = np.array(rows, dtype=np.int64)
        cols = np.array(cols, dtype=np.int64)
        vals = np.array(vals, dtype=np.float64)
        order = np.lexsort((rows, vals, cols))
        self.rows, self.cols, self.vals = rows[order], cols[order], vals[order]
        self.n_features = n_features
        self.n_classes = len(class_order)

    def colptr(self, cols):
        ptr = np.zeros(self.n_features + 1, dtype=np.int64)
        np.cumsum(np.bincount(cols, minlength=self.n_features), out=ptr[1:])
        return ptr


def _scan(cols: _Columns, node_rows, ent, min_leaf):
    c_cols, c_rows, c_vals = ent
    counts = np.bincount(cols.labels[node_rows], minlength=cols.n_classes)
    f, t, r, g = kernels.best_split_scan(
        cols.colptr(c_cols), c_rows, c_vals, cols.labels, counts, min_leaf, GAIN_EPS
    )
    if f < 0:
        return None
    return SplitCandidate(int(f), float(t), float(r), float(g))


def best_split(data: Sequence[LabeledVector], min_samples_leaf: int = 1, class_order=None, n_features=None):
    """Best (feature, threshold) by gain ratio, or None if nothing qualifies.

    Candidates are midpoints between consecutive distinct values of a
    feature (absent entries count as 0). Only splits with positive gain and
    at least ``min_samples_leaf`` examples per side are eligible. Ties go
    to the lower feature index, then the lower threshold.
    """
    if len(data) < 2:
        return None
    class_order = _class_order(data, class_order)
    n_features = _n_features(data, n_features)
    cols = _Columns(data, class_order, n_features)
    return _scan(cols, np.arange(len(data)), (cols.cols, cols.rows, cols.vals), min_samples_leaf)


def _class_order(data, class_order):
    if class_order is None:
        class_order = sorted({d.label for d in data}, key=str)
    return tuple(class_order)


def _n_features(data, n_features):
    if n_features is None:
        n_features = 1 + max((d.vector.indices[-1] for d in data if d.vector.indices), default=-1)
    return max(int(n_features), 0)


def build(data: Sequence[LabeledVector], config: C45Config = C45Config(), class_order=None, n_features=None) -> C45Tree:
    if not data:
        raise EmptyData("cannot grow a tree from no examples")
    class_order = _class_order(data, class_order)
    n_features = _n_features(data, n_features)
    cols = _Columns(data, class_order, n_features)
    n_total = len(data)
    min_leaf = config.min_samples_leaf

    def grow(node_rows, ent, depth):
        counts = np.bincount(cols.labels[node_rows], minlength=cols.n_classes)
        tcounts = tuple(int(c) for c in counts)
        leaf = Leaf(_majority(counts, class_order), tcounts)
        if (
            np.count_nonzero(counts) <= 1
            or len(node_rows) < 2 * min_leaf
            or (config.max_depth is not None and depth >= config.max_depth)
        ):
            return leaf
        split = _scan(cols, node_rows, ent, min_leaf)
        if split is None:
            return leaf
        c_cols, c_rows, c_vals = ent
        in_col = c_cols == split.feature_index
        goes_right = np.zeros(n_total, dtype=bool)
        goes_right[c_rows[in_col & (c_vals > split.threshold)]] = True
        right_rows = node_rows[goes_right[node_rows]]
        left_rows = node_rows[~goes_right[node_rows]]
        ent_right = goes_right[c_rows]
        left = grow(left_rows, (c_cols[~ent_right], c_rows[~ent_right], c_vals[~ent_right]), depth + 1)
        right = grow(right_rows, (c_cols[ent_right], c_rows[ent_right], c_vals[ent_right]), depth + 1)
        return Internal(split, left, right, tcounts)

    root = grow(np.arange(n_total), (cols.cols, cols.rows, cols.vals), 0)
    if config.prune:
        root = prune(root, config.confidence, class_order)
    return C45Tree(root, class_order, n_features, config)


# -- pruning --------------------------------------------------------------

def error_upper_bound(errors: int, n: int, confidence: float) -> float:
    """Upper ``confidence`` limit on the error rate given ``errors`` in ``n``.

    The p with P(X <= errors; n, p) = confidence for X ~ Binomial(n, p).
    """
    if n <= 0:
        return 0.0
    if errors >= n:
        return 1.0
    return float(betaincinv(errors + 1, n - errors, 1.0 - confidence))


def pessimistic_errors(counts, confidence: float) -> float:
    n = sum(counts)
    e = n - max(counts) if n else 0
    return n * error_upper_bound(e, n, confidence)


def prune(node: TreeNode, confidence: float, class_order) -> TreeNode:
    """Bottom-up subtree replacement: a subtree becomes a leaf when the
    leaf's estimated errors do not exceed the subtree's."""

    def walk(node):
        if isinstance(node, Leaf):
            return node, pessimistic_errors(node.counts, confidence)
        left, el = walk(node.left)
        right, er = walk(node.right)
        as_leaf = pessimistic_errors(node.counts, confidence)
        if as_leaf <= el + er:
            return Leaf(_majority(node.counts, class_order), node.counts), as_leaf
        return Internal(node.split, left, right, node.counts), el + er

    return walk(node)[0]


# -- use ------------------------------------------------------------------

def _route(tree: C45Tree, vector: FeatureVector) -> Leaf:
    values = vector.entries
    node = tree.root
    while isinstance(node, Internal):
        if values.get(node.split.feature_index, 0.0) <= node.split.threshold:
            node = node.left
        else:
            node = node.right
    return node


def predict(tree: C45Tree, vector: FeatureVector):
    return _route(tree, vector).label


def leaf_distribution(tree: C45Tree, vector: FeatureVector) -> dict:
    leaf = _route(tree, vector)
    total = sum(leaf.counts)
    return {c: (n / total if total else 0.0) for c, n in zip(tree.class_order, leaf.counts)}


def count_nodes(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 1
    return 1 + count_nodes(node.left) + count_nodes(node.right)


def depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(depth(node.left), depth(node.right))


def render(tree: C45Tree, terms: Sequence[str] | None = None) -> str:
    """Indented text listing of the tree."""
    lines = []

    def name(j):
        return repr(terms[j]) if terms is not None else f"f{j}"

    def fmt_counts(counts):
        return ", ".join(f"{c}={n}" for c, n in zip(tree.class_order, counts))

    def walk(node, indent):
        pad = "  " * indent
        if isinstance(node, Leaf):
            lines.append(f"{pad}-> {node.label} [{fmt_counts(node.counts)}]")
            return
        f, t = node.split.feature_index, node.split.threshold
        lines.append(f"{pad}{name(f)} <= {t:g}:")
        walk(node.left, indent + 1)
        lines.append(f"{pad}{name(f)} > {t:g}:")
        walk(node.right, indent + 1)

    walk(tree.root, 0)
    return "\n".join(lines)
