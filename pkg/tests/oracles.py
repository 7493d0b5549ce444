"""Independent reference implementations used as test oracles.

Each one is written directly from the defining formula, without sharing
code with the package.
"""

import math
from fractions import Fraction


def nb_posterior(docs, labels, classes, vocab_size, query, alpha=1):
    """Bayes posterior computed with exact rationals, no logarithms.

    ``docs`` are lists of term indices, ``query`` a list of term indices.
    """
    alpha = Fraction(alpha)
    joint = []
    for c in classes:
        n_c = sum(1 for y in labels if y == c)
        prior = Fraction(n_c, len(labels))
        counts = [0] * vocab_size
        for d, y in zip(docs, labels):
            if y == c:
                for t in d:
                    counts[t] += 1
        total = sum(counts)
        p = prior
        for t in query:
            p *= (counts[t] + alpha) / (total + alpha * vocab_size)
        joint.append(p)
    z = sum(joint)
    return [float(j / z) for j in joint]


def _h(counts):
    n = sum(counts)
    return -sum(c / n * math.log2(c / n) for c in counts if c)


def c45_best_split(X, y, min_leaf=1, tol=1e-9):
    """Exhaustive (feature, midpoint) search by gain ratio.

    ``X`` is a dense list of rows. Returns ``(feature, threshold, ratio)``
    or None. Ratios within ``tol`` of each other count as ties, resolved
    by lower feature then lower threshold.
    """
    classes = sorted(set(y))
    n = len(y)
    parent = [y.count(c) for c in classes]
    cands = []
    for f in range(len(X[0]) if X else 0):
        values = sorted({row[f] for row in X})
        for a, b in zip(values, values[1:]):
            t = (a + b) / 2
            left = [y[i] for i in range(n) if X[i][f] <= t]
            right = [y[i] for i in range(n) if X[i][f] > t]
            if len(left) < min_leaf or len(right) < min_leaf:
                continue
            lc = [left.count(c) for c in classes]
            rc = [right.count(c) for c in classes]
            gain = _h(parent) - len(left) / n * _h(lc) - len(right) / n * _h(rc)
            if gain <= 1e-12:
                continue
            si = _h([len(left), len(right)])
            cands.append((gain / si, f, t))
    if not cands:
        return None
    top = max(r for r, _, _ in cands)
    ties = sorted((f, t, r) for r, f, t in cands if r >= top - tol)
    return ties[0]


def binomial_upper(errors, n, confidence, iters=200):
    """p with P(X <= errors) = confidence for X ~ Bin(n, p), by bisection on the CDF."""
    def cdf(p):
        return sum(math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(errors + 1))

    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if cdf(mid) > confidence:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def recount(preds, truths, positive):
    tp = sum(1 for p, t in zip(preds, truths) if p == positive and t == positive)
    fp = sum(1 for p, t in zip(preds, truths) if p == positive and t != positive)
    tn = sum(1 for p, t in zip(preds, truths) if p != positive and t != positive)
    fn = sum(1 for p, t in zip(preds, truths) if p != positive and t == positive)
    return tp, fp, tn, fn


def nb_corpus_family(max_docs=5, max_terms=3, max_doc_len=2):
    """Every labelled corpus of 2..max_docs documents over 1..max_terms terms.

    Documents are multisets of at most ``max_doc_len`` term indices; each
    corpus contains both classes 0 and 1. Yields ``(V, docs, labels)``.
    """
    from itertools import combinations_with_replacement

    for V in range(1, max_terms + 1):
        doc_types = [d for k in range(max_doc_len + 1) for d in combinations_with_replacement(range(V), k)]
        labelled = [(d, y) for d in doc_types for y in (0, 1)]
        for n in range(2, max_docs + 1):
            for corpus in combinations_with_replacement(labelled, n):
                labels = [y for _, y in corpus]
                if 0 in labels and 1 in labels:
                    yield V, [list(d) for d, _ in corpus], labels
