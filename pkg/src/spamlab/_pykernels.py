"""Pure-Python versions of the hot loops (fallback for ``_ckernels``).

Both backends evaluate every floating-point expression in the same order,
so they agree bit for bit, not just approximately.
"""

from math import log2

import numpy as np


def _entropy(counts, total):
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * log2(p)
    return h


def best_split_scan(colptr, rows, vals, labels, node_counts, min_leaf, gain_eps):
    """Scan a node-local CSC matrix for the best threshold split by gain ratio.

    Returns ``(feature, threshold, gain_ratio, gain)``; feature is -1 when
    no candidate has gain > gain_eps with both sides >= min_leaf.
    """
    colptr = colptr.tolist()
    rows = rows.tolist()
    vals = vals.tolist()
    labels = labels.tolist()
    node = [int(c) for c in node_counts]
    n_classes = len(node)
    n = sum(node)
    hp = _entropy(node, n)

    best_f, best_t, best_r, best_g = -1, 0.0, float("-inf"), 0.0
    for f in range(len(colptr) - 1):
        s, e = colptr[f], colptr[f + 1]
        if s == e:
            continue
        left = list(node)
        for k in range(s, e):
            left[labels[rows[k]]] -= 1
        n_left = n - (e - s)

        def consider(a, b, n_left):
            nonlocal best_f, best_t, best_r, best_g
            n_right = n - n_left
            if n_left < min_leaf or n_right < min_leaf:
                return
            right = [node[c] - left[c] for c in range(n_classes)]
            pl = n_left / n
            pr = n_right / n
            rem = pl * _entropy(left, n_left)
            rem += pr * _entropy(right, n_right)
            gain = hp - rem
            if not gain > gain_eps:
                return
            si = 0.0
            si -= pl * log2(pl)
            si -= pr * log2(pr)
            ratio = gain / si
            if ratio > best_r:
                t = 0.5 * (a + b)
                if t >= b:
                    t = a
                best_f, best_t, best_r, best_g = f, t, ratio, gain

        if n_left > 0:
            consider(0.0, vals[s], n_left)
        for k in range(s, e):
            left[labels[rows[k]]] += 1
            n_left += 1
            if k + 1 < e and vals[k + 1] != vals[k]:
                consider(vals[k], vals[k + 1], n_left)
    return best_f, best_t, best_r, best_g


def nb_scores(indptr, indices, values, log_priors, log_lik):
    """Per-row, per-class ``log_prior + sum(value * log_lik)`` over CSR rows."""
    n = len(indptr) - 1
    n_classes = len(log_priors)
    out = np.empty((n, n_classes))
    indptr = indptr.tolist()
    indices = indices.tolist()
    values = values.tolist()
    priors = [float(x) for x in log_priors]
    table = [row.tolist() for row in log_lik]
    for i in range(n):
        s, e = indptr[i], indptr[i + 1]
        for c in range(n_classes):
            ll = table[c]
            acc = 0.0
            for k in range(s, e):
                acc += values[k] * ll[indices[k]]
            out[i, c] = priors[c] + acc
    return out
