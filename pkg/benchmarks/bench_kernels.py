"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Runs each kernel on the same inputs with both backends, checks that the
outputs are identical, and prints best-of-N wall times plus the speedup.
The inputs come from the bundled synthetic corpus so the shapes match a
real training run.
"""

import argparse
import time

import numpy as np

from spamlab import c45
from spamlab.config import bundled_corpus_path
from spamlab.corpus import CLASS_ORDER, SplitSpec, load_csv, stratified_split
from spamlab.features import to_csr
from spamlab.kernels import available_backends
from spamlab.nb import fit
from spamlab.pipeline import build_feature_pipeline, labeled_vectors
from spamlab.preprocess import Preprocessor


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def root_scan_args(data, n_features):
    cols = c45._Columns(data, CLASS_ORDER, n_features)
    counts = np.bincount(cols.labels, minlength=2)
    return (cols.colptr(cols.cols), cols.rows, cols.vals, cols.labels, counts, 2, c45.GAIN_EPS)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the python backend is available")

    corpus = load_csv(bundled_corpus_path())
    split = stratified_split(corpus, SplitSpec(0.75, 0))
    pipeline = build_feature_pipeline(split.train, Preprocessor())
    data = labeled_vectors(pipeline, split.train)
    V = len(pipeline.vocabulary)

    scan_args = root_scan_args(data, V)
    model = fit(data, V, class_order=CLASS_ORDER)
    test_vecs = [d.vector for d in labeled_vectors(pipeline, split.test)] * 20
    csr = to_csr(test_vecs)
    nb_args = (*csr, model.log_priors, model.log_likelihoods)

    print(f"corpus: {len(data)} training vectors, {V} features, {len(csr[1])} nonzeros")
    print(f"nb_scores input: {len(test_vecs)} rows\n")
    print(f"{'kernel':<16} {'backend':<8} {'best (ms)':>10} {'speedup':>8}")

    for kernel, kargs in (("best_split_scan", scan_args), ("nb_scores", nb_args)):
        results = {}
        for name in sorted(backends, reverse=True):  # python first
            fn = getattr(backends[name], kernel)
            results[name] = best_of(lambda: fn(*kargs), args.repeat)
        base = results["python"][0]
        outputs = [r[1] for r in results.values()]
        same = all(_equal(outputs[0], o) for o in outputs[1:])
        for name, (t, _) in results.items():
            print(f"{kernel:<16} {name:<8} {t * 1e3:>10.2f} {base / t:>7.1f}x")
        if not same:
            print(f"  WARNING: {kernel} outputs differ between backends")


def _equal(a, b):
    if isinstance(a, np.ndarray):
        return a.tobytes() == b.tobytes()
    return tuple(a) == tuple(b)


if __name__ == "__main__":
    main()
