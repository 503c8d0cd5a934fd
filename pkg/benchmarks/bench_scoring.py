#!/usr/bin/env python3
"""Benchmark the compiled scoring kernel against the pure-Python fallback.

Builds a synthetic corpus, runs the same query batch through both kernels via
the full search path, verifies the outputs are identical, and reports
timings. Usage:

    python3 benchmarks/bench_scoring.py [--docs 20000] [--queries 200]
"""

import argparse
import random
import time

from retune import scoring
from retune.corpus import Document
from retune.index import build_index
from retune.ranker import Query, SectionWeights, search
from retune.store import WeightVocabulary


def synthetic_corpus(rng, n_docs, vocab_size=4000, body_len=60):
    # zipf-ish word draw so posting lists have realistic skew
    pool = [f"word{i}" for i in range(vocab_size)]
    weights = [1.0 / (i + 1) for i in range(vocab_size)]
    docs = []
    for doc_id in range(1, n_docs + 1):
        body = " ".join(rng.choices(pool, weights=weights, k=body_len))
        name = " ".join(rng.choices(pool, weights=weights, k=3))
        folder = rng.choice(pool[:50])
        docs.append(Document(doc_id=doc_id, folder_name=folder, doc_name=name, body=body))
    return docs, pool


def run_batch(idx, queries, weights, snap, kernel):
    t0 = time.perf_counter()
    outputs = [search(idx, q, weights, snap, kernel=kernel) for q in queries]
    return time.perf_counter() - t0, outputs


def run_kernel_only(idx, queries, weights, snap, kernel):
    """Time the accumulation loop alone on prebuilt flattened postings."""
    import numpy as np

    from retune.ranker import _flatten_postings

    prepared = []
    for q in queries:
        words = q.sorted_words()
        word_weights = np.asarray([snap.weight(w) for w in words])
        factors = np.asarray([float(f) * s for f, s in zip(q.flags.as_tuple(), weights.as_tuple())])
        enabled = np.asarray([int(f) for f in q.flags.as_tuple()], dtype=np.int64)
        prepared.append((word_weights, factors, enabled, *_flatten_postings(idx, words)))
    t0 = time.perf_counter()
    for word_weights, factors, enabled, offsets, ordinals, counts in prepared:
        kernel(idx.n_docs, word_weights, factors, enabled, offsets, ordinals, counts)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--docs", type=int, default=20000)
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    print(f"building corpus: {args.docs} docs ...", flush=True)
    docs, pool = synthetic_corpus(rng, args.docs)
    t0 = time.perf_counter()
    idx = build_index(docs)
    print(f"index built in {time.perf_counter() - t0:.2f}s")

    vocab = WeightVocabulary()
    vocab.apply_updates({w: rng.uniform(1.0, 5.0) for w in rng.sample(pool, k=200)})
    snap = vocab.snapshot()
    weights = SectionWeights()

    workloads = {
        # frequent words, long posting lists: the accumulation loop dominates
        "broad": [
            Query(words=frozenset(rng.sample(pool[:40], k=rng.randint(2, 4))))
            for _ in range(args.queries)
        ],
        # mid-frequency words, short posting lists: fixed per-search cost dominates
        "selective": [
            Query(words=frozenset(rng.sample(pool[100:1000], k=rng.randint(2, 4))))
            for _ in range(args.queries)
        ],
    }

    for workload, queries in workloads.items():
        results = {}
        for name in scoring.available_kernels():
            kernel = scoring.get_kernel(name)
            elapsed, outputs = run_batch(idx, queries, weights, snap, kernel)
            results[name] = (elapsed, outputs)
            print(
                f"{workload:>9} / {name:>8} kernel: {elapsed:.3f}s  "
                f"({args.queries / elapsed:.1f} queries/s)"
            )
        if "compiled" in results:
            py_time, py_out = results["python"]
            c_time, c_out = results["compiled"]
            assert py_out == c_out, "kernels disagree"
            print(f"{workload:>9}: outputs identical; end-to-end speedup {py_time / c_time:.1f}x")
            kernel_times = {
                name: run_kernel_only(idx, queries, weights, snap, scoring.get_kernel(name))
                for name in ("python", "compiled")
            }
            print(
                f"{workload:>9}: accumulation loop alone "
                f"{kernel_times['python']:.3f}s vs {kernel_times['compiled']:.3f}s "
                f"({kernel_times['python'] / kernel_times['compiled']:.0f}x)"
            )
        else:
            print("compiled kernel unavailable; ran pure-Python only")


if __name__ == "__main__":
    main()
