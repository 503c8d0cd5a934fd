# Compiled scoring kernel. Must stay operation-for-operation identical to
# pykernel.score_postings so both paths produce bit-equal scores.

import numpy as np

cimport numpy as cnp

cnp.import_array()


def score_postings(Py_ssize_t n_docs,
                   cnp.float64_t[::1] word_weights,
                   cnp.float64_t[::1] section_factors,
                   cnp.int64_t[::1] section_enabled,
                   cnp.int64_t[::1] offsets,
                   cnp.int64_t[::1] ordinals,
                   cnp.float64_t[::1] counts):
    scores_arr = np.zeros(n_docs, dtype=np.float64)
    hits_arr = np.zeros(n_docs, dtype=np.int64)
    wordbuf_arr = np.zeros(n_docs, dtype=np.float64)
    seen_arr = np.zeros(n_docs, dtype=np.int64)
    touched_arr = np.empty(n_docs, dtype=np.int64)

    cdef cnp.float64_t[::1] scores = scores_arr
    cdef cnp.int64_t[::1] hits = hits_arr
    cdef cnp.float64_t[::1] wordbuf = wordbuf_arr
    cdef cnp.int64_t[::1] seen = seen_arr
    cdef cnp.int64_t[::1] touched = touched_arr

    cdef Py_ssize_t k = word_weights.shape[0]
    cdef Py_ssize_t j, t, i, n_touched
    cdef cnp.int64_t o
    cdef double weight, factor

    for j in range(k):
        weight = word_weights[j]
        n_touched = 0
        for t in range(3):
            if section_enabled[t] == 0:
                continue
            factor = section_factors[t]
            for i in range(offsets[j * 3 + t], offsets[j * 3 + t + 1]):
                o = ordinals[i]
                if seen[o] != j + 1:
                    seen[o] = j + 1
                    hits[o] += 1
                if factor != 0.0:
                    if wordbuf[o] == 0.0:
                        touched[n_touched] = o
                        n_touched += 1
                    wordbuf[o] += factor * counts[i]
        for i in range(n_touched):
            o = touched[i]
            scores[o] += weight * wordbuf[o]
            wordbuf[o] = 0.0

    return scores_arr, hits_arr
