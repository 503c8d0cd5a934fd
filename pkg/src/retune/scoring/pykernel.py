"""Pure-Python scoring kernel; the reference the compiled kernel must match bit-for-bit.

The evaluation order is fixed: query words outer (caller passes them sorted),
sections inner in folder/name/body order, and each word's section sum is
multiplied by the word weight before folding into the document score. The
compiled kernel replays the identical float operation sequence, so both
kernels return bit-equal scores.
"""

import numpy as np


def score_postings(n_docs, word_weights, section_factors, section_enabled, offsets, ordinals, counts):
    """Accumulate document scores and per-word hit counts from flattened postings.

    Segment j*3+t of ordinals/counts (bounds in offsets) holds the postings of
    query word j in section t. section_factors[t] is flag*weight for section t;
    section_enabled[t] is the bare flag, which alone decides hit counting.

    Returns (scores, hits): scores[o] is the document score of ordinal o, and
    hits[o] the number of distinct query words appearing in at least one
    enabled section of that document.
    """
    scores = np.zeros(n_docs, dtype=np.float64)
    hits = np.zeros(n_docs, dtype=np.int64)
    wordbuf = np.zeros(n_docs, dtype=np.float64)
    seen = np.zeros(n_docs, dtype=np.int64)
    touched = np.empty(n_docs, dtype=np.int64)

    for j in range(len(word_weights)):
        weight = word_weights[j]
        n_touched = 0
        for t in range(3):
            if not section_enabled[t]:
                continue
            factor = section_factors[t]
            for i in range(offsets[j * 3 + t], offsets[j * 3 + t + 1]):
                o = ordinals[i]
                if seen[o] != j + 1:
                    seen[o] = j + 1
                    hits[o] += 1
                if factor != 0.0:
                    # factor > 0 and count >= 1, so a touched slot is never 0.0
                    if wordbuf[o] == 0.0:
                        touched[n_touched] = o
                        n_touched += 1
                    wordbuf[o] += factor * counts[i]
        for i in range(n_touched):
            o = touched[i]
            scores[o] += weight * wordbuf[o]
            wordbuf[o] = 0.0

    return scores, hits
