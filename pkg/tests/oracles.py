"""Independent reference implementations used to cross-check the package."""

import math


def ngram_list(sentences, n):
    out = []
    for s in sentences:
        for i in range(len(s) - n + 1):
            out.append(tuple(s[i:i + n]))
    return out


def one_to_one_matches(cand, ref):
    """Match candidate n-grams against reference n-grams, consuming each reference n-gram once."""
    pool = list(ref)
    hits = 0
    for g in cand:
        if g in pool:
            pool.remove(g)
            hits += 1
    return hits


def rouge_oracle(cand, ref, n):
    c, r = ngram_list(cand, n), ngram_list(ref, n)
    return one_to_one_matches(c, r) / len(r) if r else 0.0


def bleu_oracle(cand, ref, n):
    c, r = ngram_list(cand, n), ngram_list(ref, n)
    if not c:
        return 0.0
    lc, lr = sum(map(len, cand)), sum(map(len, ref))
    bp = 1.0 if lc > lr else math.exp(1 - lr / lc)
    return bp * one_to_one_matches(c, r) / len(c)


def open_overlap(a, b):
    """Do open intervals a=(s,e) and b=(s,e) share a point?  Probed at midpoints of the merged endpoints."""
    pts = sorted({a[0], a[1], b[0], b[1]})
    return any(a[0] < m < a[1] and b[0] < m < b[1] for m in ((x + y) / 2 for x, y in zip(pts, pts[1:])))


def prf_oracle(H, R, eps):
    def hits(xs, ys):
        return sum(any(open_overlap(x, (y[0] - eps, y[1] + eps)) for y in ys) for x in xs)

    p = hits(H, R) / len(H) if H else 0.0
    r = hits(R, H) / len(R) if R else 0.0
    f = 0.0 if p + r == 0 else 2 * p * r / (p + r)
    return p, r, f
