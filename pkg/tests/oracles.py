"""Independent reference implementations used to cross-check the engine.

Everything here is deliberately written against the mathematical
definitions (direct DFT sums, dense Toeplitz solves, explicit cosine
transforms, brute-force probability products) rather than sharing code
with the package under test.
"""

import math
from collections import Counter

import numpy as np
from scipy.linalg import solve_toeplitz

# -- direct DFT --------------------------------------------------------------

_dft_matrix_cache: dict = {}


def direct_dft_magnitude(x: np.ndarray) -> np.ndarray:
    """|DFT| of the first n/2 bins via an explicit O(n^2) matrix product."""
    n = x.size
    m = _dft_matrix_cache.get(n)
    if m is None:
        k = np.arange(n)
        m = np.exp(-2j * np.pi * np.outer(k, k) / n)
        _dft_matrix_cache[n] = m
    return np.abs(m @ x)[: n // 2]


# -- dense linear prediction --------------------------------------------------

def toeplitz_lpc(x: np.ndarray, order: int) -> np.ndarray:
    """LPC via a dense Toeplitz solve of the autocorrelation normal equations."""
    x = np.asarray(x, dtype=np.float64)
    r = np.array([np.dot(x[: x.size - k], x[k:]) for k in range(order + 1)])
    return solve_toeplitz(r[:order], r[1: order + 1])


# -- reference MFCC ------------------------------------------------------------

def reference_mfcc(spec: np.ndarray, n_filters: int = 26, n_coeffs: int = 13,
                   sample_rate: int = 48_000) -> np.ndarray:
    """MFCC from first principles: scalar loops, explicit DCT-II cosine sum."""
    n_bins = len(spec)
    mel_max = 2595.0 * math.log10(1.0 + (sample_rate / 2.0) / 700.0)
    edges = [700.0 * (10.0 ** (mel_max * j / (n_filters + 1) / 2595.0) - 1.0)
             for j in range(n_filters + 2)]
    log_e = []
    for m in range(n_filters):
        lo, center, hi = edges[m], edges[m + 1], edges[m + 2]
        e = 0.0
        for b in range(n_bins):
            f = b * sample_rate / (2.0 * n_bins)
            if lo <= f <= center:
                w = (f - lo) / (center - lo)
            elif center < f <= hi:
                w = (hi - f) / (hi - center)
            else:
                w = 0.0
            e += w * float(spec[b]) ** 2
        log_e.append(math.log(max(e, 1e-10)))
    out = []
    for k in range(n_coeffs):
        s = sum(log_e[j] * math.cos(math.pi * k * (2 * j + 1) / (2 * n_filters))
                for j in range(n_filters))
        scale = math.sqrt(1.0 / n_filters) if k == 0 else math.sqrt(2.0 / n_filters)
        out.append(scale * s)
    return np.array(out)


# -- reference MDL discretization ----------------------------------------------

def _entropy(labels) -> float:
    n = len(labels)
    if n == 0:
        return 0.0
    return -sum((c / n) * math.log2(c / n) for c in Counter(labels).values())


def reference_discretize(values, labels) -> list:
    """Recursive entropy splitting with the MDL stop, exhaustive at each level.

    Every boundary candidate (midpoint between adjacent distinct values
    whose label sets differ) is evaluated; the gain-maximizing cut wins,
    with near-ties (1e-12) resolved toward the lowest cut.
    """
    pairs = sorted(zip(values, labels), key=lambda p: p[0])
    out: list = []
    _ref_split(pairs, out)
    return out


def _ref_split(pairs, out):
    n = len(pairs)
    # boundary candidates
    candidates = []
    i = 0
    blocks = []
    while i < n:
        j = i
        while j < n and pairs[j][0] == pairs[i][0]:
            j += 1
        blocks.append((pairs[i][0], frozenset(p[1] for p in pairs[i:j]), j))
        i = j
    for (v1, s1, e1), (v2, s2, _) in zip(blocks, blocks[1:]):
        if s1 != s2:
            candidates.append(((v1 + v2) / 2.0, e1))
    if not candidates:
        return

    labels = [p[1] for p in pairs]
    base = _entropy(labels)
    scored = []
    for cut, k in candidates:
        gain = base - (k / n) * _entropy(labels[:k]) - ((n - k) / n) * _entropy(labels[k:])
        scored.append((gain, cut, k))
    max_gain = max(g for g, _, _ in scored)
    gain, cut, k = next(t for t in scored if t[0] >= max_gain - 1e-12)

    left, right = labels[:k], labels[k:]
    classes = len(set(labels))
    delta = (math.log2(3 ** classes - 2) - classes * _entropy(labels)
             + len(set(left)) * _entropy(left) + len(set(right)) * _entropy(right))
    if gain <= (math.log2(n - 1) + delta) / n:
        return
    _ref_split(pairs[:k], out)
    out.append(cut)
    _ref_split(pairs[k:], out)


# -- brute-force naive Bayes ----------------------------------------------------

def brute_force_posteriors(train_x, train_y, cuts_per_attr, query) -> dict:
    """Class posteriors by direct smoothed-count products (no log tricks)."""
    classes = sorted(set(train_y))
    n = len(train_y)
    post = {}
    for cname in classes:
        rows = [x for x, y in zip(train_x, train_y) if y == cname]
        p = (len(rows) + 1.0) / (n + len(classes))
        for a, cuts in enumerate(cuts_per_attr):
            qbin = sum(1 for c in cuts if query[a] >= c)
            hits = sum(1 for x in rows if sum(1 for c in cuts if x[a] >= c) == qbin)
            p *= (hits + 1.0) / (len(rows) + len(cuts) + 1)
        post[cname] = p
    total = sum(post.values())
    return {c: p / total for c, p in post.items()}


def exhaustive_1nn(train_x, train_y, query):
    """Closest stored instance by a plain scan; earliest index wins ties."""
    best = None
    for i, (x, y) in enumerate(zip(train_x, train_y)):
        d = math.sqrt(sum((a - b) ** 2 for a, b in zip(x, query)))
        if best is None or d < best[0]:
            best = (d, y)
    return best[1], best[0]
