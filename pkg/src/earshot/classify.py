"""Classifiers trained over knowledge-base snapshots.

The shipped classifier is a naive Bayes over attributes made nominal by
entropy-based supervised discretization with the Fayyad-Irani MDL
stopping rule. A 1-nearest-neighbor Euclidean classifier is kept as the
accuracy ceiling for evaluation runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import TrainingError
from .kb import KnowledgeBase

# -- supervised discretization (entropy splitting + MDL stop) --------------

def _class_entropy(counts: dict) -> float:
    total = sum(counts.values())
    if total == 0:
        return 0.0
    ent = 0.0
    for c in counts.values():
        if c:
            p = c / total
            ent -= p * math.log2(p)
    return ent

def _count(labels) -> dict:
    counts: dict = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    return counts

def _candidate_cuts(values: np.ndarray, labels: Sequence) -> list[float]:
    """Midpoints between adjacent distinct values whose label sets differ."""
    cuts = []
    start = 0
    groups = []  # (value, label set)
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] != values[start]:
            groups.append((values[start], frozenset(labels[start:i])))
            start = i
    for (v1, s1), (v2, s2) in zip(groups, groups[1:]):
        if s1 != s2:
            cuts.append((v1 + v2) / 2.0)
    return cuts

def _mdl_accepts(labels, left, right, gain: float) -> bool:
    n = len(labels)
    ent_s, ent_1, ent_2 = _count(labels), _count(left), _count(right)
    k, k1, k2 = len(ent_s), len(ent_1), len(ent_2)
    delta = (math.log2(3 ** k - 2)
             - k * _class_entropy(ent_s)
             + k1 * _class_entropy(ent_1)
             + k2 * _class_entropy(ent_2))
    return gain > (math.log2(n - 1) + delta) / n

def _split(values: np.ndarray, labels: Sequence, out: list):
    candidates = _candidate_cuts(values, labels)
    if not candidates:
        return
    base = _class_entropy(_count(labels))
    n = len(values)
    best = None
    for cut in candidates:
        k = int(np.searchsorted(values, cut))
        left, right = labels[:k], labels[k:]
        gain = base - (len(left) / n) * _class_entropy(_count(left)) \
                    - (len(right) / n) * _class_entropy(_count(right))
        if best is None or gain > best[0] + 1e-12:
            best = (gain, cut, k)
    gain, cut, k = best
    if not _mdl_accepts(labels, labels[:k], labels[k:], gain):
        return
    _split(values[:k], labels[:k], out)
    out.append(cut)
    _split(values[k:], labels[k:], out)

def discretize_attribute(values, labels) -> list[float]:
    """Ascending MDL-accepted cut points for one numeric attribute."""
    values = np.asarray(values, dtype=np.float64)
    if values.size != len(labels):
        raise ValueError("values and labels must have equal length")
    order = np.argsort(values, kind="stable")
    sorted_values = values[order]
    sorted_labels = [labels[i] for i in order]
    cuts: list[float] = []
    _split(sorted_values, sorted_labels, cuts)
    return cuts

def bin_index(cuts: Sequence[float], value: float) -> int:
    """Bin of `value` under ascending cuts: bin b covers [cuts[b-1], cuts[b])."""
    return int(np.searchsorted(cuts, value, side="right"))

# -- naive Bayes -----------------------------------------------------------

@dataclass
class NaiveBayesModel:
    scheme: list[list[float]]                 # per-attribute ascending cuts
    class_names: list[str]                    # sorted, fixes tie order
    class_counts: np.ndarray                  # per-class record counts
    bin_counts: list[np.ndarray]              # per attribute: class x bin counts
    trained_revision: int = -1
    flagged_classes: list[str] = field(default_factory=list)

    @property
    def n_records(self) -> int:
        return int(self.class_counts.sum())

def train_naive_bayes_from(vectors: np.ndarray, labels: Sequence[str],
                           revision: int = -1,
                           flagged: Sequence[str] = ()) -> NaiveBayesModel:
    """Fit discretization + smoothed counts on raw vectors and labels."""
    if len(labels) == 0:
        raise TrainingError("empty training set")
    vectors = np.asarray(vectors, dtype=np.float64)
    class_names = sorted(set(labels))
    class_index = {name: i for i, name in enumerate(class_names)}
    y = np.array([class_index[lab] for lab in labels])

    scheme = []
    bin_counts = []
    for a in range(vectors.shape[1]):
        cuts = discretize_attribute(vectors[:, a], list(labels))
        scheme.append(cuts)
        counts = np.zeros((len(class_names), len(cuts) + 1))
        for value, ci in zip(vectors[:, a], y):
            counts[ci, bin_index(cuts, value)] += 1
        bin_counts.append(counts)

    class_counts = np.bincount(y, minlength=len(class_names)).astype(np.float64)
    return NaiveBayesModel(scheme, class_names, class_counts, bin_counts,
                           trained_revision=revision, flagged_classes=list(flagged))

def train_naive_bayes(kb: KnowledgeBase, environment: Optional[str] = None) -> NaiveBayesModel:
    """Train on the KB's non-excluded records (optionally environment-filtered)."""
    records, flagged = kb.training_view(environment)
    if not records:
        raise TrainingError("no trainable records in the knowledge base")
    vectors = np.stack([r.features for r in records])
    labels = [r.class_name for r in records]
    return train_naive_bayes_from(vectors, labels, revision=kb.revision, flagged=flagged)

def classify(model: NaiveBayesModel, v) -> list[tuple[str, float]]:
    """Posterior-ranked classes for one 54-value vector.

    Laplace add-one smoothing on priors and bin likelihoods;
    accumulation in log space; ties broken lexicographically by the
    sorted class order.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size != len(model.scheme):
        raise ValueError(f"expected {len(model.scheme)} attributes, got {v.size}")
    n_classes = len(model.class_names)
    log_post = np.log(model.class_counts + 1.0) - math.log(model.n_records + n_classes)
    for a, cuts in enumerate(model.scheme):
        counts = model.bin_counts[a]
        b = bin_index(cuts, v[a])
        log_post += np.log(counts[:, b] + 1.0) - np.log(model.class_counts + counts.shape[1])
    log_post -= log_post.max()
    post = np.exp(log_post)
    post /= post.sum()
    ranked = sorted(zip(model.class_names, post), key=lambda t: (-t[1], t[0]))
    return [(name, float(p)) for name, p in ranked]

# -- 1-nearest neighbor ----------------------------------------------------

@dataclass
class NearestNeighborModel:
    vectors: np.ndarray          # in storage order; index breaks distance ties
    labels: list[str]
    trained_revision: int = -1

    def __post_init__(self):
        if len(self.labels) == 0:
            raise TrainingError("empty training set")

def train_1nn(kb: KnowledgeBase, environment: Optional[str] = None) -> NearestNeighborModel:
    records, _ = kb.training_view(environment)
    if not records:
        raise TrainingError("no trainable records in the knowledge base")
    return NearestNeighborModel(
        vectors=np.stack([r.features for r in records]),
        labels=[r.class_name for r in records],
        trained_revision=kb.revision,
    )

def classify_1nn(model: NearestNeighborModel, v) -> tuple[str, float]:
    """Class of the closest stored instance (earliest-stored tie-break)."""
    v = np.asarray(v, dtype=np.float64)
    dists = np.sqrt(np.sum((model.vectors - v) ** 2, axis=1))
    i = int(np.argmin(dists))  # argmin returns the first minimum
    return model.labels[i], float(dists[i])
