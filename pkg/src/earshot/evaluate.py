"""Desk-scale evaluation: stratified k-fold CV, learning curves, timing."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import classify as clf
from .errors import EarshotError
from .features import extract_segment_features
from .kb import KnowledgeBase

ALGORITHMS = ("naive_bayes", "nearest_neighbor")


@dataclass
class EvalReport:
    algorithm: str
    fold_count: int
    accuracy: float
    fold_accuracies: list[float]
    class_names: list[str]
    confusion: np.ndarray                 # rows = true class, cols = predicted
    precision: dict[str, float]
    recall: dict[str, float]
    train_ms: float                       # mean per-fold training time
    classify_ms: float                    # mean per-query classification time
    flags: list[str] = field(default_factory=list)


def stratified_folds(labels: Sequence[str], k: int, seed: int) -> list[np.ndarray]:
    """Disjoint covering folds with per-class round-robin assignment.

    Classes with fewer records than folds are spread best-effort; the
    caller decides whether to flag that.
    """
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for name in sorted(set(labels)):
        idx = [i for i, lab in enumerate(labels) if lab == name]
        rng.shuffle(idx)
        for i in idx:
            folds[cursor % k].append(i)
            cursor += 1
    return [np.array(sorted(f), dtype=int) for f in folds]


def _fit_predict(algorithm: str, train_x, train_y, test_x) -> tuple[list[str], float, float]:
    t0 = time.perf_counter()
    if algorithm == "naive_bayes":
        model = clf.train_naive_bayes_from(train_x, train_y)
        t1 = time.perf_counter()
        preds = [clf.classify(model, x)[0][0] for x in test_x]
    elif algorithm == "nearest_neighbor":
        model = clf.NearestNeighborModel(np.asarray(train_x), list(train_y))
        t1 = time.perf_counter()
        preds = [clf.classify_1nn(model, x)[0] for x in test_x]
    else:
        raise ValueError(f"algorithm must be one of {ALGORITHMS}")
    t2 = time.perf_counter()
    per_query = (t2 - t1) / max(len(test_x), 1)
    return preds, (t1 - t0) * 1e3, per_query * 1e3


def cross_validate_vectors(vectors: np.ndarray, labels: Sequence[str], k: int = 10,
                           algorithm: str = "naive_bayes", seed: int = 0) -> EvalReport:
    """Stratified k-fold CV; discretization is refit inside each training fold."""
    if k < 2:
        raise ValueError("fold count must be >= 2")
    vectors = np.asarray(vectors, dtype=np.float64)
    labels = list(labels)
    if not labels:
        raise EarshotError("nothing to evaluate")

    class_names = sorted(set(labels))
    name_index = {n: i for i, n in enumerate(class_names)}
    flags = []
    if len(class_names) == 1:
        flags.append("degenerate_single_class")
    counts = {n: labels.count(n) for n in class_names}
    if min(counts.values()) < k:
        flags.append("best_effort_stratification")

    confusion = np.zeros((len(class_names), len(class_names)), dtype=int)
    fold_accuracies = []
    train_times = []
    query_times = []
    for fold in stratified_folds(labels, k, seed):
        if fold.size == 0:
            continue
        mask = np.ones(len(labels), dtype=bool)
        mask[fold] = False
        train_x, test_x = vectors[mask], vectors[fold]
        train_y = [labels[i] for i in np.flatnonzero(mask)]
        test_y = [labels[i] for i in fold]
        preds, train_ms, query_ms = _fit_predict(algorithm, train_x, train_y, test_x)
        train_times.append(train_ms)
        query_times.append(query_ms)
        hits = 0
        for true, pred in zip(test_y, preds):
            confusion[name_index[true], name_index[pred]] += 1
            hits += true == pred
        fold_accuracies.append(hits / len(test_y))

    accuracy = confusion.trace() / confusion.sum()
    precision = {}
    recall = {}
    for n, i in name_index.items():
        col = confusion[:, i].sum()
        row = confusion[i, :].sum()
        precision[n] = confusion[i, i] / col if col else 0.0
        recall[n] = confusion[i, i] / row if row else 0.0

    return EvalReport(
        algorithm=algorithm, fold_count=k, accuracy=float(accuracy),
        fold_accuracies=fold_accuracies, class_names=class_names,
        confusion=confusion, precision=precision, recall=recall,
        train_ms=float(np.mean(train_times)), classify_ms=float(np.mean(query_times)),
        flags=flags,
    )


def _kb_vectors(kb: KnowledgeBase):
    records, _ = kb.training_view()
    if not records:
        raise EarshotError("knowledge base holds no trainable records")
    return np.stack([r.features for r in records]), [r.class_name for r in records]


def cross_validate(kb: KnowledgeBase, k: int = 10, algorithm: str = "naive_bayes",
                   seed: int = 0) -> EvalReport:
    vectors, labels = _kb_vectors(kb)
    return cross_validate_vectors(vectors, labels, k, algorithm, seed)


def learning_curves(kb: KnowledgeBase, instance_grid: Optional[Sequence[int]] = None,
                    class_grid: Optional[Sequence[int]] = None,
                    algorithm: str = "naive_bayes", seed: int = 0,
                    k: int = 10) -> list[dict]:
    """Accuracy at seeded subsamples of the KB; one row per grid point.

    Instance-grid rows keep all classes and subsample records per class;
    class-grid rows keep all records of a class subset.
    """
    vectors, labels = _kb_vectors(kb)
    rng = np.random.default_rng(seed)
    class_names = sorted(set(labels))
    by_class = {n: [i for i, lab in enumerate(labels) if lab == n] for n in class_names}
    max_instances = min(len(v) for v in by_class.values())

    rows = []
    for m in instance_grid or ():
        if m > max_instances:
            raise ValueError(f"instance grid point {m} exceeds smallest class size")
        keep = np.concatenate([
            rng.choice(idx, size=m, replace=False) for idx in by_class.values()
        ])
        report = cross_validate_vectors(vectors[keep], [labels[i] for i in keep],
                                        k=k, algorithm=algorithm, seed=seed)
        rows.append({"axis": "instances_per_class", "grid_value": m,
                     "accuracy": report.accuracy,
                     "stderr": float(np.std(report.fold_accuracies) / np.sqrt(k))})
    for c in class_grid or ():
        if c > len(class_names):
            raise ValueError(f"class grid point {c} exceeds class count")
        chosen = list(rng.choice(class_names, size=c, replace=False))
        keep = np.concatenate([by_class[n] for n in chosen])
        report = cross_validate_vectors(vectors[keep], [labels[i] for i in keep],
                                        k=k, algorithm=algorithm, seed=seed)
        rows.append({"axis": "class_count", "grid_value": c,
                     "accuracy": report.accuracy,
                     "stderr": float(np.std(report.fold_accuracies) / np.sqrt(k))})
    return rows


def timing_profile(kb: KnowledgeBase, algorithm: str = "naive_bayes",
                   repetitions: int = 5, probe_frames=None) -> dict:
    """Median/p95 wall-clock training and recognition times.

    Recognition is timed from the start of feature extraction on
    `probe_frames` (a captured segment's frames) to the end of
    classification.
    """
    vectors, labels = _kb_vectors(kb)
    train_times = []
    recognize_times = []
    model = None
    for _ in range(max(repetitions, 1)):
        t0 = time.perf_counter()
        if algorithm == "naive_bayes":
            model = clf.train_naive_bayes_from(vectors, labels)
        elif algorithm == "nearest_neighbor":
            model = clf.NearestNeighborModel(vectors, labels)
        else:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        train_times.append((time.perf_counter() - t0) * 1e3)

        if probe_frames is not None:
            t0 = time.perf_counter()
            v = extract_segment_features(probe_frames)
            if algorithm == "naive_bayes":
                clf.classify(model, v)
            else:
                clf.classify_1nn(model, v)
            recognize_times.append((time.perf_counter() - t0) * 1e3)

    def stats(times):
        if not times:
            return {"median_ms": None, "p95_ms": None}
        return {"median_ms": float(np.median(times)),
                "p95_ms": float(np.percentile(times, 95))}

    return {"algorithm": algorithm, "repetitions": repetitions,
            "train": stats(train_times), "recognize": stats(recognize_times)}
