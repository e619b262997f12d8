"""Test-set metrics and aggregation over seeds."""
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, ShapeError, ValidationError

EPS = 1e-10


def _check(probs, labels):
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if probs.ndim != 2 or labels.shape != (probs.shape[0],):
        raise ShapeError(f"probs {probs.shape} and labels {labels.shape} do not align")
    if probs.shape[0] == 0:
        raise ValidationError("metrics need at least one item")
    if labels.min() < 0 or labels.max() >= probs.shape[1]:
        raise ValidationError("labels out of range")
    return probs, labels


def test_nll(probs, labels):
    """Mean negative log-likelihood of the true labels, in nats."""
    probs, labels = _check(probs, labels)
    picked = probs[np.arange(labels.size), labels]
    return float(np.mean(-np.log(np.maximum(picked, EPS))))


test_nll.__test__ = False  # keep pytest from collecting it


def accuracy(probs, labels):
    probs, labels = _check(probs, labels)
    return float(np.mean(np.argmax(probs, axis=1) == labels))


def per_class_f1(predictions, labels, c):
    """F1 per class; a class with ``2TP + FP + FN == 0`` scores 0."""
    predictions = np.asarray(predictions, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if predictions.shape != labels.shape or predictions.ndim != 1:
        raise ShapeError(f"predictions {predictions.shape} vs labels {labels.shape}")
    confusion = np.zeros((c, c), dtype=np.int64)
    np.add.at(confusion, (labels, predictions), 1)
    tp = np.diag(confusion).astype(np.float64)
    fp = confusion.sum(axis=0) - tp
    fn = confusion.sum(axis=1) - tp
    denom = 2 * tp + fp + fn
    return np.divide(2 * tp, denom, out=np.zeros(c), where=denom > 0)


def active_gain(nll_random, nll_heuristic):
    """``NLL_random - NLL_heuristic`` per step; positive means the heuristic helps."""
    a = np.asarray(nll_random, dtype=np.float64)
    b = np.asarray(nll_heuristic, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"series lengths differ: {a.shape} vs {b.shape}")
    return a - b


def _mean(values):
    # sorting over the seed axis makes the result exactly order-independent
    return np.sort(values, axis=0).mean(axis=0)


def _std(values):
    values = np.sort(np.asarray(values), axis=0)
    if values.shape[0] < 2:
        return np.zeros(values.shape[1:])
    return values.std(axis=0, ddof=1)


@dataclass
class RunSummary:
    heuristic: str
    labelled_counts: np.ndarray
    n_seeds: int
    nll_mean: np.ndarray
    nll_std: np.ndarray
    accuracy_mean: np.ndarray
    accuracy_std: np.ndarray
    f1_mean: np.ndarray
    f1_std: np.ndarray

    def metric(self, name):
        """``(mean, std)`` for ``nll``, ``accuracy`` or ``f1_class_<k>``."""
        if name.startswith("f1_class_"):
            k = int(name[len("f1_class_"):])
            return self.f1_mean[:, k], self.f1_std[:, k]
        return getattr(self, f"{name}_mean"), getattr(self, f"{name}_std")


def aggregate_runs(runs, heuristic=""):
    """Per-step mean and sample std over a list of runs (each a StepRecord list)."""
    if not runs:
        raise AlignmentError("no runs to aggregate")
    counts = [tuple(r.labelled_count for r in run) for run in runs]
    if any(c != counts[0] for c in counts):
        raise AlignmentError("runs follow different labelled-count schedules")
    nll = np.array([[r.test_nll for r in run] for run in runs])
    acc = np.array([[r.test_accuracy for r in run] for run in runs])
    f1 = np.array([[r.per_class_f1 for r in run] for run in runs])
    return RunSummary(
        heuristic=heuristic,
        labelled_counts=np.array(counts[0], dtype=np.int64),
        n_seeds=len(runs),
        nll_mean=_mean(nll), nll_std=_std(nll),
        accuracy_mean=_mean(acc), accuracy_std=_std(acc),
        f1_mean=_mean(f1), f1_std=_std(f1),
    )
