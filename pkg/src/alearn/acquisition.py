"""Acquisition scores computed from Monte-Carlo predictive samples.

All functions take a posterior sample tensor of shape ``[N, C, T]`` (items,
classes, MC samples) holding softmax outputs, and return one float64 score per
item. Entropies are in nats.
"""
import numpy as np

from .errors import ValidationError

EPS = 1e-10
_SIMPLEX_TOL = 1e-6

HEURISTICS = ("BALD", "Entropy", "Random")


def check_samples(samples):
    """Validate and return ``samples`` as a float64 ``[N, C, T]`` array."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 3:
        raise ValidationError(f"posterior samples must be 3-d [N, C, T], got shape {samples.shape}")
    n, c, t = samples.shape
    if c < 2 or t < 1:
        raise ValidationError(f"need C >= 2 and T >= 1, got C={c}, T={t}")
    if n == 0:
        return samples
    if not np.all(np.isfinite(samples)):
        raise ValidationError("posterior samples contain non-finite values")
    if samples.min() < -_SIMPLEX_TOL or samples.max() > 1 + _SIMPLEX_TOL:
        raise ValidationError("probabilities must lie in [0, 1]")
    sums = samples.sum(axis=1)
    if np.max(np.abs(sums - 1.0)) > _SIMPLEX_TOL:
        raise ValidationError("each [n, :, t] slice must sum to 1")
    return samples


def check_probs(p):
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size < 2:
        raise ValidationError(f"expected a probability vector with >= 2 entries, got shape {p.shape}")
    if not np.all(np.isfinite(p)) or p.min() < -_SIMPLEX_TOL or p.max() > 1 + _SIMPLEX_TOL:
        raise ValidationError("probabilities must be finite and lie in [0, 1]")
    if abs(p.sum() - 1.0) > _SIMPLEX_TOL:
        raise ValidationError("probabilities must sum to 1")
    return p


def _entropy(p, axis):
    return -np.sum(p * np.log(np.maximum(p, EPS)), axis=axis)


def bayesian_model_average(samples):
    """Mean predictive distribution over the MC axis, shape ``[N, C]``."""
    samples = check_samples(samples)
    return samples.mean(axis=2)


def shannon_entropy(p):
    return float(_entropy(check_probs(p), axis=0))


def entropy_score(samples):
    """Entropy of the Bayesian model average for each item."""
    return _entropy(bayesian_model_average(samples), axis=1)


def bald_score(samples):
    """Mutual information between the label and the model weights.

    Computed as the entropy of the averaged prediction minus the average
    entropy of the individual MC predictions, clamped at zero.
    """
    samples = check_samples(samples)
    predictive = _entropy(samples.mean(axis=2), axis=1)
    expected = _entropy(samples, axis=1).mean(axis=1)
    return np.maximum(predictive - expected, 0.0)


def random_score(n, seed):
    return np.random.default_rng(seed).random(int(n))


def rank_top_k(scores, k):
    """Indices of the ``k`` largest scores, best first.

    Ties go to the lower index, so the result is fully determined by the score
    values.

    >>> rank_top_k([0.5, 0.5, 0.1], 1)
    [0]
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1:
        raise ValidationError("scores must be a vector")
    if not np.all(np.isfinite(scores)):
        raise ValidationError("scores must be finite")
    if k < 0:
        raise ValidationError("k must be non-negative")
    order = np.argsort(-scores, kind="stable")
    return order[:k].tolist()


def score(heuristic, samples=None, n=None, seed=None):
    """Dispatch on a heuristic name. ``Random`` needs ``n`` and ``seed`` only."""
    if heuristic == "BALD":
        return bald_score(samples)
    if heuristic == "Entropy":
        return entropy_score(samples)
    if heuristic == "Random":
        return random_score(n, seed)
    raise ValueError(f"unknown heuristic {heuristic!r}; expected one of {HEURISTICS}")
