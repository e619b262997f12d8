"""The batch active-learning loop.

Each step restores the initial weights, trains on the labelled set, evaluates
on the test set and then labels the ``query_size`` highest-scoring candidates
from the unlabelled pool. Every random draw is seeded from
``(cfg.seed, step, purpose)``.
"""
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import acquisition
from .errors import ConfigError, ValidationError
from .metrics import accuracy, per_class_f1, test_nll
from .model import TrainConfig, init_weights, predict_mc, reset_weights, train
from .seeding import derive_seed


@dataclass(frozen=True)
class LoopConfig:
    initial_labels: int = 50
    query_size: int = 10
    mc_samples: int = 20
    pool_limit: int | None = None  # None, 0 or negative: score the whole pool
    label_budget: int = 250
    heuristic: str = "BALD"
    train: TrainConfig = field(default_factory=TrainConfig)
    seed: int = 0

    def __post_init__(self):
        if self.initial_labels < 1:
            raise ConfigError("must be >= 1", "loop.initial_labels")
        if self.query_size < 1:
            raise ConfigError("must be >= 1", "loop.query_size")
        if self.mc_samples < 1:
            raise ConfigError("must be >= 1", "loop.mc_samples")
        if self.label_budget < self.initial_labels:
            raise ConfigError("must be >= initial_labels", "loop.label_budget")
        if self.heuristic not in acquisition.HEURISTICS:
            raise ConfigError(f"must be one of {acquisition.HEURISTICS}", "heuristic")


@dataclass
class StepRecord:
    step: int
    labelled_count: int
    test_nll: float
    test_accuracy: float
    per_class_f1: np.ndarray
    wall_time: float = 0.0


def evaluate(weights, test, mc_samples, seed):
    """Score the MC-averaged predictive distribution on ``test``.

    Returns ``(nll, accuracy, per_class_f1)``.
    """
    probs = predict_mc(weights, test.features, mc_samples, seed).mean(axis=2)
    predictions = np.argmax(probs, axis=1)
    return (test_nll(probs, test.labels), accuracy(probs, test.labels),
            per_class_f1(predictions, test.labels, test.n_classes))


def acquisition_step(pool, weights, cfg, step_index):
    """Global indices of the items to label after step ``step_index``.

    An empty pool yields an empty list.
    """
    candidates = pool.subsample_pool(cfg.pool_limit, derive_seed(cfg.seed, step_index, "subsample"))
    if candidates.size == 0:
        return []
    if cfg.heuristic == "Random":
        scores = acquisition.random_score(candidates.size, derive_seed(cfg.seed, step_index, "score"))
    else:
        samples = predict_mc(weights, pool.dataset.features[candidates], cfg.mc_samples,
                             derive_seed(cfg.seed, step_index, "mc"))
        scores = acquisition.score(cfg.heuristic, samples)
    return candidates[acquisition.rank_top_k(scores, cfg.query_size)].tolist()


def run_loop(pool, spec, cfg, test, on_step=None):
    """Run active learning on ``pool`` until the label budget or the pool runs out.

    ``on_step(step, weights, pool)`` is called with the freshly reset weights
    right before each step's training. Returns one ``StepRecord`` per step; the
    last record describes a model trained on the final labelled set.
    """
    if pool.n_labelled:
        raise ValidationError("run_loop expects a fully unlabelled pool")
    snapshot = init_weights(spec, derive_seed(cfg.seed, "init"))
    weights = snapshot.copy()
    pool.initialize_random_labels(cfg.initial_labels, derive_seed(cfg.seed, "initial"))
    records = []
    step = 0
    while True:
        started = time.perf_counter()
        weights = reset_weights(weights, snapshot)
        if on_step is not None:
            on_step(step, weights, pool)
        x, y = pool.labelled_data()
        train_cfg = replace(cfg.train, seed=derive_seed(cfg.seed, cfg.train.seed, step, "train"))
        weights = train(weights, x, y, train_cfg)
        nll, acc, f1 = evaluate(weights, test, cfg.mc_samples, derive_seed(cfg.seed, step, "eval"))
        record = StepRecord(step, pool.n_labelled, nll, acc, f1)
        records.append(record)
        if pool.n_labelled >= cfg.label_budget or pool.n_unlabelled == 0:
            record.wall_time = time.perf_counter() - started
            return records
        pool.reveal_labels(acquisition_step(pool, weights, cfg, step))
        record.wall_time = time.perf_counter() - started
        step += 1
