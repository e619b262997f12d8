"""Bayesian batch active learning: MC-Dropout posteriors, BALD / Entropy
acquisition, pool bookkeeping and a reproducible experiment runner."""
from .acquisition import (bald_score, bayesian_model_average, entropy_score, random_score, rank_top_k,
                          shannon_entropy)
from .datasets import (Dataset, ImbalanceConfig, NoiseConfig, apply_imbalance, corrupt_labels, generate_blobs,
                       load_idx_pair, write_idx_pair)
from .loop import LoopConfig, StepRecord, acquisition_step, run_loop
from .metrics import accuracy, active_gain, aggregate_runs, per_class_f1, test_nll
from .model import MlpSpec, TrainConfig, Weights, forward, gradient, init_weights, predict_mc, reset_weights, train
from .pool import ActivePool

__version__ = "0.1.0"
