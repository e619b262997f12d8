"""The active loop on an imbalanced pool, BALD against Random.

Eight classes, three of them cut to a quarter of their size. Both
heuristics start from the same 50 random labels and buy 10 more per step
up to 250. BALD tends to find the rare classes sooner, which shows up as
a lower test NLL and better F1 on the shrunk classes.

Three seeds keep this quick; configs/imbalanced_blobs.toml runs ten.
"""
from dataclasses import replace
from pathlib import Path

import numpy as np

from alearn.experiment import build_datasets, load_config, run_cell

cfg = load_config(Path(__file__).resolve().parent.parent / "configs" / "imbalanced_blobs.toml")
cfg = replace(cfg, seeds=(0, 1, 2))

for heuristic in cfg.heuristics:
    nll, rare_f1 = [], []
    for seed in cfg.seeds:
        shrunk = build_datasets(cfg, seed)[2]
        records = run_cell(cfg, heuristic, seed)
        nll.append(records[-1].test_nll)
        rare_f1.append(records[-1].per_class_f1[shrunk].mean())
        counts = [r.labelled_count for r in records]
    print(f"{heuristic:7s} labelled {counts[0]}..{counts[-1]}  final NLL {np.mean(nll):.3f}  "
          f"F1 on shrunk classes {np.mean(rare_f1):.3f}")
