"""Reading MNIST-style IDX files.

Writes a tiny image/label pair to a temporary directory, reads it back as
a Dataset, then shows the errors for a bad magic number and for files
whose item counts disagree. Point [dataset.idx] in a scenario file at
real MNIST files to run the loop on them.
"""
import tempfile
from pathlib import Path

import numpy as np

from alearn import load_idx_pair, write_idx_pair
from alearn.errors import ConsistencyError, FormatError

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    images = np.random.default_rng(0).integers(0, 256, size=(10, 4, 4), dtype=np.uint8)
    labels = np.arange(10, dtype=np.uint8) % 3
    write_idx_pair(tmp / "img.idx", tmp / "lab.idx", images, labels)

    ds = load_idx_pair(tmp / "img.idx", tmp / "lab.idx")
    print(f"{len(ds)} items, {ds.dim} features in [0, 1], classes {ds.class_counts().tolist()}")

    try:
        load_idx_pair(tmp / "lab.idx", tmp / "lab.idx")
    except FormatError as exc:
        print("bad magic:", exc)

    write_idx_pair(tmp / "img9.idx", tmp / "lab9.idx", images[:9], labels[:9])
    try:
        load_idx_pair(tmp / "img.idx", tmp / "lab9.idx")
    except ConsistencyError as exc:
        print("count mismatch:", exc)
