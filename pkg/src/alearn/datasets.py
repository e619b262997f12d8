"""Datasets: synthetic generation, IDX ingestion and corruption transforms."""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ConsistencyError, FormatError, TruncatedFileError, ValidationError
from .seeding import round_half_up

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    n_classes: int

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise ValidationError(f"features must be 2-d, got shape {features.shape}")
        if labels.shape != (features.shape[0],):
            raise ValidationError(
                f"{features.shape[0]} feature rows but labels have shape {labels.shape}")
        if self.n_classes < 2:
            raise ValidationError("need at least 2 classes")
        if labels.size and (labels.min() < 0 or labels.max() >= self.n_classes):
            raise ValidationError(f"labels must lie in [0, {self.n_classes})")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.labels.shape[0]

    @property
    def dim(self):
        return self.features.shape[1]

    def subset(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[indices], self.labels[indices], self.n_classes)

    def class_counts(self):
        return np.bincount(self.labels, minlength=self.n_classes)

    def equals(self, other):
        return (self.n_classes == other.n_classes
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.labels, other.labels))


@dataclass(frozen=True)
class NoiseConfig:
    lam: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError("noise fraction must lie in [0, 1]", "noise.lambda")


@dataclass(frozen=True)
class ImbalanceConfig:
    delta: int
    keep_fraction: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.delta < 0:
            raise ConfigError("must be >= 0", "imbalance.delta")
        if not 0.0 < self.keep_fraction <= 1.0:
            raise ConfigError("must lie in (0, 1]", "imbalance.keep_fraction")


def corrupt_labels(ds, cfg):
    """Shuffle the labels of a random ``cfg.lam`` fraction of the items.

    The selected positions receive a random permutation of their own labels,
    so the label histogram of the dataset is unchanged. Fixed points of the
    permutation are allowed, so at most that fraction of labels change.
    """
    n = len(ds)
    k = round_half_up(cfg.lam * n)
    if k == 0:
        return ds
    rng = np.random.default_rng(cfg.seed)
    positions = np.sort(rng.choice(n, size=k, replace=False))
    labels = ds.labels.copy()
    labels[positions] = labels[positions][rng.permutation(k)]
    return Dataset(ds.features, labels, ds.n_classes)


def apply_imbalance(ds, cfg):
    """Shrink ``cfg.delta`` randomly chosen classes to ``keep_fraction`` of their size.

    Retained rows keep their original relative order.
    """
    if cfg.delta > ds.n_classes:
        raise ConfigError(f"cannot shrink {cfg.delta} of {ds.n_classes} classes", "imbalance.delta")
    if cfg.delta == 0:
        return ds
    rng = np.random.default_rng(cfg.seed)
    shrunk = np.sort(rng.choice(ds.n_classes, size=cfg.delta, replace=False))
    keep = np.ones(len(ds), dtype=bool)
    for c in shrunk:
        members = np.flatnonzero(ds.labels == c)
        n_keep = round_half_up(cfg.keep_fraction * members.size)
        kept = rng.choice(members, size=n_keep, replace=False)
        keep[members] = False
        keep[kept] = True
    return ds.subset(np.flatnonzero(keep))


def imbalanced_classes(cfg, n_classes):
    """The class ids ``apply_imbalance`` would shrink under ``cfg``."""
    if cfg.delta == 0:
        return np.array([], dtype=np.int64)
    rng = np.random.default_rng(cfg.seed)
    return np.sort(rng.choice(n_classes, size=cfg.delta, replace=False))


def generate_blobs(n_per_class, c, d, spread, seed, radius=1.0):
    """Isotropic Gaussian clusters with centres evenly spaced on a circle.

    The circle lives in a random 2-plane of the ``d``-dimensional space (a
    seeded rotation), with a seeded phase. Rows are grouped by class.
    """
    if c < 2 or d < 2:
        raise ConfigError(f"need c >= 2 and d >= 2, got c={c}, d={d}")
    if n_per_class < 0 or spread < 0:
        raise ConfigError("n_per_class and spread must be non-negative")
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2 * np.pi)
    angles = phase + 2 * np.pi * np.arange(c) / c
    rotation, _ = np.linalg.qr(rng.standard_normal((d, d)))
    centres = radius * np.stack([np.cos(angles), np.sin(angles)], axis=1) @ rotation[:2]
    labels = np.repeat(np.arange(c), n_per_class)
    features = centres[labels] + spread * rng.standard_normal((labels.size, d))
    return Dataset(features, labels, c)


def blob_centres(c, d, seed, radius=1.0):
    """Centres used by ``generate_blobs`` for the same ``(c, d, seed)``."""
    return generate_blobs(1, c, d, 0.0, seed, radius).features


def stratified_split(ds, n_per_class, seed):
    """Split off ``n_per_class`` items of every class as a held-out set.

    Returns ``(rest, held_out)``; classes with fewer items give all of them.
    """
    rng = np.random.default_rng(seed)
    held = []
    for c in range(ds.n_classes):
        members = np.flatnonzero(ds.labels == c)
        take = min(n_per_class, members.size)
        held.append(rng.choice(members, size=take, replace=False))
    held = np.sort(np.concatenate(held)) if held else np.array([], dtype=np.int64)
    mask = np.ones(len(ds), dtype=bool)
    mask[held] = False
    return ds.subset(np.flatnonzero(mask)), ds.subset(held)


def _read_idx(path, expected_magic, header_words):
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 4:
        raise TruncatedFileError(f"{path}: file too short for an IDX header")
    magic = int.from_bytes(raw[:4], "big")
    if magic != expected_magic:
        raise FormatError(f"{path}: magic 0x{magic:08x}, expected 0x{expected_magic:08x}")
    header_len = 4 * (1 + header_words)
    if len(raw) < header_len:
        raise TruncatedFileError(f"{path}: truncated IDX header")
    dims = np.frombuffer(raw, dtype=">u4", count=header_words, offset=4).astype(np.int64)
    expected = int(np.prod(dims))
    payload = np.frombuffer(raw, dtype=np.uint8, offset=header_len)
    if payload.size < expected:
        raise TruncatedFileError(f"{path}: expected {expected} data bytes, found {payload.size}")
    return dims, payload[:expected]


def load_idx_pair(images_path, labels_path, limit=None, n_classes=None):
    """Load an MNIST-style IDX image/label file pair.

    Pixels are scaled to [0, 1] and each image is flattened to one row.
    ``n_classes`` defaults to ``max(label) + 1`` (at least 2).
    """
    (count, rows, cols), pixels = _read_idx(images_path, IDX_IMAGES_MAGIC, 3)
    (label_count,), labels = _read_idx(labels_path, IDX_LABELS_MAGIC, 1)
    if count != label_count:
        raise ConsistencyError(f"{count} images but {label_count} labels")
    features = pixels.reshape(count, rows * cols).astype(np.float64) / 255.0
    labels = labels.astype(np.int64)
    if limit is not None:
        features, labels = features[:limit], labels[:limit]
    if n_classes is None:
        n_classes = max(2, int(labels.max()) + 1 if labels.size else 2)
    return Dataset(features, labels, n_classes)


def write_idx_pair(images_path, labels_path, images, labels):
    """Write ``images`` (uint8 ``[N, rows, cols]``) and ``labels`` as IDX files."""
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    with open(images_path, "wb") as f:
        f.write(np.array([IDX_IMAGES_MAGIC, *images.shape], dtype=">u4").tobytes())
        f.write(images.tobytes())
    with open(labels_path, "wb") as f:
        f.write(np.array([IDX_LABELS_MAGIC, labels.shape[0]], dtype=">u4").tobytes())
        f.write(labels.tobytes())
