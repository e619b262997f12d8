"""A small ReLU multilayer perceptron with MC-Dropout, written against numpy.

Dropout is inverted (kept units are scaled by ``1 / (1 - rate)``) and sits
after every hidden activation. A forward pass given a mask seed is stochastic
and reproducible; without one it is the plain deterministic network.
"""
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ShapeError, TrainingError
from .seeding import derive_seed


@dataclass(frozen=True)
class MlpSpec:
    input_dim: int
    hidden_dims: tuple = ()
    n_classes: int = 2
    dropout_rate: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "hidden_dims", tuple(int(h) for h in self.hidden_dims))
        if self.input_dim < 1 or any(h < 1 for h in self.hidden_dims):
            raise ConfigError("layer widths must be >= 1", "model.hidden")
        if self.n_classes < 2:
            raise ConfigError("need at least 2 classes", "model.n_classes")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError("must lie in [0, 1)", "model.dropout")

    @property
    def dims(self):
        return (self.input_dim, *self.hidden_dims, self.n_classes)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 0.05
    momentum: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ConfigError("must be >= 0", "train.epochs")
        if self.batch_size < 1:
            raise ConfigError("must be >= 1", "train.batch_size")
        if not self.learning_rate > 0:
            raise ConfigError("must be > 0", "train.learning_rate")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigError("must lie in [0, 1)", "train.momentum")


@dataclass(eq=False)
class Weights:
    """Per-layer ``(W, b)`` pairs, ``W`` shaped ``[fan_in, fan_out]``."""

    spec: MlpSpec
    layers: list = field(default_factory=list)

    def copy(self):
        return Weights(self.spec, [(w.copy(), b.copy()) for w, b in self.layers])

    def equals(self, other):
        return (self.spec == other.spec and len(self.layers) == len(other.layers)
                and all(np.array_equal(w1, w2) and np.array_equal(b1, b2)
                        for (w1, b1), (w2, b2) in zip(self.layers, other.layers)))

    def shapes(self):
        return [(w.shape, b.shape) for w, b in self.layers]

    def flat(self):
        return np.concatenate([np.concatenate([w.ravel(), b]) for w, b in self.layers])


def init_weights(spec, seed):
    """He-uniform weights (bound ``sqrt(6 / fan_in)``) and zero biases."""
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out in zip(spec.dims[:-1], spec.dims[1:]):
        bound = np.sqrt(6.0 / fan_in)
        layers.append((rng.uniform(-bound, bound, size=(fan_in, fan_out)), np.zeros(fan_out)))
    return Weights(spec, layers)


def reset_weights(current, initial_snapshot):
    if current.shapes() != initial_snapshot.shapes():
        raise ShapeError("weights and snapshot have different layer shapes")
    return initial_snapshot.copy()


def softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _check_input(weights, x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != weights.spec.input_dim:
        raise ShapeError(f"expected input of shape [B, {weights.spec.input_dim}], got {x.shape}")
    return x


def _draw_masks(weights, n, rng):
    rate = weights.spec.dropout_rate
    if rate == 0.0:
        return [None] * len(weights.spec.hidden_dims)
    keep = 1.0 - rate
    return [(rng.random((n, h), dtype=np.float32) < keep) * (1.0 / keep)
            for h in weights.spec.hidden_dims]


def _masks_for_seed(weights, n, mask_seed):
    if mask_seed is None:
        return [None] * len(weights.spec.hidden_dims)
    return _draw_masks(weights, n, np.random.default_rng(mask_seed))


def _forward(weights, x, masks):
    """Return class probabilities and the per-layer cache backprop needs."""
    cache = []
    a = x
    last = len(weights.layers) - 1
    for i, (w, b) in enumerate(weights.layers):
        z = a @ w + b
        if i == last:
            cache.append((a, None, None))
            return softmax(z), cache
        h = np.maximum(z, 0.0)
        if masks[i] is not None:
            h = h * masks[i]
        cache.append((a, z, masks[i]))
        a = h


def forward(weights, x, mask_seed=None):
    x = _check_input(weights, x)
    probs, _ = _forward(weights, x, _masks_for_seed(weights, x.shape[0], mask_seed))
    return probs


def _check_labels(weights, x, y):
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (x.shape[0],):
        raise ShapeError(f"{x.shape[0]} inputs but labels have shape {y.shape}")
    if y.size and (y.min() < 0 or y.max() >= weights.spec.n_classes):
        raise ShapeError(f"labels must lie in [0, {weights.spec.n_classes})")
    return y


def _loss_and_grad(weights, x, y, masks):
    probs, cache = _forward(weights, x, masks)
    n = x.shape[0]
    loss = -np.mean(np.log(np.maximum(probs[np.arange(n), y], 1e-300)))
    dz = probs
    dz[np.arange(n), y] -= 1.0
    dz /= n
    grads = [None] * len(weights.layers)
    for i in range(len(weights.layers) - 1, -1, -1):
        a_in = cache[i][0]
        w = weights.layers[i][0]
        grads[i] = (a_in.T @ dz, dz.sum(axis=0))
        if i == 0:
            break
        _, z_prev, mask_prev = cache[i - 1]
        da = dz @ w.T
        if mask_prev is not None:
            da = da * mask_prev
        dz = da * (z_prev > 0)
    return loss, grads


def loss(weights, x, y, mask_seed=None):
    """Mean cross-entropy of a (possibly masked) forward pass."""
    x = _check_input(weights, x)
    y = _check_labels(weights, x, y)
    probs = forward(weights, x, mask_seed)
    return float(-np.mean(np.log(np.maximum(probs[np.arange(len(y)), y], 1e-300))))


def gradient(weights, x, y, mask_seed=None):
    """Exact gradient of the mean cross-entropy, as a ``Weights`` of the same shapes.

    With a mask seed the dropout masks are the ones ``forward`` would draw for
    the same seed, so the result can be checked by finite differences of
    ``loss(weights, x, y, mask_seed)``.
    """
    x = _check_input(weights, x)
    y = _check_labels(weights, x, y)
    if x.shape[0] == 0:
        raise TrainingError("gradient of an empty batch")
    masks = _masks_for_seed(weights, x.shape[0], mask_seed)
    _, grads = _loss_and_grad(weights, x, y, masks)
    return Weights(weights.spec, grads)


def fit(weights, x, y, cfg):
    """Mini-batch SGD with momentum; returns ``(new_weights, epoch_losses)``.

    Dropout is active during training. The input weights are not modified.
    """
    x = _check_input(weights, x)
    y = _check_labels(weights, x, y)
    n = x.shape[0]
    if n == 0:
        raise TrainingError("cannot train on an empty labelled set")
    trained = weights.copy()
    velocity = [(np.zeros_like(w), np.zeros_like(b)) for w, b in trained.layers]
    rng = np.random.default_rng(cfg.seed)
    history = np.empty(cfg.epochs)
    lr, mu = cfg.learning_rate, cfg.momentum
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            masks = _draw_masks(trained, batch.size, rng)
            batch_loss, grads = _loss_and_grad(trained, x[batch], y[batch], masks)
            total += batch_loss * batch.size
            for (w, b), (vw, vb), (gw, gb) in zip(trained.layers, velocity, grads):
                vw *= mu
                vw -= lr * gw
                vb *= mu
                vb -= lr * gb
                w += vw
                b += vb
        history[epoch] = total / n
    if not all(np.all(np.isfinite(w)) and np.all(np.isfinite(b)) for w, b in trained.layers):
        raise TrainingError("training diverged to non-finite weights")
    return trained, history


def train(weights, x, y, cfg):
    return fit(weights, x, y, cfg)[0]


def predict_mc(weights, x, t, seed):
    """Stack ``t`` MC-Dropout forward passes into a ``[N, C, t]`` tensor.

    Pass ``i`` draws its masks from ``derive_seed(seed, i)``, so the output does
    not depend on evaluation order.
    """
    if t < 1:
        raise ConfigError("need at least one MC sample", "loop.mc_samples")
    x = _check_input(weights, x)
    out = np.empty((x.shape[0], weights.spec.n_classes, t))
    if weights.spec.dropout_rate == 0.0:
        out[:] = forward(weights, x)[:, :, None]
        return out
    for i in range(t):
        out[:, :, i] = forward(weights, x, mask_seed=derive_seed(seed, i))
    return out


def save_weights(path, weights):
    """Flat binary snapshot: u32 layer count, u32 (in, out) per layer, then f64 payload.

    Everything little-endian; the payload is each layer's ``W`` (row-major)
    followed by its ``b``.
    """
    dims = [d for w, _ in weights.layers for d in w.shape]
    with open(path, "wb") as f:
        f.write(struct.pack(f"<{1 + len(dims)}I", len(weights.layers), *dims))
        f.write(weights.flat().astype("<f8").tobytes())


def load_weights(path, dropout_rate=0.0):
    with open(path, "rb") as f:
        raw = f.read()
    (n_layers,) = struct.unpack_from("<I", raw, 0)
    dims = struct.unpack_from(f"<{2 * n_layers}I", raw, 4)
    payload = np.frombuffer(raw, dtype="<f8", offset=4 * (1 + 2 * n_layers)).astype(np.float64)
    shapes = list(zip(dims[0::2], dims[1::2]))
    if any(shapes[i][1] != shapes[i + 1][0] for i in range(n_layers - 1)):
        raise ShapeError("inconsistent layer dimensions in weight file")
    expected = sum(i * o + o for i, o in shapes)
    if payload.size != expected:
        raise ShapeError(f"weight file holds {payload.size} values, header implies {expected}")
    spec = MlpSpec(shapes[0][0], tuple(o for _, o in shapes[:-1]), shapes[-1][1], dropout_rate)
    layers, pos = [], 0
    for fan_in, fan_out in shapes:
        w = payload[pos:pos + fan_in * fan_out].reshape(fan_in, fan_out).copy()
        pos += fan_in * fan_out
        layers.append((w, payload[pos:pos + fan_out].copy()))
        pos += fan_out
    return Weights(spec, layers)
