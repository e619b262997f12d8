"""Slow, scalar reference implementations used only to check the vectorised code."""
import math

EPS = 1e-10


def entropy(p):
    return -sum(x * math.log(max(x, EPS)) for x in p)


def entropy_loop(samples):
    """Entropy of the MC mean, by explicit loops over items, classes and samples."""
    n_items, n_classes, n_samples = samples.shape
    out = []
    for n in range(n_items):
        mean = [sum(samples[n, c, t] for t in range(n_samples)) / n_samples for c in range(n_classes)]
        out.append(entropy(mean))
    return out


def bald_loop(samples):
    n_items, n_classes, n_samples = samples.shape
    out = []
    for n in range(n_items):
        mean = [0.0] * n_classes
        for t in range(n_samples):
            for c in range(n_classes):
                mean[c] += samples[n, c, t] / n_samples
        expected = 0.0
        for t in range(n_samples):
            expected += entropy([samples[n, c, t] for c in range(n_classes)]) / n_samples
        out.append(max(entropy(mean) - expected, 0.0))
    return out


def numeric_gradient(f, params, h=1e-5):
    """Central differences of scalar ``f()`` w.r.t. every entry of each array in ``params``."""
    grads = []
    for p in params:
        g = [0.0] * p.size
        flat = p.reshape(-1)
        for i in range(p.size):
            old = flat[i]
            flat[i] = old + h
            up = f()
            flat[i] = old - h
            down = f()
            flat[i] = old
            g[i] = (up - down) / (2 * h)
        grads.append(g)
    return grads


def gradcheck_max_rel_error(weights, x, y, mask_seed=None, h=1e-5, floor=1e-8):
    """Max over all parameters of ``|analytic - numeric| / max(|analytic|, |numeric|, floor)``."""
    import numpy as np
    from alearn.model import gradient, loss

    analytic = gradient(weights, x, y, mask_seed)
    params = [p for layer in weights.layers for p in layer]
    numeric = numeric_gradient(lambda: loss(weights, x, y, mask_seed), params, h)
    worst = 0.0
    for a, n in zip([g for layer in analytic.layers for g in layer], numeric):
        a, n = a.reshape(-1), np.asarray(n)
        rel = np.abs(a - n) / np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float(rel.max()))
    return worst
