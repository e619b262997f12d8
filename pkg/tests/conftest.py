import numpy as np
import pytest

ACCEPTANCE_LINES = []


def random_simplex(rng, n, c, t):
    """Random posterior tensor [n, c, t]; some slices are made sparse or one-hot."""
    x = rng.gamma(rng.uniform(0.1, 2.0), size=(n, c, t))
    x[rng.random((n, c, t)) < 0.15] = 0.0
    x[:, 0, :] += 1e-12
    return x / x.sum(axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
