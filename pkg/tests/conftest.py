import numpy as np
import pytest

from pufc import dataset as ds


@pytest.fixture
def two_gaussians():
    """Well-separated 2-D Gaussian pair, 200 points per class."""
    def make(seed=0, n=200, sep=2.0):
        rng = np.random.default_rng(seed)
        X = np.vstack([
            rng.normal((sep, sep), 1.0, (n, 2)),
            rng.normal((-sep, -sep), 1.0, (n, 2)),
        ])
        y = np.array([1] * n + [-1] * n)
        return ds.Dataset("two-gaussians", X, y, ("x0", "x1"))
    return make


@pytest.fixture
def separable_line():
    """20-point 1-D dataset: positives on the right, negatives on the left."""
    X = np.concatenate([2 + 0.1 * np.arange(10), -2 - 0.1 * np.arange(10)])[:, None]
    y = np.array([1] * 10 + [-1] * 10)
    return ds.Dataset("line", X, y, ("x",))


@pytest.fixture
def csv_file(tmp_path):
    def write(rows, name="data.csv"):
        path = tmp_path / name
        path.write_text("\n".join(",".join(str(c) for c in r) for r in rows) + "\n")
        return str(path)
    return write
