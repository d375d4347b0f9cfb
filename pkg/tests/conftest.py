import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from garnet import KnnConfig, knn_neighbors  # noqa: E402
from garnet._kernels import edge_sqdist  # noqa: E402


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger numba compilation once so individual tests time the algorithms,
    not the JIT."""
    pts = np.random.default_rng(0).standard_normal((32, 4))
    knn_neighbors(pts, KnnConfig(k=3, mode="exact"))
    knn_neighbors(pts, KnnConfig(k=3, mode="approx", approx_ef=8, seed=0))
    edge_sqdist(pts, np.array([0, 1]), np.array([2, 3]))
