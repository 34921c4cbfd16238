import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trajkit import Checkpoint, Dtype, TensorRecord, TrajectoryStore


def random_store(rng: np.random.Generator, n: int, p: int) -> TrajectoryStore:
    return TrajectoryStore.from_arrays(rng.standard_normal((n, p)))


def random_checkpoint(rng: np.random.Generator, index: int = 0, max_rank: int = 4) -> Checkpoint:
    tensors = []
    for ti in range(int(rng.integers(1, 5))):
        dtype = Dtype(int(rng.integers(0, 3)))
        rank = int(rng.integers(0, max_rank + 1))
        dims = tuple(int(d) for d in rng.integers(1, 4, size=rank))
        nel = int(np.prod(dims)) if dims else 1
        data = rng.standard_normal(nel).astype(dtype.np_dtype)
        tensors.append(TensorRecord(f"t{ti}.x", dtype, dims, data))
    return Checkpoint(index=index, label=f"ckpt{index}", tensors=tensors)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
