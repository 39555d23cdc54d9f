import numpy as np
import pytest

from siglearn.core import Dataset, RunConfig


@pytest.fixture
def tiny_dataset():
    rng = np.random.default_rng(0)
    values = rng.uniform(0, 1, size=(10, 24))
    labels = [0] * 5 + [1] * 5
    return Dataset.from_arrays(values, labels)


@pytest.fixture
def small_config():
    return RunConfig(k=4, batch_size=8, epochs=5, patience=5, window_step=4,
                     d_model=8, n_heads=2, n_layers=1, ffn_dim=16)
