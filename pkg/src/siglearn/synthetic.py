"""Seeded synthetic datasets for end-to-end tests, variant sanity checks, and
the scalability sweep. All values are constructed inside [0, 1] so no
renormalization is needed (and none is applied unless a test wants it)."""

from __future__ import annotations

import numpy as np

from .core import Dataset, TimeSeries


def _background(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    t = np.arange(m) / m
    phase = rng.uniform(0, 2 * np.pi, size=(n, 2))
    freq = rng.uniform(1.0, 2.5, size=(n, 2))
    x = (0.40
         + 0.10 * np.sin(2 * np.pi * freq[:, :1] * t + phase[:, :1])
         + 0.05 * np.sin(2 * np.pi * freq[:, 1:] * t + phase[:, 1:]))
    x += rng.normal(0.0, 0.015, size=(n, m))
    return x


def _spike(width: int) -> np.ndarray:
    # fixed bump shape shared by every positive sample
    u = np.linspace(-2.2, 2.2, width)
    return 0.35 * np.exp(-0.5 * u * u)


def motif_dataset(n: int, m: int, seed: int, spike_width: int = 9):
    """Binary dataset where class 1 carries one planted bump at a random
    position. Returns (Dataset, regions): regions[i] is the (start, end)
    half-open planted span for positive samples, None for negatives."""
    if m < spike_width + 8:
        raise ValueError("series too short for the planted bump")
    rng = np.random.default_rng(seed)
    half = n // 2
    labels = np.array([0] * (n - half) + [1] * half)
    x = _background(rng, n, m)
    shape = _spike(spike_width)
    regions: list[tuple[int, int] | None] = [None] * n
    for i in np.flatnonzero(labels == 1):
        start = int(rng.integers(2, m - spike_width - 2))
        x[i, start:start + spike_width] += shape
        regions[i] = (start, start + spike_width)
    x = np.clip(x, 0.0, 1.0)
    samples = tuple(TimeSeries(id=i, values=x[i], label=int(labels[i])) for i in range(n))
    return Dataset(samples), regions


def offset_dataset(n: int, m: int, seed: int, gap: float = 0.4) -> Dataset:
    """Classes share the same waveform distribution and differ only by a
    constant level: class 0 sits at 0.5 - gap/2, class 1 at 0.5 + gap/2.
    Per-sample min-max normalization removes the difference exactly."""
    rng = np.random.default_rng(seed)
    half = n // 2
    labels = np.array([0] * (n - half) + [1] * half)
    t = np.arange(m) / m
    phase = rng.uniform(0, 2 * np.pi, size=(n, 1))
    x = 0.5 + 0.12 * np.sin(2 * np.pi * 2.0 * t + phase)
    x = x + rng.normal(0.0, 0.02, size=(n, m))
    x += np.where(labels[:, None] == 1, gap / 2.0, -gap / 2.0)
    x = np.clip(x, 0.01, 0.99)
    samples = tuple(TimeSeries(id=i, values=x[i], label=int(labels[i])) for i in range(n))
    return Dataset(samples)
