"""Cleaning pipeline: filter corrupted series, segment long recordings,
rescale to [0, 1]. All functions are pure; parallelizing over samples is safe."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateInputError(ValueError):
    """Zero-range input where a spread of values is required."""


@dataclass(frozen=True)
class FilterReport:
    kept: int
    dropped_short: int
    dropped_flat: int
    dropped_nonfinite: int

    @property
    def total(self) -> int:
        return self.kept + self.dropped_short + self.dropped_flat + self.dropped_nonfinite


def filter_series(raw: list, min_len: int) -> tuple[list[np.ndarray], FilterReport]:
    """Drop series that are too short, contain non-finite values, or are flat.

    Checked in that order, one reason counted per dropped series. The report
    accounts for every input.
    """
    kept: list[np.ndarray] = []
    short = flat = nonfinite = 0
    for series in raw:
        arr = np.asarray(series, dtype=np.float64)
        if len(arr) < min_len:
            short += 1
        elif not np.all(np.isfinite(arr)):
            nonfinite += 1
        elif arr.max() == arr.min():
            flat += 1
        else:
            kept.append(arr)
    return kept, FilterReport(len(kept), short, flat, nonfinite)


def segment_series(series, seg_len: int, seg_step: int) -> list[np.ndarray]:
    """Cut a long recording into fixed-length segments at offsets 0, step, 2*step, ...

    Returns [] when no full window fits; the caller decides whether that is an
    error. Labels are inherited by the caller (segments are raw value arrays).
    """
    if seg_len < 1 or seg_step < 1:
        raise ValueError("seg_len and seg_step must be >= 1")
    arr = np.asarray(series, dtype=np.float64)
    if seg_len > len(arr):
        return []
    starts = range(0, len(arr) - seg_len + 1, seg_step)
    return [arr[s:s + seg_len].copy() for s in starts]


def segment_count(length: int, seg_len: int, seg_step: int) -> int:
    if seg_len > length:
        return 0
    return (length - seg_len) // seg_step + 1


def normalize(series) -> np.ndarray:
    """Per-sample min-max rescale onto [0, 1]; min maps to 0, max to 1."""
    arr = np.asarray(series, dtype=np.float64)
    lo, hi = arr.min(), arr.max()
    if hi == lo:
        raise DegenerateInputError("zero-range series cannot be normalized")
    return (arr - lo) / (hi - lo)
