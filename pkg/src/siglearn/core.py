"""Domain types, run configuration, label mapping, and dataset splitting.

Everything here is immutable after construction and safe to share across
threads. Numeric payloads are float64 numpy arrays with the writeable flag
cleared.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

VARIANTS = ("VT", "S-FE", "SP-T", "JT")

CLASS_COLORS = ("#4e79a7", "#f28e2b")  # class 0 blue, class 1 orange


class UnsupportedDatasetError(ValueError):
    """Raised for inputs outside the binary, equal-length contract."""


class ConfigError(ValueError):
    """Raised for invalid or unknown configuration values."""


def _frozen_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d series, got shape {arr.shape}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """One normalized univariate sample with a binary label."""

    id: int
    values: np.ndarray
    label: int

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if len(self.values) < 3:
            raise ValueError(f"series {self.id}: length {len(self.values)} < 3")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"series {self.id}: non-finite values")
        if self.values.min() < 0.0 or self.values.max() > 1.0:
            raise ValueError(f"series {self.id}: values outside [0,1]; normalize first")
        if self.label not in (0, 1):
            raise ValueError(f"series {self.id}: label {self.label} not in {{0,1}}")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Dataset:
    """Equal-length samples with cached class counts and a stacked matrix view."""

    samples: tuple[TimeSeries, ...]

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.samples:
            raise ValueError("empty dataset")
        m = len(self.samples[0])
        for s in self.samples:
            if len(s) != m:
                raise ValueError(f"unequal lengths: {len(s)} vs {m}")

    @property
    def n(self) -> int:
        return len(self.samples)

    @property
    def length(self) -> int:
        return len(self.samples[0])

    @cached_property
    def labels(self) -> np.ndarray:
        y = np.array([s.label for s in self.samples], dtype=np.int64)
        y.flags.writeable = False
        return y

    @cached_property
    def values(self) -> np.ndarray:
        x = np.stack([s.values for s in self.samples])
        x.flags.writeable = False
        return x

    @property
    def class_counts(self) -> tuple[int, int]:
        n1 = int(self.labels.sum())
        return (self.n - n1, n1)

    def subset(self, indices) -> "Dataset":
        return Dataset(tuple(self.samples[i] for i in indices))

    @staticmethod
    def from_arrays(values: np.ndarray, labels, ids=None) -> "Dataset":
        values = np.asarray(values, dtype=np.float64)
        labels = np.asarray(labels)
        if ids is None:
            ids = range(len(values))
        return Dataset(tuple(
            TimeSeries(id=int(i), values=v, label=int(l))
            for i, v, l in zip(ids, values, labels)
        ))


@dataclass(frozen=True)
class Signature:
    """A learnable subsequence with provenance and its information-gain score.

    ``source`` is (sample id, start, end) with end inclusive, recording where
    the initializer cut the segment; after joint training the values drift
    away from that segment but the provenance is kept.
    """

    id: int
    values: np.ndarray
    ig: float
    theta: float
    source: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.ig < 0:
            raise ValueError(f"signature {self.id}: negative information gain")

    def __len__(self) -> int:
        return len(self.values)


def map_labels(raw_labels) -> tuple[np.ndarray, dict]:
    """Map two arbitrary numeric labels onto {0, 1}, smaller raw value -> 0.

    Returns the mapped labels and a metadata dict recording the mapping.
    Any strictly increasing relabeling of the raw values yields the same
    output, so UCR's {-1,1}, {1,2}, {0,1} conventions all collapse to {0,1}.
    """
    raw = np.asarray(raw_labels, dtype=np.float64)
    distinct = np.unique(raw)
    if len(distinct) != 2:
        raise UnsupportedDatasetError(
            f"need exactly two distinct labels, got {len(distinct)}: {distinct.tolist()}"
        )
    lo, hi = float(distinct[0]), float(distinct[1])
    mapped = (raw == hi).astype(np.int64)
    return mapped, {"raw_to_mapped": {_fmt_label(lo): 0, _fmt_label(hi): 1}}


def _fmt_label(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else str(x)


def split_dataset(dataset: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic stratified split; class proportions preserved within one sample."""
    if not (0.0 < test_fraction < 1.0):
        raise ValueError(f"test_fraction {test_fraction} not in (0, 1)")
    y = dataset.labels
    rng = np.random.default_rng(seed)
    test_idx: list[int] = []
    for cls in (0, 1):
        members = np.flatnonzero(y == cls)
        if len(members) < 2:
            raise ValueError(f"class {cls} has {len(members)} sample(s); need >= 2 to split")
        n_test = int(round(test_fraction * len(members)))
        n_test = min(max(n_test, 1), len(members) - 1)
        picked = rng.permutation(members)[:n_test]
        test_idx.extend(int(i) for i in picked)
    test_set = set(test_idx)
    train_idx = [i for i in range(dataset.n) if i not in test_set]
    return dataset.subset(train_idx), dataset.subset(sorted(test_idx))


# Config ------------------------------------------------------------------

_CONFIG_DOC = {
    "k": "number of signatures",
    "pips_rate": "PIP sampling rate in (0, 1]; num_pips = max(3, round(rate * m))",
    "window_len": "sliding window length (default: max(ceil(0.2*m), max_sig_len))",
    "window_step": "sliding window stride",
    "r": "number of statistical features per window",
    "softmin_alpha": "sharpness of the differentiable minimum used in training",
    "learning_rate": "optimizer step size",
    "batch_size": "mini-batch size",
    "epochs": "maximum training epochs",
    "seed": "RNG seed for init and shuffling",
    "variant": "feature channels: VT | S-FE | SP-T | JT",
    "min_sig_len": "shortest candidate signature (default: max(3, ceil(0.05*m)))",
    "max_sig_len": "longest candidate signature (default: window_len)",
    "d_model": "Transformer embedding width",
    "n_heads": "attention heads (must divide d_model)",
    "n_layers": "encoder layers",
    "ffn_dim": "feed-forward hidden width",
    "patience": "early-stopping patience in epochs (on validation loss)",
    "precision": "float64 (default) or float32 training precision",
    "adjacent_pairs_only": "restrict candidates to adjacent PIP pairs",
    "validation_fraction": "fraction of the training set carved out for early stopping",
    "default_threshold": "bundle default match-score threshold",
    "kde_bandwidth": "Gaussian KDE bandwidth for exported densities",
    "kde_grid_size": "KDE grid points over [0, 1]",
}


@dataclass(frozen=True)
class RunConfig:
    """All knobs of one run. Fields with ``None`` defaults are derived from
    the series length by :meth:`resolve`; everything else is validated at
    construction so bad configs fail before any computation."""

    k: int = 30
    pips_rate: float = 0.2
    window_len: int | None = None
    window_step: int = 10
    r: int = 8
    softmin_alpha: float = 10.0
    learning_rate: float = 0.0005
    batch_size: int = 128
    epochs: int = 300
    seed: int = 0
    variant: str = "JT"
    min_sig_len: int | None = None
    max_sig_len: int | None = None
    d_model: int = 64
    n_heads: int = 4
    n_layers: int = 2
    ffn_dim: int = 128
    patience: int = 20
    precision: str = "float64"
    adjacent_pairs_only: bool = False
    validation_fraction: float = 0.2
    default_threshold: float = 0.8
    kde_bandwidth: float = 0.05
    kde_grid_size: int = 201

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if not (0.0 < self.pips_rate <= 1.0):
            raise ConfigError("pips_rate must be in (0, 1]")
        if self.window_step < 1:
            raise ConfigError("window_step must be >= 1")
        if self.softmin_alpha <= 0:
            raise ConfigError("softmin_alpha must be > 0")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be > 0")
        if self.batch_size < 1 or self.epochs < 1:
            raise ConfigError("batch_size and epochs must be >= 1")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.r < 0:
            raise ConfigError("r must be >= 0")
        if self.d_model % self.n_heads != 0:
            raise ConfigError("d_model must be divisible by n_heads")
        if self.precision not in ("float64", "float32"):
            raise ConfigError("precision must be float64 or float32")
        if not (0.0 < self.validation_fraction < 1.0):
            raise ConfigError("validation_fraction must be in (0, 1)")
        if not (0.0 <= self.default_threshold <= 1.0):
            raise ConfigError("default_threshold must be in [0, 1]")
        if self.kde_bandwidth <= 0 or self.kde_grid_size < 2:
            raise ConfigError("kde_bandwidth must be > 0 and kde_grid_size >= 2")
        for name in ("window_len", "min_sig_len", "max_sig_len"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be >= 1")

    def resolve(self, m: int) -> "RunConfig":
        """Fill m-dependent defaults and check cross-field invariants."""
        max_sig = self.max_sig_len
        window = self.window_len
        if window is None:
            base = math.ceil(0.2 * m)
            window = max(base, max_sig) if max_sig is not None else base
        if max_sig is None:
            max_sig = window
        min_sig = self.min_sig_len
        if min_sig is None:
            min_sig = max(3, math.ceil(0.05 * m))
        min_sig = min(min_sig, max_sig)
        cfg = dataclasses.replace(
            self, window_len=window, max_sig_len=max_sig, min_sig_len=min_sig)
        if cfg.window_len > m:
            raise ConfigError(f"window_len {cfg.window_len} exceeds series length {m}")
        if cfg.window_step > cfg.window_len:
            raise ConfigError("window_step must be <= window_len")
        if cfg.max_sig_len > cfg.window_len:
            raise ConfigError("max_sig_len must be <= window_len")
        if cfg.min_sig_len < 3:
            raise ConfigError("min_sig_len must be >= 3")
        return cfg

    @property
    def dtype(self):
        return np.float64 if self.precision == "float64" else np.float32

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(values: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return RunConfig(**values)

    @staticmethod
    def from_file(path) -> "RunConfig":
        with open(path) as fh:
            try:
                values = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(values, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return RunConfig.from_dict(values)


def config_schema() -> dict:
    """Key -> one-line description, for docs and --help."""
    return dict(_CONFIG_DOC)
