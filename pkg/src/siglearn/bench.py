"""UCR-style dataset ingestion, the four model variants, and the
accuracy/scalability harnesses."""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Dataset, RunConfig, map_labels
from .initialize import init_signatures
from .model import accuracy, train
from .preprocess import normalize
from .synthetic import motif_dataset
from . import core


class UcrParseError(ValueError):
    pass


@dataclass(frozen=True)
class BenchResult:
    dataset: str
    variant: str
    seed_accuracies: tuple[float, ...]
    seconds: float

    def __post_init__(self):
        for a in self.seed_accuracies:
            if not (0.0 <= a <= 1.0):
                raise ValueError(f"accuracy {a} outside [0, 1]")

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.seed_accuracies))


def _split_line(line: str, sep: str | None, lineno: int) -> tuple[list[str], str]:
    has_tab, has_comma = "\t" in line, "," in line
    if has_tab and has_comma:
        raise UcrParseError(f"line {lineno}: mixes tab and comma separators")
    found = "\t" if has_tab else ("," if has_comma else None)
    if sep is None:
        sep = found or "\t"
    elif found is not None and found != sep:
        raise UcrParseError(
            f"line {lineno}: separator {found!r} differs from the file's {sep!r}")
    return [tok for tok in line.strip().split(sep) if tok], sep


def load_ucr_tsv(path) -> tuple[Dataset, dict]:
    """Parse one UCR-style file (one sample per line: label, then m values,
    tab- or comma-separated), map labels onto {0,1}, and apply per-sample
    min-max normalization. Returns (dataset, metadata with the label map)."""
    raw_labels: list[float] = []
    rows: list[np.ndarray] = []
    sep: str | None = None
    width: int | None = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            tokens, sep = _split_line(line, sep, lineno)
            try:
                values = [float(t) for t in tokens]
            except ValueError as exc:
                raise UcrParseError(f"line {lineno}: non-numeric token ({exc})") from exc
            if not all(np.isfinite(v) for v in values):
                raise UcrParseError(f"line {lineno}: non-finite value")
            if len(values) < 4:
                raise UcrParseError(f"line {lineno}: need a label plus >= 3 values")
            if width is None:
                width = len(values) - 1
            elif len(values) - 1 != width:
                raise UcrParseError(
                    f"line {lineno}: row has {len(values) - 1} values, "
                    f"previous rows have {width}")
            raw_labels.append(values[0])
            rows.append(np.asarray(values[1:], dtype=np.float64))
    if not rows:
        raise UcrParseError(f"{path}: no samples")
    try:
        labels, label_meta = map_labels(raw_labels)
    except core.UnsupportedDatasetError as exc:
        raise UcrParseError(f"{path}: {exc}") from exc
    values = np.stack([normalize(r) for r in rows])
    return Dataset.from_arrays(values, labels), label_meta


def save_ucr_tsv(dataset: Dataset, path, sep: str = "\t") -> None:
    """Write a dataset back out in the same line format, full float precision."""
    with open(path, "w") as fh:
        for s in dataset.samples:
            fh.write(sep.join([str(s.label)] + [repr(float(v)) for v in s.values]) + "\n")


def run_variant(train_set: Dataset, test_set: Dataset, variant: str,
                config: RunConfig, seeds) -> BenchResult:
    """Train one variant once per seed and report test accuracies.

    Signature initialization is deterministic given the training data, so for
    SP-T/JT it runs once and is shared across seeds. Each seed carves its own
    stratified early-stopping slice from the training set.
    """
    if variant not in core.VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    cfg = dataclasses.replace(config, variant=variant).resolve(train_set.length)
    init_sigs = init_signatures(train_set, cfg) if variant in ("SP-T", "JT") else []
    accs = []
    t0 = time.perf_counter()
    for seed in seeds:
        run_cfg = dataclasses.replace(cfg, seed=int(seed))
        fit, holdout = _carve_validation(train_set, run_cfg)
        model = train(fit, holdout, init_sigs, run_cfg)
        accs.append(accuracy(model, test_set))
    return BenchResult(dataset="", variant=variant,
                       seed_accuracies=tuple(accs),
                       seconds=time.perf_counter() - t0)


def _carve_validation(train_set: Dataset, cfg: RunConfig) -> tuple[Dataset, Dataset | None]:
    counts = train_set.class_counts
    if min(counts) < 4:
        return train_set, None  # too small to hold anything out
    fit, holdout = core.split_dataset(train_set, cfg.validation_fraction, cfg.seed)
    return fit, holdout


def discover_ucr_dir(directory) -> dict[str, tuple[Path, Path]]:
    """Map dataset name -> (TRAIN path, TEST path) for every complete pair."""
    directory = Path(directory)
    out = {}
    for train_path in sorted(directory.glob("*_TRAIN*")):
        name = train_path.name.split("_TRAIN")[0]
        test_path = train_path.with_name(train_path.name.replace("_TRAIN", "_TEST"))
        if test_path.exists():
            out[name] = (train_path, test_path)
    return out


def bench_datasets(directory, variants, config: RunConfig, seeds,
                   log=print) -> list[BenchResult]:
    results = []
    for name, (train_path, test_path) in discover_ucr_dir(directory).items():
        train_set, _ = load_ucr_tsv(train_path)
        test_set, _ = load_ucr_tsv(test_path)
        for variant in variants:
            res = run_variant(train_set, test_set, variant, config, seeds)
            res = dataclasses.replace(res, dataset=name)
            log(f"{name} {variant}: mean acc {res.mean_accuracy:.3f} "
                f"(seeds {list(res.seed_accuracies)}) in {res.seconds:.1f}s")
            results.append(res)
    return results


def results_table(results: list[BenchResult]) -> str:
    lines = ["dataset,variant,mean_accuracy,seed_accuracies,seconds"]
    for r in results:
        accs = ";".join(f"{a:.4f}" for a in r.seed_accuracies)
        lines.append(f"{r.dataset},{r.variant},{r.mean_accuracy:.4f},{accs},{r.seconds:.2f}")
    return "\n".join(lines) + "\n"


def scalability_sweep(n_list, m_list, config: RunConfig,
                      log=print) -> list[dict]:
    """Fixed-epoch JT training time per (N, m) on seeded synthetic data; the
    epoch budget is ``config.epochs`` (no early stopping).

    ``train_seconds`` covers the gradient loop (features recomputed every
    step); ``init_seconds`` reports the one-off signature initialization
    separately since it is a different phase with different scaling.
    """
    rows = []
    for n in n_list:
        for m in m_list:
            cfg = dataclasses.replace(config, variant="JT").resolve(m)
            data, _ = motif_dataset(n, m, seed=cfg.seed)
            t0 = time.perf_counter()
            sigs = init_signatures(data, cfg)
            t1 = time.perf_counter()
            model = train(data, None, sigs, cfg)
            row = {"n": n, "m": m, "epochs": cfg.epochs,
                   "init_seconds": round(t1 - t0, 4),
                   "train_seconds": round(model.train_seconds, 4)}
            log(f"sweep N={n} m={m}: init {row['init_seconds']:.2f}s "
                f"train {row['train_seconds']:.2f}s")
            rows.append(row)
    return rows


def sweep_table(rows: list[dict]) -> str:
    lines = ["n,m,epochs,init_seconds,train_seconds"]
    for r in rows:
        lines.append(f"{r['n']},{r['m']},{r['epochs']},{r['init_seconds']},{r['train_seconds']}")
    return "\n".join(lines) + "\n"
