"""Versioned on-disk layout of one training run.

A run directory holds:

* ``config.json``      resolved RunConfig snapshot
* ``meta.json``        ModelMeta fields plus the format version
* ``params.npz``       every parameter array, keyed like the live dict
* ``signatures.json``  refined signatures (values, ig, theta, source)
* ``init_signatures.json``  the initializer's output (written by ``init``)
* ``history.json``     per-epoch losses/accuracy and the best epoch
* ``dataset.npz``      the full input dataset (values, labels)
* ``split.json``       indices of the training samples within dataset.npz
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .core import Dataset, RunConfig, Signature
from .model import ModelMeta, TrainedModel

FORMAT_VERSION = "1"


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def signatures_to_json(signatures: list[Signature]) -> list[dict]:
    return [{"id": s.id, "values": s.values.tolist(), "ig": s.ig, "theta": s.theta,
             "source": list(s.source)} for s in signatures]


def signatures_from_json(entries: list[dict]) -> list[Signature]:
    return [Signature(id=e["id"], values=np.asarray(e["values"], dtype=np.float64),
                      ig=e["ig"], theta=e["theta"], source=tuple(e["source"]))
            for e in entries]


def save_dataset(run_dir: Path, dataset: Dataset, train_indices=None) -> None:
    run_dir.mkdir(parents=True, exist_ok=True)
    np.savez(run_dir / "dataset.npz", values=dataset.values, labels=dataset.labels)
    if train_indices is not None:
        _write_json(run_dir / "split.json",
                    {"train_indices": [int(i) for i in train_indices]})


def load_dataset(run_dir: Path) -> tuple[Dataset, list[int] | None]:
    with np.load(run_dir / "dataset.npz") as data:
        dataset = Dataset.from_arrays(data["values"], data["labels"])
    split_path = run_dir / "split.json"
    train_indices = None
    if split_path.exists():
        train_indices = json.loads(split_path.read_text())["train_indices"]
    return dataset, train_indices


def save_run(run_dir, model: TrainedModel, dataset: Dataset | None = None,
             train_indices=None) -> Path:
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    _write_json(run_dir / "config.json", model.config.to_dict())
    meta = dataclasses.asdict(model.meta)
    meta["format_version"] = FORMAT_VERSION
    _write_json(run_dir / "meta.json", meta)
    np.savez(run_dir / "params.npz", **model.params)
    _write_json(run_dir / "signatures.json", signatures_to_json(model.signatures))
    _write_json(run_dir / "history.json",
                {"best_epoch": model.best_epoch, "train_seconds": model.train_seconds,
                 **model.history})
    if dataset is not None:
        save_dataset(run_dir, dataset, train_indices)
    return run_dir


def load_run(run_dir) -> TrainedModel:
    run_dir = Path(run_dir)
    config = RunConfig.from_file(run_dir / "config.json")
    meta_raw = json.loads((run_dir / "meta.json").read_text())
    version = meta_raw.pop("format_version", None)
    if version != FORMAT_VERSION:
        raise ValueError(f"run format {version!r} != supported {FORMAT_VERSION!r}")
    meta = ModelMeta(**meta_raw)
    with np.load(run_dir / "params.npz") as data:
        params = {k: data[k].copy() for k in data.files}
    signatures = signatures_from_json(
        json.loads((run_dir / "signatures.json").read_text()))
    history = json.loads((run_dir / "history.json").read_text())
    best_epoch = history.pop("best_epoch")
    seconds = history.pop("train_seconds", 0.0)
    return TrainedModel(params=params, meta=meta, signatures=signatures,
                        history=history, config=config, best_epoch=best_epoch,
                        train_seconds=seconds)
