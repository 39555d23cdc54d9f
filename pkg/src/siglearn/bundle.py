"""Exploration-bundle assembly: match scores, clusters, KDE densities, DTW
matrix, and (de)serialization of the single JSON document the UI consumes.

Schema (version "1"), field by field:

* ``schema_version``: "1".
* ``meta``: dataset ``name``, ``n_samples``, ``length``, ``n_signatures``,
  ``class_names`` (raw label of class 0, class 1), ``class_colors``,
  ``default_threshold``, ``kde_bandwidth``.
* ``series``: N x m sample values; ``labels``: N mapped {0,1} labels.
* ``signatures``: rank-ordered list of {id, rank, values, ig, theta,
  source: {sample, start, end}, display}; ``rank`` starts at 1 and IG is
  non-increasing with rank; ``display`` marks the top min(k, 10).
* ``scores``: N x k Score_match values in [0, 1], normalized per signature by
  the training-set distance extrema; ``best_offsets``: N x k argmin start
  positions (hard minimum).
* ``clusters``: per sample {cluster: signature id | null, members: k flags}
  at the default threshold.
* ``kde``: ``grid`` (fixed over [0, 1]), per-signature per-class ``densities``
  and globally max-normalized ``widths``.
* ``dtw``: k x k signature DTW distances.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import CLASS_COLORS, Dataset, RunConfig
from .features import assign_clusters, dtw_matrix, score_matrix, signature_transform
from .model import TrainedModel

SCHEMA_VERSION = "1"

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))


def gaussian_kernel(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.exp(-0.5 * x * x) / _SQRT_2PI


def kde_density(scores, bandwidth: float, grid) -> np.ndarray:
    """Gaussian KDE evaluated on the grid: f(g) = mean_i G((g - s_i)/h) / h.

    Empty score sets yield all-zero densities (an empty class is a valid
    state for the streamgraph, not an error)."""
    if bandwidth <= 0:
        raise ValueError("bandwidth must be > 0")
    grid = np.asarray(grid, dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        return np.zeros_like(grid)
    z = (grid[:, None] - scores[None, :]) / bandwidth
    return gaussian_kernel(z).mean(axis=1) / bandwidth


def normalize_densities(density_rows: list[np.ndarray]) -> list[np.ndarray]:
    """Divide every density by the single maximum across all rows; all-zero
    input stays all-zero."""
    if not density_rows:
        return []
    top = max((float(np.max(row)) if len(row) else 0.0) for row in density_rows)
    if top == 0.0:
        return [np.zeros_like(np.asarray(r, dtype=np.float64)) for r in density_rows]
    return [np.asarray(r, dtype=np.float64) / top for r in density_rows]


def build_bundle(model: TrainedModel, dataset: Dataset,
                 train_dataset: Dataset | None = None,
                 name: str = "dataset", class_names=("0", "1")) -> dict:
    """Assemble the exploration bundle for ``dataset``.

    ``train_dataset`` supplies the score-normalization extrema (per-signature
    min/max distances over the training samples); it defaults to ``dataset``
    when the exploration set is the training set itself.
    """
    cfg: RunConfig = model.config
    ranked = sorted(model.signatures, key=lambda s: (-s.ig, s.id))
    transform = signature_transform(dataset.values, ranked)
    if train_dataset is None:
        col_min, col_max = transform.col_min, transform.col_max
    else:
        ref = signature_transform(train_dataset.values, ranked)
        col_min, col_max = ref.col_min, ref.col_max
    scores = score_matrix(transform, col_min=col_min, col_max=col_max)
    clusters = assign_clusters(scores, cfg.default_threshold)

    grid = np.linspace(0.0, 1.0, cfg.kde_grid_size)
    labels = dataset.labels
    densities = []
    for j in range(len(ranked)):
        for cls in (0, 1):
            densities.append(kde_density(scores[labels == cls, j], cfg.kde_bandwidth, grid))
    widths = normalize_densities(densities)

    sig_entries = []
    for rank, sig in enumerate(ranked, start=1):
        sig_entries.append({
            "id": sig.id,
            "rank": rank,
            "values": sig.values.tolist(),
            "ig": float(sig.ig),
            "theta": float(sig.theta),
            "source": {"sample": sig.source[0], "start": sig.source[1], "end": sig.source[2]},
            "display": rank <= min(len(ranked), 10),
        })
    kde_entry = {"grid": grid.tolist(), "bandwidth": cfg.kde_bandwidth,
                 "densities": [], "widths": []}
    for j in range(len(ranked)):
        kde_entry["densities"].append({
            "0": densities[2 * j].tolist(), "1": densities[2 * j + 1].tolist()})
        kde_entry["widths"].append({
            "0": widths[2 * j].tolist(), "1": widths[2 * j + 1].tolist()})
    return {
        "schema_version": SCHEMA_VERSION,
        "meta": {
            "name": name,
            "n_samples": dataset.n,
            "length": dataset.length,
            "n_signatures": len(ranked),
            "class_names": list(class_names),
            "class_colors": list(CLASS_COLORS),
            "default_threshold": cfg.default_threshold,
            "kde_bandwidth": cfg.kde_bandwidth,
        },
        "series": dataset.values.tolist(),
        "labels": dataset.labels.tolist(),
        "signatures": sig_entries,
        "scores": scores.tolist(),
        "best_offsets": transform.offsets.tolist(),
        "clusters": [{"cluster": c, "members": flags} for c, flags in clusters],
        "kde": kde_entry,
        "dtw": dtw_matrix(ranked).tolist(),
    }


def write_bundle(bundle: dict, path) -> None:
    Path(path).write_text(json.dumps(bundle, separators=(",", ":")) + "\n")


def load_bundle(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def export_bundle(model: TrainedModel, dataset: Dataset, path,
                  train_dataset: Dataset | None = None, name: str = "dataset",
                  class_names=("0", "1")) -> dict:
    bundle = build_bundle(model, dataset, train_dataset=train_dataset,
                          name=name, class_names=class_names)
    write_bundle(bundle, path)
    return bundle
