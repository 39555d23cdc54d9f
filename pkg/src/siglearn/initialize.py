"""Signature initialization: perceptually-important-point extraction,
candidate segments between PIP pairs, information-gain scoring against the
training set, and top-k selection.

Candidate scoring is the one genuinely heavy step (every candidate is matched
against every training sample), so candidates are grouped by length and scored
through one fused BLAS kernel per group; the scalar ``information_gain`` and
the batched scorer implement the same threshold scan and are cross-checked in
the test suite.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import Dataset, RunConfig, Signature

log = logging.getLogger(__name__)

# Relative tolerance for "equal" perpendicular distances: collinear inputs
# produce all-zero PDs only up to float dust, and the documented
# smallest-index tie rule must still apply there.
_PD_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class PipSet:
    """Sorted breakpoint indices into one series, endpoints always included."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) < 2 or idx[0] != 0:
            raise ValueError("PipSet must start at 0 and contain >= 2 indices")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("PipSet indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.indices)


@dataclass
class Candidate:
    """A scored candidate segment; ``source`` end index is inclusive."""

    values: np.ndarray
    source: tuple[int, int, int]
    ig: float = 0.0
    theta: float = 0.0

    def __len__(self) -> int:
        return len(self.values)


def znorm_positions(m: int) -> np.ndarray:
    """z-normalized position axis for the PD formula: mean 0, population std 1."""
    if m < 2:
        raise ValueError("need at least 2 positions")
    p = np.arange(1, m + 1, dtype=np.float64)
    return (p - p.mean()) / p.std()


def perpendicular_distance(pos: int, s: int, e: int, series, positions) -> float:
    """|a*P_pos - T_pos + c| / sqrt(a^2 + 1) against the chord from s to e.

    The magnitude is what the selection loop ranks, so the signed formula is
    taken in absolute value.
    """
    if not (s < pos < e):
        raise ValueError(f"pos {pos} not interior to ({s}, {e})")
    t = np.asarray(series, dtype=np.float64)
    p = np.asarray(positions, dtype=np.float64)
    a = (t[e] - t[s]) / (p[e] - p[s])
    c = t[e] - a * p[e]
    return float(abs(a * p[pos] - t[pos] + c) / np.sqrt(a * a + 1.0))


def _segment_best(t: np.ndarray, p: np.ndarray, s: int, e: int) -> tuple[float, int] | None:
    """(max PD, smallest argmax index) over the interior of segment (s, e)."""
    if e - s < 2:
        return None
    a = (t[e] - t[s]) / (p[e] - p[s])
    c = t[e] - a * p[e]
    interior = np.arange(s + 1, e)
    pd = np.abs(a * p[interior] - t[interior] + c) / np.sqrt(a * a + 1.0)
    top = pd.max()
    tol = _PD_TIE_RTOL * max(1.0, top)
    best = interior[pd >= top - tol][0]
    return float(top), int(best)


def extract_pips(series, num_pips: int) -> PipSet:
    """Recursively insert the interior index with the largest perpendicular
    distance to its enclosing PIP chord until ``num_pips`` indices are chosen.
    Ties go to the smallest index."""
    t = np.asarray(series, dtype=np.float64)
    m = len(t)
    if not (2 <= num_pips <= m):
        raise ValueError(f"num_pips {num_pips} not in [2, {m}]")
    p = znorm_positions(m)
    pips = [0, m - 1]
    best_per_segment: dict[tuple[int, int], tuple[float, int] | None] = {
        (0, m - 1): _segment_best(t, p, 0, m - 1)}
    while len(pips) < num_pips:
        candidates = [v for v in best_per_segment.values() if v is not None]
        top = max(c[0] for c in candidates)
        tol = _PD_TIE_RTOL * max(1.0, top)
        chosen = min(idx for pd, idx in candidates if pd >= top - tol)
        lo = max(i for i in pips if i < chosen)
        hi = min(i for i in pips if i > chosen)
        del best_per_segment[(lo, hi)]
        best_per_segment[(lo, chosen)] = _segment_best(t, p, lo, chosen)
        best_per_segment[(chosen, hi)] = _segment_best(t, p, chosen, hi)
        pips.append(chosen)
        pips.sort()
    return PipSet(indices=tuple(pips))


def generate_candidates(pips: PipSet, series, min_len: int, max_len: int,
                        sample_id: int = 0, adjacent_only: bool = False) -> list[Candidate]:
    """One candidate per PIP pair (i, j), i < j, whose inclusive span length
    falls within [min_len, max_len]. Non-adjacent pairs are included unless
    ``adjacent_only``; that keeps the variable-length diversity of the pool."""
    t = np.asarray(series, dtype=np.float64)
    idx = pips.indices
    out = []
    for a in range(len(idx) - 1):
        stop = a + 2 if adjacent_only else len(idx)
        for b in range(a + 1, stop):
            start, end = idx[a], idx[b]
            length = end - start + 1
            if length > max_len:
                break  # later b only grow the span
            if length >= min_len:
                out.append(Candidate(values=t[start:end + 1].copy(),
                                     source=(sample_id, start, end)))
    return out


# Information gain -------------------------------------------------------------

def entropy(count_a: int, count_b: int) -> float:
    """Two-class entropy in nats; 0*log(0) is 0. Base e is a documented choice
    (only rankings and threshold picks consume it)."""
    if count_a < 0 or count_b < 0 or count_a + count_b == 0:
        raise ValueError("counts must be non-negative and not both zero")
    n = count_a + count_b
    h = 0.0
    for c in (count_a, count_b):
        if c:
            frac = c / n
            h -= frac * np.log(frac)
    return float(h)


def _entropy_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a + b
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.float64)
    for c in (a, b):
        frac = np.divide(c, n, out=np.zeros_like(out), where=n > 0)
        term = np.zeros_like(out)
        np.log(frac, out=term, where=frac > 0)
        out -= frac * term
    return out


def information_gain(distances, labels) -> tuple[float, float]:
    """Best threshold split of the distances: scans midpoints between
    consecutive distinct sorted values, X1 = {d <= theta}. Returns
    (theta, ig); IG ties resolve to the smaller theta. With no distinct pair
    of distances there is no split and the gain is 0."""
    d = np.asarray(distances, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if d.shape != y.shape or d.ndim != 1 or len(d) < 2:
        raise ValueError("need >= 2 paired distances and labels")
    thetas, igs = information_gain_batch(d[None, :], y)
    return float(thetas[0]), float(igs[0])


def information_gain_batch(dist_rows: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``information_gain`` over the rows of (C, N) distances."""
    y = np.asarray(labels, dtype=np.int64)
    n = len(y)
    total_b = int(y.sum())
    total_a = n - total_b
    if total_a == 0 or total_b == 0:
        raise ValueError("both classes must be present")
    order = np.argsort(dist_rows, axis=1, kind="stable")
    ds = np.take_along_axis(dist_rows, order, axis=1)
    ys = y[order]
    prefix_b = np.cumsum(ys, axis=1)[:, :-1].astype(np.float64)
    sizes = np.arange(1, n, dtype=np.float64)
    prefix_a = sizes - prefix_b
    parent = entropy(total_a, total_b)
    child = (sizes / n) * _entropy_arrays(prefix_a, prefix_b) + \
        ((n - sizes) / n) * _entropy_arrays(total_a - prefix_a, total_b - prefix_b)
    ig = parent - child
    ig[ds[:, :-1] >= ds[:, 1:]] = -1.0  # only midpoints between distinct values
    best = np.argmax(ig, axis=1)  # first max: smallest theta on ties
    rows = np.arange(len(dist_rows))
    thetas = 0.5 * (ds[rows, best] + ds[rows, best + 1])
    igs = ig[rows, best]
    no_split = igs < 0.0
    thetas[no_split] = ds[no_split, 0]
    igs[no_split] = 0.0
    return thetas, igs


# Candidate scoring and selection ----------------------------------------------

_SCORE_CHUNK = 256


def _min_distances_to_all(X: np.ndarray, group: np.ndarray,
                          dtype=np.float64) -> np.ndarray:
    """(nc, N) minimum offset distances of same-length candidates to all
    samples, via the fused ||S||^2 - 2 S.w + ||w||^2 kernel.

    This is the heaviest kernel of initialization (every candidate against
    every window of every sample), so the chunk arithmetic reuses the matmul
    output in place; ``dtype=float32`` halves the memory traffic when the
    caller only needs rankings.
    """
    nc, l = group.shape
    n, m = X.shape
    X = X.astype(dtype, copy=False)
    group = group.astype(dtype, copy=False)
    windows = np.ascontiguousarray(
        sliding_window_view(X, l, axis=1)).reshape(-1, l)
    o = m - l + 1
    csum = np.concatenate(
        [np.zeros((n, 1), dtype=dtype), np.cumsum(X * X, axis=1)], axis=1)
    mov = np.ascontiguousarray((csum[:, l:] - csum[:, :-l]).reshape(-1))
    ssq = np.einsum("cl,cl->c", group, group)
    out = np.empty((nc, n), dtype=dtype)
    for lo in range(0, nc, _SCORE_CHUNK):
        hi = min(lo + _SCORE_CHUNK, nc)
        g = group[lo:hi] @ windows.T
        g *= -2.0
        g += mov[None, :]
        np.minimum.reduce(g.reshape(hi - lo, n, o), axis=2, out=out[lo:hi])
        out[lo:hi] += ssq[lo:hi, None]
    np.maximum(out, 0.0, out=out)
    np.sqrt(out, out=out)
    return out


def score_candidates(candidates: list[Candidate], train: Dataset,
                     dtype=np.float64) -> None:
    """Fill each candidate's (theta, ig) against the training set, in place."""
    X = train.values
    y = train.labels
    by_len: dict[int, list[int]] = {}
    for i, c in enumerate(candidates):
        by_len.setdefault(len(c), []).append(i)
    for l in sorted(by_len):
        idx = by_len[l]
        group = np.stack([candidates[i].values for i in idx])
        dists = _min_distances_to_all(X, group, dtype=dtype)
        thetas, igs = information_gain_batch(dists.astype(np.float64, copy=False), y)
        for row, i in enumerate(idx):
            candidates[i].theta = float(thetas[row])
            candidates[i].ig = float(igs[row])


def num_pips_for(pips_rate: float, m: int) -> int:
    return min(m, max(3, round(pips_rate * m)))


def init_signatures(train: Dataset, config: RunConfig) -> list[Signature]:
    """PIP-extract every training sample, pool the candidate segments, score
    them by information gain against the whole training set, and keep the top
    k (ties: higher IG, shorter length, lower sample id, earlier start).

    Pool scoring runs at the config's precision (a float32 config roughly
    halves the dominant kernel's memory traffic); the selected winners are
    always re-scored in float64 so the stored gain and threshold are exact.
    """
    counts = train.class_counts
    if counts[0] == 0 or counts[1] == 0:
        raise ValueError("both classes must be present for initialization")
    cfg = config.resolve(train.length)
    n_pips = num_pips_for(cfg.pips_rate, train.length)
    pool: list[Candidate] = []
    seen: set[tuple[int, int, int]] = set()
    for sample in train.samples:
        pips = extract_pips(sample.values, n_pips)
        for cand in generate_candidates(pips, sample.values, cfg.min_sig_len,
                                        cfg.max_sig_len, sample_id=sample.id,
                                        adjacent_only=cfg.adjacent_pairs_only):
            if cand.source not in seen:
                seen.add(cand.source)
                pool.append(cand)
    if not pool:
        raise ValueError("no candidates: check min/max signature lengths vs PIP spacing")
    score_candidates(pool, train, dtype=cfg.dtype)
    pool.sort(key=lambda c: (-c.ig, len(c), c.source[0], c.source[1], c.source[2]))
    if len(pool) < cfg.k:
        log.warning("only %d candidates for k=%d; returning all", len(pool), cfg.k)
    top = pool[:cfg.k]
    if cfg.dtype is not np.float64:
        # selection used the fast ranking; the winners' stored gain/threshold
        # (and their relative order) must still be exact
        score_candidates(top, train, dtype=np.float64)
        top.sort(key=lambda c: (-c.ig, len(c), c.source[0], c.source[1], c.source[2]))
    return [Signature(id=i, values=c.values, ig=max(c.ig, 0.0), theta=c.theta,
                      source=c.source) for i, c in enumerate(top)]
