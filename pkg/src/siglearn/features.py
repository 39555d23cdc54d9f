"""Signature-to-series distances, windowed feature tensors, statistical
features, match scores, DTW, and score-threshold clustering.

Two distance code paths coexist on purpose:

* the *direct* path squares explicit differences per offset. It has no
  cancellation error (a verbatim occurrence gives exactly 0.0) and backs every
  reported or exported number: ``seq_dist``, hard windowed features, the
  shapelet-transform matrix, best offsets.
* the *fused* path expands ||S - w||^2 = ||S||^2 - 2 S.w + ||w||^2 so the
  cross term becomes one BLAS matmul. It is used where throughput matters and
  ~1e-13 absolute error is irrelevant: candidate scoring during
  initialization and the soft (training) features.

All operations are pure; parallel evaluation over samples is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

STAT_FEATURE_NAMES = ("mean", "median", "std", "rms", "min", "max", "slope", "haar_detail_std")

# Guard inside sqrt on the training path only: the derivative of
# sqrt(||S - w||^2) blows up at an exact occurrence, which every initial
# signature has in its source sample.
_SQRT_EPS = 1e-12


@dataclass(frozen=True)
class MatchResult:
    score: float
    best_offset: int


@dataclass(frozen=True)
class SigMatrix:
    """Shapelet-transform matrix (N x k) with cached per-signature extrema."""

    values: np.ndarray
    offsets: np.ndarray
    col_min: np.ndarray
    col_max: np.ndarray

    def __post_init__(self):
        for name in ("values", "offsets", "col_min", "col_max"):
            getattr(self, name).flags.writeable = False


# Direct (exact) distances ---------------------------------------------------

def seq_dist(signature, series) -> tuple[float, int]:
    """Minimum Euclidean distance between the signature and every contiguous
    same-length subsequence; ties go to the smallest offset."""
    s = np.asarray(signature, dtype=np.float64)
    t = np.asarray(series, dtype=np.float64)
    if len(s) > len(t):
        raise ValueError(f"signature length {len(s)} exceeds series length {len(t)}")
    diff = sliding_window_view(t, len(s)) - s
    sq = np.einsum("oi,oi->o", diff, diff)
    best = int(np.argmin(sq))
    return float(np.sqrt(sq[best])), best


def seq_dist_many(X: np.ndarray, signature) -> tuple[np.ndarray, np.ndarray]:
    """``seq_dist`` against every row of X (N x m). Returns (dists, offsets)."""
    s = np.asarray(signature, dtype=np.float64)
    if len(s) > X.shape[1]:
        raise ValueError(f"signature length {len(s)} exceeds series length {X.shape[1]}")
    diff = sliding_window_view(X, len(s), axis=1) - s
    sq = np.einsum("noi,noi->no", diff, diff)
    offsets = np.argmin(sq, axis=1)
    d = np.sqrt(sq[np.arange(len(X)), offsets])
    return d, offsets


def soft_seq_dist(signature, series, alpha: float) -> float:
    """Differentiable surrogate for ``seq_dist``: the exp(-alpha d)-weighted
    mean of the per-offset distances. Lies in [min d, max d] and decreases
    monotonically toward the hard minimum as alpha grows."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    s = np.asarray(signature, dtype=np.float64)
    t = np.asarray(series, dtype=np.float64)
    if len(s) > len(t):
        raise ValueError(f"signature length {len(s)} exceeds series length {len(t)}")
    diff = sliding_window_view(t, len(s)) - s
    d = np.sqrt(np.einsum("oi,oi->o", diff, diff))
    logits = -alpha * d
    logits -= logits.max()
    w = np.exp(logits)
    return float((d * w).sum() / w.sum())


def signature_transform(dataset, signatures) -> SigMatrix:
    """Def.-3 matrix M[i][j] = SeqDist(T_i, S_j) with per-column min/max cached
    for score normalization. Uses the direct path."""
    X = dataset.values if hasattr(dataset, "values") else np.asarray(dataset, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("expected an (N, m) matrix of samples")
    n, k = X.shape[0], len(signatures)
    values = np.empty((n, k), dtype=np.float64)
    offsets = np.empty((n, k), dtype=np.int64)
    for j, sig in enumerate(signatures):
        vals = sig.values if hasattr(sig, "values") else sig
        values[:, j], offsets[:, j] = seq_dist_many(X, vals)
    return SigMatrix(values=values, offsets=offsets,
                     col_min=values.min(axis=0) if k else np.zeros(0),
                     col_max=values.max(axis=0) if k else np.zeros(0))


# Windowed features -----------------------------------------------------------

def window_count(m: int, window_len: int, window_step: int) -> int:
    if window_len > m:
        raise ValueError(f"window_len {window_len} exceeds series length {m}")
    return (m - window_len) // window_step + 1


def window_starts(m: int, window_len: int, window_step: int) -> np.ndarray:
    w = window_count(m, window_len, window_step)
    return np.arange(w) * window_step


def windowed_features(series, signatures, window_len: int, window_step: int,
                      alpha: float = 10.0, mode: str = "hard") -> np.ndarray:
    """k x w feature matrix of one series: entry (j, q) is the (soft) distance
    of signature j to the q-th sliding window."""
    t = np.asarray(series, dtype=np.float64)[None, :]
    sig_values = [s.values if hasattr(s, "values") else np.asarray(s, dtype=np.float64)
                  for s in signatures]
    if mode == "hard":
        z, _ = hard_windowed_batch(t, sig_values, window_len, window_step)
    elif mode == "soft":
        z, _ = soft_windowed_batch(t, sig_values, window_len, window_step, alpha)
    else:
        raise ValueError(f"mode must be 'hard' or 'soft', got {mode!r}")
    return z[0]


def hard_windowed_batch(X: np.ndarray, sig_values: list, window_len: int,
                        window_step: int) -> tuple[np.ndarray, np.ndarray]:
    """Direct-path hard windowed features for a batch.

    Returns (Z, offsets): Z is (N, k, w); offsets (N, k, w) holds the argmin
    start position of each window-local match *within the full series*.
    """
    n, m = X.shape
    w = window_count(m, window_len, window_step)
    k = len(sig_values)
    Z = np.empty((n, k, w), dtype=X.dtype)
    offsets = np.empty((n, k, w), dtype=np.int64)
    starts = window_starts(m, window_len, window_step)
    for j, s in enumerate(sig_values):
        l = len(s)
        if l > window_len:
            raise ValueError(f"signature length {l} exceeds window_len {window_len}")
        diff = sliding_window_view(X, l, axis=1) - s
        sq = np.einsum("noi,noi->no", diff, diff)
        r = window_len - l + 1
        per_window = sliding_window_view(sq, r, axis=1)[:, ::window_step, :]
        local = np.argmin(per_window, axis=2)
        Z[:, j, :] = np.sqrt(np.take_along_axis(
            per_window, local[:, :, None], axis=2)[:, :, 0])
        offsets[:, j, :] = local + starts[None, :]
    return Z, offsets


@dataclass
class SoftWindowContext:
    """Saved forward state for the soft windowed features of one batch."""

    dists: list          # per signature: (N, O_j) offset distances (eps-stabilized)
    weights: list        # per signature: (N, w, R_j) softmin weights
    outputs: np.ndarray  # (N, k, w) the forward result


def _offset_sq_fused(X: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Fused-path squared distances of one signature to all offsets: (N, O)."""
    l = len(s)
    view = sliding_window_view(X, l, axis=1)
    cross = view @ s  # (N, O) via BLAS
    csum = np.concatenate(
        [np.zeros((X.shape[0], 1), dtype=X.dtype), np.cumsum(X * X, axis=1)], axis=1)
    mov = csum[:, l:] - csum[:, :-l]
    sq = mov - 2.0 * cross + s @ s
    np.maximum(sq, 0.0, out=sq)
    return sq


def soft_windowed_batch(X: np.ndarray, sig_values: list, window_len: int,
                        window_step: int, alpha: float) -> tuple[np.ndarray, SoftWindowContext]:
    """Fused-path soft windowed features for a batch, with the forward state
    needed by :func:`soft_windowed_backward`."""
    n, m = X.shape
    w = window_count(m, window_len, window_step)
    k = len(sig_values)
    Z = np.empty((n, k, w), dtype=X.dtype)
    dists, weights = [], []
    for j, s in enumerate(sig_values):
        l = len(s)
        if l > window_len:
            raise ValueError(f"signature length {l} exceeds window_len {window_len}")
        d = np.sqrt(_offset_sq_fused(X, s) + _SQRT_EPS)
        r = window_len - l + 1
        dw = sliding_window_view(d, r, axis=1)[:, ::window_step, :]  # (N, w, R)
        logits = -alpha * dw
        logits = logits - logits.max(axis=2, keepdims=True)
        e = np.exp(logits)
        p = e / e.sum(axis=2, keepdims=True)
        Z[:, j, :] = (p * dw).sum(axis=2)
        dists.append(d)
        weights.append(p)
    return Z, SoftWindowContext(dists=dists, weights=weights, outputs=Z)


def soft_windowed_backward(ctx: SoftWindowContext, dZ: np.ndarray, X: np.ndarray,
                           sig_values: list, window_len: int, window_step: int,
                           alpha: float) -> list[np.ndarray]:
    """Gradients of sum(dZ * Z_soft) w.r.t. each signature's values.

    Chain: dZ -> softmin weights -> per-offset distances -> signature entries.
    d softmin / d d_u = p_u * (1 + alpha * (softmin - d_u)).
    """
    grads = []
    for j, s in enumerate(sig_values):
        l = len(s)
        d = ctx.dists[j]
        p = ctx.weights[j]
        out = ctx.outputs[:, j, :]
        r = window_len - l + 1
        g_d = np.zeros_like(d)
        dw = sliding_window_view(d, r, axis=1)[:, ::window_step, :]
        # (N, w, R) gradient through the softmin, scattered onto overlapping offsets
        g_local = p * (1.0 + alpha * (out[:, :, None] - dw)) * dZ[:, j, :][:, :, None]
        for q in range(g_local.shape[1]):
            start = q * window_step
            g_d[:, start:start + r] += g_local[:, q, :]
        h = g_d / d
        view = sliding_window_view(X, l, axis=1)
        cross = h.reshape(-1) @ view.reshape(-1, l)
        grads.append(s * h.sum() - cross)
    return grads


# Statistical features --------------------------------------------------------

def stat_features_window(window) -> np.ndarray:
    """Fixed-order statistics of one window: mean, median, std, RMS, min, max,
    least-squares slope, and the RMS of single-level Haar detail coefficients
    (std about zero; odd windows drop the final sample for pairing)."""
    x = np.asarray(window, dtype=np.float64)
    if len(x) < 2:
        raise ValueError("window length must be >= 2")
    return stat_feature_tensor(x[None, None, :])[0, :, 0]


def stat_feature_tensor(windows: np.ndarray) -> np.ndarray:
    """Vectorized statistics: (N, w, W) windows -> (N, r, W->) (N, 8, w)."""
    n, w, width = windows.shape
    if width < 2:
        raise ValueError("window length must be >= 2")
    t = np.arange(width, dtype=np.float64)
    t_centered = t - t.mean()
    denom = (t_centered * t_centered).sum()
    mean = windows.mean(axis=2)
    median = np.median(windows, axis=2)
    std = windows.std(axis=2)
    rms = np.sqrt((windows * windows).mean(axis=2))
    w_min = windows.min(axis=2)
    w_max = windows.max(axis=2)
    slope = (windows @ t_centered) / denom
    half = width // 2
    pairs = windows[:, :, :2 * half].reshape(n, w, half, 2)
    details = (pairs[:, :, :, 0] - pairs[:, :, :, 1]) / np.sqrt(2.0)
    haar = np.sqrt((details * details).mean(axis=2))
    return np.stack([mean, median, std, rms, w_min, w_max, slope, haar], axis=1)


def stat_windowed_batch(X: np.ndarray, window_len: int, window_step: int,
                        r: int = 8) -> np.ndarray:
    """(N, r, w) statistical feature tensor over the sliding-window grid."""
    if not (0 <= r <= len(STAT_FEATURE_NAMES)):
        raise ValueError(f"r must be in [0, {len(STAT_FEATURE_NAMES)}]")
    w = window_count(X.shape[1], window_len, window_step)
    if r == 0:
        return np.zeros((X.shape[0], 0, w), dtype=X.dtype)
    windows = sliding_window_view(X, window_len, axis=1)[:, ::window_step, :]
    return stat_feature_tensor(np.ascontiguousarray(windows))[:, :r, :].astype(X.dtype)


def fuse(sig: np.ndarray, stat: np.ndarray) -> np.ndarray:
    """Concatenate per-window feature rows, signature channels first."""
    sig = np.asarray(sig)
    stat = np.asarray(stat)
    if sig.size == 0 and stat.size == 0:
        raise ValueError("nothing to fuse")
    if sig.size == 0:
        return stat
    if stat.size == 0:
        return sig
    if sig.shape[-1] != stat.shape[-1]:
        raise ValueError(f"window counts differ: {sig.shape[-1]} vs {stat.shape[-1]}")
    return np.concatenate([sig, stat], axis=-2)


@dataclass(frozen=True)
class FeatureTensor:
    """Windowed feature tensors of one dataset: signature channels (N x k x w),
    statistical channels (N x r x w), and their fused concatenation
    (N x (k+r) x w, signatures first)."""

    sig: np.ndarray
    stat: np.ndarray
    joint: np.ndarray

    def __post_init__(self):
        n, k, w = self.sig.shape
        n2, r, w2 = self.stat.shape
        if (n, w) != (n2, w2):
            raise ValueError("signature and statistical tensors disagree on (N, w)")
        if self.joint.shape != (n, k + r, w):
            raise ValueError(f"joint shape {self.joint.shape} != {(n, k + r, w)}")

    @property
    def w(self) -> int:
        return self.sig.shape[2]

    @property
    def k(self) -> int:
        return self.sig.shape[1]

    @property
    def r(self) -> int:
        return self.stat.shape[1]


def feature_tensor(X: np.ndarray, sig_values: list, window_len: int,
                   window_step: int, r: int = 8, alpha: float = 10.0,
                   mode: str = "hard") -> FeatureTensor:
    """Assemble the full windowed representation for an (N, m) matrix."""
    n, m = X.shape
    w = window_count(m, window_len, window_step)
    if sig_values:
        if mode == "hard":
            z_sig, _ = hard_windowed_batch(X, sig_values, window_len, window_step)
        elif mode == "soft":
            z_sig, _ = soft_windowed_batch(X, sig_values, window_len, window_step, alpha)
        else:
            raise ValueError(f"mode must be 'hard' or 'soft', got {mode!r}")
    else:
        z_sig = np.zeros((n, 0, w), dtype=X.dtype)
    z_stat = stat_windowed_batch(X, window_len, window_step, r)
    return FeatureTensor(sig=z_sig, stat=z_stat, joint=fuse(z_sig, z_stat))


# Match scores, DTW, clustering ----------------------------------------------

def normalized_score(dist: float, col_min: float, col_max: float) -> float:
    """1 - min-max-normalized distance, clamped to [0, 1] for unseen samples."""
    if col_max < col_min:
        raise ValueError("col_max < col_min")
    if col_max == col_min:
        return 1.0 if dist <= col_min else 0.0
    frac = (dist - col_min) / (col_max - col_min)
    return 1.0 - min(max(frac, 0.0), 1.0)


def match_score(series, signature, col_min: float, col_max: float) -> MatchResult:
    vals = signature.values if hasattr(signature, "values") else signature
    dist, offset = seq_dist(vals, series)
    return MatchResult(score=normalized_score(dist, col_min, col_max), best_offset=offset)


def score_matrix(sig_matrix: SigMatrix, col_min=None, col_max=None) -> np.ndarray:
    """Element-wise normalized scores of a transform matrix against reference
    extrema (defaults to the matrix's own cached columns)."""
    lo = sig_matrix.col_min if col_min is None else np.asarray(col_min, dtype=np.float64)
    hi = sig_matrix.col_max if col_max is None else np.asarray(col_max, dtype=np.float64)
    span = hi - lo
    out = np.empty_like(sig_matrix.values)
    degenerate = span == 0
    safe = ~degenerate
    out[:, safe] = 1.0 - np.clip(
        (sig_matrix.values[:, safe] - lo[safe]) / span[safe], 0.0, 1.0)
    out[:, degenerate] = (sig_matrix.values[:, degenerate] <= lo[degenerate]).astype(np.float64)
    return out


def dtw_distance(a, b) -> float:
    """Classic O(|A|*|B|) dynamic-time-warping distance with |.| local cost and
    no warping-window constraint."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("dtw_distance requires non-empty sequences")
    prev = np.full(len(b) + 1, np.inf)
    prev[0] = 0.0
    cur = np.empty_like(prev)
    for i in range(len(a)):
        cur[0] = np.inf
        cost = np.abs(a[i] - b)
        for j in range(len(b)):
            cur[j + 1] = cost[j] + min(prev[j], prev[j + 1], cur[j])
        prev, cur = cur, prev
    return float(prev[len(b)])


def dtw_matrix(signatures) -> np.ndarray:
    vals = [s.values if hasattr(s, "values") else s for s in signatures]
    k = len(vals)
    out = np.zeros((k, k), dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = dtw_distance(vals[i], vals[j])
    return out


def assign_clusters(scores: np.ndarray, threshold: float) -> list[tuple[int | None, list[bool]]]:
    """Per sample: membership flags (score >= threshold) and the argmax-score
    cluster among members (smallest signature index on ties), or None."""
    scores = np.asarray(scores, dtype=np.float64)
    out = []
    for row in scores:
        flags = row >= threshold
        cluster = int(np.argmax(row)) if flags.any() else None
        out.append((cluster, flags.tolist()))
    return out
