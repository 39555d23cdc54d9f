"""Joint training of the signature values and a Transformer-encoder
classifier, in plain numpy with hand-written reverse-mode gradients.

Forward: per-window feature vectors are projected to d_model, summed with a
fixed sinusoidal positional encoding, passed through pre-norm encoder layers
(multi-head self-attention + feed-forward, both residual), mean-pooled over
windows, and squashed by a scalar sigmoid head. Training uses the soft
(differentiable) windowed signature distances; all reported and exported
numbers use the hard minimum.

Gradients are exact for the implemented forward (the acceptance suite checks
every parameter class against central finite differences), which is why the
few non-smooth spots (ReLU, the BCE clamp) are written so the analytic and
numeric paths see the same function.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import Dataset, RunConfig, Signature
from .features import (
    hard_windowed_batch,
    seq_dist_many,
    soft_windowed_backward,
    soft_windowed_batch,
    stat_windowed_batch,
    window_count,
)
from .initialize import information_gain

_LN_EPS = 1e-5
_BCE_EPS = 1e-7

PARAM_CLASSES = ("input", "layernorm", "attention", "ffn", "head", "signature")


class NonFiniteError(FloatingPointError):
    """A forward activation or gradient left the finite range; the message
    names the layer."""


class TrainingDivergedError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelMeta:
    """Shape and architecture record; everything forward/backward needs
    besides the parameter arrays themselves."""

    variant: str
    series_len: int
    window_len: int
    window_step: int
    n_features: int
    n_windows: int
    k: int
    r: int
    d_model: int
    n_heads: int
    n_layers: int
    ffn_dim: int
    softmin_alpha: float
    precision: str = "float64"

    @property
    def dtype(self):
        return np.float64 if self.precision == "float64" else np.float32

    @property
    def head_dim(self) -> int:
        return self.d_model // self.n_heads


def meta_from_config(cfg: RunConfig, m: int, k: int) -> ModelMeta:
    cfg = cfg.resolve(m)
    w = window_count(m, cfg.window_len, cfg.window_step)
    r = 0 if cfg.variant in ("VT", "SP-T") else cfg.r
    k = 0 if cfg.variant in ("VT", "S-FE") else k
    if cfg.variant == "VT":
        n_features = cfg.window_len
    else:
        n_features = k + r
        if n_features == 0:
            raise ValueError(f"variant {cfg.variant} ended up with zero feature channels")
    return ModelMeta(variant=cfg.variant, series_len=m, window_len=cfg.window_len,
                     window_step=cfg.window_step, n_features=n_features, n_windows=w,
                     k=k, r=r, d_model=cfg.d_model, n_heads=cfg.n_heads,
                     n_layers=cfg.n_layers, ffn_dim=cfg.ffn_dim,
                     softmin_alpha=cfg.softmin_alpha, precision=cfg.precision)


def positional_encoding(w: int, d: int, dtype=np.float64) -> np.ndarray:
    pos = np.arange(w, dtype=np.float64)[:, None]
    i = np.arange((d + 1) // 2, dtype=np.float64)[None, :]
    angle = pos / np.power(10000.0, 2.0 * i / d)
    pe = np.zeros((w, d), dtype=np.float64)
    pe[:, 0::2] = np.sin(angle)
    pe[:, 1::2] = np.cos(angle[:, : d // 2])
    return pe.astype(dtype)


def _uniform(rng, fan_in: int, shape, dtype) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


def init_params(meta: ModelMeta, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Fan-in-scaled uniform weights, zero biases, unit layer norms, and a
    zero head so the untrained model outputs probability 0.5 everywhere.
    The draw order below is part of the determinism contract."""
    d, dt = meta.d_model, meta.dtype
    p: dict[str, np.ndarray] = {}
    p["win"] = _uniform(rng, meta.n_features, (meta.n_features, d), dt)
    p["bin"] = np.zeros(d, dtype=dt)
    for i in range(meta.n_layers):
        pre = f"layers.{i}."
        p[pre + "ln1_g"] = np.ones(d, dtype=dt)
        p[pre + "ln1_b"] = np.zeros(d, dtype=dt)
        for name in ("wq", "wk", "wv", "wo"):
            p[pre + name] = _uniform(rng, d, (d, d), dt)
            p[pre + "b" + name[1]] = np.zeros(d, dtype=dt)
        p[pre + "ln2_g"] = np.ones(d, dtype=dt)
        p[pre + "ln2_b"] = np.zeros(d, dtype=dt)
        p[pre + "w1"] = _uniform(rng, d, (d, meta.ffn_dim), dt)
        p[pre + "c1"] = np.zeros(meta.ffn_dim, dtype=dt)
        p[pre + "w2"] = _uniform(rng, meta.ffn_dim, (meta.ffn_dim, d), dt)
        p[pre + "c2"] = np.zeros(d, dtype=dt)
    p["head_w"] = np.zeros(d, dtype=dt)
    p["head_b"] = np.zeros((), dtype=dt)
    return p


def param_class(name: str) -> str:
    if name in ("win", "bin"):
        return "input"
    if name in ("head_w", "head_b"):
        return "head"
    if name.startswith("sig."):
        return "signature"
    leaf = name.rsplit(".", 1)[-1]
    if leaf.startswith("ln"):
        return "layernorm"
    if leaf in ("w1", "c1", "w2", "c2"):
        return "ffn"
    return "attention"


def _check_finite(name: str, arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"non-finite values in {name}")


def _layer_norm(x, g, b):
    mu = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + _LN_EPS)
    xhat = (x - mu) * inv
    return xhat * g + b, (xhat, inv)


def _layer_norm_backward(dy, g, cache):
    xhat, inv = cache
    dg = np.einsum("bwd,bwd->d", dy, xhat)
    db = dy.sum(axis=(0, 1))
    dxhat = dy * g
    dx = inv * (dxhat - dxhat.mean(axis=-1, keepdims=True)
                - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True))
    return dx, dg, db


def _split_heads(x, n_heads):
    b, w, d = x.shape
    return x.reshape(b, w, n_heads, d // n_heads).transpose(0, 2, 1, 3)


def _merge_heads(x):
    b, h, w, dh = x.shape
    return x.transpose(0, 2, 1, 3).reshape(b, w, h * dh)


def forward_pass(Z: np.ndarray, params: dict, meta: ModelMeta,
                 check_finite: bool = True) -> tuple[np.ndarray, dict]:
    """Probabilities for a (B, F, w) feature batch, plus the cache backward
    needs. Raises :class:`NonFiniteError` naming the offending layer."""
    if Z.shape[1] != meta.n_features or Z.shape[2] != meta.n_windows:
        raise ValueError(
            f"feature shape {Z.shape[1:]} incompatible with model "
            f"({meta.n_features}, {meta.n_windows})")
    tokens = np.ascontiguousarray(Z.transpose(0, 2, 1))
    pe = positional_encoding(meta.n_windows, meta.d_model, meta.dtype)
    x = tokens @ params["win"] + params["bin"] + pe
    if check_finite:
        _check_finite("input projection", x)
    cache: dict = {"tokens": tokens, "layers": []}
    scale = 1.0 / np.sqrt(meta.head_dim)
    for i in range(meta.n_layers):
        pre = f"layers.{i}."
        lc: dict = {"x_in": x}
        u, lc["ln1"] = _layer_norm(x, params[pre + "ln1_g"], params[pre + "ln1_b"])
        lc["u"] = u
        q = _split_heads(u @ params[pre + "wq"] + params[pre + "bq"], meta.n_heads)
        k = _split_heads(u @ params[pre + "wk"] + params[pre + "bk"], meta.n_heads)
        v = _split_heads(u @ params[pre + "wv"] + params[pre + "bv"], meta.n_heads)
        s = (q @ k.transpose(0, 1, 3, 2)) * scale
        s -= s.max(axis=-1, keepdims=True)
        e = np.exp(s)
        a = e / e.sum(axis=-1, keepdims=True)
        o = _merge_heads(a @ v)
        att = o @ params[pre + "wo"] + params[pre + "bo"]
        x = x + att
        lc.update(q=q, k=k, v=v, a=a, o=o)
        lc["x_mid"] = x
        vtok, lc["ln2"] = _layer_norm(x, params[pre + "ln2_g"], params[pre + "ln2_b"])
        lc["v_in"] = vtok
        z1 = vtok @ params[pre + "w1"] + params[pre + "c1"]
        a1 = np.maximum(z1, 0.0)
        x = x + a1 @ params[pre + "w2"] + params[pre + "c2"]
        lc.update(z1=z1, a1=a1)
        cache["layers"].append(lc)
        if check_finite:
            _check_finite(f"encoder layer {i}", x)
    cache["x_out"] = x
    pooled = x.mean(axis=1)
    logits = pooled @ params["head_w"] + params["head_b"]
    if check_finite:
        _check_finite("classification head", logits)
    cache["pooled"] = pooled
    cache["logits"] = logits
    probs = 1.0 / (1.0 + np.exp(-logits))
    return probs, cache


def forward(Z: np.ndarray, params: dict, meta: ModelMeta) -> np.ndarray:
    probs, _ = forward_pass(Z, params, meta)
    return probs


def bce_loss(y_hat: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy with probabilities clamped to
    [1e-7, 1 - 1e-7]."""
    p = np.clip(np.asarray(y_hat, dtype=np.float64), _BCE_EPS, 1.0 - _BCE_EPS)
    y = np.asarray(y, dtype=np.float64)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def backward_pass(cache: dict, y: np.ndarray, params: dict,
                  meta: ModelMeta) -> tuple[dict, np.ndarray]:
    """Exact gradients of the clamped batch BCE w.r.t. every parameter and
    the input features. The clamp's flat regions deliberately yield zero
    gradient so finite differences of the implemented loss agree."""
    probs = 1.0 / (1.0 + np.exp(-cache["logits"]))
    b = len(y)
    inside = (probs > _BCE_EPS) & (probs < 1.0 - _BCE_EPS)
    dlogits = np.where(inside, probs - y, 0.0).astype(meta.dtype) / b
    grads: dict[str, np.ndarray] = {}
    grads["head_w"] = cache["pooled"].T @ dlogits
    grads["head_b"] = dlogits.sum()
    dx = (dlogits[:, None] * params["head_w"])[:, None, :] / meta.n_windows
    dx = np.broadcast_to(dx, cache["x_out"].shape).copy()
    scale = 1.0 / np.sqrt(meta.head_dim)
    for i in reversed(range(meta.n_layers)):
        pre = f"layers.{i}."
        lc = cache["layers"][i]
        # feed-forward block
        df = dx
        grads[pre + "w2"] = np.einsum("bwh,bwd->hd", lc["a1"], df)
        grads[pre + "c2"] = df.sum(axis=(0, 1))
        dz1 = (df @ params[pre + "w2"].T) * (lc["z1"] > 0)
        grads[pre + "w1"] = np.einsum("bwd,bwh->dh", lc["v_in"], dz1)
        grads[pre + "c1"] = dz1.sum(axis=(0, 1))
        dv_in = dz1 @ params[pre + "w1"].T
        dx_mid, dg2, db2 = _layer_norm_backward(dv_in, params[pre + "ln2_g"], lc["ln2"])
        grads[pre + "ln2_g"] = dg2
        grads[pre + "ln2_b"] = db2
        dx = dx + dx_mid
        # attention block
        datt = dx
        grads[pre + "wo"] = np.einsum("bwd,bwe->de", lc["o"], datt)
        grads[pre + "bo"] = datt.sum(axis=(0, 1))
        do = _split_heads(datt @ params[pre + "wo"].T, meta.n_heads)
        da = do @ lc["v"].transpose(0, 1, 3, 2)
        dvh = lc["a"].transpose(0, 1, 3, 2) @ do
        ds = lc["a"] * (da - (da * lc["a"]).sum(axis=-1, keepdims=True))
        dq = _merge_heads((ds @ lc["k"]) * scale)
        dk = _merge_heads((ds.transpose(0, 1, 3, 2) @ lc["q"]) * scale)
        dv = _merge_heads(dvh)
        du = np.zeros_like(lc["u"])
        for name, dmat in (("wq", dq), ("wk", dk), ("wv", dv)):
            grads[pre + name] = np.einsum("bwd,bwe->de", lc["u"], dmat)
            grads[pre + "b" + name[1]] = dmat.sum(axis=(0, 1))
            du += dmat @ params[pre + name].T
        dx_in, dg1, db1 = _layer_norm_backward(du, params[pre + "ln1_g"], lc["ln1"])
        grads[pre + "ln1_g"] = dg1
        grads[pre + "ln1_b"] = db1
        dx = dx + dx_in
    grads["win"] = np.einsum("bwf,bwd->fd", cache["tokens"], dx)
    grads["bin"] = dx.sum(axis=(0, 1))
    dZ = np.ascontiguousarray((dx @ params["win"].T).transpose(0, 2, 1))
    return grads, dZ


# Feature assembly ---------------------------------------------------------

def assemble_features(X: np.ndarray, sig_values: list, meta: ModelMeta,
                      stat: np.ndarray | None = None, mode: str = "hard"):
    """Batch feature tensor (B, F, w) for the meta's variant.

    ``mode='soft'`` returns (Z, ctx) where ctx feeds the signature backward;
    hard mode returns (Z, None). ``stat`` may carry precomputed statistical
    channels (they do not depend on any parameter).
    """
    if X.shape[1] != meta.series_len:
        raise ValueError(f"series length {X.shape[1]} != model's {meta.series_len}")
    if meta.variant == "VT":
        from numpy.lib.stride_tricks import sliding_window_view
        windows = sliding_window_view(X, meta.window_len, axis=1)[:, ::meta.window_step, :]
        return np.ascontiguousarray(windows.transpose(0, 2, 1)), None
    parts = []
    ctx = None
    if meta.k:
        if mode == "soft":
            z_sig, ctx = soft_windowed_batch(X, sig_values, meta.window_len,
                                             meta.window_step, meta.softmin_alpha)
        else:
            z_sig, _ = hard_windowed_batch(X, sig_values, meta.window_len, meta.window_step)
        parts.append(z_sig)
    if meta.r:
        if stat is None:
            stat = stat_windowed_batch(X, meta.window_len, meta.window_step, meta.r)
        parts.append(stat)
    Z = parts[0] if len(parts) == 1 else np.concatenate(parts, axis=1)
    return Z.astype(meta.dtype, copy=False), ctx


def batch_loss_and_grads(X: np.ndarray, y: np.ndarray, sig_values: list,
                         params: dict, meta: ModelMeta,
                         stat: np.ndarray | None = None):
    """Full joint loss and all gradients (network parameters + signature
    values) for one batch. This is the function the gradient-correctness
    acceptance check differentiates numerically."""
    Z, ctx = assemble_features(X, sig_values, meta, stat=stat, mode="soft")
    probs, cache = forward_pass(Z, params, meta)
    loss = bce_loss(probs, y)
    grads, dZ = backward_pass(cache, y, params, meta)
    if meta.k:
        sig_grads = soft_windowed_backward(ctx, dZ[:, :meta.k, :], X, sig_values,
                                           meta.window_len, meta.window_step,
                                           meta.softmin_alpha)
        for j, g in enumerate(sig_grads):
            grads[f"sig.{j}"] = g
    return loss, grads, probs


# Optimizer and training loop ----------------------------------------------

class Adam:
    """Adaptive-moment updates; state keyed like the parameter dict."""

    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.t = 0

    def step(self, values: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        b1c = 1.0 - self.beta1 ** self.t
        b2c = 1.0 - self.beta2 ** self.t
        for name, g in grads.items():
            if name not in self.m:
                self.m[name] = np.zeros_like(values[name])
                self.v[name] = np.zeros_like(values[name])
            m = self.m[name]
            v = self.v[name]
            m += (1.0 - self.beta1) * (g - m)
            v += (1.0 - self.beta2) * (g * g - v)
            values[name] -= self.lr * (m / b1c) / (np.sqrt(v / b2c) + self.eps)


@dataclass
class TrainedModel:
    """Final parameters, the refined signatures (IG/theta recomputed with the
    hard distance on the training set), per-epoch history, and the resolved
    config snapshot."""

    params: dict
    meta: ModelMeta
    signatures: list[Signature]
    history: dict
    config: RunConfig
    best_epoch: int
    train_seconds: float = 0.0


def _epoch_eval(X, y, sig_values, params, meta, stat, chunk: int = 1024) -> float:
    losses, counts = [], []
    for lo in range(0, len(X), chunk):
        Z, _ = assemble_features(X[lo:lo + chunk], sig_values, meta,
                                 stat=None if stat is None else stat[lo:lo + chunk],
                                 mode="soft")
        probs = forward(Z, params, meta)
        losses.append(bce_loss(probs, y[lo:lo + chunk]))
        counts.append(len(probs))
    return float(np.average(losses, weights=counts))


def train(train_set: Dataset, valid: Dataset | None, init_sigs: list[Signature],
          config: RunConfig) -> TrainedModel:
    """Mini-batch joint training. Deterministic given the seed; early-stops on
    validation loss (patience from the config) and restores the best-epoch
    parameters; pass ``valid=None`` for a fixed epoch budget."""
    counts = train_set.class_counts
    if counts[0] == 0 or counts[1] == 0:
        raise ValueError("both classes must be present in the training set")
    cfg = config.resolve(train_set.length)
    meta = meta_from_config(cfg, train_set.length, len(init_sigs))
    rng = np.random.default_rng(cfg.seed)
    params = init_params(meta, rng)
    sig_values = [s.values.astype(meta.dtype) for s in init_sigs[:meta.k]] if meta.k else []
    for j, sv in enumerate(sig_values):
        params[f"sig.{j}"] = sv.copy()
    sig_names = [f"sig.{j}" for j in range(meta.k)]

    X = train_set.values.astype(meta.dtype)
    y = train_set.labels.astype(np.float64)
    stat = (stat_windowed_batch(X, meta.window_len, meta.window_step, meta.r)
            if meta.r and meta.variant != "VT" else None)
    if valid is not None:
        Xv = valid.values.astype(meta.dtype)
        yv = valid.labels.astype(np.float64)
        stat_v = (stat_windowed_batch(Xv, meta.window_len, meta.window_step, meta.r)
                  if meta.r and meta.variant != "VT" else None)

    opt = Adam(lr=cfg.learning_rate)
    history: dict = {"train_loss": [], "train_acc": [], "val_loss": []}
    best_loss = np.inf
    best_params = {k: v.copy() for k, v in params.items()}
    best_epoch = 0
    stale = 0
    t0 = time.perf_counter()
    for epoch in range(cfg.epochs):
        perm = rng.permutation(train_set.n)
        epoch_loss = 0.0
        correct = 0
        for lo in range(0, train_set.n, cfg.batch_size):
            idx = perm[lo:lo + cfg.batch_size]
            cur_sigs = [params[name] for name in sig_names]
            loss, grads, probs = batch_loss_and_grads(
                X[idx], y[idx], cur_sigs, params, meta,
                stat=None if stat is None else stat[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite loss at epoch {epoch}; lower the learning rate")
            opt.step(params, grads)
            epoch_loss += loss * len(idx)
            correct += int(((probs >= 0.5).astype(np.int64) == y[idx]).sum())
        history["train_loss"].append(epoch_loss / train_set.n)
        history["train_acc"].append(correct / train_set.n)
        if valid is not None:
            cur_sigs = [params[name] for name in sig_names]
            val_loss = _epoch_eval(Xv, yv, cur_sigs, params, meta, stat_v)
            history["val_loss"].append(val_loss)
            if val_loss < best_loss:
                best_loss = val_loss
                best_params = {k: v.copy() for k, v in params.items()}
                best_epoch = epoch
                stale = 0
            else:
                stale += 1
                if stale >= cfg.patience:
                    break
        else:
            best_params = params
            best_epoch = epoch
    seconds = time.perf_counter() - t0
    params = {k: v.copy() for k, v in best_params.items()}

    final_sigs = []
    X_eval = train_set.values
    y_int = train_set.labels
    for j, proto in enumerate(init_sigs[:meta.k] if meta.k else []):
        values = params[f"sig.{j}"].astype(np.float64)
        d, _ = seq_dist_many(X_eval, values)
        theta, ig = information_gain(d, y_int)
        final_sigs.append(Signature(id=proto.id, values=values, ig=max(ig, 0.0),
                                    theta=theta, source=proto.source))
    return TrainedModel(params=params, meta=meta, signatures=final_sigs,
                        history=history, config=cfg, best_epoch=best_epoch,
                        train_seconds=seconds)


def predict(model: TrainedModel, dataset: Dataset,
            chunk: int = 1024) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic inference with hard minimum distances. Returns
    (probabilities, labels); probability exactly 0.5 maps to label 1."""
    if dataset.length != model.meta.series_len:
        raise ValueError(
            f"dataset length {dataset.length} incompatible with model's "
            f"{model.meta.series_len}")
    X = dataset.values.astype(model.meta.dtype)
    sig_values = [model.params[f"sig.{j}"] for j in range(model.meta.k)]
    probs = np.empty(dataset.n, dtype=np.float64)
    for lo in range(0, dataset.n, chunk):
        Z, _ = assemble_features(X[lo:lo + chunk], sig_values, model.meta, mode="hard")
        probs[lo:lo + chunk] = forward(Z, model.params, model.meta)
    return probs, (probs >= 0.5).astype(np.int64)


def accuracy(model: TrainedModel, dataset: Dataset) -> float:
    _, labels = predict(model, dataset)
    return float((labels == dataset.labels).mean())
