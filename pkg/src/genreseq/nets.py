"""From-scratch recurrent cells (RNN, LSTM, GRU) with exact backprop.

Cells step over a 4-step feature sequence and feed a per-genre sigmoid
output head trained with mean binary cross-entropy, so each genre gets an
independent yes/no probability.  All gradients are derived analytically
and unrolled through time; the test suite checks every one of them
against central finite differences.

Update rules:

    RNN    h_t = tanh(U x_t + W h_{t-1} + b)
    LSTM   f_t = sig(W_f [h_{t-1}, x_t] + b_f)
           i_t = sig(W_i [h_{t-1}, x_t] + b_i)
           g_t = tanh(W_c [h_{t-1}, x_t] + b_c)
           c_t = f_t * c_{t-1} + i_t * g_t
           o_t = sig(W_o [h_{t-1}, x_t] + b_o)
           h_t = o_t * tanh(c_t)
    GRU    z_t = sig(W_z [h_{t-1}, x_t])          (gates carry no bias)
           r_t = sig(W_r [h_{t-1}, x_t])
           hb_t = tanh(W [r_t * h_{t-1}, x_t])
           h_t = (1 - z_t) * h_{t-1} + z_t * hb_t

    head   y = sig(V h_T + b_out)

``*`` is the element-wise product and ``[a, b]`` concatenation with the
hidden part first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyDataset, ShapeMismatch
from .genres import N_GENRES
from .transitions import Dataset

CHECKPOINT_FORMAT_VERSION = 1

_EPS = 1e-7


class CellKind(enum.Enum):
    RNN = "RNN"
    LSTM = "LSTM"
    GRU = "GRU"


@dataclass
class TrainConfig:
    """Hyperparameters for the seeded training loop."""

    learning_rate: float = 0.05
    momentum: float = 0.9
    epochs: int = 200
    batch_size: int = 32
    hidden_dim: int = 32
    seed: int = 0
    init_scale: float = 0.1

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must be in [0, 1)")
        if self.epochs < 0 or self.batch_size < 1 or self.hidden_dim < 1:
            raise ValueError("epochs, batch_size and hidden_dim must be positive")
        if self.init_scale <= 0:
            raise ValueError("init_scale must be > 0")


@dataclass
class NetParams:
    """A cell's weight matrices and bias vectors, keyed by name."""

    cell: CellKind
    input_dim: int
    hidden_dim: int
    output_dim: int
    weights: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        expected = parameter_shapes(self.cell, self.input_dim, self.hidden_dim, self.output_dim)
        if set(self.weights) != set(expected):
            raise ShapeMismatch(
                f"parameter names {sorted(self.weights)} != {sorted(expected)}"
            )
        for name, shape in expected.items():
            if self.weights[name].shape != shape:
                raise ShapeMismatch(
                    f"{name}: shape {self.weights[name].shape}, expected {shape}"
                )


def parameter_shapes(
    cell: CellKind, input_dim: int, hidden_dim: int, output_dim: int = N_GENRES
) -> dict[str, tuple[int, ...]]:
    """Name -> shape map for a cell; gate matrices span [h, x] columns."""
    d, h, o = input_dim, hidden_dim, output_dim
    head = {"V": (o, h), "b_out": (o,)}
    if cell is CellKind.RNN:
        return {"U": (h, d), "W": (h, h), "b": (h,), **head}
    if cell is CellKind.LSTM:
        gates = {}
        for g in ("f", "i", "c", "o"):
            gates[f"W_{g}"] = (h, h + d)
            gates[f"b_{g}"] = (h,)
        return {**gates, **head}
    return {"W_z": (h, h + d), "W_r": (h, h + d), "W": (h, h + d), **head}


def init_params(
    cell: CellKind,
    input_dim: int,
    hidden_dim: int,
    output_dim: int = N_GENRES,
    init_scale: float = 0.1,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> NetParams:
    """Uniform init in [-init_scale, init_scale] for every parameter."""
    if rng is None:
        rng = np.random.default_rng(seed)
    shapes = parameter_shapes(cell, input_dim, hidden_dim, output_dim)
    weights = {k: rng.uniform(-init_scale, init_scale, s) for k, s in shapes.items()}
    return NetParams(cell, input_dim, hidden_dim, output_dim, weights)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _as_batch(x: np.ndarray, dim: int, what: str) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != dim:
        raise ShapeMismatch(f"{what}: got shape {x.shape}, expected (*, {dim})")
    return x, single


def rnn_step(x_t: np.ndarray, h_prev: np.ndarray, params: NetParams) -> np.ndarray:
    """h_t = tanh(U x_t + W h_prev + b); entries stay inside (-1, 1)."""
    x_t, single = _as_batch(x_t, params.input_dim, "x_t")
    h_prev, _ = _as_batch(h_prev, params.hidden_dim, "h_prev")
    w = params.weights
    h = np.tanh(x_t @ w["U"].T + h_prev @ w["W"].T + w["b"])
    return h[0] if single else h


def lstm_step(
    x_t: np.ndarray, state: tuple[np.ndarray, np.ndarray], params: NetParams
) -> tuple[np.ndarray, np.ndarray]:
    """One gated update of (hidden, cell) state."""
    h_prev, c_prev = state
    x_t, single = _as_batch(x_t, params.input_dim, "x_t")
    h_prev, _ = _as_batch(h_prev, params.hidden_dim, "h_prev")
    c_prev, _ = _as_batch(c_prev, params.hidden_dim, "c_prev")
    w = params.weights
    zcat = np.concatenate([h_prev, x_t], axis=1)
    f = _sigmoid(zcat @ w["W_f"].T + w["b_f"])
    i = _sigmoid(zcat @ w["W_i"].T + w["b_i"])
    g = np.tanh(zcat @ w["W_c"].T + w["b_c"])
    c = f * c_prev + i * g
    o = _sigmoid(zcat @ w["W_o"].T + w["b_o"])
    h = o * np.tanh(c)
    if single:
        return h[0], c[0]
    return h, c


def gru_step(x_t: np.ndarray, h_prev: np.ndarray, params: NetParams) -> np.ndarray:
    """Update/reset-gated step; h_t interpolates h_prev and the candidate."""
    x_t, single = _as_batch(x_t, params.input_dim, "x_t")
    h_prev, _ = _as_batch(h_prev, params.hidden_dim, "h_prev")
    w = params.weights
    zcat = np.concatenate([h_prev, x_t], axis=1)
    z = _sigmoid(zcat @ w["W_z"].T)
    r = _sigmoid(zcat @ w["W_r"].T)
    acat = np.concatenate([r * h_prev, x_t], axis=1)
    hbar = np.tanh(acat @ w["W"].T)
    h = (1.0 - z) * h_prev + z * hbar
    return h[0] if single else h


def forward_sequence(inputs: np.ndarray, params: NetParams) -> tuple[np.ndarray, dict]:
    """Run the cell over the input steps and apply the sigmoid head.

    ``inputs`` is (T, d) for one sample or (B, T, d) for a batch; the
    initial hidden (and cell) state is zero.  Returns per-genre
    probabilities and a cache of every activation the backward pass needs.
    """
    x = np.asarray(inputs, dtype=np.float64)
    single = x.ndim == 2
    if single:
        x = x[None]
    if x.ndim != 3 or x.shape[2] != params.input_dim:
        raise ShapeMismatch(f"inputs: got shape {np.shape(inputs)}, expected (*, T, {params.input_dim})")
    batch, steps, _ = x.shape
    hidden = params.hidden_dim
    w = params.weights

    h = np.zeros((batch, hidden))
    cache: dict = {"x": x, "single": single, "h": [h]}
    if params.cell is CellKind.RNN:
        for t in range(steps):
            h = np.tanh(x[:, t] @ w["U"].T + h @ w["W"].T + w["b"])
            cache["h"].append(h)
    elif params.cell is CellKind.LSTM:
        c = np.zeros((batch, hidden))
        cache.update({"zcat": [], "f": [], "i": [], "g": [], "o": [], "c": [c], "tanh_c": []})
        for t in range(steps):
            zcat = np.concatenate([h, x[:, t]], axis=1)
            f = _sigmoid(zcat @ w["W_f"].T + w["b_f"])
            i = _sigmoid(zcat @ w["W_i"].T + w["b_i"])
            g = np.tanh(zcat @ w["W_c"].T + w["b_c"])
            c = f * cache["c"][-1] + i * g
            o = _sigmoid(zcat @ w["W_o"].T + w["b_o"])
            tanh_c = np.tanh(c)
            h = o * tanh_c
            for key, val in (("zcat", zcat), ("f", f), ("i", i), ("g", g), ("o", o), ("tanh_c", tanh_c)):
                cache[key].append(val)
            cache["c"].append(c)
            cache["h"].append(h)
    else:
        cache.update({"zcat": [], "acat": [], "z": [], "r": [], "hbar": []})
        for t in range(steps):
            zcat = np.concatenate([h, x[:, t]], axis=1)
            z = _sigmoid(zcat @ w["W_z"].T)
            r = _sigmoid(zcat @ w["W_r"].T)
            acat = np.concatenate([r * h, x[:, t]], axis=1)
            hbar = np.tanh(acat @ w["W"].T)
            h = (1.0 - z) * h + z * hbar
            for key, val in (("zcat", zcat), ("acat", acat), ("z", z), ("r", r), ("hbar", hbar)):
                cache[key].append(val)
            cache["h"].append(h)

    y = _sigmoid(h @ w["V"].T + w["b_out"])
    cache["y"] = y
    return (y[0] if single else y), cache


def bce_loss(y: np.ndarray, target: np.ndarray) -> float:
    """Mean over all cells of -[t ln y + (1 - t) ln(1 - y)], y clipped."""
    y = np.clip(np.asarray(y, dtype=np.float64), _EPS, 1.0 - _EPS)
    target = np.asarray(target, dtype=np.float64)
    if y.shape != target.shape:
        raise ShapeMismatch(f"y {y.shape} vs target {target.shape}")
    return float(-np.mean(target * np.log(y) + (1.0 - target) * np.log(1.0 - y)))


def backward(cache: dict, target: np.ndarray, params: NetParams) -> dict[str, np.ndarray]:
    """Analytic gradients of the loss for every parameter.

    Uses the sigmoid+cross-entropy identity at the head (d loss / d logit
    = (y - t) / cells) and unrolls the chosen cell backward through time.
    """
    w = params.weights
    x = cache["x"]
    batch, steps, _ = x.shape
    hidden = params.hidden_dim
    y = cache["y"]
    target = np.asarray(target, dtype=np.float64).reshape(y.shape)

    grads = {k: np.zeros_like(v) for k, v in w.items()}
    dz_out = (y - target) / y.size
    hs = cache["h"]
    grads["V"] = dz_out.T @ hs[-1]
    grads["b_out"] = dz_out.sum(axis=0)
    dh = dz_out @ w["V"]

    if params.cell is CellKind.RNN:
        for t in range(steps - 1, -1, -1):
            dz = dh * (1.0 - hs[t + 1] ** 2)
            grads["U"] += dz.T @ x[:, t]
            grads["W"] += dz.T @ hs[t]
            grads["b"] += dz.sum(axis=0)
            dh = dz @ w["W"]
    elif params.cell is CellKind.LSTM:
        dc_next = np.zeros((batch, hidden))
        for t in range(steps - 1, -1, -1):
            f, i, g, o = cache["f"][t], cache["i"][t], cache["g"][t], cache["o"][t]
            tanh_c = cache["tanh_c"][t]
            zcat = cache["zcat"][t]
            do = dh * tanh_c
            dc = dc_next + dh * o * (1.0 - tanh_c**2)
            df = dc * cache["c"][t]
            di = dc * g
            dg = dc * i
            dzcat = np.zeros_like(zcat)
            for name, gate, dgate in (
                ("f", f, df),
                ("i", i, di),
                ("o", o, do),
            ):
                dz = dgate * gate * (1.0 - gate)
                grads[f"W_{name}"] += dz.T @ zcat
                grads[f"b_{name}"] += dz.sum(axis=0)
                dzcat += dz @ w[f"W_{name}"]
            dz = dg * (1.0 - g**2)
            grads["W_c"] += dz.T @ zcat
            grads["b_c"] += dz.sum(axis=0)
            dzcat += dz @ w["W_c"]
            dh = dzcat[:, :hidden]
            dc_next = dc * f
    else:
        for t in range(steps - 1, -1, -1):
            z, r, hbar = cache["z"][t], cache["r"][t], cache["hbar"][t]
            zcat, acat = cache["zcat"][t], cache["acat"][t]
            h_prev = hs[t]
            dhbar = dh * z
            dz_gate = dh * (hbar - h_prev)
            dh_prev = dh * (1.0 - z)
            da = dhbar * (1.0 - hbar**2)
            grads["W"] += da.T @ acat
            dacat = da @ w["W"]
            dr = dacat[:, :hidden] * h_prev
            dh_prev += dacat[:, :hidden] * r
            dzz = dz_gate * z * (1.0 - z)
            dzr = dr * r * (1.0 - r)
            grads["W_z"] += dzz.T @ zcat
            grads["W_r"] += dzr.T @ zcat
            dh_prev += (dzz @ w["W_z"])[:, :hidden] + (dzr @ w["W_r"])[:, :hidden]
            dh = dh_prev
    return grads


def predict(params: NetParams, inputs: np.ndarray) -> np.ndarray:
    """Per-genre probabilities without keeping the activation cache."""
    y, _ = forward_sequence(inputs, params)
    return y


@dataclass(frozen=True)
class TrainResult:
    params: NetParams
    losses: tuple[float, ...]


def train(dataset: Dataset, cell: CellKind, config: TrainConfig) -> TrainResult:
    """Seeded mini-batch gradient descent with momentum.

    Params start uniform in [-init_scale, init_scale]; samples reshuffle
    each epoch with the same generator, so a seed fixes the whole
    trajectory.  Returns the final parameters and per-epoch mean loss.
    """
    n = len(dataset)
    if n == 0:
        raise EmptyDataset("no training samples")
    rng = np.random.default_rng(config.seed)
    params = init_params(
        cell,
        input_dim=dataset.inputs.shape[2],
        hidden_dim=config.hidden_dim,
        output_dim=dataset.targets.shape[1],
        init_scale=config.init_scale,
        rng=rng,
    )
    velocity = {k: np.zeros_like(v) for k, v in params.weights.items()}
    losses: list[float] = []
    for _ in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            xb = dataset.inputs[idx]
            tb = dataset.targets[idx]
            yb, cache = forward_sequence(xb, params)
            total += bce_loss(yb, tb) * idx.size
            grads = backward(cache, tb, params)
            for k, vel in velocity.items():
                vel *= config.momentum
                vel -= config.learning_rate * grads[k]
                params.weights[k] += vel
        losses.append(total / n)
    return TrainResult(params, tuple(losses))


def save_checkpoint(params: NetParams, path: str | Path) -> Path:
    """Write parameters as a versioned .npz archive (row-major arrays)."""
    path = Path(path)
    if path.suffix != ".npz":
        path = path.with_suffix(path.suffix + ".npz")
    arrays = {f"weight_{k}": v for k, v in params.weights.items()}
    arrays["format_version"] = np.int64(CHECKPOINT_FORMAT_VERSION)
    arrays["cell"] = np.array(params.cell.value)
    arrays["dims"] = np.array([params.input_dim, params.hidden_dim, params.output_dim], dtype=np.int64)
    np.savez(path, **arrays)
    return path


def load_checkpoint(path: str | Path) -> NetParams:
    """Read a checkpoint written by :func:`save_checkpoint`."""
    with np.load(path) as data:
        version = int(data["format_version"])
        if version != CHECKPOINT_FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        cell = CellKind(str(data["cell"]))
        input_dim, hidden_dim, output_dim = (int(v) for v in data["dims"])
        weights = {
            k[len("weight_") :]: data[k] for k in data.files if k.startswith("weight_")
        }
    return NetParams(cell, input_dim, hidden_dim, output_dim, weights)
