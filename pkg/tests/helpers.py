"""Shared fixtures and independent scalar oracles used across the tests.

The oracles deliberately re-derive results with plain Python loops and
scalar math so the vectorized library paths are checked against an
implementation that shares no code with them.
"""

from __future__ import annotations

import math

import numpy as np

from genreseq.ingest import RatingEvent, UserSequence
from genreseq.genres import encode_genres
from genreseq.nets import bce_loss, forward_sequence


def make_sequence(genre_sets, ratings=None, user_id=1, t0=1000):
    """UserSequence from five lists of genre names."""
    assert len(genre_sets) == 5
    if ratings is None:
        ratings = [3.0] * 5
    events = tuple(
        RatingEvent(user_id, 100 + t, float(ratings[t]), t0 + 10 * t) for t in range(5)
    )
    genres = np.stack([encode_genres(names) for names in genre_sets])
    return UserSequence(user_id, events, genres)


def random_sequence(rng, user_id=1, max_genres=3):
    """Seeded random UserSequence over the full alphabet."""
    genres = np.zeros((5, 19))
    for t in range(5):
        size = int(rng.integers(1, max_genres + 1))
        genres[t, rng.choice(19, size=size, replace=False)] = 1.0
    ratings = rng.choice(np.arange(1, 11) * 0.5, size=5)
    events = tuple(
        RatingEvent(user_id, 100 + t, float(ratings[t]), 1000 + 10 * t) for t in range(5)
    )
    return UserSequence(user_id, events, genres)


# ---------------------------------------------------------------------------
# scalar cell oracles


def sigmoid_scalar(v: float) -> float:
    if v >= 0:
        return 1.0 / (1.0 + math.exp(-v))
    e = math.exp(v)
    return e / (1.0 + e)


def rnn_step_oracle(x, h_prev, U, W, b):
    H = b.shape[0]
    out = np.zeros(H)
    for i in range(H):
        s = b[i]
        for j in range(x.shape[0]):
            s += U[i, j] * x[j]
        for j in range(H):
            s += W[i, j] * h_prev[j]
        out[i] = math.tanh(s)
    return out


def _gate_oracle(concat, Wg, bg, squash):
    H = Wg.shape[0]
    out = np.zeros(H)
    for i in range(H):
        s = 0.0 if bg is None else bg[i]
        for j in range(concat.shape[0]):
            s += Wg[i, j] * concat[j]
        out[i] = squash(s)
    return out


def lstm_step_oracle(x, h_prev, c_prev, w):
    concat = np.concatenate([h_prev, x])
    f = _gate_oracle(concat, w["W_f"], w["b_f"], sigmoid_scalar)
    i = _gate_oracle(concat, w["W_i"], w["b_i"], sigmoid_scalar)
    g = _gate_oracle(concat, w["W_c"], w["b_c"], math.tanh)
    o = _gate_oracle(concat, w["W_o"], w["b_o"], sigmoid_scalar)
    c = np.array([f[k] * c_prev[k] + i[k] * g[k] for k in range(len(f))])
    h = np.array([o[k] * math.tanh(c[k]) for k in range(len(f))])
    return h, c


def gru_step_oracle(x, h_prev, w):
    concat = np.concatenate([h_prev, x])
    z = _gate_oracle(concat, w["W_z"], None, sigmoid_scalar)
    r = _gate_oracle(concat, w["W_r"], None, sigmoid_scalar)
    reset_concat = np.concatenate([r * h_prev, x])
    hbar = _gate_oracle(reset_concat, w["W"], None, math.tanh)
    return np.array(
        [(1.0 - z[k]) * h_prev[k] + z[k] * hbar[k] for k in range(len(z))]
    )


def bce_oracle(y, target):
    eps = 1e-7
    total = 0.0
    for yi, ti in zip(np.ravel(y), np.ravel(target)):
        yc = min(max(yi, eps), 1.0 - eps)
        total += -(ti * math.log(yc) + (1.0 - ti) * math.log(1.0 - yc))
    return total / np.size(y)


# ---------------------------------------------------------------------------
# gradient checking


def fd_gradients(params, x, target, step=1e-5):
    """Central finite differences of the loss for every parameter entry."""
    out = {}
    for key, w in params.weights.items():
        grad = np.zeros_like(w)
        flat = w.ravel()
        gflat = grad.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            up = bce_loss(forward_sequence(x, params)[0], target)
            flat[i] = orig - step
            down = bce_loss(forward_sequence(x, params)[0], target)
            flat[i] = orig
            gflat[i] = (up - down) / (2.0 * step)
        out[key] = grad
    return out


def max_relative_error(analytic, numeric, floor=1e-6):
    """Worst normalized deviation; the floor keeps near-zero entries sane."""
    worst = 0.0
    for key in analytic:
        denom = np.maximum(np.abs(analytic[key]) + np.abs(numeric[key]), floor)
        rel = np.abs(analytic[key] - numeric[key]) / denom
        worst = max(worst, float(rel.max()))
    return worst


# ---------------------------------------------------------------------------
# metric oracles


def confusion_oracle(preds, targets, threshold=0.5):
    """Double-loop TP/FP/FN/TN over every (sample, genre) cell."""
    tp = fp = fn = tn = 0
    for row_p, row_t in zip(preds, targets):
        for p, t in zip(row_p, row_t):
            predicted_yes = p > threshold
            actual_yes = t > 0.5
            if predicted_yes and actual_yes:
                tp += 1
            elif predicted_yes and not actual_yes:
                fp += 1
            elif not predicted_yes and actual_yes:
                fn += 1
            else:
                tn += 1
    return tp, fp, fn, tn


def metrics_oracle(tp, fp, fn, tn):
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total if total else 0.0
    f1 = 2 * recall * precision / (recall + precision) if recall + precision else 0.0
    return recall, precision, accuracy, f1


def transition_counts_oracle(sequences):
    """Explicit pair enumeration of genre-to-genre transition counts."""
    counts = np.zeros((19, 19), dtype=np.int64)
    for seq in sequences:
        for t in range(1, 5):
            prev = np.flatnonzero(seq.genres[t - 1])
            cur = np.flatnonzero(seq.genres[t])
            for i in prev:
                for j in cur:
                    counts[i, j] += 1
    return counts
