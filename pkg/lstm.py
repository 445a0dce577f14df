"""
Single-layer LSTM with a linear readout, trained by full backpropagation through time.

Gate equations (per step t, gates stacked in the order input, forget, output,
candidate):

    i = sigmoid(W_i x_t + U_i h_{t-1} + b_i)
    f = sigmoid(W_f x_t + U_f h_{t-1} + b_f)
    o = sigmoid(W_o x_t + U_o h_{t-1} + b_o)
    g = tanh   (W_g x_t + U_g h_{t-1} + b_g)
    c_t = f * c_{t-1} + i * g
    h_t = o * tanh(c_t)

    prediction = w_y . h_p + b_y

The network maps a window of `lag_order` min-max normalized values to the next
normalized value. Loss is squared error, averaged over all training windows;
optimization is plain full-batch gradient descent with global-norm clipping.
Forward and backward passes run vectorized over a batch of windows; the sum
over windows is taken in a fixed order so training is reproducible.
"""

import logging
from dataclasses import dataclass, field, asdict
from typing import List

import numpy as np

from exceptions import InvalidConfigError, SeriesTooShortError, WindowLengthMismatchError
from series_core import as_values, denormalize, fit_normalizer, normalize, NormalizerParams

logger = logging.getLogger(__name__)

N_GATES = 4
GATE_INPUT, GATE_FORGET, GATE_OUTPUT, GATE_CANDIDATE = range(N_GATES)
INIT_SCALE = 0.1
FORGET_BIAS = 1.0
LOG_EVERY = 50  # epochs between debug lines


@dataclass(frozen=True)
class LstmConfig:
    hidden_size: int = 8
    lag_order: int = 5
    learning_rate: float = 0.01
    epochs: int = 200
    grad_clip_norm: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.hidden_size < 1:
            raise InvalidConfigError("hidden_size must be >= 1")
        if self.lag_order < 1:
            raise InvalidConfigError("lag_order must be >= 1")
        if not self.learning_rate > 0:
            raise InvalidConfigError("learning_rate must be > 0")
        if self.epochs < 1:
            raise InvalidConfigError("epochs must be >= 1")
        if not self.grad_clip_norm > 0:
            raise InvalidConfigError("grad_clip_norm must be > 0")

    def to_dict(self):
        return asdict(self)


@dataclass
class LstmParams:
    """
    W: (4, H, D) input weights, U: (4, H, H) recurrent weights, b: (4, H) biases,
    w_y: (H,) readout weights, b_y: readout bias. D = 1 for a univariate series.
    """

    W: np.ndarray
    U: np.ndarray
    b: np.ndarray
    w_y: np.ndarray
    b_y: float
    lag_order: int

    @property
    def hidden_size(self):
        return int(self.U.shape[1])

    @property
    def input_size(self):
        return int(self.W.shape[2])

    def flat(self):
        return np.concatenate([self.W.ravel(), self.U.ravel(), self.b.ravel(),
                               self.w_y.ravel(), [self.b_y]])

    def with_flat(self, vector):
        """Same shapes, values taken from a flat vector"""
        vector = np.asarray(vector, dtype=float)
        sizes = [self.W.size, self.U.size, self.b.size, self.w_y.size]
        cuts = np.cumsum(sizes)
        return LstmParams(
            W=vector[: cuts[0]].reshape(self.W.shape).copy(),
            U=vector[cuts[0]: cuts[1]].reshape(self.U.shape).copy(),
            b=vector[cuts[1]: cuts[2]].reshape(self.b.shape).copy(),
            w_y=vector[cuts[2]: cuts[3]].copy(),
            b_y=float(vector[cuts[3]]),
            lag_order=self.lag_order,
        )

    @property
    def n_params(self):
        return int(self.W.size + self.U.size + self.b.size + self.w_y.size + 1)

    def to_dict(self):
        return {
            "lag_order": self.lag_order,
            "W": self.W.tolist(),
            "U": self.U.tolist(),
            "b": self.b.tolist(),
            "w_y": self.w_y.tolist(),
            "b_y": self.b_y,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            W=np.asarray(data["W"], dtype=float),
            U=np.asarray(data["U"], dtype=float),
            b=np.asarray(data["b"], dtype=float),
            w_y=np.asarray(data["w_y"], dtype=float),
            b_y=float(data["b_y"]),
            lag_order=int(data["lag_order"]),
        )


@dataclass(frozen=True)
class LstmState:
    h: np.ndarray
    c: np.ndarray


@dataclass
class LstmFit:
    params: LstmParams
    normalizer: NormalizerParams
    loss_history: List[float] = field(default_factory=list)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def lstm_init(cfg):
    """Uniform(-0.1, 0.1) weights from the seeded generator; forget bias 1, other biases 0"""
    rng = np.random.default_rng(cfg.seed)
    H, D = cfg.hidden_size, 1
    W = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(N_GATES, H, D))
    U = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(N_GATES, H, H))
    w_y = rng.uniform(-INIT_SCALE, INIT_SCALE, size=H)
    b = np.zeros((N_GATES, H))
    b[GATE_FORGET] = FORGET_BIAS
    return LstmParams(W=W, U=U, b=b, w_y=w_y, b_y=0.0, lag_order=cfg.lag_order)


# ---------------------------------------------------------------------------
# Batched forward / backward
# ---------------------------------------------------------------------------

def _forward_batch(params, X):
    """X: (N, p) normalized windows -> predictions (N,), per-step cache"""
    N, p = X.shape
    H = params.hidden_size
    h = np.zeros((N, H))
    c = np.zeros((N, H))
    cache = []
    for t in range(p):
        x_t = X[:, t: t + 1]  # (N, D)
        z = (np.einsum("nd,ghd->gnh", x_t, params.W)
             + np.einsum("nk,ghk->gnh", h, params.U)
             + params.b[:, None, :])
        i = _sigmoid(z[GATE_INPUT])
        f = _sigmoid(z[GATE_FORGET])
        o = _sigmoid(z[GATE_OUTPUT])
        g = np.tanh(z[GATE_CANDIDATE])
        c_new = f * c + i * g
        tanh_c = np.tanh(c_new)
        h_new = o * tanh_c
        cache.append((x_t, h, c, i, f, o, g, c_new, tanh_c, h_new))
        h, c = h_new, c_new
    predictions = h @ params.w_y + params.b_y
    return predictions, cache


def _backward_batch(params, cache, dy):
    """Gradients summed over the batch; dy is dLoss/dPrediction per window"""
    dW = np.zeros_like(params.W)
    dU = np.zeros_like(params.U)
    db = np.zeros_like(params.b)

    h_last = cache[-1][-1]
    dw_y = h_last.T @ dy
    db_y = float(dy.sum())

    dh = dy[:, None] * params.w_y[None, :]
    dc = np.zeros_like(dh)
    for x_t, h_prev, c_prev, i, f, o, g, c, tanh_c, _ in reversed(cache):
        do = dh * tanh_c
        dc = dc + dh * o * (1.0 - tanh_c ** 2)
        dz = np.stack([
            dc * g * i * (1.0 - i),
            dc * c_prev * f * (1.0 - f),
            do * o * (1.0 - o),
            dc * i * (1.0 - g ** 2),
        ])
        dW += np.einsum("gnh,nd->ghd", dz, x_t)
        dU += np.einsum("gnh,nk->ghk", dz, h_prev)
        db += dz.sum(axis=1)
        dh = np.einsum("gnh,ghk->nk", dz, params.U)
        dc = dc * f

    grads = LstmParams(W=dW, U=dU, b=db, w_y=dw_y, b_y=db_y, lag_order=params.lag_order)
    return grads


def _check_window(params, window):
    x = as_values(window)
    if x.size != params.lag_order:
        raise WindowLengthMismatchError(
            f"window has {x.size} values, network expects {params.lag_order}"
        )
    return x


def lstm_forward(params, window):
    """One window (already normalized) -> (prediction, per-step states)"""
    x = _check_window(params, window)
    predictions, cache = _forward_batch(params, x.reshape(1, -1))
    states = [LstmState(h=entry[-1][0].copy(), c=entry[7][0].copy()) for entry in cache]
    return float(predictions[0]), states


def lstm_grads(params, window, target):
    """Exact gradients of (prediction - target)^2 -> (grads shaped like params, loss)"""
    x = _check_window(params, window)
    predictions, cache = _forward_batch(params, x.reshape(1, -1))
    err = predictions - float(target)
    grads = _backward_batch(params, cache, 2.0 * err)
    return grads, float(err[0] ** 2)


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

def training_pairs(series, lag_order):
    """Normalized (windows, targets) plus the normalizer fitted on the series"""
    x = as_values(series)
    if x.size <= lag_order:
        raise SeriesTooShortError(
            f"LSTM with lag order {lag_order} needs more than {lag_order} values, got {x.size}"
        )
    normalizer = fit_normalizer(x)
    z = np.asarray(normalize(x, normalizer), dtype=float)
    windows = np.lib.stride_tricks.sliding_window_view(z, lag_order)[:-1]
    return np.ascontiguousarray(windows), z[lag_order:], normalizer


def lstm_loss(params, X, T):
    predictions, _ = _forward_batch(params, X)
    return float(np.mean((predictions - T) ** 2))


def lstm_gd_step(params, X, T, learning_rate, grad_clip_norm):
    """One full-batch gradient step -> (new params, loss before the step)"""
    predictions, cache = _forward_batch(params, X)
    err = predictions - T
    n = T.size
    grads = _backward_batch(params, cache, 2.0 * err / n).flat()
    norm = float(np.linalg.norm(grads))
    if norm > grad_clip_norm:
        grads = grads * (grad_clip_norm / norm)
    updated = params.with_flat(params.flat() - learning_rate * grads)
    return updated, float(np.mean(err ** 2))


def lstm_train(train, cfg=LstmConfig()):
    """Fit normalizer and network on the training window"""
    X, T, normalizer = training_pairs(train, cfg.lag_order)
    params = lstm_init(cfg)
    history = []
    for epoch in range(cfg.epochs):
        params, loss = lstm_gd_step(params, X, T, cfg.learning_rate, cfg.grad_clip_norm)
        history.append(loss)
        if epoch % LOG_EVERY == 0:
            logger.debug("epoch %d: loss %.6f", epoch, loss)
    logger.debug("trained LSTM on %d windows, final loss %.6f", T.size, history[-1])
    return LstmFit(params=params, normalizer=normalizer, loss_history=history)


def lstm_predict_next(params, normalizer, recent):
    """Forecast in percent units from the last `lag_order` raw observations"""
    x = _check_window(params, recent)
    prediction, _ = lstm_forward(params, normalize(x, normalizer))
    return float(denormalize(prediction, normalizer))
