"""Neural-network layers with explicit forward/backward passes.

Everything is plain numpy.  Sequence tensors are (batch, length,
channels); dense tensors are (batch, features).  Each layer caches what
its backward pass needs, accumulates parameter gradients in ``grads``,
and exposes (name, param, grad) triples through ``params_and_grads`` for
the optimizer.  Dropout layers draw masks from the rng passed to
``forward`` and are identity maps outside training.
"""

from __future__ import annotations

import numpy as np


def glorot_uniform(rng: np.random.Generator, shape, fan_in: int, fan_out: int, dtype):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


class Layer:
    def forward(self, x, training=False, rng=None):
        raise NotImplementedError

    def backward(self, grad_out):
        raise NotImplementedError

    def params_and_grads(self):
        return ()

    def n_parameters(self) -> int:
        return sum(p.size for _, p, _ in self.params_and_grads())


class Dense(Layer):
    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator, dtype=np.float32):
        self.w = glorot_uniform(rng, (n_in, n_out), n_in, n_out, dtype)
        self.b = np.zeros(n_out, dtype=dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)

    def forward(self, x, training=False, rng=None):
        self._x = x
        return x @ self.w + self.b

    def backward(self, grad_out):
        self.dw = self._x.T @ grad_out
        self.db = grad_out.sum(axis=0)
        return grad_out @ self.w.T

    def params_and_grads(self):
        return (("w", self.w, self.dw), ("b", self.b, self.db))


class Conv1D(Layer):
    """Stride-1 'same'-padded 1D convolution, kernel size 3.

    Implemented as one matmul per kernel tap, which keeps both passes in
    BLAS without materializing an im2col buffer.
    """

    def __init__(self, c_in: int, c_out: int, rng: np.random.Generator,
                 kernel: int = 3, dtype=np.float32):
        if kernel % 2 != 1:
            raise ValueError("kernel size must be odd for same padding")
        self.kernel = kernel
        # Keras-style fans for convolutions: receptive field x channels
        self.w = glorot_uniform(
            rng, (kernel, c_in, c_out), kernel * c_in, kernel * c_out, dtype
        )
        self.b = np.zeros(c_out, dtype=dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)

    def forward(self, x, training=False, rng=None):
        bsz, length, c_in = x.shape
        pad = self.kernel // 2
        xp = np.zeros((bsz, length + 2 * pad, c_in), dtype=x.dtype)
        xp[:, pad : pad + length] = x
        self._xp = xp
        self._length = length
        out = np.broadcast_to(self.b, (bsz, length, self.b.shape[0])).copy()
        for k in range(self.kernel):
            out += xp[:, k : k + length] @ self.w[k]
        return out

    def backward(self, grad_out):
        length = self._length
        xp = self._xp
        c_out = grad_out.shape[2]
        self.db = grad_out.sum(axis=(0, 1))
        dxp = np.zeros_like(xp)
        g2d = grad_out.reshape(-1, c_out)
        for k in range(self.kernel):
            tap = np.ascontiguousarray(xp[:, k : k + length])
            self.dw[k] = tap.reshape(-1, tap.shape[2]).T @ g2d
            dxp[:, k : k + length] += grad_out @ self.w[k].T
        pad = self.kernel // 2
        return dxp[:, pad : pad + length]

    def params_and_grads(self):
        return (("w", self.w, self.dw), ("b", self.b, self.db))


class AvgPool1D(Layer):
    """Size-3 stride-3 average pooling with ceiling division: a trailing
    partial window is averaged over the elements it actually covers
    (so 100 -> 34 -> 12 -> 4 -> 2)."""

    def __init__(self, pool: int = 3):
        self.pool = pool

    def forward(self, x, training=False, rng=None):
        bsz, length, ch = x.shape
        n_out = -(-length // self.pool)  # ceil
        padded_len = n_out * self.pool
        xp = np.zeros((bsz, padded_len, ch), dtype=x.dtype)
        xp[:, :length] = x
        windows = xp.reshape(bsz, n_out, self.pool, ch)
        counts = np.full(n_out, self.pool, dtype=x.dtype)
        rem = length - (n_out - 1) * self.pool
        counts[-1] = rem
        self._length = length
        self._counts = counts
        return windows.sum(axis=2) / counts[None, :, None]

    def backward(self, grad_out):
        bsz, n_out, ch = grad_out.shape
        g = (grad_out / self._counts[None, :, None])[:, :, None, :]
        g = np.broadcast_to(g, (bsz, n_out, self.pool, ch)).reshape(
            bsz, n_out * self.pool, ch
        )
        return g[:, : self._length].copy()


class LeakyReLU(Layer):
    def __init__(self, alpha: float = 0.3):
        self.alpha = alpha

    def forward(self, x, training=False, rng=None):
        self._mask = x > 0
        return np.where(self._mask, x, self.alpha * x)

    def backward(self, grad_out):
        return np.where(self._mask, grad_out, self.alpha * grad_out)


class ReLU(Layer):
    def forward(self, x, training=False, rng=None):
        self._mask = x > 0
        return x * self._mask

    def backward(self, grad_out):
        return grad_out * self._mask


class Dropout(Layer):
    """Inverted dropout on dense activations; identity at inference."""

    def __init__(self, rate: float):
        if not 0 <= rate < 1:
            raise ValueError("dropout rate must be in [0, 1)")
        self.rate = rate

    def forward(self, x, training=False, rng=None):
        if not training or self.rate == 0.0:
            self._mask = None
            return x
        keep = 1.0 - self.rate
        draw = rng.random(x.shape, dtype=np.float32)
        self._mask = (draw < keep).astype(x.dtype) / keep
        return x * self._mask

    def backward(self, grad_out):
        if self._mask is None:
            return grad_out
        return grad_out * self._mask


class SpatialDropout1D(Layer):
    """Drops whole channels per sample, the right flavor for conv maps
    whose neighboring timesteps are strongly correlated."""

    def __init__(self, rate: float):
        if not 0 <= rate < 1:
            raise ValueError("dropout rate must be in [0, 1)")
        self.rate = rate

    def forward(self, x, training=False, rng=None):
        if not training or self.rate == 0.0:
            self._mask = None
            return x
        keep = 1.0 - self.rate
        bsz, _, ch = x.shape
        draw = rng.random((bsz, 1, ch), dtype=np.float32)
        self._mask = (draw < keep).astype(x.dtype) / keep
        return x * self._mask

    def backward(self, grad_out):
        if self._mask is None:
            return grad_out
        return grad_out * self._mask


class Flatten(Layer):
    def forward(self, x, training=False, rng=None):
        self._shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad_out):
        return grad_out.reshape(self._shape)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-stochastic softmax via the log-sum-exp shift (finite for
    logits up to ~1e3 either sign)."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def cross_entropy_loss_grad(logits: np.ndarray, y: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean categorical cross-entropy and its gradient w.r.t. logits."""
    n = logits.shape[0]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted[np.arange(n), y] - log_z
    loss = float(-log_probs.mean())
    grad = softmax(logits)
    grad[np.arange(n), y] -= 1.0
    return loss, grad / n
