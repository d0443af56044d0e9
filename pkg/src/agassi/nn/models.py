"""MLP and 1D-CNN phase classifiers, trained from scratch with Adam.

Both follow the scikit-learn estimator protocol (``fit`` /
``predict_proba`` / ``predict`` / ``get_params``) so they compose with
the usual tooling, but the forward and backward passes are the explicit
layer implementations in this package: the classifiers, not a framework,
are the deliverable.

Training is deterministic for a fixed seed (given a fixed BLAS thread
count): one generator drives initialization, shuffling and dropout.
Dropout is active only inside ``fit``; inference is a pure function of
the weights.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .adam import Adam
from .layers import (
    AvgPool1D,
    Conv1D,
    Dense,
    Dropout,
    Flatten,
    Layer,
    LeakyReLU,
    ReLU,
    SpatialDropout1D,
    cross_entropy_loss_grad,
    softmax,
)

N_CLASSES = 5


class _SequentialNet:
    """Minimal sequential container shared by the two classifiers."""

    def __init__(self, layers: list[Layer]):
        self.layers = layers

    def forward(self, x, training=False, rng=None):
        for layer in self.layers:
            x = layer.forward(x, training=training, rng=rng)
        return x

    def backward(self, grad):
        for layer in reversed(self.layers):
            grad = layer.backward(grad)
        return grad

    def params_and_grads(self):
        out = []
        for layer in self.layers:
            out.extend(layer.params_and_grads())
        return out

    def n_parameters(self) -> int:
        return sum(layer.n_parameters() for layer in self.layers)


def _as_batches(n: int, batch_size: int, rng: np.random.Generator):
    order = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


class MlpClassifier(ClassifierMixin, BaseEstimator):
    """One rectifier hidden layer of 100 units and a softmax output,
    trained with Adam on cross-entropy.

    Defaults mirror the standard library perceptron: learning rate 1e-3,
    batches of 200, up to 200 epochs with a 1e-4 loss-improvement early
    stop (10-epoch patience) and an L2 penalty of 1e-4 on the weights.
    """

    def __init__(
        self,
        hidden: int = 100,
        lr: float = 1e-3,
        batch_size: int = 200,
        max_epochs: int = 200,
        tol: float = 1e-4,
        n_iter_no_change: int = 10,
        l2: float = 1e-4,
        seed: int = 0,
    ):
        self.hidden = hidden
        self.lr = lr
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.tol = tol
        self.n_iter_no_change = n_iter_no_change
        self.l2 = l2
        self.seed = seed

    def _build(self, n_features: int, rng) -> _SequentialNet:
        return _SequentialNet(
            [
                Dense(n_features, self.hidden, rng, dtype=np.float64),
                ReLU(),
                Dense(self.hidden, N_CLASSES, rng, dtype=np.float64),
            ]
        )

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        y = y.astype(np.int64)
        rng = np.random.default_rng(self.seed)
        net = self._build(X.shape[1], rng)
        opt = Adam(lr=self.lr)
        batch = min(self.batch_size, X.shape[0])
        best_loss = np.inf
        stall = 0
        history = []
        for epoch in range(self.max_epochs):
            losses = []
            for idx in _as_batches(X.shape[0], batch, rng):
                logits = net.forward(X[idx], training=True, rng=rng)
                loss, grad = cross_entropy_loss_grad(logits, y[idx])
                if not np.isfinite(loss):
                    raise FloatingPointError(
                        f"non-finite loss at epoch {epoch} (lr={self.lr})"
                    )
                net.backward(grad)
                pag = net.params_and_grads()
                if self.l2:
                    # penalize weights, not biases, like the reference library
                    for name, p, g in pag:
                        if name == "w":
                            g += (self.l2 / X.shape[0]) * p
                opt.step(pag)
                losses.append(loss)
            epoch_loss = float(np.mean(losses))
            history.append(epoch_loss)
            if epoch_loss > best_loss - self.tol:
                stall += 1
                if stall >= self.n_iter_no_change:
                    break
            else:
                stall = 0
            best_loss = min(best_loss, epoch_loss)
        self.net_ = net
        self.loss_history_ = history
        self.classes_ = np.arange(N_CLASSES)
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "net_")
        X = check_array(X, dtype=np.float64)
        return softmax(self.net_.forward(X))

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)

    def n_parameters(self) -> int:
        check_is_fitted(self, "net_")
        return self.net_.n_parameters()


#: (layer kind, arg) descriptors of the convolutional stack; filters
#: double each cycle and every convolution keeps the sequence length.
CNN_CONV_FILTERS = (32, 64, 128, 256)
CNN_DENSE_WIDTH = 512
CNN_N_DENSE = 5


class CnnClassifier(ClassifierMixin, BaseEstimator):
    """The 1D convolutional classifier: four conv / leaky-relu / avg-pool
    / spatial-dropout cycles (filters 32, 64, 128, 256, kernel 3, same
    padding, pooling 3 with ceiling), a flatten to 512, five dense
    blocks of width 512 with dropout, and a softmax over 5 phases.
    1,445,445 trainable parameters for 100-sample inputs.
    """

    def __init__(
        self,
        lr: float = 1e-3,
        batch_size: int = 64,
        epochs: int = 200,
        leaky_slope: float = 0.3,
        spatial_dropout: float = 0.2,
        dense_dropout: float = 0.5,
        seed: int = 0,
        dtype: str = "float32",
    ):
        self.lr = lr
        self.batch_size = batch_size
        self.epochs = epochs
        self.leaky_slope = leaky_slope
        self.spatial_dropout = spatial_dropout
        self.dense_dropout = dense_dropout
        self.seed = seed
        self.dtype = dtype

    def _build(self, n_features: int, rng) -> _SequentialNet:
        dt = np.dtype(self.dtype).type
        layers: list[Layer] = []
        c_in = 1
        length = n_features
        for c_out in CNN_CONV_FILTERS:
            layers.append(Conv1D(c_in, c_out, rng, dtype=dt))
            layers.append(LeakyReLU(self.leaky_slope))
            layers.append(AvgPool1D(3))
            layers.append(SpatialDropout1D(self.spatial_dropout))
            c_in = c_out
            length = -(-length // 3)
        layers.append(Flatten())
        width = length * c_in
        for _ in range(CNN_N_DENSE):
            layers.append(Dense(width, CNN_DENSE_WIDTH, rng, dtype=dt))
            layers.append(LeakyReLU(self.leaky_slope))
            layers.append(Dropout(self.dense_dropout))
            width = CNN_DENSE_WIDTH
        layers.append(Dense(width, N_CLASSES, rng, dtype=dt))
        return _SequentialNet(layers)

    def shape_trace(self, n_features: int = 100) -> list[tuple[str, tuple[int, ...]]]:
        """(layer name, output shape) pairs for a single input, matching
        the published stack layout."""
        rng = np.random.default_rng(0)
        net = self._build(n_features, rng)
        x = np.zeros((1, n_features, 1), dtype=np.dtype(self.dtype).type)
        trace = []
        for layer in net.layers:
            x = layer.forward(x)
            trace.append((type(layer).__name__, tuple(x.shape[1:])))
        return trace

    def fit(self, X, y, X_val=None, y_val=None):
        X, y = check_X_y(X, y, dtype=np.float64)
        y = y.astype(np.int64)
        dt = np.dtype(self.dtype).type
        Xs = X.astype(dt)[:, :, None]  # (batch, length, 1 channel)
        rng = np.random.default_rng(self.seed)
        net = self._build(X.shape[1], rng)
        opt = Adam(lr=self.lr)
        history = {"epoch": [], "train_acc": [], "val_acc": []}
        has_val = X_val is not None and y_val is not None
        for epoch in range(self.epochs):
            for idx in _as_batches(Xs.shape[0], self.batch_size, rng):
                logits = net.forward(Xs[idx], training=True, rng=rng)
                loss, grad = cross_entropy_loss_grad(logits.astype(np.float64), y[idx])
                if not np.isfinite(loss):
                    raise FloatingPointError(
                        f"non-finite loss at epoch {epoch} (lr={self.lr})"
                    )
                net.backward(grad.astype(dt))
                opt.step(net.params_and_grads())
            self.net_ = net
            history["epoch"].append(epoch + 1)
            history["train_acc"].append(float(np.mean(self._predict_net(Xs) == y)))
            if has_val:
                val_pred = self.predict(X_val)
                history["val_acc"].append(float(np.mean(val_pred == np.asarray(y_val))))
            else:
                history["val_acc"].append(float("nan"))
        self.history_ = history
        self.classes_ = np.arange(N_CLASSES)
        self.n_features_in_ = X.shape[1]
        return self

    def _predict_net(self, Xs, batch: int = 512) -> np.ndarray:
        outs = []
        for start in range(0, Xs.shape[0], batch):
            outs.append(self.net_.forward(Xs[start : start + batch]))
        return np.argmax(np.concatenate(outs), axis=1)

    def predict_proba(self, X):
        check_is_fitted(self, "net_")
        X = check_array(X, dtype=np.float64)
        Xs = X.astype(np.dtype(self.dtype).type)[:, :, None]
        outs = []
        for start in range(0, Xs.shape[0], 512):
            outs.append(self.net_.forward(Xs[start : start + 512]))
        return softmax(np.concatenate(outs).astype(np.float64))

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)

    def n_parameters(self) -> int:
        check_is_fitted(self, "net_")
        return self.net_.n_parameters()

    def parameter_table(self, n_features: int = 100) -> list[tuple[str, int]]:
        """Per-layer trainable parameter counts of a freshly built stack."""
        net = self._build(n_features, np.random.default_rng(0))
        return [(type(l).__name__, l.n_parameters()) for l in net.layers]
