"""Independent reference implementations used only by the tests.

These deliberately avoid the package's fast paths: dense matrices come
from literal Kronecker products of the four 2x2 matrices, and the
matrix exponential is a scaling-and-squaring Taylor series.  Agreement
between these and the package is the point of the tests, so nothing
here may import from the modules it checks beyond plain data access.
"""

from __future__ import annotations

import functools

import numpy as np

SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_word(word: str, coeff: complex = 1.0) -> np.ndarray:
    """Kronecker chain for a Pauli word, site 1 leftmost."""
    return coeff * functools.reduce(np.kron, [SIGMA[ch] for ch in word])


def dense_sum(terms) -> np.ndarray:
    """Dense matrix of an iterable of objects with .label() and .coeff."""
    terms = list(terms)
    dim = 2 ** len(terms[0].label())
    out = np.zeros((dim, dim), dtype=complex)
    for t in terms:
        out += dense_word(t.label(), t.coeff)
    return out


def taylor_expm(a: np.ndarray, order: int = 24) -> np.ndarray:
    """Matrix exponential via scaling and squaring of a Taylor series."""
    norm = np.linalg.norm(a, ord=np.inf)
    squarings = max(0, int(np.ceil(np.log2(max(norm, 1e-300)))) + 1)
    small = a / (2**squarings)
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, order + 1):
        term = term @ small / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def finite_difference_grad(f, x: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    """Central finite differences of a scalar function, elementwise."""
    grad = np.zeros_like(x, dtype=np.float64)
    flat = x.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + eps
        up = f()
        flat[i] = orig - eps
        down = f()
        flat[i] = orig
        gflat[i] = (up - down) / (2 * eps)
    return grad


def random_pauli_string(rng: np.random.Generator, n: int):
    from agassi.pauli import PauliString

    word = "".join(rng.choice(list("IXYZ"), size=n))
    coeff = complex(rng.normal(), rng.normal())
    return PauliString.from_label(word, coeff)
