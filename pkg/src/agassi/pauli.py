"""Pauli-string algebra in the symplectic (x/z bit-mask) representation.

A Pauli string is a tensor product of single-site operators from
{I, X, Y, Z} together with a complex coefficient.  Site ``i`` (1-based)
owns bit ``i - 1`` of two masks: the x-mask marks an X factor, the
z-mask a Z factor, and both bits set mean Y.  Products, adjoints and
commutation tests are O(number of machine words); the phase produced by
a product is tracked exactly as a power of i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

# Coefficients below this magnitude are dropped during canonicalization.
# The model's coefficients are exact rationals times the couplings, so the
# tolerance only guards float round-off from repeated products.
DEDUP_TOL = 1e-12

_AXIS_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_AXIS = {v: k for k, v in _AXIS_TO_BITS.items()}

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class PauliString:
    """One coefficient times a tensor product of I/X/Y/Z factors.

    Bit ``i - 1`` of ``x_mask``/``z_mask`` refers to site ``i``; both bits
    set encode a Y factor.  Instances are immutable values.
    """

    n_qubits: int
    x_mask: int
    z_mask: int
    coeff: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        full = (1 << self.n_qubits) - 1
        if (self.x_mask | self.z_mask) & ~full:
            raise ValueError("mask has bits set beyond n_qubits")

    # -- construction -------------------------------------------------

    @classmethod
    def from_label(cls, label: str, coeff: complex = 1.0) -> "PauliString":
        """Build from a word like ``"XIZY"`` (site 1 is the first letter)."""
        x = z = 0
        for i, ch in enumerate(label.upper()):
            try:
                bx, bz = _AXIS_TO_BITS[ch]
            except KeyError:
                raise ValueError(f"unknown Pauli letter {ch!r}") from None
            x |= bx << i
            z |= bz << i
        return cls(len(label), x, z, complex(coeff))

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliString":
        return cls(n_qubits, 0, 0, complex(coeff))

    @classmethod
    def single(cls, n_qubits: int, site: int, axis: str, coeff: complex = 1.0) -> "PauliString":
        """A single-site X/Y/Z factor at 1-based ``site``."""
        if not 1 <= site <= n_qubits:
            raise ValueError(f"site {site} out of range 1..{n_qubits}")
        bx, bz = _AXIS_TO_BITS[axis.upper()]
        return cls(n_qubits, bx << (site - 1), bz << (site - 1), complex(coeff))

    # -- inspection ----------------------------------------------------

    @property
    def key(self) -> tuple[int, int]:
        return (self.x_mask, self.z_mask)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return _popcount(self.x_mask | self.z_mask)

    def axis_at(self, site: int) -> str:
        bit = 1 << (site - 1)
        return _BITS_TO_AXIS[(int(bool(self.x_mask & bit)), int(bool(self.z_mask & bit)))]

    def label(self) -> str:
        return "".join(self.axis_at(i) for i in range(1, self.n_qubits + 1))

    def n_xy_factors(self) -> int:
        """Count of X plus Y factors (each costs basis-change gates)."""
        return _popcount(self.x_mask)

    # -- algebra -------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def scale(self, c: complex) -> "PauliString":
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, self.coeff * c)

    def adjoint(self) -> "PauliString":
        # The mask operator itself is Hermitian; only the coefficient conjugates.
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, self.coeff.conjugate())

    def commutes_with(self, other: "PauliString") -> bool:
        """Symplectic-form test: commute iff the overlap parity is even."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        overlap = _popcount(self.x_mask & other.z_mask) + _popcount(self.z_mask & other.x_mask)
        return overlap % 2 == 0

    def to_matrix(self) -> np.ndarray:
        """Dense 2^N x 2^N matrix; site 1 is the leftmost Kronecker factor."""
        mats = [_SINGLE_QUBIT[self.axis_at(i)] for i in range(1, self.n_qubits + 1)]
        return self.coeff * reduce(np.kron, mats)

    def __repr__(self) -> str:
        return f"PauliString({self.coeff:+.6g} * {self.label()})"


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Product a*b with the exact accumulated phase in the coefficient.

    Writing each factor as i^(x&z) X^x Z^z, the sitewise product picks up
    i to the power ``xz(a) + xz(b) - xz(c) + 2*(z(a)&x(b))`` where
    ``c = a XOR b``.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError("qubit counts differ")
    cx = a.x_mask ^ b.x_mask
    cz = a.z_mask ^ b.z_mask
    k = (
        _popcount(a.x_mask & a.z_mask)
        + _popcount(b.x_mask & b.z_mask)
        - _popcount(cx & cz)
        + 2 * _popcount(a.z_mask & b.x_mask)
    ) % 4
    phase = (1j) ** k
    return PauliString(a.n_qubits, cx, cz, a.coeff * b.coeff * phase)


class PauliSum:
    """A linear combination of Pauli strings over a common qubit count.

    Always held in canonical form: one term per (x_mask, z_mask) pair,
    terms sorted by mask key, coefficients above the dedup tolerance.
    """

    __slots__ = ("n_qubits", "terms")

    def __init__(self, terms: Iterable[PauliString], n_qubits: int | None = None):
        terms = list(terms)
        if not terms and n_qubits is None:
            raise ValueError("empty sum needs an explicit n_qubits")
        n = n_qubits if n_qubits is not None else terms[0].n_qubits
        acc: dict[tuple[int, int], complex] = {}
        for t in terms:
            if t.n_qubits != n:
                raise ValueError("mixed qubit counts in PauliSum")
            acc[t.key] = acc.get(t.key, 0.0 + 0.0j) + t.coeff
        canon = [
            PauliString(n, x, z, c)
            for (x, z), c in acc.items()
            if abs(c) > DEDUP_TOL
        ]
        canon.sort(key=lambda t: t.key)
        self.n_qubits = n
        self.terms = tuple(canon)

    # -- construction helpers -------------------------------------------

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls([], n_qubits=n_qubits)

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls([PauliString.identity(n_qubits, coeff)])

    @classmethod
    def from_string(cls, s: PauliString) -> "PauliSum":
        return cls([s])

    # -- inspection -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def coeff_of(self, x_mask: int, z_mask: int) -> complex:
        for t in self.terms:
            if t.x_mask == x_mask and t.z_mask == z_mask:
                return t.coeff
        return 0.0 + 0.0j

    def constant(self) -> complex:
        """Coefficient of the identity string."""
        return self.coeff_of(0, 0)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(t.coeff.imag) <= tol for t in self.terms)

    def as_dict(self) -> dict[tuple[int, int], complex]:
        return {t.key: t.coeff for t in self.terms}

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        return PauliSum(list(self.terms) + list(other.terms), n_qubits=self.n_qubits)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "PauliSum":
        return PauliSum([t.scale(c) for t in self.terms], n_qubits=self.n_qubits)

    def __mul__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        prods = [pauli_mul(a, b) for a in self.terms for b in other.terms]
        return PauliSum(prods, n_qubits=self.n_qubits)

    def adjoint(self) -> "PauliSum":
        return PauliSum([t.adjoint() for t in self.terms], n_qubits=self.n_qubits)

    def commutator(self, other: "PauliSum") -> "PauliSum":
        return self * other - other * self

    def anticommutator(self, other: "PauliSum") -> "PauliSum":
        return self * other + other * self

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            out += t.to_matrix()
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return f"PauliSum(0, n_qubits={self.n_qubits})"
        body = " ".join(f"{t.coeff:+.6g}*{t.label()}" for t in self.terms[:6])
        more = f" ... ({len(self.terms)} terms)" if len(self.terms) > 6 else ""
        return f"PauliSum({body}{more})"
