"""Exact and Trotterized time evolution of dense state vectors, with the
observables reported by the pipeline: fidelity, survival probability,
two-site correlation functions and oscillation amplitudes.

Amplitude indexing convention (fixed, used everywhere): site 1 is the
most significant bit of the amplitude index, and the single-site basis
order is (up, down), i.e. spin-up maps to bit 0 so that a Z factor reads
+1 on up and -1 on down.  The product state down^4 up^4 therefore sits
at index 0b11110000 = 240.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import TermGroup, validate_partition
from .pauli import PauliString, PauliSum

_NORM_TOL = 1e-10
_HERM_TOL = 1e-10


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


def parse_state_spec(spec: str) -> list[tuple[str, str]]:
    """Tokenize a product-state spec into (direction, basis) pairs.

    Each site is ``u`` or ``d``, optionally followed by ``x`` or ``z``
    (default ``z``).  Separators (spaces, commas) are ignored, so
    ``"dddduuuu"``, ``"d,d,d,d,u,u,u,u"`` and ``"dx dx ux ux"`` all parse.
    """
    tokens: list[tuple[str, str]] = []
    i = 0
    s = spec.strip().lower()
    while i < len(s):
        ch = s[i]
        if ch in " ,;\t":
            i += 1
            continue
        if ch not in "ud":
            raise ValueError(f"bad state spec {spec!r}: unexpected {ch!r}")
        basis = "z"
        if i + 1 < len(s) and s[i + 1] in "xz":
            basis = s[i + 1]
            i += 1
        tokens.append((ch, basis))
        i += 1
    if not tokens:
        raise ValueError("empty state spec")
    return tokens


_SITE_VECTORS = {
    ("u", "z"): np.array([1.0, 0.0], dtype=complex),
    ("d", "z"): np.array([0.0, 1.0], dtype=complex),
    # eigenvectors of X: up has eigenvalue +1, down -1
    ("u", "x"): np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    ("d", "x"): np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
}


def basis_state(spec: str, n_qubits: int | None = None) -> np.ndarray:
    """Product state from a per-site spec (see :func:`parse_state_spec`)."""
    tokens = parse_state_spec(spec)
    if n_qubits is not None and len(tokens) != n_qubits:
        raise ValueError(f"spec has {len(tokens)} sites, expected {n_qubits}")
    psi = np.array([1.0 + 0.0j])
    for tok in tokens:
        psi = np.kron(psi, _SITE_VECTORS[tok])
    return psi


def check_state(psi: np.ndarray) -> int:
    """Validate a state vector; returns its qubit count."""
    dim = psi.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"state dimension {dim} is not a power of two")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > _NORM_TOL:
        raise ValueError(f"state norm {nrm} deviates from 1 beyond {_NORM_TOL}")
    return n


# ---------------------------------------------------------------------------
# Fast application of Pauli strings to amplitude vectors
# ---------------------------------------------------------------------------


def _amplitude_mask(site_mask: int, n: int) -> int:
    """Map a site-indexed mask (bit i-1 = site i) to amplitude bits
    (site 1 = most significant)."""
    out = 0
    for i in range(1, n + 1):
        if site_mask & (1 << (i - 1)):
            out |= 1 << (n - i)
    return out


@dataclass(frozen=True)
class CompiledString:
    """A Pauli string preprocessed for O(2^N) application to amplitudes."""

    n_qubits: int
    coeff: complex
    perm: np.ndarray       # perm[t] = source index for target amplitude t
    phase: np.ndarray      # phase[s] of the unit-coefficient mask operator


def compile_string(term: PauliString) -> CompiledString:
    n = term.n_qubits
    dim = 1 << n
    x_amp = _amplitude_mask(term.x_mask, n)
    z_amp = _amplitude_mask(term.z_mask, n)
    idx = np.arange(dim)
    n_y = bin(term.x_mask & term.z_mask).count("1")
    # factor per source index: i^{#Y} * (-1)^{popcount(s & z bits)}
    signs = 1 - 2 * (np.bitwise_count(idx & z_amp) & 1).astype(np.int64)
    phase = (1j**n_y) * signs.astype(complex)
    perm = idx ^ x_amp
    return CompiledString(n, term.coeff, perm, phase)


def apply_string(cs: CompiledString, psi: np.ndarray) -> np.ndarray:
    """coeff * (mask operator) applied to a vector or a (dim, K) block."""
    if psi.ndim == 1:
        return cs.coeff * (cs.phase * psi)[cs.perm]
    return cs.coeff * (cs.phase[:, None] * psi)[cs.perm, :]


def expectation(op: PauliString | PauliSum, psi: np.ndarray) -> float:
    """Real expectation value <psi|op|psi>; raises if a significant
    imaginary part survives (non-Hermitian observable)."""
    terms = op.terms if isinstance(op, PauliSum) else (op,)
    val = 0.0 + 0.0j
    for t in terms:
        cs = compile_string(t)
        if psi.ndim == 1:
            val += np.vdot(psi, apply_string(cs, psi))
        else:
            raise ValueError("use expectation_block for state blocks")
    if abs(val.imag) > _HERM_TOL:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def expectation_block(op: PauliString | PauliSum, block: np.ndarray) -> np.ndarray:
    """Columnwise real expectations over a (dim, K) block of states."""
    terms = op.terms if isinstance(op, PauliSum) else (op,)
    vals = np.zeros(block.shape[1], dtype=complex)
    for t in terms:
        cs = compile_string(t)
        vals += np.einsum("dk,dk->k", block.conj(), apply_string(cs, block))
    if np.max(np.abs(vals.imag)) > _HERM_TOL:
        raise ValueError("expectation has a significant imaginary part")
    return vals.real


def dense_matrix(h: PauliSum) -> np.ndarray:
    """Dense matrix of a PauliSum assembled from compiled strings
    (column s of the mask operator is phase[s] at row s XOR xmask)."""
    dim = 1 << h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for t in h.terms:
        cs = compile_string(t)
        out[cs.perm, cols] += t.coeff * cs.phase
    return out


# ---------------------------------------------------------------------------
# Propagators
# ---------------------------------------------------------------------------


class ExactPropagator:
    """e^{-itH} through one Hermitian eigendecomposition, reused for every
    requested time."""

    def __init__(self, h: PauliSum):
        if not h.is_hermitian():
            raise ValueError("Hamiltonian must be Hermitian")
        self.n_qubits = h.n_qubits
        mat = dense_matrix(h)
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(mat)

    def evolve_grid(self, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Return a (dim, len(times)) block of evolved states."""
        check_state(psi0)
        c = self.eigenvectors.conj().T @ psi0
        phases = np.exp(-1j * np.outer(self.eigenvalues, np.asarray(times)))
        return self.eigenvectors @ (phases * c[:, None])

    def evolve(self, psi0: np.ndarray, t: float) -> np.ndarray:
        return self.evolve_grid(psi0, np.array([t]))[:, 0]


def exact_propagate(h: PauliSum, psi0: np.ndarray, t: float) -> np.ndarray:
    return ExactPropagator(h).evolve(psi0, t)


class TrotterPropagator:
    """First-order product formula over commuting groups.

    Each step applies, group by group in ascending group id, the exact
    exponential of that group: every string P with real coefficient c is
    a closed-form rotation cos(c dt) I - i sin(c dt) P (the strings in a
    group commute, so the factor order inside a group is immaterial).
    The identity term only contributes a global phase.
    """

    def __init__(self, groups: list[TermGroup], n_trotter: int):
        if n_trotter < 1:
            raise ValueError("n_trotter must be >= 1")
        validate_partition(groups)
        self.n_trotter = n_trotter
        self.constant = 0.0
        compiled: list[list[tuple[float, CompiledString]]] = []
        n_qubits = None
        for grp in groups:
            rows = []
            for term in grp.terms:
                n_qubits = term.n_qubits if n_qubits is None else n_qubits
                if abs(term.coeff.imag) > _HERM_TOL:
                    raise ValueError("Trotter groups need real (Hermitian) coefficients")
                if term.is_identity:
                    self.constant += term.coeff.real
                    continue
                unit = PauliString(term.n_qubits, term.x_mask, term.z_mask, 1.0)
                rows.append((term.coeff.real, compile_string(unit)))
            compiled.append(rows)
        if n_qubits is None:
            raise ValueError("empty partition")
        self.n_qubits = n_qubits
        self._groups = compiled

    def evolve_grid(self, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
        check_state(psi0)
        times = np.asarray(times, dtype=float)
        block = np.repeat(psi0[:, None], len(times), axis=1)
        dt = times / self.n_trotter  # per-column step size
        for _ in range(self.n_trotter):
            for rows in self._groups:
                for coeff, cs in rows:
                    theta = coeff * dt
                    cos_row = np.cos(theta)[None, :]
                    sin_row = (-1j * np.sin(theta))[None, :]
                    flipped = (cs.phase[:, None] * block)[cs.perm, :]
                    block *= cos_row
                    block += sin_row * flipped
        if self.constant != 0.0:
            block *= np.exp(-1j * self.constant * times)[None, :]
        return block

    def evolve(self, psi0: np.ndarray, t: float) -> np.ndarray:
        return self.evolve_grid(psi0, np.array([t]))[:, 0]


def trotter_propagate(
    groups: list[TermGroup], psi0: np.ndarray, t: float, n_trotter: int
) -> np.ndarray:
    return TrotterPropagator(groups, n_trotter).evolve(psi0, t)


# ---------------------------------------------------------------------------
# Reported quantities
# ---------------------------------------------------------------------------


def survival_probability(psi0: np.ndarray, psi_t: np.ndarray) -> float:
    """|<psi_t|psi0>|^2 (invariant under global phases of either state)."""
    if psi0.shape != psi_t.shape:
        raise ValueError("state dimensions differ")
    return float(abs(np.vdot(psi_t, psi0)) ** 2)


def fidelity(
    h: PauliSum,
    groups: list[TermGroup],
    psi0: np.ndarray,
    t: float,
    n_trotter: int,
) -> float:
    """Squared overlap between the Trotterized and exact evolved states."""
    exact = ExactPropagator(h).evolve(psi0, t)
    trott = TrotterPropagator(groups, n_trotter).evolve(psi0, t)
    return float(abs(np.vdot(trott, exact)) ** 2)


def fidelity_grid(
    h: PauliSum,
    groups: list[TermGroup],
    psi0: np.ndarray,
    times: np.ndarray,
    n_trotter: int,
) -> np.ndarray:
    exact = ExactPropagator(h).evolve_grid(psi0, times)
    trott = TrotterPropagator(groups, n_trotter).evolve_grid(psi0, times)
    return np.abs(np.einsum("dk,dk->k", trott.conj(), exact)) ** 2


def _axis_string(n: int, site: int, axis: str) -> PauliString:
    return PauliString.single(n, site, axis)


def correlation(psi: np.ndarray, i: int, k: int, alpha: str = "z", beta: str = "z") -> float:
    """Connected two-site correlator <s_i^a s_k^b> - <s_i^a><s_k^b>."""
    if i == k:
        raise ValueError("sites must differ")
    n = check_state(psi)
    a = _axis_string(n, i, alpha)
    b = _axis_string(n, k, beta)
    joint = expectation(PauliSum([a * b]), psi)
    return joint - expectation(a, psi) * expectation(b, psi)


def correlation_block(
    block: np.ndarray, i: int, k: int, alpha: str = "z", beta: str = "z"
) -> np.ndarray:
    """Columnwise connected correlator over a (dim, K) block."""
    if i == k:
        raise ValueError("sites must differ")
    n = block.shape[0].bit_length() - 1
    a = _axis_string(n, i, alpha)
    b = _axis_string(n, k, beta)
    joint = expectation_block(PauliSum([a * b]), block)
    return joint - expectation_block(a, block) * expectation_block(b, block)


def oscillation_amplitude(series: np.ndarray) -> float:
    """Half the peak-to-peak range over the sampled window."""
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        raise ValueError("empty series")
    return float((series.max() - series.min()) / 2.0)
