"""Jordan-Wigner images of the model's fermionic and collective operators.

The model has two levels (upper sigma=+1, lower sigma=-1), each with
Omega = 2j degenerate states labelled m in {+-1, ..., +-j}.  Sites are
numbered so the upper level occupies 1..Omega (m descending) and the
lower level Omega+1..2Omega.  A fermion operator at site i maps to a
sigma+/- factor at i with a Z string on every *higher* site, so products
of the mapped operators reproduce the canonical anticommutation
relations exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pauli import PauliString, PauliSum


@dataclass(frozen=True)
class SiteIndexing:
    """Bijection between (sigma-level, m) pairs and linear site indices."""

    j: int

    def __post_init__(self):
        if self.j < 1 or int(self.j) != self.j:
            raise ValueError("j must be a positive integer")

    @property
    def omega(self) -> int:
        return 2 * self.j

    @property
    def n_sites(self) -> int:
        return 2 * self.omega

    def m_values(self) -> list[int]:
        """Magnetic labels in site order: j, j-1, ..., 1, -1, ..., -j."""
        return [m for m in range(self.j, 0, -1)] + [m for m in range(-1, -self.j - 1, -1)]

    def site(self, sigma: int, m: int) -> int:
        """Linear index of level ``sigma`` (+1 upper / -1 lower), label ``m``."""
        if sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        try:
            offset = self.m_values().index(m)
        except ValueError:
            raise ValueError(f"m={m} not in +-1..+-{self.j}") from None
        return offset + 1 + (0 if sigma == 1 else self.omega)


def fermion_op(site: int, kind: str, n_sites: int) -> PauliSum:
    """Qubit image of a fermion creation/annihilation operator at ``site``.

    Returns (X +- iY)/2 at the site, tensored with Z on every site above
    it.  ``kind`` is ``"creation"`` or ``"annihilation"``.
    """
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range 1..{n_sites}")
    if kind not in ("creation", "annihilation"):
        raise ValueError("kind must be 'creation' or 'annihilation'")
    tail = 0
    for k in range(site + 1, n_sites + 1):
        tail |= 1 << (k - 1)
    bit = 1 << (site - 1)
    sign = 1.0 if kind == "creation" else -1.0
    x_part = PauliString(n_sites, bit, tail, 0.5)
    y_part = PauliString(n_sites, bit, tail | bit, sign * 0.5j)
    return PauliSum([x_part, y_part])


COLLECTIVE_KINDS = ("J+", "J-", "J0", "A1+", "A-1+", "A0+", "A1", "A-1", "A0")


def collective_op(kind: str, idx: SiteIndexing) -> PauliSum:
    """Qubit image of a collective operator, composed from fermion images.

    ``J+`` moves a particle from the lower to the upper level summed over
    m; ``J0`` is half the level-population difference; ``A1+``/``A-1+``
    create a (m, -m) pair within the upper/lower level; ``A0+`` creates
    the antisymmetric cross-level pair.  Trailing ``+`` marks the
    creation variant.
    """
    n = idx.n_sites

    def cdag(sigma, m):
        return fermion_op(idx.site(sigma, m), "creation", n)

    def c(sigma, m):
        return fermion_op(idx.site(sigma, m), "annihilation", n)

    if kind == "J+":
        out = PauliSum.zero(n)
        for m in idx.m_values():
            out = out + cdag(1, m) * c(-1, m)
        return out
    if kind == "J-":
        return collective_op("J+", idx).adjoint()
    if kind == "J0":
        out = PauliSum.zero(n)
        for m in idx.m_values():
            out = out + (cdag(1, m) * c(1, m) - cdag(-1, m) * c(-1, m)).scale(0.5)
        return out
    if kind == "A1+":
        out = PauliSum.zero(n)
        for m in range(1, idx.j + 1):
            out = out + cdag(1, m) * cdag(1, -m)
        return out
    if kind == "A-1+":
        out = PauliSum.zero(n)
        for m in range(1, idx.j + 1):
            out = out + cdag(-1, m) * cdag(-1, -m)
        return out
    if kind == "A0+":
        out = PauliSum.zero(n)
        for m in range(1, idx.j + 1):
            out = out + cdag(-1, m) * cdag(1, -m) - cdag(-1, -m) * cdag(1, m)
        return out
    if kind in ("A1", "A-1", "A0"):
        return collective_op(kind + "+", idx).adjoint()
    raise ValueError(f"unknown collective operator kind {kind!r}")
