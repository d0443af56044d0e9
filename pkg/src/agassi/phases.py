"""Closed-form mean-field phase labeling over the (chi, sigma, lambda)
control space, and mesh generation for dataset construction.

Five phases partition [0, 2]^3.  Writing m = max(chi, sigma, 1), the
first-order critical surface sits at lambda* = (1 + m^2) / (2m); below
it the plane splits into the symmetric region (chi, sigma < 1), the HF
region (chi > 1, sigma < chi), the BCS region (sigma > 1, chi < sigma)
and the closed-valley line chi = sigma > 1; above it the combined
HF-BCS phase takes over.  Points within tolerance of a critical surface
carry every adjacent label in ``boundary``, except on the closed-valley
line, which is deliberately scored as the only valid answer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

# Mesh steps of 0.1 hit the flat boundaries exactly in decimal; the
# tolerance only absorbs binary-float representation error.
TIE_TOL = 1e-9


class PhaseLabel(enum.Enum):
    SYMMETRIC = "Symmetric"
    HF = "HF"
    BCS = "BCS"
    HFBCS = "HFBCS"
    CLOSED_VALLEY = "ClosedValley"

    def __str__(self) -> str:  # CSV-friendly
        return self.value


#: Fixed class order used for model outputs and confusion matrices.
LABEL_ORDER = (
    PhaseLabel.SYMMETRIC,
    PhaseLabel.HF,
    PhaseLabel.BCS,
    PhaseLabel.HFBCS,
    PhaseLabel.CLOSED_VALLEY,
)
LABEL_INDEX = {lab: i for i, lab in enumerate(LABEL_ORDER)}

# Priority when several regions touch a boundary point: the first
# closed-region member in this order becomes the primary label.
_PRIORITY = (
    PhaseLabel.CLOSED_VALLEY,
    PhaseLabel.SYMMETRIC,
    PhaseLabel.HF,
    PhaseLabel.BCS,
    PhaseLabel.HFBCS,
)


def lambda_critical(chi: float, sigma: float) -> float:
    """Height of the first-order surface above (chi, sigma)."""
    m = max(chi, sigma, 1.0)
    return (1.0 + m * m) / (2.0 * m)


@dataclass(frozen=True)
class PhasePoint:
    """A control-space coordinate with its classification."""

    chi: float
    sigma: float
    lambda_: float
    label: PhaseLabel
    boundary: frozenset[PhaseLabel] = field(default_factory=frozenset)

    @property
    def on_boundary(self) -> bool:
        return bool(self.boundary)


def _closed_memberships(
    chi: float, sigma: float, lam: float, tol: float, valley_below_one: bool
) -> set[PhaseLabel]:
    """Labels whose region closure contains the point (tolerance-widened)."""
    out: set[PhaseLabel] = set()
    lam_c = lambda_critical(chi, sigma)
    if chi <= 1 + tol and sigma <= 1 + tol and lam <= 1 + tol:
        out.add(PhaseLabel.SYMMETRIC)
    if chi >= 1 - tol and sigma <= chi + tol and lam <= lambda_critical(chi, 0.0) + tol:
        out.add(PhaseLabel.HF)
    if sigma >= 1 - tol and chi <= sigma + tol and lam <= lambda_critical(0.0, sigma) + tol:
        out.add(PhaseLabel.BCS)
    if lam >= lam_c - tol:
        out.add(PhaseLabel.HFBCS)
    valley_floor = -tol if valley_below_one else 1 + tol
    if abs(chi - sigma) <= tol and chi > valley_floor and lam <= lam_c + tol:
        out.add(PhaseLabel.CLOSED_VALLEY)
    return out


def classify_phase(
    chi: float,
    sigma: float,
    lambda_: float,
    tol: float = TIE_TOL,
    valley_below_one: bool = False,
) -> PhasePoint:
    """Total classification of a control-space point.

    Interior points get a single label and an empty boundary set.  A
    point within ``tol`` of one or more critical surfaces gets every
    coexisting label in ``boundary`` (primary chosen by a fixed
    priority), with two exceptions: on the closed-valley line the
    valley is the only admitted answer, and at degenerate corners the
    set is capped to the three highest-priority members.

    ``valley_below_one`` extends the closed-valley line to chi = sigma
    < 1 (a literal reading of the region list); the default keeps that
    wedge symmetric.
    """
    chi, sigma, lam = float(chi), float(sigma), float(lambda_)
    members = _closed_memberships(chi, sigma, lam, tol, valley_below_one)

    # Closed-valley override: on the open valley line (strictly below the
    # critical surface) only the valley label is admitted.
    if PhaseLabel.CLOSED_VALLEY in members:
        strictly_below = lam < lambda_critical(chi, sigma) - tol
        strictly_deformed = valley_below_one or chi > 1 + tol
        if strictly_below and strictly_deformed:
            return PhasePoint(chi, sigma, lam, PhaseLabel.CLOSED_VALLEY, frozenset())

    if not members:  # numerically impossible (regions cover the space), but total
        return PhasePoint(chi, sigma, lam, PhaseLabel.HFBCS, frozenset())

    primary = next(lab for lab in _PRIORITY if lab in members)
    if len(members) == 1:
        return PhasePoint(chi, sigma, lam, primary, frozenset())
    ranked = [lab for lab in _PRIORITY if lab in members][:3]
    return PhasePoint(chi, sigma, lam, primary, frozenset(ranked))


@dataclass(frozen=True)
class MeshSpec:
    """Per-axis closed interval and step count; defaults give the
    21 x 21 x 21 = 9261-point grid on [0, 2]^3."""

    chi_range: tuple[float, float] = (0.0, 2.0)
    sigma_range: tuple[float, float] = (0.0, 2.0)
    lambda_range: tuple[float, float] = (0.0, 2.0)
    steps: int = 21

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("need at least 2 steps per axis")
        for lo, hi in (self.chi_range, self.sigma_range, self.lambda_range):
            if not hi > lo:
                raise ValueError("degenerate axis interval")

    def axis(self, lo: float, hi: float) -> list[float]:
        return [lo + (hi - lo) * i / (self.steps - 1) for i in range(self.steps)]

    @property
    def n_points(self) -> int:
        return self.steps**3


def generate_mesh(
    spec: MeshSpec = MeshSpec(),
    tol: float = TIE_TOL,
    valley_below_one: bool = False,
) -> list[PhasePoint]:
    """Pre-labeled mesh in lexicographic order (chi outer, lambda inner)."""
    chis = spec.axis(*spec.chi_range)
    sigmas = spec.axis(*spec.sigma_range)
    lambdas = spec.axis(*spec.lambda_range)
    return [
        classify_phase(c, s, l, tol=tol, valley_below_one=valley_below_one)
        for c in chis
        for s in sigmas
        for l in lambdas
    ]
