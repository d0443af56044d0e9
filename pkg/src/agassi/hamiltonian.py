"""Extended Agassi Hamiltonian over qubits: construction, the hard-coded
j=2 reference term table, commuting-group partition, and trapped-ion
gate-count estimates.

The Hamiltonian combines a level-splitting term, a pairing interaction of
strength ``g``, a monopole-monopole interaction of strength ``v`` and an
extended cross-level pairing of strength ``h``:

    H = epsilon*J0 - g * sum_{s,s'} As+ As' - (v/2)*((J+)^2 + (J-)^2)
        - 2h * A0+ A0

For j=2 (8 sites) the fully expanded x/y/z form is transcribed here as a
literal table (136 multi-site x/y strings plus the diagonal content) and
used as an independent check on the programmatic expansion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .jordan_wigner import SiteIndexing, collective_op
from .pauli import PauliString, PauliSum

# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelParams:
    """Bare couplings. ``epsilon`` sets the energy unit; j is the
    half-degeneracy (omega = 2j states per level, 4j sites)."""

    epsilon: float = 1.0
    g: float = 0.0
    v: float = 0.0
    h: float = 0.0
    j: int = 2

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.j < 1 or int(self.j) != self.j:
            raise ValueError("j must be a positive integer")

    @property
    def n_sites(self) -> int:
        return 4 * self.j


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless control parameters (chi, sigma, lambda)."""

    chi: float
    sigma: float
    lambda_: float


def scale_params(s: ScaledParams, epsilon: float = 1.0, j: int = 2) -> ModelParams:
    """Map (chi, sigma, lambda) to bare couplings: x = epsilon*X/(2j-1)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    denom = 2 * j - 1
    if denom <= 0:
        raise ValueError("need 2j - 1 > 0")
    return ModelParams(
        epsilon=epsilon,
        g=epsilon * s.sigma / denom,
        v=epsilon * s.chi / denom,
        h=epsilon * s.lambda_ / denom,
        j=j,
    )


def unscale_params(p: ModelParams) -> ScaledParams:
    """Exact inverse of :func:`scale_params`."""
    denom = 2 * p.j - 1
    return ScaledParams(
        chi=p.v * denom / p.epsilon,
        sigma=p.g * denom / p.epsilon,
        lambda_=p.h * denom / p.epsilon,
    )


# ---------------------------------------------------------------------------
# Construction from collective operators (any j)
# ---------------------------------------------------------------------------


def build_hamiltonian(p: ModelParams) -> PauliSum:
    """Compose H from the Jordan-Wigner images of the collective operators."""
    idx = SiteIndexing(p.j)
    j0 = collective_op("J0", idx)
    jp = collective_op("J+", idx)
    jm = collective_op("J-", idx)
    a1d, a1 = collective_op("A1+", idx), collective_op("A1", idx)
    amd, am = collective_op("A-1+", idx), collective_op("A-1", idx)
    a0d, a0 = collective_op("A0+", idx), collective_op("A0", idx)

    pairing = (a1d + amd) * (a1 + am)
    monopole = jp * jp + jm * jm
    extended = a0d * a0

    return (
        j0.scale(p.epsilon)
        + pairing.scale(-p.g)
        + monopole.scale(-p.v / 2.0)
        + extended.scale(-2.0 * p.h)
    )


def expand_xyz(h: PauliSum) -> PauliSum:
    """Canonical x/y/z form: merged duplicate strings, negligible
    coefficients dropped.  Idempotent; sums built by this package are
    already canonical, so this is primarily a normalization entry point
    for externally assembled term lists."""
    return PauliSum(h.terms, n_qubits=h.n_qubits)


# ---------------------------------------------------------------------------
# The six-part split for j=2, built from raising/lowering chains
# ---------------------------------------------------------------------------

FAMILY_IDS = ("z_field", "zz_coupling", "pairing_g", "monopole_v", "shared_gv", "extended_h")

_N8 = 8


def _chain(spec: dict[int, str], n: int = _N8) -> PauliSum:
    """Product of sigma+/sigma-/Z factors at the given 1-based sites.

    spec maps site -> '+', '-' or 'z'.  The +- factors are (X +- iY)/2,
    so a chain with k of them expands into 2^k x/y strings.
    """
    out = PauliSum.identity(n)
    for site, token in sorted(spec.items()):
        if token == "z":
            factor = PauliSum([PauliString.single(n, site, "Z")])
        elif token in ("+", "-"):
            sgn = 1.0 if token == "+" else -1.0
            factor = PauliSum(
                [
                    PauliString.single(n, site, "X", 0.5),
                    PauliString.single(n, site, "Y", sgn * 0.5j),
                ]
            )
        else:
            raise ValueError(f"bad chain token {token!r}")
        out = out * factor
    return out


def _plus_hc(s: PauliSum) -> PauliSum:
    return s + s.adjoint()


def hamiltonian_families_j2(p: ModelParams) -> dict[str, PauliSum]:
    """The printed six-part split of the j=2 Hamiltonian.

    Diagonal parts: a single-site z field (with the constant shift kept
    so the split sums exactly to H) and two-site zz couplings.  The four
    off-diagonal parts carry prefactors g, v, g+v and h and expand into
    40 + 40 + 8 + 48 x/y strings.
    """
    if p.j != 2:
        raise ValueError("the six-part split is tabulated for j=2 only")
    e, g, v, h = p.epsilon, p.g, p.v, p.h
    n = _N8

    z = lambda i, c: PauliString.single(n, i, "Z", c)
    zz = lambda i, k, c: PauliString(n, 0, (1 << (i - 1)) | (1 << (k - 1)), c)

    z_field = PauliSum(
        [z(i, (e - g - 2 * h) / 4.0) for i in (1, 2, 3, 4)]
        + [z(i, -(e + g + 2 * h) / 4.0) for i in (5, 6, 7, 8)]
        + [PauliString.identity(n, -(g + 2 * h))]
    )
    zz_coupling = PauliSum(
        [zz(1, 4, -g / 4.0), zz(2, 3, -g / 4.0), zz(5, 8, -g / 4.0), zz(6, 7, -g / 4.0)]
        + [zz(1, 8, -h / 2.0), zz(2, 7, -h / 2.0), zz(3, 6, -h / 2.0), zz(4, 5, -h / 2.0)]
    )

    pairing_chains = [
        _chain({1: "+", 2: "z", 3: "z", 4: "+", 6: "-", 7: "-"}),
        _chain({2: "+", 3: "+", 5: "-", 6: "z", 7: "z", 8: "-"}),
        _chain({1: "+", 2: "-", 3: "-", 4: "+"}),
        _chain({2: "+", 3: "+", 6: "-", 7: "-"}),
        _chain({5: "+", 6: "-", 7: "-", 8: "+"}),
    ]
    pairing_g = _plus_hc(sum(pairing_chains, PauliSum.zero(n))).scale(-g)

    monopole_chains = [
        _chain({1: "+", 2: "z", 3: "+", 5: "-", 6: "z", 7: "-"}),
        _chain({2: "+", 3: "z", 4: "+", 6: "-", 7: "z", 8: "-"}),
        _chain({1: "+", 2: "+", 5: "-", 6: "-"}),
        _chain({2: "+", 3: "+", 6: "-", 7: "-"}),
        _chain({3: "+", 4: "+", 7: "-", 8: "-"}),
    ]
    monopole_v = _plus_hc(sum(monopole_chains, PauliSum.zero(n))).scale(-v)

    shared_gv = _plus_hc(
        _chain({1: "+", 2: "z", 3: "z", 4: "+", 5: "-", 6: "z", 7: "z", 8: "-"})
    ).scale(-(g + v))

    extended_chains = (
        _chain({1: "+", 2: "-", 7: "-", 8: "+"})
        - _chain({1: "+", 2: "z", 3: "-", 6: "-", 7: "z", 8: "+"})
        - _chain({1: "+", 2: "z", 3: "z", 4: "-", 5: "-", 6: "z", 7: "z", 8: "+"})
        - _chain({2: "+", 3: "-", 6: "-", 7: "+"})
        - _chain({2: "+", 3: "z", 4: "-", 5: "-", 6: "z", 7: "+"})
        + _chain({3: "+", 4: "-", 5: "-", 6: "+"})
    )
    extended_h = _plus_hc(extended_chains).scale(-2.0 * h)

    return {
        "z_field": z_field,
        "zz_coupling": zz_coupling,
        "pairing_g": pairing_g,
        "monopole_v": monopole_v,
        "shared_gv": shared_gv,
        "extended_h": extended_h,
    }


# ---------------------------------------------------------------------------
# Hard-coded j=2 reference table
# ---------------------------------------------------------------------------
#
# One row per multi-site x/y string: (family, sign, word).  The word lists
# sites 1..8 left to right.  Units per family: pairing_g -> g/8,
# monopole_v -> v/8, shared_gv -> (g+v)/8, extended_h -> h/4.  Transcribed
# literally; do not "simplify" -- this table is the oracle the programmatic
# expansion is checked against.

REFERENCE_XY_TABLE_J2: tuple[tuple[str, int, str], ...] = (
    # pairing_g, sites (1,2,3,4)
    ("pairing_g", -1, "XXXXIIII"),
    ("pairing_g", -1, "XXYYIIII"),
    ("pairing_g", -1, "YYXXIIII"),
    ("pairing_g", -1, "XYXYIIII"),
    ("pairing_g", -1, "YXYXIIII"),
    ("pairing_g", +1, "XYYXIIII"),
    ("pairing_g", +1, "YXXYIIII"),
    ("pairing_g", -1, "YYYYIIII"),
    # pairing_g, sites (5,6,7,8)
    ("pairing_g", -1, "IIIIXXXX"),
    ("pairing_g", -1, "IIIIXXYY"),
    ("pairing_g", -1, "IIIIYYXX"),
    ("pairing_g", -1, "IIIIXYXY"),
    ("pairing_g", -1, "IIIIYXYX"),
    ("pairing_g", +1, "IIIIXYYX"),
    ("pairing_g", +1, "IIIIYXXY"),
    ("pairing_g", -1, "IIIIYYYY"),
    # pairing_g, sites (2,3,6,7)
    ("pairing_g", -1, "IXXIIXXI"),
    ("pairing_g", +1, "IXXIIYYI"),
    ("pairing_g", +1, "IYYIIXXI"),
    ("pairing_g", -1, "IXYIIXYI"),
    ("pairing_g", -1, "IYXIIYXI"),
    ("pairing_g", -1, "IXYIIYXI"),
    ("pairing_g", -1, "IYXIIXYI"),
    ("pairing_g", -1, "IYYIIYYI"),
    # pairing_g, sites (2,3) x (5,8) with z on 6,7
    ("pairing_g", -1, "IXXIXZZX"),
    ("pairing_g", +1, "IXXIYZZY"),
    ("pairing_g", +1, "IYYIXZZX"),
    ("pairing_g", -1, "IXYIXZZY"),
    ("pairing_g", -1, "IYXIYZZX"),
    ("pairing_g", -1, "IXYIYZZX"),
    ("pairing_g", -1, "IYXIXZZY"),
    ("pairing_g", -1, "IYYIYZZY"),
    # pairing_g, sites (1,4) x (6,7) with z on 2,3
    ("pairing_g", -1, "XZZXIXXI"),
    ("pairing_g", +1, "XZZXIYYI"),
    ("pairing_g", +1, "YZZYIXXI"),
    ("pairing_g", -1, "XZZYIXYI"),
    ("pairing_g", -1, "YZZXIYXI"),
    ("pairing_g", -1, "XZZYIYXI"),
    ("pairing_g", -1, "YZZXIXYI"),
    ("pairing_g", -1, "YZZYIYYI"),
    # monopole_v, sites (1,2,5,6)
    ("monopole_v", -1, "XXIIXXII"),
    ("monopole_v", +1, "XXIIYYII"),
    ("monopole_v", +1, "YYIIXXII"),
    ("monopole_v", -1, "XYIIXYII"),
    ("monopole_v", -1, "YXIIYXII"),
    ("monopole_v", -1, "XYIIYXII"),
    ("monopole_v", -1, "YXIIXYII"),
    ("monopole_v", -1, "YYIIYYII"),
    # monopole_v, sites (1,3) x (5,7) with z on 2,6
    ("monopole_v", -1, "XZXIXZXI"),
    ("monopole_v", +1, "XZXIYZYI"),
    ("monopole_v", +1, "YZYIXZXI"),
    ("monopole_v", -1, "XZYIXZYI"),
    ("monopole_v", -1, "YZXIYZXI"),
    ("monopole_v", -1, "XZYIYZXI"),
    ("monopole_v", -1, "YZXIXZYI"),
    ("monopole_v", -1, "YZYIYZYI"),
    # monopole_v, sites (2,3,6,7)
    ("monopole_v", -1, "IXXIIXXI"),
    ("monopole_v", +1, "IXXIIYYI"),
    ("monopole_v", +1, "IYYIIXXI"),
    ("monopole_v", -1, "IXYIIXYI"),
    ("monopole_v", -1, "IYXIIYXI"),
    ("monopole_v", -1, "IXYIIYXI"),
    ("monopole_v", -1, "IYXIIXYI"),
    ("monopole_v", -1, "IYYIIYYI"),
    # monopole_v, sites (2,4) x (6,8) with z on 3,7
    ("monopole_v", -1, "IXZXIXZX"),
    ("monopole_v", +1, "IXZXIYZY"),
    ("monopole_v", +1, "IYZYIXZX"),
    ("monopole_v", -1, "IXZYIXZY"),
    ("monopole_v", -1, "IYZXIYZX"),
    ("monopole_v", -1, "IXZYIYZX"),
    ("monopole_v", -1, "IYZXIXZY"),
    ("monopole_v", -1, "IYZYIYZY"),
    # monopole_v, sites (3,4,7,8)
    ("monopole_v", -1, "IIXXIIXX"),
    ("monopole_v", +1, "IIXXIIYY"),
    ("monopole_v", +1, "IIYYIIXX"),
    ("monopole_v", -1, "IIXYIIXY"),
    ("monopole_v", -1, "IIYXIIYX"),
    ("monopole_v", -1, "IIXYIIYX"),
    ("monopole_v", -1, "IIYXIIXY"),
    ("monopole_v", -1, "IIYYIIYY"),
    # shared_gv, sites (1,4) x (5,8) with z on 2,3,6,7
    ("shared_gv", -1, "XZZXXZZX"),
    ("shared_gv", +1, "XZZXYZZY"),
    ("shared_gv", +1, "YZZYXZZX"),
    ("shared_gv", -1, "XZZYXZZY"),
    ("shared_gv", -1, "YZZXYZZX"),
    ("shared_gv", -1, "XZZYYZZX"),
    ("shared_gv", -1, "YZZXXZZY"),
    ("shared_gv", -1, "YZZYYZZY"),
    # extended_h, sites (1,2,7,8)
    ("extended_h", -1, "XXIIIIXX"),
    ("extended_h", -1, "XXIIIIYY"),
    ("extended_h", -1, "YYIIIIXX"),
    ("extended_h", -1, "XYIIIIXY"),
    ("extended_h", -1, "YXIIIIYX"),
    ("extended_h", +1, "XYIIIIYX"),
    ("extended_h", +1, "YXIIIIXY"),
    ("extended_h", -1, "YYIIIIYY"),
    # extended_h, sites (1,3) x (6,8) with z on 2,7
    ("extended_h", +1, "XZXIIXZX"),
    ("extended_h", +1, "XZXIIYZY"),
    ("extended_h", +1, "YZYIIXZX"),
    ("extended_h", +1, "XZYIIXZY"),
    ("extended_h", +1, "YZXIIYZX"),
    ("extended_h", -1, "XZYIIYZX"),
    ("extended_h", -1, "YZXIIXZY"),
    ("extended_h", +1, "YZYIIYZY"),
    # extended_h, sites (1,4) x (5,8) with z on 2,3,6,7
    ("extended_h", +1, "XZZXXZZX"),
    ("extended_h", +1, "XZZXYZZY"),
    ("extended_h", +1, "YZZYXZZX"),
    ("extended_h", +1, "XZZYXZZY"),
    ("extended_h", +1, "YZZXYZZX"),
    ("extended_h", -1, "XZZYYZZX"),
    ("extended_h", -1, "YZZXXZZY"),
    ("extended_h", +1, "YZZYYZZY"),
    # extended_h, sites (2,3,6,7)
    ("extended_h", +1, "IXXIIXXI"),
    ("extended_h", +1, "IXXIIYYI"),
    ("extended_h", +1, "IYYIIXXI"),
    ("extended_h", +1, "IXYIIXYI"),
    ("extended_h", +1, "IYXIIYXI"),
    ("extended_h", -1, "IXYIIYXI"),
    ("extended_h", -1, "IYXIIXYI"),
    ("extended_h", +1, "IYYIIYYI"),
    # extended_h, sites (2,4) x (5,7) with z on 3,6
    ("extended_h", +1, "IXZXXZXI"),
    ("extended_h", +1, "IXZXYZYI"),
    ("extended_h", +1, "IYZYXZXI"),
    ("extended_h", +1, "IXZYXZYI"),
    ("extended_h", +1, "IYZXYZXI"),
    ("extended_h", -1, "IXZYYZXI"),
    ("extended_h", -1, "IYZXXZYI"),
    ("extended_h", +1, "IYZYYZYI"),
    # extended_h, sites (3,4,5,6)
    ("extended_h", -1, "IIXXXXII"),
    ("extended_h", -1, "IIXXYYII"),
    ("extended_h", -1, "IIYYXXII"),
    ("extended_h", -1, "IIXYXYII"),
    ("extended_h", -1, "IIYXYXII"),
    ("extended_h", +1, "IIXYYXII"),
    ("extended_h", +1, "IIYXXYII"),
    ("extended_h", -1, "IIYYYYII"),
)


def _family_unit(family: str, p: ModelParams) -> float:
    if family == "pairing_g":
        return p.g / 8.0
    if family == "monopole_v":
        return p.v / 8.0
    if family == "shared_gv":
        return (p.g + p.v) / 8.0
    if family == "extended_h":
        return p.h / 4.0
    raise ValueError(f"unknown x/y family {family!r}")


def reference_xy_strings_j2(p: ModelParams) -> list[PauliString]:
    """The 136 tabulated multi-site x/y strings with their coefficients,
    one entry per table row (duplicated masks across families are NOT
    merged here)."""
    if p.j != 2:
        raise ValueError("reference table exists for j=2 only")
    return [
        PauliString.from_label(word, sign * _family_unit(family, p))
        for family, sign, word in REFERENCE_XY_TABLE_J2
    ]


def reference_terms_j2(p: ModelParams) -> PauliSum:
    """Full j=2 Hamiltonian assembled from the literal term table
    (x/y rows plus the printed diagonal content), canonicalized."""
    fams = hamiltonian_families_j2(p)
    diagonal = fams["z_field"] + fams["zz_coupling"]
    return PauliSum(
        list(diagonal.terms) + reference_xy_strings_j2(p), n_qubits=_N8
    )


# ---------------------------------------------------------------------------
# Commuting-group partition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TermGroup:
    """A set of pairwise-commuting strings; one Trotter factor."""

    group_id: int
    terms: tuple[PauliString, ...]

    def __len__(self) -> int:
        return len(self.terms)


def partition_commuting(h: PauliSum) -> list[TermGroup]:
    """Greedy (largest-degree-first) coloring of the anticommutation graph.

    Vertices are the strings of ``h``; an edge joins two strings that fail
    the symplectic commutation test.  Vertices are processed in order of
    descending degree (ties broken by mask key) and each takes the
    smallest color unused among its already-colored neighbors.
    """
    terms = list(h.terms)
    n = len(terms)
    adj: list[set[int]] = [set() for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if not terms[a].commutes_with(terms[b]):
                adj[a].add(b)
                adj[b].add(a)
    order = sorted(range(n), key=lambda i: (-len(adj[i]), terms[i].key))
    color = [-1] * n
    for i in order:
        used = {color[k] for k in adj[i] if color[k] >= 0}
        c = 0
        while c in used:
            c += 1
        color[i] = c
    n_colors = max(color) + 1 if n else 0
    groups = []
    for c in range(n_colors):
        members = tuple(t for t, col in zip(terms, color) if col == c)
        groups.append(TermGroup(group_id=c, terms=members))
    return groups


def validate_partition(groups: list[TermGroup]) -> None:
    """Raise if any group contains a non-commuting pair."""
    for grp in groups:
        ts = grp.terms
        for a in range(len(ts)):
            for b in range(a + 1, len(ts)):
                if not ts[a].commutes_with(ts[b]):
                    raise ValueError(
                        f"group {grp.group_id} holds non-commuting strings "
                        f"{ts[a].label()} and {ts[b].label()}"
                    )


# ---------------------------------------------------------------------------
# Trapped-ion resource estimate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResourceEstimate:
    """Gate counts: one entangling (Moelmer-Soerensen) gate per string of
    weight >= 2 and two single-qubit gates per x/y factor (basis change in
    and out), per Trotter step."""

    ms_gates_per_step: int
    single_qubit_gates_per_step: int
    n_trotter: int

    @property
    def per_step_total(self) -> int:
        return self.ms_gates_per_step + self.single_qubit_gates_per_step

    @property
    def total(self) -> int:
        return self.n_trotter * self.per_step_total


def estimate_resources(groups: list[TermGroup], n_trotter: int) -> ResourceEstimate:
    if n_trotter < 1:
        raise ValueError("n_trotter must be >= 1")
    ms = 0
    single = 0
    for grp in groups:
        for t in grp.terms:
            if t.weight >= 2:
                ms += 1
            single += 2 * t.n_xy_factors()
    return ResourceEstimate(ms, single, n_trotter)


def family_term_groups(p: ModelParams) -> list[TermGroup]:
    """Partition of the tabulated (unmerged) j=2 term list, the basis the
    gate-count estimate is quoted on: shared-mask strings from different
    couplings keep their own table entries."""
    fams = hamiltonian_families_j2(p)
    diag = fams["z_field"] + fams["zz_coupling"]
    entries = list(diag.terms) + [
        t for t in reference_xy_strings_j2(p) if abs(t.coeff) > 1e-15
    ]
    groups: list[list[PauliString]] = []
    for t in entries:
        for g in groups:
            if all(t.commutes_with(u) for u in g):
                g.append(t)
                break
        else:
            groups.append([t])
    return [TermGroup(i, tuple(g)) for i, g in enumerate(groups)]


def trotter_groups(h: PauliSum) -> list[TermGroup]:
    """Partition used by the evolution engine.

    Hamiltonians matching the 8-site model structure use the frozen,
    error-optimized grouping (see ``_trotter_table``); anything else
    falls back to the greedy coloring.  Strings absent from ``h`` (zero
    couplings) simply drop out of their group.
    """
    from ._trotter_table import J2_TROTTER_GROUPS

    if h.n_qubits == 8:
        table_masks = {m for grp in J2_TROTTER_GROUPS for m in grp}
        if all(t.key in table_masks for t in h.terms):
            by_key = {t.key: t for t in h.terms}
            groups = []
            for grp in J2_TROTTER_GROUPS:
                members = tuple(by_key[m] for m in grp if m in by_key)
                if members:
                    groups.append(TermGroup(len(groups), members))
            return groups
    return partition_commuting(h)
