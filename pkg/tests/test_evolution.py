import numpy as np
import pytest

from agassi.evolution import (
    ExactPropagator,
    TrotterPropagator,
    apply_string,
    basis_state,
    compile_string,
    correlation,
    correlation_block,
    dense_matrix,
    exact_propagate,
    expectation,
    expectation_block,
    fidelity,
    fidelity_grid,
    oscillation_amplitude,
    parse_state_spec,
    survival_probability,
    trotter_propagate,
)
from agassi.hamiltonian import (
    ModelParams,
    TermGroup,
    build_hamiltonian,
    partition_commuting,
    trotter_groups,
)
from agassi.pauli import PauliString, PauliSum

from oracles import dense_sum, dense_word, random_pauli_string, taylor_expm

PSI0 = basis_state("dddduuuu")
P_REF = ModelParams(1.0, 0.25, 0.25, 0.25, 2)


# ------------------------------------------------------------------- states


def test_state_spec_parsing():
    assert parse_state_spec("dddduuuu") == [("d", "z")] * 4 + [("u", "z")] * 4
    assert parse_state_spec("dx dx ux") == [("d", "x")] * 2 + [("u", "x")]
    assert parse_state_spec("d,u") == [("d", "z"), ("u", "z")]
    with pytest.raises(ValueError):
        parse_state_spec("q")
    with pytest.raises(ValueError):
        parse_state_spec("")


def test_basis_state_down_up_block():
    psi = basis_state("dddduuuu")
    # site 1 is the most significant bit; down = bit set
    assert psi[0b11110000] == 1.0
    assert np.count_nonzero(psi) == 1


def test_all_down_single_amplitude():
    psi = basis_state("dd")
    assert psi[0b11] == 1.0


def test_x_basis_down_eigenvector():
    psi = basis_state("dx")
    assert np.allclose(psi, np.array([1.0, -1.0]) / np.sqrt(2))
    assert expectation(PauliString.from_label("X"), psi) == pytest.approx(-1.0)


def test_basis_state_length_check():
    with pytest.raises(ValueError):
        basis_state("dd", n_qubits=3)


# ----------------------------------------------------- string application


def test_apply_string_matches_dense(rng):
    for _ in range(150):
        n = int(rng.integers(1, 5))
        ps = random_pauli_string(rng, n)
        psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        got = apply_string(compile_string(ps), psi)
        want = dense_word(ps.label(), ps.coeff) @ psi
        assert np.allclose(got, want, atol=1e-12)


def test_dense_matrix_matches_kron(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        s = PauliSum([random_pauli_string(rng, n) for _ in range(5)])
        assert np.allclose(dense_matrix(s), dense_sum(s), atol=1e-12)


def test_expectation_block_consistency(rng):
    n = 3
    block = rng.normal(size=(8, 4)) + 1j * rng.normal(size=(8, 4))
    block /= np.linalg.norm(block, axis=0)
    op = PauliString.from_label("XZY")
    vals = expectation_block(op, block)
    for k in range(4):
        assert vals[k] == pytest.approx(expectation(op, block[:, k]))


# ------------------------------------------------------------------- exact


def test_exact_t0_identity():
    h = build_hamiltonian(P_REF)
    psi = exact_propagate(h, PSI0, 0.0)
    assert np.allclose(psi, PSI0, atol=1e-12)


def test_exact_requires_hermitian():
    bad = PauliSum([PauliString.from_label("XIIIIIII", 1j)])
    with pytest.raises(ValueError):
        ExactPropagator(bad)


def test_diagonal_survival_stays_one():
    h = build_hamiltonian(ModelParams(epsilon=1.0, j=2))
    prop = ExactPropagator(h)
    for t in (0.3, 1.7, 4.0):
        psi = prop.evolve(PSI0, t)
        assert survival_probability(PSI0, psi) == pytest.approx(1.0, abs=1e-12)


def test_exact_agrees_with_taylor_expm_oracle(rng):
    for _ in range(5):
        n = 3
        terms = [random_pauli_string(rng, n) for _ in range(6)]
        h = PauliSum([t.scale(1.0) for t in terms])
        h = h + h.adjoint()  # hermitize
        t = float(rng.uniform(0.2, 2.0))
        psi0 = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        psi0 /= np.linalg.norm(psi0)
        got = ExactPropagator(h).evolve(psi0, t)
        want = taylor_expm(-1j * t * dense_sum(h)) @ psi0
        assert np.linalg.norm(got - want) < 1e-8


def test_norm_and_energy_conservation():
    h = build_hamiltonian(P_REF)
    prop = ExactPropagator(h)
    times = np.linspace(0.1, 8.0, 25)
    block = prop.evolve_grid(PSI0, times)
    norms = np.linalg.norm(block, axis=0)
    assert np.abs(norms - 1).max() < 1e-10
    energies = expectation_block(h, block)
    assert np.abs(energies - energies[0]).max() < 1e-8


# ------------------------------------------------------------------ trotter


def test_trotter_exact_for_commuting_hamiltonian():
    h = build_hamiltonian(ModelParams(epsilon=1.0, j=2))
    groups = partition_commuting(h)
    for nt in (1, 3, 7):
        F = fidelity(h, groups, PSI0, 4.0, nt)
        assert F == pytest.approx(1.0, abs=1e-12)


def test_trotter_matches_dense_product(rng):
    # independent check: dense per-group exponentials multiplied out
    p = ModelParams(1.0, 0.4, 0.6, 0.3, 2)
    h = build_hamiltonian(p)
    groups = trotter_groups(h)
    t, nt = 1.3, 3
    step = np.eye(256, dtype=complex)
    for grp in groups:
        hg = dense_sum(PauliSum(list(grp.terms), n_qubits=8))
        step = taylor_expm(-1j * (t / nt) * hg) @ step
    want = np.linalg.matrix_power(step, nt) @ PSI0
    got = trotter_propagate(groups, PSI0, t, nt)
    assert np.linalg.norm(got - want) < 1e-8


def test_trotter_rejects_invalid_partition():
    bad = [TermGroup(0, (PauliString.from_label("XIIIIIII"), PauliString.from_label("ZIIIIIII")))]
    with pytest.raises(ValueError):
        TrotterPropagator(bad, 2)


def test_trotter_norm_preservation():
    h = build_hamiltonian(P_REF)
    groups = trotter_groups(h)
    block = TrotterPropagator(groups, 7).evolve_grid(PSI0, np.linspace(0.2, 6, 12))
    assert np.abs(np.linalg.norm(block, axis=0) - 1).max() < 1e-10


def test_trotter_error_scaling_first_order():
    h = build_hamiltonian(P_REF)
    exact = ExactPropagator(h).evolve(PSI0, 5.0)
    # greedy partition: plain first-order behavior on the moderate ladder
    groups = partition_commuting(h)
    ladder = (8, 16, 32, 64, 128)
    errs = [
        np.linalg.norm(TrotterPropagator(groups, nt).evolve(PSI0, 5.0) - exact)
        for nt in ladder
    ]
    slope = np.polyfit(np.log(ladder), np.log(errs), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.2)
    # the tuned default grouping suppresses part of the leading error, so
    # its clean 1/n regime sits at larger step counts
    groups = trotter_groups(h)
    ladder = (64, 128, 256, 512)
    errs = [
        np.linalg.norm(TrotterPropagator(groups, nt).evolve(PSI0, 5.0) - exact)
        for nt in ladder
    ]
    slope = np.polyfit(np.log(ladder), np.log(errs), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.2)


def test_group_order_reversal_vanishes_with_step_count():
    h = build_hamiltonian(P_REF)
    groups = trotter_groups(h)
    rev = list(reversed(groups))
    t = 3.0
    diffs = []
    for nt in (8, 32, 128):
        a = TrotterPropagator(groups, nt).evolve(PSI0, t)
        b = TrotterPropagator(rev, nt).evolve(PSI0, t)
        diffs.append(np.linalg.norm(a - b))
    assert diffs[0] > diffs[1] > diffs[2]
    assert diffs[2] < 0.05


def test_magnetization_conserved_exact_and_trotter_limit():
    h = build_hamiltonian(P_REF)
    sz = PauliSum([PauliString.single(8, i, "Z") for i in range(1, 9)])
    times = np.linspace(0.5, 6, 8)
    exact_block = ExactPropagator(h).evolve_grid(PSI0, times)
    mags = expectation_block(sz, exact_block)
    assert np.abs(mags - mags[0]).max() < 1e-10
    # group exponentials are not individually particle-conserving, so the
    # Trotterized magnetization drifts only at the product-formula error
    # and vanishes with the step count
    drifts = []
    for nt in (4, 16, 64):
        blk = TrotterPropagator(trotter_groups(h), nt).evolve_grid(PSI0, times)
        drifts.append(np.abs(expectation_block(sz, blk) - mags[0]).max())
    assert drifts[0] > drifts[2]
    assert drifts[2] < 0.02


# ------------------------------------------------------------- observables


def test_fidelity_t0_is_one():
    h = build_hamiltonian(P_REF)
    groups = trotter_groups(h)
    assert fidelity(h, groups, PSI0, 0.0, 4) == pytest.approx(1.0, abs=1e-12)


def test_survival_global_phase_invariance(rng):
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi /= np.linalg.norm(psi)
    phi = rng.normal(size=16) + 1j * rng.normal(size=16)
    phi /= np.linalg.norm(phi)
    s0 = survival_probability(psi, phi)
    assert survival_probability(psi * np.exp(0.7j), phi) == pytest.approx(s0)
    assert survival_probability(psi, phi * np.exp(-1.2j)) == pytest.approx(s0)


def test_correlation_zero_for_product_state():
    psi = basis_state("dudududu")
    assert correlation(psi, 1, 2) == pytest.approx(0.0, abs=1e-14)
    assert correlation(psi, 3, 7) == pytest.approx(0.0, abs=1e-14)


def test_correlation_rejects_equal_sites():
    with pytest.raises(ValueError):
        correlation(PSI0, 2, 2)


def test_correlation_bell_pair_extremes():
    bell = np.zeros(4, dtype=complex)
    bell[0b00] = bell[0b11] = 1 / np.sqrt(2)
    assert correlation(bell, 1, 2, "z", "z") == pytest.approx(1.0)
    assert correlation(bell, 1, 2, "x", "x") == pytest.approx(1.0)


def test_correlation_block_matches_scalar(rng):
    h = build_hamiltonian(ModelParams(1.0, 0.5, 0.5, 0.1, 2))
    times = np.array([0.5, 1.5, 2.5])
    block = ExactPropagator(h).evolve_grid(PSI0, times)
    series = correlation_block(block, 1, 2, "z", "z")
    for k in range(len(times)):
        assert series[k] == pytest.approx(correlation(block[:, k], 1, 2, "z", "z"))


def test_oscillation_amplitude_definition():
    assert oscillation_amplitude(np.zeros(10)) == 0.0
    ts = np.linspace(0, 4 * np.pi, 400)
    assert oscillation_amplitude(1.7 * np.cos(ts)) == pytest.approx(1.7, abs=1e-3)
    with pytest.raises(ValueError):
        oscillation_amplitude(np.array([]))


def test_correlation_equivalence_class():
    # the eight pair positions that are symmetry-equivalent for the
    # default initial state: both levels' pairs of sites with different
    # |m|.  Partner pairs (same |m|: (1,4), (2,3), (5,8), (6,7)) form
    # their own class because the pairing interaction singles them out.
    h = build_hamiltonian(ModelParams(1.0, 0.4, 0.8, 0.6, 2))
    times = np.linspace(0.2, 5, 12)
    block = ExactPropagator(h).evolve_grid(PSI0, times)
    base = correlation_block(block, 1, 2)
    for (i, k) in ((1, 3), (2, 4), (3, 4), (5, 6), (5, 7), (6, 8), (7, 8)):
        assert np.abs(correlation_block(block, i, k) - base).max() < 1e-10
    partner_base = correlation_block(block, 1, 4)
    for (i, k) in ((2, 3), (5, 8), (6, 7)):
        assert np.abs(correlation_block(block, i, k) - partner_base).max() < 1e-10
    # the two classes really are distinct
    assert np.abs(partner_base - base).max() > 1e-3


def test_amplitude_grows_toward_strong_pairing():
    # fixed chi=1.5, lambda=0: oscillations grow with sigma across the
    # transition (slice A at 2.3 vs slice B at 0.7)
    from agassi.hamiltonian import ScaledParams, scale_params

    times = np.arange(1, 101) * 0.1
    amps = {}
    for sigma in (0.7, 2.3):
        p = scale_params(ScaledParams(1.5, sigma, 0.0))
        h = build_hamiltonian(p)
        block = ExactPropagator(h).evolve_grid(PSI0, times)
        amps[sigma] = oscillation_amplitude(correlation_block(block, 1, 2))
    assert amps[2.3] > amps[0.7]
