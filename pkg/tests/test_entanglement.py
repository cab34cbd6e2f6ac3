import math

import numpy as np
import pytest

from hqs.analytic import djc_ground_concurrence, psi2_bs_coefficients
from hqs.entanglement import (
    EsdReport,
    concurrence,
    concurrence_block,
    concurrence_hermitian,
    concurrence_x_state,
    detect_esd,
    log_negativity,
    measure_series,
    oscillator_qubit_block,
)
from hqs.errors import DimensionMismatchError, StructureError
from hqs.evolve import EvolutionGrid, unitary_propagate
from hqs.hilbert import HilbertSpec, ket_to_dm, partial_trace
from hqs.model import SystemParams, h_total
from hqs.states import InitialStateSpec, QubitPairSpec, compose_initial


def block_matrix(r23, r11, r44):
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[3, 3] = r11, r44
    rest = 1 - r11 - r44
    rho[1, 1] = rho[2, 2] = rest / 2
    rho[1, 2] = rho[2, 1] = r23
    return rho


def test_concurrence_bell_and_product():
    phi_plus = np.array([1, 0, 0, 1]) / math.sqrt(2)
    assert concurrence(ket_to_dm(phi_plus)) == pytest.approx(1.0, abs=1e-14)
    prod = np.kron([0.6, 0.8j], [1 / math.sqrt(2), -1 / math.sqrt(2)])
    assert concurrence(ket_to_dm(prod)) == pytest.approx(0.0, abs=1e-14)


def test_concurrence_ground_dynamics_value():
    phi, tau = math.pi / 6, math.pi / 3
    hs = HilbertSpec(2, 2)
    psi0 = compose_initial(InitialStateSpec(QubitPairSpec("psi1", phi)), hs).vector
    psi = unitary_propagate(h_total(SystemParams(), hs), psi0, EvolutionGrid(tau, 2))[-1]
    c = concurrence(partial_trace(psi, (0, 1), hs))
    assert c == pytest.approx(math.sin(math.pi / 3) * math.cos(math.pi / 3) ** 2, abs=1e-12)
    assert c == pytest.approx(0.21651, abs=1e-5)


def test_concurrence_methods_agree():
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        rho = x @ x.conj().T
        rho /= np.trace(rho)
        c = concurrence(rho)
        assert abs(concurrence(rho, method="eig") - c) < 1e-7
        assert abs(concurrence_hermitian(rho) - c) < 1e-7
    with pytest.raises(ValueError):
        concurrence(rho, method="other")
    with pytest.raises(DimensionMismatchError):
        concurrence(np.eye(3) / 3)


def test_concurrence_block_examples():
    assert concurrence_block(block_matrix(0.5, 0, 0)) == pytest.approx(1.0)
    rho = block_matrix(0.3, 0.2, 0.2)
    assert concurrence_block(rho) == pytest.approx(0.2)
    assert concurrence(rho) == pytest.approx(0.2, abs=1e-10)
    assert concurrence_block(block_matrix(0.1, 0.2, 0.2)) == 0.0
    with pytest.raises(StructureError):
        concurrence_block(np.full((4, 4), 0.25))


def test_concurrence_x_state_examples():
    rho = np.zeros((4, 4))
    rho[0, 0] = rho[3, 3] = rho[0, 3] = rho[3, 0] = 0.5
    assert concurrence_x_state(rho) == pytest.approx(1.0)
    assert concurrence_x_state(np.diag([0.1, 0.2, 0.3, 0.4])) == 0.0
    with pytest.raises(StructureError):
        concurrence_x_state(block_matrix(0.2, 0.2, 0.2) + 0.01 * np.eye(4)[[1]].T @ np.eye(4)[[0]])


def test_x_state_matches_general_on_evolved_psi2_bs():
    # the two-excitation run with a beamsplitter keeps the qubit pair X-shaped
    hs = HilbertSpec(3, 3)
    cs = psi2_bs_coefficients(1.0, math.pi / 4, 1.0, variant="corrected")
    rho_q = partial_trace(cs.to_vector(hs), (0, 1), hs)
    assert abs(concurrence_x_state(rho_q) - concurrence(rho_q)) < 1e-10

    psi0 = compose_initial(InitialStateSpec(QubitPairSpec("psi2", math.pi / 4)), hs).vector
    psi = unitary_propagate(h_total(SystemParams(r_b=1.0), hs), psi0, EvolutionGrid(1.0, 2))[-1]
    rho_n = partial_trace(psi, (0, 1), hs)
    assert abs(concurrence_x_state(rho_n) - concurrence(rho_n)) < 1e-10


def test_log_negativity_examples():
    phi_plus = np.array([1, 0, 0, 1]) / math.sqrt(2)
    assert log_negativity(ket_to_dm(phi_plus), (2, 2)) == pytest.approx(1.0)
    assert log_negativity(np.diag([0.1, 0.2, 0.3, 0.4]), (2, 2)) == 0.0
    p = 0.25
    psi = np.array([0, math.sqrt(1 - p), math.sqrt(p), 0])
    value = log_negativity(ket_to_dm(psi), (2, 2))
    assert value == pytest.approx(math.log2(1 + 2 * math.sqrt(p * (1 - p))), abs=1e-12)
    assert value == pytest.approx(0.8999686269529915, abs=1e-12)


def test_log_negativity_party_swap():
    rng = np.random.default_rng(8)
    x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    rho = x @ x.conj().T
    rho /= np.trace(rho)
    assert abs(log_negativity(rho, (2, 3), 0) - log_negativity(rho, (2, 3), 1)) < 1e-10


def test_oscillator_qubit_block():
    n = 3
    rho = np.zeros((n * n, n * n), dtype=complex)
    # |1,0> + |0,1> over two oscillators -> qubit Bell state
    v = np.zeros(n * n)
    v[1 * n + 0] = v[0 * n + 1] = 1 / math.sqrt(2)
    rho = ket_to_dm(v)
    assert concurrence(oscillator_qubit_block(rho, n, n)) == pytest.approx(1.0)
    v = np.zeros(n * n)
    v[2 * n] = 1
    with pytest.raises(StructureError):
        oscillator_qubit_block(ket_to_dm(v), n, n)


def test_measure_series_ground_run():
    phi = 0.35
    hs = HilbertSpec(2, 2)
    grid = EvolutionGrid(2 * math.pi, 41)
    psi0 = compose_initial(InitialStateSpec(QubitPairSpec("psi1", phi)), hs).vector
    states = unitary_propagate(h_total(SystemParams(), hs), psi0, grid)
    samples = measure_series(grid.taus, states, hs)
    cq, co = djc_ground_concurrence("psi1", phi, grid.taus)
    assert samples[0].qubit_concurrence == pytest.approx(abs(math.sin(2 * phi)))
    assert samples[0].oscillator_measure == 0.0
    assert all(s.oscillator_measure_kind == "concurrence" for s in samples)
    assert max(abs(s.qubit_concurrence - c) for s, c in zip(samples, cq)) < 1e-12
    assert max(abs(s.oscillator_measure - c) for s, c in zip(samples, co)) < 1e-12
    dms = np.einsum("ti,tj->tij", states, states.conj())
    again = measure_series(grid.taus, dms, hs)
    assert max(abs(a.qubit_concurrence - b.qubit_concurrence) for a, b in zip(samples, again)) < 1e-12


@pytest.mark.parametrize("phi", [math.pi / 4, math.pi / 12])
def test_measure_series_psi2_bs_log_negativity_exceeds_one(phi):
    hs = HilbertSpec(3, 3)
    grid = EvolutionGrid(4 * math.pi, 401)
    psi0 = compose_initial(InitialStateSpec(QubitPairSpec("psi2", phi)), hs).vector
    states = unitary_propagate(h_total(SystemParams(r_b=0.5), hs), psi0, grid)
    samples = measure_series(grid.taus, states, hs)
    assert samples[0].oscillator_measure_kind == "log_negativity"
    assert max(s.oscillator_measure for s in samples) > 1.0
    with pytest.raises(StructureError):
        measure_series(grid.taus, states, hs, osc_measure="concurrence")


def test_detect_esd_examples():
    taus = np.linspace(0, 4 * math.pi, 2001)
    cq, _ = djc_ground_concurrence("psi1", math.pi / 4, taus)
    assert not detect_esd(taus, cq).has_esd

    taus = np.linspace(0, 2 * math.pi, 20001)
    cq, _ = djc_ground_concurrence("psi2", math.pi / 12, taus)
    rep = detect_esd(taus, cq)
    onset = math.asin(math.sqrt(math.tan(math.pi / 12)))
    assert rep.intervals[0][0] == pytest.approx(onset, abs=1e-3)
    assert rep.intervals[0][1] == pytest.approx(math.pi - onset, abs=1e-3)
    assert onset == pytest.approx(0.5440881066820845, abs=1e-12)

    rep = detect_esd(np.linspace(0, 1, 5), np.zeros(5))
    assert rep.intervals == ((0.0, 1.0),)
    assert rep.total_duration == 1.0


def test_detect_esd_interpolates_and_drops_touches():
    taus = np.arange(6.0)
    vals = np.array([1.0, 0.5, 0.0, 0.0, 0.5, 1.0])
    rep = detect_esd(taus, vals, threshold=0.0)
    assert rep.intervals == ((2.0, 3.0),)
    touch = np.array([1.0, 0.5, 0.0, 0.5, 1.0, 1.0])
    assert not detect_esd(taus, touch).has_esd
    assert detect_esd(taus, touch, min_samples=1).has_esd
    with pytest.raises(ValueError):
        detect_esd([], [])
    with pytest.raises(ValueError):
        detect_esd(taus, vals, min_samples=0)


def test_esd_report_defaults():
    rep = EsdReport(())
    assert rep.first_onset is None
    assert rep.total_duration == 0.0
