import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hqs.analytic import (
    djc_ground_coefficients,
    fock_coefficients,
    psi1_coupled_coefficients,
    psi2_bs_coefficients,
    psi2_dd_coefficients,
    psi2_ising,
)
from hqs.entanglement import concurrence, concurrence_block, concurrence_x_state, log_negativity
from hqs.hilbert import HilbertSpec, embed, partial_trace, partial_transpose
from hqs.model import SystemParams, excitation_number, h_total

angles = st.floats(0.0, math.pi / 2)
times = st.floats(0.0, 20.0)
ratios = st.floats(0.01, 3.0)
seeds = st.integers(0, 2**32 - 1)


def random_dm(rng, dim, rank=None):
    rank = rank or dim
    x = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_su2(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    a, b = q[0] + 1j * q[1], q[2] + 1j * q[3]
    return np.array([[a, -b.conjugate()], [b, a.conjugate()]])


@settings(max_examples=100, deadline=None)
@given(family=st.sampled_from(["psi1", "psi2"]), phi=angles, tau=times)
def test_ground_coefficients_normalized(family, phi, tau):
    assert abs(djc_ground_coefficients(family, phi, tau).norm - 1) < 1e-10


@settings(max_examples=100, deadline=None)
@given(coupling=st.sampled_from(["bs", "dd", "ising"]), r=ratios, phi=angles, tau=times)
def test_psi1_coupled_coefficients_normalized(coupling, r, phi, tau):
    assert abs(psi1_coupled_coefficients(coupling, r, phi, tau).norm - 1) < 1e-10


@settings(max_examples=100, deadline=None)
@given(fn=st.sampled_from([psi2_bs_coefficients, psi2_dd_coefficients]), r=ratios, phi=angles, tau=times)
def test_psi2_corrected_coefficients_normalized(fn, r, phi, tau):
    assert abs(fn(r, phi, tau, variant="corrected").norm - 1) < 1e-8


@settings(max_examples=100, deadline=None)
@given(r=ratios, phi=angles, tau=times)
def test_psi2_ising_coefficients_normalized(r, phi, tau):
    cs, _, _ = psi2_ising(r, phi, tau)
    assert abs(cs.norm - 1) < 1e-10


@settings(max_examples=100, deadline=None)
@given(family=st.sampled_from(["psi1", "psi2"]), phi=angles, n=st.integers(0, 6), m=st.integers(0, 6), tau=times)
def test_fock_coefficients_normalized(family, phi, n, m, tau):
    assert abs(fock_coefficients(family, phi, n, m, tau).norm - 1) < 1e-10


@settings(max_examples=50, deadline=None)
@given(seed=seeds)
def test_concurrence_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho = random_dm(rng, 4, rank=rng.integers(1, 5))
    u = np.kron(random_su2(rng), random_su2(rng))
    assert abs(concurrence(u @ rho @ u.conj().T) - concurrence(rho)) < 1e-9


@settings(max_examples=50, deadline=None)
@given(seed=seeds)
def test_closed_forms_agree_with_general_concurrence(seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(4))
    c23 = math.sqrt(p[1] * p[2]) * rng.uniform() * np.exp(1j * rng.uniform(0, 2 * math.pi))
    c14 = math.sqrt(p[0] * p[3]) * rng.uniform() * np.exp(1j * rng.uniform(0, 2 * math.pi))
    x = np.diag(p).astype(complex)
    x[1, 2], x[2, 1] = c23, np.conj(c23)
    assert abs(concurrence_block(x) - concurrence(x)) < 1e-10
    x[0, 3], x[3, 0] = c14, np.conj(c14)
    assert abs(concurrence_x_state(x) - concurrence(x)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(seed=seeds, d1=st.integers(2, 3), d2=st.integers(2, 4))
def test_partial_transpose_properties(seed, d1, d2):
    rng = np.random.default_rng(seed)
    rho = random_dm(rng, d1 * d2)
    pt = partial_transpose(rho, (d1, d2), 0)
    assert np.array_equal(partial_transpose(pt, (d1, d2), 0), rho)
    assert np.trace(pt) == np.trace(rho)
    assert abs(log_negativity(rho, (d1, d2), 0) - log_negativity(rho, (d1, d2), 1)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_product_states_have_zero_log_negativity(seed):
    rng = np.random.default_rng(seed)
    rho = np.kron(random_dm(rng, 2), random_dm(rng, 3))
    assert log_negativity(rho, (2, 3)) == 0.0


@settings(max_examples=30, deadline=None)
@given(seed=seeds, keep=st.sampled_from([(0,), (1,), (2,), (3,), (0, 1), (2, 3), (0, 2)]))
def test_partial_trace_preserves_trace(seed, keep):
    rng = np.random.default_rng(seed)
    hs = HilbertSpec(2, 3)
    red = partial_trace(random_dm(rng, hs.total, rank=3), keep, hs)
    assert abs(np.trace(red) - 1) < 1e-12


@settings(max_examples=20, deadline=None)
@given(r_b=st.floats(0, 2), r_d=st.floats(0, 2), r_i=st.floats(0, 2), delta=st.floats(-3, 3))
def test_total_hamiltonian_conserves_excitations(r_b, r_d, r_i, delta):
    hs = HilbertSpec(3, 3)
    h = h_total(SystemParams(r_b=r_b, r_d=r_d, r_i=r_i, delta_tilde=delta), hs)
    n_exc = excitation_number(hs)
    assert np.max(np.abs(h @ n_exc - n_exc @ h)) < 1e-12
    assert np.max(np.abs(h - h.conj().T)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(seed=seeds, site_a=st.integers(0, 3), site_b=st.integers(0, 3))
def test_embedded_operators_on_disjoint_sites_commute(seed, site_a, site_b):
    if site_a == site_b:
        return
    rng = np.random.default_rng(seed)
    hs = HilbertSpec(2, 3)
    a = embed(rng.normal(size=(hs.dims[site_a],) * 2), site_a, hs)
    b = embed(rng.normal(size=(hs.dims[site_b],) * 2), site_b, hs)
    assert np.max(np.abs(a @ b - b @ a)) < 1e-12
