"""Hamiltonian builders in units of the Jaynes-Cummings coupling.

Every energy is divided by ``g_JC`` and time is the scaled ``tau = g_JC t``.
The qubit frequency is ``omega_tilde - delta_tilde`` so that the detuning is
oscillator minus qubit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError
from .hilbert import HilbertSpec, annihilation, number, pauli


@dataclass(frozen=True)
class SystemParams:
    r_b: float = 0.0
    r_d: float = 0.0
    r_i: float = 0.0
    omega_tilde: float = 20.0
    delta_tilde: float = 0.0
    g_ratio_2: float = 1.0

    def __post_init__(self):
        for name in ("r_b", "r_d", "r_i", "omega_tilde", "delta_tilde", "g_ratio_2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
        for name in ("r_b", "r_d", "r_i"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.omega_tilde <= 0:
            raise ConfigError("omega_tilde must be > 0")

    @property
    def omega0_tilde(self) -> float:
        return self.omega_tilde - self.delta_tilde


_IDENT = object()


def _kron4(spec: HilbertSpec, q1=_IDENT, q2=_IDENT, osc_a=_IDENT, osc_b=_IDENT, sparse=False):
    """Product operator over the four sites; omitted factors are identities."""
    factors = [q1, q2, osc_a, osc_b]
    for i, d in enumerate(spec.dims):
        if factors[i] is _IDENT:
            factors[i] = np.eye(d, dtype=complex)
    if sparse:
        out = sp.csr_matrix(factors[0])
        for f in factors[1:]:
            out = sp.kron(out, sp.csr_matrix(f), format="csr")
        return out
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def excitation_number(spec: HilbertSpec, sparse: bool = False):
    """``a^dag a + b^dag b + (sz1 + sz2)/2``, diagonal in the product basis."""
    return _diag_op(spec, excitation_diagonal(spec), sparse)


def excitation_diagonal(spec: HilbertSpec) -> np.ndarray:
    q = np.array([0.5, -0.5])
    na = np.arange(spec.n_a, dtype=float)
    nb = np.arange(spec.n_b, dtype=float)
    return (
        q[:, None, None, None] + q[None, :, None, None] + na[None, None, :, None] + nb[None, None, None, :]
    ).ravel()


def _diag_op(spec: HilbertSpec, diag: np.ndarray, sparse: bool):
    if sparse:
        return sp.diags(diag.astype(complex), format="csr")
    return np.diag(diag.astype(complex))


def h_free(p: SystemParams, spec: HilbertSpec, sparse: bool = False):
    szsum = np.add.outer(np.array([1.0, -1.0]), np.array([1.0, -1.0]))
    nsum = np.add.outer(np.arange(spec.n_a, dtype=float), np.arange(spec.n_b, dtype=float))
    diag = 0.5 * p.omega0_tilde * szsum[:, :, None, None] + p.omega_tilde * nsum[None, None, :, :]
    return _diag_op(spec, diag.ravel(), sparse)


def h_jc(p: SystemParams, spec: HilbertSpec, which: int, sparse: bool = False):
    splus = pauli("plus")
    if which == 1:
        term = _kron4(spec, q1=splus, osc_a=annihilation(spec.n_a), sparse=sparse)
        g = 1.0
    elif which == 2:
        term = _kron4(spec, q2=splus, osc_b=annihilation(spec.n_b), sparse=sparse)
        g = p.g_ratio_2
    else:
        raise ValueError("which must be 1 or 2")
    return g * (term + term.conj().T)


def h_bs(p: SystemParams, spec: HilbertSpec, sparse: bool = False):
    term = _kron4(spec, osc_a=annihilation(spec.n_a), osc_b=annihilation(spec.n_b).T, sparse=sparse)
    return p.r_b * (term + term.conj().T)


def h_dd(p: SystemParams, spec: HilbertSpec, sparse: bool = False):
    term = _kron4(spec, q1=pauli("plus"), q2=pauli("minus"), sparse=sparse)
    return p.r_d * (term + term.conj().T)


def h_is(p: SystemParams, spec: HilbertSpec, sparse: bool = False):
    zz = np.multiply.outer(np.array([1.0, -1.0]), np.array([1.0, -1.0]))
    diag = np.broadcast_to(zz[:, :, None, None], spec.dims)
    return _diag_op(spec, p.r_i * diag.ravel(), sparse)


def h_djc(p: SystemParams, spec: HilbertSpec, sparse: bool = False):
    return h_free(p, spec, sparse) + h_jc(p, spec, 1, sparse) + h_jc(p, spec, 2, sparse)


def h_total(p: SystemParams, spec: HilbertSpec, sparse: bool = False):
    """Double Jaynes-Cummings Hamiltonian plus beamsplitter, dipole-dipole and Ising terms.

    Dense by default; ``sparse=True`` returns CSR for truncations where a dense
    matrix would not fit in memory.
    """
    return h_djc(p, spec, sparse) + h_bs(p, spec, sparse) + h_dd(p, spec, sparse) + h_is(p, spec, sparse)


def h_jc_single(omega_q: float, omega_o: float, n: int, g: float = 1.0) -> np.ndarray:
    """One qubit and one oscillator: ``w_q sz/2 + w_o a^dag a + g(a s+ + a^dag s-)``.

    Basis order is (qubit, oscillator).
    """
    sz = np.kron(pauli("z"), np.eye(n))
    num = np.kron(np.eye(2), number(n))
    term = np.kron(pauli("plus"), annihilation(n))
    return 0.5 * omega_q * sz + omega_o * num + g * (term + term.conj().T)


def dispersive_shift(p: SystemParams) -> float:
    """Dispersive shift ``chi = g^2 / (w_q - w_o)`` in units of ``g_JC``.

    With the oscillator-minus-qubit detuning used here this is ``-1/delta_tilde``.
    """
    if p.delta_tilde == 0:
        raise ValueError("dispersive limit is singular at zero detuning")
    return -1.0 / p.delta_tilde


def h_dispersive(p: SystemParams, spec: HilbertSpec, which: int = 1) -> np.ndarray:
    """Effective large-detuning Hamiltonian of one qubit-oscillator pair.

    ``(w_o + chi sz) a^dag a + (w_q + chi) sz / 2`` on the ``2 x N`` space of
    the selected pair, basis order (qubit, oscillator). Pair 2 uses oscillator
    B's truncation and the ``g_ratio_2`` coupling.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    n = spec.n_a if which == 1 else spec.n_b
    if p.delta_tilde == 0:
        raise ValueError("dispersive limit is singular at zero detuning")
    if abs(p.delta_tilde) < 10:
        warnings.warn(
            f"|delta_tilde| = {abs(p.delta_tilde)} is not large; dispersive approximation is poor",
            stacklevel=2,
        )
    g = 1.0 if which == 1 else p.g_ratio_2
    chi = g * g * dispersive_shift(p)
    sz = np.kron(pauli("z"), np.eye(n))
    num = np.kron(np.eye(2), number(n))
    return p.omega_tilde * num + chi * (sz @ num) + 0.5 * (p.omega0_tilde + chi) * sz
