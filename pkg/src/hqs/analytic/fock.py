"""Bare double JC dynamics from Fock and coherent oscillator states."""

from __future__ import annotations

from typing import Literal

import numpy as np

from ..errors import InvalidTruncationError
from ..hilbert import HilbertSpec
from ..states import TAIL_TOL, coherent_amplitudes, coherent_tail
from .base import CoefficientSet
from .ground import Family, _check_family


def _fock_times(n: int, m: int, tau):
    if n < 0 or m < 0 or int(n) != n or int(m) != m:
        raise ValueError("Fock levels must be non-negative integers")
    tau = np.asarray(tau, dtype=float)
    return np.sqrt(n + 1) * tau, np.sqrt(m + 1) * tau, np.sqrt(n) * tau, np.sqrt(m) * tau


def fock_labels(family: Family, n: int, m: int):
    if family == "psi1":
        return (
            ("e", "g", n, m),
            ("g", "e", n, m),
            ("g", "g", n + 1, m),
            ("g", "g", n, m + 1),
            ("e", "e", n - 1, m),
            ("e", "e", n, m - 1),
            ("g", "e", n + 1, m - 1),
            ("e", "g", n - 1, m + 1),
        )
    return (
        ("e", "e", n, m),
        ("g", "g", n + 1, m + 1),
        ("e", "g", n, m + 1),
        ("g", "e", n + 1, m),
        ("g", "g", n, m),
        ("e", "e", n - 1, m - 1),
        ("e", "g", n - 1, m),
        ("g", "e", n, m - 1),
    )


def _fock_values(family: Family, phi: float, n: int, m: int, tau, omega_tilde: float) -> np.ndarray:
    """Amplitudes with shape ``(8,) + tau.shape``."""
    t1, t2, t3, t4 = _fock_times(n, m, tau)
    c, s = np.cos(phi), np.sin(phi)
    c1, c2, c3, c4 = np.cos(t1), np.cos(t2), np.cos(t3), np.cos(t4)
    s1, s2, s3, s4 = np.sin(t1), np.sin(t2), np.sin(t3), np.sin(t4)
    tau = np.asarray(tau, dtype=float)
    if family == "psi1":
        ph = np.exp(-1j * (n + m) * omega_tilde * tau)
        vals = [
            c * c1 * c4,
            s * c2 * c3,
            -1j * c * s1 * c4,
            -1j * s * s2 * c3,
            -1j * s * c2 * s3,
            -1j * c * c1 * s4,
            -c * s1 * s4,
            -s * s2 * s3,
        ]
        return np.array([v * ph for v in vals])
    up = np.exp(-1j * (n + m + 1) * omega_tilde * tau)
    down = np.exp(-1j * (n + m - 1) * omega_tilde * tau)
    vals = [
        c * c1 * c2 * up,
        -c * s1 * s2 * up,
        -1j * c * c1 * s2 * up,
        -1j * c * s1 * c2 * up,
        s * c3 * c4 * down,
        -s * s3 * s4 * down,
        -1j * s * s3 * c4 * down,
        -1j * s * c3 * s4 * down,
    ]
    return np.array(vals)


def fock_coefficients(
    family: Family, phi: float, n: int, m: int, tau: float, omega_tilde: float = 20.0
) -> CoefficientSet:
    """Eight amplitudes for oscillators starting in ``|n>`` and ``|m>``."""
    _check_family(family)
    vals = _fock_values(family, phi, n, m, float(tau), omega_tilde)
    prefix = "x" if family == "psi1" else "y"
    names = tuple(f"{prefix}{i}" for i in range(1, 9))
    return CoefficientSet(fock_labels(family, n, m), vals.astype(complex), names)


def fock_concurrence(family: Family, phi: float, n: int, m: int, tau, variant: Literal["printed", "corrected"] = "printed"):
    """Qubit concurrence ``max(0, f)`` for oscillators starting in ``|n>`` and ``|m>``.

    Parameters
    ----------
    variant : {"printed", "corrected"}
        ``"printed"`` evaluates the typeset ``f_1``, ``f_2``. These reduce to
        the ground-state result for ``psi1`` at ``n = m = 0`` but otherwise do
        not follow from the amplitudes. ``"corrected"`` applies the block
        formula ``f = 2|rho_23| - 2 sqrt(rho_11 rho_44)`` to the amplitudes of
        :func:`fock_coefficients`; the coherent pair is ``|eg>, |ge>`` for
        ``psi1`` and ``|ee>, |gg>`` for ``psi2``.
    """
    _check_family(family)
    if variant not in ("printed", "corrected"):
        raise ValueError(f"variant must be 'printed' or 'corrected', got {variant!r}")
    t1, t2, t3, t4 = _fock_times(n, m, tau)
    c2p, s2p = np.cos(phi) ** 2, np.sin(phi) ** 2
    s2phi = abs(np.sin(2 * phi))
    c1, c2, c3, c4 = np.cos(t1), np.cos(t2), np.cos(t3), np.cos(t4)
    s1, s2, s3, s4 = np.sin(t1), np.sin(t2), np.sin(t3), np.sin(t4)
    if variant == "printed":
        if family == "psi1":
            root = np.sqrt(c2p * s1**2 * c4**2 + s2p * s2**2 * c3**2)
            f = s2phi * c1 * c2 * (c3 * c4 - s3 * s4 * root)
        else:
            a = c2p * s1**2 * c2**2 + s2p * c3**2 * s4**2
            b = c2p * c1**2 * s2**2 + s2p * s3**2 * c4**2
            f = s2phi * c1 * c2 * c3 * c4 - 2 * np.sqrt(a**2 + b**2)
        return np.maximum(0.0, f)
    coh = s2phi * np.abs(c1 * c2 * c3 * c4)
    if family == "psi1":
        p_ee = s2p * c2**2 * s3**2 + c2p * c1**2 * s4**2
        p_gg = c2p * s1**2 * c4**2 + s2p * s2**2 * c3**2
        f = coh - 2 * np.sqrt(p_ee * p_gg)
    else:
        p_eg = c2p * c1**2 * s2**2 + s2p * s3**2 * c4**2
        p_ge = c2p * s1**2 * c2**2 + s2p * c3**2 * s4**2
        f = coh - 2 * np.sqrt(p_eg * p_ge)
    return np.maximum(0.0, f)


def coherent_state_vector(
    family: Family, phi: float, alpha: complex, tau: float, truncation: int, omega_tilde: float = 20.0
) -> np.ndarray:
    """Full state vector for both oscillators starting in the coherent state ``|alpha>``.

    The double sum over Fock pairs runs over ``n, m < truncation - 1`` so that
    every ``n + 1`` partner stays inside the space, with weights renormalized
    over that range.

    Returns
    -------
    ndarray
        Vector of length ``4 * truncation**2`` in the standard basis order.
    """
    _check_family(family)
    n_sum = truncation - 1
    tail = coherent_tail(alpha, n_sum)
    if tail >= TAIL_TOL:
        raise InvalidTruncationError(
            f"truncation {truncation} leaves tail mass {tail:.3g} for |alpha|^2 = {abs(alpha) ** 2:g}"
        )
    hs = HilbertSpec(truncation, truncation)
    q = coherent_amplitudes(alpha, n_sum)
    q = q / np.linalg.norm(q)
    psi = np.zeros(hs.total, dtype=complex)
    for n in range(n_sum):
        for m in range(n_sum):
            w = q[n] * q[m]
            if w == 0:
                continue
            psi += w * fock_coefficients(family, phi, n, m, tau, omega_tilde).to_vector(hs)
    return psi
