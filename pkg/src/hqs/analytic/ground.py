"""Ground-state oscillators: bare double JC and single added couplings."""

from __future__ import annotations

from typing import Literal

import numpy as np

from .base import CoefficientSet

Family = Literal["psi1", "psi2"]
Coupling = Literal["bs", "dd", "ising"]

PSI1_LABELS = (("e", "g", 0, 0), ("g", "e", 0, 0), ("g", "g", 1, 0), ("g", "g", 0, 1))
PSI2_LABELS = (("e", "e", 0, 0), ("g", "g", 1, 1), ("e", "g", 0, 1), ("g", "e", 1, 0), ("g", "g", 0, 0))
X_NAMES = ("x1", "x2", "x3", "x4")
Y_NAMES = ("y1", "y2", "y3", "y4", "y5")


def _check_family(family):
    if family not in ("psi1", "psi2"):
        raise ValueError(f"family must be 'psi1' or 'psi2', got {family!r}")


def djc_ground_concurrence(family: Family, phi: float, tau):
    """Qubit-pair and oscillator-pair concurrence of the bare double JC model.

    Returns
    -------
    (C_q, C_o)
        Arrays broadcast against ``tau``.
    """
    _check_family(family)
    tau = np.asarray(tau, dtype=float)
    s2 = abs(np.sin(2 * phi))
    c2, s2t = np.cos(tau) ** 2, np.sin(tau) ** 2
    if family == "psi1":
        return s2 * c2, s2 * s2t
    cphi2 = np.cos(phi) ** 2
    cq = np.maximum(0.0, c2 * (s2 - 2 * cphi2 * s2t))
    co = np.maximum(0.0, s2t * (s2 - 2 * cphi2 * c2))
    return cq, co


def djc_ground_coefficients(family: Family, phi: float, tau: float, omega_tilde: float = 20.0) -> CoefficientSet:
    _check_family(family)
    c, s = np.cos(phi), np.sin(phi)
    ct, st = np.cos(tau), np.sin(tau)
    if family == "psi1":
        vals = np.array([c * ct, s * ct, -1j * c * st, -1j * s * st])
        return CoefficientSet(PSI1_LABELS, vals, X_NAMES)
    ph = np.exp(-1j * omega_tilde * tau)
    y34 = -1j * c * st * ct * ph
    vals = np.array([c * ct**2 * ph, -c * st**2 * ph, y34, y34, s * np.conj(ph)])
    return CoefficientSet(PSI2_LABELS, vals, Y_NAMES)


def _exchange_gh(coupling: Coupling, r: float, tau):
    """``g``, ``h`` and the rescaled times for beamsplitter or dipole-dipole exchange."""
    t1 = 0.5 * r * tau
    t2 = np.sqrt(1.0 + 0.25 * r * r) * tau
    ratio = 0.5 * r / np.sqrt(1.0 + 0.25 * r * r)
    sign = 1.0 if coupling == "bs" else -1.0
    g = np.cos(t1) * np.cos(t2) + sign * ratio * np.sin(t1) * np.sin(t2)
    h = np.sin(t1) * np.cos(t2) - sign * ratio * np.cos(t1) * np.sin(t2)
    return g, h, t1, t2


def psi1_coupled_coefficients(coupling: Coupling, r: float, phi: float, tau: float) -> CoefficientSet:
    """``x1..x4`` for the single-excitation initial state with one added coupling."""
    if r < 0:
        raise ValueError("coupling ratio must be >= 0")
    c, s = np.cos(phi), np.sin(phi)
    if coupling in ("bs", "dd"):
        g, h, t1, t2 = _exchange_gh(coupling, r, tau)
        # tau / tau_2 is the constant 1 / sqrt(1 + r^2/4), finite at tau = 0
        k = np.sin(t2) / np.sqrt(1.0 + 0.25 * r * r)
        vals = np.array(
            [
                c * g - 1j * s * h,
                s * g - 1j * c * h,
                -k * (s * np.sin(t1) + 1j * c * np.cos(t1)),
                -k * (c * np.sin(t1) + 1j * s * np.cos(t1)),
            ]
        )
    elif coupling == "ising":
        scale = np.sqrt(1.0 + r * r)
        t1 = scale * tau
        k = 1.0 / scale
        rot = np.cos(t1) + 1j * np.sqrt(1.0 - k * k) * np.sin(t1)
        vals = np.array([c * rot, s * rot, -1j * k * c * np.sin(t1), -1j * k * s * np.sin(t1)])
    else:
        raise ValueError(f"unknown coupling {coupling!r}")
    return CoefficientSet(PSI1_LABELS, vals, X_NAMES)


def psi1_coupled_concurrence(coupling: Coupling, r: float, phi: float, tau):
    """``(C_q, C_o)`` for the single-excitation initial state with one added coupling."""
    if r < 0:
        raise ValueError("coupling ratio must be >= 0")
    tau = np.asarray(tau, dtype=float)
    c2, s2 = np.cos(phi) ** 2, np.sin(phi) ** 2
    if coupling in ("bs", "dd"):
        g, h, t1, t2 = _exchange_gh(coupling, r, tau)
        k2 = 1.0 / (1.0 + 0.25 * r * r)
        cq = 2 * np.sqrt((c2 * g**2 + s2 * h**2) * (s2 * g**2 + c2 * h**2))
        co = (
            2
            * k2
            * np.sin(t2) ** 2
            * np.sqrt(
                (c2 * np.cos(t1) ** 2 + s2 * np.sin(t1) ** 2) * (c2 * np.sin(t1) ** 2 + s2 * np.cos(t1) ** 2)
            )
        )
        return cq, co
    if coupling == "ising":
        t1 = np.sqrt(1.0 + r * r) * tau
        frac = np.sin(t1) ** 2 / (1.0 + r * r)
        s2phi = abs(np.sin(2 * phi))
        return s2phi * (1.0 - frac), s2phi * frac
    raise ValueError(f"unknown coupling {coupling!r}")


def psi2_ising(r_i: float, phi: float, tau, omega_tilde: float = 20.0):
    """Amplitudes and ``(C_q, C_o) = (max(0, f+), max(0, f-))`` with an Ising coupling.

    ``tau`` may be an array; the coefficient set is then returned for each
    entry as a list.
    """
    if r_i < 0:
        raise ValueError("coupling ratio must be >= 0")
    tau_arr = np.asarray(tau, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    scale = np.sqrt(4.0 + r_i * r_i)
    t1, t2 = r_i * tau_arr, scale * tau_arr
    k = 1.0 / scale
    ratio = r_i / scale
    root_p = np.sqrt((np.cos(t1) + np.cos(t2)) ** 2 + (np.sin(t1) + ratio * np.sin(t2)) ** 2)
    root_m = np.sqrt((np.cos(t1) - np.cos(t2)) ** 2 + (np.sin(t1) - ratio * np.sin(t2)) ** 2)
    base = -2 * k * k * c * c * np.sin(t2) ** 2
    s2phi = abs(np.sin(2 * phi))
    f_plus = base + 0.5 * s2phi * root_p
    f_minus = base + 0.5 * s2phi * root_m

    def coeffs(t):
        a1, a2 = r_i * t, scale * t
        ph = np.exp(-1j * omega_tilde * t)
        core = np.cos(a2) - 1j * ratio * np.sin(a2)
        y34 = -1j * k * c * np.sin(a2) * ph
        vals = np.array(
            [
                0.5 * c * (core + np.exp(-1j * a1)) * ph,
                0.5 * c * (core - np.exp(-1j * a1)) * ph,
                y34,
                y34,
                s * np.exp(-1j * a1) * np.conj(ph),
            ]
        )
        return CoefficientSet(PSI2_LABELS, vals, Y_NAMES)

    sets = coeffs(float(tau_arr)) if tau_arr.ndim == 0 else [coeffs(t) for t in tau_arr]
    return sets, np.maximum(0.0, f_plus), np.maximum(0.0, f_minus)
