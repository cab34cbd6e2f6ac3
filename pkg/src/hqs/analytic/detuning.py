"""Detuned double JC model with ground-state oscillators."""

from __future__ import annotations

import numpy as np

from .ground import Family, _check_family


def detuned_concurrence(family: Family, phi: float, delta_tilde: float, tau_raw):
    """Qubit concurrence at scaled time ``tau_raw = g t`` for detuning ``delta_tilde``.

    Uses the rescaled time ``tau = D tau_raw / 2`` with ``D = sqrt(delta^2 + 4)``
    and the weight ``N = 1 / D^2``; at zero detuning this is the resonant result.
    """
    _check_family(family)
    d = np.sqrt(delta_tilde**2 + 4.0)
    weight = 1.0 / d**2
    tau = 0.5 * d * np.asarray(tau_raw, dtype=float)
    s2phi = np.sin(2 * phi)
    transfer = 4 * weight * np.sin(tau) ** 2
    cq1 = s2phi * (1.0 - transfer)
    if family == "psi1":
        return cq1
    if s2phi == 0:
        return np.zeros_like(cq1)
    return np.maximum(0.0, cq1 * (1.0 - (1.0 + np.cos(2 * phi)) * transfer / s2phi))
