"""Two-excitation initial state with an added beamsplitter or dipole-dipole coupling.

The amplitudes are long rational expressions in the coupling ratio and the
discriminant ``Gamma``; they are transcribed term by term and checked against
the numerical propagator rather than simplified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .base import CoefficientSet

PSI2_EXT_LABELS = (
    ("e", "e", 0, 0),
    ("g", "g", 1, 1),
    ("e", "g", 0, 1),
    ("g", "e", 1, 0),
    ("g", "g", 0, 0),
    ("g", "g", 2, 0),
    ("g", "g", 0, 2),
    ("e", "g", 1, 0),
    ("g", "e", 0, 1),
)
PSI2_EXT_NAMES = tuple(f"y{i}" for i in range(1, 10))
SQRT2 = np.sqrt(2.0)

# Amplitudes whose typeset form disagrees with the propagator, and the
# correction that restores agreement (used with ``variant="corrected"``).
PRINTED_DISCREPANCIES = {
    "bs": {"y2": "sin(tau_+), sin(tau_-) should be cos(tau_+), cos(tau_-)"},
    "dd": {
        "y1": "coefficients of cos(tau_+-) are A2+ and +A2-, not A1+ and -A1-",
        "y2": "the cos(tau_-) term enters with +A2-, not -A2-",
        "y6": "overall sign is reversed",
    },
}
Variant = Literal["printed", "corrected"]


@dataclass(frozen=True)
class AnalyticTimescales:
    """Mode frequencies ``delta_+-`` and discriminant ``gamma`` of one coupled case.

    ``tau_plus`` and ``tau_minus`` at time ``tau`` are ``delta_+- * tau``.
    """

    coupling: str
    r: float
    gamma: float
    delta_plus: float
    delta_minus: float

    def taus(self, tau):
        tau = np.asarray(tau, dtype=float)
        return self.delta_plus * tau, self.delta_minus * tau


def psi2_timescales(coupling: Literal["bs", "dd"], r: float) -> AnalyticTimescales:
    if r < 0:
        raise ValueError("coupling ratio must be >= 0")
    r2 = r * r
    if coupling == "bs":
        gamma = np.sqrt(9 * r2 * r2 + 60 * r2 + 4)
        base = 5 * r2 + 6
    elif coupling == "dd":
        gamma = np.sqrt(r2 * r2 + 12 * r2 + 4)
        base = r2 + 6
    else:
        raise ValueError(f"unknown coupling {coupling!r}")
    return AnalyticTimescales(
        coupling, float(r), float(gamma), float(np.sqrt(0.5 * (base + gamma))), float(np.sqrt(0.5 * (base - gamma)))
    )


def bs_constants(r_b: float) -> dict[str, float]:
    """Named constants of the beamsplitter amplitudes, with ``Gamma = Gamma_b``."""
    ts = psi2_timescales("bs", r_b)
    G, dp, dm = ts.gamma, ts.delta_plus, ts.delta_minus
    r2 = r_b * r_b
    r4, r6, r8, r10 = r2**2, r2**3, r2**4, r2**5
    k = {}
    k["A1"] = (r4 + 2) * (27 * r4 + 3 * (3 * G + 16) * r2 + 2 * (G + 2))
    k["A2"] = (r4 + 2) * (27 * r6 + 9 * (G + 15) * r4 + 15 * (G + 4) * r2 + 2 * (G + 2))
    k["A3"] = (54 * r6 + 6 * (3 * G + 40) * r4 + 4 * (7 * G + 29) * r2 + 4 * (G + 2)) * dm
    k["A8"] = (r4 + 2) * (27 * r4 + (9 * G + 78) * r2 + 4 * (G + 2))
    k["B1"] = 18 * r2 * (3 * r8 + (G + 28) * r6 + 2 * (3 * G + 34) * r4 + 2 * (4 * G + 21) * r2 + 2 * (G + 2))
    k["B2"] = 6 * r2 * (9 * r8 + 3 * (G + 20) * r6 + 2 * (5 * G + 31) * r4 + 2 * (G - 7) * r2 - 2 * (G + 2))
    k["B3"] = 9 * r2 * (3 * r6 + (G + 22) * r4 + (4 * G + 30) * r2 + 2 * (G + 2)) * dp
    k["B8"] = 3 * (
        9 * r10 + 3 * (G + 22) * r8 + 12 * (G + 5) * r6 - 4 * (G + 35) * r4 - 20 * (G + 5) * r2 - 4 * (G + 2)
    )
    k["C1"] = (r2 - 1) * (27 * r8 + 9 * (G + 28) * r6 + 6 * (9 * G + 85) * r4 + 2 * (23 * G + 76) * r2 + 4 * (G + 2))
    k["D1"] = G * (r4 + 2) * (9 * r4 + 3 * (G + 12) * r2 + 2 * (G + 2)) * dp**2
    k["D3"] = G * (9 * r4 + 3 * (G + 12) * r2 + 2 * (G + 2)) * dp**3 * dm
    k["N6"] = 12 * SQRT2 * (9 * r6 + 3 * (G + 18) * r4 + 2 * (4 * G + 23) * r2 + 2 * (G + 2))
    return k


def _check_variant(variant):
    if variant not in ("printed", "corrected"):
        raise ValueError(f"variant must be 'printed' or 'corrected', got {variant!r}")


def psi2_bs_coefficients(
    r_b: float, phi: float, tau: float, omega_tilde: float = 20.0, variant: Variant = "printed"
) -> CoefficientSet:
    """Nine amplitudes with a beamsplitter coupling.

    Parameters
    ----------
    variant : {"printed", "corrected"}
        ``"printed"`` uses the typeset expressions verbatim. ``"corrected"``
        applies the single change listed in ``PRINTED_DISCREPANCIES["bs"]``;
        every constant is unchanged.
    """
    _check_variant(variant)
    if r_b <= 0:
        raise ValueError("r_b must be > 0; use djc_ground_coefficients at r_b = 0")
    ts = psi2_timescales("bs", r_b)
    k = bs_constants(r_b)
    tp, tm = ts.taus(tau)
    pre = np.exp(-1j * omega_tilde * tau) * np.cos(phi)
    y1 = 4 / k["D1"] * (k["A1"] * np.cos(tp) + k["B1"] * np.cos(tm) + k["C1"] * (r_b**2 - 1)) * pre
    trig = np.sin if variant == "printed" else np.cos
    y2 = 4 / k["D1"] * (k["A2"] * trig(tp) - k["B2"] * trig(tm) + k["C1"]) * pre
    y3 = -1j * 4 / k["D3"] * (k["A3"] * np.sin(tp) + k["B3"] * np.sin(tm)) * pre
    y5 = np.exp(1j * omega_tilde * tau) * np.sin(phi)
    y6 = 1j * r_b * k["N6"] / k["D3"] * (ts.delta_plus * np.sin(tm) - ts.delta_minus * np.sin(tp)) * pre
    y8 = 4 * r_b / k["D1"] * (k["A8"] * np.cos(tp) + k["B8"] * np.cos(tm) - k["C1"]) * pre
    vals = np.array([y1, y2, y3, y3, y5, y6, y6, y8, y8], dtype=complex)
    return CoefficientSet(PSI2_EXT_LABELS, vals, PSI2_EXT_NAMES)


def dd_constants(r_d: float) -> dict[str, complex]:
    """Named constants of the dipole-dipole amplitudes, with ``Gamma = Gamma_d``."""
    ts = psi2_timescales("dd", r_d)
    G, dp, dm = ts.gamma, ts.delta_plus, ts.delta_minus
    r2 = r_d * r_d
    r4, r6 = r2**2, r2**3
    return {
        "A1+": (r2 + 2 + G) / (4 * G),
        "A1-": (r2 + 2 - G) / (4 * G),
        "A2+": -(r2 - 2 - G) / (4 * G),
        "A2-": (r2 - 2 + G) / (4 * G),
        "N3": -1j * (r4 + (G + 12) * r2 + 2 * (G + 2)),
        "D3": 2 * G**3 * (r4 + (G + 8) * r2 + 2 * (G + 2)) * dp * dm,
        "A3": dm * (r6 + (G + 14) * r4 + 4 * (2 * G + 7) * r2 + 4 * (G + 2)),
        "B3": 4 * G * dp * r2,
    }


def psi2_dd_coefficients(
    r_d: float, phi: float, tau: float, omega_tilde: float = 20.0, variant: Variant = "printed"
) -> CoefficientSet:
    """Nine amplitudes with a dipole-dipole coupling.

    ``variant="corrected"`` replaces ``y1``, ``y2`` and ``y6`` as described in
    ``PRINTED_DISCREPANCIES["dd"]``.
    """
    _check_variant(variant)
    if r_d <= 0:
        raise ValueError("r_d must be > 0; use djc_ground_coefficients at r_d = 0")
    ts = psi2_timescales("dd", r_d)
    k = dd_constants(r_d)
    G, dp, dm = ts.gamma, ts.delta_plus, ts.delta_minus
    tp, tm = ts.taus(tau)
    pre = np.exp(-1j * omega_tilde * tau) * np.cos(phi)
    if variant == "printed":
        y1 = (k["A1+"] * np.cos(tp) - k["A1-"] * np.cos(tm) + 0.5) * pre
        y2 = (k["A2+"] * np.cos(tp) - k["A2-"] * np.cos(tm) - 0.5) * pre
    else:
        osc = k["A2+"] * np.cos(tp) + k["A2-"] * np.cos(tm)
        y1 = (osc + 0.5) * pre
        y2 = (osc - 0.5) * pre
    y3 = k["N3"] / k["D3"] * (k["A3"] * np.sin(tp) + k["B3"] * np.sin(tm)) * pre
    y5 = np.exp(1j * omega_tilde * tau) * np.sin(phi)
    y6 = 1j * SQRT2 * r_d / G * (np.sin(tp) / dp - np.sin(tm) / dm) * pre
    if variant == "corrected":
        y6 = -y6
    y8 = r_d / G * (np.cos(tp) - np.cos(tm)) * pre
    vals = np.array([y1, y2, y3, y3, y5, y6, y6, y8, y8], dtype=complex)
    return CoefficientSet(PSI2_EXT_LABELS, vals, PSI2_EXT_NAMES)
