"""Closed-form amplitudes and concurrences used as oracles for the numerics."""

from .base import CoefficientSet
from .ground import (
    djc_ground_coefficients,
    djc_ground_concurrence,
    psi1_coupled_coefficients,
    psi1_coupled_concurrence,
    psi2_ising,
)
from .psi2 import (
    PRINTED_DISCREPANCIES,
    AnalyticTimescales,
    psi2_bs_coefficients,
    psi2_dd_coefficients,
    psi2_timescales,
)
from .fock import coherent_state_vector, fock_coefficients, fock_concurrence
from .detuning import detuned_concurrence

__all__ = [
    "PRINTED_DISCREPANCIES",
    "AnalyticTimescales",
    "CoefficientSet",
    "coherent_state_vector",
    "detuned_concurrence",
    "djc_ground_coefficients",
    "djc_ground_concurrence",
    "fock_coefficients",
    "fock_concurrence",
    "psi1_coupled_coefficients",
    "psi1_coupled_concurrence",
    "psi2_bs_coefficients",
    "psi2_dd_coefficients",
    "psi2_ising",
    "psi2_timescales",
]
