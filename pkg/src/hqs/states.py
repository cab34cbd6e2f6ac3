"""Initial states: Bell-type qubit pairs and Fock, coherent or thermal oscillators."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import product
from typing import Literal

import numpy as np
from scipy import special, stats

from .errors import DimensionMismatchError, InvalidTruncationError
from .hilbert import HilbertSpec, QUBIT_INDEX

TAIL_TOL = 1e-10
MAX_TRUNCATION = 60
BRANCH_CUTOFF = 1e-12
# levels above the initial occupation that the two qubit excitations can reach
DYNAMIC_HEADROOM = 2


@dataclass(frozen=True)
class QubitPairSpec:
    family: Literal["psi1", "psi2"] = "psi1"
    phi: float = math.pi / 4

    def __post_init__(self):
        if self.family not in ("psi1", "psi2"):
            raise ValueError(f"family must be 'psi1' or 'psi2', got {self.family!r}")
        if not -1e-12 <= self.phi <= math.pi / 2 + 1e-12:
            raise ValueError(f"phi must lie in [0, pi/2], got {self.phi}")


@dataclass(frozen=True)
class OscillatorSpec:
    kind: Literal["fock", "coherent", "thermal"] = "fock"
    n: int = 0
    alpha: complex = 0j
    nbar: float = 0.0

    def __post_init__(self):
        if self.kind not in ("fock", "coherent", "thermal"):
            raise ValueError(f"unknown oscillator kind {self.kind!r}")
        if self.kind == "fock" and (int(self.n) != self.n or self.n < 0):
            raise ValueError("Fock level must be a non-negative integer")
        if self.kind == "thermal" and not self.nbar >= 0:
            raise ValueError("thermal occupancy must be >= 0")

    @classmethod
    def fock(cls, n: int = 0) -> "OscillatorSpec":
        return cls("fock", n=int(n))

    @classmethod
    def coherent(cls, alpha: complex) -> "OscillatorSpec":
        return cls("coherent", alpha=complex(alpha))

    @classmethod
    def thermal(cls, nbar: float) -> "OscillatorSpec":
        return cls("thermal", nbar=float(nbar))

    @property
    def is_pure(self) -> bool:
        return self.kind != "thermal" or self.nbar == 0

    def tail_mass(self, n_levels: int) -> float:
        """Probability weight on Fock levels ``>= n_levels``."""
        if self.kind == "fock":
            return 0.0 if self.n < n_levels else 1.0
        if self.kind == "coherent":
            return coherent_tail(self.alpha, n_levels)
        return thermal_tail(self.nbar, n_levels)

    def truncation(self, headroom: int = DYNAMIC_HEADROOM) -> int:
        """Smallest level count with tail below ``TAIL_TOL``, plus dynamic headroom."""
        if self.kind == "fock":
            return max(2, self.n + 1 + headroom)
        n = 1
        while self.tail_mass(n) >= TAIL_TOL and n < MAX_TRUNCATION:
            n += 1
        if self.tail_mass(n) >= TAIL_TOL:
            warnings.warn(
                f"{self.kind} oscillator needs more than {MAX_TRUNCATION} levels; "
                "capping and renormalizing",
                stacklevel=2,
            )
            return MAX_TRUNCATION
        return min(max(2, n + headroom), MAX_TRUNCATION)


@dataclass(frozen=True)
class InitialStateSpec:
    qubits: QubitPairSpec = field(default_factory=QubitPairSpec)
    osc_a: OscillatorSpec = field(default_factory=OscillatorSpec)
    osc_b: OscillatorSpec = field(default_factory=OscillatorSpec)

    def hilbert(self, extra_levels: int = 0) -> HilbertSpec:
        """Automatic truncation for this initial state."""
        return HilbertSpec(self.osc_a.truncation() + extra_levels, self.osc_b.truncation() + extra_levels)


def coherent_tail(alpha: complex, n_levels: int) -> float:
    return float(stats.poisson.sf(n_levels - 1, abs(alpha) ** 2))


def thermal_tail(nbar: float, n_levels: int) -> float:
    if nbar == 0:
        return 0.0
    return float((nbar / (1.0 + nbar)) ** n_levels)


def bell_ket(q: QubitPairSpec) -> np.ndarray:
    """Qubit-pair vector in the (ee, eg, ge, gg) basis."""
    psi = np.zeros(4, dtype=complex)
    c, s = math.cos(q.phi), math.sin(q.phi)
    if q.family == "psi1":
        psi[2 * QUBIT_INDEX["e"] + QUBIT_INDEX["g"]] = c
        psi[2 * QUBIT_INDEX["g"] + QUBIT_INDEX["e"]] = s
    else:
        psi[2 * QUBIT_INDEX["e"] + QUBIT_INDEX["e"]] = c
        psi[2 * QUBIT_INDEX["g"] + QUBIT_INDEX["g"]] = s
    return psi


def fock_ket(n: int, n_levels: int) -> np.ndarray:
    if n >= n_levels:
        raise InvalidTruncationError(f"Fock level {n} needs more than {n_levels} levels")
    psi = np.zeros(n_levels, dtype=complex)
    psi[n] = 1.0
    return psi


def coherent_amplitudes(alpha: complex, n_levels: int) -> np.ndarray:
    """Untruncated-normalization amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` for n < n_levels."""
    n = np.arange(n_levels)
    log_mag = -0.5 * abs(alpha) ** 2 - 0.5 * special.gammaln(n + 1)
    if alpha == 0:
        out = np.zeros(n_levels, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = log_mag + n * math.log(abs(alpha))
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def coherent_ket(alpha: complex, n_levels: int) -> np.ndarray:
    tail = coherent_tail(alpha, n_levels)
    if tail >= TAIL_TOL:
        raise InvalidTruncationError(
            f"{n_levels} levels leave tail mass {tail:.3g} for |alpha|^2 = {abs(alpha) ** 2:g}; "
            f"need tail < {TAIL_TOL:g}"
        )
    psi = coherent_amplitudes(alpha, n_levels)
    return psi / np.linalg.norm(psi)


def thermal_populations(nbar: float, n_levels: int) -> np.ndarray:
    if nbar < 0:
        raise ValueError("thermal occupancy must be >= 0")
    tail = thermal_tail(nbar, n_levels)
    if tail >= TAIL_TOL:
        raise InvalidTruncationError(
            f"{n_levels} levels leave tail mass {tail:.3g} for nbar = {nbar:g}; need tail < {TAIL_TOL:g}"
        )
    x = nbar / (1.0 + nbar)
    p = x ** np.arange(n_levels) / (1.0 + nbar)
    return p / p.sum()


def thermal_dm(nbar: float, n_levels: int) -> np.ndarray:
    return np.diag(thermal_populations(nbar, n_levels)).astype(complex)


def _oscillator_branches(osc: OscillatorSpec, n_levels: int) -> list[tuple[float, np.ndarray]]:
    if osc.kind == "fock":
        return [(1.0, fock_ket(osc.n, n_levels))]
    if osc.kind == "coherent":
        return [(1.0, coherent_ket(osc.alpha, n_levels))]
    return [(float(w), fock_ket(k, n_levels)) for k, w in enumerate(thermal_populations(osc.nbar, n_levels))]


@dataclass(frozen=True)
class Branches:
    """Convex mixture of pure states: ``rho = sum_k w_k |psi_k><psi_k|``."""

    weights: np.ndarray
    states: np.ndarray
    spec: HilbertSpec

    @property
    def is_pure(self) -> bool:
        return len(self.weights) == 1

    @property
    def vector(self) -> np.ndarray:
        if not self.is_pure:
            raise ValueError("mixed initial state has no single state vector")
        return self.states[0]

    def density_matrix(self) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", self.weights, self.states, self.states.conj())

    def __len__(self):
        return len(self.weights)


def compose_initial(spec: InitialStateSpec, hs: HilbertSpec | None = None) -> Branches:
    """Full initial state as a weighted list of pure product branches.

    Thermal oscillators expand into their Fock populations; branches with
    joint weight below ``BRANCH_CUTOFF`` are dropped and the rest renormalized.
    """
    hs = hs or spec.hilbert()
    for osc, n_levels, name in ((spec.osc_a, hs.n_a, "A"), (spec.osc_b, hs.n_b, "B")):
        if osc.kind == "fock" and osc.n >= n_levels:
            raise DimensionMismatchError(f"oscillator {name} Fock level {osc.n} exceeds truncation {n_levels}")
    q = bell_ket(spec.qubits)
    weights, states = [], []
    for (wa, ka), (wb, kb) in product(_oscillator_branches(spec.osc_a, hs.n_a), _oscillator_branches(spec.osc_b, hs.n_b)):
        w = wa * wb
        if w < BRANCH_CUTOFF:
            continue
        weights.append(w)
        states.append(np.kron(q, np.kron(ka, kb)))
    weights = np.array(weights)
    weights /= weights.sum()
    return Branches(weights, np.array(states), hs)
