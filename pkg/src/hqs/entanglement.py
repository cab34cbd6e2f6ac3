"""Entanglement measures along evolved trajectories.

Two-qubit concurrence (general and closed-form fast paths), logarithmic
negativity of a bipartite reduced state, and detection of intervals where a
measure vanishes (sudden death followed by possible revival).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DimensionMismatchError, NumericalError, StructureError
from .hilbert import HilbertSpec, POSITIVITY_TOL, clip_spectrum, partial_transpose, pauli

IMAG_TOL = 1e-7
# log-negativity below this is rounding noise of a PPT spectrum
LN_NOISE = 1e-12
STRUCTURE_TOL = 1e-10
ESD_THRESHOLD = 1e-9
# population outside the {0, 1} oscillator block allowed for oscillator concurrence
QUBIT_BLOCK_TOL = 1e-8

_SYSY = np.kron(pauli("y"), pauli("y"))


def _as_two_qubit(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionMismatchError(f"two-qubit density matrix must be 4x4, got {rho.shape}")
    return rho


def concurrence(rho, method: Literal["svd", "eig"] = "svd") -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_j`` are square roots of the eigenvalues of ``R = rho (sy x sy)
    rho* (sy x sy)``, sorted in decreasing order.

    Parameters
    ----------
    rho : (4, 4) array
        Two-qubit density matrix.
    method : {"svd", "eig"}
        ``"eig"`` diagonalizes the non-Hermitian ``R`` with a general
        eigensolver and takes square roots of the clipped real parts; an
        eigenvalue of size ``eps`` then contributes ``sqrt(eps) ~ 1e-8``.
        ``"svd"`` (default) factors ``rho = A A^dag`` and returns the singular
        values of ``A^T (sy x sy) A``, which are the ``l_j`` themselves and
        carry only ``eps``-level absolute error.

    Returns
    -------
    float
        Concurrence in ``[0, 1]``.
    """
    rho = _as_two_qubit(rho)
    if method == "eig":
        r = rho @ _SYSY @ rho.conj() @ _SYSY
        ev = np.linalg.eigvals(r)
        if np.max(np.abs(ev.imag)) > IMAG_TOL:
            raise NumericalError(f"spin-flip spectrum has imaginary part {np.max(np.abs(ev.imag)):.3g}")
        re = clip_spectrum(ev.real)
        if re.min() < 0:
            raise NumericalError(f"spin-flip spectrum has negative eigenvalue {re.min():.3g}")
        lam = np.sort(np.sqrt(re))[::-1]
    elif method == "svd":
        w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
        w = clip_spectrum(w)
        if w.min() < 0:
            raise NumericalError(f"density matrix has negative eigenvalue {w.min():.3g}")
        a = v * np.sqrt(w)
        lam = np.linalg.svd(a.T @ _SYSY @ a, compute_uv=False)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(max(0.0, lam[0] - lam[1:].sum()))


def concurrence_hermitian(rho) -> float:
    """Same value via the Hermitian ``sqrt(sqrt(rho) rho~ sqrt(rho))`` route (debug path)."""
    rho = _as_two_qubit(rho)
    w, v = np.linalg.eigh(rho)
    sq = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    tilde = _SYSY @ rho.conj() @ _SYSY
    m = sq @ tilde @ sq
    lam = np.sort(np.sqrt(np.clip(np.linalg.eigvalsh(0.5 * (m + m.conj().T)), 0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1:].sum()))


def _check_zero(rho, mask, what):
    bad = np.max(np.abs(rho[mask]), initial=0.0)
    if bad > STRUCTURE_TOL:
        raise StructureError(f"matrix is not {what}: off-structure entry of size {bad:.3g}")


_BLOCK_MASK = np.ones((4, 4), dtype=bool)
_BLOCK_MASK[np.diag_indices(4)] = False
_BLOCK_MASK[1, 2] = _BLOCK_MASK[2, 1] = False

_X_MASK = _BLOCK_MASK.copy()
_X_MASK[0, 3] = _X_MASK[3, 0] = False


def concurrence_block(rho) -> float:
    """Closed form ``2 max(0, |rho_23| - sqrt(rho_11 rho_44))`` (1-based indices).

    Valid when the only off-diagonal coherence is between the two
    single-excitation states.
    """
    rho = _as_two_qubit(rho)
    _check_zero(rho, _BLOCK_MASK, "block structured")
    d = rho.diagonal().real
    return float(2.0 * max(0.0, abs(rho[1, 2]) - np.sqrt(max(d[0] * d[3], 0.0))))


def concurrence_x_state(rho) -> float:
    """Closed form for X-shaped matrices (only diagonal and anti-diagonal entries)."""
    rho = _as_two_qubit(rho)
    _check_zero(rho, _X_MASK, "X-shaped")
    d = rho.diagonal().real
    return float(
        2.0
        * max(
            0.0,
            abs(rho[1, 2]) - np.sqrt(max(d[0] * d[3], 0.0)),
            abs(rho[0, 3]) - np.sqrt(max(d[1] * d[2], 0.0)),
        )
    )


def log_negativity(rho, dims: Sequence[int], part: int = 0) -> float:
    """``log2`` of the trace norm of the partial transpose."""
    pt = partial_transpose(rho, dims, part)
    mu = np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    ln = float(np.log2(np.sum(np.abs(mu))))
    if -POSITIVITY_TOL <= ln < LN_NOISE:
        return 0.0
    return ln


def oscillator_qubit_block(rho_osc: np.ndarray, n_a: int, n_b: int) -> np.ndarray:
    """Restrict an oscillator-pair matrix to the ``{0, 1} x {0, 1}`` Fock block.

    Raises ``StructureError`` when more than ``QUBIT_BLOCK_TOL`` population
    sits outside that block, since the oscillators are then not effective qubits.
    """
    rho_osc = np.asarray(rho_osc)
    idx = np.array([i * n_b + j for i in (0, 1) for j in (0, 1)])
    block = rho_osc[np.ix_(idx, idx)]
    outside = 1.0 - float(np.trace(block).real)
    if outside > QUBIT_BLOCK_TOL:
        raise StructureError(
            f"oscillator population {outside:.3g} lies outside the {{0,1}} block; use log-negativity"
        )
    # the {0,1} labels map to qubit labels (g, e) = (0, 1); reorder to (e, g)
    perm = [3, 2, 1, 0]
    return block[np.ix_(perm, perm)]


OscMeasure = Literal["concurrence", "log_negativity", "auto"]


@dataclass(frozen=True)
class EntanglementSample:
    tau: float
    qubit_concurrence: float
    oscillator_measure: float
    oscillator_measure_kind: str


def _reduced_stack(states, hs: HilbertSpec, keep) -> np.ndarray:
    """Reduce a stack of vectors ``(n, dim)`` or density matrices ``(n, dim, dim)``."""
    from .evolve import reduced_from_states
    from .hilbert import partial_trace

    states = np.asarray(states)
    if states.ndim == 2 and states.shape[1] == hs.total:
        return reduced_from_states(states, hs, keep)
    if states.ndim == 3 and states.shape[1:] == (hs.total, hs.total):
        return np.array([partial_trace(r, keep, hs) for r in states])
    raise DimensionMismatchError(f"cannot interpret states of shape {states.shape} for dimension {hs.total}")


def measure_series(
    taus: Sequence[float],
    states=None,
    hs: HilbertSpec | None = None,
    osc_measure: OscMeasure = "auto",
    *,
    qubit_dms=None,
    osc_dms=None,
) -> list[EntanglementSample]:
    """Qubit-pair concurrence and an oscillator-pair measure at each sample.

    Pass either full ``states`` (a stack of vectors or density matrices) with
    ``hs``, or the already reduced ``qubit_dms`` and ``osc_dms`` stacks.
    ``"auto"`` uses oscillator concurrence when the populations stay within
    the ``{0, 1}`` block and log-negativity otherwise.
    """
    if states is not None:
        if hs is None:
            raise ValueError("hs is required with full states")
        qubit_dms = _reduced_stack(states, hs, (0, 1))
        osc_dms = _reduced_stack(states, hs, (2, 3))
    if qubit_dms is None or osc_dms is None:
        raise ValueError("need states or both reduced stacks")
    if hs is None:
        raise ValueError("hs is required to interpret the oscillator pair")
    taus = np.asarray(taus, dtype=float)
    if not len(taus) == len(qubit_dms) == len(osc_dms):
        raise DimensionMismatchError("time grid and state stacks differ in length")

    kind = osc_measure
    if kind == "auto":
        kind = "concurrence"
        for r in osc_dms:
            try:
                oscillator_qubit_block(r, hs.n_a, hs.n_b)
            except StructureError:
                kind = "log_negativity"
                break

    out = []
    for tau, rq, ro in zip(taus, qubit_dms, osc_dms):
        if kind == "concurrence":
            eo = concurrence(oscillator_qubit_block(ro, hs.n_a, hs.n_b))
        elif kind == "log_negativity":
            eo = log_negativity(ro, (hs.n_a, hs.n_b))
        else:
            raise ValueError(f"unknown oscillator measure {osc_measure!r}")
        out.append(EntanglementSample(float(tau), concurrence(rq), eo, kind))
    return out


@dataclass(frozen=True)
class EsdReport:
    """Intervals ``(t_esd, t_esb)`` over which a measure stays at or below ``threshold``.

    An interval still open at the end of the grid ends at the last sample;
    one already open at the start begins at the first.
    """

    intervals: tuple[tuple[float, float], ...]
    threshold: float = ESD_THRESHOLD

    @property
    def has_esd(self) -> bool:
        return bool(self.intervals)

    @property
    def first_onset(self) -> float | None:
        return self.intervals[0][0] if self.intervals else None

    @property
    def total_duration(self) -> float:
        return float(sum(b - a for a, b in self.intervals))


def _crossing(t0, t1, v0, v1, threshold):
    if v0 == v1:
        return t0
    return t0 + (threshold - v0) * (t1 - t0) / (v1 - v0)


def detect_esd(taus, values, threshold: float = ESD_THRESHOLD, min_samples: int = 2) -> EsdReport:
    """Maximal runs of samples with ``value <= threshold``.

    Interior endpoints are refined by linear interpolation between the
    bracketing samples. Runs shorter than ``min_samples`` are dropped: a
    single sample at zero is a tangential touch (as in ``cos^2 tau``), not
    a finite interval of vanishing entanglement.
    """
    if min_samples < 1:
        raise ValueError("min_samples must be >= 1")
    taus = np.asarray(taus, dtype=float)
    values = np.asarray(values, dtype=float)
    if taus.shape != values.shape or taus.ndim != 1 or len(taus) == 0:
        raise ValueError("taus and values must be equal-length non-empty 1-D arrays")
    dead = values <= threshold
    intervals = []
    i, n = 0, len(taus)
    while i < n:
        if not dead[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and dead[j + 1]:
            j += 1
        if j - i + 1 < min_samples:
            i = j + 1
            continue
        start = taus[0] if i == 0 else _crossing(taus[i - 1], taus[i], values[i - 1], values[i], threshold)
        end = taus[-1] if j == n - 1 else _crossing(taus[j], taus[j + 1], values[j], values[j + 1], threshold)
        intervals.append((float(start), float(end)))
        i = j + 1
    return EsdReport(tuple(intervals), threshold)
