"""Truncated tensor-product space of two qubits and two oscillators.

Basis order is fixed as (qubit 1, qubit 2, oscillator A, oscillator B) with
row-major indexing. Qubit index 0 is the excited state ``e`` and index 1 the
ground state ``g``, so ``sigma_plus = |e><g|`` is the matrix ``[[0, 1], [0, 0]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidTruncationError, StructureError

QUBIT_INDEX = {"e": 0, "g": 1}
HERMITIAN_ATOL = 1e-12
POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class HilbertSpec:
    """Truncation levels of the two oscillators; the qubits are always 2-level."""

    n_a: int
    n_b: int

    def __post_init__(self):
        for name in ("n_a", "n_b"):
            value = getattr(self, name)
            if int(value) != value or value < 2:
                raise InvalidTruncationError(f"{name} must be an integer >= 2, got {value!r}")

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (2, 2, self.n_a, self.n_b)

    @property
    def total(self) -> int:
        return 4 * self.n_a * self.n_b

    def index(self, q1: str, q2: str, n: int, m: int) -> int:
        """Flat index of ``|q1 q2 n m>``; qubit labels are ``'e'`` or ``'g'``."""
        if not (0 <= n < self.n_a and 0 <= m < self.n_b):
            raise IndexError(f"Fock labels ({n}, {m}) outside truncation ({self.n_a}, {self.n_b})")
        return int(np.ravel_multi_index((QUBIT_INDEX[q1], QUBIT_INDEX[q2], n, m), self.dims))

    def basis_ket(self, q1: str, q2: str, n: int, m: int) -> np.ndarray:
        psi = np.zeros(self.total, dtype=complex)
        psi[self.index(q1, q2, n, m)] = 1.0
        return psi

    def labels(self) -> list[tuple[str, str, int, int]]:
        names = ("e", "g")
        return [
            (names[i], names[j], n, m)
            for i in range(2)
            for j in range(2)
            for n in range(self.n_a)
            for m in range(self.n_b)
        ]


def annihilation(n: int) -> np.ndarray:
    """Truncated bosonic lowering operator with ``A[k-1, k] = sqrt(k)``."""
    if int(n) != n or n < 2:
        raise InvalidTruncationError(f"truncation must be an integer >= 2, got {n!r}")
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)


def number(n: int) -> np.ndarray:
    return np.diag(np.arange(n, dtype=float)).astype(complex)


def pauli(which: str) -> np.ndarray:
    if which == "plus":
        return np.array([[0, 1], [0, 0]], dtype=complex)
    if which == "minus":
        return np.array([[0, 0], [1, 0]], dtype=complex)
    if which == "z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if which == "y":
        # in the (e, g) ordering sigma_y is the usual [[0, -i], [i, 0]]
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    raise ValueError(f"unknown Pauli operator {which!r}")


def _dims_of(spec_or_dims) -> tuple[int, ...]:
    if isinstance(spec_or_dims, HilbertSpec):
        return spec_or_dims.dims
    return tuple(int(d) for d in spec_or_dims)


def embed(op: np.ndarray, site: int, spec) -> np.ndarray:
    """Lift a single-site operator to the full space: ``I x ... x op x ... x I``."""
    dims = _dims_of(spec)
    if not 0 <= site < len(dims):
        raise IndexError(f"site {site} out of range for {len(dims)} subsystems")
    op = np.asarray(op)
    if op.shape != (dims[site], dims[site]):
        raise DimensionMismatchError(
            f"operator of shape {op.shape} does not act on site {site} of dimension {dims[site]}"
        )
    factors = [np.eye(d, dtype=complex) for d in dims]
    factors[site] = op.astype(complex)
    return reduce(np.kron, factors)


def is_hermitian(op: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) < atol)


def ket_to_dm(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def partial_trace(rho: np.ndarray, keep: Sequence[int], spec) -> np.ndarray:
    """Reduced density matrix over the subsystems in ``keep``.

    ``rho`` may be a density matrix or a pure-state vector; the kept sites are
    returned in ascending order regardless of the order given.
    """
    dims = _dims_of(spec)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if any(k < 0 or k >= len(dims) for k in keep):
        raise IndexError(f"keep={keep} out of range for {len(dims)} subsystems")
    total = int(np.prod(dims))
    rho = np.asarray(rho)
    nsub = len(dims)
    letters = "abcdefghijklmnop"
    row = list(letters[:nsub])
    kept_dim = int(np.prod([dims[k] for k in keep]))

    if rho.ndim == 1:
        if rho.shape[0] != total:
            raise DimensionMismatchError(f"state of length {rho.shape[0]} does not match total {total}")
        col = [row[i] if i not in keep else letters[nsub + i] for i in range(nsub)]
        out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
        psi = rho.reshape(dims)
        red = np.einsum(f"{''.join(row)},{''.join(col)}->{out}", psi, psi.conj())
        return red.reshape(kept_dim, kept_dim)

    if rho.shape != (total, total):
        raise DimensionMismatchError(f"matrix of shape {rho.shape} does not match total {total}")
    col = [row[i] if i not in keep else letters[nsub + i] for i in range(nsub)]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    red = np.einsum(f"{''.join(row)}{''.join(col)}->{out}", rho.reshape(dims + dims))
    return red.reshape(kept_dim, kept_dim)


def partial_transpose(rho: np.ndarray, dims: Sequence[int], part: int = 0) -> np.ndarray:
    """Transpose the indices of one party of a bipartite operator."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise StructureError("partial_transpose expects a bipartite operator")
    d1, d2 = dims
    rho = np.asarray(rho)
    if rho.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatchError(f"matrix of shape {rho.shape} does not match dims {dims}")
    t = rho.reshape(d1, d2, d1, d2)
    if part == 0:
        t = t.transpose(2, 1, 0, 3)
    elif part == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError("part must be 0 or 1")
    return t.reshape(d1 * d2, d1 * d2)


def expectation(op: np.ndarray, state: np.ndarray) -> complex:
    """``<psi|op|psi>`` for a vector, ``tr(op rho)`` for a matrix."""
    state = np.asarray(state)
    if state.ndim == 1:
        return complex(np.vdot(state, op @ state))
    return complex(np.einsum("ij,ji->", op, state))


def clip_spectrum(evals: np.ndarray, tol: float = POSITIVITY_TOL) -> np.ndarray:
    """Zero out eigenvalues in ``[-tol, 0)``; more negative ones are left alone."""
    evals = np.array(evals, dtype=float)
    evals[(evals < 0) & (evals >= -tol)] = 0.0
    return evals
