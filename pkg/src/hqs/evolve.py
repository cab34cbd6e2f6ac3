"""Time evolution: exact unitary propagation and Lindblad master-equation integration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import NumericalError
from .hilbert import HilbertSpec, annihilation, number, pauli
from .model import _kron4

NORM_TOL = 1e-10
POSITIVITY_MONITOR_TOL = 1e-7
MAX_STEP = 1e-3
MAX_REFINEMENTS = 6


@dataclass(frozen=True)
class EvolutionGrid:
    tau_max: float
    n_samples: int

    def __post_init__(self):
        if not self.tau_max > 0:
            raise ValueError("tau_max must be > 0")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise ValueError("n_samples must be an integer >= 2")

    @property
    def taus(self) -> np.ndarray:
        return np.linspace(0.0, self.tau_max, self.n_samples)

    @property
    def spacing(self) -> float:
        return self.tau_max / (self.n_samples - 1)


@dataclass(frozen=True)
class LindbladSpec:
    lambda_r: float = 0.0
    lambda_d: float = 0.0
    nbar_th: float = 0.0

    def __post_init__(self):
        for name in ("lambda_r", "lambda_d", "nbar_th"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def is_closed(self) -> bool:
        return self.lambda_r == 0 and self.lambda_d == 0


class Channel(NamedTuple):
    name: str
    op: np.ndarray
    rate: float


def _as_csr(h) -> sp.csr_matrix:
    return h.tocsr() if sp.issparse(h) else sp.csr_matrix(np.asarray(h))


def _check_hermitian(h, atol: float = 1e-10):
    diff = _as_csr(h) - _as_csr(h).conj().T
    if diff.nnz and np.max(np.abs(diff.data)) > atol:
        raise NumericalError("Hamiltonian is not Hermitian")


class Propagator:
    """``exp(-i H tau)`` from a one-time Hermitian eigendecomposition.

    The Hamiltonian is split into the connected components of its sparsity
    graph (the excitation-number sectors for excitation-conserving models)
    and each block is diagonalized on first use, so the result is the same
    as a full ``eigh`` at a fraction of the cost.
    """

    def __init__(self, h):
        _check_hermitian(h)
        self._h = _as_csr(h)
        self.dim = self._h.shape[0]
        pattern = self._h.copy()
        pattern.data = np.abs(pattern.data)
        pattern.eliminate_zeros()
        n_comp, labels = connected_components(pattern, directed=False)
        self.blocks = [np.flatnonzero(labels == c) for c in range(n_comp)]
        self._labels = labels
        self._eig: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def _decompose(self, c: int):
        if c not in self._eig:
            idx = self.blocks[c]
            block = self._h[idx][:, idx].toarray()
            try:
                evals, evecs = np.linalg.eigh(block)
            except np.linalg.LinAlgError as exc:
                raise NumericalError(f"eigendecomposition failed on a block of size {len(idx)}") from exc
            self._eig[c] = (evals, evecs)
        return self._eig[c]

    def propagate(self, psi0: np.ndarray, taus: Sequence[float]) -> np.ndarray:
        """States at each time, shape ``(len(taus), dim)``."""
        psi0 = np.asarray(psi0, dtype=complex)
        if psi0.shape != (self.dim,):
            raise ValueError(f"state of shape {psi0.shape} does not match dimension {self.dim}")
        taus = np.asarray(taus, dtype=float)
        out = np.zeros((len(taus), self.dim), dtype=complex)
        for c in np.unique(self._labels[np.flatnonzero(psi0)]):
            idx = self.blocks[c]
            evals, evecs = self._decompose(c)
            coeff = evecs.conj().T @ psi0[idx]
            phases = np.exp(-1j * np.outer(taus, evals))
            out[:, idx] = (phases * coeff) @ evecs.T
        # tau = 0 reproduces the input exactly
        out[taus == 0] = psi0
        return out


def unitary_propagate(h, initial: np.ndarray, grid: EvolutionGrid, propagator: Propagator | None = None) -> np.ndarray:
    prop = propagator or Propagator(h)
    states = prop.propagate(initial, grid.taus)
    drift = np.max(np.abs(np.linalg.norm(states, axis=1) - np.linalg.norm(initial)))
    if drift > NORM_TOL:
        raise NumericalError(f"norm drifted by {drift:.3g} during unitary propagation")
    return states


def reduced_from_states(states: np.ndarray, spec: HilbertSpec, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrices of a stack of pure states, shape ``(n, d, d)``."""
    keep = tuple(sorted(keep))
    psi = states.reshape((states.shape[0],) + spec.dims)
    letters = "abcd"
    row = "".join(letters)
    col = "".join(c.upper() if i in keep else c for i, c in enumerate(letters))
    out = "".join(letters[k] for k in keep) + "".join(letters[k].upper() for k in keep)
    red = np.einsum(f"t{row},t{col}->t{out}", psi, psi.conj(), optimize=True)
    d = int(np.prod([spec.dims[k] for k in keep]))
    return red.reshape(states.shape[0], d, d)


CHUNK_BYTES = 2**27


def _branch_support(prop: Propagator, psi0: np.ndarray):
    """Blocks touched by ``psi0`` with its coefficients in each block's eigenbasis."""
    parts = []
    for c in np.unique(prop._labels[np.flatnonzero(psi0)]):
        idx = prop.blocks[c]
        evals, evecs = prop._decompose(c)
        parts.append((idx, evals, evecs, evecs.conj().T @ psi0[idx]))
    return parts


def _support_states(parts, taus: np.ndarray):
    idx = np.concatenate([p[0] for p in parts])
    cols = [(np.exp(-1j * np.outer(taus, ev)) * coeff) @ vecs.T for _, ev, vecs, coeff in parts]
    return idx, np.concatenate(cols, axis=1)


def _reduce_branch(idx, vals, spec: HilbertSpec, key):
    """Reduced matrices of pure states given only on the support ``idx``."""
    n_osc = spec.n_a * spec.n_b
    q, o = np.divmod(idx, n_osc)
    if key == (0, 1):
        m = np.zeros((vals.shape[0], 4, n_osc), dtype=complex)
        m[:, q, o] = vals
        used = np.unique(o)
        m = m[:, :, used]
        return None, np.einsum("tqa,tpa->tqp", m, m.conj())
    if key == (2, 3):
        used, pos = np.unique(o, return_inverse=True)
        m = np.zeros((vals.shape[0], 4, len(used)), dtype=complex)
        m[:, q, pos] = vals
        return used, np.einsum("tqa,tqb->tab", m, m.conj())
    if key is None:
        return idx, np.einsum("ti,tj->tij", vals, vals.conj())
    full = np.zeros((vals.shape[0], spec.total), dtype=complex)
    full[:, idx] = vals
    return None, reduced_from_states(full, spec, key)


def _key_dim(spec: HilbertSpec, key) -> int:
    if key is None:
        return spec.total
    return int(np.prod([spec.dims[k] for k in key]))


def evolve_branches(
    h,
    branches,
    grid: EvolutionGrid,
    keeps: Sequence[Sequence[int]] | None = None,
    propagator: Propagator | None = None,
    observe: Callable[[object, np.ndarray], object] | None = None,
) -> dict:
    """Evolve each pure branch and mix afterwards.

    Returns a dict mapping each ``keep`` tuple to the stacked mixture reduced
    density matrices; with ``keeps=None`` the full density matrices are
    returned under the key ``None``. Each branch is propagated only on the
    Hamiltonian blocks it touches, and time is processed in chunks so that
    the working set stays bounded.

    Parameters
    ----------
    observe
        Called as ``observe(key, rho)`` on every mixed matrix; the dict then
        holds lists of its results instead of stacked matrices, so large
        oscillator matrices never have to be stored for the whole grid.
    """
    weights = np.asarray(branches.weights, dtype=float)
    if abs(weights.sum() - 1.0) > 1e-8:
        raise ValueError(f"branch weights sum to {weights.sum()!r}, not 1")
    prop = propagator or Propagator(h)
    spec = branches.spec
    keys = [None] if keeps is None else [None if k is None else tuple(sorted(k)) for k in keeps]
    supports = [_branch_support(prop, psi0) for psi0 in branches.states]
    taus = grid.taus
    biggest = max(_key_dim(spec, k) for k in keys)
    chunk = max(1, min(len(taus), CHUNK_BYTES // (16 * biggest * biggest)))

    out: dict = {k: [] for k in keys}
    for start in range(0, len(taus), chunk):
        t = taus[start : start + chunk]
        acc = {k: np.zeros((len(t), _key_dim(spec, k), _key_dim(spec, k)), dtype=complex) for k in keys}
        for w, parts, psi0 in zip(weights, supports, branches.states):
            idx, vals = _support_states(parts, t)
            vals[t == 0] = psi0[idx]
            drift = np.max(np.abs(np.linalg.norm(vals, axis=1) - np.linalg.norm(psi0)))
            if drift > NORM_TOL:
                raise NumericalError(f"norm drifted by {drift:.3g} during unitary propagation")
            for k in keys:
                used, red = _reduce_branch(idx, vals, spec, k)
                if used is None:
                    acc[k] += w * red
                else:
                    acc[k][:, used[:, None], used[None, :]] += w * red
        for k in keys:
            if observe is None:
                out[k].append(acc[k])
            else:
                out[k].extend(observe(k, r) for r in acc[k])
    if observe is None:
        return {k: np.concatenate(v) for k, v in out.items()}
    return out


def lindblad_operators(spec: LindbladSpec, hs: HilbertSpec, sparse: bool = False) -> list[Channel]:
    """Dissipation and dephasing channels; zero-rate channels are omitted."""
    a = annihilation(hs.n_a)
    b = annihilation(hs.n_b)
    sm, spl, sz = pauli("minus"), pauli("plus"), pauli("z")
    down = spec.lambda_r * (1.0 + spec.nbar_th)
    up = spec.lambda_r * spec.nbar_th
    table = [
        ("a", dict(osc_a=a), down),
        ("b", dict(osc_b=b), down),
        ("sigma_minus_1", dict(q1=sm), down),
        ("sigma_minus_2", dict(q2=sm), down),
        ("a_dag", dict(osc_a=a.conj().T), up),
        ("b_dag", dict(osc_b=b.conj().T), up),
        ("sigma_plus_1", dict(q1=spl), up),
        ("sigma_plus_2", dict(q2=spl), up),
        ("n_a", dict(osc_a=number(hs.n_a)), spec.lambda_d),
        ("n_b", dict(osc_b=number(hs.n_b)), spec.lambda_d),
        ("sigma_z_1", dict(q1=sz), spec.lambda_d),
        ("sigma_z_2", dict(q2=sz), spec.lambda_d),
    ]
    return [Channel(name, _kron4(hs, sparse=sparse, **factors), rate) for name, factors, rate in table if rate > 0]


def validate_density_matrix(rho: np.ndarray, tol: float = 1e-9):
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")


def lindblad_step_size(grid: EvolutionGrid, max_step: float | None = None) -> tuple[float, int]:
    """Fixed RK4 step dividing the sample spacing, and substeps per sample."""
    h_max = max_step if max_step is not None else min(MAX_STEP, grid.tau_max / 1e4)
    substeps = max(1, math.ceil(grid.spacing / h_max - 1e-9))
    return grid.spacing / substeps, substeps


class _DenseGenerator:
    """Full-matrix Lindblad generator with sparse operators.

    Uses ``-i(Heff rho - rho Heff^dag) = -i(X - X^dag)`` with ``X = Heff rho``,
    valid because every RK4 stage of a Hermitian ``rho`` stays Hermitian, and
    applies the jump terms ``sum_k L_k rho L_k^dag`` as one sparse
    superoperator on the row-major vectorized ``rho``.
    """

    def __init__(self, h, channels):
        heff = _as_csr(h).astype(complex)
        dim = heff.shape[0]
        jump = sp.csr_matrix((dim * dim, dim * dim), dtype=complex)
        for ch in channels:
            j = _as_csr(ch.op) * math.sqrt(ch.rate)
            heff = heff - 0.5j * (j.conj().T @ j)
            # vec(J rho J^dag) = (J kron conj(J)) vec(rho) for row-major vec
            jump = jump + sp.kron(j, j.conj(), format="csr")
        self.heff = heff.tocsr()
        self.jump = jump if channels else None
        self.dim = dim

    def __call__(self, rho):
        x = self.heff @ rho
        out = -1j * (x - x.conj().T)
        if self.jump is not None:
            out += (self.jump @ rho.ravel()).reshape(self.dim, self.dim)
        return out

    def step(self, rho, dt):
        k1 = self(rho)
        k2 = self(rho + 0.5 * dt * k1)
        k3 = self(rho + 0.5 * dt * k2)
        k4 = self(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        return 0.5 * (rho + rho.conj().T)


class _BandGenerator:
    """Lindblad generator restricted to blocks ``(k, k - d)`` of a sector decomposition.

    Requires the Hamiltonian to be block diagonal in the sector labels and
    every jump operator to shift sectors by a fixed amount, so the sector
    difference ``d`` of each density-matrix block is conserved. Only bands
    with ``d >= 0`` are integrated; negative bands are their adjoints.
    """

    def __init__(self, h, channels, sectors: np.ndarray, rho0: np.ndarray):
        hc = _as_csr(h)
        self.sectors = np.asarray(sectors)
        values = np.unique(self.sectors)
        self.idx = {int(k): np.flatnonzero(self.sectors == k) for k in values}
        off = hc.tocoo()
        if np.any(self.sectors[off.row] != self.sectors[off.col]):
            raise ValueError("Hamiltonian couples different sectors")
        heff = {k: hc[i][:, i].toarray() for k, i in self.idx.items()}
        jumps = []
        for ch in channels:
            j = _as_csr(ch.op) * math.sqrt(ch.rate)
            coo = j.tocoo()
            shifts = np.unique(self.sectors[coo.row] - self.sectors[coo.col])
            if len(shifts) > 1:
                raise ValueError(f"channel {ch.name} does not shift sectors uniformly")
            shift = int(shifts[0]) if len(shifts) else 0
            jdj = (j.conj().T @ j).tocsr()
            for k, i in self.idx.items():
                heff[k] = heff[k] - 0.5j * jdj[i][:, i].toarray()
            blocks = {}
            for k, i in self.idx.items():
                if k + shift in self.idx:
                    blk = j[self.idx[k + shift]][:, i]
                    if blk.nnz:
                        blocks[k] = blk.toarray()
            jumps.append((shift, blocks))
        self.heff = heff
        self.heff_dag = {k: v.conj().T for k, v in heff.items()}

        self.bands: dict[int, dict[int, np.ndarray]] = {}
        keys = sorted(self.idx)
        for k in keys:
            for l in keys:
                d = k - l
                if d < 0:
                    continue
                blk = rho0[np.ix_(self.idx[k], self.idx[l])]
                if np.any(blk != 0):
                    self.bands.setdefault(d, {})
        for d in self.bands:
            self.bands[d] = {
                k: np.array(rho0[np.ix_(self.idx[k], self.idx[k - d])], dtype=complex)
                for k in keys
                if k - d in self.idx
            }
        # (target, source, left, right^dag) for every jump term of every band
        self.terms = {}
        for d, band in self.bands.items():
            terms = []
            for shift, blocks in jumps:
                for k in band:
                    src = k - shift
                    if src in band and src in blocks and (src - d) in blocks:
                        terms.append((k, src, blocks[src], blocks[src - d].conj().T))
            self.terms[d] = terms

    def rhs(self, d, band):
        out = {
            k: -1j * (self.heff[k] @ blk - blk @ self.heff_dag[k - d]) for k, blk in band.items()
        }
        for k, src, left, right in self.terms[d]:
            out[k] += left @ band[src] @ right
        return out

    def step(self, dt):
        for d, band in self.bands.items():
            k1 = self.rhs(d, band)
            k2 = self.rhs(d, {k: band[k] + 0.5 * dt * k1[k] for k in band})
            k3 = self.rhs(d, {k: band[k] + 0.5 * dt * k2[k] for k in band})
            k4 = self.rhs(d, {k: band[k] + dt * k3[k] for k in band})
            for k in band:
                band[k] = band[k] + (dt / 6.0) * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k])
                if d == 0:
                    band[k] = 0.5 * (band[k] + band[k].conj().T)

    def snapshot(self):
        return {d: {k: v.copy() for k, v in band.items()} for d, band in self.bands.items()}

    def restore(self, snap):
        self.bands = {d: {k: v.copy() for k, v in band.items()} for d, band in snap.items()}

    def dense(self) -> np.ndarray:
        dim = len(self.sectors)
        rho = np.zeros((dim, dim), dtype=complex)
        for d, band in self.bands.items():
            for k, blk in band.items():
                rho[np.ix_(self.idx[k], self.idx[k - d])] = blk
                if d:
                    rho[np.ix_(self.idx[k - d], self.idx[k])] = blk.conj().T
        return rho


def _check_frame(h, channels, frame: np.ndarray):
    f = np.asarray(frame, dtype=float)
    coo = _as_csr(h).tocoo()
    if np.any(np.abs(f[coo.row] - f[coo.col]) > 1e-12):
        raise ValueError("rotating frame does not commute with the Hamiltonian")
    for ch in channels:
        c = _as_csr(ch.op).tocoo()
        gaps = f[c.row] - f[c.col]
        if len(gaps) and np.ptp(gaps) > 1e-12:
            raise ValueError(f"channel {ch.name} is not covariant under the rotating frame")
    return f


def lindblad_propagate(
    h,
    rho0: np.ndarray,
    channels: Sequence[Channel],
    grid: EvolutionGrid,
    *,
    frame: np.ndarray | None = None,
    sectors: np.ndarray | None = None,
    max_step: float | None = None,
    observe: Callable[[np.ndarray], object] | None = None,
    monitor_positivity: bool = True,
) -> list:
    """Integrate ``d rho/d tau = -i[H, rho] + sum_k D[L_k] rho`` with fixed-step RK4.

    Parameters
    ----------
    frame
        Diagonal of an operator ``F`` commuting with ``H`` under which every
        channel is covariant. The equation is integrated with ``H - F`` and
        the exact phases ``exp(-i F tau)`` are restored at each sample; this
        removes the fast free oscillation without approximation.
    sectors
        Integer sector label per basis state (for example twice the
        excitation number). When given, only the nonzero sector bands of
        ``rho`` are integrated.
    max_step
        Upper bound on the RK4 step; default ``min(1e-3, tau_max / 1e4)``.
    observe
        Applied to each sampled density matrix; its results are returned
        instead of the matrices.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    validate_density_matrix(rho0)
    f = None
    if frame is not None:
        f = _check_frame(h, channels, frame)
        h = _as_csr(h) - sp.diags(f.astype(complex))
    observe = observe or (lambda r: r)
    dt, substeps = lindblad_step_size(grid, max_step)
    taus = grid.taus

    if sectors is not None:
        gen = _BandGenerator(h, channels, sectors, rho0)
        state = gen.snapshot()
        current = rho0
    else:
        gen = _DenseGenerator(h, channels)
        state = rho0.copy()
        current = rho0

    def lab(rho, tau):
        if f is None:
            return rho
        ph = np.exp(-1j * f * tau)
        return rho * np.outer(ph, ph.conj())

    results = [observe(lab(current, 0.0))]
    for i in range(1, len(taus)):
        n_sub, h_sub = substeps, dt
        for _ in range(MAX_REFINEMENTS + 1):
            if sectors is not None:
                gen.restore(state)
                for _ in range(n_sub):
                    gen.step(h_sub)
                rho = gen.dense()
            else:
                rho = state
                for _ in range(n_sub):
                    rho = gen.step(rho, h_sub)
            if not monitor_positivity or np.linalg.eigvalsh(rho).min() >= -POSITIVITY_MONITOR_TOL:
                break
            n_sub, h_sub = 2 * n_sub, h_sub / 2
        else:
            raise NumericalError(
                f"positivity lost near tau = {taus[i]:.4g} even with step {h_sub:.3g}; the problem is too stiff"
            )
        state = gen.snapshot() if sectors is not None else rho
        results.append(observe(lab(rho, taus[i])))
    return results
