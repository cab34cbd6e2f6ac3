"""Execute a run configuration and write its result table."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .. import __version__
from ..analytic import (
    coherent_state_vector,
    detuned_concurrence,
    djc_ground_concurrence,
    fock_concurrence,
    psi1_coupled_concurrence,
    psi2_bs_coefficients,
    psi2_dd_coefficients,
    psi2_ising,
)
from ..entanglement import concurrence, log_negativity, oscillator_qubit_block
from ..errors import NumericalError, StructureError
from ..evolve import (
    EvolutionGrid,
    Propagator,
    evolve_branches,
    lindblad_operators,
    lindblad_propagate,
    lindblad_step_size,
    reduced_from_states,
)
from ..hilbert import HilbertSpec, partial_trace
from ..model import excitation_diagonal, h_total
from ..states import compose_initial
from .config import RunConfig

# extra oscillator levels when a warm bath can pump excitations in
BATH_HEADROOM = 3
# above this dimension the Lindblad run integrates sector bands only
BAND_PATH_DIM = 64
VALIDATION_TOL = 1e-6
_FLOAT = "{:.16e}"


@dataclass
class ResultTable:
    """Per-sample entanglement series plus the metadata needed to reproduce them."""

    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        return len(self.columns["tau"])

    @property
    def max_residual(self) -> float | None:
        if "residual" not in self.columns:
            return None
        return float(np.max(self.columns["residual"]))

    def csv_text(self) -> str:
        names = list(self.columns)
        lines = [",".join(names)]
        for i in range(self.n_rows):
            cells = []
            for name in names:
                v = self.columns[name][i]
                cells.append(v if isinstance(v, str) else _FLOAT.format(float(v)))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path, gnuplot: bool = False) -> Path:
        """Write the CSV, a JSON metadata sidecar and optionally a gnuplot script."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(self.csv_text())
        meta = path.with_suffix(".meta.json")
        meta.write_text(json.dumps(self.metadata, indent=2, sort_keys=True) + "\n")
        if gnuplot:
            path.with_suffix(".gp").write_text(_gnuplot_script(path.name, list(self.columns)))
        return path


def _gnuplot_script(csv_name: str, names: list[str]) -> str:
    plots = [f"'{csv_name}' using 1:{names.index('C_qq') + 1} with lines title 'C_qq'"]
    plots.append(f"'' using 1:{names.index('E_oo') + 1} with lines dashtype 2 title 'E_oo'")
    if "C_qq_analytic" in names:
        plots.append(f"'' using 1:{names.index('C_qq_analytic') + 1} with points pointtype 7 pointsize 0.3 title 'analytic'")
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set xlabel 'tau'\n"
        "plot " + ", \\\n     ".join(plots) + "\n"
    )


def hilbert_for(config: RunConfig) -> HilbertSpec:
    if config.truncation:
        return HilbertSpec(*config.truncation)
    extra = BATH_HEADROOM if config.lindblad is not None and config.lindblad.nbar_th > 0 else 0
    return config.initial.hilbert(extra_levels=extra)


def resolve_osc_measure(config: RunConfig) -> str:
    """Pick the oscillator measure before evolving.

    ``"auto"`` selects concurrence only when the dynamics provably stays in
    the ``{0, 1} x {0, 1}`` oscillator block: both oscillators start in the
    vacuum, no warm bath, and either one excitation in total or two with
    neither exchange coupling (exchange then reaches ``|2, 0>``).
    """
    if config.osc_measure != "auto":
        return config.osc_measure
    ini, s = config.initial, config.system
    vacuum = all(o.kind == "fock" and o.n == 0 for o in (ini.osc_a, ini.osc_b))
    cold = config.lindblad is None or config.lindblad.nbar_th == 0
    confined = ini.qubits.family == "psi1" or (s.r_b == 0 and s.r_d == 0)
    return "concurrence" if vacuum and cold and confined else "log_negativity"


def _only(s, name: str) -> bool:
    others = {"r_b", "r_d", "r_i"} - {name}
    return all(getattr(s, o) == 0 for o in others)


def _vector_concurrence(vectors: list[np.ndarray], hs: HilbertSpec) -> np.ndarray:
    red = reduced_from_states(np.array(vectors), hs, (0, 1))
    return np.array([concurrence(r) for r in red])


def analytic_oracle(config: RunConfig) -> tuple[str, Callable[[np.ndarray], np.ndarray]] | None:
    """Closed-form qubit concurrence matching this configuration, if one exists."""
    if config.lindblad is not None and not config.lindblad.is_closed:
        return None
    s, ini = config.system, config.initial
    fam, phi = ini.qubits.family, ini.qubits.phi
    a, b = ini.osc_a, ini.osc_b
    if s.g_ratio_2 != 1:
        return None
    ground = a.kind == b.kind == "fock" and a.n == b.n == 0
    uncoupled = s.r_b == s.r_d == s.r_i == 0

    if s.delta_tilde != 0:
        if ground and uncoupled:
            return "detuned_concurrence", lambda t: detuned_concurrence(fam, phi, s.delta_tilde, t)
        return None
    if ground and uncoupled:
        return "djc_ground_concurrence", lambda t: djc_ground_concurrence(fam, phi, t)[0]
    if ground and fam == "psi1":
        for name, key in (("r_b", "bs"), ("r_d", "dd"), ("r_i", "ising")):
            if getattr(s, name) > 0 and _only(s, name):
                r = getattr(s, name)
                return f"psi1_coupled_concurrence[{key}]", lambda t: psi1_coupled_concurrence(key, r, phi, t)[0]
        return None
    if ground and fam == "psi2":
        if s.r_i > 0 and _only(s, "r_i"):
            return "psi2_ising", lambda t: psi2_ising(s.r_i, phi, t, s.omega_tilde)[1]
        hs = HilbertSpec(3, 3)
        for name, fn in (("r_b", psi2_bs_coefficients), ("r_d", psi2_dd_coefficients)):
            r = getattr(s, name)
            if r > 0 and _only(s, name):

                def oracle(t, fn=fn, r=r):
                    vecs = [fn(r, phi, x, s.omega_tilde, variant="corrected").to_vector(hs) for x in t]
                    return _vector_concurrence(vecs, hs)

                return f"{fn.__name__}[corrected]", oracle
        return None
    if not uncoupled:
        return None
    if a.kind == b.kind == "fock":
        return "fock_concurrence[corrected]", lambda t: fock_concurrence(fam, phi, a.n, b.n, t, variant="corrected")
    if a.kind == b.kind == "coherent" and a.alpha == b.alpha:
        n = hilbert_for(config).n_a
        hs = HilbertSpec(n, n)

        def oracle(t):
            return _vector_concurrence([coherent_state_vector(fam, phi, a.alpha, x, n, s.omega_tilde) for x in t], hs)

        return "coherent_state_vector", oracle
    return None


def _osc_value(rho_osc, hs: HilbertSpec, kind: str) -> float:
    if kind == "concurrence":
        try:
            return concurrence(oscillator_qubit_block(rho_osc, hs.n_a, hs.n_b))
        except StructureError as exc:
            raise NumericalError(f"oscillator concurrence requested but {exc}") from exc
    return log_negativity(rho_osc, (hs.n_a, hs.n_b))


def run(config: RunConfig, write: bool = True) -> ResultTable:
    """Evolve one configuration and collect its entanglement series.

    Closed systems propagate each pure branch exactly; open systems integrate
    the master equation in the frame rotating with the excitation number.
    """
    hs = hilbert_for(config)
    kind = resolve_osc_measure(config)
    grid: EvolutionGrid = config.grid
    h = h_total(config.system, hs, sparse=True)
    branches = compose_initial(config.initial, hs)
    taus = grid.taus
    meta: dict = {
        "config": config.to_dict(),
        "truncation": [hs.n_a, hs.n_b],
        "branches": len(branches),
        "package_version": __version__,
    }

    if config.lindblad is None or config.lindblad.is_closed:
        prop = Propagator(h)

        def observe(key, rho):
            return concurrence(rho) if key == (0, 1) else _osc_value(rho, hs, kind)

        series = evolve_branches(h, branches, grid, keeps=[(0, 1), (2, 3)], propagator=prop, observe=observe)
        cqq, eoo = np.array(series[(0, 1)]), np.array(series[(2, 3)])
        meta["integrator"] = {"method": "eigendecomposition", "blocks": len(prop.blocks)}
    else:
        channels = lindblad_operators(config.lindblad, hs, sparse=True)
        exc = excitation_diagonal(hs)
        use_bands = hs.total > BAND_PATH_DIM
        dt, substeps = lindblad_step_size(grid)

        def observe(rho):
            return concurrence(partial_trace(rho, (0, 1), hs)), _osc_value(partial_trace(rho, (2, 3), hs), hs, kind)

        pairs = lindblad_propagate(
            h,
            branches.density_matrix(),
            channels,
            grid,
            frame=exc * config.system.omega_tilde,
            sectors=np.rint(2 * exc).astype(int) if use_bands else None,
            observe=observe,
        )
        cqq = np.array([p[0] for p in pairs])
        eoo = np.array([p[1] for p in pairs])
        meta["integrator"] = {
            "method": "rk4",
            "step": dt,
            "substeps_per_sample": substeps,
            "sector_bands": use_bands,
            "channels": [c.name for c in channels],
        }

    columns: dict = {"tau": taus, "C_qq": cqq, "E_oo": eoo, "measure_kind": np.array([kind] * len(taus), dtype=object)}
    if config.validation:
        oracle = analytic_oracle(config)
        if oracle is None:
            meta["oracle"] = None
        else:
            name, fn = oracle
            ref = np.asarray(fn(taus), dtype=float)
            columns["C_qq_analytic"] = ref
            columns["residual"] = np.abs(cqq - ref)
            meta["oracle"] = name
            meta["max_residual"] = float(np.max(columns["residual"]))
            meta["validation_tolerance"] = VALIDATION_TOL
    table = ResultTable(columns, meta)
    if write and config.output.path:
        table.write(config.output.path, gnuplot=config.output.gnuplot)
    return table
