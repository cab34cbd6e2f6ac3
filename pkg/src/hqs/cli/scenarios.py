"""Parameter grids that regenerate the data behind each published figure.

Each scenario expands to a list of independent ``RunConfig`` objects. Where a
figure shows a sweep along a parameter other than time (the detuning sweeps)
the sweep is expressed as one time series per parameter value.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from itertools import product
from pathlib import Path

from ..errors import ConfigError
from ..evolve import EvolutionGrid, LindbladSpec
from ..model import SystemParams
from ..states import InitialStateSpec, OscillatorSpec, QubitPairSpec
from .config import OutputSpec, RunConfig
from .runner import ResultTable, run

PI4, PI12 = math.pi / 4, math.pi / 12
FAMILIES = ("psi1", "psi2")
COUPLING_FIELDS = {"bs": "r_b", "dd": "r_d", "ising": "r_i"}


def _phi_tag(phi: float) -> str:
    for num, den in ((1, 4), (1, 12), (1, 6), (1, 3)):
        if abs(phi - num * math.pi / den) < 1e-12:
            return f"pi{den}"
    return f"{phi:.4f}"


def _cfg(label, family, phi, *, osc=None, system=None, tau_max=10.0, n=401, lindblad=None, validation=False):
    osc = osc or OscillatorSpec.fock(0)
    return RunConfig(
        system=system or SystemParams(),
        initial=InitialStateSpec(QubitPairSpec(family, phi), osc, osc),
        grid=EvolutionGrid(tau_max, n),
        lindblad=lindblad,
        validation=validation,
        label=label,
    )


def _coupled_ground(family: str) -> list[RunConfig]:
    out = []
    for phi, cpl, r in product((PI4, PI12), COUPLING_FIELDS, (0.0, 0.2, 0.5, 1.0)):
        sys_ = SystemParams(**{COUPLING_FIELDS[cpl]: r})
        out.append(_cfg(f"{family}_{_phi_tag(phi)}_{cpl}_r{r:g}", family, phi, system=sys_, tau_max=4 * math.pi, validation=True))
    return out


def _oscillator_states(values, kinds=("coherent", "thermal")):
    for kind, v in product(kinds, values):
        if kind == "coherent":
            yield f"alpha2_{v:g}", OscillatorSpec.coherent(math.sqrt(v))
        else:
            yield f"nbar_{v:g}", OscillatorSpec.thermal(v)


def _fig3():
    out = []
    for fam, (tag, osc) in product(FAMILIES, _oscillator_states((0.1, 0.5, 1.0))):
        out.append(_cfg(f"{fam}_{tag}", fam, PI12, osc=osc, n=201))
    for fam in FAMILIES:
        out.append(_cfg(f"{fam}_ground", fam, PI12, n=201))
    return out


def _coupled_mixed(kind: str):
    out = []
    for fam, (tag, osc), cpl, r in product(
        FAMILIES, _oscillator_states((0.1, 0.5, 1.0), kinds=(kind,)), COUPLING_FIELDS, (0.2, 0.8)
    ):
        out.append(
            _cfg(f"{fam}_{tag}_{cpl}_r{r:g}", fam, PI4, osc=osc, system=SystemParams(**{COUPLING_FIELDS[cpl]: r}), n=101)
        )
    return out


def _detuning(values, couplings=(0.0,), phis=(PI12,)):
    out = []
    for fam, phi, d, rb in product(FAMILIES, phis, values, couplings):
        label = f"{fam}_{_phi_tag(phi)}_delta{d:g}" + (f"_rb{rb:g}" if len(couplings) > 1 else "")
        out.append(
            _cfg(label, fam, phi, system=SystemParams(delta_tilde=d, r_b=rb), tau_max=4 * math.pi, validation=rb == 0)
        )
    return out


def _fig_f1():
    out = []
    states = [("ground", OscillatorSpec.fock(0))] + list(_oscillator_states((0.1, 0.5, 1.0)))
    for fam, (tag, osc) in product(FAMILIES, states):
        out.append(_cfg(f"{fam}_{tag}_long", fam, PI12, osc=osc, tau_max=50.0, n=501))
    return out


def _rate_sets(lam):
    return (("diss", LindbladSpec(lambda_r=lam)), ("deph", LindbladSpec(lambda_d=lam)), ("both", LindbladSpec(lam, lam)))


def _fig_h1():
    out = []
    for fam, phi, lam in product(FAMILIES, (PI4, PI12), (0.05, 0.1)):
        for tag, spec in _rate_sets(lam):
            out.append(_cfg(f"{fam}_{_phi_tag(phi)}_{tag}_l{lam:g}", fam, phi, lindblad=spec, n=201))
    return out


def _fig_h2():
    out = []
    for fam, phi, lam, nth in product(FAMILIES, (PI4, PI12), (0.05, 0.1), (0.0, 0.1, 0.2, 0.5)):
        spec = LindbladSpec(lambda_r=lam, nbar_th=nth)
        out.append(_cfg(f"{fam}_{_phi_tag(phi)}_l{lam:g}_nth{nth:g}", fam, phi, lindblad=spec, n=201))
    return out


_MODELS = {
    "djc": SystemParams(),
    "bs": SystemParams(r_b=1.0),
    "dd": SystemParams(r_d=1.0),
    "ising": SystemParams(r_i=1.0),
}


def _fig_h3():
    out = []
    for model, sys_ in _MODELS.items():
        for lam in (0.05, 0.1):
            for tag, spec in _rate_sets(lam):
                out.append(_cfg(f"psi1_{model}_{tag}_l{lam:g}", "psi1", PI4, system=sys_, lindblad=spec, n=201))
        out.append(_cfg(f"psi1_{model}_closed", "psi1", PI4, system=sys_, n=201))
    return out


def _fig_h4():
    out = []
    for model, sys_ in _MODELS.items():
        for nth in (0.0, 0.1, 0.2, 0.5):
            spec = LindbladSpec(0.05, 0.05, nth)
            out.append(_cfg(f"psi2_{model}_nth{nth:g}", "psi2", PI4, system=sys_, lindblad=spec, n=201))
        out.append(_cfg(f"psi2_{model}_closed", "psi2", PI4, system=sys_, n=201))
    return out


SCENARIOS = {
    "fig2": lambda: _coupled_ground("psi1"),
    "fig3": _fig3,
    "fig4": lambda: _coupled_mixed("coherent"),
    "fig5": lambda: _coupled_mixed("thermal"),
    "fig6": lambda: _coupled_ground("psi2"),
    "figE1": lambda: _detuning((0, 1, 2, 5, 10, 20, 50), phis=(PI4, PI12)),
    "figE2": lambda: _detuning((0, 1, 2, 5)),
    "figE3": lambda: _detuning((0, 1, 2, 5), couplings=(0.0, 0.2)),
    "figF1": _fig_f1,
    "figH1": _fig_h1,
    "figH2": _fig_h2,
    "figH3": _fig_h3,
    "figH4": _fig_h4,
}


def scenario(name: str) -> list[RunConfig]:
    """Run configurations reproducing the named figure's data."""
    try:
        build = SCENARIOS[name]
    except KeyError:
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
    return build()


def worker_count() -> int:
    raw = os.environ.get("HQS_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"HQS_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"HQS_THREADS must be a positive integer, got {raw!r}")
    return n


def run_scenario(name: str, out_dir: str | Path) -> list[tuple[RunConfig, ResultTable, Path]]:
    """Run every configuration of a scenario on a thread pool.

    Workers only compute; files are written by the calling thread in
    configuration order.
    """
    out_dir = Path(out_dir)
    configs = [
        replace(c, output=OutputSpec(path=str(out_dir / f"{name}_{i:03d}_{c.label}.csv")))
        for i, c in enumerate(scenario(name))
    ]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        tables = list(pool.map(lambda c: run(c, write=False), configs))
    written = []
    for cfg, table in zip(configs, tables):
        written.append((cfg, table, table.write(cfg.output.path, gnuplot=True)))
    return written
