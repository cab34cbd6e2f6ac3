"""Oracle-versus-numerics matrix over every closed-form evaluator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ..analytic import (
    coherent_state_vector,
    detuned_concurrence,
    djc_ground_coefficients,
    djc_ground_concurrence,
    fock_coefficients,
    fock_concurrence,
    psi1_coupled_coefficients,
    psi1_coupled_concurrence,
    psi2_bs_coefficients,
    psi2_dd_coefficients,
    psi2_ising,
)
from ..entanglement import concurrence, oscillator_qubit_block
from ..evolve import EvolutionGrid, Propagator, reduced_from_states
from ..hilbert import HilbertSpec
from ..model import SystemParams, h_total
from ..states import InitialStateSpec, OscillatorSpec, QubitPairSpec, compose_initial

TOL = 1e-8
GRID = EvolutionGrid(2 * math.pi, 400)


@dataclass(frozen=True)
class CaseResult:
    name: str
    residual: float
    tol: float
    reference: bool = False

    @property
    def passed(self) -> bool:
        return self.residual < self.tol


@dataclass
class ValidationReport:
    """Per-case residuals.

    Reference cases evaluate typeset expressions that are known to disagree
    with the propagator; they are reported but only count towards the
    verdict with ``strict=True``.
    """

    cases: list[CaseResult] = field(default_factory=list)

    def ok(self, strict: bool = False) -> bool:
        return all(c.passed for c in self.cases if strict or not c.reference)

    def lines(self) -> list[str]:
        out = []
        for c in self.cases:
            status = "PASS" if c.passed else ("FAIL (reference)" if c.reference else "FAIL")
            out.append(f"{status:16s} {c.name:60s} residual={c.residual:.3e} tol={c.tol:.0e}")
        return out


def _evolve(system: SystemParams, family: str, phi: float, hs: HilbertSpec, osc=None, grid=GRID):
    osc = osc or (OscillatorSpec.fock(0), OscillatorSpec.fock(0))
    psi0 = compose_initial(InitialStateSpec(QubitPairSpec(family, phi), *osc), hs).vector
    return Propagator(h_total(system, hs, sparse=True)).propagate(psi0, grid.taus)


def _qubit_c(states, hs):
    return np.array([concurrence(r) for r in reduced_from_states(states, hs, (0, 1))])


def _osc_c(states, hs):
    return np.array([concurrence(oscillator_qubit_block(r, hs.n_a, hs.n_b)) for r in reduced_from_states(states, hs, (2, 3))])


def _amplitude_residual(sets, states, hs):
    worst = 0.0
    for cs, psi in zip(sets, states):
        idx = [hs.index(*lab) for lab in cs.labels if lab[2] >= 0 and lab[3] >= 0]
        vals = np.array([v for lab, v in zip(cs.labels, cs.values) if lab[2] >= 0 and lab[3] >= 0])
        worst = max(worst, float(np.max(np.abs(vals - psi[idx]))))
    return worst


def _phis(draws: int, rng) -> list[float]:
    return [math.pi / 4, math.pi / 12] + list(rng.uniform(0.05, math.pi / 2 - 0.05, draws))


def validate_all(draws: int = 1, seed: int = 0) -> ValidationReport:
    """Compare each closed form with exact propagation on a 400-point grid over ``[0, 2 pi]``.

    ``draws`` random mixing angles are added to the fixed ``pi/4`` and
    ``pi/12`` cases (seeded, so the report is reproducible).
    """
    rng = np.random.default_rng(seed)
    phis = _phis(draws, rng)
    taus = GRID.taus
    rep = ValidationReport()
    add = rep.cases.append
    hs2 = HilbertSpec(2, 2)
    hs3 = HilbertSpec(3, 3)

    for fam, phi in product(("psi1", "psi2"), phis):
        st = _evolve(SystemParams(), fam, phi, hs2)
        cq, co = djc_ground_concurrence(fam, phi, taus)
        tag = f"{fam} phi={phi:.4f}"
        add(CaseResult(f"djc_ground_concurrence C_q {tag}", float(np.max(np.abs(_qubit_c(st, hs2) - cq))), TOL))
        add(CaseResult(f"djc_ground_concurrence C_o {tag}", float(np.max(np.abs(_osc_c(st, hs2) - co))), TOL))
        sets = [djc_ground_coefficients(fam, phi, t) for t in taus]
        add(CaseResult(f"djc_ground_coefficients {tag}", _amplitude_residual(sets, st, hs2), TOL))

    fields = {"bs": "r_b", "dd": "r_d", "ising": "r_i"}
    for cpl, r, phi in product(fields, (0.2, 0.5, 1.0), phis):
        st = _evolve(SystemParams(**{fields[cpl]: r}), "psi1", phi, hs2)
        cq, co = psi1_coupled_concurrence(cpl, r, phi, taus)
        tag = f"{cpl} r={r:g} phi={phi:.4f}"
        add(CaseResult(f"psi1_coupled_concurrence C_q {tag}", float(np.max(np.abs(_qubit_c(st, hs2) - cq))), TOL))
        add(CaseResult(f"psi1_coupled_concurrence C_o {tag}", float(np.max(np.abs(_osc_c(st, hs2) - co))), TOL))
        sets = [psi1_coupled_coefficients(cpl, r, phi, t) for t in taus]
        add(CaseResult(f"psi1_coupled_coefficients {tag}", _amplitude_residual(sets, st, hs2), TOL))

    for r, phi in product((0.5, 1.0), phis):
        st = _evolve(SystemParams(r_i=r), "psi2", phi, hs2)
        sets, cq, co = psi2_ising(r, phi, taus)
        tag = f"r={r:g} phi={phi:.4f}"
        add(CaseResult(f"psi2_ising C_q {tag}", float(np.max(np.abs(_qubit_c(st, hs2) - cq))), TOL))
        add(CaseResult(f"psi2_ising C_o {tag}", float(np.max(np.abs(_osc_c(st, hs2) - co))), TOL))
        add(CaseResult(f"psi2_ising coefficients {tag}", _amplitude_residual(sets, st, hs2), TOL))

    for (name, fn, fld), r, phi in product(
        (("psi2_bs_coefficients", psi2_bs_coefficients, "r_b"), ("psi2_dd_coefficients", psi2_dd_coefficients, "r_d")),
        (0.5, 1.0),
        phis,
    ):
        st = _evolve(SystemParams(**{fld: r}), "psi2", phi, hs3)
        for variant in ("corrected", "printed"):
            sets = [fn(r, phi, t, variant=variant) for t in taus]
            add(
                CaseResult(
                    f"{name}[{variant}] r={r:g} phi={phi:.4f}",
                    _amplitude_residual(sets, st, hs3),
                    TOL,
                    reference=variant == "printed",
                )
            )

    for fam, n, m in product(("psi1", "psi2"), range(4), range(4)):
        hs = HilbertSpec(n + 2, m + 2)
        for phi in phis[:1] + phis[2:]:
            st = _evolve(SystemParams(), fam, phi, hs, osc=(OscillatorSpec.fock(n), OscillatorSpec.fock(m)))
            cq = _qubit_c(st, hs)
            tag = f"{fam} n={n} m={m} phi={phi:.4f}"
            for variant in ("corrected", "printed"):
                ref = fock_concurrence(fam, phi, n, m, taus, variant=variant)
                add(
                    CaseResult(
                        f"fock_concurrence[{variant}] {tag}",
                        float(np.max(np.abs(cq - ref))),
                        TOL,
                        reference=variant == "printed",
                    )
                )
            sets = [fock_coefficients(fam, phi, n, m, t) for t in taus]
            add(CaseResult(f"fock_coefficients {tag}", _amplitude_residual(sets, st, hs), TOL))

    for fam, delta, phi in product(("psi1", "psi2"), (0.0, 1.0, 2.0), phis):
        st = _evolve(SystemParams(delta_tilde=delta), fam, phi, hs2)
        ref = detuned_concurrence(fam, phi, delta, taus)
        add(
            CaseResult(
                f"detuned_concurrence {fam} delta={delta:g} phi={phi:.4f}",
                float(np.max(np.abs(_qubit_c(st, hs2) - ref))),
                TOL,
            )
        )

    sample = EvolutionGrid(2 * math.pi, 9)
    for fam, a2 in product(("psi1", "psi2"), (0.1, 0.5, 1.0)):
        alpha = math.sqrt(a2)
        osc = OscillatorSpec.coherent(alpha)
        n = osc.truncation()
        hs = HilbertSpec(n, n)
        st = _evolve(SystemParams(), fam, math.pi / 4, hs, osc=(osc, osc), grid=sample)
        worst = max(
            1.0 - abs(np.vdot(coherent_state_vector(fam, math.pi / 4, alpha, t, n), psi)) for t, psi in zip(sample.taus, st)
        )
        add(CaseResult(f"coherent_state_vector overlap {fam} |alpha|^2={a2:g}", float(worst), TOL))
    return rep
