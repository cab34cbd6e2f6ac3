from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hilbert import HilbertSpec

Label = tuple[str, str, int, int]


@dataclass(frozen=True)
class CoefficientSet:
    """Named amplitudes on product kets ``|q1 q2 n m>`` at one time.

    Labels may carry a negative Fock index when the amplitude is identically
    zero (for example a lowering from ``n = 0``); such entries are skipped
    when embedding.
    """

    labels: tuple[Label, ...]
    values: np.ndarray
    names: tuple[str, ...] = ()

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __getitem__(self, name: str) -> complex:
        return complex(self.values[self.names.index(name)])

    def as_dict(self) -> dict[str, complex]:
        return {n: complex(v) for n, v in zip(self.names, self.values)}

    def to_vector(self, hs: HilbertSpec) -> np.ndarray:
        psi = np.zeros(hs.total, dtype=complex)
        for (q1, q2, n, m), v in zip(self.labels, self.values):
            if n < 0 or m < 0 or n >= hs.n_a or m >= hs.n_b:
                if v != 0:
                    raise IndexError(f"nonzero amplitude on |{q1} {q2} {n} {m}> outside truncation")
                continue
            psi[hs.index(q1, q2, n, m)] += v
        return psi
