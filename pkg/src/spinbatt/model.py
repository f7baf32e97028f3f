"""Central-spin battery model and its excitation-sector Hamiltonian.

The battery is N_b spin-1/2 cells and the charger N_c spin-1/2 units,
coupled by homogeneous flip-flop (XX+YY) interactions of strength A at
resonance (common level splitting omega).  With the battery fully
discharged and the charger in a Dicke state carrying m excitations,
conservation of the total excitation number confines the dynamics to the
ladder of product Dicke states |j>_b |m-j>_c, j = 0..d, with
d = min(N_b, m).  In that basis the Hamiltonian is real symmetric
tridiagonal with zero diagonal (the free part is a constant on the sector
and is dropped) and off-diagonal elements

    u_j = A * sqrt( j * (N_b - j + 1) * (N_c - m + j) * (m - j + 1) ),

for j = 1..d.  All four factors are integers >= 1 within the valid range,
so every u_j is strictly positive and the matrix is a Jacobi matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Physical configuration of one battery instance.

    n_b, n_c: number of battery cells / charger units (>= 1).
    m: initially excited charger units, 1 <= m <= n_c.
    coupling: flip-flop strength A > 0.
    omega: level splitting, enters observables only (the sector
        Hamiltonian does not depend on it).
    """

    n_b: int
    n_c: int
    m: int
    coupling: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("n_b", "n_c", "m"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)):
                raise ValueError(f"{name} must be an integer, got {value!r}")
        if self.n_b < 1:
            raise ValueError(f"n_b must be >= 1, got {self.n_b}")
        if self.n_c < 1:
            raise ValueError(f"n_c must be >= 1, got {self.n_c}")
        if not 1 <= self.m <= self.n_c:
            raise ValueError(f"m must satisfy 1 <= m <= n_c={self.n_c}, got {self.m}")
        if not (math.isfinite(self.coupling) and self.coupling > 0):
            raise ValueError(f"coupling must be a positive real, got {self.coupling}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be a positive real, got {self.omega}")

    @property
    def d(self) -> int:
        """Ladder depth min(n_b, m); the evolved sector has d+1 states."""
        return min(self.n_b, self.m)


def coupling_element(params: ModelParams, j: int) -> float:
    """Off-diagonal element u_j of the sector Hamiltonian, 1 <= j <= d.

    The radicand is formed as a product of four doubles (well below
    overflow for desk-scale N) and the coupling A multiplies last, so
    rescaling A is bit-exact.
    """
    d = params.d
    if not 1 <= j <= d:
        raise ValueError(f"j={j} outside the valid off-diagonal range 1..{d}")
    radicand = (
        float(j)
        * float(params.n_b - j + 1)
        * float(params.n_c - params.m + j)
        * float(params.m - j + 1)
    )
    return params.coupling * math.sqrt(radicand)


@dataclass(frozen=True, eq=False)
class TridiagonalHamiltonian:
    """Zero-diagonal symmetric tridiagonal sector Hamiltonian.

    dim = d + 1; offdiag holds u_1..u_d (all strictly positive).
    """

    dim: int
    offdiag: np.ndarray
    params: ModelParams

    def dense(self) -> np.ndarray:
        """Dense (d+1) x (d+1) matrix, mainly for small-scale checks."""
        h = np.zeros((self.dim, self.dim))
        idx = np.arange(self.dim - 1)
        h[idx, idx + 1] = self.offdiag
        h[idx + 1, idx] = self.offdiag
        return h


def build_hamiltonian(params: ModelParams) -> TridiagonalHamiltonian:
    """Construct the sector Hamiltonian for the given parameters."""
    d = params.d
    offdiag = np.array([coupling_element(params, j) for j in range(1, d + 1)])
    return TridiagonalHamiltonian(dim=d + 1, offdiag=offdiag, params=params)
