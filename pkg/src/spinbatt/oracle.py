"""Brute-force verifier on the full 2^(n_b + n_c) spin Hilbert space.

Builds the flip-flop Hamiltonian A * (S+ J- + S- J+) from elementary
single-site raising/lowering operators in the computational basis (battery
spins on the low bits, charger spins above), prepares the exact product of
battery vacuum and charger Dicke state by enumerating bit patterns, and
evolves by dense eigendecomposition.  Deliberately shares nothing with the
sector pipeline: different basis, different solver, different bookkeeping.
Only small systems are in reach; this is a correctness oracle, not a
simulator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Trajectory, delta_e_on_grid
from .eigensolve import decompose
from .model import ModelParams, build_hamiltonian

MAX_TOTAL_SPINS = 14  # 2^14 x 2^14 dense is the memory ceiling

REDUCTION_TOL = 1e-8  # allowed |dE_sector - dE_full| per unit omega


@dataclass(frozen=True, eq=False)
class FullSpaceHamiltonian:
    """Dense real symmetric flip-flop Hamiltonian in the computational basis."""

    params: ModelParams
    n_total: int
    matrix: np.ndarray


def build_full(params: ModelParams) -> FullSpaceHamiltonian:
    """Assemble A * (S+ J- + S- J+) over all battery/charger site pairs.

    The free part is omitted: it is proportional to the conserved total
    excitation number plus a constant, so it only contributes a global
    phase on the dynamical sector.  The matrix does not depend on m.
    """
    n_total = params.n_b + params.n_c
    if n_total > MAX_TOTAL_SPINS:
        raise ValueError(
            f"full-space oracle limited to {MAX_TOTAL_SPINS} spins, got {n_total}"
        )
    dim = 1 << n_total
    matrix = np.zeros((dim, dim))
    states = np.arange(dim)
    for i in range(params.n_b):
        for c in range(params.n_c):
            cbit = params.n_b + c
            # sigma_i^+ sigma_cbit^-  : battery site raised, charger site lowered
            movable = ((states >> i) & 1 == 0) & ((states >> cbit) & 1 == 1)
            src = states[movable]
            dst = src + (1 << i) - (1 << cbit)
            matrix[dst, src] += params.coupling
            matrix[src, dst] += params.coupling
    return FullSpaceHamiltonian(params=params, n_total=n_total, matrix=matrix)


def initial_state(params: ModelParams) -> np.ndarray:
    """Battery vacuum times the m-excitation charger Dicke state.

    The Dicke state is the equal-weight superposition of every charger
    bit pattern with popcount m, built by explicit enumeration.
    """
    dim = 1 << (params.n_b + params.n_c)
    vec = np.zeros(dim)
    patterns = list(itertools.combinations(range(params.n_c), params.m))
    amp = 1.0 / math.sqrt(len(patterns))
    for bits in patterns:
        charger = 0
        for b in bits:
            charger |= 1 << b
        vec[charger << params.n_b] = amp
    return vec


def battery_excitations(n_b: int, n_total: int) -> np.ndarray:
    """Number of raised battery spins for every computational basis state."""
    mask = (1 << n_b) - 1
    return np.array([bin(s & mask).count("1") for s in range(1 << n_total)], dtype=float)


def charger_excitations(n_b: int, n_c: int) -> np.ndarray:
    """Number of raised charger spins for every computational basis state."""
    n_total = n_b + n_c
    return np.array(
        [bin(s >> n_b).count("1") for s in range(1 << n_total)], dtype=float
    )


def _delta_e_curve(
    eigenvalues: np.ndarray,
    eigenvectors: np.ndarray,
    psi0: np.ndarray,
    excitations: np.ndarray,
    omega: float,
    times: np.ndarray,
) -> np.ndarray:
    """omega * <battery excitations>(t) from a precomputed decomposition."""
    overlaps = eigenvectors.T @ psi0
    angles = eigenvalues[:, None] * np.asarray(times)[None, :]
    re = eigenvectors @ (overlaps[:, None] * np.cos(angles))
    im = eigenvectors @ (overlaps[:, None] * np.sin(angles))
    populations = re * re + im * im
    return omega * (excitations @ populations)


def oracle_trajectory(params: ModelParams, times) -> Trajectory:
    """Exact full-space dE(t) and eta(t) at the requested times."""
    times = np.asarray(times, dtype=float)
    full = build_full(params)
    eigenvalues, eigenvectors = np.linalg.eigh(full.matrix)
    psi0 = initial_state(params)
    excitations = battery_excitations(params.n_b, full.n_total)
    delta_e = _delta_e_curve(
        eigenvalues, eigenvectors, psi0, excitations, params.omega, times
    )
    eta = delta_e / (params.omega * params.d)
    return Trajectory(params=params, times=times, delta_e=delta_e, eta=eta)


@dataclass(frozen=True)
class VerifyCase:
    """Worst-offending parameter triple of a verification run."""

    n_b: int
    n_c: int
    m: int
    deviation: float


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of sweeping the sector-vs-full-space comparison."""

    max_spins: int
    n_times: int
    t_max: float
    tolerance: float
    cases: int
    worst: VerifyCase
    passed: bool


def verify_reduction(
    max_spins: int,
    n_times: int = 100,
    t_max: float = 10.0,
    tolerance: float = REDUCTION_TOL,
    coupling: float = 1.0,
    omega: float = 1.0,
) -> VerifyReport:
    """Compare sector and full-space dE(t) over every (n_b, n_c, m) triple.

    Covers all n_b + n_c <= max_spins, 1 <= m <= n_c.  The full-space
    decomposition is reused across m for each (n_b, n_c) pair since the
    Hamiltonian does not depend on m.
    """
    if not 2 <= max_spins <= MAX_TOTAL_SPINS:
        raise ValueError(
            f"max_spins must lie in 2..{MAX_TOTAL_SPINS}, got {max_spins}"
        )
    times = np.linspace(0.0, t_max, n_times)
    worst = VerifyCase(0, 0, 0, -1.0)
    count = 0
    for total in range(2, max_spins + 1):
        for n_b in range(1, total):
            n_c = total - n_b
            base = ModelParams(n_b, n_c, 1, coupling, omega)
            full = build_full(base)
            eigenvalues, eigenvectors = np.linalg.eigh(full.matrix)
            excitations = battery_excitations(n_b, total)
            for m in range(1, n_c + 1):
                params = ModelParams(n_b, n_c, m, coupling, omega)
                de_full = _delta_e_curve(
                    eigenvalues, eigenvectors, initial_state(params),
                    excitations, omega, times,
                )
                eig = decompose(build_hamiltonian(params))
                de_sector = delta_e_on_grid(eig, params, times)
                deviation = float(np.abs(de_full - de_sector).max())
                count += 1
                if deviation > worst.deviation:
                    worst = VerifyCase(n_b=n_b, n_c=n_c, m=m, deviation=deviation)
    return VerifyReport(
        max_spins=max_spins,
        n_times=n_times,
        t_max=t_max,
        tolerance=tolerance,
        cases=count,
        worst=worst,
        passed=worst.deviation <= tolerance * omega,
    )
