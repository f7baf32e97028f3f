"""Eigendecomposition of real symmetric tridiagonal matrices.

Implicit QL iteration with Wilkinson shifts, plane rotations accumulated
into the eigenvector matrix (the EISPACK imtql2 scheme).  This is the
computational core of the package: the sector Hamiltonian is a small
Jacobi matrix, and a full orthogonal eigenbasis makes time evolution exact
at arbitrary t.

Output is deterministic: eigenvalues sorted ascending, each eigenvector
column normalized so its first nonzero component is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .model import TridiagonalHamiltonian

MAX_SWEEPS = 50  # QL sweeps allowed per eigenvalue before giving up

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Sorted eigenvalues with the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


def tridiagonal_eigh(
    diag: np.ndarray,
    offdiag: np.ndarray,
    max_sweeps: int = MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of the symmetric tridiagonal (diag, offdiag).

    Returns (w, v) with w ascending and v[:, k] the unit eigenvector for
    w[k].  Raises ConvergenceError if any eigenvalue needs more than
    max_sweeps QL sweeps; partial results are never returned.
    """
    d = np.asarray(diag, dtype=float).copy()
    n = d.size
    if n == 0:
        raise ValueError("matrix dimension must be >= 1")
    if np.asarray(offdiag).size != n - 1:
        raise ValueError(f"offdiag must have length {n - 1}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(offdiag))):
        raise ValueError("matrix entries must be finite")

    # e[i] couples rows i and i+1; e[n-1] is workspace.
    e = np.zeros(n)
    e[: n - 1] = offdiag
    v = np.eye(n)

    for low in range(n):
        sweeps = 0
        while True:
            # Find the first negligible coupling at or above `low`.
            split = low
            while split < n - 1:
                scale = abs(d[split]) + abs(d[split + 1])
                if abs(e[split]) <= _EPS * scale:
                    break
                split += 1
            if split == low:
                break  # d[low] converged
            if sweeps >= max_sweeps:
                raise ConvergenceError(low, max_sweeps)
            sweeps += 1

            # Wilkinson shift from the leading 2x2 of the active block.
            g = (d[low + 1] - d[low]) / (2.0 * e[low])
            r = math.hypot(g, 1.0)
            g = d[split] - d[low] + e[low] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            for i in range(split - 1, low - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # Underflow in the rotation chain: deflate and restart.
                    d[i + 1] -= p
                    e[split] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                # Accumulate the rotation into columns i, i+1
                # (evaluate both new columns before assigning: slices are views).
                col = v[:, i]
                nxt = v[:, i + 1]
                rotated_nxt = s * col + c * nxt
                rotated_col = c * col - s * nxt
                v[:, i + 1] = rotated_nxt
                v[:, i] = rotated_col
            else:
                d[low] -= p
                e[low] = g
                e[split] = 0.0

    order = np.argsort(d, kind="stable")
    w = d[order]
    v = v[:, order]
    _fix_signs(v)
    return w, v


def _fix_signs(v: np.ndarray) -> None:
    """Flip columns so the first nonzero component of each is positive."""
    for k in range(v.shape[1]):
        col = v[:, k]
        nonzero = np.nonzero(col)[0]
        if nonzero.size and col[nonzero[0]] < 0.0:
            col *= -1.0


def decompose(h: TridiagonalHamiltonian) -> EigenSystem:
    """Full eigendecomposition of a sector Hamiltonian."""
    w, v = tridiagonal_eigh(np.zeros(h.dim), h.offdiag)
    return EigenSystem(eigenvalues=w, eigenvectors=v)
