"""Node matrices, minimum singular values, and modulus checks.

The estimator's variance is controlled by how small the least singular value
of the node matrix can get; the checks here verify the closed-form lower
bound numerically.  Eigenvalues come from a cyclic Jacobi sweep on the Gram
matrix: squared conditioning is acceptable because the asserted inequalities
have orders of magnitude of slack at desk sizes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .orthopoly import chebyshev_basis


class BoundCheckError(AssertionError):
    """A verified inequality failed; the message carries the offending point."""


@dataclass(frozen=True)
class NodeMatrix:
    """Rows i in [M], columns j: entries (i/M)^j; j starts at 0 when the
    leading all-ones column is included."""

    M: int
    L: int
    with_ones: bool
    array: np.ndarray

    def __post_init__(self):
        self.array.flags.writeable = False


def build_matrix(M: int, L: int, with_ones: bool = False) -> NodeMatrix:
    if M < 1 or L < 1:
        raise ValueError("M and L must be >= 1")
    nodes = np.arange(1, M + 1) / M
    j_lo = 0 if with_ones else 1
    cols = [nodes**j for j in range(j_lo, L + 1)]
    return NodeMatrix(M, L, with_ones, np.column_stack(cols))


def jacobi_eigenvalues(sym: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below
    tol * max(1, ||A||_F).  Returns eigenvalues sorted ascending.
    """
    a = np.array(sym, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    if n == 1:
        return a[0, :1].copy()
    stop = tol * max(1.0, float(np.linalg.norm(a)))

    def off_norm() -> float:
        off = a - np.diag(np.diag(a))
        return float(np.linalg.norm(off))

    for _ in range(max_sweeps):
        if off_norm() <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, -s], [s, c]])
                a[[p, q], :] = rot @ a[[p, q], :]
                a[:, [p, q]] = a[:, [p, q]] @ rot.T
                a[p, q] = a[q, p] = 0.0
    if off_norm() > stop:
        raise RuntimeError("Jacobi sweep did not converge")
    return np.sort(np.diag(a))


def sigma_min(matrix) -> float:
    """Smallest singular value via a Jacobi eigen-solve of the Gram matrix."""
    a = matrix.array if isinstance(matrix, NodeMatrix) else np.asarray(matrix, dtype=float)
    rows, cols = a.shape
    if rows < cols:
        raise ValueError(f"need rows >= columns, got {rows} x {cols}")
    eigs = jacobi_eigenvalues(a.T @ a)
    return math.sqrt(max(float(eigs[0]), 0.0))


def sigma_min_bound(M: int, L: int) -> float:
    """Closed-form lower bound on sigma_min(Bbar / sqrt(M)) for M >= L+1:
    (1 / (L^2 2^(7L) (2L+1))) * ((M+L)/(eM))^(L+0.5)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    if M <= L:
        raise ValueError(f"bound requires M >= L+1, got M={M}, L={L}")
    lead = 1.0 / (L * L * 2.0 ** (7 * L) * (2 * L + 1))
    return lead * ((M + L) / (math.e * M)) ** (L + 0.5)


@dataclass(frozen=True)
class TmBoundReport:
    M: int
    m: int
    num_points: int
    worst_ratio: float
    worst_point: complex


def tm_bound_at(M: int, m: int, z: complex) -> float:
    """m^2 2^(6m) (max(|z|, |z+m|) v M)^m; |z + xi| is maximized at an endpoint."""
    reach = max(abs(z), abs(z + m), float(M))
    return m * m * 2.0 ** (6 * m) * reach**m


def tm_modulus_check(M: int, m: int, num_points: int) -> TmBoundReport:
    """Check |t_m(z)| against its modulus bound on the unit circle and [-1, M].

    Exact coefficients, Horner in floating point; raises BoundCheckError with
    the offending point if any ratio exceeds 1.
    """
    if m < 1 or m > M - 1:
        raise ValueError(f"need 1 <= m <= M-1, got m={m}, M={M}")
    if num_points < 1:
        raise ValueError("num_points must be >= 1")
    basis = chebyshev_basis(M, m)
    coeffs = [float(c) for c in basis.coeffs[m]]

    def t_at(z: complex) -> complex:
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * z + c
        return acc

    points = [cmath.exp(2j * math.pi * i / num_points) for i in range(num_points)]
    if num_points == 1:
        points.append(complex(M, 0.0))
    else:
        step = (M + 1.0) / (num_points - 1)
        points += [complex(-1.0 + step * i, 0.0) for i in range(num_points)]
    worst_ratio = -1.0
    worst_point = points[0]
    for z in points:
        ratio = abs(t_at(z)) / tm_bound_at(M, m, z)
        if ratio > worst_ratio:
            worst_ratio = ratio
            worst_point = z
        if ratio > 1.0:
            raise BoundCheckError(
                f"|t_{m}(z)| exceeds its bound at z={z} (M={M}, ratio={ratio:.3g})"
            )
    return TmBoundReport(M, m, num_points, worst_ratio, worst_point)
