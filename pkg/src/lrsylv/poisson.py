"""Finite-difference Poisson solve on [-1,1]^2 in Sylvester form.

The second-order operator D2 = tridiag(1, -2, 1)/h^2 on n interior
points turns u_xx + u_yy = f into D2 X + X D2 = F.  Two routes are
provided: a direct diagonalization by the orthogonal sine transform,
and a low-rank route that feeds the Sylvester form to FI-ADI with the
spectral intervals [-b, -a] and [a, b] known in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .adi import FiAdiConfig, SylvesterProblem, TridiagOperator, fi_adi
from .core import FactoredRhs, LowRankFactors, dense_svd
from .spectra import Interval


def grid(n: int) -> np.ndarray:
    """Interior grid points of [-1, 1] with spacing h = 2/(n+1)."""
    h = 2.0 / (n + 1)
    return -1.0 + h * np.arange(1, n + 1)


def fd_eigenvalues(n: int) -> np.ndarray:
    """Eigenvalues of D2: -(4/h^2) sin^2(j pi / (2(n+1))), j = 1..n."""
    h = 2.0 / (n + 1)
    j = np.arange(1, n + 1)
    return -(4.0 / h**2) * np.sin(j * np.pi / (2.0 * (n + 1))) ** 2


def fd_spectral_bounds(n: int) -> tuple[float, float]:
    """(a, b) with the spectrum of -D2 contained in [a, b], both tight."""
    lam = fd_eigenvalues(n)
    return float(-lam[0]), float(-lam[-1])


def fd_operator(n: int) -> TridiagOperator:
    """D2 as a tridiagonal operator with its exact spectral interval."""
    if n < 2:
        raise ValueError("need at least two interior points")
    h = 2.0 / (n + 1)
    a, b = fd_spectral_bounds(n)
    return TridiagOperator(
        np.full(n, -2.0 / h**2),
        np.full(n - 1, 1.0 / h**2),
        spectral_interval=Interval(-b, -a),
    )


@dataclass(frozen=True)
class PoissonProblem:
    """Discrete Poisson problem D2 X + X D2 = F with factored F."""

    n: int
    rhs: FactoredRhs

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two interior points")
        if self.rhs.left_vectors.shape[0] != self.n:
            raise ValueError("right-hand side does not match the grid size")

    @property
    def h(self) -> float:
        return 2.0 / (self.n + 1)

    @classmethod
    def from_samples(cls, samples: np.ndarray, tol: float = 1e-12) -> "PoissonProblem":
        samples = np.asarray(samples, dtype=float)
        return cls(samples.shape[0], ingest_rhs(samples, tol))

    @classmethod
    def from_function(cls, f, n: int, tol: float = 1e-12) -> "PoissonProblem":
        return cls.from_samples(sample_rhs(f, n), tol)

    def sylvester(self) -> SylvesterProblem:
        # A = D2, B = -D2 so that A X - X B = F
        a, b = fd_spectral_bounds(self.n)
        op = fd_operator(self.n)
        op_B = TridiagOperator(
            -op.main, -op.off, spectral_interval=Interval(a, b)
        )
        return SylvesterProblem(op, op_B, self.rhs, Interval(-b, -a), Interval(a, b))


def sample_rhs(f, n: int) -> np.ndarray:
    """Dense samples of f(x, y) on the interior grid."""
    x = grid(n)
    F = np.asarray(f(x[:, None], x[None, :]), dtype=float)
    if F.shape != (n, n):
        raise ValueError("f must broadcast to an n-by-n grid sample")
    return F


def ingest_rhs(samples: np.ndarray, tol: float = 1e-12) -> FactoredRhs:
    """Compress dense grid samples to numerical rank by truncated SVD."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[0] != samples.shape[1]:
        raise ValueError("samples must form a square grid")
    if not np.all(np.isfinite(samples)):
        raise ValueError("samples must be finite")
    s, U, V = dense_svd(samples)
    keep = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0.0 else 0
    return FactoredRhs(U[:, :keep], s[:keep], V[:, :keep])


def _dst1(V: np.ndarray) -> np.ndarray:
    """Type-I discrete sine transform along axis 0 via a length-2(n+1) FFT."""
    n = V.shape[0]
    W = np.zeros((2 * (n + 1),) + V.shape[1:])
    W[1 : n + 1] = V
    W[n + 2 :] = -V[::-1]
    return -np.fft.rfft(W, axis=0).imag[1 : n + 1] / 2.0


def sine_transform(V: np.ndarray) -> np.ndarray:
    """Apply the orthogonal involution T = sqrt(2/(n+1)) S on both sides."""
    n = V.shape[0]
    scale = 2.0 / (n + 1)
    return scale * _dst1(_dst1(V).T).T


def poisson_direct(problem: PoissonProblem) -> np.ndarray:
    """Dense solve by sine-transform diagonalization of D2."""
    lam = fd_eigenvalues(problem.n)
    F_hat = sine_transform(problem.rhs.dense().real)
    X_hat = F_hat / (lam[:, None] + lam[None, :])
    return sine_transform(X_hat)


def poisson_lowrank(problem: PoissonProblem, epsilon: float) -> LowRankFactors:
    """Low-rank solve with ||X - X_lr||_2 <= 2*epsilon*||X||_2."""
    return fi_adi(problem.sylvester(), FiAdiConfig(epsilon=epsilon))
