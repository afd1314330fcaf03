"""Structured matrices with displacement structure and their low-rank forms.

Cauchy-type families: C_ij = 1/(z_i - w_j) satisfies
D_z C - C D_w = ones; the squared-modulus variant
Ct_ij = 1/|z_i - w_j|^2 satisfies conj(D_z) Ct - Ct conj(D_w) = C; and
the Hadamard powers Cp_ij = 1/(z_i - w_j)^p satisfy
D_z Cp - Cp D_w = C(p-1).  Those identities feed the ADI machinery to
produce low-rank approximants with certified error.

Also here: the closed-form solver X = Y (C o (Y* F W)) W* for normal
A, B with known eigendecompositions, and a circulant-based Lyapunov
problem whose solution is exactly diagonal with known entries, used to
show the triangular-number approximants are near-best.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .adi import (
    DenseOperator,
    DiagonalOperator,
    FiAdiConfig,
    SylvesterProblem,
    fadi,
    fi_adi,
    smith,
)
from .core import (
    FactoredRhs,
    LowRankFactors,
    concat_factors,
    dense_svd,
    zero_factors,
)
from .spectra import Disk, SpectralSet, disk_shift, schedule_for

_MEMBER_RTOL = 1e-9


def _inside(points: np.ndarray, S: SpectralSet) -> bool:
    if isinstance(S, Disk):
        return bool(
            np.all(np.abs(points - S.center) <= S.radius * (1.0 + _MEMBER_RTOL))
        )
    return bool(
        np.all((points.imag == 0) & (points.real >= S.lo) & (points.real <= S.hi))
    )


@dataclass(frozen=True)
class PointSets:
    """Point collections z in E and w in G defining a Cauchy matrix."""

    z: np.ndarray
    w: np.ndarray
    E: SpectralSet
    G: SpectralSet

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=np.complex128).ravel()
        w = np.asarray(self.w, dtype=np.complex128).ravel()
        if z.size == 0 or w.size == 0:
            raise ValueError("point sets must be nonempty")
        if np.min(np.abs(z[:, None] - w[None, :])) == 0.0:
            raise ValueError("z and w must be disjoint collections")
        if not _inside(z, self.E):
            raise ValueError("some z points lie outside E")
        if not _inside(w, self.G):
            raise ValueError("some w points lie outside G")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)

    @property
    def shape(self) -> tuple[int, int]:
        return self.z.size, self.w.size


def random_point_sets(
    E: Disk, G: Disk, m: int, n: int, seed: int
) -> PointSets:
    """Uniformly random points in two disks, reproducible from the seed."""
    rng = np.random.default_rng(seed)

    def draw(S: Disk, count: int) -> np.ndarray:
        r = S.radius * np.sqrt(rng.uniform(0.0, 1.0, count))
        th = rng.uniform(0.0, 2.0 * np.pi, count)
        return S.center + r * np.exp(1j * th)

    return PointSets(draw(E, m), draw(G, n), E, G)


def cauchy(points: PointSets) -> np.ndarray:
    """Dense C with C_ij = 1/(z_i - w_j)."""
    return 1.0 / (points.z[:, None] - points.w[None, :])


def ctilde(points: PointSets) -> np.ndarray:
    """Dense Ct with Ct_ij = 1/|z_i - w_j|^2."""
    return 1.0 / np.abs(points.z[:, None] - points.w[None, :]) ** 2


def cauchy_power(points: PointSets, p: int) -> np.ndarray:
    """Dense Cp with Cp_ij = 1/(z_i - w_j)^p, p >= 1."""
    if p < 1:
        raise ValueError("power must be at least 1")
    return 1.0 / (points.z[:, None] - points.w[None, :]) ** p


def _conj_set(S: SpectralSet) -> SpectralSet:
    if isinstance(S, Disk):
        return Disk(np.conj(S.center), S.radius)
    return S


def _require_antipodal_disks(points: PointSets) -> tuple[Disk, Disk]:
    E, G = points.E, points.G
    if not (isinstance(E, Disk) and isinstance(G, Disk)):
        raise ValueError("antipodal disk enclosures are required")
    scale = abs(E.center) + E.radius
    if abs(G.center + E.center) > 1e-12 * scale or abs(G.radius - E.radius) > 1e-12 * scale:
        raise ValueError("disk enclosures must be antipodal (G = -E)")
    return E, G


def _ctilde_problem(points: PointSets, rhs: FactoredRhs) -> SylvesterProblem:
    # conj(D_z) Ct - Ct conj(D_w) = C
    E, G = _require_antipodal_disks(points)
    return SylvesterProblem(
        DiagonalOperator(points.z.conj()),
        DiagonalOperator(points.w.conj()),
        rhs,
        _conj_set(E),
        _conj_set(G),
    )


def _svd_rhs(M: np.ndarray) -> FactoredRhs:
    s, U, V = dense_svd(M)
    return FactoredRhs(U, s, V)


def ctilde_lowrank(points: PointSets, epsilon: float) -> LowRankFactors:
    """Low-rank approximant of Ct with ||Ct - X||_2 <= 2*epsilon*||Ct||_2.

    Solves the displacement equation for Ct with right-hand side C by
    FI-ADI; the batching follows C's own singular-value decay.
    """
    rhs = _svd_rhs(cauchy(points))
    problem = _ctilde_problem(points, rhs)
    return fi_adi(problem, FiAdiConfig(epsilon=epsilon))


def ctilde_xt(points: PointSets, k: int) -> LowRankFactors:
    """Rank-t triangular approximant of Ct, t = k(k+1)/2.

    Weight i of the right-hand side C receives k+1-i repetitions of
    the optimal disk shift pair, i = 1..k, and the partial solutions
    are summed.  The error at rank t is within the disk bound curve.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    rhs = _svd_rhs(cauchy(points))
    if k > rhs.rho:
        raise ValueError(f"k={k} exceeds the right-hand side rank {rhs.rho}")
    base = _ctilde_problem(points, rhs)
    pair = disk_shift(base.A_set)
    pieces = []
    for i in range(k):
        piece = FactoredRhs(
            rhs.left_vectors[:, i : i + 1],
            rhs.weights[i : i + 1],
            rhs.right_vectors[:, i : i + 1],
        )
        pieces.append(smith(base.with_rhs(piece), pair, k - i))
    return concat_factors(*pieces)


def c3_lowrank(points: PointSets, k: int) -> LowRankFactors:
    """Low-rank approximant of the cubed Cauchy matrix C3 = 1/(z-w)^3.

    The displacement right-hand side is C2 = 1/(z-w)^2, whose weights
    are grouped so batch i carries sigma_j for triangular j in
    [i(i+1)/2, (i+1)(i+2)/2 - 1] and receives k+1-i shift repetitions.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    E, G = _require_antipodal_disks(points)
    rhs = _svd_rhs(cauchy_power(points, 2))
    problem = SylvesterProblem(
        DiagonalOperator(points.z), DiagonalOperator(points.w), rhs, E, G
    )
    pair = disk_shift(E)
    pieces = []
    for i in range(1, k + 1):
        lo = i * (i + 1) // 2 - 1
        hi = min((i + 1) * (i + 2) // 2 - 1, rhs.rho)
        if lo >= rhs.rho:
            break
        piece = FactoredRhs(
            rhs.left_vectors[:, lo:hi],
            rhs.weights[lo:hi],
            rhs.right_vectors[:, lo:hi],
        )
        pieces.append(smith(problem.with_rhs(piece), pair, k + 1 - i))
    if not pieces:
        return zero_factors(*points.shape)
    return concat_factors(*pieces)


def _check_unitary(Q: np.ndarray, name: str) -> None:
    m = Q.shape[0]
    if Q.shape[0] != Q.shape[1]:
        raise ValueError(f"{name} must be square")
    defect = np.linalg.norm(Q.conj().T @ Q - np.eye(m))
    if defect > 1e-8 * m:
        raise ValueError(f"{name} is not unitary: operator must be normal")


def eig_cauchy(lam_A: np.ndarray, lam_B: np.ndarray) -> np.ndarray:
    """Cauchy matrix 1/(lam_A_j - lam_B_k) on two eigenvalue lists."""
    lam_A = np.asarray(lam_A, dtype=np.complex128).ravel()
    lam_B = np.asarray(lam_B, dtype=np.complex128).ravel()
    diff = lam_A[:, None] - lam_B[None, :]
    if np.min(np.abs(diff)) == 0.0:
        raise ValueError("eigenvalue collision between A and B")
    return 1.0 / diff


def hadamard_solve(
    Y: np.ndarray,
    lam_A: np.ndarray,
    W: np.ndarray,
    lam_B: np.ndarray,
    F: np.ndarray,
) -> np.ndarray:
    """Closed-form solution X = Y (C o (Y* F W)) W* of AX - XB = F.

    A = Y diag(lam_A) Y* and B = W diag(lam_B) W* must be normal
    (unitary eigenvectors); C is the eigenvalue Cauchy matrix and o the
    entrywise product.
    """
    Y = np.asarray(Y, dtype=np.complex128)
    W = np.asarray(W, dtype=np.complex128)
    _check_unitary(Y, "Y")
    _check_unitary(W, "W")
    C = eig_cauchy(lam_A, lam_B)
    return Y @ (C * (Y.conj().T @ np.asarray(F) @ W)) @ W.conj().T


def hadamard_solve_lowrank(
    Y: np.ndarray,
    lam_A: np.ndarray,
    W: np.ndarray,
    lam_B: np.ndarray,
    rhs: FactoredRhs,
    k: int,
    A_set: SpectralSet,
    B_set: SpectralSet,
) -> LowRankFactors:
    """Low-rank closed-form solve via Cauchy-matrix approximants.

    For weight i of F (i = 1..min(rho, k)), the eigenvalue Cauchy
    matrix is replaced by its rank-s_i fADI approximant with
    s_i = k+1-i, and C o (u v*) = diag(u) C diag(conj v) folds each
    approximant into factored form.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    Y = np.asarray(Y, dtype=np.complex128)
    W = np.asarray(W, dtype=np.complex128)
    _check_unitary(Y, "Y")
    _check_unitary(W, "W")
    lam_A = np.asarray(lam_A, dtype=np.complex128).ravel()
    lam_B = np.asarray(lam_B, dtype=np.complex128).ravel()
    m, n = lam_A.size, lam_B.size
    if rhs.rho == 0:
        return zero_factors(m, n)

    # rank-1 rhs of ones: D_A C - C D_B = 1 1^T
    ones_rhs = FactoredRhs(
        np.full((m, 1), 1.0 / np.sqrt(m)),
        np.array([np.sqrt(m) * np.sqrt(n)]),
        np.full((n, 1), 1.0 / np.sqrt(n)),
    )
    cproblem = SylvesterProblem(
        DiagonalOperator(lam_A), DiagonalOperator(lam_B), ones_rhs, A_set, B_set
    )
    terms = []
    for i in range(min(rhs.rho, k)):
        schedule = schedule_for(k - i, A_set, B_set)
        capprox = fadi(cproblem, schedule)
        u_t = Y.conj().T @ rhs.left_vectors[:, i]
        v_t = W.conj().T @ rhs.right_vectors[:, i]
        left = Y @ (u_t[:, None] * capprox.left)
        right = W @ (v_t[:, None] * capprox.right)
        terms.append(
            LowRankFactors(left, rhs.weights[i] * capprox.middle, right)
        )
    return concat_factors(*terms)


@dataclass(frozen=True)
class AppendixProblem:
    """Circulant-based Lyapunov problem A X + X A^T = F with diagonal X.

    Q is the down-shift circulant scaled by 1/q, q = sqrt(2/c + 1), and
    A = (Q + I)(Q - I)^{-1}, a normal matrix with eigenvalues on the
    circle of center z0 = -(q^2+1)/(q^2-1) and radius eta =
    2q/(q^2-1).  F = -S Lam S^T, with S the stride-rho columns of
    A - I and Lam = diag(q^{-2i}); rank(F) = rho, its weights decay
    geometrically at rate q^2 = mu_1, and the solution X is exactly
    diagonal.
    """

    rho: int
    c: float
    q: float
    n: int
    Q: np.ndarray
    A: np.ndarray
    F: np.ndarray
    Lam: np.ndarray

    @property
    def z0(self) -> float:
        return -(self.q**2 + 1.0) / (self.q**2 - 1.0)

    @property
    def eta(self) -> float:
        return 2.0 * self.q / (self.q**2 - 1.0)

    def disk(self) -> Disk:
        return Disk(self.z0, self.eta)

    def rhs_pieces(self) -> FactoredRhs:
        """F in factored form: weights q^{-2i} ||s_i||^2, v_i = -u_i."""
        cols = self.A[:, 0 : self.n : self.rho] - np.eye(self.n)[:, 0 : self.n : self.rho]
        norms = np.linalg.norm(cols, axis=0)
        U = cols / norms
        weights = np.diag(self.Lam).real * norms**2
        return FactoredRhs(U, weights, -U)


def appendix_build(rho: int, c: float) -> AppendixProblem:
    """Assemble the circulant sharpness problem for given rho >= 2, c > 1."""
    if rho < 2:
        raise ValueError("rho must be at least 2")
    if not c > 1.0:
        raise ValueError("c must exceed 1")
    q = np.sqrt(2.0 / c + 1.0)
    n = rho * rho
    P = np.zeros((n, n))
    P[np.arange(1, n), np.arange(n - 1)] = 1.0
    P[0, n - 1] = 1.0
    Q = P / q
    # A = (Q + I)(Q - I)^{-1}, formed by a columnwise solve of
    # (Q - I) A = (Q + I) to avoid explicit inversion
    A = scipy.linalg.solve(Q - np.eye(n), Q + np.eye(n))
    cols = np.arange(0, n, rho)
    S = (A - np.eye(n))[:, cols]
    Lam = np.diag(q ** (-2.0 * np.arange(rho)))
    F = -S @ Lam @ S.T
    return AppendixProblem(rho=rho, c=float(c), q=float(q), n=n, Q=Q, A=A, F=F, Lam=Lam)


def appendix_closed_form(problem: AppendixProblem) -> np.ndarray:
    """Exact diagonal of the solution X of A X + X A^T = F.

    Entry rho*i + j (0-based, 0 <= i, j < rho) is
    2 q^{-2(i+j)} (sum_{u=0}^{i} q^{-2(rho-1)u}
                   + sum_{v=1}^{rho-1-i} q^{-2(n-(rho-1)v)})
    / (1 - q^{-2n}),
    which is 2 q^{-2(i+j)} up to a relative q^{-2(rho-1)} correction.
    """
    rho, n, q = problem.rho, problem.n, problem.q
    d = np.zeros(n)
    for i in range(rho):
        bracket = sum(q ** (-2.0 * (rho - 1) * u) for u in range(i + 1))
        bracket += sum(
            q ** (-2.0 * (n - (rho - 1) * v)) for v in range(1, rho - i)
        )
        for j in range(rho):
            d[rho * i + j] = 2.0 * q ** (-2.0 * (i + j)) * bracket
    return d / (1.0 - q ** (-2.0 * n))


def appendix_xt(problem: AppendixProblem, k: int) -> LowRankFactors:
    """Rank-t approximant of the diagonal solution, t = k(k+1)/2.

    Piece i of F (0-based) is given k - i repetitions of the optimal
    shift pair (-1, 1); the error ratio to sigma_{t+1}(X) stays within
    a small constant for all t up to rho(rho+1)/2.
    """
    if not 1 <= k <= problem.rho:
        raise ValueError("k must lie in 1 .. rho")
    rhs = problem.rhs_pieces()
    E = problem.disk()
    G = Disk(-E.center, E.radius)
    base = SylvesterProblem(
        DenseOperator(problem.A),
        DenseOperator(-problem.A.T),
        rhs,
        E,
        G,
    )
    pieces = []
    for i in range(k):
        piece = FactoredRhs(
            rhs.left_vectors[:, i : i + 1],
            rhs.weights[i : i + 1],
            rhs.right_vectors[:, i : i + 1],
        )
        pieces.append(smith(base.with_rhs(piece), (-1.0, 1.0), k - i))
    return concat_factors(*pieces)
