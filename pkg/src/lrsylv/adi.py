"""ADI-family solvers for AX - XB = F with low-rank right-hand sides.

Four variants: dense ADI iteration, factored ADI (fADI) producing
W D Y* directly, Smith's method (one repeated shift pair), and FI-ADI,
which splits the right-hand side by singular values into batches and
gives each batch only as many shifts as its weight requires.

Operators are duck-typed: anything with dim, apply, shifted_solve,
adjoint, and norm2 works.  Right-multiplications and right-solves are
routed through the adjoint, so only "act from the left" primitives are
ever needed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Protocol

import numpy as np
import scipy.linalg

from .core import (
    FactoredRhs,
    LowRankFactors,
    compress,
    compress_abs,
    concat_factors,
    frob_norm,
    zero_factors,
)
from .spectra import (
    Interval,
    SpectralSet,
    ShiftSchedule,
    schedule_for,
    set_distance,
    zk_bound,
)

TAU_MODES = ("warm-start", "a-priori")

_MAX_SHIFTS = 100_000


class LinearOperator(Protocol):
    """Capabilities a Sylvester coefficient operator must expose."""

    @property
    def dim(self) -> int: ...

    def apply(self, block: np.ndarray) -> np.ndarray: ...

    def shifted_solve(self, sigma: complex, block: np.ndarray) -> np.ndarray: ...

    def adjoint(self) -> "LinearOperator": ...

    def norm2(self) -> float: ...


def _check_solution(out: np.ndarray, sigma: complex) -> np.ndarray:
    if not np.all(np.isfinite(out)):
        raise ValueError(f"shifted solve is singular at shift {sigma}")
    return out


class DenseOperator:
    """Explicit square matrix; shifted solves via cached LU factors."""

    def __init__(self, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("operator matrix must be square")
        self.matrix = matrix
        self._lu: dict[complex, tuple] = {}
        self._adjoint: "DenseOperator | None" = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, block: np.ndarray) -> np.ndarray:
        return self.matrix @ block

    def shifted_solve(self, sigma: complex, block: np.ndarray) -> np.ndarray:
        sigma = complex(sigma)
        if sigma not in self._lu:
            shifted = self.matrix - sigma * np.eye(self.dim)
            with warnings.catch_warnings():
                # exact singularity shows up as non-finite output below
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                self._lu[sigma] = scipy.linalg.lu_factor(shifted, check_finite=False)
        out = scipy.linalg.lu_solve(
            self._lu[sigma], np.asarray(block, dtype=np.complex128), check_finite=False
        )
        return _check_solution(out, sigma)

    def adjoint(self) -> "DenseOperator":
        if self._adjoint is None:
            self._adjoint = DenseOperator(self.matrix.conj().T)
        return self._adjoint

    def norm2(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))


class DiagonalOperator:
    """Diagonal matrix given by its entries."""

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries, dtype=np.complex128).ravel()
        if entries.size == 0:
            raise ValueError("diagonal must be nonempty")
        self.entries = entries
        self._adjoint: "DiagonalOperator | None" = None

    @property
    def dim(self) -> int:
        return self.entries.size

    def apply(self, block: np.ndarray) -> np.ndarray:
        return self.entries[:, None] * block

    def shifted_solve(self, sigma: complex, block: np.ndarray) -> np.ndarray:
        denom = self.entries - complex(sigma)
        if np.any(denom == 0):
            raise ValueError(f"shifted solve is singular at shift {sigma}")
        return np.asarray(block, dtype=np.complex128) / denom[:, None]

    def adjoint(self) -> "DiagonalOperator":
        if self._adjoint is None:
            self._adjoint = DiagonalOperator(self.entries.conj())
        return self._adjoint

    def norm2(self) -> float:
        return float(np.max(np.abs(self.entries)))


class TridiagOperator:
    """Symmetric real tridiagonal matrix with O(n) shifted solves.

    spectral_interval, when supplied, encloses the eigenvalues and
    feeds norm2; otherwise a Gershgorin estimate is used.
    """

    def __init__(
        self,
        main: np.ndarray,
        off: np.ndarray,
        spectral_interval: Interval | None = None,
    ):
        main = np.asarray(main, dtype=np.float64).ravel()
        off = np.asarray(off, dtype=np.float64).ravel()
        if off.size != main.size - 1:
            raise ValueError("off-diagonal must have length dim - 1")
        self.main = main
        self.off = off
        self.spectral_interval = spectral_interval

    @property
    def dim(self) -> int:
        return self.main.size

    def apply(self, block: np.ndarray) -> np.ndarray:
        out = self.main[:, None] * block
        if self.off.size:
            out[:-1] += self.off[:, None] * block[1:]
            out[1:] += self.off[:, None] * block[:-1]
        return out

    def shifted_solve(self, sigma: complex, block: np.ndarray) -> np.ndarray:
        sigma = complex(sigma)
        block = np.asarray(block)
        real_path = sigma.imag == 0.0 and not np.iscomplexobj(block)
        dtype = np.float64 if real_path else np.complex128
        n = self.dim
        ab = np.zeros((3, n), dtype=dtype)
        ab[0, 1:] = self.off
        ab[1, :] = self.main - (sigma.real if real_path else sigma)
        ab[2, :-1] = self.off
        try:
            out = scipy.linalg.solve_banded(
                (1, 1), ab, block.astype(dtype, copy=False), check_finite=False
            )
        except np.linalg.LinAlgError as exc:
            raise ValueError(f"shifted solve is singular at shift {sigma}") from exc
        return _check_solution(out, sigma)

    def adjoint(self) -> "TridiagOperator":
        return self

    def norm2(self) -> float:
        if self.spectral_interval is not None:
            iv = self.spectral_interval
            return max(abs(iv.lo), abs(iv.hi))
        radius = np.zeros(self.dim)
        if self.off.size:
            radius[:-1] += np.abs(self.off)
            radius[1:] += np.abs(self.off)
        return float(np.max(np.abs(self.main) + radius))


@dataclass(frozen=True)
class SylvesterProblem:
    """AX - XB = F with spectral enclosures for shift generation."""

    op_A: LinearOperator
    op_B: LinearOperator
    rhs: FactoredRhs
    A_set: SpectralSet
    B_set: SpectralSet

    def __post_init__(self) -> None:
        m, n = self.rhs.shape
        if self.op_A.dim != m or self.op_B.dim != n:
            raise ValueError(
                f"operator dims ({self.op_A.dim}, {self.op_B.dim}) do not "
                f"match rhs shape {self.rhs.shape}"
            )
        set_distance(self.A_set, self.B_set)  # raises if the sets overlap

    @property
    def shape(self) -> tuple[int, int]:
        return self.rhs.shape

    def with_rhs(self, rhs: FactoredRhs) -> "SylvesterProblem":
        return replace(self, rhs=rhs)


@dataclass(frozen=True)
class FiAdiConfig:
    """Controls for fi_adi.

    batch_boundaries uses 1-based cut points l_1 < ... < l_{d+1} with
    l_1 = 1 and l_{d+1} = rank + 1; batch i covers weights
    l_i .. l_{i+1} - 1.  When omitted, batches are chosen so each spans
    at most one factor of the set pair's decay base mu (batch_count, if
    given, overrides with equal-size batches).
    """

    epsilon: float
    batch_count: int | None = None
    batch_boundaries: tuple[int, ...] | None = None
    tau_mode: str = "warm-start"
    compress_each_batch: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.tau_mode not in TAU_MODES:
            raise ValueError(f"tau_mode must be one of {TAU_MODES}")
        if self.batch_count is not None and self.batch_count < 1:
            raise ValueError("batch_count must be positive")
        if self.batch_boundaries is not None:
            bnd = tuple(int(b) for b in self.batch_boundaries)
            if bnd[0] != 1 or any(x >= y for x, y in zip(bnd, bnd[1:])):
                raise ValueError(
                    "batch_boundaries must be strictly increasing and start at 1"
                )
            if self.batch_count is not None and len(bnd) != self.batch_count + 1:
                raise ValueError("batch_boundaries inconsistent with batch_count")
            object.__setattr__(self, "batch_boundaries", bnd)


def _right_apply(op: LinearOperator, X: np.ndarray) -> np.ndarray:
    # X @ B  ==  (B* @ X*)*
    return op.adjoint().apply(X.conj().T).conj().T


def _right_solve(op: LinearOperator, sigma: complex, R: np.ndarray) -> np.ndarray:
    # solve X (B - sigma I) = R  ==  (B* - conj(sigma) I) X* = R*
    return op.adjoint().shifted_solve(np.conj(sigma), R.conj().T).conj().T


def adi_dense(problem: SylvesterProblem, shifts: ShiftSchedule) -> np.ndarray:
    """Dense ADI iteration from X = 0, one double-sweep per shift pair.

    Each pair (alpha, beta) performs the half step
    (A - beta I) X' = X (B - beta I) + F followed by the full step
    X (B - alpha I) = (A - alpha I) X' - F.
    """
    m, n = problem.shape
    F = problem.rhs.dense()
    X = np.zeros((m, n), dtype=np.complex128)
    for alpha, beta in shifts:
        half = problem.op_A.shifted_solve(
            beta, _right_apply(problem.op_B, X) - beta * X + F
        )
        X = _right_solve(
            problem.op_B, alpha, problem.op_A.apply(half) - alpha * half - F
        )
    return X


def fadi(problem: SylvesterProblem, shifts: ShiftSchedule) -> LowRankFactors:
    """Factored ADI: the same iterates as adi_dense, built as W D Y*.

    With F = M N*, block j of W is produced by the one-solve recurrence
    W_1 = (A - beta_1 I)^{-1} M,
    W_{j+1} = W_j + (beta_{j+1} - alpha_j)(A - beta_{j+1} I)^{-1} W_j,
    block j of Y by the adjoint recurrence with the roles of the
    shifts swapped, and the middle factor is
    diag((beta_j - alpha_j) I_rho).
    """
    rhs = problem.rhs
    m, n = problem.shape
    rho = rhs.rho
    if rho == 0:
        return zero_factors(m, n)
    pairs = list(shifts)
    if not pairs:
        return zero_factors(m, n)

    M = rhs.left_vectors * rhs.weights
    N = rhs.right_vectors
    op_Bs = problem.op_B.adjoint()

    alpha_1, beta_1 = pairs[0]
    W = problem.op_A.shifted_solve(beta_1, M)
    Y = op_Bs.shifted_solve(np.conj(alpha_1), N)
    W_blocks = [W]
    Y_blocks = [Y]
    gains = [beta_1 - alpha_1]
    for (alpha_prev, beta_prev), (alpha, beta) in zip(pairs, pairs[1:]):
        W = W + (beta - alpha_prev) * problem.op_A.shifted_solve(beta, W)
        Y = Y + np.conj(alpha - beta_prev) * op_Bs.shifted_solve(np.conj(alpha), Y)
        W_blocks.append(W)
        Y_blocks.append(Y)
        gains.append(beta - alpha)

    middle = np.diag(np.repeat(np.asarray(gains, dtype=np.complex128), rho))
    return LowRankFactors(np.hstack(W_blocks), middle, np.hstack(Y_blocks))


def smith(
    problem: SylvesterProblem, shift: tuple[complex, complex], k: int
) -> LowRankFactors:
    """fADI with a single shift pair repeated k times."""
    if k < 1:
        raise ValueError("k must be at least 1")
    alpha, beta = shift
    return fadi(problem, ShiftSchedule(((alpha, beta),) * k, "user"))


def _decay_base(A_set: SpectralSet, B_set: SpectralSet) -> float:
    # zk_bound(k) = C * mu^{-k}, so consecutive values expose mu
    z1 = zk_bound(1, A_set, B_set)
    if z1 == 0.0:
        return np.inf
    return z1 / zk_bound(2, A_set, B_set)


def _default_boundaries(weights: np.ndarray, mu: float) -> tuple[int, ...]:
    """1-based batch cuts grouping weights within one factor of mu."""
    rho = len(weights)
    cuts = [1]
    lead = weights[0]
    for j in range(1, rho):
        if lead == 0.0 or weights[j] * mu < lead:
            cuts.append(j + 1)
            lead = weights[j]
    cuts.append(rho + 1)
    return tuple(dict.fromkeys(cuts))


def _equal_boundaries(rho: int, d: int) -> tuple[int, ...]:
    d = min(d, rho)
    edges = np.linspace(0, rho, d + 1).round().astype(int)
    return tuple(int(e) + 1 for e in edges)


def _resolve_boundaries(config: FiAdiConfig, rho: int, mu: float, weights) -> tuple[int, ...]:
    if config.batch_boundaries is not None:
        if config.batch_boundaries[-1] != rho + 1:
            raise ValueError(
                f"batch_boundaries must end at rank + 1 = {rho + 1}, "
                f"got {config.batch_boundaries[-1]}"
            )
        return config.batch_boundaries
    if config.batch_count is not None:
        return _equal_boundaries(rho, config.batch_count)
    return _default_boundaries(weights, mu)


def _count_shifts(A_set, B_set, target: float) -> int:
    """Smallest k >= 1 with zk_bound(k) <= target."""
    k = 1
    while zk_bound(k, A_set, B_set) > target:
        k += 1
        if k > _MAX_SHIFTS:
            raise RuntimeError("shift count exceeded safety cap")
    return k


def estimate_tau(
    problem: SylvesterProblem, probe_steps: int = 3, mode: str = "warm-start"
) -> float:
    """Estimate tau ~ ||X||_2 for the FI-ADI tolerance rule.

    warm-start: run probe_steps fADI shifts on the leading weight batch
    and take the largest middle entry after recompression.  a-priori:
    sigma_1(F)/(||A||_2 + ||B||_2), a guaranteed lower estimate.
    """
    if mode not in TAU_MODES:
        raise ValueError(f"mode must be one of {TAU_MODES}")
    rhs = problem.rhs
    if rhs.rho == 0 or rhs.weights[0] == 0.0:
        return 0.0
    if mode == "a-priori":
        return float(rhs.weights[0] / (problem.op_A.norm2() + problem.op_B.norm2()))
    if probe_steps < 1:
        raise ValueError("probe_steps must be at least 1")
    mu = _decay_base(problem.A_set, problem.B_set)
    cuts = _default_boundaries(rhs.weights, mu)
    lead = slice(0, cuts[1] - 1)
    probe_rhs = FactoredRhs(
        rhs.left_vectors[:, lead], rhs.weights[lead], rhs.right_vectors[:, lead]
    )
    schedule = schedule_for(probe_steps, problem.A_set, problem.B_set)
    probe = compress(fadi(problem.with_rhs(probe_rhs), schedule), 1e-12)
    if probe.rank == 0:
        return 0.0
    return float(np.max(np.abs(probe.middle)))


def fi_adi(problem: SylvesterProblem, config: FiAdiConfig) -> LowRankFactors:
    """Factored-independent ADI with singular-value batching.

    The right-hand side's weight groups are solved as separate
    equations; batch i, led by weight sigma_i, gets the smallest shift
    count s_i with Z_{s_i} <= eps * tau * dist(E, G)/(d * sigma_i),
    capped at the count K_max that already reaches Z <= eps.  Batches
    whose target exceeds Z_0 are skipped outright.  Running factors are
    recompressed after each batch at absolute cutoff eps*tau/(2d), so
    compression contributes at most eps*tau/2 overall and
    ||X - X_out||_2 <= 2 eps ||X||_2.
    """
    rhs = problem.rhs
    m, n = problem.shape
    if rhs.rho == 0 or rhs.weights[0] == 0.0:
        return zero_factors(m, n)

    A_set, B_set = problem.A_set, problem.B_set
    mu = _decay_base(A_set, B_set)
    cuts = _resolve_boundaries(config, rhs.rho, mu, rhs.weights)
    d = len(cuts) - 1
    eps = config.epsilon
    tau = estimate_tau(problem, mode=config.tau_mode)
    dist = set_distance(A_set, B_set)
    k_max = _count_shifts(A_set, B_set, eps)
    cutoff = eps * tau / (2.0 * d)

    running: LowRankFactors | None = None
    for i in range(d):
        lo, hi = cuts[i] - 1, cuts[i + 1] - 1
        sigma_lead = float(rhs.weights[lo])
        if sigma_lead == 0.0:
            continue
        target = eps * tau * dist / (d * sigma_lead)
        if zk_bound(0, A_set, B_set) <= target:
            continue  # dropping the whole batch already meets the budget
        s_i = min(_count_shifts(A_set, B_set, target), k_max)
        batch_rhs = FactoredRhs(
            rhs.left_vectors[:, lo:hi],
            rhs.weights[lo:hi],
            rhs.right_vectors[:, lo:hi],
        )
        piece = fadi(
            problem.with_rhs(batch_rhs), schedule_for(s_i, A_set, B_set)
        )
        running = piece if running is None else concat_factors(running, piece)
        if config.compress_each_batch:
            running = compress_abs(running, cutoff)

    if running is None:
        return zero_factors(m, n)
    return running


def residual_fro(problem: SylvesterProblem, candidate: LowRankFactors) -> float:
    """Frobenius norm of A X - X B - F, evaluated in factored form.

    The residual is assembled as the concatenation
    [(A W) D Y*, W (-D) (B* Y)*, U (-diag(w)) V*].  Both stacks are
    orthonormalized and the norm taken on the small projected core, so
    nothing m-by-n is ever formed and the cancellation between the
    three terms is resolved at absolute accuracy ~eps * ||terms||
    rather than the squared loss a Gram evaluation would give.
    """
    rhs = problem.rhs
    terms = []
    if candidate.rank > 0:
        W, D, Y = candidate.left, candidate.middle, candidate.right
        terms.append(LowRankFactors(problem.op_A.apply(W), D, Y))
        terms.append(LowRankFactors(W, -D, problem.op_B.adjoint().apply(Y)))
    if rhs.rho > 0:
        terms.append(
            LowRankFactors(
                rhs.left_vectors,
                -np.diag(rhs.weights.astype(np.complex128)),
                rhs.right_vectors,
            )
        )
    if not terms:
        return 0.0
    stacked = concat_factors(*terms)
    _, r_left = np.linalg.qr(stacked.left)
    _, r_right = np.linalg.qr(stacked.right)
    core = r_left @ stacked.middle @ r_right.conj().T
    return float(np.linalg.norm(core, "fro"))
