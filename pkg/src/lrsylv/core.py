"""Low-rank factor algebra.

A rank-t approximant is stored as the triple (left, middle, right)
representing ``left @ middle @ right*``. The middle factor is kept
separate so that factored solvers can concatenate partial results
cheaply and defer orthogonalization to an explicit compression step.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy.io import mmread, mmwrite

__all__ = [
    "LowRankFactors",
    "FactoredRhs",
    "materialize",
    "compress",
    "compress_abs",
    "concat_factors",
    "zero_factors",
    "dense_svd",
    "eps_rank",
    "frob_norm",
    "write_bundle",
    "read_bundle",
]


def _as_complex_matrix(a) -> np.ndarray:
    out = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    if out.ndim != 2:
        raise ValueError("factors must be two-dimensional")
    return out


@dataclass(frozen=True)
class LowRankFactors:
    """Triple (left, middle, right) representing left @ middle @ right*.

    left is m x t, middle is t x t (diagonal or block diagonal), right is
    n x t. A rank-0 value is legal and represents the m x n zero matrix.
    """

    left: np.ndarray
    middle: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "left", _as_complex_matrix(self.left))
        object.__setattr__(self, "middle", _as_complex_matrix(self.middle))
        object.__setattr__(self, "right", _as_complex_matrix(self.right))
        t = self.left.shape[1]
        if self.middle.shape != (t, t) or self.right.shape[1] != t:
            raise ValueError(
                "factor shapes inconsistent: left %s, middle %s, right %s"
                % (self.left.shape, self.middle.shape, self.right.shape)
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.left.shape[0], self.right.shape[0])

    @property
    def rank(self) -> int:
        return self.left.shape[1]


@dataclass(frozen=True)
class FactoredRhs:
    """Right-hand side F = sum_i weights[i] * u_i v_i* with unit outer products.

    weights are nonincreasing and nonnegative; each pair of columns
    satisfies ||u_i|| * ||v_i|| = 1 so the weights act as singular values.
    """

    left_vectors: np.ndarray
    weights: np.ndarray
    right_vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "left_vectors", _as_complex_matrix(self.left_vectors))
        object.__setattr__(self, "right_vectors", _as_complex_matrix(self.right_vectors))
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        object.__setattr__(self, "weights", w)
        rho = w.size
        if self.left_vectors.shape[1] != rho or self.right_vectors.shape[1] != rho:
            raise ValueError("weights length must match vector column counts")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if rho > 1 and np.any(w[1:] > w[:-1] * (1 + 1e-12) + 1e-300):
            raise ValueError("weights must be nonincreasing")
        norms = np.linalg.norm(self.left_vectors, axis=0) * np.linalg.norm(
            self.right_vectors, axis=0
        )
        if rho and not np.allclose(norms, 1.0, rtol=1e-8, atol=0):
            raise ValueError("outer products u_i v_i* must have unit spectral norm")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.left_vectors.shape[0], self.right_vectors.shape[0])

    @property
    def rho(self) -> int:
        return self.weights.size

    def dense(self) -> np.ndarray:
        return (self.left_vectors * self.weights) @ self.right_vectors.conj().T


def zero_factors(m: int, n: int) -> LowRankFactors:
    """Rank-0 factors for the m x n zero matrix."""
    z = np.zeros
    return LowRankFactors(z((m, 0)), z((0, 0)), z((n, 0)))


def materialize(f: LowRankFactors) -> np.ndarray:
    """Dense m x n matrix left @ middle @ right*."""
    return f.left @ f.middle @ f.right.conj().T


def concat_factors(*fs: LowRankFactors) -> LowRankFactors:
    """Concatenate factor triples; middles are placed block diagonally."""
    fs = [f for f in fs if f.rank > 0]
    if not fs:
        raise ValueError("concat_factors needs at least one nonzero operand")
    ranks = [f.rank for f in fs]
    t = sum(ranks)
    mid = np.zeros((t, t), dtype=np.complex128)
    pos = 0
    for f, r in zip(fs, ranks):
        mid[pos : pos + r, pos : pos + r] = f.middle
        pos += r
    left = np.hstack([f.left for f in fs])
    right = np.hstack([f.right for f in fs])
    return LowRankFactors(left, mid, right)


def _truncated_core(f: LowRankFactors, keep) -> LowRankFactors:
    """Shared QR + small-SVD recompression. keep maps singular values to a count."""
    m, n = f.shape
    if f.rank == 0:
        return zero_factors(m, n)
    qz, rz = np.linalg.qr(f.left @ f.middle)
    qy, ry = np.linalg.qr(f.right)
    u, s, vh = np.linalg.svd(rz @ ry.conj().T)
    r = keep(s)
    if r == 0:
        return zero_factors(m, n)
    return LowRankFactors(
        qz @ u[:, :r], np.diag(s[:r]).astype(np.complex128), qy @ vh[:r].conj().T
    )


def compress(f: LowRankFactors, tol: float) -> LowRankFactors:
    """Recompress factors, dropping singular values <= tol * (largest).

    The result has orthonormal left and right columns and a diagonal,
    nonincreasing, positive middle. The spectral norm of the discarded
    part is at most tol times the largest retained middle entry, and the
    rank never increases.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return _truncated_core(f, lambda s: int(np.sum(s > tol * s[0])) if s[0] > 0 else 0)


def compress_abs(f: LowRankFactors, cutoff: float) -> LowRankFactors:
    """Recompress factors, dropping singular values <= cutoff (absolute)."""
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    return _truncated_core(f, lambda s: int(np.sum(s > cutoff)))


def dense_svd(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD of a dense matrix.

    Returns (singular values, left vectors, right vectors) with values
    nonincreasing, so M = U @ diag(s) @ V*.
    """
    M = np.atleast_2d(np.asarray(M))
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(M.imag)):
        raise ValueError("matrix entries must be finite")
    u, s, vh = np.linalg.svd(M, full_matrices=False)
    return s, u, vh.conj().T


def eps_rank(singular_values, epsilon: float) -> int:
    """Smallest k with sigma_{k+1} <= epsilon * sigma_1.

    Values past the end of the sequence count as zero.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    s = np.asarray(singular_values, dtype=np.float64).ravel()
    if s.size == 0 or s[0] == 0:
        return 0
    if np.any(s < 0):
        raise ValueError("singular values must be nonnegative")
    if np.any(s[1:] > s[:-1] * (1 + 1e-12)):
        raise ValueError("singular values must be nonincreasing")
    return int(np.sum(s > epsilon * s[0]))


def frob_norm(f: LowRankFactors) -> float:
    """Frobenius norm of the represented matrix, via t x t Gram matrices."""
    if f.rank == 0:
        return 0.0
    gl = f.left.conj().T @ f.left
    gr = f.right.conj().T @ f.right
    val = np.trace(gl @ f.middle @ gr @ f.middle.conj().T)
    return float(np.sqrt(max(val.real, 0.0)))


_MANIFEST = "manifest"
_PARTS = ("left", "middle", "right")


def write_bundle(path: str, f: LowRankFactors) -> None:
    """Write factors to a directory: a key=value manifest plus three
    Matrix Market array files named left.mtx, middle.mtx, right.mtx."""
    os.makedirs(path, exist_ok=True)
    arrays = (f.left, f.middle, f.right)
    is_real = all(np.allclose(a.imag, 0.0) for a in arrays)
    m, n = f.shape
    lines = [
        "m=%d" % m,
        "n=%d" % n,
        "rank=%d" % f.rank,
        "scalar=%s" % ("real" if is_real else "complex"),
    ]
    with open(os.path.join(path, _MANIFEST), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    for name, a in zip(_PARTS, arrays):
        out = a.real if is_real else a
        mmwrite(os.path.join(path, name + ".mtx"), out)


def read_bundle(path: str) -> LowRankFactors:
    """Read factors written by write_bundle, validating against the manifest."""
    meta = {}
    with open(os.path.join(path, _MANIFEST)) as fh:
        for line in fh:
            line = line.strip()
            if line:
                key, _, value = line.partition("=")
                meta[key] = value
    if meta.get("scalar") not in ("real", "complex"):
        raise ValueError("manifest scalar must be real or complex")
    parts = [np.asarray(mmread(os.path.join(path, p + ".mtx"))) for p in _PARTS]
    f = LowRankFactors(*parts)
    m, n = f.shape
    if (m, n, f.rank) != (int(meta["m"]), int(meta["n"]), int(meta["rank"])):
        raise ValueError("bundle shapes disagree with manifest")
    return f
