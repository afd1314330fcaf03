"""Spectral-set geometry, Zolotarev bounds, and ADI shift generation.

Two geometries are supported: antipodal disks (a disk E together with
its reflection -E) and disjoint real intervals.  For disks the optimal
shift pair is known in closed form; for intervals the near-optimal
shifts come from Jacobi elliptic functions evaluated by AGM/Landen
recurrences, after a Mobius map normalizes the intervals to the
symmetric configuration [-alpha, -1] u [1, alpha].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

_AGM_EPS = 1e-16
_SMALL_M = 1e-9

SHIFT_SOURCES = ("disk-optimal", "interval-zolotarev", "user")


@dataclass(frozen=True)
class Disk:
    """Closed disk {|z - center| <= radius} in the complex plane."""

    center: complex
    radius: float

    def __post_init__(self) -> None:
        if not (self.radius > 0.0):
            raise ValueError("disk radius must be positive")
        if not (math.isfinite(self.radius) and cmath.isfinite(self.center)):
            raise ValueError("disk parameters must be finite")


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (self.lo < self.hi):
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")


SpectralSet = Disk | Interval


@dataclass(frozen=True)
class ShiftSchedule:
    """Ordered ADI shift pairs (alpha_j, beta_j) with a provenance tag."""

    pairs: tuple[tuple[complex, complex], ...]
    source: str

    def __post_init__(self) -> None:
        if self.source not in SHIFT_SOURCES:
            raise ValueError(f"unknown shift source {self.source!r}")
        pairs = tuple((complex(a), complex(b)) for a, b in self.pairs)
        for a, b in pairs:
            if a == b:
                raise ValueError(f"degenerate shift pair ({a}, {b})")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @classmethod
    def user(cls, pairs) -> "ShiftSchedule":
        return cls(tuple(pairs), "user")


@dataclass(frozen=True)
class MobiusTransform:
    """z -> (p*z + q)/(r*z + s) with nonzero determinant."""

    p: complex
    q: complex
    r: complex
    s: complex

    def __post_init__(self) -> None:
        if self.p * self.s - self.q * self.r == 0:
            raise ValueError("singular Mobius coefficients")

    def apply(self, z):
        return (self.p * z + self.q) / (self.r * z + self.s)

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.s, -self.q, -self.r, self.p)


def disk_shift(E: Disk) -> tuple[complex, complex]:
    """Optimal single ADI shift pair for the antipodal pair (E, -E).

    For a disk with center z0 and radius eta, |z0| > eta, the optimal
    rational function has its zero and pole at +/- phi rotated onto the
    center's ray, phi = sqrt(|z0|^2 - eta^2).  Returns (alpha, beta)
    with alpha on E's side.
    """
    z0 = complex(E.center)
    if abs(z0) <= E.radius:
        raise ValueError("disks E and -E intersect: need |center| > radius")
    phi = math.sqrt(abs(z0) ** 2 - E.radius**2)
    u = z0 / abs(z0)
    alpha = u * phi
    if alpha.imag == 0.0:
        alpha = complex(alpha.real, 0.0)
    return alpha, -alpha


def disk_mu(E: Disk) -> float:
    """Geometric decay base mu_1 = (|z0| + phi)/(|z0| - phi).

    For a radius tiny relative to the center, z0 - phi underflows and
    the rate is reported as inf (one step of the optimal shift is then
    exact to working precision).
    """
    z0 = abs(complex(E.center))
    if z0 <= E.radius:
        raise ValueError("disks E and -E intersect: need |center| > radius")
    phi = math.sqrt(z0**2 - E.radius**2)
    if z0 - phi <= 0.0:
        return math.inf
    return (z0 + phi) / (z0 - phi)


def zolotarev_disk_bound(k: int, E: Disk) -> float:
    """Z_k(E, -E) = mu_1^{-k}, exact for antipodal disks."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return disk_mu(E) ** (-k)


def elliptic_K(kappa: float) -> float:
    """Complete elliptic integral of the first kind, modulus kappa.

    AGM iteration: K = pi / (2 * agm(1, sqrt(1 - kappa^2))).
    """
    if not 0.0 <= kappa < 1.0:
        raise ValueError("modulus must satisfy 0 <= kappa < 1")
    a = 1.0
    b = math.sqrt((1.0 - kappa) * (1.0 + kappa))
    for _ in range(60):
        if abs(a - b) <= _AGM_EPS * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def jacobi_sn_dn(u: float, kappa: float) -> tuple[float, float]:
    """Jacobi sn and dn at real argument u, modulus kappa.

    Cephes-style evaluation: ascending AGM scale followed by the
    backward phi recurrence.  dn is formed as cos(phi_0)/cos(phi_1 -
    phi_0), which stays accurate when the complementary modulus is
    small, unlike sqrt(1 - m*sn^2).
    """
    if not 0.0 <= kappa < 1.0:
        raise ValueError("modulus must satisfy 0 <= kappa < 1")
    m = kappa * kappa
    if m < _SMALL_M:
        # one Landen step short of the circular limit
        t = math.sin(u)
        c = math.cos(u)
        corr = 0.25 * m * (u - t * c)
        return t - corr * c, 1.0 - 0.5 * m * t * t

    a = [1.0]
    c = [kappa]
    b = math.sqrt(1.0 - m)
    twon = 1.0
    while abs(c[-1] / a[-1]) > _AGM_EPS:
        if len(a) > 10:
            break
        ai = a[-1]
        c.append(0.5 * (ai - b))
        a.append(0.5 * (ai + b))
        b = math.sqrt(ai * b)
        twon *= 2.0

    phi = twon * a[-1] * u
    prev = phi
    for i in range(len(a) - 1, 0, -1):
        t = c[i] * math.sin(phi) / a[i]
        prev = phi
        phi = 0.5 * (math.asin(t) + phi)
    sn = math.sin(phi)
    denom = math.cos(prev - phi)
    if abs(denom) >= 0.5:
        dn = math.cos(phi) / denom
    else:
        # u near a quarter period: the ratio is 0/0 there, but sn ~ 1
        # keeps the direct form free of cancellation
        dn = math.sqrt(1.0 - m * sn * sn)
    return sn, dn


def jacobi_dn(u: float, kappa: float) -> float:
    """Jacobi dn(u, kappa) for real u, 0 <= kappa < 1."""
    return jacobi_sn_dn(u, kappa)[1]


def mobius_normalize(
    a: float, b: float, c: float, d: float
) -> tuple[MobiusTransform, float, float]:
    """Map [a,b] u [c,d] onto the symmetric pair [-alpha,-1] u [1,alpha].

    Returns (transform, alpha, gamma) where gamma is the cross-ratio
    |c-a||d-b| / (|c-b||d-a|) and alpha = -1 + 2*gamma +
    2*sqrt(gamma^2 - gamma).  The transform sends a,b,c,d to
    -alpha,-1,1,alpha; the fourth image is implied by cross-ratio
    preservation.
    """
    if not a < b < c < d:
        raise ValueError("need ordered disjoint intervals a < b < c < d")
    gamma = abs(c - a) * abs(d - b) / (abs(c - b) * abs(d - a))
    alpha = -1.0 + 2.0 * gamma + 2.0 * math.sqrt(gamma * (gamma - 1.0))

    if a == -d and b == -c:
        # already symmetric: pure scaling keeps the shift pairs exactly
        # closed under negation
        return MobiusTransform(1.0, 0.0, 0.0, c), d / c, gamma

    def three_point(z1: float, z2: float, z3: float) -> np.ndarray:
        # coefficient matrix of the map sending (z1, z2, z3) -> (0, 1, inf)
        return np.array(
            [[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]],
            dtype=float,
        )

    m1 = three_point(a, b, c)
    m2 = three_point(-alpha, -1.0, 1.0)
    adj = np.array([[m2[1, 1], -m2[0, 1]], [-m2[1, 0], m2[0, 0]]])
    mat = adj @ m1
    mat /= np.max(np.abs(mat))
    return MobiusTransform(mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1]), alpha, gamma


def interval_shifts(J: int, A_set: Interval, B_set: Interval) -> ShiftSchedule:
    """Near-optimal J-step shift schedule for disjoint real intervals.

    The intervals are normalized to [-alpha,-1] u [1,alpha]; the zeros
    and poles of the extremal rational function sit at
    -/+ alpha*dn((2j-1)K(kappa)/(2J), kappa) with kappa =
    sqrt(1 - 1/alpha^2), and are mapped back through the inverse
    normalization.  alpha_j lie in A_set, beta_j in B_set.
    """
    if J < 1:
        raise ValueError("J must be at least 1")
    if not A_set.hi < B_set.lo:
        raise ValueError("A_set must lie strictly left of B_set")
    T, alpha, _ = mobius_normalize(A_set.lo, A_set.hi, B_set.lo, B_set.hi)
    kappa = math.sqrt(1.0 - 1.0 / (alpha * alpha))
    K = elliptic_K(kappa)
    Tinv = T.inverse()
    pairs = []
    for j in range(1, J + 1):
        dnj = jacobi_dn((2 * j - 1) * K / (2 * J), kappa)
        zero = complex(Tinv.apply(-alpha * dnj)).real
        pole = complex(Tinv.apply(alpha * dnj)).real
        pairs.append((complex(zero), complex(pole)))
    return ShiftSchedule(tuple(pairs), "interval-zolotarev")


def interval_mu(a: float, b: float) -> float:
    """Decay base mu_2 = exp(pi^2 / log(4b/a)) for [-b,-a] u [a,b]."""
    if not 0.0 < a < b:
        raise ValueError("need 0 < a < b")
    return math.exp(math.pi**2 / math.log(4.0 * b / a))


def zolotarev_interval_bound(k: int, a: float, b: float) -> float:
    """Upper bound 4 * mu_2^{-k} on Z_k([-b,-a], [a,b])."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return 4.0 * interval_mu(a, b) ** (-k)


def _antipodal(E: Disk, G: Disk) -> bool:
    scale = abs(E.center) + E.radius
    return (
        abs(G.center + E.center) <= 1e-12 * scale
        and abs(G.radius - E.radius) <= 1e-12 * scale
    )


def zk_bound(k: int, A_set: SpectralSet, B_set: SpectralSet) -> float:
    """Upper bound on the Zolotarev number Z_k(A_set, B_set).

    Antipodal disks: exactly mu_1^{-k}.  Intervals: 4*mu_2^{-k} in the
    symmetric case, otherwise 4*exp(-k*pi^2/log(16*gamma)) via the
    cross-ratio gamma.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(A_set, Disk) and isinstance(B_set, Disk):
        if not _antipodal(A_set, B_set):
            raise ValueError("disk pair must be antipodal (G = -E)")
        return zolotarev_disk_bound(k, A_set)
    if isinstance(A_set, Interval) and isinstance(B_set, Interval):
        a, b, c, d = A_set.lo, A_set.hi, B_set.lo, B_set.hi
        if not b < c:
            raise ValueError("A_set must lie strictly left of B_set")
        if a == -d and b == -c:
            return zolotarev_interval_bound(k, c, d)
        _, _, gamma = mobius_normalize(a, b, c, d)
        return 4.0 * math.exp(-k * math.pi**2 / math.log(16.0 * gamma))
    raise ValueError("unsupported spectral-set combination")


def schedule_for(k: int, A_set: SpectralSet, B_set: SpectralSet) -> ShiftSchedule:
    """Shift schedule of length k for the given set pair.

    Antipodal disks get the optimal pair repeated (Smith iteration);
    interval pairs get the elliptic-function schedule.
    """
    if k < 1:
        raise ValueError("schedule length must be at least 1")
    if isinstance(A_set, Disk) and isinstance(B_set, Disk):
        if not _antipodal(A_set, B_set):
            raise ValueError("disk pair must be antipodal (G = -E)")
        pair = disk_shift(A_set)
        return ShiftSchedule(tuple([pair] * k), "disk-optimal")
    if isinstance(A_set, Interval) and isinstance(B_set, Interval):
        return interval_shifts(k, A_set, B_set)
    raise ValueError("unsupported spectral-set combination")


def set_distance(A_set: SpectralSet, B_set: SpectralSet) -> float:
    """Euclidean distance between two disjoint spectral sets."""
    if isinstance(A_set, Disk) and isinstance(B_set, Disk):
        gap = abs(A_set.center - B_set.center) - A_set.radius - B_set.radius
    elif isinstance(A_set, Interval) and isinstance(B_set, Interval):
        gap = max(B_set.lo - A_set.hi, A_set.lo - B_set.hi)
    else:
        raise ValueError("unsupported spectral-set combination")
    if gap <= 0.0:
        raise ValueError("spectral sets overlap")
    return gap


def boundary_points(S: SpectralSet, count: int) -> np.ndarray:
    """Sample points where sup |r| over the set is attained.

    For a disk the sup of a rational function with poles outside is on
    the boundary circle; for an interval the set itself is sampled.
    """
    if count < 2:
        raise ValueError("need at least 2 sample points")
    if isinstance(S, Disk):
        theta = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
        return S.center + S.radius * np.exp(1j * theta)
    return np.linspace(S.lo, S.hi, count).astype(complex)


def sampled_ratio(
    schedule: ShiftSchedule, a_points: np.ndarray, b_points: np.ndarray
) -> float:
    """sup |r_k| on A samples times sup |1/r_k| on B samples.

    r_k(z) = prod_j (z - alpha_j)/(z - beta_j).  This is the quantity
    the Zolotarev bounds control; sampling it validates a schedule.
    """
    a_points = np.asarray(a_points, dtype=complex)
    b_points = np.asarray(b_points, dtype=complex)
    log_ra = np.zeros(a_points.shape, dtype=float)
    log_rb = np.zeros(b_points.shape, dtype=float)
    for alpha, beta in schedule:
        log_ra += np.log(np.abs(a_points - alpha)) - np.log(np.abs(a_points - beta))
        log_rb += np.log(np.abs(b_points - alpha)) - np.log(np.abs(b_points - beta))
    return float(np.exp(np.max(log_ra) - np.min(log_rb)))
