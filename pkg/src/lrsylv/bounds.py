"""Explicit singular-value and epsilon-rank bounds for Sylvester solutions.

Each calculator returns a BoundCurve of relative bounds on
sigma_{t+1}(X)/||X||_2.  The decay rate is governed by mu =
min(mu_F, mu_set), where mu_F is the decay base of the right-hand
side's singular values and mu_set the Zolotarev base of the spectral
geometry; the level ell = floor(log max(mu_F, mu_set)/log mu) sets the
admissible indices t = ell*k(k+1)/2.  Between admissible indices the
bound is served at the largest admissible index below, which is valid
because singular values are nonincreasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .spectra import Disk, Interval, disk_mu, interval_mu

Geometry = Disk | Interval | tuple[Interval, Interval]


@dataclass(frozen=True)
class BoundParams:
    """Inputs shared by the bound calculators.

    geometry is one of: a Disk E (the pair is (E, -E)); an Interval
    (a, b) with 0 < a < b standing for the symmetric pair
    [-b,-a] u [a,b]; or an ordered pair of Intervals ([a,b], [c,d])
    with a < b < c < d.  K and mu_F describe the right-hand side's
    singular-value decay sigma_{j+1}(F) <= K * mu_F^{-j} * ||F||_2;
    mu_F = None means "as fast as the geometry's own base".
    """

    geometry: Geometry
    n: int
    K: float = 1.0
    mu_F: float | None = None

    def __post_init__(self) -> None:
        if self.K < 1.0:
            raise ValueError("K must be at least 1")
        if self.mu_F is not None and not self.mu_F > 1.0:
            raise ValueError("mu_F must exceed 1")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        g = self.geometry
        if isinstance(g, Disk):
            if abs(g.center) <= g.radius:
                raise ValueError("disk must satisfy |center| > radius")
        elif isinstance(g, Interval):
            if not 0.0 < g.lo < g.hi:
                raise ValueError("symmetric interval geometry needs 0 < a < b")
        elif (
            isinstance(g, tuple)
            and len(g) == 2
            and all(isinstance(x, Interval) for x in g)
        ):
            if not g[0].hi < g[1].lo:
                raise ValueError("split intervals must be ordered and disjoint")
        else:
            raise ValueError("unrecognized geometry")

    def set_mu(self) -> float:
        g = self.geometry
        if isinstance(g, Disk):
            return disk_mu(g)
        if isinstance(g, Interval):
            return interval_mu(g.lo, g.hi)
        gamma = cross_ratio(g[0].lo, g[0].hi, g[1].lo, g[1].hi)
        return math.exp(math.pi**2 / math.log(16.0 * gamma))

    def level(self) -> tuple[float, int]:
        """(mu, ell): effective decay base and grouping level."""
        mu_set = self.set_mu()
        mu_F = mu_set if self.mu_F is None else self.mu_F
        if math.isinf(mu_set) or math.isinf(mu_F):
            return max(mu_set, mu_F), 1
        mu = min(mu_F, mu_set)
        ell = max(1, math.floor(math.log(max(mu_F, mu_set)) / math.log(mu)))
        return mu, ell


@dataclass(frozen=True)
class BoundCurve:
    """Relative bound values keyed by singular-value index t."""

    entries: tuple[tuple[int, float], ...]
    method: str

    def __post_init__(self) -> None:
        ts = [t for t, _ in self.entries]
        if any(x >= y for x, y in zip(ts, ts[1:])):
            raise ValueError("t indices must be strictly increasing")
        if any(not v >= 0.0 for _, v in self.entries):
            # zero is allowed: degenerate geometry (an inf decay base)
            # legitimately bounds every trailing singular value by 0
            raise ValueError("bound values must be nonnegative")

    def values(self) -> list[float]:
        return [v for _, v in self.entries]


def cross_ratio(a: float, b: float, c: float, d: float) -> float:
    """|c-a||d-b| / (|c-b||d-a|) for ordered intervals [a,b], [c,d]."""
    if not a < b < c < d:
        raise ValueError("need ordered disjoint intervals a < b < c < d")
    return abs(c - a) * abs(d - b) / (abs(c - b) * abs(d - a))


def horn_bound(f_norm: float, z0: float, eta: float) -> float:
    """||X||_2 <= ||F||_2 / (2(z0 - eta)) for the antipodal-disk pair."""
    if not 0.0 < eta < z0:
        raise ValueError("need 0 < eta < z0")
    if f_norm < 0.0:
        raise ValueError("f_norm must be nonnegative")
    return f_norm / (2.0 * (z0 - eta))


def _largest_k(t: int, ell: int) -> int:
    """Largest k >= 0 with ell*k*(k+1)/2 <= t."""
    k = int((math.sqrt(1.0 + 8.0 * t / ell) - 1.0) / 2.0)
    while ell * (k + 1) * (k + 2) // 2 <= t:
        k += 1
    while k > 0 and ell * k * (k + 1) // 2 > t:
        k -= 1
    return k


def _curve(
    params: BoundParams,
    t_values: Iterable[int],
    prefactor: float,
    root_coeff: float,
    method: str,
) -> BoundCurve:
    mu, ell = params.level()
    entries = []
    held = False
    for t in t_values:
        t = int(t)
        if not 0 < t < params.n:
            raise ValueError(f"index t={t} outside 1 .. n-1")
        lev = ell
        k = _largest_k(t, ell)
        if k == 0:
            # below the first level-ell index: the plain triangular grid
            # still applies (it assumes less of the rhs decay)
            lev = 1
            k = _largest_k(t, 1)
        t_adm = lev * k * (k + 1) // 2
        held = held or (t_adm != t)
        decay = 0.0 if (math.isinf(mu) and k > 0) else float(mu) ** (-lev * k)
        value = params.K * prefactor * (root_coeff * math.sqrt(t_adm) + 1.0) * decay
        entries.append((t, value))
    if held:
        method = method + ";held-at-admissible"
    return BoundCurve(tuple(entries), method)


def bound_disk(params: BoundParams, t_values: Iterable[int]) -> BoundCurve:
    """sigma_{t+1}(X)/||X||_2 <= K*(z0+eta)/(z0-eta)*(1.5*sqrt(t)+1)*mu^{-ell*k}
    at t = ell*k(k+1)/2, for the antipodal-disk pair (E, -E)."""
    if not isinstance(params.geometry, Disk):
        raise ValueError("bound_disk needs disk geometry")
    E = params.geometry
    z0, eta = abs(E.center), E.radius
    return _curve(params, t_values, (z0 + eta) / (z0 - eta), 1.5, "disk")


def bound_interval(params: BoundParams, t_values: Iterable[int]) -> BoundCurve:
    """sigma_{t+1}(X)/||X||_2 <= K*(b/a)*(6*sqrt(t)+1)*mu^{-ell*k}
    at t = ell*k(k+1)/2, for the symmetric pair [-b,-a] u [a,b]."""
    if not isinstance(params.geometry, Interval):
        raise ValueError("bound_interval needs symmetric interval geometry")
    iv = params.geometry
    return _curve(params, t_values, iv.hi / iv.lo, 6.0, "interval")


def bound_split_intervals(
    params: BoundParams, t_values: Iterable[int]
) -> BoundCurve:
    """Interval bound for a general ordered pair [a,b], [c,d], with rate
    exp(pi^2/log(16*gamma)) from the cross-ratio gamma."""
    g = params.geometry
    if not (isinstance(g, tuple) and len(g) == 2):
        raise ValueError("bound_split_intervals needs an interval pair")
    a, b = g[0].lo, g[0].hi
    c, d = g[1].lo, g[1].hi
    prefactor = (max(abs(a), abs(b)) + max(abs(c), abs(d))) / abs(c - b)
    return _curve(params, t_values, prefactor, 6.0, "split-intervals")


def eps_rank_bound(epsilon: float, n: int, z0: float, eta: float) -> int:
    """Upper bound on the epsilon-rank of X for the disk pair.

    k* = ceil(log((z0+eta)(1.5*sqrt(n)+1) / ((z0-eta)*epsilon)) / log mu_1)
    shifts suffice, giving rank at most k*(k*+1)/2.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 0.0 < eta < z0:
        raise ValueError("need 0 < eta < z0")
    if n < 1:
        raise ValueError("n must be positive")
    mu1 = disk_mu(Disk(z0, eta))
    if math.isinf(mu1):
        return 1
    arg = (z0 + eta) * (1.5 * math.sqrt(n) + 1.0) / ((z0 - eta) * epsilon)
    k_star = math.ceil(math.log(arg) / math.log(mu1))
    return k_star * (k_star + 1) // 2


def bound_c3(
    t_values: Iterable[int], z0: float, eta: float, n: int, K1: float = 1.0
) -> BoundCurve:
    """Decay factors K1*mu_1^{-k} for the cubed-Cauchy matrix at the
    quartic indices t = k(k+1)(k+2)(k+3)/24.

    The constant in front is only known to grow like sqrt(n); K1 is an
    input multiplier with default 1, and consumers compare against the
    measured spectrum with explicit sqrt(n) slack.
    """
    if not 0.0 < eta < z0:
        raise ValueError("need 0 < eta < z0")
    mu1 = disk_mu(Disk(z0, eta))
    entries = []
    held = False
    for t in t_values:
        t = int(t)
        if not 0 < t < n:
            raise ValueError(f"index t={t} outside 1 .. n-1")
        k = 0
        while (k + 1) * (k + 2) * (k + 3) * (k + 4) // 24 <= t:
            k += 1
        held = held or (k * (k + 1) * (k + 2) * (k + 3) // 24 != t)
        entries.append((t, K1 * mu1 ** (-k)))
    method = "cauchy-cube" + (";held-at-admissible" if held else "")
    return BoundCurve(tuple(entries), method)
