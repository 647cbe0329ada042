"""Reference laws for soliton statistics of Bernoulli(p) configurations, and
the goodness-of-fit helpers used to compare simulations against them.

Regimes: ``p < 1/2`` (longest soliton of order log n, Gumbel-like),
``p = 1/2`` (order sqrt(n), ranked maxima of reflected Brownian motion) and
``p > 1/2`` (one soliton of linear size, Gaussian fluctuations).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special
from scipy import stats as sps

from .errors import DomainError, RegimeError

__all__ = [
    "hit_zero_before",
    "mu_i_theoretical",
    "mu_tail",
    "RowCLT",
    "row_clt_reference",
    "SubcriticalReference",
    "subcritical_reference",
    "csaki_hu_tail",
    "critical_cdf",
    "sup_abs_bm_cdf",
    "SupercriticalReference",
    "supercritical_reference",
    "ks_distance",
    "z_score",
    "standardize",
    "chi_square_homogeneity",
]


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")


def hit_zero_before(N: int, p: float) -> float:
    """Probability that a walk from 1 with up-probability p reaches 0 before N."""
    _check_p(p)
    if N <= 1:
        return 0.0
    if p == 0.5:
        return 1.0 - 1.0 / N
    theta = (1.0 - p) / p
    if theta > 1.0:
        # divide through by theta^N to stay finite for large N
        return (1.0 - theta ** (1 - N)) / (1.0 - theta ** (-N))
    return (theta**N - theta) / (theta**N - 1.0)


def mu_i_theoretical(i: int, p: float) -> float:
    """Probability that the excursion of the walk started at 0 has height exactly i."""
    if i < 1:
        raise DomainError(f"height must be >= 1, got {i}")
    return p * (hit_zero_before(i + 1, p) - hit_zero_before(i, p))


def mu_tail(i: int, p: float) -> float:
    """Sum of ``mu_k`` over ``k > i``."""
    _check_p(p)
    ever = 1.0 if p <= 0.5 else (1.0 - p) / p
    return p * (ever - hit_zero_before(i + 1, p))


class RowCLT(NamedTuple):
    mean: float
    variance: float
    exact_variance: float
    exact_variance_rho1: float


def row_clt_reference(n: int, p: float) -> RowCLT:
    """Asymptotic mean and variance of the number of solitons among n Bernoulli(p) boxes.

    ``exact_variance`` is the finite-n variance of the count of "1 0" pairs in
    boxes 1..n.  The soliton count adds one more for a ball in box n, which
    shifts the variance by ``p(1-p)(1-2p)``; ``exact_variance_rho1`` includes it.
    """
    _check_p(p)
    q = p * (1.0 - p)
    pairs = (n - 1) * q - (3 * n - 5) * q * q
    return RowCLT(n * q, n * q * (1.0 - 3.0 * q), pairs, pairs + q * (1.0 - 2.0 * p))


@dataclass(frozen=True)
class SubcriticalReference:
    n: int
    p: float

    @property
    def theta(self) -> float:
        return (1.0 - self.p) / self.p

    @property
    def sigma(self) -> float:
        return (1.0 - 2.0 * self.p) / (1.0 - self.p)

    @property
    def center(self) -> float:
        p = self.p
        return math.log((1.0 - 2.0 * p) ** 2 * self.n / (1.0 - p)) / math.log(self.theta)

    def lower(self, x):
        return np.exp(-self.theta ** (-np.asarray(x, dtype=float)))

    def upper(self, x):
        return np.exp(-self.theta ** (-(np.asarray(x, dtype=float) + 1.0)))

    def upper_j(self, x, j: int):
        """Upper envelope for the CDF of the j-th longest soliton minus the center."""
        x = np.asarray(x, dtype=float)
        s = sum(self.theta ** (-k * x) / math.factorial(k) for k in range(j))
        return self.upper(x) * s

    def excursion_height_cdf(self, x):
        """CDF of the height of one excursion of the Harris walk."""
        x = np.asarray(x, dtype=float)
        k = np.floor(x)
        out = 1.0 - (1.0 - 2.0 * self.p) / (self.theta ** (k + 1.0) - 1.0)
        return np.where(x < 0, 0.0, out)


def subcritical_reference(n: int, p: float) -> SubcriticalReference:
    _check_p(p)
    if p >= 0.5:
        raise RegimeError(f"subcritical laws need p < 1/2, got {p}")
    return SubcriticalReference(int(n), float(p))


def csaki_hu_tail(j: int, y, tol: float = 1e-12, max_terms: int = 1_000_000):
    """``P(h_j >= y)`` for the j-th largest excursion height of reflected BM on [0, 1].

    Alternating series, summed until the next term is below ``tol`` and
    clamped to [0, 1].  Accepts scalars or arrays.
    """
    if j < 1:
        raise DomainError(f"rank must be >= 1, got {j}")
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr <= 0):
        raise DomainError("level must be > 0")
    total = np.zeros_like(y_arr)
    for k in range(max_terms):
        # Q(z) = 1 - Phi(z) = erfc(z / sqrt 2) / 2
        term = special.comb(k + j - 1, k) * 0.5 * special.erfc((2 * k + 2 * j - 1) * y_arr / math.sqrt(2.0))
        total = total + (-1) ** k * term
        if np.all(2.0 ** (j + 1) * term < tol):
            break
    out = np.clip(2.0 ** (j + 1) * total, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def critical_cdf(y, j: int = 1):
    """CDF of the j-th longest soliton over sqrt(n) at p = 1/2, as n grows."""
    y_arr = np.asarray(y, dtype=float)
    out = np.zeros_like(y_arr)
    pos = y_arr > 0
    if np.any(pos):
        out[pos] = 1.0 - np.asarray(csaki_hu_tail(j, y_arr[pos]))
    return float(out) if out.ndim == 0 else out


def sup_abs_bm_cdf(y, tol: float = 1e-15):
    """``P(sup_{[0,1]} |B| < y)`` by the theta-function series, an independent check."""
    y_arr = np.asarray(y, dtype=float)
    total = np.zeros_like(y_arr)
    for k in range(10_000):
        term = np.exp(-(math.pi**2) * (2 * k + 1) ** 2 / (8.0 * y_arr**2)) / (2 * k + 1)
        total = total + (-1) ** k * term
        if np.all(term < tol):
            break
    out = np.clip(4.0 / math.pi * total, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SupercriticalReference:
    n: int
    p: float

    @property
    def mean(self) -> float:
        return (2.0 * self.p - 1.0) * self.n

    @property
    def sd(self) -> float:
        return 2.0 * math.sqrt(self.p * (1.0 - self.p) * self.n)

    @property
    def mu(self) -> float:
        return self.p / (1.0 - self.p)

    def second_threshold(self, eps: float = 0.5) -> float:
        """Level that the second longest soliton exceeds only rarely."""
        return (eps + 5.0 / math.log(self.mu)) * math.log(self.n)


def supercritical_reference(n: int, p: float) -> SupercriticalReference:
    _check_p(p)
    if p <= 0.5:
        raise RegimeError(f"supercritical laws need p > 1/2, got {p}")
    return SupercriticalReference(int(n), float(p))


# -- goodness of fit ---------------------------------------------------------

def ks_distance(samples, cdf) -> float:
    """``sup_x |F_n(x) - F(x)|`` for a vectorised CDF ``cdf``.

    Both one-sided limits are checked at every sample value, so step CDFs
    are handled exactly as well as continuous ones.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise DomainError("ks_distance needs at least one sample")
    vals, first = np.unique(x, return_index=True)
    n = x.size
    last = np.append(first[1:], n)
    emp_right = last / n
    emp_left = first / n
    f_right = np.asarray(cdf(vals), dtype=float)
    f_left = np.asarray(cdf(np.nextafter(vals, -np.inf)), dtype=float)
    return float(max(np.max(np.abs(emp_right - f_right)), np.max(np.abs(emp_left - f_left))))


def standardize(samples, mean: float, sd: float) -> np.ndarray:
    if sd <= 0:
        raise DomainError("sd must be positive")
    return (np.asarray(samples, dtype=float) - mean) / sd


def z_score(samples, mean: float, sd: float) -> float:
    """Sample mean minus ``mean``, in units of ``sd``."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise DomainError("z_score needs at least one sample")
    return float(standardize(x, mean, sd).mean())


def chi_square_homogeneity(a, b, min_expected: float = 5.0) -> tuple[float, int, float]:
    """Chi-square test that two integer samples share a distribution.

    Sparse tail bins are pooled from both ends until every expected count
    reaches ``min_expected``.  Returns ``(statistic, dof, p_value)``.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise DomainError("both samples must be non-empty")
    lo = min(a.min(), b.min())
    size = max(a.max(), b.max()) - lo + 1
    table = np.vstack((np.bincount(a - lo, minlength=size), np.bincount(b - lo, minlength=size)))
    bins = [table[:, i].astype(float) for i in range(size)]
    share = min(a.size, b.size) / (a.size + b.size)

    def small(col):
        return col.sum() * share < min_expected

    while len(bins) > 1 and small(bins[0]):
        head = bins.pop(0)
        bins[0] = bins[0] + head
    while len(bins) > 1 and small(bins[-1]):
        tail = bins.pop()
        bins[-1] = bins[-1] + tail
    merged: list[np.ndarray] = []
    for col in bins:
        if merged and small(merged[-1]):
            merged[-1] = merged[-1] + col
        else:
            merged.append(col)
    if len(merged) > 1 and small(merged[-1]):
        merged[-2] = merged[-2] + merged.pop()
    if len(merged) < 2:
        return 0.0, 0, 1.0
    res = sps.chi2_contingency(np.column_stack(merged), correction=False)
    return float(res.statistic), int(res.dof), float(res.pvalue)
