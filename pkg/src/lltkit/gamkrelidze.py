"""Gamkrelidze-style smoothness statistics for integer-valued sums.

For an integer-valued sum S_n and centering/scaling parameters ``a_n`` and
``b_n > 0``, define the cell integrals and pointwise discrepancies

    ell_k = Int_{(k-1-a_n)/sqrt(b_n)}^{(k-a_n)/sqrt(b_n)} phi(t) dt,
    d_k   = P{S_n = k} - ell_k,

the interval discrepancy ``rho_n = sup over intervals |sum_{k=p}^{q} d_k|``,
and the smoothness statistic ``M = b_n * sup_k |P{S_n = k+1} - P{S_n = k}|``.
With ``R = M + sqrt(2/(e pi))`` the pointwise discrepancies obey

    sqrt(b_n) * |d_k| <= 2 sqrt(R) * sqrt(rho_n)              for every k,

and consequently

    |sqrt(b_n) P{S_n = k} - phi((k - a_n)/sqrt(b_n))|
        <= 2 sqrt(R) sqrt(rho_n) + 1/sqrt(2 pi e b_n).

Both inequalities hold for ANY choice of (a_n, b_n) feeding the two sides
consistently.  The statistic M itself is bounded, without touching the exact
law, by a three-term expression built from Bernoulli extraction (see
:func:`smoothness_via_extraction`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import ndtr

from .bounds import ConstantsRegistry, DEFAULT_CONSTANTS, _check_thetas
from .convolve import SumLaw
from .errors import LatticeError
from .lattice import LatticePmf

#: Gaussian cell-integral tails below this are outside the scan window
_TAIL_EPS = 1e-16


def _integer_masses(sum_law: SumLaw) -> dict[int, float]:
    """Masses re-indexed so the law is supported on integers (requires D = 1)."""
    p = sum_law.pmf
    if abs(p.D - 1.0) > 1e-12:
        raise LatticeError(f"integer-valued law required (D = 1 after re-indexing), got D = {p.D}")
    shift = round(p.v0)
    if abs(p.v0 - shift) > 1e-9:
        raise LatticeError(f"lattice offset {p.v0} is not an integer; re-index the law first")
    return {k + shift: w for k, w in p.probs.items()}


def smoothness_stat(sum_law: SumLaw, b_n: float) -> float:
    """``b_n * sup_k |P{S_n = k+1} - P{S_n = k}|`` including boundary gaps."""
    if not (b_n > 0):
        raise LatticeError(f"need b_n > 0, got {b_n}")
    f = _integer_masses(sum_law)
    ks = set(f) | {k - 1 for k in f}
    gap = max(abs(f.get(k + 1, 0.0) - f.get(k, 0.0)) for k in ks)
    return b_n * gap


@dataclass
class SmoothnessReport:
    """All interval-discrepancy data for one (law, a_n, b_n) triple.

    ``d``, ``ell`` and ``p`` are dense arrays over the integer window
    ``k_lo..k_lo + len - 1`` covering the support plus a Gaussian tail margin;
    ``rho`` is the exact sup over intervals of ``|sum d_k|``.
    """

    M: float
    R: float
    rho: float
    a_n: float
    b_n: float
    k_lo: int
    d: np.ndarray
    ell: np.ndarray
    p: np.ndarray

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_lo, self.k_lo + len(self.d))

    def d_table(self) -> dict[int, float]:
        return {int(k): float(v) for k, v in zip(self.ks, self.d)}

    def to_json_dict(self) -> dict:
        return {
            "M": self.M,
            "R": self.R,
            "rho": self.rho,
            "a_n": self.a_n,
            "b_n": self.b_n,
            "d_table": [[int(k), float(v)] for k, v in zip(self.ks, self.d)],
        }


def interval_discrepancy(sum_law: SumLaw, a_n: float, b_n: float) -> SmoothnessReport:
    """Compute the d-table and the exact interval discrepancy rho_n.

    The sup over intervals of a sum equals (max - min) over prefix sums, so
    rho_n comes from one cumulative pass over a window outside of which both
    the pmf and the Gaussian cell integrals are below 1e-16.
    """
    if not (b_n > 0):
        raise LatticeError(f"need b_n > 0, got {b_n}")
    f = _integer_masses(sum_law)
    sd = math.sqrt(b_n)
    margin = 9.5  # ndtr(-9.5) ~ 1e-21 < _TAIL_EPS
    k_lo = min(min(f), math.floor(a_n - margin * sd))
    k_hi = max(max(f), math.ceil(a_n + margin * sd))
    ks = np.arange(k_lo, k_hi + 1)
    p = np.zeros(len(ks))
    for k, w in f.items():
        p[k - k_lo] = w
    edges = ndtr((np.arange(k_lo - 1, k_hi + 1) - a_n) / sd)
    ell = np.diff(edges)
    d = p - ell
    prefix = np.concatenate([[0.0], np.cumsum(d)])
    rho = float(prefix.max() - prefix.min())
    m_stat = smoothness_stat(sum_law, b_n)
    return SmoothnessReport(
        M=m_stat,
        R=m_stat + math.sqrt(2.0 / (math.e * math.pi)),
        rho=rho,
        a_n=a_n,
        b_n=b_n,
        k_lo=int(k_lo),
        d=d,
        ell=ell,
        p=p,
    )


@dataclass
class PointwiseCheck:
    """Outcome of verifying both pointwise inequalities on a report."""

    pointwise_ok: bool
    gaussian_ok: bool
    pointwise_max_lhs: float
    pointwise_bound: float
    gaussian_max_lhs: float
    gaussian_bound: float
    failures: list[int]

    @property
    def all_pass(self) -> bool:
        return self.pointwise_ok and self.gaussian_ok

    @property
    def max_slack(self) -> float:
        return max(
            self.pointwise_max_lhs - self.pointwise_bound,
            self.gaussian_max_lhs - self.gaussian_bound,
        )

    def to_json_dict(self) -> dict:
        return {
            "pointwise_ok": self.pointwise_ok,
            "gaussian_ok": self.gaussian_ok,
            "pointwise_max_lhs": self.pointwise_max_lhs,
            "pointwise_bound": self.pointwise_bound,
            "gaussian_max_lhs": self.gaussian_max_lhs,
            "gaussian_bound": self.gaussian_bound,
            "failures": list(self.failures),
        }


def effective_pointwise_bound(report: SmoothnessReport) -> PointwiseCheck:
    """Check, at every k of the window, that

    (i)  sqrt(b_n) |d_k| <= 2 sqrt(R) sqrt(rho_n), and
    (ii) |sqrt(b_n) P{S_n=k} - (1/sqrt(2 pi)) e^{-(k-a_n)^2/(2 b_n)}|
             <= 2 sqrt(R) sqrt(rho_n) + 1/sqrt(2 pi e b_n).
    """
    sb = math.sqrt(report.b_n)
    bound1 = 2.0 * math.sqrt(report.R) * math.sqrt(report.rho)
    bound2 = bound1 + 1.0 / math.sqrt(2.0 * math.pi * math.e * report.b_n)
    ks = report.ks
    lhs1 = sb * np.abs(report.d)
    gauss = np.exp(-((ks - report.a_n) ** 2) / (2.0 * report.b_n)) / math.sqrt(2.0 * math.pi)
    lhs2 = np.abs(sb * report.p - gauss)
    ok1 = lhs1 <= bound1 + 1e-15
    ok2 = lhs2 <= bound2 + 1e-15
    failures = sorted(int(k) for k in ks[~(ok1 & ok2)])
    return PointwiseCheck(
        pointwise_ok=bool(ok1.all()),
        gaussian_ok=bool(ok2.all()),
        pointwise_max_lhs=float(lhs1.max()),
        pointwise_bound=bound1,
        gaussian_max_lhs=float(lhs2.max()),
        gaussian_bound=bound2,
        failures=failures,
    )


@dataclass(frozen=True)
class ExtractionSmoothnessBound:
    """Effective upper bound for M with its three terms and the b/theta ratio."""

    value: float
    terms: tuple[float, float, float]
    b_over_theta: float

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "terms": list(self.terms),
            "b_over_theta": self.b_over_theta,
        }


def smoothness_via_extraction(
    summands: Sequence[LatticePmf],
    thetas: Sequence[float],
    h: float,
    b_n: float,
    constants: ConstantsRegistry = DEFAULT_CONSTANTS,
) -> ExtractionSmoothnessBound:
    """Bound ``M = b_n sup_k |P{S_n=k} - P{S_n=k+1}|`` without the exact law:

        M <= 2 b_n e^{-h^2 Theta_n / (2 (1 + h/3))}
             + 2 c0 b_n / ((1-h)^{3/2} Theta_n^{3/2})
             + 2 b_n / (sqrt(pi e) (1-h) Theta_n)

    for any 0 < h < 1.  The reported ``b_over_theta`` ratio is what keeps the
    bound O(1) when b_n grows proportionally to Theta_n.
    """
    if not (0.0 < h < 1.0):
        raise LatticeError(f"need 0 < h < 1, got {h}")
    if not (b_n > 0):
        raise LatticeError(f"need b_n > 0, got {b_n}")
    theta_n = _check_thetas(summands, thetas)
    t1 = 2.0 * b_n * math.exp(-(h * h) * theta_n / (2.0 * (1.0 + h / 3.0)))
    t2 = 2.0 * constants.c0 * b_n / ((1.0 - h) ** 1.5 * theta_n**1.5)
    t3 = 2.0 * b_n / (math.sqrt(math.pi * math.e) * (1.0 - h) * theta_n)
    return ExtractionSmoothnessBound(
        value=t1 + t2 + t3, terms=(t1, t2, t3), b_over_theta=b_n / theta_n
    )
