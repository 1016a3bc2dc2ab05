"""Sawtooth-weighted Dirichlet sums, their cosine-series right sides, and
the decay-slope diagnostic.

The identities verified here pair sums of the form

    sum_n w(n) n^-p sdot(n/x),   w in {Lambda, mu, mubar},

with absolutely convergent cosine series.  The normalization of every
right side is 1/(2 pi^2); the widely quoted 1/pi^2 variant is off by a
factor of two, which the closed-form x = 2 oracle for the mu-weighted sum
pins down numerically (only odd n contribute sdot = -1/8 there, and
sum_{n odd} mu(n)/n^2 = 8/pi^2, so the left side is exactly -1/pi^2).
Report builders evaluate both constants and record which one matches.

The decay explorer fits log|sum| against log x for the mubar-weighted
sum; a slope near -1 is the behavior consistent with the Riemann
Hypothesis, while slope <= -1/2 is guaranteed unconditionally.  No finite
computation can settle the asymptotic criterion, so the fit is a
diagnostic only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import ArithmeticTable
from .bernpoly import sdot_array
from .explicit import TruncatedSum

__all__ = [
    "SlopeFit",
    "InsufficientDataError",
    "lhs_weighted_sdot",
    "rhs_th2_log",
    "rhs_th2_mu",
    "rhs_th4_upsilon",
    "rh_slope",
    "rh_decay_profile",
    "RH_GRID_DEFAULT",
]

TWO_PI_SQ = 2.0 * math.pi**2
SDOT_MAX = 0.125  # exact: max |({y}^2 - {y})/2| is 1/8 at half-integers

_SUPPORTED = {("lambda", 2.0), ("mu", 2.0), ("mu", 1.5), ("mubar", 2.0)}


class InsufficientDataError(ValueError):
    """Too few usable points for a slope fit."""


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares line through (log x, log |value|).

    delta_prime is the decay exponent implied by value ~ x^(-delta'-1).
    dropped counts points discarded for sitting at or below 3x their
    noise floor.
    """

    points: tuple[tuple[float, float], ...]
    slope: float
    intercept: float
    r_squared: float
    dropped: int

    @property
    def delta_prime(self) -> float:
        return -self.slope - 1.0


def lhs_weighted_sdot(
    t: ArithmeticTable, weight: str, p: float, x: float, N: int
) -> TruncatedSum:
    """sum_{n<=N} w(n) n^-p sdot(n/x), compensated, ascending n.

    Tail bounds use |sdot| <= 1/8 against a weight-specific majorant:
    log n for Lambda, 1 for mu at p = 2, and the divisor-sqrt family
    closed form 2 (log N + 2)/sqrt(N) for mubar and for p = 3/2
    (it majorizes both sum_{n>N} sigma_{1/2}(n)/n^2, which a split of the
    divisor sum at d = N bounds by 8/sqrt(N), and sum_{n>N} n^-3/2).
    """
    p = float(p)
    if (weight, p) not in _SUPPORTED:
        raise ValueError(f"unsupported (weight, p) pair: ({weight!r}, {p})")
    if not x > 0:
        raise ValueError("x must be > 0")
    if not 1 <= N <= t.n_max:
        raise ValueError(f"N must be in 1..{t.n_max}")

    if weight == "lambda":
        idx = t.prime_powers
        idx = idx[idx <= N]
        w = t.lam[idx]
        tail = SDOT_MAX * (math.log(N) + 1.0) / N
        note = "log-integral majorant"
    elif weight == "mu":
        idx = np.nonzero(t.mu[: N + 1])[0]
        w = t.mu[idx].astype(np.float64)
        if p == 2.0:
            tail = SDOT_MAX / N
            note = "unit majorant"
        else:
            tail = SDOT_MAX * 2.0 * (math.log(N) + 2.0) / math.sqrt(N)
            note = "divisor-sqrt family majorant, p = 3/2"
    else:
        idx = np.arange(1, N + 1)
        w = t.mubar_arr[1 : N + 1]
        tail = SDOT_MAX * 2.0 * (math.log(N) + 2.0) / math.sqrt(N)
        note = "divisor sqrt-sum majorant"

    nf = idx.astype(np.float64)
    vals = w * nf ** (-p) * sdot_array(nf / x)
    return TruncatedSum(math.fsum(vals.tolist()), len(vals), tail, note=note)


def rhs_th2_log(x: float, N: int) -> TruncatedSum:
    """(1/(2 pi^2)) sum_{2<=n<=N} log(n) n^-2 (cos(2 pi n/x) - 1)."""
    if not x > 0:
        raise ValueError("x must be > 0")
    if N < 1:
        raise ValueError("N must be >= 1")
    if N < 2:
        return TruncatedSum(0.0, 0, (math.log(2.0) + 1.0) / (math.pi**2), note="empty sum")
    n = np.arange(2, N + 1, dtype=np.float64)
    vals = np.log(n) / n**2 * (np.cos(2.0 * np.pi * n / x) - 1.0)
    value = math.fsum(vals.tolist()) / TWO_PI_SQ
    tail = (math.log(N) + 1.0) / (N * math.pi**2)
    return TruncatedSum(value, len(vals), tail, note="log-integral majorant, |cos-1| <= 2")


def rhs_th2_mu(x: float) -> float:
    """(1/(2 pi^2)) (cos(2 pi/x) - 1), the closed-form right side."""
    if not x > 0:
        raise ValueError("x must be > 0")
    return (math.cos(2.0 * math.pi / x) - 1.0) / TWO_PI_SQ


def rhs_th4_upsilon(t: ArithmeticTable, x: float, N: int) -> TruncatedSum:
    """(1/(2 pi^2)) sum_{n<=N} upsilon(n) n^-2 (cos(2 pi n/x) - 1).

    |upsilon(n)| <= sqrt(n) makes both sides absolutely convergent, so the
    identity is checked unconditionally.
    """
    if not x > 0:
        raise ValueError("x must be > 0")
    if not 1 <= N <= t.n_max:
        raise ValueError(f"N must be in 1..{t.n_max}")
    n = np.arange(1, N + 1, dtype=np.float64)
    vals = t.upsilon_arr[1 : N + 1] / n**2 * (np.cos(2.0 * np.pi * n / x) - 1.0)
    value = math.fsum(vals.tolist()) / TWO_PI_SQ
    tail = (2.0 / math.sqrt(N)) * (1.0 + math.log(N)) / math.pi**2
    return TruncatedSum(value, len(vals), tail, note="sqrt majorant tail")


def rh_slope(values: list[tuple[float, float, float]]) -> SlopeFit:
    """Least-squares slope of log|value| against log x.

    Input triples are (x, value, noise_floor); points with
    |value| <= 3 * noise_floor are dropped (they carry no signal), and
    the fit refuses to run on fewer than 5 survivors or when more than
    half of the points drop.
    """
    kept = [(x, v) for x, v, floor in values if abs(v) > 3.0 * floor]
    dropped = len(values) - len(kept)
    if len(kept) < 5:
        raise InsufficientDataError(
            f"only {len(kept)} of {len(values)} points above the noise floor"
        )
    if dropped > len(values) / 2.0:
        raise InsufficientDataError(
            f"{dropped} of {len(values)} points dropped; fit would be dominated by noise"
        )
    lx = np.array([math.log(x) for x, _ in kept])
    lv = np.array([math.log(abs(v)) for _, v in kept])
    slope, intercept = np.polyfit(lx, lv, 1)
    fitted = slope * lx + intercept
    ss_res = float(np.sum((lv - fitted) ** 2))
    ss_tot = float(np.sum((lv - lv.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return SlopeFit(
        points=tuple(zip(lx.tolist(), lv.tolist())),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        dropped=dropped,
    )


RH_GRID_DEFAULT = dict(x_min=10.0, x_max=100.0, points=20, N=10**7)


def rh_decay_profile(
    t: ArithmeticTable,
    x_min: float = 10.0,
    x_max: float = 100.0,
    points: int = 20,
    N: int = 10**7,
) -> list[tuple[float, float, float]]:
    """mubar-weighted sums on a log-spaced grid, with their noise floors."""
    out = []
    for x in np.geomspace(x_min, x_max, points):
        ts = lhs_weighted_sdot(t, "mubar", 2.0, float(x), N)
        out.append((float(x), ts.value, ts.tail_bound))
    return out
