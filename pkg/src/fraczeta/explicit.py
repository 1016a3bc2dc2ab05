"""Assembly and verification of the prime-power series over I_k against zeros.

The left side sum_{n>x} Lambda(n) n^-(k+1) I_k(n/x) is summed directly over
prime powers with a rigorous log-integral tail bound.  The right side is
rebuilt from the contour integrand

    G_k(s) = x^(s-1-k) H_k(1-s) (-zeta'(s)/zeta(s)) / (k+1-s),

as (a) numerical residues on small circles around s = 1..k, (b) the sum
over nontrivial zero pairs, and (c) the sum over trivial zeros.  The
explicit minus sign on zeta'/zeta implements sum Lambda(n) n^-w =
-zeta'(w)/zeta(w); the zero and trivial sums therefore carry a global
sign of -1, and the trivial-zero exponent is x^(-2j-1-k) (the residue of
G_k at s = -2j).  Both choices are treated as adjudicated output: the
harness can flip the sign and compare against the printed main terms to
report which variant the directly summed left side supports.

Contour quadrature on a circle is correct for any pole order (simple,
double, or none), so no pole-structure assumption enters the right side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import ArithmeticTable
from .bernpoly import ik_envelope, integral_ik_array
from .zeta import (
    EULER_GAMMA,
    ZeroTable,
    _hk_closed_batch,
    _neg_zld_batch,
    Hk_closed,
)

__all__ = [
    "TruncatedSum",
    "ExplicitFormulaRHS",
    "GeometryError",
    "lhs_theorem1",
    "residue_at",
    "zero_sum",
    "zero_pair_terms",
    "trivial_sum",
    "rhs_theorem1",
    "printed_Pk",
]

RESIDUE_NODES = 64
# Per-residue quadrature allotment in the error budget.  The 64-node
# trapezoid on these circles is spectrally accurate; the allotment is
# dominated by zeta evaluation noise and cross-checked by the
# radius-independence invariant.
RESIDUE_QUAD_BOUND = 1e-10


class GeometryError(ValueError):
    """Residue circle touches another singularity."""


@dataclass(frozen=True)
class TruncatedSum:
    """A partial series value with a rigorous bound on the omitted tail."""

    value: float
    terms_used: int
    tail_bound: float
    note: str = ""

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("series value must be finite")
        if not (math.isfinite(self.tail_bound) and self.tail_bound >= 0.0):
            raise ValueError("tail bound must be finite and nonnegative")


@dataclass(frozen=True)
class ExplicitFormulaRHS:
    """Assembled right side: residues, zero sum, trivial sum, and budget."""

    k: int
    x: float
    residues: tuple[tuple[float, float], ...]   # (s0, residue value)
    zero_sum: TruncatedSum
    trivial_sum: TruncatedSum
    total: float
    budget: float


def lhs_theorem1(t: ArithmeticTable, k: int, x: float, N: int) -> TruncatedSum:
    """sum_{x < n <= N} Lambda(n) n^-(k+1) I_k(n/x), compensated, ascending n.

    Tail bound: Lambda(n) <= log n and |I_k| <= M_k give
    M_k * integral_N^inf log(t) t^-(k+1) dt
        = M_k * (log(N)/(k N^k) + 1/(k^2 N^k)).
    """
    if not 1 <= k <= 4:
        raise ValueError("k must be in 1..4")
    if not x > 1 or x == math.floor(x):
        raise ValueError("x must be > 1 and non-integer")
    if N > t.n_max:
        raise ValueError(f"N={N} exceeds table bound {t.n_max}")
    if N <= x:
        raise ValueError(f"empty summation range: N={N} <= x={x}")

    pp = t.prime_powers
    pp = pp[(pp > x) & (pp <= N)]
    vals = t.lam[pp] * pp.astype(np.float64) ** (-(k + 1)) * integral_ik_array(
        k, pp.astype(np.float64) / x
    )
    value = math.fsum(vals.tolist())
    mk = ik_envelope(k)
    tail = mk * (math.log(N) / (k * N**k) + 1.0 / (k * k * N**k))
    return TruncatedSum(value, len(vals), tail, note="log-integral tail with |I_k| envelope")


def residue_at(k: int, x: float, s0: float, radius: float = 0.25) -> float:
    """Real part of (1/2 pi i) times the contour integral of G_k around s0.

    64-node trapezoid on |s - s0| = radius.  Returns the residue for any
    pole order; a regular point yields ~0.
    """
    if not 1 <= k <= 4:
        raise ValueError("k must be in 1..4")
    if s0 not in tuple(float(i) for i in range(1, k + 1)):
        raise ValueError(f"s0 must be one of 1..{k}")
    if not 0.0 < radius <= 0.3:
        raise ValueError("radius must be in (0, 0.3]")
    if not x > 1:
        raise ValueError("x must be > 1")
    others = {1.0, float(k + 1)} | {-2.0 * j for j in range(1, 4)}
    others.discard(s0)
    for p in others:
        if abs(s0 - p) <= radius + 0.05:
            raise GeometryError(f"circle around {s0} touches singularity at {p}")

    theta = 2.0 * np.pi * np.arange(RESIDUE_NODES) / RESIDUE_NODES
    z = s0 + radius * np.exp(1j * theta)
    g = _g_contour(k, x, z)
    vals = g * np.exp(1j * theta) * (radius / RESIDUE_NODES)
    return math.fsum(vals.real.tolist())


def _g_contour(k: int, x: float, z: np.ndarray) -> np.ndarray:
    hk = _hk_closed_batch(k, 1.0 - z)
    nzld = _neg_zld_batch(z)
    return np.exp((z - 1.0 - k) * math.log(x)) * hk * nzld / (k + 1.0 - z)


def zero_pair_terms(
    k: int, x: float, zeros: ZeroTable, count: int | None = None
) -> np.ndarray:
    """Complex per-pair contributions x^(rho-1-k) H_k(1-rho)/(k+1-rho) + (conjugate).

    Both members of each pair are evaluated explicitly, so the imaginary
    parts cancel only if the implementation is conjugate-symmetric; tests
    rely on that.
    """
    take = zeros.entries if count is None else zeros.entries[: count]
    gam = np.array([e.gamma for e in take])
    if gam.size == 0:
        return np.zeros(0, dtype=complex)
    rho = 0.5 + 1j * gam
    out = np.zeros(gam.size, dtype=complex)
    for r in (rho, rho.conj()):
        hk = _hk_closed_batch(k, 1.0 - r)
        out = out + np.exp((r - 1.0 - k) * math.log(x)) * hk / (k + 1.0 - r)
    return out


def _zero_tail_coeff(k: int, zeros: ZeroTable) -> float:
    """Empirical majorant constant: 2 * max over the table of
    |H_k(1-rho)/(k+1-rho)| * gamma^2 (the 2x is the certification margin)."""
    gam = np.array([e.gamma for e in zeros.entries])
    rho = 0.5 + 1j * gam
    hk = _hk_closed_batch(k, 1.0 - rho)
    return 2.0 * float(np.max(np.abs(hk / (k + 1.0 - rho)) * gam**2))


def zero_sum(
    k: int,
    x: float,
    zeros: ZeroTable,
    count: int | None = None,
    sign: float = -1.0,
) -> TruncatedSum:
    """Sum over nontrivial zero pairs with a zero-density tail majorant.

    The tail integrates the asymptotic density log(t/2pi)/(2pi) against
    A_k/t^2, where A_k is certified on the whole table and doubled;
    pairs contribute the leading factor 2.
    """
    if not 1 <= k <= 4:
        raise ValueError("k must be in 1..4")
    if not x > 1:
        raise ValueError("x must be > 1")
    if not zeros.entries:
        raise ValueError("zero table is empty")
    used = len(zeros.entries) if count is None else count
    if not 0 <= used <= len(zeros.entries):
        raise ValueError(f"count must be in 0..{len(zeros.entries)}")
    if any(e.residual > 1e-8 for e in zeros.entries[:used]):
        raise ValueError("zeros must be refined before use (residual <= 1e-8)")

    pairs = zero_pair_terms(k, x, zeros, used)
    value = sign * math.fsum(pairs.real.tolist())

    a_k = _zero_tail_coeff(k, zeros)
    gamma_cut = zeros.entries[used - 1].gamma if used > 0 else 14.0
    tail = (
        x ** (-0.5 - k)
        * 2.0
        * (a_k / (2.0 * math.pi))
        * (math.log(gamma_cut / (2.0 * math.pi)) + 1.0)
        / gamma_cut
    )
    return TruncatedSum(
        value, 2 * used, tail, note="zero-density majorant, table-certified A_k x2"
    )


def trivial_sum(k: int, x: float, sign: float = -1.0) -> TruncatedSum:
    """Sum over trivial zeros: sign * sum_j x^(-2j-1-k) H_k(1+2j)/(k+1+2j).

    Terms decay geometrically in x^-2; summation stops when the next term
    drops below 1e-18 and that term, amplified by the geometric ratio,
    bounds the tail.
    """
    if not 1 <= k <= 4:
        raise ValueError("k must be in 1..4")
    if not x > 1:
        raise ValueError("x must be > 1 (geometric decay in x^-2 is lost otherwise)")
    terms: list[float] = []
    j = 1
    while True:
        hk = Hk_closed(k, 1.0 + 2.0 * j).real
        term = sign * x ** (-2.0 * j - 1.0 - k) * hk / (k + 1.0 + 2.0 * j)
        if abs(term) < 1e-18:
            tail = abs(term) / (1.0 - x**-2.0)
            break
        terms.append(term)
        j += 1
    return TruncatedSum(
        math.fsum(terms), len(terms), tail, note="first omitted term over geometric factor"
    )


def rhs_theorem1(
    k: int, x: float, zeros: ZeroTable, radius: float = 0.25, sign: float = -1.0
) -> ExplicitFormulaRHS:
    """Residues at s0 = 1..k plus the zero and trivial sums, budget aggregated."""
    residues = tuple((float(s0), residue_at(k, x, float(s0), radius)) for s0 in range(1, k + 1))
    zs = zero_sum(k, x, zeros, sign=sign)
    ts = trivial_sum(k, x, sign=sign)
    total = math.fsum([v for _, v in residues] + [zs.value, ts.value])
    budget = zs.tail_bound + ts.tail_bound + k * RESIDUE_QUAD_BOUND
    return ExplicitFormulaRHS(
        k=k, x=x, residues=residues, zero_sum=zs, trivial_sum=ts, total=total, budget=budget
    )


def printed_Pk(k: int, x: float) -> float:
    """The published main terms P_1, P_2, kept verbatim for adjudication.

    P_2 carries a log(x) term whose presence the contour residue at s = 1
    does not reproduce; reports state which candidate the directly summed
    left side supports.
    """
    if not x > 1:
        raise ValueError("x must be > 1")
    if k == 1:
        return (math.log(2.0 * math.pi) - 2.0) / (2.0 * x)
    if k == 2:
        return (8.0 - EULER_GAMMA - 3.0 * math.log(2.0 * math.pi) + math.log(x)) / (6.0 * x * x)
    raise ValueError("published main terms cover only k in {1, 2}")
