"""Complex Riemann zeta engine and the nontrivial-zero table.

zeta(s) is evaluated by the Euler-Maclaurin expansion

    sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
        + sum_j B_{2j}/(2j)! (s)_{2j-1} N^(-s-2j+1) + R,

with N and the correction depth chosen adaptively until the classical
remainder bound drops below ~1e-14 of the accumulated value.  zeta'(s)
comes from the Cauchy integral on a radius-0.05 circle (32-node
trapezoid, spectrally accurate), so a single accurate zeta implementation
serves both.  -zeta'/zeta near the pole at s = 1 switches to the entire
function phi(s) = (s-1) zeta(s), for which the circle derivative is
uniformly safe.

The Mellin kernel

    H_k(s) = integral_1^inf t^(-s-k) B_k({t}) dt

is provided twice on purpose: in the closed form with the Bernoulli
bracket, and by compensated per-period quadrature.  The two routes share
no code path past B_k itself and adjudicate each other.

Zero ordinates ship as a seed CSV but are never trusted: every
zero-dependent computation re-validates them through unconstrained
complex Newton refinement.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bernpoly import bernoulli_poly, default_cache, ik_envelope

__all__ = [
    "DomainError",
    "PoleError",
    "PoleProximityError",
    "FormatError",
    "RefinementError",
    "EULER_GAMMA",
    "zeta_em",
    "zeta_deriv",
    "neg_zeta_log_deriv",
    "Hk_closed",
    "Hk_quadrature",
    "ZeroEntry",
    "ZeroTable",
    "load_zero_table",
    "bundled_zeros_path",
    "refine_zero",
    "refine_table",
]

EULER_GAMMA = 0.5772156649015329

RE_MIN = -10.0
IM_MAX = 500.0

_DERIV_RADIUS = 0.05
_DERIV_NODES = 32
_POLE_SWITCH = 0.5  # |s-1| below this: -zeta'/zeta goes through phi = (s-1) zeta


class DomainError(ValueError):
    """Argument outside the supported evaluation region."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class PoleProximityError(DomainError):
    """zeta too close to zero for a stable logarithmic derivative."""


class FormatError(ValueError):
    """Zero-table file malformed."""


class RefinementError(RuntimeError):
    """Newton refinement failed to converge; carries the last iterate."""

    def __init__(self, message: str, last_iterate: complex):
        super().__init__(message)
        self.last_iterate = last_iterate


# ---------------------------------------------------------------------------
# Euler-Maclaurin zeta
# ---------------------------------------------------------------------------

def _b2j_over_fact() -> np.ndarray:
    b = default_cache().values
    out = np.zeros(32)
    for j in range(1, 32):
        out[j] = b[2 * j] / math.factorial(2 * j)
    return out


_B2J_FACT = _b2j_over_fact()
_MAX_J = 30


def _validate_domain(s: np.ndarray) -> None:
    if np.any(s == 1.0):
        raise PoleError("zeta has a pole at s = 1")
    if np.any(s.real < RE_MIN - 1e-12) or np.any(np.abs(s.imag) > IM_MAX + 1e-12):
        raise DomainError(
            f"supported region is Re s >= {RE_MIN}, |Im s| <= {IM_MAX}"
        )


def _log_sin(z: np.ndarray) -> np.ndarray:
    """log(sin z), stable for large |Im z| (asymptotic single-exponential form)."""
    out = np.empty_like(z)
    hi = z.imag > 20.0
    lo = z.imag < -20.0
    mid = ~(hi | lo)
    if np.any(hi):
        out[hi] = -1j * z[hi] + (0.5j * np.pi - math.log(2.0))
    if np.any(lo):
        out[lo] = 1j * z[lo] - 0.5j * np.pi - math.log(2.0)
    if np.any(mid):
        out[mid] = np.log(np.sin(z[mid]))
    return out


def _zeta_em_batch(s: np.ndarray) -> np.ndarray:
    """Euler-Maclaurin zeta over a 1-d complex array (domain pre-validated).

    For Re s < -0.5 the expansion is applied at 1-s and pulled back through
    the functional equation zeta(s) = chi(s) zeta(1-s) with chi evaluated in
    log space; direct summation there would cancel catastrophically.
    """
    out = np.empty_like(s)
    left = s.real < -0.5
    if np.any(left):
        from scipy.special import loggamma

        sl = s[left]
        log_chi = (
            sl * math.log(2.0)
            + (sl - 1.0) * math.log(math.pi)
            + _log_sin(0.5 * np.pi * sl)
            + loggamma(1.0 - sl)
        )
        out[left] = np.exp(log_chi) * _zeta_em_core(1.0 - sl)
    if np.any(~left):
        out[~left] = _zeta_em_core(s[~left])
    return out


def _zeta_em_core(s: np.ndarray) -> np.ndarray:
    t_max = float(np.max(np.abs(s.imag)))
    n_terms = int((t_max + 60.0) / 3.5) + 16
    for _ in range(6):
        value, converged = _zeta_em_try(s, n_terms)
        if converged:
            return value
        n_terms *= 2
    raise DomainError("Euler-Maclaurin expansion failed to converge")


def _zeta_em_try(s: np.ndarray, n_terms: int) -> tuple[np.ndarray, bool]:
    sigma = s.real
    # Kahan-compensated sum over n of n^-s, vectorized across the batch.
    acc = np.zeros_like(s)
    carry = np.zeros_like(s)
    for n in range(1, n_terms):
        term = np.exp(-s * math.log(n)) + carry
        prev = acc.copy()
        acc = prev + term
        carry = (prev - acc) + term
    logn = math.log(n_terms)
    acc = acc + np.exp((1.0 - s) * logn) / (s - 1.0)
    acc = acc + np.exp(-s * logn) / 2.0

    poch = s.copy()                       # (s)_{2j-1} for the current j
    npow = np.exp((-s - 1.0) * logn)      # N^(-s-2j+1) for the current j
    n2 = float(n_terms) ** 2
    converged = False
    for j in range(1, _MAX_J + 1):
        acc = acc + _B2J_FACT[j] * poch * npow
        poch = poch * (s + (2 * j - 1)) * (s + 2 * j)
        npow = npow / n2
        denom = sigma + 2 * j + 1
        with np.errstate(over="ignore", invalid="ignore"):
            bound = np.where(
                denom > 0.5,
                abs(_B2J_FACT[j + 1])
                * np.abs(poch)
                * n_terms ** (-sigma - 2 * j - 1)
                * np.abs(s + (2 * j + 1))
                / np.maximum(denom, 0.5),
                np.inf,
            )
        if np.all(bound <= 1e-14 * (1.0 + np.abs(acc))):
            converged = True
            break
    return acc, converged


def zeta_em(s: complex) -> complex:
    """zeta(s) by Euler-Maclaurin; relative error ~1e-13 on the working region.

    Supported region: s != 1, Re s >= -10, |Im s| <= 500.
    """
    arr = np.array([complex(s)])
    _validate_domain(arr)
    return complex(_zeta_em_batch(arr)[0])


def _circle_nodes(radius: float = _DERIV_RADIUS, nodes: int = _DERIV_NODES):
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    return radius * np.exp(1j * theta), np.exp(-1j * theta)


def _zeta_deriv_batch(s: np.ndarray) -> np.ndarray:
    offs, conj_ph = _circle_nodes()
    pts = (s[:, None] + offs[None, :]).ravel()
    _validate_domain(pts)
    vals = _zeta_em_batch(pts).reshape(len(s), _DERIV_NODES)
    return (vals * conj_ph[None, :]).mean(axis=1) / _DERIV_RADIUS


def zeta_deriv(s: complex) -> complex:
    """zeta'(s) via the Cauchy derivative on a radius-0.05 circle.

    Requires |s - 1| > 0.1 and a 0.05 margin to the zeta_em region.
    """
    s = complex(s)
    if abs(s - 1.0) <= 0.1:
        raise DomainError("zeta_deriv needs |s - 1| > 0.1")
    if s.real < RE_MIN + _DERIV_RADIUS or abs(s.imag) > IM_MAX - _DERIV_RADIUS:
        raise DomainError("insufficient margin to the zeta_em region")
    return complex(_zeta_deriv_batch(np.array([s]))[0])


def _neg_zld_near_pole(s: np.ndarray) -> np.ndarray:
    """-zeta'/zeta for |s-1| <= 0.5 via phi(s) = (s-1) zeta(s) (entire, phi(1)=1)."""
    offs, conj_ph = _circle_nodes(radius=0.04)
    pts = (s[:, None] + offs[None, :]).ravel()
    _validate_domain(pts)
    phi_circle = ((pts - 1.0) * _zeta_em_batch(pts)).reshape(len(s), _DERIV_NODES)
    phi_prime = (phi_circle * conj_ph[None, :]).mean(axis=1) / 0.04
    phi = (s - 1.0) * _zeta_em_batch(s)
    return 1.0 / (s - 1.0) - phi_prime / phi


def _neg_zld_batch(s: np.ndarray) -> np.ndarray:
    out = np.empty_like(s)
    near = np.abs(s - 1.0) <= _POLE_SWITCH
    if np.any(near):
        out[near] = _neg_zld_near_pole(s[near])
    far = ~near
    if np.any(far):
        sf = s[far]
        zs = _zeta_em_batch(sf)
        if np.any(np.abs(zs) <= 1e-12):
            raise PoleProximityError("zeta(s) within 1e-12 of zero")
        out[far] = -_zeta_deriv_batch(sf) / zs
    return out


def neg_zeta_log_deriv(s: complex) -> complex:
    """-zeta'(s)/zeta(s); for Re s > 1 this is sum Lambda(n) n^-s.

    Near s = 1 the pole part 1/(s-1) is split off analytically, so the
    value stays accurate right up to (but not at) the pole.
    """
    s = complex(s)
    if s == 1.0:
        raise PoleError("logarithmic derivative has a pole at s = 1")
    arr = np.array([s])
    _validate_domain(arr)
    return complex(_neg_zld_batch(arr)[0])


# ---------------------------------------------------------------------------
# The Mellin kernel H_k: closed form and quadrature oracle
# ---------------------------------------------------------------------------

def _hk_bracket(k: int, s: np.ndarray) -> np.ndarray:
    """zeta(s) + 1/(1-s) + sum_{j=1..k} C(-s, j-1) B_j / j."""
    b = default_cache().values
    out = _zeta_em_batch(s) + 1.0 / (1.0 - s)
    binom = np.ones_like(s)            # C(-s, j-1), built incrementally
    for j in range(1, k + 1):
        if b[j] != 0.0:
            out = out + binom * (b[j] / j)
        binom = binom * (-s - (j - 1)) / j
    return out


def _hk_denominator(k: int, s: np.ndarray) -> np.ndarray:
    """(-1)^(k-1) C(-s, k) = -s(s+1)...(s+k-1)/k!."""
    prod = np.full_like(s, -1.0 / math.factorial(k))
    for i in range(k):
        prod = prod * (s + i)
    return prod


def hk_limit_at_zero(k: int) -> float:
    """H_k(0) where the closed form is 0/0, by L'Hopital.

    Both the bracket and the binomial vanish linearly at s = 0, so
    H_k(0) = -k * d/ds[bracket](0)
           = -k * (zeta'(0) + 1 - sum_{j=2..k} (-1)^j B_j/(j(j-1))).
    """
    b = default_cache().values
    zp0 = zeta_deriv(0.0).real
    corr = sum((-1.0) ** j * b[j] / (j * (j - 1)) for j in range(2, k + 1))
    return -k * (zp0 + 1.0 - corr)


def _hk_closed_batch(k: int, s: np.ndarray) -> np.ndarray:
    out = np.empty_like(s)
    at_zero = np.abs(s) < 1e-6
    if np.any(at_zero):
        out[at_zero] = hk_limit_at_zero(k)
    rest = ~at_zero
    if np.any(rest):
        sr = s[rest]
        out[rest] = _hk_bracket(k, sr) / _hk_denominator(k, sr)
    return out


def Hk_closed(k: int, s: complex) -> complex:
    """H_k(s) in closed form; the removable point s = 0 goes through the limit."""
    if not 1 <= k <= 4:
        raise ValueError("k must be in 1..4")
    s = complex(s)
    if s == 1.0:
        raise PoleError("closed form is singular at s = 1")
    arr = np.array([s])
    if abs(s) >= 1e-6:
        _validate_domain(arr)
    return complex(_hk_closed_batch(k, arr)[0])


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)
_GL_X = 0.5 * (_GL_NODES + 1.0)      # mapped to [0, 1]
_GL_W = 0.5 * _GL_WEIGHTS


def Hk_quadrature(k: int, s: complex) -> complex:
    """H_k(s) by per-period 32-node quadrature of t^(-s-k) B_k({t}).

    Periods are summed until the analytic per-period bound
    |s+k| M_k m^(-Re(s)-k-1) falls below 1e-12, then the tail
    integral_{M+1}^inf is replaced by its leading part
    -B_{k+1}/(k+1) (M+1)^(-s-k); the neglected remainder is two powers
    smaller.  Needs Re(s) + k > 0.  This route never touches the closed
    form and is its independent oracle.
    """
    if not 1 <= k <= 4:
        raise ValueError("k must be in 1..4")
    s = complex(s)
    w = s + k
    if w.real <= 0.0:
        raise DomainError("quadrature route needs Re(s) + k > 0")
    mk = ik_envelope(k)
    m_stop = int(math.ceil((abs(w) * mk / 1e-12) ** (1.0 / (w.real + 1.0)))) + 1
    m_stop = max(m_stop, 8)

    bk_w = bernoulli_poly(k, _GL_X) * _GL_W
    real_w = s.imag == 0.0
    partials_re: list[float] = []
    partials_im: list[float] = []
    chunk = 65536
    for lo in range(1, m_stop + 1, chunk):
        hi = min(lo + chunk - 1, m_stop)
        m = np.arange(lo, hi + 1, dtype=np.float64)
        t = m[:, None] + _GL_X[None, :]
        if real_w:
            vals = (t ** (-w.real) * bk_w[None, :]).sum(axis=1)
            partials_re.extend(vals.tolist())
        else:
            vals = (np.exp(-w * np.log(t)) * bk_w[None, :]).sum(axis=1)
            partials_re.extend(vals.real.tolist())
            partials_im.extend(vals.imag.tolist())
    total = complex(math.fsum(partials_re), math.fsum(partials_im) if partials_im else 0.0)

    b = default_cache().values
    ck = -float(b[k + 1]) / (k + 1)   # period mean of I_k
    if ck != 0.0:
        total += ck * cmath.exp(-w * math.log(m_stop + 1))
    return total


# ---------------------------------------------------------------------------
# Nontrivial zeros
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroEntry:
    """One nontrivial zero rho = 1/2 + i*gamma (ordered by height).

    residual is |zeta(rho)| after refinement and re_deviation is
    |Re rho - 1/2| from the unconstrained Newton iteration; both are
    +inf for raw seed entries.
    """

    index: int
    gamma: float
    residual: float = math.inf
    re_deviation: float = math.inf


@dataclass(frozen=True)
class ZeroTable:
    entries: tuple[ZeroEntry, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def refined(self) -> bool:
        return all(e.residual <= 1e-8 for e in self.entries)


def _validate_ordinates(gammas: list[float], origin: str) -> None:
    if not gammas:
        raise FormatError(f"{origin}: no zero ordinates found")
    if not 14.0 < gammas[0] < 14.2:
        raise FormatError(f"{origin}: first ordinate {gammas[0]} not in (14, 14.2)")
    for a, b in zip(gammas[:-1], gammas[1:]):
        if b - a <= 0.1:
            raise FormatError(f"{origin}: ordinates not increasing with gap > 0.1 ({a} -> {b})")


def load_zero_table(path: str | Path) -> ZeroTable:
    """Parse a zeros CSV (header 'index,gamma'); no refinement is performed."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read zero table {path}: {exc}") from exc
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].replace(" ", "") != "index,gamma":
        raise FormatError(f"{path}: expected header 'index,gamma'")
    entries = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 2:
            raise FormatError(f"{path}: malformed row {ln!r}")
        try:
            idx, gamma = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise FormatError(f"{path}: malformed row {ln!r}") from exc
        entries.append(ZeroEntry(index=idx, gamma=gamma))
    entries.sort(key=lambda e: e.index)
    _validate_ordinates([e.gamma for e in entries], str(path))
    return ZeroTable(entries=tuple(entries), source=str(path))


def bundled_zeros_path() -> Path:
    """Location of the seed CSV shipped with the package."""
    return Path(__file__).parent / "data" / "zeros_seed.csv"


def refine_zero(seed_gamma: float, index: int = 0) -> ZeroEntry:
    """Newton-refine one zero from the seed ordinate.

    Iterates s <- s - zeta(s)/zeta'(s) from 1/2 + i*seed, unconstrained in
    the complex plane, until |zeta(s)| <= 1e-10 (at most 50 steps).  An
    iterate drifting more than 0.5 from the seed aborts: the seed was not
    near a zero.
    """
    if not 0.0 < seed_gamma <= 500.0:
        raise DomainError("seed ordinate must be in (0, 500]")
    start = complex(0.5, seed_gamma)
    s = start
    for _ in range(50):
        try:
            z = zeta_em(s)
        except DomainError as exc:
            raise RefinementError(f"iterate left the zeta domain: {exc}", s) from exc
        if abs(z) <= 1e-10:
            return ZeroEntry(
                index=index,
                gamma=s.imag,
                residual=abs(z),
                re_deviation=abs(s.real - 0.5),
            )
        dz = zeta_deriv(s)
        s = s - z / dz
        if abs(s - start) > 0.5:
            raise RefinementError(
                f"no zero near ordinate {seed_gamma}: iterate drifted to {s}", s
            )
    raise RefinementError(f"Newton did not converge from ordinate {seed_gamma}", s)


def refine_table(table: ZeroTable, count: int | None = None) -> ZeroTable:
    """Refine the first `count` seeds (default: all); re-checks the ordering."""
    take = table.entries if count is None else table.entries[:count]
    if not take:
        raise ValueError("zero table is empty")
    refined = tuple(refine_zero(e.gamma, index=e.index) for e in take)
    _validate_ordinates([e.gamma for e in refined], f"{table.source} (refined)")
    return ZeroTable(entries=refined, source=table.source + " (refined)")
