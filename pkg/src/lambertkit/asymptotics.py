"""Small-argument behaviour of the divisor series and related limits.

Covers the Bernoulli-square expansion of ``sum d(n) e^{-nz}`` as ``z -> 0``,
its real-variable form ``sum_m 1/(e^{m xi} - 1)``, the exponential-integral
(Voronoi) representation, the ``-2 gamma`` tauberian limits and the
logarithmic bounds for the partition generating function.

Residual decay is measured with :class:`ResidualScan`, which fits the
exponent ``p`` in ``|residual| ~ C t^p`` by least squares in log-log space.
Scans of higher orders need residuals far below double precision, so they
run in mpmath at a chosen number of digits.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

import mpmath
import numpy as np

from .arith import ArithTable, shared_table
from .errors import DomainError, OutOfRangeError, SizeError, UsageError
from .special import EULER_GAMMA, bernoulli_numbers, ei_symmetric_combo, zeta_real

__all__ = [
    "AsymptoticExpansion",
    "ResidualScan",
    "PartitionBounds",
    "fit_exponent",
    "wigert_expansion",
    "schlomilch_coefficients",
    "wigert_eval",
    "dseries_direct",
    "wigert_residual_scan",
    "schlomilch_residual_scan",
    "voronoi_rhs",
    "tauber_logd_residual",
    "tauber_h",
    "tauber_h_window_mean",
    "slowly_decreasing_rows",
    "slowly_decreasing_check",
    "partition_log_check",
]

Number = Union[float, complex]

MAX_ORDER = 30
MAX_ANGLE = 1.2
MIN_REAL_PART = 1e-4
SCAN_DPS = 40
VORONOI_MAX_TERMS = 100


@dataclass(frozen=True)
class AsymptoticExpansion:
    """``gamma/z - log(z)/z + 1/4 - sum_{n<order} c_n z^(2n+1)``."""

    order: int
    odd_coeffs: tuple
    odd_coeffs_float: tuple
    leading: tuple = ("gamma_over_z", "minus_log_z_over_z", "quarter")


@dataclass(frozen=True)
class ResidualScan:
    """Residuals along a parameter grid that shrinks toward the limit point."""

    points: tuple
    fitted_exponent: float
    linear_slope: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.points:
            raise UsageError("a residual scan needs at least one point")
        params = [p for p, _ in self.points]
        if any(b >= a for a, b in zip(params, params[1:])):
            raise UsageError("scan parameters must be strictly decreasing")

    @property
    def residuals(self) -> list:
        return [r for _, r in self.points]


class PartitionBounds(NamedTuple):
    lhs: float
    mid: float
    rhs: float

    @property
    def ordered(self) -> bool:
        return self.lhs < self.mid < self.rhs


def fit_exponent(params: Sequence[float], residuals: Sequence[float]) -> float:
    """Least-squares slope of ``log|residual|`` against ``log param``."""
    t = np.log(np.asarray(params, dtype=np.float64))
    r = np.log(np.abs(np.asarray([float(abs(v)) for v in residuals])))
    if t.size < 2:
        return math.nan
    return float(np.polyfit(t, r, 1)[0])


def _check_decreasing(xs: Sequence[float]) -> list:
    xs = [float(x) for x in xs]
    if not xs:
        raise UsageError("empty grid")
    if any(b >= a for a, b in zip(xs, xs[1:])):
        raise UsageError("grid must be strictly decreasing")
    return xs


# -- the expansion -------------------------------------------------------------

def wigert_expansion(N: int) -> AsymptoticExpansion:
    """Coefficients ``c_n = B_{2n+2}^2 / ((2n+2)! (2n+2))`` for ``n < N``."""
    N = int(N)
    if not 1 <= N <= MAX_ORDER:
        raise SizeError(f"order must lie in [1, {MAX_ORDER}], got {N}")
    B = bernoulli_numbers(N + 1)
    coeffs = tuple(
        B[2 * n + 2] ** 2 / (math.factorial(2 * n + 2) * (2 * n + 2)) for n in range(N)
    )
    return AsymptoticExpansion(
        order=N, odd_coeffs=coeffs, odd_coeffs_float=tuple(float(c) for c in coeffs)
    )


def schlomilch_coefficients(k: int) -> tuple:
    """``B_{2m}^2 / ((2m)! 2m)`` for ``m = 1..k-1``, the real-variable form of the same expansion."""
    k = int(k)
    if not 1 <= k <= MAX_ORDER + 1:
        raise SizeError(f"order must lie in [1, {MAX_ORDER + 1}], got {k}")
    B = bernoulli_numbers(k)
    return tuple(B[2 * m] ** 2 / (math.factorial(2 * m) * 2 * m) for m in range(1, k))


def _check_sector(z: Number) -> complex:
    z = complex(z)
    r = abs(z)
    if not 0.0 < r <= 1.0:
        raise DomainError(f"need 0 < |z| <= 1, got {z}")
    if abs(cmath.phase(z)) > MAX_ANGLE:
        raise DomainError(f"|arg z| must be <= {MAX_ANGLE}, got {cmath.phase(z):.4g}")
    return z


def _as_output(v: complex, real: bool) -> Number:
    return v.real if real else v


def wigert_eval(z: Number, N: int, dps: Optional[int] = None):
    """Truncated expansion with ``N`` odd-power corrections, principal ``log``.

    With ``dps`` set the result is an mpmath number at that precision.
    """
    real = not isinstance(z, complex) or z.imag == 0.0
    zc = _check_sector(z)
    exp = wigert_expansion(N)
    if dps is None:
        s = EULER_GAMMA / zc - cmath.log(zc) / zc + 0.25
        zsq = zc * zc
        zp = zc
        for c in exp.odd_coeffs_float:
            s -= c * zp
            zp *= zsq
        return _as_output(s, real)
    with mpmath.workdps(dps):
        zz = mpmath.mpf(zc.real) if real else mpmath.mpc(zc)
        s = mpmath.euler / zz - mpmath.log(zz) / zz + mpmath.mpf(1) / 4
        zp = zz
        for c in exp.odd_coeffs:
            s -= mpmath.mpf(c.numerator) / c.denominator * zp
            zp *= zz * zz
        return +s


def _cutoff(re_z: float, digits: float) -> int:
    # smallest N with 2 sqrt(N) e^{-N re_z} below 10^-digits times e^{-re_z}
    target = digits * math.log(10) + re_z
    N = max(1, int(target / re_z))
    while 2.0 * math.sqrt(N) * math.exp(-(N - 1) * re_z) >= 10.0 ** (-digits):
        N = int(N * 1.05) + 1
    return N


def dseries_direct(z: Number, dps: Optional[int] = None, form: str = "divisor"):
    """``sum_n d(n) e^{-nz}`` for ``Re z >= 1e-4``.

    ``form="lambert"`` sums ``sum_m 1/(e^{mz} - 1)`` instead; the two forms
    are the same series rearranged.  Terms are taken up to an a-priori
    index beyond which they fall under ``1e-18`` (or ``10^-(dps+5)``)
    relative to the first term.
    """
    real = not isinstance(z, complex) or z.imag == 0.0
    zc = complex(z)
    if not zc.real >= MIN_REAL_PART:
        raise DomainError(f"need Re z >= {MIN_REAL_PART}, got {z}")
    if form not in ("divisor", "lambert"):
        raise UsageError(f"form must be 'divisor' or 'lambert', got {form!r}")
    digits = 18.0 if dps is None else dps + 5.0
    N = _cutoff(zc.real, digits)
    if dps is None:
        n = np.arange(1, N + 1, dtype=np.float64)
        arg = n * (zc.real if real else zc)
        if form == "lambert":
            terms = 1.0 / np.expm1(arg)
        else:
            terms = shared_table(N).d[1 : N + 1] * np.exp(-arg)
        v = complex(np.sum(terms[::-1]))
        return _as_output(v, real)
    with mpmath.workdps(dps + 10):
        zz = mpmath.mpf(zc.real) if real else mpmath.mpc(zc)
        if form == "lambert":
            total = mpmath.fsum(1 / mpmath.expm1(m * zz) for m in range(1, N + 1))
        else:
            d = shared_table(N).d
            w = mpmath.exp(-zz)
            wn = mpmath.mpf(1)
            parts = []
            for k in range(1, N + 1):
                wn *= w
                parts.append(int(d[k]) * wn)
            total = mpmath.fsum(parts)
    with mpmath.workdps(dps):
        return +total


def wigert_residual_scan(
    N: int,
    z_start: float = 0.2,
    halvings: int = 5,
    angle: float = 0.0,
    dps: int = SCAN_DPS,
) -> ResidualScan:
    """Residual of the order-``N`` expansion along ``z = z_start e^{i angle} / 2^j``."""
    if halvings < 1:
        raise UsageError("need at least one halving")
    if abs(angle) > MAX_ANGLE:
        raise DomainError(f"|angle| must be <= {MAX_ANGLE}")
    points = []
    for j in range(halvings + 1):
        r = z_start / 2**j
        z = r if angle == 0.0 else cmath.rect(r, angle)
        with mpmath.workdps(dps):
            res = dseries_direct(z, dps=dps) - wigert_eval(z, N, dps=dps)
        points.append((r, float(abs(res))))
    params, resid = zip(*points)
    return ResidualScan(points=tuple(points), fitted_exponent=fit_exponent(params, resid))


def schlomilch_residual_scan(k: int, xs: Sequence[float], dps: int = SCAN_DPS) -> ResidualScan:
    """Residual of ``sum_m 1/(e^{m xi}-1)`` against its expansion through ``xi^(2k-3)``."""
    k = int(k)
    if not 1 <= k <= 10:
        raise SizeError(f"order k must lie in [1, 10], got {k}")
    xs = _check_decreasing(xs)
    if not all(0.0 < x <= 0.5 for x in xs):
        raise DomainError("all xi must lie in (0, 0.5]")
    coeffs = schlomilch_coefficients(k)
    points = []
    for x in xs:
        with mpmath.workdps(dps):
            xi = mpmath.mpf(x)
            approx = mpmath.euler / xi - mpmath.log(xi) / xi + mpmath.mpf(1) / 4
            for m, c in enumerate(coeffs, start=1):
                approx -= mpmath.mpf(c.numerator) / c.denominator * xi ** (2 * m - 1)
            res = dseries_direct(x, dps=dps, form="lambert") - approx
        points.append((x, float(abs(res))))
    params, resid = zip(*points)
    return ResidualScan(points=tuple(points), fitted_exponent=fit_exponent(params, resid))


# -- exponential-integral representation ----------------------------------------

def _voronoi_tail(x: float, n_terms: int, d: np.ndarray) -> float:
    # terms n > n_terms, each g(y) replaced by 2 sum_{j odd} j!/y^{j+1}; the
    # sums over n then close up as zeta(j+1)^2 minus the head
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    scale = x / (4.0 * math.pi**2)
    total = 0.0
    for j in (1, 3, 5):
        s = j + 1
        head = float(np.sum(d[1 : n_terms + 1] * n ** (-s)))
        total += 2.0 * math.factorial(j) * scale**s * (zeta_real(s) ** 2 - head)
    return total


def voronoi_rhs(x: float, n_terms: int = 50, tail: bool = True) -> float:
    """Right side of the Ei-kernel identity for ``sum d(n) e^{-nx}``.

    ``gamma/x - log(x)/x + 1/4 - (2/x) sum_{n<=n_terms} d(n) g(4 pi^2 n/x)`` with
    ``g`` from :func:`ei_symmetric_combo`.  ``tail=True`` adds the terms past
    ``n_terms`` through the leading asymptotics of ``g`` summed in closed form.
    """
    x = float(x)
    if not 0.05 <= x < 1.0:
        raise DomainError(f"x must lie in [0.05, 1), got {x}")
    n_terms = int(n_terms)
    if not 1 <= n_terms <= VORONOI_MAX_TERMS:
        raise SizeError(f"n_terms must lie in [1, {VORONOI_MAX_TERMS}], got {n_terms}")
    d = shared_table(n_terms).d
    corr = math.fsum(
        int(d[n]) * ei_symmetric_combo(4.0 * math.pi**2 * n / x) for n in range(1, n_terms + 1)
    )
    if tail:
        corr += _voronoi_tail(x, n_terms, d)
    return EULER_GAMMA / x - math.log(x) / x + 0.25 - 2.0 / x * corr


# -- tauberian limits ----------------------------------------------------------------

def tauber_logd_residual(x: float) -> float:
    """``sqrt(x) * (sum_n (log n - d(n)) e^{-nx} + 2 gamma / x)`` for ``1e-3 <= x <= 0.2``."""
    x = float(x)
    if not 1e-3 <= x <= 0.2:
        raise DomainError(f"x must lie in [1e-3, 0.2], got {x}")
    N = _cutoff(x, 18.0)
    n = np.arange(1, N + 1, dtype=np.float64)
    coeff = np.log(n) - shared_table(N).d[1 : N + 1]
    s = math.fsum(coeff * np.exp(-n * x))
    return (s + 2.0 * EULER_GAMMA / x) * math.sqrt(x)


def _h_index(x: float, table: ArithTable) -> int:
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    if x > table.limit:
        raise OutOfRangeError(f"x={x} exceeds table limit {table.limit}")
    return math.floor(x)


def tauber_h(x: float, table: ArithTable) -> float:
    """``h(x) = sum_{n<=x} (Lambda(n) - 1)/n``, which tends to ``-2 gamma``."""
    return float(table.h_cumsum[_h_index(x, table)])


def tauber_h_window_mean(x: float, table: ArithTable) -> float:
    """Mean of ``h(n)`` over integers ``n`` in ``[x, 2x]``."""
    lo = _h_index(math.ceil(x), table)
    hi = _h_index(2 * x, table)
    return float(np.mean(table.h_cumsum[lo : hi + 1]))


def slowly_decreasing_rows(x_grid, rho_grid, table: ArithTable) -> list:
    """``h(rho x) - h(x) + log rho + 2/x`` for every grid pair."""
    xs = [float(x) for x in x_grid]
    rhos = [float(r) for r in rho_grid]
    if not xs or not rhos:
        raise UsageError("empty grid")
    rows = []
    for x in xs:
        for rho in rhos:
            if not rho > 1.0:
                raise DomainError(f"rho must exceed 1, got {rho}")
            diff = tauber_h(rho * x, table) - tauber_h(x, table)
            rows.append(
                {
                    "x": x,
                    "rho": rho,
                    "h_diff": diff,
                    "lower_bound": -math.log(rho) - 2.0 / x,
                    "deficit": diff + math.log(rho) + 2.0 / x,
                }
            )
    return rows


def slowly_decreasing_check(x_grid, rho_grid, table: ArithTable) -> float:
    """Smallest ``h(rho x) - h(x) + log rho + 2/x`` over the grid; nonnegative when the bound holds."""
    return min(r["deficit"] for r in slowly_decreasing_rows(x_grid, rho_grid, table))


# -- partition generating function ---------------------------------------------

def partition_log_check(x: float) -> PartitionBounds:
    """``(sum x^m/m^2, (1-x) log F(x), pi^2 x / 6)`` where ``F = prod 1/(1-x^m)``.

    ``log F(x)`` is taken as ``sum_m (1/m) x^m/(1-x^m)``.  Both sums stop
    where a geometric bound on the remainder drops below ``1e-16``.
    """
    x = float(x)
    if not 1e-4 <= x <= 1.0 - 1e-4:
        raise DomainError(f"x must lie in [1e-4, 1 - 1e-4], got {x}")
    lx = math.log(x)
    # remainder after M terms is below x^(M+1) / ((M+1)(1-x)^2)
    M = 16
    while x ** (M + 1) / ((M + 1) * (1.0 - x) ** 2) >= 1e-16:
        M *= 2
    m = np.arange(1, M + 1, dtype=np.float64)
    xm = np.exp(m * lx)
    lhs = math.fsum(xm / (m * m))
    log_f = math.fsum(1.0 / (m * np.expm1(-m * lx)))
    return PartitionBounds(lhs, (1.0 - x) * log_f, math.pi**2 / 6.0 * x)
