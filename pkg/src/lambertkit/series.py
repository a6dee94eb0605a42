"""Evaluation engines for Lambert series ``sum a_n x^n / (1 - x^n)``.

Five engines are provided.  ``eval_naive`` and ``eval_power_series`` work
for any named coefficient sequence.  ``eval_clausen``, ``eval_eisenstein_qseries``
and ``eval_eisenstein_cf`` are transformations of the divisor series
(``a_n = 1``) only.  Every engine returns an :class:`EvalReport`.

The module also holds the closed-form identity residuals, the closed form
for the n-th derivative of ``x^k/(1-x^k)`` at 0, and the major/minor arc
probe near a root of unity.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath
import numpy as np

from .arith import ArithTable, divisor_convolve_with_one, shared_table
from .errors import DomainError, SizeError, UsageError

__all__ = [
    "COEFFICIENT_NAMES",
    "StopReason",
    "EvalReport",
    "SingularityProbe",
    "eval_naive",
    "eval_power_series",
    "eval_clausen",
    "eval_eisenstein_qseries",
    "eval_eisenstein_cf",
    "terms_for_tolerance",
    "identity_residual",
    "identity_closed_form",
    "burhenne_fk_derivative",
    "singularity_probe",
    "singularity_growth",
]

Number = Union[float, complex]

COEFFICIENT_NAMES = ("one", "d", "mobius", "phi", "liouville", "mangoldt")
IDENTITY_NAMES = ("mobius", "phi", "liouville", "mangoldt")

UNIT_CIRCLE_GUARD = 1e-9
TERM_CAP = 10**6
POWER_SERIES_CAP = 10**7
QSERIES_CAP = 10**4
CF_DEPTH_CAP = 500
FACTORIAL_FLOAT_CAP = 170
FACTORIAL_EXACT_CAP = 20


class StopReason(str, enum.Enum):
    TOLERANCE_MET = "tolerance_met"
    TERM_CAP = "term_cap"
    DIVERGENCE_GUARD = "divergence_guard"


@dataclass(frozen=True)
class EvalReport:
    """Outcome of one series evaluation.

    ``error_estimate`` bounds (heuristically) what was left out; when
    ``stop_reason`` is ``tolerance_met`` it is at most ``tol * max(1, |value|)``.
    """

    value: Number
    terms_used: int
    stop_reason: StopReason
    error_estimate: float

    def as_dict(self) -> dict:
        v = self.value
        value = [v.real, v.imag] if isinstance(v, complex) else v
        return {
            "value": value,
            "terms_used": self.terms_used,
            "error_estimate": self.error_estimate,
            "stop_reason": self.stop_reason.value,
        }


@dataclass(frozen=True)
class SingularityProbe:
    """Split of ``(1 - r) f(r e^{2 pi i p/q})`` by residue of ``n`` mod ``q``."""

    p: int
    q: int
    r: float
    major_arc: float
    minor_arc: complex
    major_lower_bound: float
    minor_upper_bound: float
    terms_used: int
    tail_bound: float

    @property
    def total(self) -> complex:
        return self.major_arc + self.minor_arc

    @property
    def bounds_hold(self) -> bool:
        return (
            self.major_arc >= self.major_lower_bound
            and abs(self.minor_arc) < self.minor_upper_bound
        )


# -- coefficient sources ---------------------------------------------------

def _coefficients(name: str, n: np.ndarray, table: Optional[ArithTable]) -> np.ndarray:
    if name == "one":
        return np.ones(n.shape, dtype=np.float64)
    hi = int(n[-1])
    if table is None or table.limit < hi:
        table = shared_table(hi)
    arr = {
        "d": table.d,
        "mobius": table.mu,
        "phi": table.phi,
        "liouville": table.liouville,
        "mangoldt": table.von_mangoldt,
    }[name]
    return arr[n].astype(np.float64)


def _coefficient_bound(name: str, n: np.ndarray) -> np.ndarray:
    """Non-decreasing envelope ``A_n >= |a_m|`` usable for the tail ``m >= n``."""
    if name in ("one", "mobius", "liouville"):
        return np.ones(n.shape)
    if name == "phi":
        return n.astype(np.float64)
    if name == "mangoldt":
        return np.maximum(1.0, np.log(n.astype(np.float64)))
    return 2.0 * np.sqrt(n.astype(np.float64))  # d(n) <= 2 sqrt(n)


def _check_name(name: str) -> None:
    if name not in COEFFICIENT_NAMES:
        raise UsageError(f"unknown coefficient source {name!r}; expected one of {COEFFICIENT_NAMES}")


def _check_point(x: Number, real_only: bool = False, guard: float = UNIT_CIRCLE_GUARD) -> Number:
    if isinstance(x, complex) and x.imag == 0.0:
        x = x.real
    if real_only and isinstance(x, complex):
        raise DomainError(f"this engine needs a real argument, got {x}")
    if not math.isfinite(abs(x)) or abs(x) > 1.0 - guard:
        raise DomainError(f"|x| must be <= 1 - {guard:g}, got {x}")
    return x


def _report_value(v) -> Number:
    v = complex(v)
    return v.real if v.imag == 0.0 else v


# -- chunked summation driver ----------------------------------------------

def _sum_until_small(
    term_fn: Callable[[np.ndarray], np.ndarray],
    tail_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    tol: float,
    cap: int,
    run_length: int = 3,
) -> EvalReport:
    """Sum ``term_fn(n)`` for ``n = 1, 2, ...`` in vectorised chunks.

    Stops once ``run_length`` consecutive tail estimates fall below
    ``tol * max(1, |partial|)``, or at ``cap`` terms.
    """
    partial = 0.0
    run = 0
    n0 = 1
    size = 256
    last_tail = math.inf
    while n0 <= cap:
        n = np.arange(n0, min(n0 + size, cap + 1), dtype=np.int64)
        terms = term_fn(n)
        tails = tail_fn(n, terms)
        cum = partial + np.cumsum(terms)
        if not np.all(np.isfinite(cum)):
            bad = int(np.argmin(np.isfinite(cum)))
            good = cum[bad - 1] if bad > 0 else partial
            return EvalReport(_report_value(good), int(n[0]) + bad, StopReason.DIVERGENCE_GUARD, math.inf)
        small = tails < tol * np.maximum(1.0, np.abs(cum))
        carry = min(run, run_length - 1)
        ext = np.concatenate([np.ones(carry, dtype=bool), small])
        if ext.size >= run_length:
            window = np.ones(ext.size - run_length + 1, dtype=bool)
            for j in range(run_length):
                window &= ext[j : ext.size - run_length + 1 + j]
            hits = np.flatnonzero(window)
            if hits.size:
                i = int(hits[0]) + run_length - 1 - carry
                return EvalReport(
                    _report_value(cum[i]), int(n[i]), StopReason.TOLERANCE_MET, float(tails[i])
                )
        falses = np.flatnonzero(~small)
        run = run + small.size if falses.size == 0 else small.size - int(falses[-1]) - 1
        partial = cum[-1]
        last_tail = float(tails[-1])
        n0 += n.size
        size = min(size * 2, 1 << 16)
    return EvalReport(_report_value(partial), cap, StopReason.TERM_CAP, last_tail)


# -- engines -----------------------------------------------------------------

def eval_naive(
    a: str,
    x: Number,
    tol: float = 1e-12,
    table: Optional[ArithTable] = None,
    cap: int = TERM_CAP,
) -> EvalReport:
    """Sum the Lambert series term by term.

    The stopping test uses a tail envelope ``A_n |x|^n / ((1-|x|^n)(1-|x|))``
    with ``A_n`` a growth bound for the coefficients, so zero coefficients
    (``mu``, ``Lambda``) cannot trigger an early stop.
    """
    _check_name(a)
    x = _check_point(x)
    ax = abs(x)

    def terms(n):
        xn = np.power(x, n.astype(np.float64)) if not isinstance(x, complex) else np.power(x, n)
        return _coefficients(a, n, table) * xn / (1.0 - xn)

    def tails(n, _terms):
        axn = np.power(ax, n.astype(np.float64))
        return _coefficient_bound(a, n) * axn / ((1.0 - axn) * (1.0 - ax))

    return _sum_until_small(terms, tails, tol, cap)


def terms_for_tolerance(x: Number, tol: float = 1e-12, growth: float = 1.0) -> int:
    """Smallest ``N`` with ``N^growth |x|^N / (1 - |x|) < tol`` (power-series truncation)."""
    ax = abs(x)
    if ax == 0.0:
        return 1
    N = max(1, int(math.log(tol * (1.0 - ax)) / math.log(ax)))
    while N**growth * ax**N / (1.0 - ax) >= tol:
        N = int(N * 1.1) + 1
    return N


def eval_power_series(
    a: str,
    x: Number,
    N: int,
    table: Optional[ArithTable] = None,
    tol: float = 1e-12,
) -> EvalReport:
    """Rearranged form ``sum_{n<=N} b_n x^n`` with ``b_n = sum_{m|n} a_m``."""
    _check_name(a)
    x = _check_point(x)
    N = int(N)
    if not 1 <= N <= POWER_SERIES_CAP:
        raise SizeError(f"N must lie in [1, {POWER_SERIES_CAP}], got {N}")
    n = np.arange(1, N + 1, dtype=np.int64)
    a_n = _coefficients(a, n, table)
    if a in ("one", "mobius", "phi", "liouville"):
        a_n = a_n.astype(np.int64)
    b = divisor_convolve_with_one(a_n)
    powers = np.power(x, n) if isinstance(x, complex) else np.power(x, n.astype(np.float64))
    value = _report_value(np.sum(b * powers))
    ax = abs(x)
    err = float(abs(b[-1]) * ax ** (N + 1) / (1.0 - ax))
    reason = StopReason.TOLERANCE_MET if err <= tol * max(1.0, abs(value)) else StopReason.TERM_CAP
    return EvalReport(value, N, reason, err)


def eval_clausen(x: float, tol: float = 1e-12, cap: int = TERM_CAP) -> EvalReport:
    """Divisor series via ``sum_n x^{n^2} (1 + x^n) / (1 - x^n)``."""
    x = float(_check_point(x, real_only=True))
    if x < 0:
        raise DomainError(f"Clausen engine needs 0 <= x, got {x}")

    def terms(n):
        nf = n.astype(np.float64)
        xn = np.power(x, nf)
        return np.power(x, nf * nf) * (1.0 + xn) / (1.0 - xn)

    def tails(n, t):
        # successive terms shrink by at least x^{2n+1}
        ratio = np.power(x, 2.0 * n + 1.0)
        return np.abs(t) / (1.0 - ratio)

    return _sum_until_small(terms, tails, tol, cap)


def _log_pochhammer_inverse(ax: float, N: int) -> float:
    """``-sum_{k<=N} log(1 - ax^k)``, i.e. log of the reciprocal q-Pochhammer product."""
    k = np.arange(1, N + 1, dtype=np.float64)
    return float(-np.sum(np.log1p(-np.power(ax, k))))


def eval_eisenstein_qseries(
    z: Number, N: int = QSERIES_CAP, tol: float = 1e-15
) -> EvalReport:
    """Divisor series from the q-factorial form.

    ``f(z) = 1/(z;z)_inf * sum_{n>=1} (-1)^{n+1} n z^{n(n+1)/2} / (z;z)_n``.
    The inner alternating sum is roughly ``f / (z;z)_inf^{-1}``, far smaller
    than its largest terms when ``|z|`` is near 1, so it is evaluated in
    extended precision with enough guard digits to absorb the cancellation.
    Both the product and the sum run to at most ``N`` factors/terms.
    """
    z = _check_point(z)
    N = int(N)
    if not 1 <= N <= QSERIES_CAP:
        raise SizeError(f"N must lie in [1, {QSERIES_CAP}], got {N}")
    if z == 0:
        return EvalReport(0.0, 1, StopReason.TOLERANCE_MET, 0.0)
    ax = abs(z)
    lost = _log_pochhammer_inverse(ax, min(N, 20_000)) / math.log(10)
    dps = 20 + int(math.ceil(lost))
    with mpmath.workdps(dps):
        eps = mpmath.mpf(10) ** (-dps)
        zz = mpmath.mpc(z) if isinstance(z, complex) else mpmath.mpf(z)
        # (z;z)_N, stopping once the factors are 1 to working precision
        prod = mpmath.mpf(1)
        zk = mpmath.mpf(1)
        k_used = N
        for k in range(1, N + 1):
            zk *= zz
            prod *= 1 - zk
            if abs(zk) < eps:
                k_used = k
                break
        prod_tail = float(abs(zk) * ax / (1 - ax)) if k_used == N else 0.0

        inner = mpmath.mpf(0)
        poch = mpmath.mpf(1)
        zn = mpmath.mpf(1)
        tri = mpmath.mpf(1)  # z^{n(n+1)/2}
        n_used = N
        last = mpmath.mpf(0)
        for n in range(1, N + 1):
            zn *= zz
            poch *= 1 - zn
            tri *= zn
            last = n * tri / poch
            inner += last if n % 2 else -last
            if abs(last) < eps * max(1, abs(inner)):
                n_used = n
                break
        value = inner / prod
        inner_tail = float(abs(last / prod))
        result = _report_value(complex(value))
    err = max(prod_tail * abs(result), inner_tail)
    reason = StopReason.TOLERANCE_MET if err <= tol * max(1.0, abs(result)) else StopReason.TERM_CAP
    return EvalReport(result, max(k_used, n_used), reason, err)


def _cf_raw_level(k: int, t: float) -> tuple[float, float]:
    """Partial numerator ``a_k`` and denominator ``b_k`` of the divisor-series fraction in ``t = 1/z``.

    ``a_1 = 1``, ``a_2j = t^(j-1) (t^j - 1)^2``, ``a_(2j+1) = t^j (t^j - 1)^2``, ``b_k = t^k - 1``.
    The general law is extrapolated from the first seven levels.
    """
    if k == 1:
        a = 1.0
    else:
        j = k // 2
        a = t ** (j - 1 if k % 2 == 0 else j) * (t**j - 1.0) ** 2
    return a, t**k - 1.0


def _cf_normalised_level(k: int, z: float) -> float:
    # a_k / (b_{k-1} b_k) rewritten in z = 1/t; keeps every quantity O(1)
    if k == 1:
        return z / (1.0 - z)
    j = k // 2
    if k % 2 == 0:
        return z**j * (1.0 - z**j) ** 2 / ((1.0 - z ** (2 * j - 1)) * (1.0 - z ** (2 * j)))
    return z ** (j + 1) * (1.0 - z**j) ** 2 / ((1.0 - z ** (2 * j)) * (1.0 - z ** (2 * j + 1)))


def _cf_bottom_up(z: float, depth: int) -> Optional[float]:
    tail = 0.0
    for k in range(depth, 1, -1):
        denom = 1.0 - tail
        if denom == 0.0 or not math.isfinite(denom):
            return None
        tail = _cf_normalised_level(k, z) / denom
    denom = 1.0 - tail
    if denom == 0.0 or not math.isfinite(denom):
        return None
    return _cf_normalised_level(1, z) / denom


def eval_eisenstein_cf(z: float, depth: int = 60) -> EvalReport:
    """Divisor series from its continued fraction, truncated at ``depth`` levels.

    The fraction ``1/(t-1 - (t-1)^2/(t^2-1 - t(t-1)^2/(t^3-1 - ...))`` with
    ``t = 1/z`` is evaluated after the equivalence transformation that divides
    level ``k`` by ``b_k = t^k - 1``; convergents are unchanged and nothing
    overflows at large depth.  ``error_estimate`` is the change from depth-1.
    """
    z = _check_point(z, real_only=True, guard=1e-6)
    z = float(z)
    if not z > 0:
        raise DomainError(f"continued fraction needs 0 < z, got {z}")
    depth = int(depth)
    if not 1 <= depth <= CF_DEPTH_CAP:
        raise SizeError(f"depth must lie in [1, {CF_DEPTH_CAP}], got {depth}")
    value = _cf_bottom_up(z, depth)
    if value is None:
        return EvalReport(math.nan, depth, StopReason.DIVERGENCE_GUARD, math.inf)
    if depth == 1:
        return EvalReport(value, 1, StopReason.TERM_CAP, math.inf)
    prev = _cf_bottom_up(z, depth - 1)
    err = abs(value - prev) if prev is not None else math.inf
    reason = StopReason.TOLERANCE_MET if err <= 1e-15 * max(1.0, abs(value)) else StopReason.TERM_CAP
    return EvalReport(value, depth, reason, err)


# -- identities ----------------------------------------------------------------

def identity_closed_form(name: str, x: Number) -> Number:
    """Right-hand side of the named Lambert identity."""
    if name == "mobius":
        return x
    if name == "phi":
        return x / (1.0 - x) ** 2
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    if name == "liouville":
        count = int(math.sqrt(math.log(1e-18) / math.log(ax))) + 2
        n = np.arange(1, count + 1, dtype=np.float64)
        return _report_value(np.sum(np.power(x, n * n)))
    if name == "mangoldt":
        count = terms_for_tolerance(x, 1e-18, growth=1.0) + 10
        n = np.arange(1, count + 1, dtype=np.float64)
        powers = np.power(x, n) if isinstance(x, complex) else np.power(float(x), n)
        return _report_value(np.sum(np.log(n) * powers))
    raise UsageError(f"unknown identity {name!r}; expected one of {IDENTITY_NAMES}")


def identity_residual(
    name: str, x: Number, tol: float = 1e-13, table: Optional[ArithTable] = None
) -> float:
    """``|lambert(a, x) - closed form|`` for a in {mobius, phi, liouville, mangoldt}."""
    if name not in IDENTITY_NAMES:
        raise UsageError(f"unknown identity {name!r}; expected one of {IDENTITY_NAMES}")
    x = _check_point(x)
    if abs(x) > 0.95:
        raise DomainError(f"identity residuals need |x| <= 0.95, got {x}")
    lhs = eval_naive(name, x, tol=tol, table=table).value
    return float(abs(lhs - identity_closed_form(name, x)))


# -- derivative of x^k/(1-x^k) at 0 --------------------------------------------

def burhenne_fk_derivative(k: int, n: int, exact: bool = False):
    """n-th derivative at 0 of ``F_k(x) = x^k/(1-x^k)``.

    Odd ``k``: ``n!`` when ``k | n``, else 0.  Even ``k``: ``n! - (n!/k)(1 + (-1)^(n+1))``
    when ``k | n``, else 0.  ``exact=True`` returns an ``int`` (``k, n <= 20``),
    otherwise a float (``k, n <= 170``).
    """
    k, n = int(k), int(n)
    if k < 1 or n < 1:
        raise DomainError(f"k and n must be positive, got k={k}, n={n}")
    cap = FACTORIAL_EXACT_CAP if exact else FACTORIAL_FLOAT_CAP
    if k > cap or n > cap:
        raise SizeError(f"k, n must be <= {cap} in {'exact' if exact else 'float'} mode")
    if n % k:
        value = Fraction(0)
    else:
        fact = Fraction(math.factorial(n))
        if k % 2:
            value = fact
        else:
            value = fact - fact / k * (1 + (-1) ** (n + 1))
    if exact:
        assert value.denominator == 1
        return int(value)
    return float(value)


# -- singularity probe ---------------------------------------------------------

PROBE_TERM_CAP = 5 * 10**7


def singularity_probe(p: int, q: int, r: float, tol: float = 1e-15) -> SingularityProbe:
    """Sum ``(1-r) f(z)`` at ``z = r e^{2 pi i p/q}`` split by ``q | n``.

    Summation stops once the minor-arc tail bound
    ``(1-r) r^{N/2} / (2 sin(pi/q) (1 - sqrt r))`` drops below ``tol``.
    """
    p, q = int(p), int(q)
    if q < 2 or p < 1:
        raise UsageError(f"need p >= 1 and q >= 2, got p={p}, q={q}")
    if math.gcd(p, q) != 1:
        raise UsageError(f"p={p} and q={q} are not coprime")
    r = float(r)
    if not 0.0 < r <= 1.0 - 1e-7:
        raise DomainError(f"r must lie in (0, 1 - 1e-7], got {r}")
    one_minus_r = 1.0 - r
    s = math.sin(math.pi / q)
    target = tol * 2.0 * s * (1.0 - math.sqrt(r)) / one_minus_r
    N = min(PROBE_TERM_CAP, max(q, int(2.0 * math.log(target) / math.log(r)) + 1))
    tail = one_minus_r * r ** (N / 2) / (2.0 * s * (1.0 - math.sqrt(r)))

    major_parts = []
    minor = 0j
    chunk = 1 << 18
    for start in range(1, N + 1, chunk):
        n = np.arange(start, min(start + chunk, N + 1), dtype=np.int64)
        rn = np.power(r, n.astype(np.float64))
        on_major = n % q == 0
        rm = rn[on_major]
        major_parts.append(float(np.sum(rm / (1.0 - rm))))
        nm = n[~on_major]
        phase = np.exp(2j * np.pi * ((p * nm) % q) / q)
        zn = rn[~on_major] * phase
        minor += complex(np.sum(zn / (1.0 - zn)))
    return SingularityProbe(
        p=p,
        q=q,
        r=r,
        major_arc=one_minus_r * math.fsum(major_parts),
        minor_arc=one_minus_r * minor,
        major_lower_bound=-math.log1p(-(r**q)) / q,
        minor_upper_bound=1.0 / s,
        terms_used=N,
        tail_bound=tail,
    )


def singularity_growth(q: int, p: int = 1, js=range(4, 13)) -> list[tuple[float, float]]:
    """``(r, (1-r)|f(r e^{2 pi i p/q})|)`` along ``r = 1 - 2^-j``."""
    out = []
    for j in js:
        r = 1.0 - 2.0 ** (-j)
        out.append((r, abs(singularity_probe(p, q, r).total)))
    return out
