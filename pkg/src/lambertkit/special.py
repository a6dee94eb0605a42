"""Bernoulli numbers, real zeta, prime zeta, Ei and the cot(h/2) expansion."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .arith import ArithTable, build_table
from .errors import DomainError, SizeError

__all__ = [
    "EULER_GAMMA",
    "BernoulliCache",
    "bernoulli_numbers",
    "zeta_real",
    "zeta_minus_one",
    "log_zeta",
    "prime_zeta",
    "exp_integral_ei",
    "ei_symmetric_combo",
    "cot_half_expansion",
    "gamma_bernoulli_partial_sums",
]

EULER_GAMMA = 0.57721566490153286

MAX_BERNOULLI_COUNT = 200

# Euler-Maclaurin configuration for zeta: direct terms below ZETA_CUTOFF,
# tail corrections through B_{2*ZETA_ORDER}.
ZETA_CUTOFF = 50
ZETA_ORDER = 5

EI_SERIES_RADIUS = 40.0
EI_OVERFLOW_GUARD = 700.0
EI_COMBO_CROSSOVER = 500.0


@dataclass(frozen=True)
class BernoulliCache:
    """Bernoulli numbers ``B_0..B_max_index`` (convention ``B_1 = -1/2``)."""

    max_index: int
    exact: tuple
    approx: tuple

    def __getitem__(self, m: int) -> Fraction:
        return self.exact[m]


@lru_cache(maxsize=None)
def _bernoulli_list(max_index: int) -> tuple:
    B = [Fraction(1)]
    for m in range(1, max_index + 1):
        if m > 1 and m % 2 == 1:
            B.append(Fraction(0))
            continue
        # sum_{j=0}^{m} C(m+1, j) B_j = 0, solved for B_m
        acc = Fraction(0)
        binom = 1
        for j in range(m):
            acc += binom * B[j]
            binom = binom * (m + 1 - j) // (j + 1)
        B.append(-acc / (m + 1))
    return tuple(B)


def bernoulli_numbers(count: int) -> BernoulliCache:
    """Exact Bernoulli numbers up to index ``2*count``."""
    if count < 0 or count > MAX_BERNOULLI_COUNT:
        raise SizeError(f"count must lie in [0, {MAX_BERNOULLI_COUNT}], got {count}")
    # two cached prefixes: the common small one, and the full guarded range
    exact = _bernoulli_list(2 * MAX_BERNOULLI_COUNT if count > 40 else 80)[: 2 * count + 1]
    return BernoulliCache(
        max_index=2 * count,
        exact=exact,
        approx=tuple(_to_float(b) for b in exact),
    )


def _to_float(q: Fraction) -> float:
    try:
        return float(q)
    except OverflowError:  # |B_m| passes 1e308 near m = 260
        return math.inf if q > 0 else -math.inf


@lru_cache(maxsize=None)
def _zeta_tail_coeffs() -> tuple:
    B = bernoulli_numbers(ZETA_ORDER)
    return tuple(float(B[2 * k]) / math.factorial(2 * k) for k in range(1, ZETA_ORDER + 1))


def zeta_minus_one(s: float) -> float:
    """``zeta(s) - 1`` for real ``s >= 1 + 1e-6``, accurate in relative terms.

    Direct sum over ``2 <= n < 50`` plus the Euler-Maclaurin tail at ``M = 50``
    with corrections through ``B_10``.
    """
    s = float(s)
    if not s >= 1.0 + 1e-6:
        raise DomainError(f"zeta needs s >= 1 + 1e-6, got {s}")
    M = ZETA_CUTOFF
    head = math.fsum(n ** (-s) for n in range(2, M))
    Ms = M ** (-s)
    tail = M * Ms / (s - 1.0) + 0.5 * Ms
    rising = s  # s (s+1) ... (s+2k-2)
    power = Ms / M  # M^{-s-2k+1}
    for k, c in enumerate(_zeta_tail_coeffs(), start=1):
        tail += c * rising * power
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= M * M
    return head + tail


def zeta_real(s: float) -> float:
    """Riemann zeta at real ``s > 1``."""
    return 1.0 + zeta_minus_one(s)


def log_zeta(s: float) -> float:
    """``log zeta(s)``, computed as ``log1p(zeta(s) - 1)`` so large ``s`` stays accurate."""
    return math.log1p(zeta_minus_one(s))


@lru_cache(maxsize=1)
def _small_mobius_table() -> ArithTable:
    return build_table(4096)


def prime_zeta(s: float, table: Optional[ArithTable] = None) -> float:
    """Prime zeta ``P(s) = sum_p p^{-s}`` via ``sum_n mu(n)/n * log zeta(ns)``.

    Terms are added until ``log zeta(ns)/n < 1e-15``; the magnitude test ignores
    ``mu(n)`` so a run of non-squarefree ``n`` cannot stop the sum early.
    """
    s = float(s)
    if not s >= 1.0 + 1e-3:
        raise DomainError(f"prime_zeta needs s >= 1 + 1e-3, got {s}")
    mu = (table or _small_mobius_table()).mu
    terms = []
    n = 1
    while True:
        if n >= len(mu):
            raise SizeError(f"mobius table too short for prime_zeta({s})")
        mag = log_zeta(n * s) / n
        if mag < 1e-15:
            break
        if mu[n]:
            terms.append(int(mu[n]) * mag)
        n += 1
    return math.fsum(terms)


def _ei_series(x: float) -> float:
    # gamma + log|x| + sum x^k / (k k!)
    term = 1.0
    terms = [EULER_GAMMA, math.log(abs(x))]
    scale = 1.0
    k = 1
    while True:
        term *= x / k
        t = term / k
        terms.append(t)
        scale = max(scale, abs(t))
        if k > abs(x) and abs(t) < 1e-18 * scale:
            break
        k += 1
    return math.fsum(terms)


def _ei_asymptotic(x: float) -> float:
    # e^x / x * sum k!/x^k, truncated before the smallest term
    total = 1.0
    term = 1.0
    k = 1
    while True:
        nxt = term * k / x
        if nxt >= term or nxt < 1e-18:
            if nxt < term:
                total += nxt
            break
        term = nxt
        total += term
        k += 1
    return math.exp(x) / x * total


def _e1_scaled_cf(y: float) -> float:
    """``e^y E_1(y)`` for ``y > 1`` via the continued fraction (modified Lentz)."""
    tiny = 1e-300
    b = y + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    i = 1
    while i < 10_000:
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
        i += 1
    return h


def exp_integral_ei(x: float) -> float:
    """Exponential integral ``Ei(x)`` for real ``x != 0``, ``|x| <= 700``.

    Positive ``x``: power series up to 40, asymptotic series beyond.
    Negative ``x``: power series for ``|x| <= 1``; the alternating series
    cancels catastrophically further out, so ``Ei(x) = -E_1(-x)`` is taken
    from the continued fraction there.
    """
    x = float(x)
    if x == 0.0:
        raise DomainError("Ei has a logarithmic singularity at 0")
    if abs(x) > EI_OVERFLOW_GUARD:
        raise DomainError(f"|x| must be <= {EI_OVERFLOW_GUARD}, got {x}")
    if x > 0:
        return _ei_series(x) if x <= EI_SERIES_RADIUS else _ei_asymptotic(x)
    if x >= -1.0:
        return _ei_series(x)
    return -_e1_scaled_cf(-x) * math.exp(x)


def _combo_asymptotic(y: float) -> float:
    # 2 * sum_{j odd} j!/y^{j+1}, stopped at the smallest term
    total = 0.0
    term = 1.0 / (y * y)  # j = 1
    j = 1
    while True:
        total += term
        nxt = term * (j + 1) * (j + 2) / (y * y)
        if nxt >= term or nxt < 1e-18 * total:
            break
        term = nxt
        j += 2
    return 2.0 * total


def ei_symmetric_combo(y: float) -> float:
    """``g(y) = e^y Ei(-y) + e^{-y} Ei(y)`` for ``y > 0``.

    The two ``1/y`` leading parts cancel and ``g(y) ~ 2/y^2``.
    """
    y = float(y)
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    if y > EI_COMBO_CROSSOVER:
        return _combo_asymptotic(y)
    return math.exp(y) * exp_integral_ei(-y) + math.exp(-y) * exp_integral_ei(y)


def cot_half_expansion(h: float, k: int) -> tuple[float, float]:
    """Partial sum of ``cot(h/2)/2 - 1/h`` with a rigorous remainder bound.

    Returns ``(value, bound)`` where ``value = sum_{m=1}^{k-1} B_2m (-1)^m
    h^(2m-1) / (2m)!`` and ``bound = |B_2k| h^2k / ((2k)! |sin h|)``.
    """
    h = float(h)
    if not 0.0 < h < math.pi:
        raise DomainError(f"h must lie in (0, pi), got {h}")
    if not 1 <= k <= 30:
        raise SizeError(f"order k must lie in [1, 30], got {k}")
    B = bernoulli_numbers(k)
    terms = [
        float(B[2 * m]) * (-1) ** m * h ** (2 * m - 1) / math.factorial(2 * m)
        for m in range(1, k)
    ]
    bound = abs(float(B[2 * k])) * h ** (2 * k) / (math.factorial(2 * k) * abs(math.sin(h)))
    return math.fsum(terms), bound


def gamma_bernoulli_partial_sums(K: int) -> list[float]:
    """Partial sums ``1/2 + sum_{n<=k} (-1)^(n+1) B_2n / (2n)`` for ``k = 1..K``.

    The series diverges; the partial sums only approach Euler's constant at
    small ``k`` before the Bernoulli growth takes over.
    """
    if not 0 <= K <= 40:
        raise SizeError(f"K must lie in [0, 40], got {K}")
    B = bernoulli_numbers(K)
    acc = Fraction(1, 2)
    out = []
    for n in range(1, K + 1):
        acc += (-1) ** (n + 1) * B[2 * n] / (2 * n)
        out.append(float(acc))
    return out
