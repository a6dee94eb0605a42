"""Mertens' constant ``H = sum_p sum_{m>=2} 1/(m p^m)`` and checks of both Mertens theorems.

``H`` is the gap between Euler's constant and the constant in
``sum_{p<=x} 1/p = log log x + gamma - H + delta(x)``.  Two routes compute it:
a Mobius-weighted series of ``log zeta(n)`` and the defining double sum
over primes with a rigorous tail bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .arith import ArithTable, build_table, prime_reciprocal_sum, primes_upto
from .asymptotics import ResidualScan, fit_exponent
from .errors import DomainError, OutOfRangeError, UsageError
from .special import EULER_GAMMA, log_zeta, prime_zeta

__all__ = [
    "MERTENS_H",
    "MertensReport",
    "mertens_H_mobius",
    "mertens_H_direct",
    "mertens_report",
    "mertens_first_check",
    "mertens_second_bound",
    "mertens_second_rows",
    "mertens_second_check",
]

# 10 digits from mertens_H_mobius(); the test suite recomputes it
MERTENS_H = 0.3157184521


@dataclass(frozen=True)
class MertensReport:
    H_mobius: float
    H_direct: float
    agreement: float
    terms_mobius: int
    prime_limit_direct: int
    m_cap_direct: int
    tail_bound_direct: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _mobius_terms() -> list:
    mu = build_table(128).mu
    terms = []
    n = 2
    while True:
        lz = log_zeta(n)
        if lz < 1e-18:
            break
        terms.append(-int(mu[n]) * lz / n)
        n += 1
    return terms


def mertens_H_mobius() -> float:
    """``H = -sum_{n>=2} mu(n) log zeta(n) / n``, summed until ``log zeta(n) < 1e-18``."""
    return math.fsum(_mobius_terms())


def mertens_H_direct(
    prime_limit: int, m_cap: int, table: Optional[ArithTable] = None
) -> tuple[float, float]:
    """Double sum over ``p <= prime_limit`` and ``2 <= m <= m_cap``, plus a tail bound.

    The bound adds two pieces.  Truncating ``m`` costs at most
    ``sum_p p^-(m_cap+1) / ((m_cap+1)(1 - 1/p))`` over the included primes.
    Primes beyond ``L = prime_limit`` are majorised by all integers ``n > L``,
    whose inner sums are ``f(n) = -log(1 - 1/n) - 1/n``; ``f`` decreases, so
    the total is below ``int_L^inf f = 1 + (L-1) log(1 - 1/L)``.
    """
    prime_limit = int(prime_limit)
    m_cap = int(m_cap)
    if m_cap < 2:
        raise DomainError(f"m_cap must be >= 2, got {m_cap}")
    if prime_limit < 2:
        raise DomainError(f"prime_limit must be >= 2, got {prime_limit}")
    if table is not None:
        if prime_limit > table.limit:
            raise OutOfRangeError(f"prime_limit {prime_limit} exceeds table limit {table.limit}")
        primes = table.primes[table.primes <= prime_limit]
    else:
        primes = primes_upto(prime_limit)
    p = primes.astype(np.float64)
    inv = 1.0 / p
    parts = []
    power = inv * inv
    for m in range(2, m_cap + 1):
        s = float(np.sum(power))
        if s == 0.0:
            break
        parts.append(s / m)
        power = power * inv
    value = math.fsum(parts)
    m_tail = float(np.sum(np.power(inv, m_cap + 1) / (1.0 - inv))) / (m_cap + 1)
    u = 1.0 / prime_limit
    # 1 + (L-1) log(1 - 1/L), rewritten to avoid cancellation
    p_tail = ((1.0 - u) * math.log1p(-u) + u) / u
    return value, m_tail + p_tail


def mertens_report(prime_limit: int = 10**7, m_cap: int = 64, table: Optional[ArithTable] = None) -> MertensReport:
    terms = _mobius_terms()
    h_mob = math.fsum(terms)
    h_dir, tail = mertens_H_direct(prime_limit, m_cap, table)
    return MertensReport(
        H_mobius=h_mob,
        H_direct=h_dir,
        agreement=abs(h_mob - h_dir),
        terms_mobius=len(terms),
        prime_limit_direct=prime_limit,
        m_cap_direct=m_cap,
        tail_bound_direct=tail,
    )


def mertens_first_check(rho_grid: Sequence[float], H: float = MERTENS_H) -> ResidualScan:
    """Residuals ``P(1+rho) - log(1/rho) + H`` of the prime zeta function near its pole.

    ``linear_slope`` is the least-squares slope of residual against ``rho``,
    for comparison with the ``rho``-linear correction inherited from ``log zeta``.
    """
    rhos = [float(r) for r in rho_grid]
    if not rhos:
        raise UsageError("empty rho grid")
    if not all(1e-3 <= r <= 0.5 for r in rhos):
        raise DomainError("rho must lie in [1e-3, 0.5]")
    if any(b >= a for a, b in zip(rhos, rhos[1:])):
        raise UsageError("rho grid must be strictly decreasing")
    points = tuple((r, prime_zeta(1.0 + r) - math.log(1.0 / r) + H) for r in rhos)
    slope = float(np.polyfit(rhos, [v for _, v in points], 1)[0]) if len(rhos) > 1 else math.nan
    return ResidualScan(
        points=points,
        fitted_exponent=fit_exponent(rhos, [v for _, v in points]) if len(rhos) > 1 else math.nan,
        linear_slope=slope,
    )


def mertens_second_bound(x: float) -> float:
    """``4/log(x+1) + 2/(x log x)``."""
    return 4.0 / math.log(x + 1.0) + 2.0 / (x * math.log(x))


def mertens_second_rows(x_grid: Sequence[float], table: ArithTable, H: float = MERTENS_H) -> list:
    """``delta(x) = sum_{p<=x} 1/p - log log x - gamma + H`` against its explicit bound."""
    xs = [float(x) for x in x_grid]
    if not xs:
        raise UsageError("empty x grid")
    rows = []
    for x in xs:
        if x < 3:
            raise DomainError(f"x must be >= 3, got {x}")
        delta = prime_reciprocal_sum(x, table) - math.log(math.log(x)) - EULER_GAMMA + H
        bound = mertens_second_bound(x)
        rows.append({"x": x, "delta": delta, "bound": bound, "margin": bound - abs(delta)})
    return rows


def mertens_second_check(x_grid: Sequence[float], table: ArithTable, H: float = MERTENS_H) -> float:
    """Smallest ``bound(x) - |delta(x)|`` on the grid."""
    return min(r["margin"] for r in mertens_second_rows(x_grid, table, H))
