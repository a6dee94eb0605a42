"""Sieved tables of the classical arithmetic functions.

Everything is indexed by ``n`` itself: ``table.d[12] == 6``.  Slot 0 is a
placeholder (zero in every table) so that slices line up with the integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import OutOfRangeError, SizeError, UsageError

__all__ = [
    "MAX_LIMIT",
    "ArithTable",
    "build_table",
    "primes_upto",
    "divisor_convolve_with_one",
    "chebyshev_theta",
    "chebyshev_psi",
    "prime_reciprocal_sum",
    "shared_table",
]

MAX_LIMIT = 10**8


def primes_upto(n: int) -> np.ndarray:
    """Primes ``p <= n`` as an int64 array (plain Eratosthenes, bool sieve)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    if n > MAX_LIMIT:
        raise SizeError(f"prime sieve limit {n} exceeds guard {MAX_LIMIT}")
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@dataclass(frozen=True, eq=False)
class ArithTable:
    """Immutable table of d, mu, phi, lambda, Omega, Lambda and primality on 0..limit."""

    limit: int
    d: np.ndarray
    mu: np.ndarray
    phi: np.ndarray
    liouville: np.ndarray
    big_omega: np.ndarray
    von_mangoldt: np.ndarray
    is_prime: np.ndarray

    def __post_init__(self):
        for name in ("d", "mu", "phi", "liouville", "big_omega", "von_mangoldt", "is_prime"):
            getattr(self, name).setflags(write=False)

    def __repr__(self):
        return f"ArithTable(limit={self.limit})"

    @cached_property
    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.is_prime).astype(np.int64)

    @cached_property
    def prime_count(self) -> np.ndarray:
        """``prime_count[n] == pi(n)``."""
        return np.cumsum(self.is_prime, dtype=np.int64)

    @cached_property
    def _theta_cumsum(self) -> np.ndarray:
        logs = np.where(self.is_prime, self.von_mangoldt, 0.0)
        return np.cumsum(logs)

    @cached_property
    def _psi_cumsum(self) -> np.ndarray:
        return np.cumsum(self.von_mangoldt)

    @cached_property
    def h_cumsum(self) -> np.ndarray:
        """``h_cumsum[n] == sum_{m<=n} (Lambda(m) - 1)/m``."""
        n = np.arange(self.limit + 1, dtype=np.float64)
        n[0] = 1.0
        vals = (self.von_mangoldt - 1.0) / n
        vals[0] = 0.0
        return np.cumsum(vals)

    @cached_property
    def _recip_cumsum(self) -> np.ndarray:
        n = np.arange(self.limit + 1, dtype=np.float64)
        n[0] = 1.0
        return np.cumsum(np.where(self.is_prime, 1.0 / n, 0.0))

    def coefficients(self, name: str, count: int) -> np.ndarray:
        """Return ``a_1..a_count`` for a named arithmetic function."""
        if count > self.limit:
            raise OutOfRangeError(f"need {count} coefficients, table holds {self.limit}")
        source = {
            "d": self.d,
            "mobius": self.mu,
            "phi": self.phi,
            "liouville": self.liouville,
            "mangoldt": self.von_mangoldt,
        }
        if name == "one":
            return np.ones(count, dtype=np.int64)
        try:
            arr = source[name]
        except KeyError:
            raise UsageError(f"unknown arithmetic function {name!r}") from None
        return arr[1 : count + 1]


def build_table(limit: int) -> ArithTable:
    """Sieve all tables up to ``limit``.

    Primes up to ``sqrt(limit)`` are handled one at a time with vectorised
    exponent counting on their multiples; what remains of each ``n`` after
    removing those is either 1 or a single large prime, which is handled in
    one vectorised pass.  Total work is O(N log log N).
    """
    limit = int(limit)
    if limit < 1 or limit > MAX_LIMIT:
        raise SizeError(f"table limit must lie in [1, {MAX_LIMIT}], got {limit}")
    n = limit
    idx = np.arange(n + 1, dtype=np.int64)

    is_prime = np.zeros(n + 1, dtype=bool)
    is_prime[primes_upto(n)] = True

    d = np.ones(n + 1, dtype=np.int32)
    mu = np.ones(n + 1, dtype=np.int8)
    phi = idx.astype(np.int32 if n < 2**31 else np.int64)
    big_omega = np.zeros(n + 1, dtype=np.int8)
    vm = np.zeros(n + 1, dtype=np.float64)
    rem = idx.copy()

    root = math.isqrt(n)
    for p in np.flatnonzero(is_prime[: root + 1]):
        p = int(p)
        count = n // p
        e = np.zeros(count, dtype=np.int8)
        step = 1
        logp = math.log(p)
        pk = p
        while pk <= n:
            # slot j of the p-slice holds (j+1)*p, divisible by p^k iff p^(k-1) | (j+1)
            e[step - 1 :: step] += 1
            vm[pk] = logp
            step *= p
            pk *= p
        d[p::p] *= (e + 1).astype(np.int32)
        mu_slice = mu[p::p]
        mu_slice *= np.where(e == 1, -1, 0).astype(np.int8)
        phi_slice = phi[p::p]
        phi_slice -= phi_slice // p
        big_omega[p::p] += e
        rem[p::p] //= np.power(p, e.astype(np.int64))

    big = rem > 1
    d[big] *= 2
    mu[big] *= -1
    phi[big] -= (phi[big] // rem[big]).astype(phi.dtype)
    big_omega[big] += 1
    large_primes = is_prime.copy()
    large_primes[: root + 1] = False
    vm[large_primes] = np.log(idx[large_primes].astype(np.float64))

    liouville = np.where(big_omega % 2 == 1, -1, 1).astype(np.int8)
    for arr in (d, mu, phi, big_omega, liouville):
        arr[0] = 0
    return ArithTable(
        limit=n,
        d=d,
        mu=mu,
        phi=phi,
        liouville=liouville,
        big_omega=big_omega,
        von_mangoldt=vm,
        is_prime=is_prime,
    )


_shared: dict = {}


def shared_table(min_limit: int) -> ArithTable:
    """A process-wide table covering at least ``min_limit`` (rounded up to a power of two).

    Only the most recent size is kept, so memory stays bounded.
    """
    size = 1 << max(12, (int(min_limit) - 1).bit_length())
    cached = next((t for t in _shared.values() if t.limit >= min_limit), None)
    if cached is not None:
        return cached
    table = build_table(size)
    _shared.clear()
    _shared[size] = table
    return table


def divisor_convolve_with_one(a) -> np.ndarray:
    """Return ``b`` with ``b_n = sum_{m | n} a_m``; ``a[0]`` holds ``a_1``.

    Harmonic-sum loop, O(N log N). Integer input stays integer (exact).
    """
    a = np.asarray(a)
    N = a.shape[0]
    if N < 1:
        raise SizeError("coefficient sequence must be non-empty")
    if N > MAX_LIMIT:
        raise SizeError(f"sequence length {N} exceeds guard {MAX_LIMIT}")
    if np.issubdtype(a.dtype, np.integer) or a.dtype == bool:
        dtype = np.int64
    else:
        dtype = np.result_type(a.dtype, np.float64)
    b = np.zeros(N, dtype=dtype)
    for m in np.flatnonzero(a) + 1:
        b[m - 1 :: m] += a[m - 1]
    return b


def _floor_checked(x: float, table: ArithTable) -> int:
    if x < 0:
        raise OutOfRangeError(f"x must be >= 0, got {x}")
    if x > table.limit:
        raise OutOfRangeError(f"x={x} exceeds table limit {table.limit}")
    return math.floor(x)


def chebyshev_theta(x: float, table: ArithTable) -> float:
    """Sum of ``log p`` over primes ``p <= x``."""
    return float(table._theta_cumsum[_floor_checked(x, table)])


def chebyshev_psi(x: float, table: ArithTable) -> float:
    """Sum of von Mangoldt ``Lambda(n)`` over ``n <= x``."""
    return float(table._psi_cumsum[_floor_checked(x, table)])


def prime_reciprocal_sum(x: float, table: ArithTable) -> float:
    """Sum of ``1/p`` over primes ``p <= x``; requires ``x >= 2``."""
    if x < 2:
        raise OutOfRangeError(f"x must be >= 2, got {x}")
    return float(table._recip_cumsum[_floor_checked(x, table)])
