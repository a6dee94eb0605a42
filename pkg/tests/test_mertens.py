import math

import mpmath
import pytest

from lambertkit.arith import build_table
from lambertkit.errors import DomainError, OutOfRangeError, UsageError
from lambertkit.mertens import (
    MERTENS_H,
    _mobius_terms,
    mertens_first_check,
    mertens_H_direct,
    mertens_H_mobius,
    mertens_report,
    mertens_second_bound,
    mertens_second_check,
    mertens_second_rows,
)


def test_h_mobius_value():
    h = mertens_H_mobius()
    assert 0.3 < h < 0.33
    assert h == pytest.approx(MERTENS_H, abs=1e-10)
    # independent: Meissel-Mertens constant minus gamma, from mpmath
    assert h == pytest.approx(float(mpmath.euler - mpmath.mertens), abs=1e-14)


def test_h_mobius_first_term():
    terms = _mobius_terms()
    assert terms[0] == pytest.approx(math.log(math.pi**2 / 6) / 2, rel=1e-14)
    assert terms[0] == pytest.approx(0.2487, abs=5e-4)
    # mu vanishes at 4, 8, 9
    assert terms[2] == terms[6] == terms[7] == 0


def test_h_direct_two_terms():
    value, _ = mertens_H_direct(2, 3)
    assert value == pytest.approx(1 / 8 + 1 / 24, rel=1e-15)


def test_h_direct_within_tail_bound():
    h = mertens_H_mobius()
    value, tail = mertens_H_direct(10**5, 40)
    assert 0 <= h - value <= tail


def test_h_direct_tail_bound_decreases():
    tails = [mertens_H_direct(L, 40)[1] for L in (10**3, 10**4, 10**5)]
    assert tails[0] > tails[1] > tails[2]


def test_h_direct_with_table():
    t = build_table(10**4)
    assert mertens_H_direct(10**4, 30, t) == mertens_H_direct(10**4, 30)
    with pytest.raises(OutOfRangeError):
        mertens_H_direct(10**4 + 1, 30, t)
    with pytest.raises(DomainError):
        mertens_H_direct(100, 1)


def test_report_agreement():
    rep = mertens_report()
    assert rep.agreement <= 1e-8
    assert rep.agreement <= rep.tail_bound_direct
    assert 0.3 < rep.H_direct < 0.33
    assert rep.terms_mobius > 50
    assert set(rep.as_dict()) >= {"H_mobius", "H_direct", "agreement"}


def test_first_theorem_residuals_shrink():
    scan = mertens_first_check([0.5, 0.1, 0.01, 0.001])
    res = [abs(r) for r in scan.residuals]
    assert all(math.isfinite(r) for r in res)
    assert res[1] > res[2] > res[3]


def test_first_theorem_linear_coefficient():
    # residual ~ rho * (gamma + sum_{n>=2} mu(n) zeta'(n)/zeta(n)) as rho -> 0
    mu = build_table(100).mu
    with mpmath.workdps(30):
        slope = mpmath.euler + mpmath.fsum(
            int(mu[n]) * mpmath.zeta(n, derivative=1) / mpmath.zeta(n) for n in range(2, 90)
        )
    scan = mertens_first_check([0.004, 0.002, 0.001])
    assert scan.linear_slope == pytest.approx(float(slope), abs=0.01)


def test_first_theorem_guards():
    with pytest.raises(DomainError):
        mertens_first_check([0.6])
    with pytest.raises(UsageError):
        mertens_first_check([])
    with pytest.raises(UsageError):
        mertens_first_check([0.01, 0.1])


def test_second_theorem(table_1e6):
    assert mertens_second_check([10], table_1e6) > 0
    assert mertens_second_check([10**3, 10**4, 10**5, 10**6], table_1e6) > 0
    rows = mertens_second_rows([10**6], table_1e6)
    assert rows[0]["margin"] > 0.25


def test_second_bound_decreasing():
    xs = [3, 10, 100, 10**3, 10**6]
    b = [mertens_second_bound(x) for x in xs]
    assert all(v > w for v, w in zip(b, b[1:]))


def test_second_guards(table_1e6):
    with pytest.raises(DomainError):
        mertens_second_check([2], table_1e6)
    with pytest.raises(UsageError):
        mertens_second_check([], table_1e6)
    with pytest.raises(OutOfRangeError):
        mertens_second_check([2e6], table_1e6)
