import cmath
import math
from fractions import Fraction
from math import factorial

import mpmath
import numpy as np
import pytest

from lambertkit.arith import build_table
from lambertkit.errors import DomainError, SizeError, UsageError
from lambertkit.series import (
    StopReason,
    _cf_normalised_level,
    _cf_raw_level,
    burhenne_fk_derivative,
    eval_clausen,
    eval_eisenstein_cf,
    eval_eisenstein_qseries,
    eval_naive,
    eval_power_series,
    identity_closed_form,
    identity_residual,
    singularity_growth,
    singularity_probe,
    terms_for_tolerance,
)


def d_series_mp(x, terms=4000):
    """Sum d(n) x^n in extended precision as an engine-independent reference."""
    d = build_table(terms).d
    with mpmath.workdps(30):
        xx = mpmath.mpc(x) if isinstance(x, complex) else mpmath.mpf(x)
        return complex(mpmath.fsum(int(d[n]) * xx**n for n in range(1, terms + 1)))


# -- naive -------------------------------------------------------------------

def test_naive_at_zero():
    r = eval_naive("one", 0.0)
    assert r.value == 0.0 and r.stop_reason is StopReason.TOLERANCE_MET


def test_naive_matches_power_series_at_half():
    naive = eval_naive("one", 0.5).value
    assert naive == pytest.approx(eval_power_series("one", 0.5, 200).value, abs=1e-12)


def test_naive_mobius_identity():
    assert abs(eval_naive("mobius", 0.3).value - 0.3) < 1e-12


def test_naive_report_contract():
    for x in (0.1, 0.5, 0.9, -0.7, 0.4 + 0.5j):
        r = eval_naive("d", x, tol=1e-12)
        assert r.terms_used >= 1 and r.error_estimate >= 0
        assert r.stop_reason is StopReason.TOLERANCE_MET
        assert r.error_estimate <= 1e-12 * max(1.0, abs(r.value))


def test_naive_complex_point():
    z = 0.5 * cmath.exp(0.7j)
    assert abs(eval_naive("one", z).value - d_series_mp(z)) < 1e-12


def test_naive_term_cap_is_not_an_error():
    r = eval_naive("one", 0.999999, cap=1000)
    assert r.stop_reason is StopReason.TERM_CAP and r.terms_used == 1000


@pytest.mark.parametrize("x", [1.0, 1.5, -1.0, 1 - 1e-10, complex(0.6, 0.8)])
def test_naive_domain(x):
    with pytest.raises(DomainError):
        eval_naive("one", x)


def test_unknown_coefficient():
    with pytest.raises(UsageError):
        eval_naive("sigma", 0.5)


def test_zero_coefficients_do_not_stop_early():
    # mu vanishes on 4, 8, 9, ... and Lambda on most n; the tail envelope ignores that
    for name in ("mobius", "mangoldt"):
        r = eval_naive(name, 0.5, tol=1e-14)
        assert abs(r.value - identity_closed_form(name, 0.5)) < 1e-13


# -- power series ---------------------------------------------------------------

def test_power_series_examples():
    assert eval_power_series("phi", 0.25, 200).value == pytest.approx(0.25 / 0.75**2, abs=1e-14)
    expected = math.fsum(0.6 ** (n * n) for n in range(1, 30))
    assert eval_power_series("liouville", 0.6, 300).value == pytest.approx(expected, abs=1e-14)


def test_power_series_size_guard():
    with pytest.raises(SizeError):
        eval_power_series("one", 0.5, 0)
    with pytest.raises(SizeError):
        eval_power_series("one", 0.5, 10**7 + 1)


def test_terms_for_tolerance():
    N = terms_for_tolerance(0.5, 1e-12)
    assert N * 0.5**N / 0.5 < 1e-12
    assert terms_for_tolerance(0.0) == 1


# -- Clausen ------------------------------------------------------------------------

def test_clausen_zero_and_half():
    assert eval_clausen(0.0).value == 0.0
    assert eval_clausen(0.5).value == pytest.approx(eval_power_series("one", 0.5, 200).value, abs=1e-14)


def test_clausen_fewer_terms_at_09():
    c = eval_clausen(0.9, tol=1e-14)
    n = eval_naive("one", 0.9, tol=1e-14)
    assert abs(c.value - n.value) < 1e-12
    assert 5 * c.terms_used <= n.terms_used


def test_clausen_rejects_negative_and_complex():
    with pytest.raises(DomainError):
        eval_clausen(-0.3)
    with pytest.raises(DomainError):
        eval_clausen(0.3j)


# -- Eisenstein q-series ----------------------------------------------------------------

def test_qseries_examples():
    assert eval_eisenstein_qseries(0.0).value == 0.0
    assert abs(eval_eisenstein_qseries(0.4).value - eval_naive("one", 0.4).value) < 1e-11
    assert abs(eval_eisenstein_qseries(0.8).value - eval_clausen(0.8).value) < 1e-9


def test_qseries_complex():
    z = 0.6 * cmath.exp(1.1j)
    assert abs(eval_eisenstein_qseries(z).value - d_series_mp(z)) < 1e-12


def test_qseries_guard():
    with pytest.raises(SizeError):
        eval_eisenstein_qseries(0.5, N=10**4 + 1)


# -- continued fraction ------------------------------------------------------------------

def test_cf_first_convergent():
    r = eval_eisenstein_cf(0.3, depth=1)
    assert r.value == pytest.approx(0.3 / 0.7)


def test_cf_against_naive():
    assert abs(eval_eisenstein_cf(0.2, 30).value - eval_naive("one", 0.2).value) < 1e-10
    for z in (0.1, 0.2, 0.3, 0.5):
        assert abs(eval_eisenstein_cf(z, 60).value - eval_naive("one", z).value) < 1e-8


def test_cf_convergents_settle_at_half():
    target = eval_naive("one", 0.5, tol=1e-15).value
    errs = [abs(eval_eisenstein_cf(0.5, D).value - target) for D in range(1, 61)]
    assert errs[-1] < 1e-14
    # once converged it stays converged
    assert max(errs[20:]) < 1e-12


def test_cf_displayed_levels():
    # the first seven levels written with t = 1/z
    t = 3.0
    shown = [
        (1.0, t - 1),
        ((t - 1) ** 2, t**2 - 1),
        (t * (t - 1) ** 2, t**3 - 1),
        (t * (t**2 - 1) ** 2, t**4 - 1),
        (t**2 * (t**2 - 1) ** 2, t**5 - 1),
        (t**2 * (t**3 - 1) ** 2, t**6 - 1),
        (t**3 * (t**3 - 1) ** 2, t**7 - 1),
    ]
    for k, (a, b) in enumerate(shown, start=1):
        assert _cf_raw_level(k, t) == pytest.approx((a, b))


def test_cf_normalised_equals_raw_ratio():
    z = 0.37
    t = 1 / z
    for k in range(2, 15):
        a, b = _cf_raw_level(k, t)
        _, b_prev = _cf_raw_level(k - 1, t)
        assert _cf_normalised_level(k, z) == pytest.approx(a / (b_prev * b), rel=1e-12)


def test_cf_guards():
    with pytest.raises(SizeError):
        eval_eisenstein_cf(0.5, 501)
    with pytest.raises(DomainError):
        eval_eisenstein_cf(0.0, 10)
    with pytest.raises(DomainError):
        eval_eisenstein_cf(1 - 1e-7, 10)


# -- cross-engine -------------------------------------------------------------------------

@pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_engines_agree(x):
    ref = d_series_mp(x).real
    values = {
        "naive": eval_naive("one", x).value,
        "power": eval_power_series("one", x, terms_for_tolerance(x, 1e-16)).value,
        "clausen": eval_clausen(x).value,
        "qseries": eval_eisenstein_qseries(x).value,
    }
    for name, v in values.items():
        assert abs(v - ref) < 1e-9 * max(1, abs(ref)), name
    vs = list(values.values())
    assert max(vs) - min(vs) < 1e-9


# -- identities ----------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["mobius", "phi", "liouville", "mangoldt"])
def test_identity_residuals_grid(name):
    for k in range(1, 10):
        assert identity_residual(name, k / 10) < 1e-10, (name, k)


def test_identity_examples():
    assert identity_residual("mobius", 0.5) < 1e-12
    assert identity_residual("phi", 0.0) == 0.0
    assert identity_residual("mangoldt", 0.7) < 1e-10


def test_identity_closed_forms_against_mpmath():
    with mpmath.workdps(30):
        x = mpmath.mpf("0.7")
        lam = mpmath.nsum(lambda n: x ** (n * n), [1, mpmath.inf])
        man = mpmath.nsum(lambda n: mpmath.log(n) * x**n, [1, mpmath.inf])
    assert identity_closed_form("liouville", 0.7) == pytest.approx(float(lam), rel=1e-14)
    assert identity_closed_form("mangoldt", 0.7) == pytest.approx(float(man), rel=1e-13)


def test_identity_guards():
    with pytest.raises(UsageError):
        identity_residual("d", 0.5)
    with pytest.raises(DomainError):
        identity_residual("mobius", 0.96)


# -- derivatives of x^k/(1-x^k) --------------------------------------------------------------

def test_fk_examples():
    assert burhenne_fk_derivative(3, 5) == 0
    assert burhenne_fk_derivative(2, 4) == 24.0
    assert burhenne_fk_derivative(2, 4, exact=True) == 24


def test_fk_against_taylor_coefficients():
    # coefficient of x^n in x^k/(1-x^k) is 1 when k | n, so F_k^(n)(0) = n! there
    for k in range(1, 13):
        for n in range(1, 21):
            expect = factorial(n) if n % k == 0 else 0
            assert burhenne_fk_derivative(k, n, exact=True) == expect


def test_fk_column_sums():
    d = build_table(20).d
    for n in range(1, 21):
        total = sum(burhenne_fk_derivative(k, n, exact=True) for k in range(1, n + 1))
        assert total == int(d[n]) * factorial(n)


def test_fk_guards():
    with pytest.raises(SizeError):
        burhenne_fk_derivative(2, 21, exact=True)
    with pytest.raises(SizeError):
        burhenne_fk_derivative(2, 171)
    assert burhenne_fk_derivative(1, 170) == pytest.approx(float(factorial(170)))
    with pytest.raises(DomainError):
        burhenne_fk_derivative(0, 3)


# -- singularity probe ------------------------------------------------------------------------

def test_probe_examples():
    p = singularity_probe(1, 5, 0.99)
    assert p.major_arc >= -math.log(1 - 0.99**5) / 5
    p = singularity_probe(1, 2, 0.9)
    assert abs(p.minor_arc) < 1.0


def test_probe_total_matches_direct_sum():
    r, q = 0.95, 3
    z = r * cmath.exp(2j * math.pi / q)
    p = singularity_probe(1, q, r)
    assert p.total == pytest.approx((1 - r) * d_series_mp(z, 3000), abs=1e-12)


def test_probe_vanishes_near_zero():
    p = singularity_probe(1, 3, 1e-6)
    assert abs(p.total) < 1e-5


@pytest.mark.parametrize("q", [2, 3, 5])
def test_probe_bounds_and_growth(q):
    for r in (0.9, 0.99, 0.999):
        assert singularity_probe(1, q, r).bounds_hold
    growth = [v for _, v in singularity_growth(q)]
    assert all(b > a for a, b in zip(growth, growth[1:]))


def test_probe_guards():
    with pytest.raises(UsageError):
        singularity_probe(2, 4, 0.9)
    with pytest.raises(UsageError):
        singularity_probe(1, 1, 0.9)
    with pytest.raises(DomainError):
        singularity_probe(1, 3, 1.0)


def test_report_as_dict():
    d = eval_naive("one", 0.3 + 0.1j).as_dict()
    assert set(d) == {"value", "terms_used", "error_estimate", "stop_reason"}
    assert isinstance(d["value"], list) and d["stop_reason"] == "tolerance_met"
