"""Reduced indefinite forms, class numbers, Pell solutions, smoothed L-values."""

import math
from decimal import Decimal, getcontext

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geocorr.errors import ResourceLimitError
from geocorr.quadforms import (
    QuadForm,
    class_number,
    class_number_oracle,
    is_discriminant,
    pell_fundamental,
    reduce_step,
    reduced_forms,
    smoothed_L,
    smoothed_L_reference,
)


def brute_reduced_forms(d):
    """Enumerate reduced primitive forms straight from the inequalities."""
    out = []
    s = math.isqrt(d)
    for b in range(1, s + 1):
        if (b * b - d) % 4:
            continue
        for aa in range(1, s + 1):
            if not ((2 * aa + b) ** 2 > d and (2 * aa - b < 0 or (2 * aa - b) ** 2 < d)):
                continue
            if (d - b * b) % (4 * aa):
                continue
            for a in (aa, -aa):
                c = (b * b - d) // (4 * a)
                if math.gcd(math.gcd(abs(a), b), abs(c)) == 1:
                    out.append(QuadForm(a, b, c))
    return sorted(out, key=lambda f: (f.b, -f.a))


def valid_discriminants(limit):
    return [d for d in range(5, limit + 1) if d % 4 <= 1 and math.isqrt(d) ** 2 != d]


def test_reduced_forms_smallest_discriminant():
    assert reduced_forms(5) == [QuadForm(1, 1, -1), QuadForm(-1, 1, 1)]


def test_reduced_forms_match_brute_enumeration():
    for d in valid_discriminants(400):
        assert reduced_forms(d) == brute_reduced_forms(d), d


def test_reduced_forms_rejects_bad_input():
    for bad in (0, -4, 7, 16, 25):
        with pytest.raises(ValueError):
            reduced_forms(bad)


def test_class_number_pinned_values():
    pins = {5: 1, 8: 1, 12: 2, 13: 1, 21: 2, 45: 2, 60: 4, 77: 2, 229: 3, 1621: 1}
    for d, h in pins.items():
        assert class_number(d) == h, d


def test_reduce_step_permutes_reduced_forms():
    for d in valid_discriminants(300):
        forms = reduced_forms(d)
        images = [reduce_step(f) for f in forms]
        assert sorted(images, key=lambda f: (f.b, -f.a)) == forms
        # discriminant is preserved along the cycle
        assert all(f.b * f.b - 4 * f.a * f.c == d for f in images)


@given(st.integers(min_value=5, max_value=20000).filter(lambda d: d % 4 <= 1))
def test_class_number_bounds(d):
    if math.isqrt(d) ** 2 == d:
        assert not is_discriminant(d)
        return
    h = class_number(d)
    assert 1 <= h <= 2 * math.sqrt(d) * math.log(d)


def brute_pell(d):
    u = 3
    while True:
        m = u * u - 4
        if m % d == 0:
            v = math.isqrt(m // d)
            if v * v * d == m:
                return u, v
        u += 1


@pytest.mark.parametrize("d,u,v", [(5, 3, 1), (8, 6, 2), (12, 4, 1), (13, 11, 3), (60, 8, 1)])
def test_pell_fundamental_pins(d, u, v):
    pf = pell_fundamental(d)
    assert (pf.u, pf.v) == (u, v)
    assert pf.u * pf.u - d * pf.v * pf.v == 4


def test_pell_fundamental_matches_ascending_search():
    for d in valid_discriminants(150):
        pf = pell_fundamental(d, u_bound=None)
        assert (pf.u, pf.v) == brute_pell(d), d


def test_pell_bound_enforced_and_liftable():
    # d=1621 has a huge fundamental solution
    with pytest.raises(ResourceLimitError):
        pell_fundamental(1621)
    pf = pell_fundamental(1621, u_bound=None)
    assert pf.u == 23267330432525342852015627
    assert pf.u**2 - 1621 * pf.v**2 == 4


def test_regulator_against_high_precision():
    getcontext().prec = 60
    for d in (5, 8, 13, 60, 316, 1621):
        pf = pell_fundamental(d, u_bound=None)
        ref = ((Decimal(pf.u) + Decimal(pf.v) * Decimal(d).sqrt()) / 2).ln()
        assert pf.regulator == pytest.approx(float(ref), abs=1e-12)
        assert pf.u > 2


def test_smoothed_L_matches_pure_reference():
    for d in (5, 8, 12, 21, 77, 316):
        for smoothing in (256.0, 1024.0):
            assert smoothed_L(d, smoothing) == pytest.approx(
                smoothed_L_reference(d, smoothing), abs=1e-12
            )


def test_smoothed_L_regression_pin():
    assert smoothed_L(5, 4096) == pytest.approx(0.4304089290430779, abs=1e-13)


def test_class_number_oracle_agrees_on_small_range():
    for d in valid_discriminants(500):
        assert class_number_oracle(d) == class_number(d), d


def test_analytic_estimate_lands_within_rounding_margin():
    # sqrt(d) L / regulator must sit within 0.25 of the integer it rounds to
    for d in (5, 12, 229, 1621):
        h = class_number(d)
        reg = pell_fundamental(d, u_bound=None).regulator
        est = math.sqrt(d) * smoothed_L(d, 65536.0) / reg
        assert abs(est - h) < 0.25, (d, est, h)
