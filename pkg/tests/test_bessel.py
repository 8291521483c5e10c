import math

import numpy as np
import pytest

from kickent.bessel import bessel_j, bessel_j_row
from kickent.errors import DomainError

from _oracles import bessel_reference


def test_zero_argument_is_kronecker():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    row = bessel_j_row(-2, 2, 0.0)
    assert row.values.tolist() == [0.0, 0.0, 1.0, 0.0, 0.0]


def test_frozen_value():
    # J_1(2) from the extended-precision series
    assert abs(bessel_j(1, 2.0) - 0.5767248077568734) < 1e-15


def test_negative_order_parity():
    assert bessel_j(-2, 1.5) == bessel_j(2, 1.5)
    assert bessel_j(-3, 1.5) == -bessel_j(3, 1.5)


def test_against_series_oracle_grid():
    rng = np.random.default_rng(42)
    xs = np.concatenate([rng.uniform(-50, 50, size=20),
                         [0.1, -0.1, 1.0, 12.5, 49.0]])
    for x in xs:
        row = bessel_j_row(-40, 40, float(x))
        for k in (-40, -17, -3, -1, 0, 1, 2, 8, 25, 40):
            want = bessel_reference(k, float(x))
            got = row.values[k + 40]
            assert abs(got - want) <= 1e-13, (k, x, got, want)
            if abs(want) > 1e-280:
                assert abs(got - want) <= 1e-12 * abs(want), (k, x)


def test_large_argument_and_order():
    for k, x in ((0, 1e4), (500, 1e4), (1000, 900.0), (200, 3.0)):
        want = bessel_reference(k, x)
        assert abs(bessel_j(k, x) - want) <= 1e-13, (k, x)


def test_small_argument_decay_profile():
    # entry k behaves like (x/2)^k / k! near the origin; the first
    # correction is a factor 1 - x^2/(4(k+1)), so allow a 1% band
    x = 0.1
    row = bessel_j_row(0, 5, x)
    for k in range(6):
        lead = (x / 2.0) ** k / math.factorial(k)
        assert abs(row.values[k] / lead - 1.0) < 1e-2


def test_three_term_recurrence():
    rng = np.random.default_rng(7)
    for x in np.concatenate([[1.0, 0.1, -13.7], rng.uniform(0.1, 50, 8)]):
        row = bessel_j_row(-201, 201, float(x))
        v = row.values
        for k in range(-200, 201):
            if k == 0:
                continue
            res = v[k - 1 + 201] + v[k + 1 + 201] - (2.0 * k / x) * v[k + 201]
            assert abs(res) <= 1e-11 * max(1.0, abs(v[k + 201])), (k, x)


def test_even_order_normalization():
    for x in (-50.0, -7.3, 0.5, 12.0, 33.0, 50.0):
        row = bessel_j_row(0, 400, x)
        total = row.values[0] + 2.0 * row.values[2::2].sum()
        assert abs(total - 1.0) < 1e-10, x


def test_row_parity_across_row():
    row = bessel_j_row(-30, 30, 9.25)
    for k in range(1, 31):
        a, b = row.values[30 - k], (-1.0) ** k * row.values[30 + k]
        assert a == b or abs(a - b) <= 1e-12 * abs(b)


def test_underflow_flush_to_zero():
    # far tail orders underflow and must be exact zeros, not denormals
    row = bessel_j_row(0, 900, 1.0)
    assert row.values[-1] == 0.0
    assert not np.any((row.values != 0.0) & (np.abs(row.values) < 1e-300))


def test_domain_guards():
    with pytest.raises(DomainError):
        bessel_j(1001, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, 1.1e4)
    with pytest.raises(DomainError):
        bessel_j_row(5, 2, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, float("nan"))


def test_row_matches_scalar():
    # scalar path uses its own start order, so last-ulp wiggle is allowed
    row = bessel_j_row(-7, 12, 3.3)
    for i, k in enumerate(range(-7, 13)):
        assert abs(row.values[i] - bessel_j(k, 3.3)) <= 1e-13
