import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raney.combinat import (RaneyParams, as_fraction, fuss_catalan,
                            fuss_catalan_recurrence, moment_series_partial,
                            raney_number, raney_numbers)
from raney.errors import DomainError


def series_power_oracle(p, r, k_max):
    """[z^k] B(z)**r with B = 1 + z B**p, by fixed-point iteration on
    truncated integer series (integer p, r only)."""

    def mul(a, b):
        return [sum(a[i] * b[n - i] for i in range(n + 1))
                for n in range(k_max + 1)]

    def power(a, e):
        out = [1] + [0] * k_max
        for _ in range(e):
            out = mul(out, a)
        return out

    B = [1] + [0] * k_max
    for _ in range(k_max + 1):
        B = [1] + power(B, p)[:k_max]
    return power(B, r)


def test_catalan_numbers():
    assert [fuss_catalan(1, k) for k in range(8)] == [1, 1, 2, 5, 14, 42,
                                                     132, 429]


def test_fuss_catalan_known_values():
    # ternary trees
    assert [fuss_catalan(2, k) for k in range(6)] == [1, 1, 3, 12, 55, 273]


@pytest.mark.parametrize('s', [1, 2, 3, 4])
def test_fuss_catalan_matches_recurrence(s):
    for k in range(13):
        assert fuss_catalan(s, k) == fuss_catalan_recurrence(s, k)


@pytest.mark.parametrize('p', [2, 3, 4, 5, 6])
def test_raney_r1_is_fuss_catalan(p):
    for k in range(13):
        assert raney_number(RaneyParams(p, 1), k) == fuss_catalan(p - 1, k)


@pytest.mark.parametrize('p,r', [(2, 1), (3, 1), (3, 2), (3, 3), (4, 3),
                                 (5, 2)])
def test_raney_matches_series_oracle(p, r):
    assert raney_numbers(RaneyParams(p, r), 10) == series_power_oracle(p, r,
                                                                       10)


def test_rational_parameters():
    P = RaneyParams('3/2', '1/2')
    assert raney_number(P, 0) == 1
    assert raney_number(P, 1) == Fraction(1, 2)
    # R(2) = (1/2)/(7/2) * binom(7/2, 2)
    assert raney_number(P, 2) == Fraction(1, 7) * Fraction(7, 2) * \
        Fraction(5, 2) / 2


def test_first_moment_is_r():
    for p, r in [(2, 1), (3, 2), ('5/2', '3/4')]:
        P = RaneyParams(p, r)
        assert raney_number(P, 1) == P.r


def test_domain_errors():
    with pytest.raises(DomainError):
        RaneyParams(1, 1)
    with pytest.raises(DomainError):
        RaneyParams(2, 3)
    with pytest.raises(DomainError):
        RaneyParams(2, 0)
    with pytest.raises(DomainError):
        raney_number(RaneyParams(2, 1), -1)
    with pytest.raises(DomainError):
        fuss_catalan(0, 3)


def test_as_fraction():
    assert as_fraction('3/2') == Fraction(3, 2)
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction(4) == 4


def test_support_endpoint():
    assert RaneyParams(2, 1).K == pytest.approx(4.0, rel=1e-15)
    assert RaneyParams(3, 1).K == pytest.approx(6.75, rel=1e-15)


def test_partial_series_converges():
    P = RaneyParams(2, 1)
    z = 8.0
    exact = (z - (z * z - 4 * z) ** 0.5) / (2 * z)
    assert abs(moment_series_partial(P, z, 60) - exact) < 1e-14


def test_big_index_is_fast():
    t = time.perf_counter()
    v = fuss_catalan(4, 2000)
    assert v > 0 and time.perf_counter() - t < 1.0


fractions_p = st.fractions(min_value=Fraction(9, 8), max_value=Fraction(6),
                           max_denominator=8)


@settings(max_examples=60, deadline=None)
@given(st.integers(9, 48), st.data())
def test_convolution_property(a8, data):
    # B^r * B^s = B^(r+s) coefficientwise; everything in eighths
    p = Fraction(a8, 8)
    i = data.draw(st.integers(1, a8 - 1))
    j = data.draw(st.integers(1, a8 - i))
    r, s = Fraction(i, 8), Fraction(j, 8)
    a = raney_numbers(RaneyParams(p, r), 6)
    b = raney_numbers(RaneyParams(p, s), 6)
    c = raney_numbers(RaneyParams(p, r + s), 6)
    for n in range(7):
        assert sum(a[i] * b[n - i] for i in range(n + 1)) == c[n]


@settings(max_examples=60, deadline=None)
@given(fractions_p, st.integers(0, 12))
def test_shift_property(p, k):
    # B^p = (B - 1)/z
    assert raney_number(RaneyParams(p, p), k) == \
        raney_number(RaneyParams(p, 1), k + 1)


@given(st.integers(2, 7), st.integers(0, 30))
def test_integer_params_give_integers(p, k):
    for r in range(1, p + 1):
        assert raney_number(RaneyParams(p, r), k).denominator == 1
