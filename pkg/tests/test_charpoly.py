import math
from fractions import Fraction

import numpy
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import hermite_e
from scipy.special import eval_genlaguerre

from raney.charpoly import (KINDS, ODE_BUDGET, Antisym, Bures, Hermite,
                            HypergeometricSpec, InverseProduct, Product,
                            RationalPolynomial, TwoSource, charpoly_family,
                            hyp_poly, leading_order_ratio, log_derivative,
                            log_derivative_resolvent, ode_residual,
                            resolvent_ladder, verify_ode)
from raney.errors import InvalidBottomParameter, PolynomialZero
from raney.simulate import esym_closed_form

FAMILIES = [Hermite, Antisym, Bures, lambda n: Product(1, n),
            lambda n: Product(2, n, (1, 2)), lambda n: InverseProduct(1, 1, n),
            lambda n: InverseProduct(2, 1, n, (1, 0), (2,)), TwoSource,
            lambda n: TwoSource(n, Fraction(1, 2))]


def test_small_hypergeometric_polynomials():
    assert hyp_poly(HypergeometricSpec((-1,), ('1/2', 1))) == \
        RationalPolynomial([1, -2])
    assert hyp_poly(HypergeometricSpec((0,), (1,))) == RationalPolynomial([1])
    assert hyp_poly(HypergeometricSpec((-1, 3), (1, '3/2'))) == \
        RationalPolynomial([1, -2])


def test_bad_bottom_parameter():
    with pytest.raises(InvalidBottomParameter):
        HypergeometricSpec((-2,), (0,))
    with pytest.raises(InvalidBottomParameter):
        HypergeometricSpec((-2,), (-3,))


def test_known_small_polynomials():
    assert charpoly_family(Antisym(1)) == RationalPolynomial([-1, 0, 1])
    assert charpoly_family(Bures(1)).format() == 'λ − 2'
    assert charpoly_family(Product(2, 1)) == RationalPolynomial([-1, 1])
    assert charpoly_family(InverseProduct(1, 1, 3)) == \
        RationalPolynomial([-6, 54, -54, 6])


@pytest.mark.parametrize('N', [1, 2, 5, 9])
def test_hermite_matches_probabilists_hermite(N):
    # p(lam) = N**(-N/2) He_N(sqrt(N) lam)
    p = charpoly_family(Hermite(N))
    for lam in [0.3, -1.1, 1.7]:
        ref = hermite_e.hermeval(math.sqrt(N) * lam, [0] * N + [1])
        assert float(p(Fraction(lam))) == pytest.approx(
            ref * N ** (-N / 2), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize('N,nu', [(1, 0), (3, 0), (6, 2)])
def test_product_one_factor_is_laguerre(N, nu):
    p = charpoly_family(Product(1, N, (nu,)))
    for lam in [0.4, 2.5, 7.0]:
        # monic: (-1)^N N! L_N^nu
        ref = (-1) ** N * math.factorial(N) * eval_genlaguerre(N, nu, lam)
        assert float(p(Fraction(lam))) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize('N', range(1, 9))
def test_bures_coefficients_are_esym_averages(N):
    # <det(lam - H)> = sum (-1)^p <e_p> lam^(N-p), and with the Gaussian
    # factor <e_p> picks up N!/(N-p)!
    p = charpoly_family(Bures(N))
    for k in range(N + 1):
        expected = (-1) ** k * esym_closed_form(k, N) * \
            math.factorial(N) // math.factorial(N - k)
        assert p[N - k] == expected


def test_two_source_single_block():
    for a in [Fraction(0), Fraction(1), Fraction(3, 2)]:
        assert charpoly_family(TwoSource(1, a)) == \
            RationalPolynomial([-a * a - Fraction(1, 2), 0, 1])


def test_two_source_monte_carlo():
    # E det(lam - M), M = W + diag(a, a, -a, -a), E|W_ij|^2 = 1/4
    rng = numpy.random.default_rng(0)
    n, trials = 4, 200_000
    z = rng.standard_normal((trials, n, n)) + 1j * rng.standard_normal(
        (trials, n, n))
    W = (z + numpy.conj(numpy.swapaxes(z, 1, 2))) / math.sqrt(2) * 0.5 / \
        math.sqrt(2)
    M = W + numpy.diag([1.0, 1.0, -1.0, -1.0])
    lam = 0.7
    mc = numpy.linalg.det(lam * numpy.eye(n) - M).real
    p = charpoly_family(TwoSource(2))
    assert numpy.mean(mc) == pytest.approx(float(p(Fraction(lam))),
                                           abs=5 * numpy.std(mc) /
                                           math.sqrt(trials))


@pytest.mark.parametrize('make', FAMILIES)
def test_ode_holds_exactly(make):
    assert all(verify_ode(make(n)) for n in range(1, 13))


@pytest.mark.parametrize('make', FAMILIES)
def test_ode_rejects_perturbed_polynomial(make):
    kind = make(4)
    p = charpoly_family(kind) + RationalPolynomial([Fraction(1, 7)])
    assert not ode_residual(kind, p).is_zero()


def test_ode_budget():
    with pytest.raises(ValueError):
        verify_ode(Hermite(ODE_BUDGET + 1))


@pytest.mark.parametrize('make,z', [(Hermite, 3.0), (Bures, 1 + 1j),
                                    (lambda n: Product(1, n), 5.0),
                                    (TwoSource, 0.5 + 1j)])
def test_ladder_decreases(make, z):
    errs = [e for _, _, e in resolvent_ladder(make(10), z, (10, 20, 40))]
    assert errs[0] > errs[1] > errs[2]


def test_leading_order_replacement():
    for kind, z in [(Hermite(40), 3.0), (Bures(40), 4.0),
                    (Product(1, 40), 5.0)]:
        assert leading_order_ratio(kind, z) <= 0.15


def test_log_derivative_at_root():
    with pytest.raises(PolynomialZero):
        log_derivative(charpoly_family(Bures(1)), 2.0)


def test_log_derivative_resolvent_large_z():
    # G(z) ~ 1/z
    g = log_derivative_resolvent(Product(1, 10), 1e6)
    assert g == pytest.approx(1e-6, rel=1e-5)


def test_kinds_registry():
    assert set(KINDS) == {'hermite', 'antisym', 'bures', 'product',
                          'inverse-product', 'two-source'}


def test_json_round_trip_and_format():
    p = charpoly_family(Bures(3))
    assert RationalPolynomial.from_json(p.to_json()) == p
    assert RationalPolynomial([Fraction(1, 2), 0, 1]).format() == 'λ^2 + 1/2'


small = st.fractions(min_value=-5, max_value=5, max_denominator=9)
polys = st.lists(small, min_size=0, max_size=6).map(RationalPolynomial)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys, polys)
def test_product_rule(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@settings(max_examples=60)
@given(polys, small, small)
def test_complex_evaluation_is_correctly_rounded(p, x, y):
    z = complex(float(x), float(y))
    vals = p.evaluate_complex(z, 1)
    # exact oracle: real and imaginary parts of p(x + iy) by expansion
    X, Y = Fraction(z.real), Fraction(z.imag)
    re, im = Fraction(0), Fraction(0)
    pr, pi_ = Fraction(1), Fraction(0)
    for c in p.coefficients:
        re += c * pr
        im += c * pi_
        pr, pi_ = pr * X - pi_ * Y, pr * Y + pi_ * X
    assert vals[0] == complex(float(re), float(im))
