import math

import numpy
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raney.combinat import RaneyParams, raney_number
from raney.errors import DomainError
from raney.simulate import (Antisymmetric, Bures, InverseProduct,
                            ProductWishart, ShiftedProduct, SymmetricLaw,
                            TwoSourceGUE, calibrate_antisymmetric, compare,
                            esym_average_mc, esym_closed_form,
                            hard_edge_exponent, sample_gaussian_matrix,
                            sample_haar_unitary, spectrum)


def test_gaussian_entries():
    rng = numpy.random.default_rng(1)
    z = sample_gaussian_matrix(1000, 1000, 'complex', rng)
    assert numpy.mean(numpy.abs(z) ** 2) == pytest.approx(1, abs=0.01)
    x = sample_gaussian_matrix(1000, 1000, 'real', rng)
    assert abs(numpy.mean(x)) < 0.01 and x.dtype == float
    a = sample_gaussian_matrix(2, 2, 'real', numpy.random.default_rng(5))
    b = sample_gaussian_matrix(2, 2, 'real', numpy.random.default_rng(5))
    assert numpy.array_equal(a, b)


def test_haar_unitarity_and_moments():
    rng = numpy.random.default_rng(2)
    U = sample_haar_unitary(30, rng)
    assert numpy.max(numpy.abs(U @ U.conj().T - numpy.eye(30))) < 1e-12
    batch = sample_haar_unitary(3, rng, size=100_000)
    tr = numpy.trace(batch, axis1=-2, axis2=-1)
    assert abs(numpy.mean(tr)) < 0.02
    assert numpy.mean(numpy.abs(tr) ** 2) == pytest.approx(1, abs=0.02)
    phases = sample_haar_unitary(1, rng, size=100_000)[:, 0, 0]
    assert abs(numpy.mean(phases)) < 0.01


def test_determinism():
    a = spectrum(ProductWishart(2, 20), 4, seed=11)
    b = spectrum(ProductWishart(2, 20), 4, seed=11)
    c = spectrum(ProductWishart(2, 20), 4, seed=12)
    assert numpy.array_equal(a.values, b.values)
    assert not numpy.array_equal(a.values, c.values)
    assert a.trials == 4 and len(a) == 80


def test_trials_are_order_independent():
    # the first trial of a longer run equals a one-trial run
    one = spectrum(ProductWishart(1, 15), 1, seed=3).values
    two = spectrum(ProductWishart(1, 15), 2, seed=3).values
    assert numpy.all(numpy.isin(one, two))


def test_product_moments():
    s = spectrum(ProductWishart(2, 200), 50, seed=7)
    for k in (1, 2, 3):
        exact = float(raney_number(RaneyParams(3, 1), k))
        assert numpy.mean(s.values ** k) == pytest.approx(exact, rel=0.05)


def test_rectangular_offsets():
    ens = ProductWishart(1, 100, (100,))
    s = spectrum(ens, 10, seed=1)
    # ratio 1/2: MP with mean 1 and hard edge pushed away from zero
    assert numpy.mean(s.values) == pytest.approx(1, rel=0.02)
    assert s.values.min() > 0.05


def test_mp_and_negative_control():
    s = spectrum(ProductWishart(1, 200), 50, seed=7)
    assert compare(s, 'raney:2,1').ks <= 0.03
    assert compare(s, 'raney:3,1').ks > 0.1


def test_tiny_sample_path():
    rep = compare(spectrum(ProductWishart(1, 10), 1, seed=0), 'raney:2,1')
    assert 0 <= rep.ks <= 1 and rep.n == 10


def test_inverse_product_median():
    s = spectrum(InverseProduct(1, 1, 200), 20, seed=4)
    assert numpy.median(s.values) == pytest.approx(1, abs=0.05)
    rep = compare(s, 'fsq:1,1')
    assert rep.moments == [] and rep.notes


def test_bures_mean():
    s = spectrum(Bures(200), 20, seed=5)
    assert numpy.mean(s.values) == pytest.approx(0.5, abs=0.02)


def test_antisymmetric_pairs():
    v = spectrum(Antisymmetric(30), 3, seed=6).values
    assert numpy.allclose(numpy.sort(v), numpy.sort(-v), atol=1e-10)


def test_antisymmetric_calibration_picks_2n():
    cal = calibrate_antisymmetric(100, 10, seed=0)
    assert cal['best'] == '2N'
    assert cal['2N'][1] == pytest.approx(1, abs=0.02)


def test_two_source_without_sources_is_semicircle():
    s = spectrum(TwoSourceGUE(100, 0.0), 20, seed=8)
    assert compare(s, SymmetricLaw(RaneyParams(2, 1), False)).ks <= 0.03


def test_shifted_product_without_shift():
    s = spectrum(ShiftedProduct(200, 1, 0.0), 20, seed=9)
    assert compare(s, 'raney:3,1').ks <= 0.03


def test_shifted_product_hard_edge_exponent():
    # critical shift: density ~ x**(-1 + 1/(s + 3/2)) at the origin
    s = spectrum(ShiftedProduct(200, 0), 200, seed=10).values
    target = -1 + 1 / 1.5
    assert hard_edge_exponent(s) == pytest.approx(target, rel=0.1)


def test_inverse_product_duality_between_samples():
    from scipy.stats import ks_2samp
    a = spectrum(InverseProduct(2, 1, 200), 25, seed=12).values
    b = 1 / spectrum(InverseProduct(1, 2, 200), 25, seed=13).values
    assert ks_2samp(a, b, method='asymp').statistic <= 0.03


def test_esym_small_cases():
    assert esym_average_mc(0, 3, 10) == (1.0, 0.0)
    assert esym_closed_form(2, 2) == 3
    mean, err = esym_average_mc(1, 1, 200_000, seed=1, factor='unitary')
    assert mean == pytest.approx(2, abs=0.01)
    with pytest.raises(DomainError):
        esym_average_mc(3, 2, 10)


def test_symmetric_law_moments():
    law = SymmetricLaw(RaneyParams(3, 2))
    # standardized: unit variance
    assert law.moment(2) == pytest.approx(1)
    assert law.moment(3) == 0
    assert float(law.cdf(0.0)) == pytest.approx(0.5)


def test_ensemble_validation():
    for bad in (lambda: ProductWishart(0, 10), lambda: Bures(0),
                lambda: InverseProduct(1, 1, 0),
                lambda: ProductWishart(1, 10, (-1,))):
        with pytest.raises((DomainError, ValueError)):
            bad()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 63), st.integers(2, 12))
def test_wishart_spectra_are_nonnegative(seed, N):
    v = spectrum(ProductWishart(1, N), 2, seed=seed).values
    assert numpy.all(v >= -1e-12) and numpy.all(numpy.diff(v) >= 0)
    assert numpy.all(numpy.isfinite(v)) and v.size == 2 * N
