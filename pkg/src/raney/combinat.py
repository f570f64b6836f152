"""
Fuss-Catalan and Raney numbers in exact arithmetic.

The Raney numbers

.. math::

    R_{p,r}(k) = \\frac{r}{pk + r} \\binom{pk + r}{k}

are the moments of the Raney distribution :math:`\\mu_{p,r}` for
:math:`p > 1`, :math:`0 < r \\le p`.  For rational ``p`` and ``r`` the
generalized binomial is an exact rational product, so everything here is
computed with :class:`fractions.Fraction` and Python integers.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy

from .errors import DomainError

__all__ = ['RaneyParams', 'as_fraction', 'fuss_catalan',
           'fuss_catalan_recurrence', 'raney_number', 'raney_numbers',
           'moment_series_partial']


def as_fraction(value):
    """
    Convert ``value`` to an exact :class:`~fractions.Fraction`.

    Strings such as ``'3/2'`` are parsed exactly; floats go through their
    shortest decimal representation so that ``0.1`` becomes ``1/10``.
    """

    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, numpy.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, numpy.floating)):
        return Fraction(repr(float(value)))
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class RaneyParams:
    """
    Exact parameter pair ``(p, r)`` of a Raney distribution.

    Parameters
    ----------
    p : Fraction, int or str
        Must satisfy ``p > 1``.
    r : Fraction, int or str
        Must satisfy ``0 < r <= p``.
    """

    p: Fraction
    r: Fraction

    def __post_init__(self):
        p = as_fraction(self.p)
        r = as_fraction(self.r)
        if not p > 1:
            raise DomainError(f'Raney parameter p must exceed 1, got {p}')
        if not 0 < r <= p:
            raise DomainError(f'Raney parameter r must lie in (0, p], got '
                              f'r={r} with p={p}')
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 'r', r)

    @property
    def K(self):
        """Right endpoint ``p**p (p-1)**(1-p)`` of the support."""
        p = float(self.p)
        return p ** p * (p - 1.0) ** (1.0 - p)

    @property
    def is_integer(self):
        return self.p.denominator == 1 and self.r.denominator == 1

    def __str__(self):
        return f'({self.p}, {self.r})'


def fuss_catalan(s, k):
    """
    Fuss-Catalan number ``C_s(k) = binom(sk + k, k) / (sk + 1)``.

    Examples
    --------
    >>> [fuss_catalan(1, k) for k in range(6)]
    [1, 1, 2, 5, 14, 42]
    """

    s = int(s)
    k = int(k)
    if s < 1 or k < 0:
        raise DomainError(f'need s >= 1 and k >= 0, got s={s}, k={k}')
    return comb(s * k + k, k) // (s * k + 1)


@lru_cache(maxsize=None)
def _fuss_catalan_table(s, k):
    # C_s(n) is the coefficient of t**(n-1) in (sum_j C_s(j) t**j)**(s+1);
    # only C_s(0..n-1) enter, so the table is built left to right.
    table = [1]
    for n in range(1, k + 1):
        power = [1] + [0] * (n - 1)
        for _ in range(s + 1):
            power = [sum(power[i] * table[m - i] for i in range(m + 1))
                     for m in range(n)]
        table.append(power[n - 1])
    return tuple(table)


def fuss_catalan_recurrence(s, k):
    """
    ``C_s(k)`` from the (s+1)-fold convolution recurrence alone.

    Independent of the binomial closed form; used as its oracle.
    """

    s = int(s)
    k = int(k)
    if s < 1 or k < 0:
        raise DomainError(f'need s >= 1 and k >= 0, got s={s}, k={k}')
    return _fuss_catalan_table(s, k)[k]


def raney_number(params, k):
    """
    Exact Raney number :math:`R_{p,r}(k)`.

    Parameters
    ----------
    params : RaneyParams
    k : int
        Non-negative index.

    Returns
    -------
    Fraction
        Integer-valued (denominator 1) whenever ``p`` and ``r`` are integers.
    """

    k = int(k)
    if k < 0:
        raise DomainError(f'k must be non-negative, got {k}')
    p, r = params.p, params.r
    top = p * k + r
    product = Fraction(1)
    for j in range(k):
        product *= top - j
    return r / top * product / factorial(k)


def raney_numbers(params, k_max):
    """List ``[R_{p,r}(0), ..., R_{p,r}(k_max)]``."""
    return [raney_number(params, k) for k in range(int(k_max) + 1)]


def moment_series_partial(params, z, k_max=40):
    """
    Truncated moment expansion of the Stieltjes transform.

    Returns ``(1/z) * sum_{n=0}^{k_max} R_{p,r}(n) / z**n``, which converges
    to :math:`G_{p,r}(z)` for ``|z| > K_p``.  ``z`` may be an array.
    """

    coeffs = [float(c) for c in raney_numbers(params, k_max)]
    t = 1.0 / numpy.asarray(z, dtype=complex)
    total = numpy.zeros_like(t)
    for c in reversed(coeffs):
        total = total * t + c
    result = total * t
    return result[()] if result.ndim == 0 else result
