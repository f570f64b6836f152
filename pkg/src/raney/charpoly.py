"""
Averaged characteristic polynomials as exact terminating hypergeometric sums.

Each ensemble's averaged characteristic polynomial is built exactly over
the rationals, its linear differential equation is checked as an exact
polynomial identity, and the scaled logarithmic derivative is compared
against the limiting Stieltjes transform.

Families
--------
``Hermite(N)``
    Monic ``H_N(sqrt(N/2) x)``; the Wigner semicircle on ``[-2, 2]``.
``Antisym(N)``
    ``(-2)**-N (2N)! 1F2(-N; 1/2, 1; lam**2/2)`` for ``i X^T J X``.
``Bures(N)``
    ``(-1)**N (N+1)! 2F2(-N, N+2; 1, 3/2; lam/4)`` for
    ``(1+U) X X^* (1+U^*)``.
``Product(s, N, nu)``
    ``(-1)**N prod (nu_l+1)_N 1Fs(-N; nu+1; lam)`` for ``X_s ... X_1``.
``InverseProduct(s, q, N, nu, mu)``
    ``(-1)**N prod (nu_l+1)_N {q+1}Fs(-N, -Nt_1..; nu+1; (-1)**q z)`` for the
    generalized problem ``Y_s^* Y_s v = z Yt_q^* Yt_q v``.
``TwoSource(N, a)``
    ``exp(-D**2/(4N)) (y**2 - a**2)**N``, the Wigner matrix of size ``2N``
    plus sources ``+-a``.
"""

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from math import factorial

from .combinat import RaneyParams, as_fraction
from .errors import InvalidBottomParameter, PolynomialZero
from .resolvent import (ProductChainForm, stieltjes, two_source_resolvent)

__all__ = ['RationalPolynomial', 'HypergeometricSpec', 'hyp_poly',
           'Hermite', 'Antisym', 'Bures', 'Product', 'InverseProduct',
           'TwoSource', 'KINDS', 'charpoly_family', 'ode_residual',
           'verify_ode', 'log_derivative', 'log_derivative_resolvent',
           'limit_resolvent', 'leading_order_ratio', 'resolvent_ladder',
           'ODE_BUDGET']

ODE_BUDGET = 50


# ===================
# Rational polynomial
# ===================

def _frac(c):
    return c if isinstance(c, Fraction) else as_fraction(c)


class RationalPolynomial:
    """
    Immutable polynomial with :class:`~fractions.Fraction` coefficients.

    Parameters
    ----------
    coefficients : iterable
        Ascending-degree coefficients; anything :func:`as_fraction` accepts.
        Trailing zeros are dropped, so the zero polynomial has no
        coefficients.
    """

    __slots__ = ('_c',)

    def __init__(self, coefficients=()):
        c = [_frac(x) for x in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def monomial(cls, degree, coefficient=1):
        return cls([0] * degree + [coefficient])

    @property
    def coefficients(self):
        return self._c

    @property
    def degree(self):
        """Degree; ``-1`` for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self):
        return not self._c

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == RationalPolynomial([other])._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __len__(self):
        return len(self._c)

    def __getitem__(self, k):
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self._c), len(other._c))
        return RationalPolynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self._c)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial(c * other for c in self._c)
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        return reduce(lambda acc, _: acc * self, range(n),
                      RationalPolynomial([1]))

    def derivative(self, order=1):
        c = list(self._c)
        for _ in range(order):
            c = [k * c[k] for k in range(1, len(c))]
        return RationalPolynomial(c)

    def theta(self, scale=1):
        """``scale * x d/dx`` applied to the polynomial."""
        scale = _frac(scale)
        return RationalPolynomial(scale * k * c for k, c in enumerate(self._c))

    def shift_degree(self, m):
        """Multiply by ``x**m``."""
        return RationalPolynomial([0] * m + list(self._c))

    def rescale(self, factor):
        """The polynomial ``x -> p(factor * x)``."""
        factor = _frac(factor)
        return RationalPolynomial(c * factor ** k
                                  for k, c in enumerate(self._c))

    def __call__(self, x):
        """Exact Horner evaluation at a rational (or integer) point."""
        x = _frac(x)
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def evaluate_complex(self, z, derivatives=0):
        """
        Values ``p(z), p'(z), ...`` at a complex point, computed exactly.

        ``z`` is converted exactly to a Gaussian rational and the Horner
        recurrences for the value and its derivatives run in exact
        arithmetic; each result is rounded once at the end.
        """

        z = complex(z)
        zr, zi = Fraction(z.real), Fraction(z.imag)
        n = derivatives + 1
        acc = [(Fraction(0), Fraction(0))] * n
        for c in reversed(self._c):
            for j in range(n - 1, 0, -1):
                ar, ai = acc[j]
                br, bi = acc[j - 1]
                acc[j] = (ar * zr - ai * zi + br, ar * zi + ai * zr + bi)
            ar, ai = acc[0]
            acc[0] = (ar * zr - ai * zi + c, ar * zi + ai * zr)
        # acc[j] holds p^{(j)}(z) / j!
        return [complex(float(r), float(i)) * factorial(j)
                for j, (r, i) in enumerate(acc)]

    def to_json(self):
        return [{'num': c.numerator, 'den': c.denominator} for c in self._c]

    @classmethod
    def from_json(cls, data):
        return cls(Fraction(d['num'], d['den']) for d in data)

    def __repr__(self):
        return f'RationalPolynomial({[str(c) for c in self._c]})'

    def format(self, var='λ'):
        """Human-readable form, highest degree first, e.g. ``λ − 2``."""
        if self.is_zero():
            return '0'
        parts = []
        for k in range(self.degree, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            sign = '−' if c < 0 else '+'
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f'{var}^{k}'
                body = mono if mag == 1 else f'{mag}·{mono}'
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ('−' if first_sign == '−' else '') + first
        for sign, body in parts[1:]:
            out += f' {sign} {body}'
        return out

    __str__ = format


def _as_poly(x):
    if isinstance(x, RationalPolynomial):
        return x
    return RationalPolynomial([x])


# ==============================
# Terminating hypergeometric sums
# ==============================

@dataclass(frozen=True)
class HypergeometricSpec:
    """
    A terminating ``pFq`` composed with the map ``x = scale * lam**power``.

    ``top`` must contain a non-positive integer ``-N``; ``bottom`` must
    avoid the non-positive integers.
    """

    top: tuple
    bottom: tuple
    scale: Fraction = Fraction(1)
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'top', tuple(_frac(a) for a in self.top))
        object.__setattr__(self, 'bottom',
                           tuple(_frac(b) for b in self.bottom))
        object.__setattr__(self, 'scale', _frac(self.scale))
        for b in self.bottom:
            if b <= 0 and b.denominator == 1:
                raise InvalidBottomParameter(
                    f'bottom parameter {b} is a pole of the series')
        if self.power < 1:
            raise ValueError('argument power must be a positive integer')

    @property
    def termination(self):
        """Smallest ``N`` with ``-N`` among the top parameters."""
        ns = [-a for a in self.top if a <= 0 and a.denominator == 1]
        if not ns:
            raise ValueError('no non-positive integer top parameter; the '
                             'series does not terminate')
        return int(min(ns))


def hyp_poly(spec, N=None):
    """
    Exact polynomial ``sum_k prod (a_i)_k / prod (b_j)_k x**k / k!``.

    Parameters
    ----------
    spec : HypergeometricSpec
    N : int, optional
        Termination degree in ``x``; must equal ``spec.termination`` when
        given.

    Returns
    -------
    RationalPolynomial
        In the variable ``lam`` of the argument map.
    """

    n = spec.termination
    if N is not None and int(N) != n:
        raise ValueError(f'series terminates at degree {n}, not {N}')
    coeffs = [Fraction(0)] * (n * spec.power + 1)
    term = Fraction(1)
    for k in range(n + 1):
        coeffs[k * spec.power] = term * spec.scale ** k
        num = reduce(lambda acc, a: acc * (a + k), spec.top, Fraction(1))
        den = reduce(lambda acc, b: acc * (b + k), spec.bottom,
                     Fraction(k + 1))
        term = term * num / den
    return RationalPolynomial(coeffs)


def _poch(a, n):
    return reduce(lambda acc, j: acc * (a + j), range(n), Fraction(1))


# ========
# Families
# ========

@dataclass(frozen=True)
class Hermite:
    N: int
    count_factor = 1

    def scale(self):
        return 1.0

    def limit(self, z):
        return (z - z * cmath.sqrt(1 - 4 / (z * z))) / 2


@dataclass(frozen=True)
class Antisym:
    N: int
    count_factor = 2

    def scale(self):
        # Eigenvalues of i X^T J X divided by sqrt(2) N.
        return math.sqrt(2) * self.N

    def limit(self, z):
        return z * stieltjes(RaneyParams(3, 1), z * z)


@dataclass(frozen=True)
class Bures:
    N: int
    count_factor = 1

    def scale(self):
        return 4 * self.N

    def limit(self, z):
        return stieltjes(RaneyParams('3/2', '1/2'), z)


@dataclass(frozen=True)
class Product:
    s: int
    N: int
    nu: tuple = ()
    count_factor = 1

    def __post_init__(self):
        nu = tuple(int(n) for n in self.nu) or (0,) * self.s
        if len(nu) != self.s or any(n < 0 for n in nu) or self.s < 1:
            raise ValueError('need s >= 1 and s non-negative nu values')
        object.__setattr__(self, 'nu', nu)

    def scale(self):
        return float(self.N) ** self.s

    def limit(self, z):
        return stieltjes(RaneyParams(self.s + 1, 1), z)


@dataclass(frozen=True)
class InverseProduct:
    """
    ``N_l = N + nu_l`` (``l = 1..s``) and ``Nt_j = N + mu_j`` (``j = 1..q``).
    """

    s: int
    q: int
    N: int
    nu: tuple = ()
    mu: tuple = ()
    count_factor = 1

    def __post_init__(self):
        nu = tuple(int(n) for n in self.nu) or (0,) * self.s
        mu = tuple(int(m) for m in self.mu) or (0,) * self.q
        if self.s < 1 or self.q < 0 or len(nu) != self.s or \
                len(mu) != self.q or min(nu + mu + (0,)) < 0:
            raise ValueError('need s >= 1, q >= 0 and non-negative offsets')
        object.__setattr__(self, 'nu', nu)
        object.__setattr__(self, 'mu', mu)

    @property
    def dims(self):
        return (tuple(self.N + n for n in self.nu),
                tuple(self.N + m for m in self.mu))

    def ratio(self):
        Ns, Nt = self.dims
        return Fraction(math.prod(Ns), math.prod(Nt))

    def scale(self):
        # charpoly_family already returns the rescaled f(z).
        return 1.0

    def limit(self, z):
        return stieltjes(ProductChainForm(self.s, self.q), z)


@dataclass(frozen=True)
class TwoSource:
    N: int
    a: Fraction = Fraction(1)
    count_factor = 2

    def __post_init__(self):
        object.__setattr__(self, 'a', _frac(self.a))

    def scale(self):
        return 1.0

    def limit(self, z):
        return two_source_resolvent(z, float(self.a))


KINDS = {'hermite': Hermite, 'antisym': Antisym, 'bures': Bures,
         'product': Product, 'inverse-product': InverseProduct,
         'two-source': TwoSource}


def hypergeometric_spec(kind):
    """The :class:`HypergeometricSpec` and prefactor of a family."""
    N = kind.N
    if isinstance(kind, Antisym):
        return (HypergeometricSpec((-N,), ('1/2', 1), Fraction(1, 2), 2),
                Fraction(-2) ** -N * factorial(2 * N))
    if isinstance(kind, Bures):
        return (HypergeometricSpec((-N, N + 2), (1, '3/2'), Fraction(1, 4)),
                (-1) ** N * factorial(N + 1))
    if isinstance(kind, Product):
        pre = (-1) ** N * math.prod(_poch(Fraction(n + 1), N)
                                     for n in kind.nu)
        return (HypergeometricSpec((-N,), tuple(n + 1 for n in kind.nu)),
                pre)
    if isinstance(kind, InverseProduct):
        _, Nt = kind.dims
        pre = (-1) ** N * math.prod(_poch(Fraction(n + 1), N)
                                     for n in kind.nu)
        spec = HypergeometricSpec((-N,) + tuple(-m for m in Nt),
                                  tuple(n + 1 for n in kind.nu),
                                  (-1) ** kind.q)
        return spec, pre
    raise TypeError(f'{type(kind).__name__} is not a hypergeometric family')


def charpoly_family(kind):
    """
    Exact averaged characteristic polynomial of an ensemble.

    The variable is the unscaled eigenvalue ``lam`` except for
    ``Hermite`` (already in the semicircle variable) and ``InverseProduct``,
    which returns the rescaled ``f(z) = P(N_1..N_s / (Nt_1..Nt_q) z)``.
    """

    N = int(kind.N)
    if N < 0:
        raise ValueError('N must be non-negative')
    if isinstance(kind, Hermite):
        c = [Fraction(0)] * (N + 1)
        for k in range(N // 2 + 1):
            c[N - 2 * k] = Fraction((-1) ** k * factorial(N),
                                    factorial(k) * factorial(N - 2 * k)
                                    * (2 * N) ** k)
        return RationalPolynomial(c)
    if isinstance(kind, TwoSource):
        return _two_source_poly(N, kind.a)
    spec, pre = hypergeometric_spec(kind)
    p = hyp_poly(spec) * pre
    if isinstance(kind, InverseProduct):
        p = p.rescale(kind.ratio())
    return p


def _two_source_poly(N, a):
    # <det(y - W - A)> = exp(-D**2/(4N)) det(y - A) for E|W_ij|**2 = 1/(2N).
    base = RationalPolynomial([-a * a, 0, 1]) ** N
    out = RationalPolynomial()
    term = base
    k = 0
    while not term.is_zero():
        out = out + term
        k += 1
        term = term.derivative(2) * Fraction(-1, 4 * N * k)
    return out


# =====================
# Differential equations
# =====================

def _apply(ops, p):
    """Apply a product of operators (rightmost first) to ``p``."""
    for op in reversed(ops):
        p = op(p)
    return p


def _theta_plus(c, scale=1):
    c = _frac(c)
    return lambda f: f.theta(scale) + f * c


def ode_residual(kind, p=None):
    """
    Apply the family's differential operator to its polynomial exactly.

    Returns the resulting :class:`RationalPolynomial`, identically zero when
    the equation holds.
    """

    if p is None:
        p = charpoly_family(kind)
    N = int(kind.N)
    if isinstance(kind, Hermite):
        return (p.derivative(2) * Fraction(2, N) - p.derivative().shift_degree(1)
                * 2 + p * (2 * N))
    if isinstance(kind, Antisym):
        # (lam^2/2)(theta - N) p = theta theta (theta - 1/2) p with
        # theta = (lam/2) d/dlam.
        half = Fraction(1, 2)
        lhs = _theta_plus(-N, half)(p).shift_degree(2) * half
        rhs = _apply([_theta_plus(0, half), _theta_plus(0, half),
                      _theta_plus(-half, half)], p)
        return lhs - rhs
    if isinstance(kind, Bures):
        lhs = _apply([_theta_plus(-N), _theta_plus(N + 2)],
                     p).shift_degree(1) * Fraction(1, 4)
        rhs = _apply([_theta_plus(0), _theta_plus(0),
                      _theta_plus(Fraction(1, 2))], p)
        return lhs - rhs
    if isinstance(kind, Product):
        lhs = _theta_plus(-N)(p).shift_degree(1)
        rhs = _apply([_theta_plus(0)] + [_theta_plus(n) for n in kind.nu], p)
        return lhs - rhs
    if isinstance(kind, InverseProduct):
        Ns, Nt = kind.dims
        lhs = _apply([_theta_plus(-N)] + [_theta_plus(-m) for m in Nt], p)
        lhs = lhs * Fraction((-1) ** kind.q, math.prod(Nt))
        rhs = _apply([_theta_plus(n) for n in kind.nu], p).derivative()
        rhs = rhs * Fraction(1, math.prod(Ns))
        return lhs - rhs
    if isinstance(kind, TwoSource):
        a2 = kind.a * kind.a
        c1 = RationalPolynomial([4 * (1 - a2 - Fraction(1, 2 * N)), 0, 4])
        return (p.derivative(3) * Fraction(1, N * N)
                - p.derivative(2).shift_degree(1) * Fraction(4, N)
                + p.derivative() * c1 - p.shift_degree(1) * (8 * N))
    raise TypeError(f'unknown family {kind!r}')


def verify_ode(kind):
    """
    Exact check that the family's polynomial satisfies its equation.

    Raises
    ------
    ValueError
        If ``N`` exceeds the exact-arithmetic budget :data:`ODE_BUDGET`.
    """

    if int(kind.N) > ODE_BUDGET:
        raise ValueError(f'N = {kind.N} exceeds the exact budget '
                         f'{ODE_BUDGET}')
    return ode_residual(kind).is_zero()


# =============================
# Log-derivatives and resolvents
# =============================

def log_derivative(p, lam, order=1):
    """``[p'/p, p''/p, ...]`` at a complex point, from exact evaluation."""
    vals = p.evaluate_complex(lam, order)
    if vals[0] == 0:
        raise PolynomialZero(f'the polynomial vanishes at {lam}; perturb '
                             f'the evaluation point')
    return [v / vals[0] for v in vals[1:]]


def log_derivative_resolvent(kind, z, p=None):
    """
    Scaled log-derivative ``c p'(c z) / (M p(c z))``.

    ``c`` is the family's eigenvalue scale and ``M`` its eigenvalue count,
    so the result tends to the limiting Stieltjes transform as ``N`` grows.
    """

    if p is None:
        p = charpoly_family(kind)
    c = kind.scale()
    count = kind.count_factor * int(kind.N)
    (ratio,) = log_derivative(p, c * complex(z))
    return c * ratio / count


def limit_resolvent(kind, z):
    """Limiting Stieltjes transform ``G(z)`` of the family's scaled law."""
    return complex(kind.limit(complex(z)))


def leading_order_ratio(kind, z, p=None):
    """
    ``|p''/p - (p'/p)**2| / |p'/p|**2`` at the scaled point ``z``.

    Small values confirm the large-``N`` replacement of ``p''/p`` by the
    square of the log-derivative.
    """

    if p is None:
        p = charpoly_family(kind)
    d1, d2 = log_derivative(p, kind.scale() * complex(z), order=2)
    return abs(d2 - d1 * d1) / abs(d1) ** 2


def resolvent_ladder(kind, z, sizes=(10, 20, 40)):
    """
    Errors ``|G_N(z) - G(z)|`` for each ``N`` in ``sizes``.

    Returns
    -------
    list of (int, complex, float)
        ``(N, G_N, error)`` rows.
    """

    target = limit_resolvent(kind, z)
    rows = []
    for n in sizes:
        g = log_derivative_resolvent(replace(kind, N=int(n)), z)
        rows.append((int(n), g, abs(g - target)))
    return rows
