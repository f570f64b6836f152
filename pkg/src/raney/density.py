"""
Densities of the Raney and product/inverse-product families.

Both families are evaluated through a strictly decreasing angle map
``x = rho(phi)`` under which the density is a product of sine powers.  A
point ``x`` is mapped back to its angle by bisection in ``log(phi)`` plus a
few Newton steps with the analytic ``d log(rho) / d phi``.  Moments and
distribution functions are integrated in the angle variable, which keeps
unbounded supports on a compact interval.

Raney family ``W_{p,r}``, ``0 < phi < pi/p``::

    rho(phi) = sin(p phi)**p / (sin(phi) sin((p-1) phi)**(p-1))
    W(rho)   = sin((p-1) phi)**(p-r-1) sin(phi) sin(r phi)
               / (pi sin(p phi)**(p-r))

Product/inverse family ``f_{s,q,r}``, ``0 < phi < pi/(1+s)``, with
``A = (1+s) phi/(1+q) + q pi/(1+q)`` and ``B = (s-q) phi/(1+q) + q pi/(1+q)``::

    rho(phi) = sin(A)**(1+s) / (sin(phi)**(1+q) sin(B)**(s-q))
    f(rho)   = sin(B)**(s-q-r) sin(phi)**(1+q) sin(r phi)
               / (pi sin(A)**(1+s-r))

With ``q = 0`` the second family reduces to ``W_{1+s,r}``.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy
from scipy.integrate import quad

from .combinat import RaneyParams, as_fraction
from .errors import DivergentMoment, DomainError, InvalidFamily, OutOfSupport

__all__ = ['RaneyFamily', 'ProductInverseFamily', 'DensityCurve',
           'EdgeAsymptote', 'parse_family', 'rho_raney',
           'raney_density_at_angle', 'invert_rho', 'raney_density',
           'symmetric_density', 'closed_form_density', 'fssr_closed_form',
           'fsq_density', 'fsqr_density', 'density', 'edge_asymptote',
           'moment_quadrature', 'cdf', 'density_curve', 'CLOSED_FORMS']

ANGLE_CLIP = 1e-12
_GL_NODES, _GL_WEIGHTS = numpy.polynomial.legendre.leggauss(24)


# ==========================
# Angle-parameterized family
# ==========================

class _AngleFamily:
    """
    Shared inversion, density, moment and distribution machinery.

    Subclasses provide ``_trig(phi, delta)``, the sines and cotangents that
    enter ``rho``, its log-derivative and the density.  When ``delta =
    phi_max - phi`` is passed, factors that vanish at ``phi_max`` are
    evaluated from ``delta`` directly so that they keep full relative
    precision at the edge.
    """

    phi_max = None

    def _trig(self, phi, delta=None):
        raise NotImplementedError

    @property
    def support(self):
        raise NotImplementedError

    @property
    def bounded(self):
        return math.isfinite(self.support[1])

    def rho(self, phi):
        return numpy.exp(self.log_rho(numpy.asarray(phi, dtype=float)))

    def at_angle(self, phi):
        """``(x, f)`` at the angle ``phi``."""
        phi = numpy.asarray(phi, dtype=float)
        if numpy.any((phi <= 0) | (phi >= self.phi_max)):
            raise DomainError(f'angle outside (0, {self.phi_max})')
        x, f = numpy.exp(self.log_rho(phi)), numpy.exp(self.log_f(phi))
        if x.ndim == 0:
            return float(x), float(f)
        return x, f

    def _angle_mass(self, phi, delta=None):
        # Mass density in the angle variable: f(rho) |d rho / d phi|.
        t = self._trig(phi, delta)
        return -numpy.exp(self._log_f(t) + self._log_rho(t)) * self._dlog(t)

    def log_rho(self, phi, delta=None):
        return self._log_rho(self._trig(phi, delta))

    def rho_and_mass(self, phi, delta=None):
        """``rho(phi)`` and the angle-mass density from one trig pass."""
        t = self._trig(phi, delta)
        log_rho = self._log_rho(t)
        mass = -numpy.exp(self._log_f(t) + log_rho) * self._dlog(t)
        return numpy.exp(log_rho), mass

    def dlog_rho(self, phi, delta=None):
        """Analytic ``d log(rho) / d phi``."""
        return self._dlog(self._trig(phi, delta))

    def log_f(self, phi, delta=None):
        return self._log_f(self._trig(phi, delta))

    def invert(self, x, newton_steps=3):
        """
        Angle ``phi`` with ``rho(phi) = x`` for ``x`` in the open support.

        Vectorized; entries outside the support come back as NaN.
        """

        x = numpy.asarray(x, dtype=float)
        lo_x, hi_x = self.support
        inside = (x > lo_x) & (x < hi_x)
        log_x = numpy.log(numpy.where(inside, x, 1.0))
        lo = numpy.full(x.shape, math.log(ANGLE_CLIP))
        hi = numpy.full(x.shape, math.log(self.phi_max - ANGLE_CLIP))
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            too_small = self.log_rho(numpy.exp(mid)) > log_x
            lo = numpy.where(too_small, mid, lo)
            hi = numpy.where(too_small, hi, mid)
        phi = numpy.exp(0.5 * (lo + hi))
        for _ in range(newton_steps):
            d = self.dlog_rho(phi)
            step = numpy.where(d != 0, (self.log_rho(phi) - log_x) / d, 0.0)
            phi = numpy.clip(phi - step, ANGLE_CLIP,
                             self.phi_max - ANGLE_CLIP)
        phi = numpy.where(inside, phi, numpy.nan)
        return phi[()] if phi.ndim == 0 else phi

    def density(self, x):
        """Density at ``x``; zero off the open support."""
        x = numpy.asarray(x, dtype=float)
        phi = self.invert(x)
        with numpy.errstate(invalid='ignore'):
            f = numpy.where(numpy.isnan(phi), 0.0,
                            numpy.exp(self.log_f(numpy.nan_to_num(
                                phi, nan=0.5 * self.phi_max))))
        return f[()] if f.ndim == 0 else f

    # Quadrature in the angle variable -----------------------------------

    def moment(self, k, epsrel=1e-12):
        k = int(k)
        if k < 0:
            raise DomainError('moment order must be non-negative')
        if k > 0 and not self.bounded:
            raise DivergentMoment(f'{self} has a heavy tail: moments of '
                                  f'order >= 1 diverge')

        def integrand(t, delta=None):
            return math.exp(k * float(self.log_rho(t, delta))) * \
                float(self._angle_mass(t, delta))

        # A breakpoint keeps the adaptive rule from under-sampling the
        # end where rho**k concentrates.
        mid = 0.5 * self.phi_max
        return (self._integrate(integrand, 0.0, mid, epsrel)
                + self._integrate(integrand, mid, self.phi_max, epsrel))

    @property
    def _end_exponent(self):
        # The angle-mass behaves like (phi_max - phi)**(r-1) at the edge
        # x = 0; the s = 0 product family has a soft edge there instead.
        if isinstance(self, ProductInverseFamily) and self.s == 0:
            return 0.0
        return self.r - 1.0

    def _integrate(self, fun, a, b, epsrel=1e-13):
        """
        Adaptive quadrature of ``fun(phi, delta)`` over ``[a, b]``.

        On the upper half of the angle range the substitution
        ``u = (phi_max - phi)**r`` absorbs the ``(phi_max - phi)**(r-1)``
        behaviour at ``phi_max`` and ``fun`` is evaluated from ``delta``.
        """

        m = self.phi_max
        if a >= 0.5 * m:
            r = self._end_exponent + 1.0

            def smooth(u):
                d = u ** (1.0 / r)
                return fun(m - d, d) * d ** (1.0 - r) / r

            val, _ = quad(smooth, (m - b) ** r, (m - a) ** r, epsabs=1e-15,
                          epsrel=epsrel, limit=500)
        else:
            val, _ = quad(fun, a, b, epsabs=1e-15, epsrel=epsrel, limit=500)
        return val

    def _mass_fn(self, t, delta=None):
        return float(self._angle_mass(t, delta))

    @cached_property
    def _cdf_panels(self):
        # Breakpoints refine geometrically towards both angle endpoints.
        m = self.phi_max
        tiny = [10.0 ** -k for k in range(8, 1, -1)]
        inner = numpy.linspace(0.01, 0.99, 50)
        edges = numpy.unique(numpy.concatenate(
            [[0.0], tiny, inner, 1.0 - numpy.array(tiny[::-1]), [1.0]])) * m
        edges[-1] = m
        masses = numpy.array([self._integrate(self._mass_fn, a, b)
                              for a, b in zip(edges[:-1], edges[1:])])
        # tail[j]: mass of angles above edges[j], i.e. of x below rho(edge).
        tail = numpy.concatenate([numpy.cumsum(masses[::-1])[::-1], [0.0]])
        return edges, tail

    def cdf(self, x):
        """Distribution function ``P(X <= x)``, vectorized."""

        x = numpy.asarray(x, dtype=float)
        lo_x, hi_x = self.support
        out = numpy.where(x >= hi_x, 1.0, 0.0)
        inside = (x > lo_x) & (x < hi_x)
        if numpy.any(inside):
            edges, tail = self._cdf_panels
            phi = numpy.atleast_1d(self.invert(x[inside]))
            j = numpy.clip(numpy.searchsorted(edges, phi, side='right') - 1,
                           0, len(edges) - 2)
            b = edges[j + 1]
            # Partial panel [phi, b] by Gauss-Legendre, end panels by quad.
            half = 0.5 * (b - phi)
            nodes = (phi + half)[:, None] + half[:, None] * _GL_NODES[None, :]
            partial = half * (self._angle_mass(nodes) @ _GL_WEIGHTS)
            for i in numpy.flatnonzero((j == 0) | (j == len(edges) - 2)):
                partial[i] = self._integrate(self._mass_fn, phi[i], b[i])
            values = numpy.clip(tail[j + 1] + partial, 0.0, 1.0)
            out = out.astype(float)
            out[inside] = values
        return out[()] if out.ndim == 0 else out


def _cot(a):
    return 1.0 / numpy.tan(a)


@dataclass(frozen=True)
class RaneyFamily(_AngleFamily):
    """The Raney density ``W_{p,r}`` supported on ``[0, K_p]``."""

    params: RaneyParams

    def __post_init__(self):
        if not isinstance(self.params, RaneyParams):
            object.__setattr__(self, 'params', RaneyParams(*self.params))

    @property
    def p(self):
        return float(self.params.p)

    @property
    def r(self):
        return float(self.params.r)

    @property
    def phi_max(self):
        return math.pi / self.p

    @property
    def support(self):
        return 0.0, self.params.K

    def _trig(self, phi, delta=None):
        p, r = self.p, self.r
        if delta is None:
            phi = numpy.asarray(phi, dtype=float)
            sp, cp = numpy.sin(p * phi), _cot(p * phi)
            sr = numpy.sin(r * phi)
        else:
            # p phi = pi - p delta
            phi = self.phi_max - delta
            sp, cp = numpy.sin(p * delta), -_cot(p * delta)
            sr = (numpy.sin(p * delta) if self.params.r == self.params.p
                  else numpy.sin(r * phi))
        return (sp, cp, numpy.sin(phi), _cot(phi),
                numpy.sin((p - 1) * phi), _cot((p - 1) * phi), sr)

    def _log_rho(self, t):
        sp, _, s1, _, sm, _, _ = t
        p = self.p
        return p * numpy.log(sp) - numpy.log(s1) - (p - 1) * numpy.log(sm)

    def _dlog(self, t):
        _, cp, _, c1, _, cm, _ = t
        p = self.p
        return p * p * cp - c1 - (p - 1) ** 2 * cm

    def _log_f(self, t):
        sp, _, s1, _, sm, _, sr = t
        p, r = self.p, self.r
        return ((p - r - 1) * numpy.log(sm) + numpy.log(s1) + numpy.log(sr)
                - math.log(math.pi) - (p - r) * numpy.log(sp))

    def boundary_w(self, phi):
        """
        Boundary value ``w = x G(x - i0)`` at ``x = rho(phi)``.

        For ``r = 1`` this is ``sin(p phi) / sin((p-1) phi) e^{i phi}``, and
        the general case is its ``r``-th power.
        """

        phi = numpy.asarray(phi, dtype=float)
        p, r = self.p, self.r
        mod = numpy.sin(p * phi) / numpy.sin((p - 1) * phi)
        return mod ** r * numpy.exp(1j * r * phi)

    def __str__(self):
        return f'raney:{self.params.p},{self.params.r}'


@dataclass(frozen=True)
class ProductInverseFamily(_AngleFamily):
    """
    The density ``f_{s,q,r}`` of products with ``s`` Gaussian and ``q``
    inverse Gaussian factors, raised to the power ``r`` in ``w = zG``.

    ``r = 1`` gives ``f_{s,q}``.  The support is ``(0, inf)`` for
    ``s, q >= 1``; with ``q = 0`` it is ``[0, K_{1+s}]`` and with ``s = 0``
    it is ``[1/K_{1+q}, inf)``.
    """

    s: int
    q: int
    r: float = 1.0

    def __post_init__(self):
        s, q = int(self.s), int(self.q)
        if s < 0 or q < 0 or (s, q) == (0, 0):
            raise DomainError(f'need s, q >= 0 and (s, q) != (0, 0), got '
                              f'({self.s}, {self.q})')
        r = float(as_fraction(self.r))
        if not 0 < r <= 1 + s:
            raise DomainError(f'r must lie in (0, 1+s], got {r}')
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'r', r)

    @property
    def phi_max(self):
        return math.pi / (1 + self.s)

    @property
    def support(self):
        s, q = self.s, self.q
        lower = 0.0 if s > 0 else 1.0 / RaneyParams(1 + q, 1).K
        upper = math.inf if q > 0 else RaneyParams(1 + s, 1).K
        return lower, upper

    def _trig(self, phi, delta=None):
        s, q, r = self.s, self.q, self.r
        ka, kb = (1 + s) / (1 + q), (s - q) / (1 + q)
        shift = q * math.pi / (1 + q)
        if delta is None:
            phi = numpy.asarray(phi, dtype=float)
            A, B = ka * phi + shift, kb * phi + shift
            sa, ca = numpy.sin(A), _cot(A)
            sb, cb = numpy.sin(B), _cot(B)
            s1, c1 = numpy.sin(phi), _cot(phi)
            sr = numpy.sin(r * phi)
        else:
            # A = pi - ka delta at phi = phi_max - delta.
            phi = self.phi_max - delta
            sa, ca = numpy.sin(ka * delta), -_cot(ka * delta)
            if s == 0:
                # phi_max = pi and B = q delta / (1+q).
                sb, cb = numpy.sin(-kb * delta), _cot(-kb * delta)
                s1, c1 = numpy.sin(delta), -_cot(delta)
            else:
                B = kb * phi + shift
                sb, cb = numpy.sin(B), _cot(B)
                s1, c1 = numpy.sin(phi), _cot(phi)
            sr = (numpy.sin((1 + s) * delta) if r == 1 + s
                  else numpy.sin(r * phi))
        return sa, ca, sb, cb, s1, c1, sr

    def _log_rho(self, t):
        sa, _, sb, _, s1, _, _ = t
        s, q = self.s, self.q
        return ((1 + s) * numpy.log(sa) - (1 + q) * numpy.log(s1)
                - (s - q) * numpy.log(sb))

    def _dlog(self, t):
        _, ca, _, cb, _, c1, _ = t
        s, q = self.s, self.q
        return ((1 + s) ** 2 / (1 + q) * ca - (1 + q) * c1
                - (s - q) ** 2 / (1 + q) * cb)

    def _log_f(self, t):
        sa, _, sb, _, s1, _, sr = t
        s, q, r = self.s, self.q, self.r
        return ((s - q - r) * numpy.log(sb) - (1 + s - r) * numpy.log(sa)
                + (1 + q) * numpy.log(s1) + numpy.log(sr)
                - math.log(math.pi))

    def __str__(self):
        if self.r == 1.0:
            return f'fsq:{self.s},{self.q}'
        return f'fsqr:{self.s},{self.q},{self.r:g}'



def parse_family(text):
    """
    Family from ``'raney:p,r'``, ``'fsq:s,q'`` or ``'fsqr:s,q,r'``.

    Rationals may be written as ``num/den``.
    """

    try:
        name, _, args = str(text).partition(':')
        values = [a.strip() for a in args.split(',') if a.strip()]
        name = name.strip().lower()
        if name == 'raney' and len(values) == 2:
            return RaneyFamily(RaneyParams(*values))
        if name == 'fsq' and len(values) == 2:
            return ProductInverseFamily(int(values[0]), int(values[1]))
        if name == 'fsqr' and len(values) == 3:
            return ProductInverseFamily(int(values[0]), int(values[1]),
                                        as_fraction(values[2]))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidFamily(f'cannot parse family {text!r}: {exc}') from exc
    raise InvalidFamily(f'unknown family specification {text!r}; expected '
                        f'raney:p,r, fsq:s,q or fsqr:s,q,r')


def _as_family(family):
    if isinstance(family, _AngleFamily):
        return family
    if isinstance(family, RaneyParams):
        return RaneyFamily(family)
    if isinstance(family, str):
        return parse_family(family)
    raise InvalidFamily(f'not a density family: {family!r}')


# ==================
# Raney entry points
# ==================

def rho_raney(p, phi):
    """
    Angle map ``x = rho(phi)`` of the Raney family.

    Raises
    ------
    DomainError
        Unless ``0 < phi < pi/p``.
    """

    p = float(as_fraction(p))
    phi = numpy.asarray(phi, dtype=float)
    if p <= 1 or numpy.any((phi <= 0) | (phi >= math.pi / p)):
        raise DomainError(f'need p > 1 and 0 < phi < pi/p')
    x = numpy.exp(RaneyFamily(RaneyParams(as_fraction(p), 1)).log_rho(phi))
    return x[()] if x.ndim == 0 else x


def raney_density_at_angle(params, phi):
    """``(rho(phi), W_{p,r}(rho(phi)))``."""
    return RaneyFamily(params).at_angle(phi)


def invert_rho(family, x):
    """
    Angle of a point strictly inside the support.

    Parameters
    ----------
    family : RaneyFamily, ProductInverseFamily, RaneyParams or str
    x : float or array_like

    Raises
    ------
    OutOfSupport
        If any ``x`` is not strictly inside the support.
    """

    fam = _as_family(family)
    phi = fam.invert(x)
    if numpy.any(numpy.isnan(phi)):
        raise OutOfSupport(f'x outside the open support {fam.support} of '
                           f'{fam}')
    return phi


def raney_density(params, x):
    """``W_{p,r}(x)``, zero outside ``(0, K_p)``."""
    return RaneyFamily(params).density(x)


def symmetric_density(params, y, standardized=False):
    """
    Symmetrized Raney density.

    ``|y| W_{p,r}(y**2)`` on ``[-sqrt(K_p), sqrt(K_p)]``, or with
    ``standardized`` the unit-variance version ``r |y| W_{p,r}(r y**2)``.
    """

    fam = RaneyFamily(params)
    y = numpy.abs(numpy.asarray(y, dtype=float))
    c = fam.r if standardized else 1.0
    out = c * y * fam.density(c * y * y)
    return out[()] if out.ndim == 0 else out


def fsq_density(s, q, x):
    """``f_{s,q}(x)``; zero for ``x`` outside the support."""
    return ProductInverseFamily(s, q).density(x)


def fsqr_density(s, q, r, x):
    """``f_{s,q,r}(x)``; zero for ``x`` outside the support."""
    return ProductInverseFamily(s, q, r).density(x)


def density(family, x):
    """Density of any supported family."""
    return _as_family(family).density(x)


# ============
# Closed forms
# ============

def _bounded(x, upper):
    x = numpy.asarray(x, dtype=float)
    if numpy.any((x <= 0) | (x > upper)):
        raise OutOfSupport(f'closed form defined on (0, {upper:g}]')
    return x


def _mp21(x):
    x = _bounded(x, 4.0)
    return numpy.sqrt((4.0 - x) / x) / (2 * math.pi)


def _w31(x):
    x = _bounded(x, 6.75)
    a, b = 3 * math.sqrt(3), numpy.sqrt(27 - 4 * x)
    return (numpy.cbrt(a + b) - numpy.cbrt(a - b)) / (
        2 ** (4 / 3) * math.pi * x ** (2 / 3))


def _w32(x):
    x = _bounded(x, 6.75)
    a, b = 3 * math.sqrt(3), numpy.sqrt(27 - 4 * x)
    return (numpy.cbrt(a + b) ** 2 - numpy.cbrt(a - b) ** 2) / (
        2 ** (5 / 3) * math.sqrt(3) * math.pi * x ** (1 / 3))


def _bures(x):
    x = _bounded(x, math.sqrt(6.75))
    a, b = 3 * math.sqrt(3), numpy.sqrt(numpy.maximum(27 - 4 * x * x, 0.0))
    return (numpy.cbrt(a + b) ** 2 - numpy.cbrt(a - b) ** 2) / (
        2 ** (5 / 3) * math.sqrt(3) * math.pi * x ** (2 / 3))


def _w2half(x):
    x = _bounded(x, 4.0)
    return numpy.sqrt(2 - numpy.sqrt(x)) / (2 * math.pi * x ** 0.75)


def _positive(x):
    x = numpy.asarray(x, dtype=float)
    if numpy.any(x <= 0):
        raise OutOfSupport('closed form defined on (0, inf)')
    return x


def _fss(x, s):
    x = _positive(x)
    a = math.pi / (s + 1)
    t = x ** (1 / (s + 1))
    return x ** (-s / (s + 1)) * math.sin(a) / (
        math.pi * (1 + 2 * t * math.cos(a) + t * t))


def _quadratic(t, a, prefactor):
    # Shared radical expression of the two quadratic cases, in terms of
    # t = x**(-+1/(1+k)) and a = pi/(1+k); returns x f(x).
    R = numpy.sqrt(1 + 16 * t * t + 8 * t * math.cos(a))
    return prefactor / (2 * math.pi) * (
        -math.sin(a)
        + numpy.sqrt((R + 1) / 2 + 2 * t * math.cos(a)) * math.sin(a)
        - numpy.sqrt(numpy.maximum((R - 1) / 2 - 2 * t * math.cos(a), 0.0))
        * math.cos(a))


def _fsq_quad_a(x, q):
    if q < 1:
        raise DomainError('the s = 1+2q radical form needs q >= 1')
    x = _positive(x)
    t = x ** (-1 / (1 + q))
    return _quadratic(t, math.pi / (1 + q), x ** (1 / (1 + q))) / x


def _fsq_quad_b(x, s):
    if s < 1:
        raise DomainError('the q = 1+2s radical form needs s >= 1')
    x = _positive(x)
    t = x ** (1 / (1 + s))
    return _quadratic(t, math.pi / (1 + s), x ** (-1 / (1 + s))) / x


CLOSED_FORMS = {
    'MP21': (_mp21, False),
    'W31': (_w31, False),
    'W32': (_w32, False),
    'BURES': (_bures, False),
    'W2HALF': (_w2half, False),
    'FSS': (_fss, True),
    'FSQ_QUAD_A': (_fsq_quad_a, True),
    'FSQ_QUAD_B': (_fsq_quad_b, True),
}


def closed_form_density(case, x, index=None):
    """
    Explicit density formulas for special parameter values.

    Parameters
    ----------
    case : str
        ``'MP21'`` (``W_{2,1}``), ``'W31'``, ``'W32'``, ``'BURES'``
        (``W_{3/2,1/2}``), ``'W2HALF'`` (``W_{2,1/2}``), ``'FSS'``
        (``f_{s,s}``, index ``s``), ``'FSQ_QUAD_A'`` (``f_{1+2q,q}``, index
        ``q``) or ``'FSQ_QUAD_B'`` (``f_{s,1+2s}``, index ``s``).
    x : float or array_like
    index : int, optional
        Required by the indexed cases.

    Raises
    ------
    OutOfSupport
        For points outside the (open-at-zero) support.
    """

    try:
        fn, indexed = CLOSED_FORMS[str(case).upper()]
    except KeyError:
        raise InvalidFamily(f'unknown closed form {case!r}') from None
    if indexed:
        if index is None:
            raise DomainError(f'closed form {case} needs an index')
        out = fn(x, int(index))
    else:
        out = fn(x)
    out = numpy.asarray(out, dtype=float)
    return out[()] if out.ndim == 0 else out


def fssr_closed_form(s, r, x):
    """``f_{s,s,r}(x)`` from the radical ``R`` and angle of
    ``x**(1/(1+s)) + exp(i pi/(1+s))``."""

    x = _positive(x)
    t = x ** (1 / (1 + s))
    c = t + numpy.exp(1j * math.pi / (1 + s))
    R, phi = numpy.abs(c), numpy.angle(c)
    return x ** (r / (1 + s)) / R ** r * numpy.sin(r * phi) / (math.pi * x)


# =================
# Edge asymptotics
# =================

EDGES = ('hard_zero', 'zero_vanishing', 'soft_upper', 'infinity_tail')


@dataclass(frozen=True)
class EdgeAsymptote:
    """
    Leading behaviour ``coefficient * x**exponent`` at an edge.

    For ``soft_upper`` the profile is ``coefficient * sqrt(1 - x/K)`` and
    ``exponent`` is 1/2.
    """

    edge: str
    coefficient: float
    exponent: float
    endpoint: float = 0.0

    def __call__(self, x):
        x = numpy.asarray(x, dtype=float)
        if self.edge == 'soft_upper':
            return self.coefficient * numpy.sqrt(1 - x / self.endpoint)
        return self.coefficient * x ** self.exponent


def edge_asymptote(family, edge):
    """
    Leading asymptote of a density at one of its edges.

    ``edge`` is ``'hard_zero'`` / ``'zero_vanishing'`` (both select the
    edge at the origin; the returned kind tells which applies),
    ``'soft_upper'`` or ``'infinity_tail'``.

    Raises
    ------
    InvalidFamily
        If the family has no such edge.
    """

    fam = _as_family(family)
    if edge not in EDGES:
        raise InvalidFamily(f'unknown edge {edge!r}; expected one of {EDGES}')

    if isinstance(fam, ProductInverseFamily):
        s, q, r = fam.s, fam.q, fam.r
        if q == 0:
            fam = RaneyFamily(RaneyParams(1 + s, as_fraction(r)))
        elif edge == 'infinity_tail':
            return EdgeAsymptote('infinity_tail',
                                 r / math.pi * math.sin(math.pi / (1 + q)),
                                 -(2 + q) / (1 + q))
        elif edge == 'soft_upper' or s == 0:
            raise InvalidFamily(f'{fam} has no {edge} edge')
        elif r == 1 + s:
            # sin(A) and sin(r phi) vanish together here, leaving a
            # factor 1+q that is absent when r < 1+s.
            return EdgeAsymptote('zero_vanishing',
                                 (1 + q) * math.sin(math.pi / (1 + s))
                                 / math.pi, 1 / (1 + s))
        else:
            return EdgeAsymptote('hard_zero',
                                 math.sin(r * math.pi / (1 + s)) / math.pi,
                                 -1 + r / (1 + s))

    p, r = fam.p, fam.r
    if edge == 'infinity_tail':
        raise InvalidFamily(f'{fam} has bounded support')
    if edge == 'soft_upper':
        coeff = (math.sqrt(2) * r / math.pi * (p - 1) ** (p - r - 1.5)
                 / p ** (p - r + 0.5))
        return EdgeAsymptote('soft_upper', coeff, 0.5, fam.params.K)
    if fam.params.r == fam.params.p:
        return EdgeAsymptote('zero_vanishing', math.sin(math.pi / p) / math.pi,
                             1 / p)
    return EdgeAsymptote('hard_zero', math.sin(r * math.pi / p) / math.pi,
                         -(p - r) / p)


# =====================
# Moments and the CDF
# =====================

def moment_quadrature(family, k):
    """
    ``int x**k f(x) dx`` by adaptive quadrature in the angle variable.

    Raises
    ------
    DivergentMoment
        For heavy-tailed families when ``k >= 1``.
    """

    return _as_family(family).moment(k)


def cdf(family, x):
    """Distribution function of a family, vectorized over ``x``."""
    return _as_family(family).cdf(x)


# =============
# Density curve
# =============

@dataclass(frozen=True)
class DensityCurve:
    """
    Sampled density with support metadata.

    ``x`` is strictly increasing and ``f`` non-negative.
    """

    x: numpy.ndarray
    f: numpy.ndarray
    support: tuple
    family: str = ''
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = numpy.asarray(self.x, dtype=float)
        f = numpy.asarray(self.f, dtype=float)
        if x.shape != f.shape or x.ndim != 1:
            raise ValueError('x and f must be 1-d arrays of equal length')
        if x.size > 1 and not numpy.all(numpy.diff(x) > 0):
            raise ValueError('x must be strictly increasing')
        if numpy.any(f < 0) or not numpy.all(numpy.isfinite(f)):
            raise ValueError('f must be finite and non-negative')
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'f', f)
        object.__setattr__(self, 'support', tuple(float(v)
                                                  for v in self.support))

    @property
    def bounded(self):
        return math.isfinite(self.support[1])

    def mass(self):
        """Trapezoid mass of the samples."""
        return float(numpy.trapezoid(self.f, self.x))

    def __len__(self):
        return self.x.size

    def __eq__(self, other):
        if not isinstance(other, DensityCurve):
            return NotImplemented
        return (numpy.array_equal(self.x, other.x)
                and numpy.array_equal(self.f, other.f)
                and self.support == other.support
                and self.family == other.family)


def density_curve(family, x=None, n_phi=None):
    """
    Sample a family on an ``x`` grid or a uniform angle grid.

    Parameters
    ----------
    family : family object or str
    x : array_like, optional
        Points in increasing order.
    n_phi : int, optional
        Number of midpoints of a uniform partition of the angle interval;
        the resulting ``x`` values are returned in increasing order.
    """

    fam = _as_family(family)
    if (x is None) == (n_phi is None):
        raise ValueError('give exactly one of x and n_phi')
    if n_phi is not None:
        n = int(n_phi)
        if n < 1:
            raise ValueError('n_phi must be positive')
        phi = fam.phi_max * (numpy.arange(n) + 0.5) / n
        xs, fs = fam.at_angle(phi)
        xs, fs = numpy.atleast_1d(xs)[::-1], numpy.atleast_1d(fs)[::-1]
    else:
        xs = numpy.asarray(x, dtype=float)
        fs = numpy.atleast_1d(fam.density(xs))
    return DensityCurve(xs, fs, fam.support, str(fam))
