"""
Logarithmic energy functionals and stationarity of their minimizers.

The functional on probability densities ``rho`` on ``[0, L]`` is

.. math::

    E_\\theta[\\rho] = \\int V \\rho - \\frac12 \\iint \\rho(y)\\rho(y')
        \\log\\left(|y^{1/\\theta} - y'^{1/\\theta}|\\,|y - y'|\\right)

and its minimizer has a constant effective field
``V(x) - int log(|x^{1/theta} - y^{1/theta}| |x - y|) rho(y) dy`` on the
support.  With ``V(y) = theta y**(1/theta)`` the minimizer is the
Fuss-Catalan density ``W_{theta+1,1}`` on ``[0, K_{theta+1}]``; the
potential ``y**(1/theta)`` gives the same law dilated by ``theta**theta``.

Measures are represented by objects with ``support``, ``density(y)`` and
``integrate(fun, at=None)``; the optional ``at`` marks a point where
``fun`` has an integrable logarithmic singularity.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy
from scipy.integrate import quad

from .combinat import RaneyParams
from .density import DensityCurve, RaneyFamily, _as_family
from .errors import DomainError, UnnormalizedCurve

__all__ = ['EnergyFunctionalSpec', 'FamilyMeasure', 'CurveMeasure',
           'FunctionMeasure', 'PerturbedMeasure', 'as_measure', 'energy',
           'effective_field', 'field_spread', 'StationarityReport',
           'stationarity', 'random_bumps', 'minimality_probe',
           'green_relation_residuals', 'support_endpoint_identity',
           'MASS_TOL']

MASS_TOL = 1e-2
_QUAD = dict(epsabs=1e-12, epsrel=1e-10, limit=400)


# =====================
# Functional definition
# =====================

@dataclass(frozen=True)
class EnergyFunctionalSpec:
    """
    Potential and interaction kernel of an energy functional.

    Parameters
    ----------
    theta : float
        Kernel exponent, ``theta >= 1``.
    potential : {'power', 'linear', 'quadratic'}
        ``coefficient * y**(1/theta)``, ``coefficient * y`` or
        ``(y - c)**2``.
    coefficient : float, optional
        Defaults to ``theta`` for ``'power'`` and 1 for ``'linear'``.
    c : float
        Centre of the quadratic potential.
    kernel : {'muttalib', 'bures'}
        ``'bures'`` (``theta = 1`` only) replaces the kernel by
        ``log(|y - y'|**2 / |y + y'|)``.
    mass : float
        Total mass the density must carry.
    """

    theta: float = 1.0
    potential: str = 'power'
    coefficient: float = None
    c: float = 0.0
    kernel: str = 'muttalib'
    mass: float = 1.0

    def __post_init__(self):
        if not self.theta >= 1:
            raise DomainError('theta must be at least 1')
        if self.potential not in ('power', 'linear', 'quadratic'):
            raise ValueError(f'unknown potential {self.potential!r}')
        if self.kernel not in ('muttalib', 'bures'):
            raise ValueError(f'unknown kernel {self.kernel!r}')
        if self.kernel == 'bures' and self.theta != 1:
            raise DomainError('the Bures kernel is defined for theta = 1')
        if self.coefficient is None:
            default = self.theta if self.potential == 'power' else 1.0
            object.__setattr__(self, 'coefficient', float(default))

    def V(self, y):
        y = numpy.asarray(y, dtype=float)
        if self.potential == 'power':
            return self.coefficient * y ** (1.0 / self.theta)
        if self.potential == 'linear':
            return self.coefficient * y
        return (y - self.c) ** 2

    def kernel_fn(self, x, y):
        """Interaction ``log(|x^{1/theta} - y^{1/theta}| |x - y|)``."""
        d = abs(x - y)
        if self.kernel == 'bures':
            return 2.0 * math.log(d) - math.log(x + y)
        if self.theta == 1:
            return 2.0 * math.log(d)
        t = 1.0 / self.theta
        return math.log(abs(x ** t - y ** t)) + math.log(d)


# ========
# Measures
# ========

class FamilyMeasure:
    """
    An analytic density from :mod:`raney.density`, optionally dilated.

    The measure is the law of ``scale * X`` with ``X`` drawn from the
    family.  Integrals run in the family's angle variable.
    """

    def __init__(self, family, scale=1.0):
        self.family = _as_family(family)
        self.scale = float(scale)
        lo, hi = self.family.support
        self.support = (self.scale * lo, self.scale * hi)
        self.mass = 1.0

    def density(self, y):
        return self.family.density(numpy.asarray(y) / self.scale) / self.scale

    def integrate(self, fun, at=None):
        fam, s = self.family, self.scale
        m = fam.phi_max

        def integrand(t, delta=None):
            y, mass = fam.rho_and_mass(t, delta)
            return fun(s * float(y)) * float(mass)

        cuts = [0.0, 0.5 * m, m]
        if at is not None and self.support[0] < at < self.support[1]:
            cuts.append(float(fam.invert(at / s)))
        cuts = sorted(set(cuts))
        return sum(fam._integrate(integrand, a, b, epsrel=1e-10)
                   for a, b in zip(cuts[:-1], cuts[1:]))


class FunctionMeasure:
    """A density given as a callable on a bounded interval."""

    def __init__(self, density, support, breakpoints=()):
        self._f = density
        self.support = (float(support[0]), float(support[1]))
        self.breakpoints = tuple(float(b) for b in breakpoints)
        self.mass = self.integrate(lambda y: 1.0)

    def density(self, y):
        y = numpy.asarray(y, dtype=float)
        lo, hi = self.support
        out = numpy.where((y > lo) & (y < hi),
                          numpy.vectorize(self._f)(numpy.clip(y, lo, hi)), 0.0)
        return out[()] if out.ndim == 0 else out

    def integrate(self, fun, at=None):
        lo, hi = self.support
        cuts = [lo, hi] + [b for b in self.breakpoints if lo < b < hi]
        if at is not None and lo < at < hi:
            cuts.append(float(at))
        cuts = sorted(set(cuts))
        return sum(quad(lambda y: fun(y) * self._f(y), a, b, **_QUAD)[0]
                   for a, b in zip(cuts[:-1], cuts[1:]))


class CurveMeasure(FunctionMeasure):
    """Piecewise-linear interpolant of a :class:`DensityCurve`."""

    def __init__(self, curve):
        if not isinstance(curve, DensityCurve):
            raise TypeError('expected a DensityCurve')
        if not curve.bounded:
            raise DomainError('energy functionals need a bounded support')
        self.curve = curve
        xs, fs = curve.x, curve.f

        def f(y):
            return float(numpy.interp(y, xs, fs, left=0.0, right=0.0))

        # Breakpoints at a subsample of the nodes keep quad honest.
        step = max(1, xs.size // 400)
        super().__init__(f, (xs[0], xs[-1]), xs[::step])


class PerturbedMeasure:
    """
    ``base + amplitude * sum_i w_i b_i`` with smooth normalized bumps.

    ``b_i(y) = (2/h) cos(pi (y - c)/h)**2`` on ``|y - c| < h/2``; the
    weights must sum to zero so the total mass is unchanged.
    """

    def __init__(self, base, bumps, amplitude=1e-2):
        self.base = base
        self.bumps = tuple((float(c), float(h), float(w)) for c, h, w in bumps)
        self.amplitude = float(amplitude)
        if abs(sum(w for _, _, w in self.bumps)) > 1e-12:
            raise ValueError('bump weights must sum to zero')
        lo, hi = base.support
        for c, h, _ in self.bumps:
            if c - h / 2 <= lo or c + h / 2 >= hi:
                raise ValueError('bumps must lie inside the support')
        self.support = base.support
        self.mass = base.mass

    @staticmethod
    def _bump(y, c, h):
        u = (y - c) / h
        return numpy.where(abs(u) < 0.5, 2.0 / h * numpy.cos(math.pi * u) ** 2,
                           0.0)

    def perturbation(self, y):
        y = numpy.asarray(y, dtype=float)
        return self.amplitude * sum(w * self._bump(y, c, h)
                                    for c, h, w in self.bumps)

    def density(self, y):
        return self.base.density(y) + self.perturbation(y)

    def integrate(self, fun, at=None):
        total = self.base.integrate(fun, at)
        for c, h, w in self.bumps:
            a, b = c - h / 2, c + h / 2
            cuts = [a, b] + ([float(at)] if at is not None and a < at < b
                             else [])
            cuts.sort()
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                total += self.amplitude * w * quad(
                    lambda y: fun(y) * float(self._bump(y, c, h)),
                    lo, hi, **_QUAD)[0]
        return total


def as_measure(obj):
    """Coerce a family string/object, curve or measure to a measure."""
    if hasattr(obj, 'integrate') and hasattr(obj, 'support'):
        return obj
    if isinstance(obj, DensityCurve):
        return CurveMeasure(obj)
    return FamilyMeasure(obj)


def _check_mass(spec, measure):
    if abs(measure.mass - spec.mass) > MASS_TOL * spec.mass:
        raise UnnormalizedCurve(f'mass {measure.mass:.6g} differs from the '
                                f'required {spec.mass:g}')
    if measure.support[0] < 0:
        raise DomainError('energy functionals live on the half line')


# ========================
# Energy and the field
# ========================

def log_potential(spec, measure, x):
    """``int k(x, y) rho(y) dy`` for the functional's kernel ``k``."""
    return measure.integrate(lambda y: spec.kernel_fn(x, y), at=x)


def effective_field(spec, measure, x):
    """
    ``V(x)`` minus the logarithmic potential of the density at ``x``.

    Vectorized over ``x``; every ``x`` must lie strictly inside the
    support.
    """

    measure = as_measure(measure)
    _check_mass(spec, measure)
    x = numpy.asarray(x, dtype=float)
    lo, hi = measure.support
    if numpy.any((x <= lo) | (x >= hi)):
        raise DomainError('field points must be inside the support')
    out = numpy.array([float(spec.V(xi)) - log_potential(spec, measure, xi)
                       for xi in x.ravel()]).reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def energy(spec, measure):
    """
    ``int V rho - (1/2) int int rho rho' k`` by nested quadrature.

    For a :class:`PerturbedMeasure` ``rho + eps eta`` the quadratic
    functional is expanded exactly as ``E[rho] + eps int eta (V - U_rho)
    - (eps**2/2) int int eta eta' k`` so that only the base density needs
    the full double integral.

    Raises
    ------
    UnnormalizedCurve
        If the density's mass is off by more than :data:`MASS_TOL`
        relative.
    """

    measure = as_measure(measure)
    _check_mass(spec, measure)
    if isinstance(measure, PerturbedMeasure):
        return _perturbed_energy(spec, measure)
    potential = measure.integrate(lambda y: float(spec.V(y)))
    interaction = measure.integrate(
        lambda y: log_potential(spec, measure, y))
    return potential - 0.5 * interaction


def _bump_integral(fun, c, h, at=None, epsrel=1e-9):
    a, b = c - h / 2, c + h / 2
    cuts = [a, b] + ([float(at)] if at is not None and a < at < b else [])
    cuts.sort()
    bump = PerturbedMeasure._bump
    return sum(quad(lambda y: fun(y) * float(bump(y, c, h)), lo, hi,
                    epsabs=1e-12, epsrel=epsrel, limit=200)[0]
               for lo, hi in zip(cuts[:-1], cuts[1:]))


def _perturbed_energy(spec, pm, base_energy=None):
    base = pm.base
    linear = sum(w * _bump_integral(
        lambda y: float(spec.V(y)) - log_potential(spec, base, y), c, h)
        for c, h, w in pm.bumps)
    quadratic = 0.0
    for c1, h1, w1 in pm.bumps:
        for c2, h2, w2 in pm.bumps:
            inner = (lambda x, c2=c2, h2=h2:
                     _bump_integral(lambda y: spec.kernel_fn(x, y), c2, h2,
                                    at=x))
            quadratic += w1 * w2 * _bump_integral(inner, c1, h1)
    eps = pm.amplitude
    if base_energy is None:
        base_energy = energy(spec, base)
    return base_energy + eps * linear - 0.5 * eps ** 2 * quadratic


def field_spread(values):
    """``max - min`` of a set of field values."""
    values = numpy.asarray(values, dtype=float)
    return float(values.max() - values.min())


@dataclass(frozen=True)
class StationarityReport:
    x: numpy.ndarray
    field: numpy.ndarray
    spread: float
    threshold: float

    @property
    def passed(self):
        return self.spread <= self.threshold

    def __str__(self):
        lines = [f'{"x":>12} {"field":>16}']
        lines += [f'{a:12.6f} {b:16.10f}' for a, b in zip(self.x, self.field)]
        verdict = 'PASS' if self.passed else 'FAIL'
        lines.append(f'spread {self.spread:.3e} (threshold '
                     f'{self.threshold:g}): {verdict}')
        return '\n'.join(lines)


def stationarity(spec, measure, n_points=10, fraction=0.8, threshold=1e-2):
    """
    Field values on the middle ``fraction`` of the support and their spread.
    """

    measure = as_measure(measure)
    lo, hi = measure.support
    pad = 0.5 * (1.0 - fraction)
    x = lo + (hi - lo) * numpy.linspace(pad, 1.0 - pad, int(n_points))
    field = effective_field(spec, measure, x)
    return StationarityReport(x, field, field_spread(field), threshold)


# ================
# Minimality probe
# ================

def random_bumps(support, rng, n_pairs=1, width=0.2, window=(0.2, 0.7)):
    """
    Mass-preserving bump layout: pairs of ``+1`` / ``-1`` weighted bumps.

    Centres are uniform in the ``window`` fraction of the support; widths
    are ``width`` times its length.
    """

    lo, hi = support
    length = hi - lo
    out = []
    for _ in range(n_pairs):
        centres = lo + length * rng.uniform(*window, size=2)
        sign = rng.choice([-1.0, 1.0])
        out += [(centres[0], width * length, sign),
                (centres[1], width * length, -sign)]
    return out


def minimality_probe(spec, measure, n_probes=5, amplitude=1e-2, seed=0):
    """
    Energies of ``n_probes`` random mass-preserving perturbations.

    Returns
    -------
    base : float
        Energy of the unperturbed density.
    perturbed : list of float
    """

    measure = as_measure(measure)
    rng = numpy.random.default_rng(seed)
    base = energy(spec, measure)
    perturbed = []
    for _ in range(n_probes):
        pm = PerturbedMeasure(measure, random_bumps(measure.support, rng),
                              amplitude)
        grid = numpy.linspace(*measure.support, 2001)[1:-1]
        if numpy.any(pm.density(grid) < 0):
            raise ValueError('perturbation makes the density negative')
        perturbed.append(_perturbed_energy(spec, pm, base))
    return base, perturbed


# =========================
# Green's function relation
# =========================

def green_relation_residuals(theta, n=20):
    """
    Residuals of the hard-edge Green's relation at ``n`` support points.

    ``w`` is the boundary value of ``x G(x)`` for ``W_{theta+1,1}`` taken
    from the angle parameterization.  Two residuals are returned per point:
    ``w**(1+1/theta) / (w-1)**(1/theta) - x**(1/theta)`` (principal powers)
    and its polynomial form ``w**(theta+1) - x (w - 1)``.
    """

    fam = RaneyFamily(RaneyParams(Fraction(theta) + 1, 1))
    phi = fam.phi_max * (numpy.arange(n) + 0.5) / n
    x = fam.rho(phi)
    w = fam.boundary_w(phi)
    t = 1.0 / theta
    root_form = w ** (1 + t) / (w - 1) ** t - x ** t
    poly_form = w ** (theta + 1) - x * (w - 1)
    return numpy.abs(root_form), numpy.abs(poly_form)


def support_endpoint_identity(theta):
    """
    Exact check of ``L**theta = theta**theta K_{theta+1}``.

    ``L = (1 + theta)**(1 + 1/theta)`` is the right endpoint in the
    variable ``y**(1/theta)``; ``theta`` must be a positive integer.
    """

    theta = int(theta)
    L_pow = Fraction(1 + theta) ** (theta + 1)
    p = theta + 1
    K = Fraction(p ** p, (p - 1) ** (p - 1))
    return L_pow == Fraction(theta) ** theta * K
