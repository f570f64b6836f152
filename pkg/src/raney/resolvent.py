"""
Stieltjes transforms from their algebraic equations.

Every equation handled here is written in the variable ``v`` of its
``r = 1`` member, and the physical branch is the one that is real and lies
in ``(0, 1)`` on the negative real axis (there ``w = zG(z) = int |z|/(|z|+x)
dmu(x)``, for any probability measure on ``[0, inf)``).  That root is unique
and found by bisection; the branch is then followed by Newton continuation
along the circular arc ``|z| = const`` to the requested point.  For a
general ``r`` the transform is ``w = v**r`` (principal power), using
``(zG_{p,1})**r = zG_{p,r}``.

Three equation families are covered:

``RaneyForm(params)``
    ``w**(p/r) - z w**(1/r) + z = 0``, support ``[0, K_p]``.
``ProductChainForm(s, q, u, v)``
    ``-prod_j (1 - u_j zG) = G prod_k (v_k zG + 1 - v_k)``, the limit law of
    products of ``s`` Gaussian and ``q`` inverse Gaussian matrices with
    aspect-ratio limits ``u_j``, ``v_k``.
``MixedForm(s, q, r)``
    ``w**((1+s)/r) + z (1 - w**(1/r))**(1+q) = 0``, support ``[0, inf)``
    when ``q > 0``.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy
from scipy.optimize import brentq

from ._roots import aberth_roots
from .combinat import RaneyParams, as_fraction
from .errors import (BranchAmbiguity, DomainError, ExtrapolationUnstable,
                     NonConvergence, OnCutError)

__all__ = ['RaneyForm', 'ProductChainForm', 'MixedForm', 'BranchRule',
           'solve_raney_w', 'solve_product_chain', 'solve_mixed_w',
           'stieltjes', 'stieltjes_invert', 'two_source_resolvent',
           'defining_residual']

NEWTON_TOL = 1e-14
NEWTON_MAX_ITER = 100


# ============
# Domain types
# ============

@dataclass(frozen=True)
class RaneyForm:
    params: RaneyParams

    @property
    def cut(self):
        return 0.0, self.params.K


@dataclass(frozen=True)
class ProductChainForm:
    """
    Product of ``s`` Gaussian and ``q`` inverse Gaussian factors.

    ``u`` has length ``q + 1`` with ``u[0] == 1``; ``v`` has length ``s``.
    All ratios lie in ``(0, 1]``.
    """

    s: int
    q: int
    u: tuple = None
    v: tuple = None

    def __post_init__(self):
        s, q = int(self.s), int(self.q)
        if s < 0 or q < 0:
            raise DomainError('s and q must be non-negative')
        u = tuple(float(x) for x in (self.u if self.u is not None
                                     else (1.0,) * (q + 1)))
        v = tuple(float(x) for x in (self.v if self.v is not None
                                     else (1.0,) * s))
        if len(u) != q + 1 or len(v) != s:
            raise DomainError(f'need len(u) = q+1 = {q + 1} and len(v) = '
                              f's = {s}')
        if u[0] != 1.0:
            raise DomainError('u[0] is the ratio N/N_0 and must equal 1')
        if not all(0 < x <= 1 for x in u + v):
            raise DomainError('ratio limits must lie in (0, 1]')
        if s == 0 and q == 0:
            raise DomainError('(s, q) = (0, 0) is a point mass')
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'u', u)
        object.__setattr__(self, 'v', v)

    @property
    def unbounded(self):
        """Support reaches infinity iff some ``u_j`` (``j >= 1``) is 1."""
        return any(x == 1.0 for x in self.u[1:])

    @property
    def cut(self):
        return 0.0, (math.inf if self.unbounded else None)


@dataclass(frozen=True)
class MixedForm:
    s: int
    q: int
    r: float = 1.0

    def __post_init__(self):
        s, q = int(self.s), int(self.q)
        if s < 0 or q < 0 or (s, q) == (0, 0):
            raise DomainError('need s, q >= 0 and (s, q) != (0, 0)')
        r = float(self.r)
        if not 0 < r <= 1 + s:
            raise DomainError(f'r must lie in (0, 1+s], got {r}')
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'r', r)

    @property
    def cut(self):
        if self.q == 0:
            return 0.0, float(RaneyParams(1 + self.s, 1).K)
        return 0.0, math.inf


@dataclass(frozen=True)
class BranchRule:
    """
    Conditions identifying the Stieltjes branch.

    ``zG(z) -> at_infinity`` away from the positive axis, and ``Im G`` has
    the sign opposite to ``Im z`` when ``opposite_half_plane`` is set.
    """

    at_infinity: complex = 1.0
    opposite_half_plane: bool = True

    def admits(self, z, G, tol=1e-12):
        if not self.opposite_half_plane or z.imag == 0:
            return True
        return G.imag * math.copysign(1.0, z.imag) <= tol * max(1.0, abs(G))


DEFAULT_BRANCH_RULE = BranchRule()


# ===========================
# Scalar continuation helpers
# ===========================

def _newton(F, dF, v, z, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER):
    for it in range(1, max_iter + 1):
        d = dF(v, z)
        if d == 0 or not cmath.isfinite(d):
            return None, it
        step = F(v, z) / d
        v = v - step
        if not cmath.isfinite(v):
            return None, it
        if abs(step) <= tol * max(1.0, abs(v)):
            return v, it
    return None, max_iter


def _seed_negative_axis(real_fn, a):
    """Unique root in ``(0, 1)`` of the branch equation at ``z = -a``."""
    return brentq(lambda t: real_fn(t, a), 0.0, 1.0, xtol=1e-16, rtol=1e-15,
                  maxiter=200)


def _arc_path(z, cut_end):
    """
    Arc ``|z| = const`` from the negative real axis to ``z``.

    The angle is interpolated geometrically when the end of the arc is near
    the cut so that steps shrink as the cut is approached.
    """

    radius = abs(z)
    theta = cmath.phase(z)
    sign = 1.0 if theta >= 0 else -1.0
    if z.imag == 0 and z.real > 0:
        # Real point beyond a bounded cut: the whole arc is analytic.
        def path(t):
            return radius * cmath.exp(1j * math.pi * (1.0 - t))
        return path
    target = abs(theta)
    if radius > cut_end or target > 0.5:
        def path(t):
            ang = math.pi + (target - math.pi) * t
            return radius * cmath.exp(1j * sign * ang)
        return path
    log_start, log_end = math.log(math.pi), math.log(target)

    def path(t):
        ang = math.exp(log_start + (log_end - log_start) * t)
        return radius * cmath.exp(1j * sign * ang)
    return path


def _continue(F, dF, real_fn, z, cut_end):
    """Follow the physical branch from ``-|z|`` to ``z``."""

    radius = abs(z)
    v0 = complex(_seed_negative_axis(real_fn, radius))
    start = complex(-radius, 0.0)
    v, _ = _newton(F, dF, v0, start)
    if v is None:
        raise NonConvergence('Newton polish failed on the negative axis')
    if z.imag == 0 and z.real < 0:
        return v

    path = _arc_path(z, cut_end)
    t, dt = 0.0, 0.05
    v_prev, dt_prev = v, None
    while 1.0 - t > 1e-12:
        dt = min(dt, 1.0 - t)
        z_new = path(t + dt)
        if dt_prev is not None:
            guess = v + (v - v_prev) * (dt / dt_prev)
        else:
            guess = v
        v_new, iters = _newton(F, dF, guess, z_new, max_iter=12)
        scale = max(abs(v), 1e-300)
        if (v_new is not None and abs(v_new - v) <= 0.2 * scale
                and abs(v_new - guess) <= 0.05 * scale + 1e-14):
            v_prev, v = v, v_new
            t += dt
            dt_prev = dt
            if iters <= 4:
                dt = min(2.0 * dt, 0.25)
        else:
            dt *= 0.5
            if dt < 1e-13:
                raise NonConvergence(f'continuation stalled at t={t:.6g} '
                                     f'on the way to z={z}')
    v_final, _ = _newton(F, dF, v, complex(z))
    if v_final is None:
        raise NonConvergence(f'Newton polish failed at z={z}')
    return v_final


def _check_cut(z, lo, hi, what):
    tol = 1e-14 * (1.0 + abs(z))
    if abs(z.imag) <= tol and lo - tol <= z.real <= hi + tol:
        raise OnCutError(f'z={z} lies on the cut [{lo}, {hi}] of {what}')


def _cpow(v, e):
    """Principal power ``v**e`` with an exact path for integer ``e``."""
    if float(e).is_integer():
        return v ** int(e)
    return cmath.exp(e * cmath.log(v))


# =====
# Raney
# =====

def _raney_equations(p):
    pf = float(p)

    def F(v, z):
        return _cpow(v, pf) - z * v + z

    def dF(v, z):
        return pf * _cpow(v, pf - 1.0) - z

    def real_fn(t, a):
        return t ** pf + a * t - a

    return F, dF, real_fn


def _raney_v(params, z):
    z = complex(z)
    K = params.K
    _check_cut(z, 0.0, K, f'the Raney({params.p}, {params.r}) resolvent')
    F, dF, real_fn = _raney_equations(params.p)
    return _continue(F, dF, real_fn, z, K)


def solve_raney_w(params, z):
    """
    ``w = zG_{p,r}(z)`` on the branch with ``w -> 1`` at infinity.

    Parameters
    ----------
    params : RaneyParams
    z : complex
        Any point off the cut ``[0, K_p]``.

    Returns
    -------
    complex

    Raises
    ------
    OnCutError
        If ``z`` lies on ``[0, K_p]``.
    NonConvergence
        If the branch continuation stalls.
    """

    if not isinstance(params, RaneyParams):
        params = RaneyParams(*params)
    v = _raney_v(params, z)
    return _cpow(v, float(params.r))


# =============
# Product chain
# =============

def _chain_polys(spec):
    """Ascending coefficients of ``A(w) = w prod(v_k w + 1 - v_k)`` and
    ``B(w) = prod(1 - u_j w)``, built exactly and rounded once."""

    A = [Fraction(0), Fraction(1)]
    for vk in spec.v:
        vk = Fraction(vk)
        A = numpy.convolve(A, [1 - vk, vk]).tolist()
    B = [Fraction(1)]
    for uj in spec.u:
        B = numpy.convolve(B, [Fraction(1), -Fraction(uj)]).tolist()
    return (numpy.array([float(c) for c in A]),
            numpy.array([float(c) for c in B]))


def _poly_and_deriv(c, w):
    val, der = 0j, 0j
    for a in reversed(c):
        der = der * w + val
        val = val * w + a
    return val, der


def solve_product_chain(spec, z, rule=DEFAULT_BRANCH_RULE, return_roots=False):
    """
    ``G(z)`` for a product of Gaussian and inverse Gaussian matrices.

    The equation is expanded into a polynomial in ``w = zG`` of degree
    ``max(q+1, s+1)`` whose roots are all found simultaneously.  The
    physical root is identified by continuation from the negative real axis
    and must be isolated from every other root and respect ``rule``.

    Raises
    ------
    BranchAmbiguity
        If another root is numerically indistinguishable from the tracked
        one, or the tracked root violates the half-plane rule.
    """

    z = complex(z)
    if z == 0:
        raise OnCutError('z = 0 is on every cut')
    if spec.unbounded:
        _check_cut(z, 0.0, math.inf, 'the product-chain resolvent')
    A, B = _chain_polys(spec)

    def F(w, zz):
        a, _ = _poly_and_deriv(A, w)
        b, _ = _poly_and_deriv(B, w)
        return a + zz * b

    def dF(w, zz):
        _, da = _poly_and_deriv(A, w)
        _, db = _poly_and_deriv(B, w)
        return da + zz * db

    def real_fn(t, a):
        return (numpy.polyval(A[::-1], t) - a * numpy.polyval(B[::-1], t)).real

    tracked = _continue(F, dF, real_fn, z, math.inf)

    n = max(len(A), len(B))
    coeffs = numpy.zeros(n, dtype=complex)
    coeffs[:len(A)] += A
    coeffs[:len(B)] += z * B
    roots = aberth_roots(coeffs)
    dist = numpy.abs(roots - tracked)
    order = numpy.argsort(dist)
    scale = max(1.0, abs(tracked))
    if dist[order[0]] > 1e-8 * scale:
        raise NonConvergence('tracked root not found among polynomial roots')
    if len(roots) > 1 and dist[order[1]] <= 1e-8 * scale:
        raise BranchAmbiguity(f'two roots coincide with the tracked branch '
                              f'at z={z}: {roots[order[:2]]}')
    w = tracked
    G = w / z
    if not rule.admits(z, G):
        raise BranchAmbiguity(f'tracked root G={G} at z={z} violates the '
                              f'half-plane rule')
    if return_roots:
        return G, roots / z
    return G


# =====
# Mixed
# =====

def _mixed_equations(s, q):
    def F(v, z):
        return v ** (1 + s) + z * (1.0 - v) ** (1 + q)

    def dF(v, z):
        return (1 + s) * v ** s - z * (1 + q) * (1.0 - v) ** q

    def real_fn(t, a):
        return t ** (1 + s) - a * (1.0 - t) ** (1 + q)

    return F, dF, real_fn


def solve_mixed_w(spec, z):
    """
    ``w = zG(z)`` for ``w**((1+s)/r) + z (1 - w**(1/r))**(1+q) = 0``.

    For ``s > q`` this coincides with the Raney solution in the variable
    ``-(-z)**(1/(1+q))`` (principal branch, cut on ``[0, inf)``).
    """

    z = complex(z)
    lo, hi = spec.cut
    _check_cut(z, lo, hi, f'the mixed ({spec.s}, {spec.q}) resolvent')
    F, dF, real_fn = _mixed_equations(spec.s, spec.q)
    v = _continue(F, dF, real_fn, z, hi)
    return _cpow(v, spec.r)


# =========
# Dispatch
# =========

def stieltjes(spec, z):
    """Stieltjes transform ``G(z)`` for any of the equation families."""
    if isinstance(spec, RaneyParams):
        spec = RaneyForm(spec)
    z = complex(z)
    if isinstance(spec, RaneyForm):
        return solve_raney_w(spec.params, z) / z
    if isinstance(spec, MixedForm):
        return solve_mixed_w(spec, z) / z
    if isinstance(spec, ProductChainForm):
        return solve_product_chain(spec, z)
    raise TypeError(f'unsupported resolvent spec {spec!r}')


def defining_residual(spec, z, w):
    """Residual of the defining equation at ``(z, w = zG)``."""
    if isinstance(spec, RaneyParams):
        spec = RaneyForm(spec)
    z, w = complex(z), complex(w)
    if isinstance(spec, RaneyForm):
        p, r = float(spec.params.p), float(spec.params.r)
        return _cpow(w, p / r) - z * _cpow(w, 1.0 / r) + z
    if isinstance(spec, MixedForm):
        s, q, r = spec.s, spec.q, spec.r
        return _cpow(w, (1 + s) / r) + z * (1 - _cpow(w, 1.0 / r)) ** (1 + q)
    if isinstance(spec, ProductChainForm):
        G = w / z
        lhs = -numpy.prod([1 - u * w for u in spec.u])
        rhs = G * numpy.prod([vk * w + 1 - vk for vk in spec.v])
        return lhs - rhs
    raise TypeError(f'unsupported resolvent spec {spec!r}')


# ===================
# Stieltjes inversion
# ===================

def stieltjes_invert(spec, x, epsilons=(1e-2, 1e-3, 1e-4), rtol=1e-2):
    """
    Density at ``x`` from ``Im G(x - i eps) / pi``, extrapolated in ``eps``.

    Two-point Richardson extrapolation (error linear in ``eps``) is applied
    to each consecutive pair of the decreasing ``epsilons``; the last
    estimate is returned.

    Raises
    ------
    ExtrapolationUnstable
        If the last two extrapolants differ by more than ``rtol`` relative
        (plus ``1e-6`` absolute).
    """

    eps = [float(e) for e in epsilons]
    if len(eps) < 2 or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError('epsilons must be a decreasing list of length >= 2')
    x = float(x)
    values = [stieltjes(spec, complex(x, -e)).imag / math.pi for e in eps]
    extrap = [(ea * db - eb * da) / (ea - eb)
              for (ea, da), (eb, db) in zip(zip(eps, values),
                                            zip(eps[1:], values[1:]))]
    if len(extrap) >= 2:
        a, b = extrap[-2], extrap[-1]
        if abs(a - b) > rtol * abs(b) + 1e-6:
            raise ExtrapolationUnstable(f'estimates {extrap} at x={x} do not '
                                        f'settle')
    return extrap[-1]


# =================================
# Gaussian ensemble with two sources
# =================================

def two_source_resolvent(z, a=1.0):
    """
    Resolvent of the Wigner matrix plus sources ``+-a`` (half each).

    Solves ``g**3 - 2 z g**2 + (1 - a**2 + z**2) g - z = 0`` on the branch
    ``g ~ 1/z`` at infinity, tracked down from ``z + i H`` (``H`` large).
    At ``a = 1`` this is ``z G_{3,2}(z**2)``.
    """

    z = complex(z)
    a2 = float(a) ** 2

    def F(g, zz):
        return ((g - 2 * zz) * g + 1 - a2 + zz * zz) * g - zz

    def dF(g, zz):
        return (3 * g - 4 * zz) * g + 1 - a2 + zz * zz

    sign = 1.0 if z.imag >= 0 else -1.0
    height = 1e3 * (1.0 + abs(z) + a2)
    start = complex(z.real, sign * height)
    g = 1.0 / start + (1.0 + a2) / start ** 3
    target_im = abs(z.imag)
    n_steps = 400
    for k in range(1, n_steps + 1):
        t = k / n_steps
        if target_im > 0:
            im = height * (target_im / height) ** t
        else:
            im = height * (1.0 - t) ** 3
        zz = complex(z.real, sign * im)
        for _ in range(8):
            d = dF(g, zz)
            if d == 0:
                break
            step = F(g, zz) / d
            g -= step
            if abs(step) <= 1e-15 * max(1.0, abs(g)):
                break
    # Snap to the nearest exact root of the final cubic.
    roots = aberth_roots([-z, 1 - a2 + z * z, -2 * z, 1.0])
    g = roots[numpy.argmin(numpy.abs(roots - g))]
    return complex(g)
