"""
Raney densities from the angle parameterization, checked against their
moments and the explicit radical formulas.

Run:  python3 demos/01_densities_and_moments.py
"""

import numpy

from raney import RaneyParams, density_curve, raney_numbers
from raney.density import (closed_form_density, edge_asymptote,
                           fsq_density, moment_quadrature)

# The Raney numbers are exact rationals; for integer (p, r) they are
# integers and for r = 1 they are the Fuss-Catalan numbers.
for p, r in [(2, 1), (3, 1), (3, 2), ('3/2', '1/2')]:
    P = RaneyParams(p, r)
    print(f'R_{P}(0..6) =', [str(v) for v in raney_numbers(P, 6)])

# Moments of the sampled density reproduce them.
P = RaneyParams(3, 2)
print('\nk   R_(3,2)(k)   quadrature')
for k in range(6):
    print(f'{k}   {str(raney_numbers(P, k)[-1]):>10}   '
          f'{moment_quadrature(P, k):.12f}')

# W_{3,2} has a closed form in radicals; the two agree to rounding.
curve = density_curve('raney:3,2', n_phi=1000)
gap = numpy.max(numpy.abs(curve.f - closed_form_density('W32', curve.x)))
print(f'\nmax |parameterized - radical| for W_(3,2) on 1000 points: {gap:.1e}')

# Edges: x**(-(p-r)/p) at the origin, a square root at K_p.
for edge in ('hard_zero', 'soft_upper'):
    a = edge_asymptote('raney:3,2', edge)
    print(f'{edge:>10}: coefficient {a.coefficient:.6f}, exponent '
          f'{a.exponent:g}')

# Unbounded case: f_{1,1} is mapped to itself by x -> 1/x.
x = numpy.array([0.1, 0.5, 2.0, 10.0])
print('\nf_(1,1)(x)          ', fsq_density(1, 1, x))
print('x^-2 f_(1,1)(1/x)   ', x ** -2 * fsq_density(1, 1, 1 / x))
