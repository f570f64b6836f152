"""Simultaneous polynomial root finding (Aberth-Ehrlich iteration)."""

import numpy

from .errors import NonConvergence

__all__ = ['aberth_roots', 'polyval_ascending']


def polyval_ascending(coeffs, z):
    """Evaluate ``sum_k coeffs[k] z**k`` and its derivative by Horner."""
    value = numpy.zeros_like(z, dtype=complex)
    deriv = numpy.zeros_like(z, dtype=complex)
    for c in reversed(coeffs):
        deriv = deriv * z + value
        value = value * z + c
    return value, deriv


def aberth_roots(coeffs, tol=1e-15, max_iter=500):
    """
    All complex roots of a polynomial with ascending coefficients.

    Parameters
    ----------
    coeffs : sequence of complex
        ``coeffs[k]`` multiplies ``z**k``.  Trailing (highest-degree) zeros
        are stripped.
    tol : float
        Relative size of the last Aberth correction at which to stop.
    max_iter : int

    Returns
    -------
    numpy.ndarray
        The ``n`` roots, unordered.
    """

    c = numpy.asarray(coeffs, dtype=complex)
    nonzero = numpy.flatnonzero(c)
    if nonzero.size == 0:
        raise ValueError('the zero polynomial has no well-defined roots')
    c = c[:nonzero[-1] + 1]
    n = c.size - 1
    if n == 0:
        return numpy.empty(0, dtype=complex)
    c = c / c[-1]
    if n == 1:
        return numpy.array([-c[0]])

    # Initial guesses on a circle sized by the geometric mean root modulus,
    # rotated off the real axis to break conjugate symmetry.
    radius = abs(c[0]) ** (1.0 / n) if c[0] != 0 else 1.0
    bound = 1.0 + numpy.max(numpy.abs(c[:-1]))
    radius = min(max(radius, 1e-3), bound)
    angles = 2.0 * numpy.pi * numpy.arange(n) / n + 0.4
    z = radius * numpy.exp(1j * angles)

    active = numpy.ones(n, dtype=bool)
    for _ in range(max_iter):
        value, deriv = polyval_ascending(c, z)
        with numpy.errstate(divide='ignore', invalid='ignore'):
            ratio = value / deriv
            diff = z[:, None] - z[None, :]
            numpy.fill_diagonal(diff, 1.0)
            repulsion = numpy.sum(1.0 / diff, axis=1) - 1.0
            step = ratio / (1.0 - ratio * repulsion)
        step = numpy.where(value == 0, 0.0, step)
        if not numpy.all(numpy.isfinite(step)):
            # A coincident pair or vanishing derivative: nudge and retry.
            bad = ~numpy.isfinite(step)
            step[bad] = -1e-3 * (1 + abs(z[bad])) * numpy.exp(1j * angles[bad])
        step = numpy.where(active, step, 0.0)
        z = z - step
        # Freeze roots whose correction has reached rounding level.
        active &= numpy.abs(step) > tol * numpy.maximum(1.0, numpy.abs(z))
        if not active.any():
            break
    else:
        # Accept roots stuck at the rounding floor of the residual.
        value, _ = polyval_ascending(c, z)
        floor = polyval_ascending(numpy.abs(c), numpy.abs(z))[0].real
        if numpy.any(numpy.abs(value) > 1e-12 * floor):
            raise NonConvergence(f'Aberth iteration did not converge in '
                                 f'{max_iter} steps')

    # One Newton polish per root.
    value, deriv = polyval_ascending(c, z)
    safe = (deriv != 0) & numpy.isfinite(deriv)
    z[safe] = z[safe] - value[safe] / deriv[safe]
    return z
