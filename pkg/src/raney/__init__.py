"""
Raney and Fuss-Catalan spectral densities.

Submodules
----------
combinat     exact Raney and Fuss-Catalan numbers
resolvent    Stieltjes transforms from their algebraic equations
density      angle-parameterized densities, closed forms, edge asymptotes
simulate     random-matrix ensembles and comparisons with analytic laws
charpoly     averaged characteristic polynomials and their ODEs
equilibrium  logarithmic energy functionals and stationarity
io           file formats and run manifests
cli          the ``raney`` command
"""

__version__ = '0.1.0'

from .combinat import (RaneyParams, fuss_catalan, fuss_catalan_recurrence,
                       raney_number, raney_numbers)
from .density import (DensityCurve, ProductInverseFamily, RaneyFamily,
                      density, density_curve, parse_family)
from .errors import *  # noqa: F401,F403
from .resolvent import (MixedForm, ProductChainForm, RaneyForm, stieltjes,
                        stieltjes_invert)
