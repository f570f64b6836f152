"""
Spectra of random-matrix ensembles against their limiting laws.

Each ensemble is sampled at N = 200 with 50 independent trials; the
pooled, scaled spectrum is scored by its Kolmogorov-Smirnov distance to
the analytic distribution function.

Run:  python3 demos/02_random_matrices.py
"""

from raney import RaneyParams
from raney.simulate import (Antisymmetric, Bures, InverseProduct,
                            ProductWishart, ShiftedProduct, SymmetricLaw,
                            TwoSourceGUE, compare, spectrum)

N, TRIALS, SEED = 200, 50, 7

cases = [
    ('Wishart X*X / N', ProductWishart(1, N), 'raney:2,1'),
    ('product of two Ginibre', ProductWishart(2, N), 'raney:3,1'),
    ('i X^T J X, X real', Antisymmetric(N), SymmetricLaw(RaneyParams(3, 1))),
    ('Bures (1+U) X', Bures(N), 'raney:3/2,1/2'),
    ('Y Yt^-1', InverseProduct(1, 1, N), 'fsq:1,1'),
    ('GUE with sources +-1', TwoSourceGUE(N, 1.0),
     SymmetricLaw(RaneyParams(3, 2))),
    ('(X + sqrt(N)) Y', ShiftedProduct(N, 1), 'raney:5,2'),
]

print(f'{"ensemble":<24} {"law":<16} {"KS":>7}   moment errors')
for label, ens, law in cases:
    report = compare(spectrum(ens, TRIALS, SEED), law)
    moments = ', '.join(f'{k}:{e:.1e}' for k, e in report.moments) or '-'
    print(f'{label:<24} {report.law:<16} {report.ks:7.4f}   {moments}')

# A deliberately wrong law is far off.
wrong = compare(spectrum(ProductWishart(1, N), TRIALS, SEED), 'raney:3,1')
print(f'\nWishart sample against W_(3,1): KS {wrong.ks:.3f}')
