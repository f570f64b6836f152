"""
Fuss-Catalan laws as stationary points of logarithmic energy functionals.

For the kernel log(|x^(1/theta) - y^(1/theta)| |x - y|) and potential
theta * x^(1/theta), the effective field of W_{theta+1,1} is constant on
its support.  Small mass-preserving bumps raise the energy.

Run:  python3 demos/04_equilibrium.py
"""

from raney.equilibrium import (EnergyFunctionalSpec, FamilyMeasure, energy,
                               minimality_probe, stationarity)

for theta in (1, 2, 3):
    rep = stationarity(EnergyFunctionalSpec(theta), f'raney:{theta + 1},1')
    print(f'theta = {theta}: field {rep.field.mean():.10f}, spread '
          f'{rep.spread:.1e}')

# Wrong density: W_{3,1} squeezed onto (0, 4) is far from stationary
# for theta = 1.
rep = stationarity(EnergyFunctionalSpec(1), FamilyMeasure('raney:3,1',
                                                          4 / 6.75))
print(f'\nnegative control spread {rep.spread:.3f}')

spec = EnergyFunctionalSpec(1)
base, probes = minimality_probe(spec, 'raney:2,1', n_probes=5, seed=7)
print(f'\nMarchenko-Pastur energy {base:.10f}')
for e in probes:
    print(f'  perturbed            {e:.10f}  (+{e - base:.2e})')

print(f'\nfull stationarity table for theta = 2:\n'
      f'{stationarity(EnergyFunctionalSpec(2), "raney:3,1", n_points=6)}')
