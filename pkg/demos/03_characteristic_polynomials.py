"""
Averaged characteristic polynomials: exact coefficients, their
differential equations, and the convergence of the scaled log-derivative
to the limiting resolvent.

Run:  python3 demos/03_characteristic_polynomials.py
"""

from raney.charpoly import (Antisym, Bures, Hermite, InverseProduct,
                            Product, TwoSource, charpoly_family,
                            leading_order_ratio, resolvent_ladder,
                            verify_ode)

for kind in [Bures(1), Bures(3), Antisym(2), Product(2, 2),
             InverseProduct(1, 1, 2), TwoSource(2)]:
    print(f'{str(kind):<50} {charpoly_family(kind).format()}')

# The ODE is checked with rational arithmetic, so the answer is exact.
families = {'hermite': Hermite, 'antisym': Antisym, 'bures': Bures,
            'product s=2': lambda n: Product(2, n),
            'inverse (1,1)': lambda n: InverseProduct(1, 1, n),
            'two-source': TwoSource}
print()
for name, make in families.items():
    ok = all(verify_ode(make(n)) for n in range(1, 21))
    print(f'{name:<14} ODE holds for N = 1..20: {ok}')

# Doubling N roughly halves the distance to the limit.
print('\nBures ensemble at z = 1+1j')
for n, g, err in resolvent_ladder(Bures(10), 1 + 1j, (10, 20, 40, 80)):
    print(f'  N = {n:>3}   G_N = {g:.8f}   error {err:.2e}')

# p''/p is close to (p'/p)**2 at large N.
print(f'\n|p"/p - (p\'/p)^2| / |p\'/p|^2 at N = 40: '
      f'{leading_order_ratio(Bures(40), 1 + 1j):.3f}')
