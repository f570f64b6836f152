"""
Command-line interface: ``raney <command> ...``.

Exit codes: 0 success, 2 usage error, 3 assertion failure, 4 numerical
non-convergence, 1 any other error (I/O problems included).  The default
simulation seed is read from the ``RANEY_SEED`` environment variable; an
explicit ``--seed`` always wins.
"""

import argparse
import json
import os
import sys

import numpy

from . import charpoly as cp
from . import equilibrium as eq
from . import io
from .combinat import RaneyParams, raney_number
from .density import density_curve, moment_quadrature, parse_family
from .errors import (BranchAmbiguity, DomainError, ExtrapolationUnstable,
                     InvalidBottomParameter, InvalidFamily, NonConvergence,
                     SingularMatrix, UnnormalizedCurve)
from .simulate import (ENSEMBLES, Antisymmetric, Bures, InverseProduct,
                       ProductWishart, ShiftedProduct, SymmetricLaw,
                       TwoSourceGUE, compare, spectrum)

__all__ = ['main', 'build_parser', 'SEED_ENV']

SEED_ENV = 'RANEY_SEED'
EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_ASSERT, EXIT_NUMERIC = 0, 1, 2, 3, 4

FAMILY_HELP = """\
density families (--family):
  raney:p,r      Raney density W_{p,r} on [0, K_p], p > 1, 0 < r <= p
  fsq:s,q        squared singular values of s Gaussian and q inverse
                 Gaussian factors; unbounded support when q > 0
  fsqr:s,q,r     the r-deformation of fsq, 0 < r <= 1 + s
  sym:p,r        (simulate --compare only) even law of the square root,
                 standardized so that y**2 r ~ W_{p,r}

ensembles (simulate --kind):
  product          X_s ... X_1, rectangular offsets --nu; divisor N^s
  inverse-product  Y_s Yt_q^-1, square factors; scaled by N^(q-s)
  antisym          i X^T J X, X real 2N x 2N; divisor 2N
  two-source       Wigner 2N x 2N plus sources +-a; divided by sqrt(1+a^2)
  bures            (1+U) X Y_1 ... Y_s, U Haar; divisor 4 N^(s+1)
  shifted          (X + c) Y_1 ... Y_s, c defaults to sqrt(N); divisor N^(s+1)

characteristic polynomials (charpoly --kind):
  hermite, antisym, bures, product, inverse-product, two-source

rationals may be written num/den, e.g. raney:3/2,1/2.
"""


class UsageError(Exception):
    pass


# =======
# Parsing
# =======

def _int_list(text):
    if text in (None, ''):
        return ()
    try:
        return tuple(int(v) for v in text.split(','))
    except ValueError:
        raise UsageError(f'expected comma-separated integers, got {text!r}')


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return _seed(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f'{SEED_ENV}: {exc}')


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid seed {text!r}')
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError('seed must fit in 64 unsigned bits')
    return value


def _family_text(args):
    """Resolve ``--family`` plus optional ``--p/--r/--s/--q`` flags."""
    fam = args.family
    if fam is None and args.p is not None:
        fam = 'raney'
    if fam is None:
        raise UsageError('give --family (e.g. raney:2,1) or --p/--r')
    if ':' in fam:
        return fam
    need = {'raney': ('p', 'r'), 'fsq': ('s', 'q'),
            'fsqr': ('s', 'q', 'r')}.get(fam)
    if need is None:
        raise UsageError(f'unknown family {fam!r}')
    vals = [getattr(args, k) for k in need]
    if fam == 'raney' and vals[1] is None:
        vals[1] = '1'
    if any(v is None for v in vals):
        raise UsageError(f'family {fam} needs --{" --".join(need)}')
    return f'{fam}:{",".join(str(v) for v in vals)}'


def _law(text):
    if text.startswith('sym:'):
        p, r = text[4:].split(',')
        return SymmetricLaw(RaneyParams(p, r))
    return parse_family(text)


def _grid(text, fam):
    kind, _, rest = text.partition(':')
    parts = rest.split(':')
    try:
        if kind == 'phi' and len(parts) == 1:
            return density_curve(fam, n_phi=int(parts[0]))
        if kind in ('xlin', 'xlog') and len(parts) == 3:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            xs = (numpy.linspace(a, b, n) if kind == 'xlin'
                  else numpy.geomspace(a, b, n))
            return density_curve(fam, x=xs)
    except ValueError as exc:
        raise UsageError(f'bad grid {text!r}: {exc}')
    raise UsageError(f'bad grid {text!r}; use phi:n, xlin:a:b:n or '
                     f'xlog:a:b:n')


def _emit(text, out=None):
    if out is None:
        sys.stdout.write(text)
    else:
        with io._open_for_write(out) as fh:
            fh.write(text)


def _manifest(args, command, parameters, seed=0):
    params = dict(parameters)
    params['argv'] = list(args.argv)
    return io.RunManifest(command, params, int(seed))


# ========
# Commands
# ========

def cmd_moments(args):
    if args.family is not None or args.p is not None:
        fam = parse_family(_family_text(args))
    else:
        raise UsageError('give --p/--r or --family raney:p,r')
    if not hasattr(fam, 'params'):
        raise UsageError('moments are tabulated for raney families only')
    params = fam.params
    rows = []
    for k in range(args.kmax + 1):
        exact = raney_number(params, k)
        quad_val = moment_quadrature(params, k)
        rows.append((k, exact, quad_val, abs(quad_val - float(exact))))
    if args.format == 'json':
        text = json.dumps([{'k': k, 'exact': str(e), 'quadrature': q,
                            'abs_diff': d} for k, e, q, d in rows],
                          indent=2) + '\n'
    elif args.format == 'csv':
        text = 'k,exact,quadrature,abs_diff\n' + ''.join(
            f'{k},{e},{q!r},{d!r}\n' for k, e, q, d in rows)
    else:
        text = f'{"k":>3} {"R_(p,r)(k)":>24} {"quadrature":>24} ' \
               f'{"abs diff":>10}\n'
        text += ''.join(f'{k:>3} {str(e):>24} {q:>24.15g} {d:>10.2e}\n'
                        for k, e, q, d in rows)
    _emit(text, args.out)
    if args.out:
        io.write_manifest(args.out, _manifest(
            args, 'moments', {'family': str(fam), 'kmax': args.kmax}))
    return EXIT_OK


def cmd_density(args):
    fam = parse_family(_family_text(args))
    curve = _grid(args.grid, fam)
    fmt = args.format or ('json' if str(args.out or '').endswith('.json')
                          else 'csv')
    if args.out is None:
        if fmt == 'json':
            sys.stdout.write(json.dumps(io.curve_to_json(curve)) + '\n')
        else:
            sys.stdout.write('x,f\n' + ''.join(
                f'{x!r},{f!r}\n' for x, f in zip(curve.x.tolist(),
                                                 curve.f.tolist())))
        return EXIT_OK
    if fmt == 'json':
        io.write_curve_json(curve, args.out)
    else:
        io.write_curve_csv(curve, args.out)
    support = [io._finite_or_none(v) for v in curve.support]
    io.write_manifest(args.out, _manifest(
        args, 'density', {'family': str(fam), 'grid': args.grid,
                          'format': fmt, 'support': support}))
    print(f'wrote {len(curve)} rows to {args.out}')
    return EXIT_OK


def _ensemble(args):
    kind, N = args.kind, args.n
    if kind == 'product':
        return ProductWishart(args.s or 1, N, _int_list(args.nu))
    if kind == 'inverse-product':
        return InverseProduct(1 if args.s is None else args.s,
                              1 if args.q is None else args.q, N)
    if kind == 'antisym':
        return Antisymmetric(N, args.divisor)
    if kind == 'two-source':
        return TwoSourceGUE(N, 1.0 if args.a is None else args.a)
    if kind == 'bures':
        return Bures(N, args.s or 0)
    if kind == 'shifted':
        return ShiftedProduct(N, args.s or 0, args.c)
    raise UsageError(f'unknown ensemble {kind!r}')


def cmd_simulate(args):
    ens = _ensemble(args)
    seed = args.seed if args.seed is not None else _default_seed()
    sample = spectrum(ens, args.trials, seed)
    report = None
    if args.compare:
        report = compare(sample, _law(args.compare), k_max=args.kmax)
    if args.out:
        fmt = args.format or ('json' if args.out.endswith('.json') else 'csv')
        (io.write_sample_json if fmt == 'json'
         else io.write_sample_csv)(sample, args.out)
        if report is not None:
            io.write_report_json(report, args.out + '.report.json')
        io.write_manifest(args.out, _manifest(
            args, 'simulate', {'ensemble': sample.spec,
                               'trials': args.trials,
                               'compare': args.compare}, seed))
    print(f'{len(sample)} values from {args.trials} trials '
          f'(seed {seed}) of {sample.spec}')
    if report is not None:
        print(f'KS distance vs {report.law}: {report.ks:.5f}')
        for k, err in report.moments:
            print(f'  moment {k}: relative error {err:.3e}')
        for note in report.notes:
            print(f'  note: {note}')
        if args.assert_ks is not None:
            ok = report.ks <= args.assert_ks
            print(f'KS <= {args.assert_ks}: {"PASS" if ok else "FAIL"}')
            if not ok:
                return EXIT_ASSERT
    elif args.assert_ks is not None:
        raise UsageError('--assert-ks needs --compare')
    return EXIT_OK


def _charpoly_kind(args, N=None):
    N = args.n if N is None else N
    kind = args.kind
    if kind == 'hermite':
        return cp.Hermite(N)
    if kind == 'antisym':
        return cp.Antisym(N)
    if kind == 'bures':
        return cp.Bures(N)
    if kind == 'product':
        return cp.Product(args.s or 1, N, _int_list(args.nu))
    if kind == 'inverse-product':
        return cp.InverseProduct(args.s or 1, 1 if args.q is None else args.q,
                                 N, _int_list(args.nu), _int_list(args.mu))
    if kind == 'two-source':
        return cp.TwoSource(N, args.a if args.a is not None else 1)
    raise UsageError(f'unknown polynomial family {kind!r}')


def cmd_charpoly(args):
    kind = _charpoly_kind(args)
    if args.action == 'print':
        poly = cp.charpoly_family(kind)
        print(poly.format())
        if args.out:
            io.write_polynomial_json(poly, args.out, args.kind, args.n)
            io.write_manifest(args.out, _manifest(
                args, 'charpoly', {'kind': args.kind, 'N': args.n}))
        return EXIT_OK
    if args.action == 'verify-ode':
        if args.n > cp.ODE_BUDGET:
            print(f'refusing: N = {args.n} exceeds the exact-arithmetic '
                  f'budget of {cp.ODE_BUDGET}', file=sys.stderr)
            return EXIT_USAGE
        ok = cp.verify_ode(kind)
        print('PASS' if ok else 'FAIL')
        return EXIT_OK if ok else EXIT_ASSERT
    # resolvent-ladder
    if args.z is None:
        raise UsageError('resolvent-ladder needs --z')
    z = complex(args.z.replace(' ', ''))
    sizes = _int_list(args.sizes) or (max(1, args.n // 4),
                                      max(1, args.n // 2), args.n)
    rows = cp.resolvent_ladder(kind, z, sizes)
    target = cp.limit_resolvent(kind, z)
    print(f'G({z}) = {target:.12g}')
    print(f'{"N":>5} {"G_N":>36} {"|G_N - G|":>12}')
    for n, g, err in rows:
        print(f'{n:>5} {str(g):>36} {err:>12.4e}')
    return EXIT_OK


def cmd_equilibrium(args):
    spec = eq.EnergyFunctionalSpec(args.theta, args.potential,
                                   args.coefficient, kernel=args.kernel)
    measure = eq.FamilyMeasure(parse_family(args.family))
    report = eq.stationarity(spec, measure, args.n_points,
                             threshold=args.threshold)
    print(f'theta = {args.theta:g}, family {args.family}')
    print(report)
    return EXIT_OK if report.passed else EXIT_ASSERT


def cmd_replay(args):
    manifest = io.read_manifest(args.manifest)
    argv = manifest.parameters.get('argv')
    if not argv:
        raise UsageError(f'{args.manifest} records no command line')
    return main(argv)


# ======
# Parser
# ======

def _add_family_flags(p):
    p.add_argument('--family', help='raney:p,r | fsq:s,q | fsqr:s,q,r, or a '
                   'bare family name combined with --p/--r/--s/--q')
    p.add_argument('--p')
    p.add_argument('--r')
    p.add_argument('--s')
    p.add_argument('--q')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='raney', description='Raney and product/inverse-product '
        'spectral densities, simulations and checks.',
        epilog=FAMILY_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('moments', help='exact Raney numbers vs quadrature',
                       epilog=FAMILY_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_family_flags(p)
    p.add_argument('--kmax', type=int, default=10)
    p.add_argument('--format', choices=['table', 'csv', 'json'],
                   default='table')
    p.add_argument('--out')
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser('density', help='sample a density on a grid',
                       epilog=FAMILY_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_family_flags(p)
    p.add_argument('--grid', default='phi:200',
                   help='phi:n | xlin:a:b:n | xlog:a:b:n')
    p.add_argument('--format', choices=['csv', 'json'])
    p.add_argument('--out')
    p.set_defaults(func=cmd_density)

    p = sub.add_parser('simulate', help='Monte Carlo spectra and KS checks',
                       epilog=FAMILY_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument('--kind', required=True, choices=sorted(ENSEMBLES))
    p.add_argument('--n', type=int, default=200)
    p.add_argument('--s', type=int)
    p.add_argument('--q', type=int)
    p.add_argument('--nu', help='comma-separated rectangular offsets')
    p.add_argument('--a', type=float, help='source strength (two-source)')
    p.add_argument('--c', type=float, help='shift (shifted)')
    p.add_argument('--divisor', type=float, help='antisym divisor')
    p.add_argument('--trials', type=int, default=50)
    p.add_argument('--seed', type=_seed,
                   help=f'defaults to ${SEED_ENV}, else 0')
    p.add_argument('--compare', help='law to compare against, e.g. raney:3,1')
    p.add_argument('--kmax', type=int, default=3)
    p.add_argument('--assert-ks', type=float)
    p.add_argument('--format', choices=['csv', 'json'])
    p.add_argument('--out')
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('charpoly', help='averaged characteristic polynomials',
                       epilog=FAMILY_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument('--kind', required=True, choices=sorted(cp.KINDS))
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--s', type=int)
    p.add_argument('--q', type=int)
    p.add_argument('--nu')
    p.add_argument('--mu')
    p.add_argument('--a', help='source strength, rational (two-source)')
    p.add_argument('--action', default='print',
                   choices=['print', 'verify-ode', 'resolvent-ladder'])
    p.add_argument('--z', help='complex evaluation point, e.g. 5 or 1+2j')
    p.add_argument('--sizes', help='ladder sizes, default N/4,N/2,N')
    p.add_argument('--out', help='JSON file for the printed polynomial')
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser('equilibrium', help='effective-field stationarity',
                       epilog=FAMILY_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument('--theta', type=float, required=True)
    p.add_argument('--family', required=True)
    p.add_argument('--n-points', type=int, default=10)
    p.add_argument('--potential', default='power',
                   choices=['power', 'linear', 'quadratic'])
    p.add_argument('--coefficient', type=float,
                   help='potential coefficient (default theta for power)')
    p.add_argument('--kernel', default='muttalib',
                   choices=['muttalib', 'bures'])
    p.add_argument('--threshold', type=float, default=1e-2)
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser('replay', help='re-run the command in a manifest')
    p.add_argument('manifest')
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    args.argv = argv
    try:
        return args.func(args)
    except (UsageError, DomainError, InvalidFamily, InvalidBottomParameter,
            UnnormalizedCurve) as exc:
        print(f'raney {args.command}: error: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergence, ExtrapolationUnstable, BranchAmbiguity,
            SingularMatrix) as exc:
        print(f'raney {args.command}: numerical failure: {exc}',
              file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f'raney {args.command}: {exc}', file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f'raney {args.command}: error: {exc}', file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
