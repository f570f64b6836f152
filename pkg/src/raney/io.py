"""
File formats: density curves, spectrum samples, reports, polynomials and
run manifests.

Floats are written with ``repr`` (shortest round-tripping form), so every
CSV and JSON file reads back bit-identically.  Infinite support endpoints
are stored as JSON ``null``.
"""

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

import numpy

from .charpoly import RationalPolynomial
from .density import DensityCurve
from .simulate import ComparisonReport, SpectrumSample

__all__ = ['RunManifest', 'manifest_path', 'write_manifest', 'read_manifest',
           'tool_version', 'write_curve_csv', 'read_curve_csv',
           'write_curve_json', 'read_curve_json', 'write_sample_csv',
           'read_sample_csv', 'write_sample_json', 'read_sample_json',
           'write_report_json', 'write_polynomial_json',
           'read_polynomial_json']


def tool_version():
    try:
        return metadata.version('artifact')
    except metadata.PackageNotFoundError:
        from . import __version__
        return __version__


def _finite_or_none(v):
    return float(v) if math.isfinite(v) else None


def _none_to_inf(v):
    return math.inf if v is None else float(v)


def _open_for_write(path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open('w', newline='', encoding='utf-8')
    except OSError as exc:
        raise OSError(f'cannot write {path}: {exc.strerror}') from exc


def _open_for_read(path):
    path = Path(path)
    try:
        return path.open('r', newline='', encoding='utf-8')
    except OSError as exc:
        raise OSError(f'cannot read {path}: {exc.strerror}') from exc


# =========
# Manifests
# =========

@dataclass
class RunManifest:
    """Provenance record written next to every output artifact."""

    command: str
    parameters: dict
    seed: int = 0
    tool_version: str = field(default_factory=tool_version)
    timestamp: str = field(default_factory=lambda: datetime.now(
        timezone.utc).isoformat(timespec='seconds'))


def manifest_path(out_path):
    return Path(str(out_path) + '.manifest.json')


def write_manifest(out_path, manifest):
    with _open_for_write(manifest_path(out_path)) as fh:
        json.dump(asdict(manifest), fh, indent=2, sort_keys=True)
        fh.write('\n')
    return manifest_path(out_path)


def read_manifest(path):
    path = Path(path)
    if not path.name.endswith('.manifest.json'):
        path = manifest_path(path)
    with _open_for_read(path) as fh:
        return RunManifest(**json.load(fh))


# ======
# Curves
# ======

def write_curve_csv(curve, path):
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator='\n')
        w.writerow(['x', 'f'])
        for x, f in zip(curve.x, curve.f):
            w.writerow([repr(float(x)), repr(float(f))])


def read_curve_csv(path, support=None, family=None):
    """
    Read an ``x,f`` CSV.

    ``support`` and ``family`` default to the values recorded in the
    side-file manifest when one exists.
    """

    with _open_for_read(path) as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ['x', 'f']:
        raise ValueError(f'{path}: expected header x,f')
    data = numpy.array([[float(a), float(b)] for a, b in rows[1:]])
    data = data.reshape(-1, 2)
    meta = {}
    if manifest_path(path).exists():
        meta = read_manifest(path).parameters
    if support is None:
        support = meta.get('support')
        support = ((data[0, 0], data[-1, 0]) if support is None
                   else tuple(_none_to_inf(v) for v in support))
    if family is None:
        family = meta.get('family', '')
    return DensityCurve(data[:, 0], data[:, 1], support, family)


def curve_to_json(curve):
    return {'family': curve.family,
            'params': curve.meta.get('params', {}),
            'support': [_finite_or_none(v) for v in curve.support],
            'points': [[float(x), float(f)] for x, f in zip(curve.x, curve.f)]}


def write_curve_json(curve, path):
    with _open_for_write(path) as fh:
        json.dump(curve_to_json(curve), fh)
        fh.write('\n')


def read_curve_json(path):
    with _open_for_read(path) as fh:
        d = json.load(fh)
    pts = numpy.asarray(d['points'], dtype=float).reshape(-1, 2)
    return DensityCurve(pts[:, 0], pts[:, 1],
                        tuple(_none_to_inf(v) for v in d['support']),
                        d.get('family', ''), {'params': d.get('params', {})})


# =======
# Samples
# =======

def write_sample_csv(sample, path):
    with _open_for_write(path) as fh:
        fh.write('value\n')
        for v in sample.values:
            fh.write(repr(float(v)) + '\n')


def read_sample_csv(path, spec=None, seed=0, trials=0):
    with _open_for_read(path) as fh:
        lines = fh.read().split()
    if not lines or lines[0] != 'value':
        raise ValueError(f'{path}: expected header value')
    return SpectrumSample(numpy.array([float(v) for v in lines[1:]]),
                          spec or {}, seed, trials)


def write_sample_json(sample, path):
    with _open_for_write(path) as fh:
        json.dump({'spec': sample.spec, 'seed': sample.seed,
                   'trials': sample.trials, 'scaling': sample.scaling,
                   'values': [float(v) for v in sample.values]}, fh)
        fh.write('\n')


def read_sample_json(path):
    with _open_for_read(path) as fh:
        d = json.load(fh)
    return SpectrumSample(numpy.asarray(d['values'], dtype=float), d['spec'],
                          d['seed'], d['trials'], d.get('scaling', {}))


def report_to_json(report):
    return {'ks': report.ks,
            'moments': [{'k': k, 'rel_err': e} for k, e in report.moments],
            'n': report.n, 'law': report.law, 'notes': list(report.notes)}


def write_report_json(report, path):
    if not isinstance(report, ComparisonReport):
        raise TypeError('expected a ComparisonReport')
    with _open_for_write(path) as fh:
        json.dump(report_to_json(report), fh, indent=2)
        fh.write('\n')


# ===========
# Polynomials
# ===========

def write_polynomial_json(poly, path, kind='', N=None):
    with _open_for_write(path) as fh:
        json.dump({'kind': kind, 'N': N, 'coeffs': poly.to_json()}, fh)
        fh.write('\n')


def read_polynomial_json(path):
    with _open_for_read(path) as fh:
        d = json.load(fh)
    return RationalPolynomial.from_json(d['coeffs']), d.get('kind'), d.get('N')
