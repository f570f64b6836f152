"""
Random-matrix ensembles whose limiting spectra are Raney-type laws.

Each ensemble is a small frozen dataclass with a ``draw(rng)`` method that
returns the scaled spectrum of one matrix.  :func:`spectrum` pools
``trials`` independent draws, trial ``t`` using the generator
``numpy.random.default_rng([seed, t])``, so the pooled sample does not
depend on the order in which trials are run.

Scalings (``N`` is the matrix size unless stated otherwise):

=================  =====================================================
ProductWishart     squared singular values of ``X_s ... X_1``, divided by
                   ``N_1 ... N_s`` (``N**s`` for square factors)
InverseProduct     squared singular values of ``Y_s Yt_q**-1`` times
                   ``N**(q-s)``
Antisymmetric      eigenvalues of ``i X^T J X`` (``X`` real ``2N x 2N``)
                   divided by ``2N``
TwoSourceGUE       eigenvalues of ``W + diag(a, .., -a, ..)`` (size ``2N``,
                   ``E|W_ij|**2 = 1/(2N)``) divided by ``sqrt(1 + a**2)``
Bures              squared singular values of ``(1+U) X Y_1 ... Y_s``
                   divided by ``4 N**(s+1)``
ShiftedProduct     squared singular values of ``(X + c) Y_1 ... Y_s``
                   divided by ``N**(s+1)``
=================  =====================================================
"""

import math
from dataclasses import asdict, dataclass, field

import numpy
import scipy.linalg
from scipy.stats import kstest

from .combinat import RaneyParams, raney_number
from .density import ProductInverseFamily, RaneyFamily, _as_family
from .errors import DivergentMoment, DomainError, SingularMatrix

__all__ = ['sample_gaussian_matrix', 'sample_haar_unitary', 'ProductWishart',
           'InverseProduct', 'Antisymmetric', 'TwoSourceGUE', 'Bures',
           'ShiftedProduct', 'SymmetricLaw', 'SpectrumSample',
           'ComparisonReport', 'spectrum', 'compare', 'esym_average_mc',
           'esym_closed_form', 'calibrate_antisymmetric',
           'hard_edge_exponent', 'ENSEMBLES']

COND_LIMIT = 1e13
MAX_REDRAWS = 10


# ========
# Samplers
# ========

def sample_gaussian_matrix(rows, cols, field='complex', rng=None):
    """
    Standard Gaussian matrix.

    Real entries are ``N(0, 1)``; complex entries have independent real
    and imaginary parts of variance 1/2, so ``E|x|**2 = 1``.
    """

    rng = numpy.random.default_rng(rng)
    if rows < 1 or cols < 1:
        raise DomainError('matrix dimensions must be positive')
    if field == 'real':
        return rng.standard_normal((rows, cols))
    if field == 'complex':
        z = rng.standard_normal((rows, cols, 2))
        return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)
    raise DomainError(f"field must be 'real' or 'complex', got {field!r}")


def sample_haar_unitary(N, rng=None, size=None):
    """
    Haar-distributed unitary matrix (or a stack of ``size`` of them).

    QR of a complex Ginibre matrix, with the phases of ``diag(R)`` moved
    into ``Q`` so that the factorization is unique.
    """

    rng = numpy.random.default_rng(rng)
    shape = (N, N) if size is None else (int(size), N, N)
    z = rng.standard_normal(shape + (2,))
    z = (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)
    Q, R = numpy.linalg.qr(z)
    d = numpy.diagonal(R, axis1=-2, axis2=-1)
    phase = d / numpy.abs(d)
    return Q * phase[..., None, :]


def _product(factors):
    out = factors[0]
    for f in factors[1:]:
        out = f @ out
    return out


def _squared_singular_values(M):
    return numpy.linalg.svd(M, compute_uv=False) ** 2


def _right_solve(M, A):
    """``M A**-1`` through an LU factorization of ``A``."""
    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    # M A^-1 = (A^-H M^H)^H; trans=2 solves with A^H.
    return scipy.linalg.lu_solve((lu, piv), M.conj().T, trans=2,
                                 check_finite=False).conj().T


# =========
# Ensembles
# =========

@dataclass(frozen=True)
class ProductWishart:
    """Product ``X_s ... X_1`` with ``X_j`` of size ``N_j x N_{j-1}``,
    ``N_0 = N`` and ``N_j = N + nu_j``."""

    s: int
    N: int
    nu: tuple = ()

    def __post_init__(self):
        nu = tuple(int(v) for v in self.nu) or (0,) * int(self.s)
        if self.s < 1 or self.N < 1 or len(nu) != self.s or min(nu) < 0:
            raise DomainError('need s, N >= 1 and s non-negative nu values')
        object.__setattr__(self, 'nu', nu)

    @property
    def dims(self):
        return (self.N,) + tuple(self.N + v for v in self.nu)

    @property
    def divisor(self):
        return float(numpy.prod([float(d) for d in self.dims[1:]]))

    def draw(self, rng):
        d = self.dims
        factors = [sample_gaussian_matrix(d[j + 1], d[j], rng=rng)
                   for j in range(self.s)]
        return _squared_singular_values(_product(factors)) / self.divisor


@dataclass(frozen=True)
class InverseProduct:
    """``Y_s Yt_q**-1`` with square ``N x N`` complex Gaussian factors."""

    s: int
    q: int
    N: int

    def __post_init__(self):
        if self.s < 0 or self.q < 0 or (self.s, self.q) == (0, 0):
            raise DomainError('need s, q >= 0, not both zero')
        if self.N < 1:
            raise DomainError('N must be positive')

    @property
    def divisor(self):
        return float(self.N) ** (self.s - self.q)

    def draw(self, rng):
        N = self.N
        M = numpy.eye(N, dtype=complex)
        if self.s:
            M = _product([sample_gaussian_matrix(N, N, rng=rng)
                          for _ in range(self.s)])
        # Yt_q**-1 = Xt_1**-1 ... Xt_q**-1, applied one factor at a time.
        for _ in range(self.q):
            for _ in range(MAX_REDRAWS):
                A = sample_gaussian_matrix(N, N, rng=rng)
                if numpy.linalg.cond(A) < COND_LIMIT:
                    break
            else:
                raise SingularMatrix('inverse factor numerically singular '
                                     f'after {MAX_REDRAWS} redraws')
            M = _right_solve(M, A)
        return _squared_singular_values(M) / self.divisor


@dataclass(frozen=True)
class Antisymmetric:
    """Eigenvalues of ``i X^T J X`` for real ``2N x 2N`` Gaussian ``X``.

    ``divisor`` defaults to ``2N``; the spectrum is exactly symmetric."""

    N: int
    divisor: float = None

    def __post_init__(self):
        if self.N < 1:
            raise DomainError('N must be positive')
        if self.divisor is None:
            object.__setattr__(self, 'divisor', 2.0 * self.N)

    def draw(self, rng):
        n = 2 * self.N
        X = sample_gaussian_matrix(n, n, field='real', rng=rng)
        J = numpy.kron(numpy.eye(self.N), [[0.0, -1.0], [1.0, 0.0]])
        A = X.T @ J @ X
        A = 0.5 * (A - A.T)
        w = numpy.linalg.eigvalsh(1j * A)
        # Eigenvalues come in pairs +-w_j; average each pair.
        pos = 0.5 * (w[self.N:] - w[:self.N][::-1])
        return numpy.concatenate([-pos[::-1], pos]) / self.divisor


@dataclass(frozen=True)
class TwoSourceGUE:
    """Hermitian ``2N x 2N`` Wigner matrix plus half ``+a``, half ``-a``
    on the diagonal, standardized to unit variance."""

    N: int
    a: float = 1.0

    def __post_init__(self):
        if self.N < 1 or self.a < 0:
            raise DomainError('need N >= 1 and a >= 0')

    @property
    def divisor(self):
        return math.sqrt(1.0 + self.a ** 2)

    def draw(self, rng):
        n = 2 * self.N
        A = sample_gaussian_matrix(n, n, rng=rng)
        W = (A + A.conj().T) / math.sqrt(2.0 * n)
        src = numpy.concatenate([numpy.full(self.N, self.a),
                                 numpy.full(self.N, -self.a)])
        return numpy.linalg.eigvalsh(W + numpy.diag(src)) / self.divisor


@dataclass(frozen=True)
class Bures:
    """``(1+U) X Y_1 ... Y_s``; ``s = 0`` is the Bures ensemble."""

    N: int
    s: int = 0

    def __post_init__(self):
        if self.N < 1 or self.s < 0:
            raise DomainError('need N >= 1 and s >= 0')

    @property
    def divisor(self):
        return 4.0 * float(self.N) ** (self.s + 1)

    def draw(self, rng):
        N = self.N
        U = sample_haar_unitary(N, rng)
        factors = [sample_gaussian_matrix(N, N, rng=rng)
                   for _ in range(self.s + 1)]
        M = (numpy.eye(N) + U) @ _product(factors)
        return _squared_singular_values(M) / self.divisor


@dataclass(frozen=True)
class ShiftedProduct:
    """``(X + c) Y_1 ... Y_s``; the default ``c = sqrt(N)`` is critical."""

    N: int
    s: int = 0
    c: float = None

    def __post_init__(self):
        if self.N < 1 or self.s < 0:
            raise DomainError('need N >= 1 and s >= 0')
        if self.c is None:
            object.__setattr__(self, 'c', math.sqrt(self.N))
        if self.c < 0:
            raise DomainError('shift must be non-negative')

    @property
    def divisor(self):
        return float(self.N) ** (self.s + 1)

    def draw(self, rng):
        N = self.N
        X = sample_gaussian_matrix(N, N, rng=rng) + self.c * numpy.eye(N)
        Ys = [sample_gaussian_matrix(N, N, rng=rng) for _ in range(self.s)]
        M = X @ _product(Ys[::-1]) if Ys else X
        return _squared_singular_values(M) / self.divisor


ENSEMBLES = {
    'product': ProductWishart,
    'inverse-product': InverseProduct,
    'antisym': Antisymmetric,
    'two-source': TwoSourceGUE,
    'bures': Bures,
    'shifted': ShiftedProduct,
}


# =========
# Sampling
# =========

@dataclass(frozen=True)
class SpectrumSample:
    """Pooled scaled spectra of ``trials`` independent draws."""

    values: numpy.ndarray
    spec: dict
    seed: int
    trials: int
    scaling: dict = field(default_factory=dict)

    def __post_init__(self):
        v = numpy.sort(numpy.asarray(self.values, dtype=float))
        if not numpy.all(numpy.isfinite(v)):
            raise ValueError('spectrum contains non-finite values')
        object.__setattr__(self, 'values', v)

    def __len__(self):
        return self.values.size


def _describe(ens):
    d = {'kind': next(k for k, cls in ENSEMBLES.items()
                      if isinstance(ens, cls))}
    for key, val in asdict(ens).items():
        d[key] = list(val) if isinstance(val, tuple) else val
    return d


def spectrum(ens, trials, seed=0):
    """
    Pool the scaled spectra of ``trials`` independent matrices.

    Parameters
    ----------
    ens : ensemble dataclass
    trials : int
    seed : int
        Non-negative; trial ``t`` draws from ``default_rng([seed, t])``.

    Returns
    -------
    SpectrumSample
    """

    trials, seed = int(trials), int(seed)
    if trials < 1:
        raise DomainError('trials must be positive')
    if seed < 0:
        raise DomainError('seed must be non-negative')
    draws = [ens.draw(numpy.random.default_rng([seed, t]))
             for t in range(trials)]
    divisor = getattr(ens, 'divisor', None)
    scaling = {'divisor': divisor, 'rule': type(ens).__doc__.split('\n')[0]}
    return SpectrumSample(numpy.concatenate(draws), _describe(ens), seed,
                          trials, scaling)


# ==========
# Comparison
# ==========

@dataclass(frozen=True)
class SymmetricLaw:
    """Even law ``c |y| W_{p,r}(c y**2)`` with ``c = r`` when standardized,
    ``c = 1`` otherwise."""

    params: RaneyParams
    standardized: bool = True

    @property
    def scale(self):
        return float(self.params.r) if self.standardized else 1.0

    def cdf(self, y):
        y = numpy.asarray(y, dtype=float)
        half = 0.5 * RaneyFamily(self.params).cdf(self.scale * y * y)
        return numpy.where(y >= 0, 0.5 + half, 0.5 - half)

    def moment(self, k):
        if k % 2:
            return 0.0
        return float(raney_number(self.params, k // 2)) / self.scale ** (k // 2)

    def __str__(self):
        tag = 'std' if self.standardized else 'raw'
        return f'sym-{tag}:{self.params.p},{self.params.r}'


@dataclass(frozen=True)
class ComparisonReport:
    """KS distance and moment errors of a sample against a law."""

    ks: float
    moments: list
    n: int
    law: str = ''
    notes: list = field(default_factory=list)


def _exact_moments(law, k_max):
    if isinstance(law, SymmetricLaw):
        return {k: law.moment(k) for k in range(2, k_max + 1, 2)}
    if isinstance(law, RaneyFamily):
        return {k: float(raney_number(law.params, k))
                for k in range(1, k_max + 1)}
    if isinstance(law, ProductInverseFamily):
        if law.q > 0:
            raise DivergentMoment(f'{law}: moments of order >= 1 diverge')
        return {k: law.moment(k) for k in range(1, k_max + 1)}
    raise TypeError(f'no moments for {law!r}')


def compare(sample, law, k_max=3):
    """
    Score a sample against an analytic law.

    Parameters
    ----------
    sample : SpectrumSample or array_like
    law : density family, family string or SymmetricLaw
    k_max : int
        Highest moment order to report where moments exist.

    Returns
    -------
    ComparisonReport
    """

    if not isinstance(law, SymmetricLaw):
        law = _as_family(law)
    values = numpy.sort(numpy.asarray(getattr(sample, 'values', sample),
                                      dtype=float))
    F = law.cdf(values)
    if numpy.any(numpy.diff(F) < -1e-12):
        raise ArithmeticError(f'CDF of {law} is not monotone on the sample')
    ks = float(kstest(values, law.cdf).statistic)
    notes, moments = [], []
    try:
        exact = _exact_moments(law, k_max)
    except DivergentMoment as exc:
        notes.append(str(exc))
        exact = {}
    for k, m in exact.items():
        emp = float(numpy.mean(values ** k))
        moments.append((k, abs(emp - m) / abs(m)))
    return ComparisonReport(ks, moments, values.size, str(law), notes)


# =============================
# Elementary symmetric averages
# =============================

def esym_closed_form(p, N):
    """``(2N-p+1)! / ((2N-2p+1)! p!)``, the Haar average of
    ``e_p((1+U)(1+U*))``."""
    return math.factorial(2 * N - p + 1) // (
        math.factorial(2 * N - 2 * p + 1) * math.factorial(p))


def _esym(eigs, p):
    # e_0..e_p of each row by the product recursion.
    e = numpy.zeros(eigs.shape[:-1] + (p + 1,))
    e[..., 0] = 1.0
    for j in range(eigs.shape[-1]):
        lam = eigs[..., j:j + 1]
        e[..., 1:] = e[..., 1:] + lam * e[..., :-1]
    return e[..., p]


def esym_average_mc(p, N, trials, seed=0, factor='full', batch=100_000):
    """
    Monte Carlo mean of ``e_p`` over Bures-type matrices.

    Parameters
    ----------
    p, N : int
        ``0 <= p <= N``.
    trials : int
    seed : int
    factor : {'full', 'unitary'}
        ``'full'`` averages ``e_p((1+U) X X* (1+U*))``; ``'unitary'``
        averages ``e_p((1+U)(1+U*))`` alone, which equals
        :func:`esym_closed_form`.  The two differ by ``N!/(N-p)!``.
    batch : int
        Matrices per vectorized batch; batch ``b`` draws from
        ``default_rng([seed, b])``.

    Returns
    -------
    tuple of float
        Mean and its standard error.
    """

    p, N, trials = int(p), int(N), int(trials)
    if not 0 <= p <= N:
        raise DomainError('need 0 <= p <= N')
    if factor not in ('full', 'unitary'):
        raise DomainError("factor must be 'full' or 'unitary'")
    if p == 0:
        return 1.0, 0.0
    total, total_sq, done, b = 0.0, 0.0, 0, 0
    eye = numpy.eye(N)
    while done < trials:
        m = min(batch, trials - done)
        rng = numpy.random.default_rng([seed, b])
        A = eye + sample_haar_unitary(N, rng, size=m)
        if factor == 'full':
            z = rng.standard_normal((m, N, N, 2))
            X = (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)
            A = A @ X
        H = A @ numpy.conj(numpy.swapaxes(A, -1, -2))
        e = _esym(numpy.linalg.eigvalsh(H), p)
        total += e.sum()
        total_sq += (e * e).sum()
        done += m
        b += 1
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0)
    return mean, math.sqrt(var / trials)


# ============
# Calibrations
# ============

def calibrate_antisymmetric(N, trials, seed=0):
    """
    Second moment of the antisymmetric spectrum under candidate divisors.

    The limit law (symmetric ``W_{3,1}``) has unit variance, so the right
    divisor gives a second moment near 1.  Returns a dict mapping each
    candidate name to ``(divisor, second_moment)`` and the key ``'best'``.
    """

    raw = spectrum(Antisymmetric(N, divisor=1.0), trials, seed).values
    m2 = float(numpy.mean(raw ** 2))
    candidates = {'sqrt(2)*N': math.sqrt(2) * N,
                  'sqrt(2N)': math.sqrt(2 * N),
                  '2N': 2.0 * N}
    out = {name: (d, m2 / d ** 2) for name, d in candidates.items()}
    out['best'] = min(candidates, key=lambda k: abs(out[k][1] - 1.0))
    return out


def hard_edge_exponent(values, lo_quantile=0.002, hi_quantile=0.05):
    """
    Power-law exponent of the density near zero from a log-log fit.

    If ``f(x) ~ c x**a`` then ``F(x) ~ c x**(a+1) / (a+1)``; the slope of
    ``log F`` against ``log x`` over the given quantile range estimates
    ``a + 1``.
    """

    v = numpy.sort(numpy.asarray(values, dtype=float))
    v = v[v > 0]
    n = v.size
    i0, i1 = max(int(lo_quantile * n), 1), max(int(hi_quantile * n), 3)
    idx = numpy.arange(i0, i1)
    slope = numpy.polyfit(numpy.log(v[idx]), numpy.log((idx + 0.5) / n), 1)[0]
    return slope - 1.0
