"""Numerical kernel: error functions, normal quantiles, quadrature, roots.

Everything here is written against the Python standard library (plus numpy
for the vectorised normal quantile) so that the distribution code built on
top can be checked against an independent arbitrary-precision oracle.

erf/erfc
    ``|x| < 1``: the positive-term series
    ``erf(x) = 2x/sqrt(pi) * exp(-x^2) * sum_k (2x^2)^k / (1*3*...*(2k+1))``.
    ``|x| >= 1``: Laplace's continued fraction for ``erfc``, evaluated with the
    modified Lentz algorithm.  ``exp(-x^2)`` is formed from an exact split of
    ``x^2`` so the large-argument tail keeps its relative accuracy.

Semi-infinite quadrature
    ``integral_lo^inf f(t) dt`` is mapped to ``[0, 1)`` with
    ``t = lo + u / (1 - u)`` and integrated with adaptive Gauss-Kronrod (7, 15)
    panels.  The mapped integrand is zero wherever ``f`` has underflowed, which
    is where the tail is truncated; for integrands with at least exponential
    decay the discarded mass is below the double-precision underflow floor.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from gumbelmax.exceptions import BudgetExceeded, NoBracket

__all__ = [
    "AccuracyBudget",
    "erf",
    "erfc",
    "log_erfc",
    "exp_neg_square",
    "normal_cdf",
    "normal_ppf",
    "integrate",
    "integrate_with_error",
    "find_root",
]

_SQRT_PI = math.sqrt(math.pi)
_TWO_OVER_SQRT_PI = 2.0 / _SQRT_PI
_SQRT2 = math.sqrt(2.0)
_CROSSOVER = 1.0
# erfc(x) is below the smallest subnormal beyond this point.
_ERFC_ZERO = 27.3


@dataclass(frozen=True)
class AccuracyBudget:
    """Tolerances for adaptive quadrature.

    Converged when the summed error estimate is at most
    ``max(abs_tol, rel_tol * |estimate|)``.
    """

    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_refinements: int = 5000

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("at least one of abs_tol, rel_tol must be positive")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be at least 1")


DEFAULT_BUDGET = AccuracyBudget()


# ---------------------------------------------------------------------------
# error functions
# ---------------------------------------------------------------------------

def exp_neg_square(x):
    """exp(-x*x) without the rounding error of forming x*x; exactly even."""
    x = abs(x)
    hi = math.floor(x * 4096.0) / 4096.0
    lo = (x - hi) * (x + hi)
    return math.exp(-hi * hi) * math.exp(-lo)


def neg_square(x):
    """-x*x to within one rounding; exactly even."""
    x = abs(x)
    hi = math.floor(x * 4096.0) / 4096.0
    return -hi * hi - (x - hi) * (x + hi)


def _erf_series(x):
    # 0 <= x < 1; every term is positive so there is no cancellation.
    x2 = 2.0 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while term > 1e-17 * total:
        k += 1
        term *= x2 / (2 * k + 1)
        total += term
    return _TWO_OVER_SQRT_PI * x * exp_neg_square(x) * total


def _erfc_cf(x):
    """Continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))) for x >= 1."""
    tiny = 1e-300
    f = x
    c = f
    d = 0.0
    for k in range(1, 1000):
        a = 0.5 * k
        d = x + a * d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = x + a / (c if c != 0.0 else tiny)
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return f


def _erfc_large(x):
    # x >= _CROSSOVER
    if x > _ERFC_ZERO:
        return 0.0
    return (1.0 / (_SQRT_PI * _erfc_cf(x))) * exp_neg_square(x)


def erf(x):
    """Error function of a finite real ``x``; exactly odd."""
    x = float(x)
    ax = abs(x)
    if ax < _CROSSOVER:
        r = _erf_series(ax)
    else:
        r = 1.0 - _erfc_large(ax)
    return -r if x < 0 else r


def erfc(x):
    """Complementary error function, accurate in relative terms for large ``x``."""
    x = float(x)
    if x >= _CROSSOVER:
        return _erfc_large(x)
    if x > -_CROSSOVER:
        return 1.0 - (_erf_series(x) if x >= 0 else -_erf_series(-x))
    return 2.0 - _erfc_large(-x)


def log_erfc(x):
    """``log(erfc(x))``, finite far past the point where ``erfc`` underflows."""
    x = float(x)
    if x < _CROSSOVER:
        return math.log(erfc(x))
    return neg_square(x) - math.log(_SQRT_PI * _erfc_cf(x))


def normal_cdf(x):
    """Standard normal CDF ``(1 + erf(x/sqrt(2))) / 2``.

    The lower tail is taken as ``erfc(-x/sqrt(2)) / 2`` (the same identity)
    so that it does not cancel to zero.
    """
    x = float(x)
    z = x / _SQRT2
    if x >= 0:
        return 0.5 * (1.0 + erf(z))
    return 0.5 * erfc(-z)


# Wichura (1988), algorithm AS 241 (PPND16), about 1e-16 relative accuracy.
_PPF_A = (3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
          1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
          3.3430575583588128105e4, 2.5090809287301226727e3)
_PPF_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
          2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
          5.2264952788528545610e3)
_PPF_C = (1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
          3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
          2.27238449892691845833e-2, 7.74545014278341407640e-4)
_PPF_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
          1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
          1.05075007164441684324e-9)
_PPF_E = (6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
          2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
          2.71155556874348757815e-5, 2.01033439929228813265e-7)
_PPF_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
          7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
          2.04426310338993978564e-15)


def _horner(coef, r):
    acc = coef[-1]
    for c in coef[-2::-1]:
        acc = acc * r + c
    return acc


def normal_ppf(p):
    """Standard normal quantile for ``p`` in (0, 1), vectorised over arrays.

    Returns ``-inf``/``inf`` at 0 and 1 and ``nan`` outside [0, 1].
    """
    p = np.asarray(p, dtype=np.float64)
    q = p - 0.5
    out = np.empty_like(p)

    central = np.abs(q) <= 0.425
    qc = q[central]
    r = 0.180625 - qc * qc
    out[central] = qc * _horner(_PPF_A, r) / _horner(_PPF_B, r)

    tails = ~central
    if np.any(tails):
        pt = p[tails]
        qt = q[tails]
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.sqrt(-np.log(np.minimum(pt, 1.0 - pt)))
            near = r <= 5.0
            val = np.where(
                near,
                _horner(_PPF_C, r - 1.6) / _horner(_PPF_D, r - 1.6),
                _horner(_PPF_E, r - 5.0) / _horner(_PPF_F, r - 5.0),
            )
        val = np.where(np.isinf(r), np.inf, val)
        out[tails] = np.where(qt < 0, -val, val)
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature
# ---------------------------------------------------------------------------

# Kronrod 15-point nodes (non-negative half) and weights; the embedded
# 7-point Gauss rule uses the odd-indexed nodes.
_XGK = (0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0)
_WGK = (0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714)
_WG = (0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
       0.381830050505118944950369775488975, 0.417959183673469387755102040816327)


def _gk15(f, a, b):
    """Return (kronrod, |kronrod - gauss|) on [a, b]."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    res_k = fc * _WGK[7]
    res_g = fc * _WG[3]
    for j in range(7):
        dx = half * _XGK[j]
        fsum = f(center - dx) + f(center + dx)
        res_k += _WGK[j] * fsum
        if j % 2 == 1:
            res_g += _WG[j // 2] * fsum
    res_k *= half
    res_g *= half
    return res_k, abs(res_k - res_g)


def _adaptive(g, a, b, budget, panels):
    edges = [a + (b - a) * i / panels for i in range(panels + 1)]
    heap = []
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, e = _gk15(g, lo, hi)
        heapq.heappush(heap, (-e, lo, hi, val))
        total += val
        err += e
    refinements = 0
    while err > max(budget.abs_tol, budget.rel_tol * abs(total)):
        if refinements >= budget.max_refinements:
            raise BudgetExceeded(total, err, refinements)
        neg_e, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # panel cannot be split further in floating point
            raise BudgetExceeded(total, err, refinements)
        v1, e1 = _gk15(g, lo, mid)
        v2, e2 = _gk15(g, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        refinements += 1
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
        if err <= max(budget.abs_tol, budget.rel_tol * abs(total)):
            # confirm with exact sums; incremental updates drift
            total = math.fsum(item[3] for item in heap)
            err = math.fsum(-item[0] for item in heap)
    return math.fsum(item[3] for item in heap), math.fsum(-item[0] for item in heap)


def integrate_with_error(f, lo, hi, budget=None):
    """Integrate ``f`` over ``[lo, hi]`` and return ``(estimate, error_estimate)``.

    ``hi`` may be ``math.inf`` and ``lo`` may be ``-math.inf``; see the module
    docstring for the mapping used on infinite ranges.

    Raises
    ------
    BudgetExceeded
        If ``budget.max_refinements`` subdivisions do not reach the tolerance.
    """
    budget = budget or DEFAULT_BUDGET
    lo = float(lo)
    hi = float(hi)
    if lo == hi:
        return 0.0, 0.0
    if lo > hi:
        val, err = integrate_with_error(f, hi, lo, budget)
        return -val, err
    if math.isinf(lo) and math.isinf(hi):
        v1, e1 = integrate_with_error(f, -math.inf, 0.0, budget)
        v2, e2 = integrate_with_error(f, 0.0, math.inf, budget)
        return v1 + v2, e1 + e2
    if math.isinf(lo):
        return integrate_with_error(lambda t: f(-t), -hi, math.inf, budget)
    if math.isinf(hi):

        def mapped(u):
            w = 1.0 - u
            return f(lo + u / w) / (w * w)

        return _adaptive(mapped, 0.0, 1.0, budget, panels=8)
    return _adaptive(f, lo, hi, budget, panels=4)


def integrate(f, lo, hi, budget=None):
    """Adaptive quadrature estimate of ``integral_lo^hi f(t) dt``."""
    return integrate_with_error(f, lo, hi, budget)[0]


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def find_root(f, lo, hi, tol=1e-13):
    """Bisection root of a continuous monotone ``f`` on ``[lo, hi]``.

    The iteration count is capped at ``ceil(log2((hi - lo) / tol)) + 1``; the
    loop also stops once the bracket cannot be halved in floating point.
    """
    lo = float(lo)
    hi = float(hi)
    flo = f(lo)
    if flo == 0:
        return lo
    fhi = f(hi)
    if fhi == 0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise NoBracket(f"f({lo})={flo!r} and f({hi})={fhi!r} have the same sign")
    max_iter = max(1, math.ceil(math.log2((hi - lo) / tol)) + 1) if tol > 0 else 2000
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = lo + 0.5 * (hi - lo)
        if not lo < mid < hi:
            break
        fmid = f(mid)
        if fmid == 0:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return lo + 0.5 * (hi - lo)
