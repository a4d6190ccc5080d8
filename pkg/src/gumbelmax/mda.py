"""Numerical checks of Gumbel domain-of-attraction ingredients.

* :func:`von_mises_ratio` evaluates ``tail(t + x f(t)) / tail(t)`` with the
  auxiliary function ``f(t) = 1 / (2 c t)`` read off the case asymptote; the
  limit as ``t -> inf`` is ``exp(-x)``.
* :func:`gumbel_limit_error` measures ``|n tail(a_n x + b_n) - exp(-x)|``.
* :func:`mills_ratio` compares the Gaussian-type tail integral with its
  first-order asymptote ``exp(-c x^2) / (2 c x)``.
* :func:`exact_max_sup_distance` uses ``P(max <= y) = F(y)^n`` directly, so
  it needs no simulation.
"""

import math
from dataclasses import dataclass

import numpy as np

from gumbelmax.distributions import Case, gumbel_cdf, model
from gumbelmax.exceptions import DomainError
from gumbelmax.numerics import AccuracyBudget, integrate_with_error
from gumbelmax.sequences import sequences

__all__ = [
    "CriterionReport",
    "von_mises_ratio",
    "gumbel_limit_error",
    "mills_ratio",
    "exact_max_sup_distance",
    "default_grid",
]

# log F is floored here so F**n stays a deterministic 0.0 far left
LOG_CDF_FLOOR = -745.0
MILLS_BUDGET = AccuracyBudget(abs_tol=0.0, rel_tol=1e-13, max_refinements=2000)


@dataclass(frozen=True)
class CriterionReport:
    t: float
    x: float
    ratio: float
    target: float
    abs_error: float


def von_mises_ratio(case, t, x):
    """Tail ratio of the von Mises criterion at ``(t, x)``.

    Evaluated as ``exp(log_tail(t + x f(t)) - log_tail(t))`` so that it stays
    defined at ``t = 50`` where the tails themselves underflow.
    """
    m = model(case)
    t = float(t)
    x = float(x)
    if t <= 0:
        raise DomainError("t must be positive")
    shifted = t + x * m.asymptote.aux_scale(t)
    if shifted <= m.support_lo:
        raise DomainError(f"t + x f(t) = {shifted} is outside the support of {m.case.value}")
    ratio = math.exp(m.log_tail(shifted) - m.log_tail(t))
    target = math.exp(-x)
    return CriterionReport(t, x, ratio, target, abs(ratio - target))


def gumbel_limit_error(case, n, x):
    """``|n * tail(a_n x + b_n) - exp(-x)|`` with the case sequences."""
    seq = sequences(case, n)
    m = model(case)
    return abs(seq.n * m.tail(seq.a * float(x) + seq.b) - math.exp(-float(x)))


def mills_ratio(c, x, budget=None):
    """``integral_x^inf exp(-c t^2) dt`` divided by ``exp(-c x^2) / (2 c x)``.

    With ``t = x + s / (2 c x)`` the ratio is exactly
    ``integral_0^inf exp(-s - s^2 / (4 c x^2)) ds``, whose integrand has unit
    scale for every ``(c, x)``, so the quadrature never has to resolve a spike
    of width ``1 / (2 c x)`` at the left end.
    """
    c = float(c)
    x = float(x)
    if c <= 0 or x <= 0:
        raise DomainError("mills_ratio needs c > 0 and x > 0")
    k = 1.0 / (4.0 * c * x * x)
    value, _ = integrate_with_error(
        lambda s: math.exp(-s - k * s * s), 0.0, math.inf, budget or MILLS_BUDGET
    )
    return value


def default_grid(lo=-3.0, hi=8.0, step=0.01):
    """``lo, lo + step, ..., hi`` built from integer multiples (no drift)."""
    count = int(round((hi - lo) / step))
    return lo + step * np.arange(count + 1)


def _log_cdf(m, y):
    tl = m.tail(y)
    if tl < 0.5:
        return math.log1p(-tl)
    F = m.cdf(y)
    return math.log(F) if F > 0 else LOG_CDF_FLOOR


def exact_max_sup_distance(case, n, grid=None):
    """``max_x |F(a_n x + b_n)^n - exp(-exp(-x))|`` over ``grid``.

    ``F^n`` is formed as ``exp(n log F)`` with ``log F`` floored at -745.
    """
    m = model(case)
    seq = sequences(case, n)
    xs = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if xs.size == 0:
        raise DomainError("grid must be non-empty")
    worst = 0.0
    for x in xs:
        logF = max(_log_cdf(m, seq.a * x + seq.b), LOG_CDF_FLOOR)
        worst = max(worst, abs(math.exp(seq.n * logF) - gumbel_cdf(x)))
    return worst


def limit_report(case, n, x):
    """Inputs, measured value and target of the tail-limit condition."""
    seq = sequences(case, n)
    measured = seq.n * model(case).tail(seq.a * float(x) + seq.b)
    target = math.exp(-float(x))
    return {"case": Case.parse(case).value, "n": seq.n, "x": float(x),
            "value": measured, "target": target, "error": abs(measured - target)}
