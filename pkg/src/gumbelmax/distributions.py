"""Exact laws of the six normal-related statistics and the standard Gumbel law.

With ``X, Y`` independent standard normal, the six cases are the laws of
``X``, ``|X|``, ``X + Y``, ``|X| + |Y|``, ``|X| - |Y|`` and ``||X| - |Y||``.
All densities, CDFs and tails are closed forms in ``erf``/``erfc``:

==============  =========  ===================================  ====================
case            support    density                              tail (x >= 0)
==============  =========  ===================================  ====================
normal          R          exp(-x^2/2) / sqrt(2 pi)             erfc(x/sqrt2) / 2
abs-normal      [0, inf)   2 exp(-x^2/2) / sqrt(2 pi)           erfc(x/sqrt2)
sum-normal      R          exp(-x^2/4) / (2 sqrt(pi))           erfc(x/2) / 2
sum-abs         [0, inf)   2/sqrt(pi) exp(-x^2/4) erf(x/2)      1 - erf(x/2)^2
diff-abs        R          1/sqrt(pi) exp(-x^2/4) erfc(|x|/2)   erfc(x/2)^2 / 2
abs-diff-abs    [0, inf)   2/sqrt(pi) exp(-x^2/4) erfc(x/2)     erfc(x/2)^2
==============  =========  ===================================  ====================

The ``sum-abs`` density comes from convolving two half-normal densities over
``u in [0, x]``; its CDF is ``erf(x/2)^2`` (the probability that ``(|X|, |Y|)``
lands in the triangle ``u + v <= x``, which rotates onto a square).

Tails are evaluated from ``erfc`` directly and never as ``1 - cdf``.
"""

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from gumbelmax.exceptions import DomainError
from gumbelmax.numerics import erf, erfc, exp_neg_square, log_erfc

__all__ = [
    "Case",
    "TailAsymptote",
    "DistributionModel",
    "model",
    "density",
    "cdf",
    "tail",
    "log_tail",
    "asymptote",
    "gumbel_cdf",
    "gumbel_pdf",
    "gumbel_quantile",
    "GUMBEL_MEDIAN",
]

_SQRT2 = math.sqrt(2.0)
_SQRT_PI = math.sqrt(math.pi)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_LOG2 = math.log(2.0)


class Case(str, enum.Enum):
    """The six statistics; values are the CLI labels."""

    NORMAL = "normal"
    ABS_NORMAL = "abs-normal"
    SUM_NORMAL = "sum-normal"
    SUM_ABS = "sum-abs"
    DIFF_ABS = "diff-abs"
    ABS_DIFF_ABS = "abs-diff-abs"

    @classmethod
    def parse(cls, label):
        if isinstance(label, cls):
            return label
        text = str(label).strip().lower().replace("_", "-")
        try:
            return cls(text)
        except ValueError:
            choices = ", ".join(c.value for c in cls)
            raise DomainError(f"unknown case {label!r}; expected one of {choices}") from None

    @property
    def index(self):
        """1-based position, matching the statistic numbering M^(1)..M^(6)."""
        return list(Case).index(self) + 1

    @property
    def statistic(self):
        return _STATISTIC_TEXT[self]

    @property
    def symmetric(self):
        return self in (Case.NORMAL, Case.SUM_NORMAL, Case.DIFF_ABS)

    def __str__(self):
        return self.value


_STATISTIC_TEXT = {
    Case.NORMAL: "X",
    Case.ABS_NORMAL: "|X|",
    Case.SUM_NORMAL: "X+Y",
    Case.SUM_ABS: "|X|+|Y|",
    Case.DIFF_ABS: "|X|-|Y|",
    Case.ABS_DIFF_ABS: "||X|-|Y||",
}


@dataclass(frozen=True)
class TailAsymptote:
    """Leading tail behaviour ``C * x**(-p) * exp(-c * x**2)``."""

    C: float
    p: float
    c: float

    def __call__(self, x):
        return self.C * x ** (-self.p) * math.exp(-self.c * x * x)

    def log_value(self, x):
        return math.log(self.C) - self.p * math.log(x) - self.c * x * x

    def aux_scale(self, t):
        """Auxiliary function ``1 / (2 c t)`` of the von Mises criterion."""
        return 1.0 / (2.0 * self.c * t)


@dataclass(frozen=True)
class DistributionModel:
    case: Case
    support_lo: float
    support_hi: float
    density: Callable[[float], float]
    cdf: Callable[[float], float]
    tail: Callable[[float], float]
    log_tail: Callable[[float], float]
    asymptote: TailAsymptote


# -- normal ------------------------------------------------------------------

def _normal_pdf(x):
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def _normal_tail(x):
    return 0.5 * erfc(x / _SQRT2)


def _normal_cdf(x):
    return 0.5 * erfc(-x / _SQRT2)


def _normal_log_tail(x):
    return log_erfc(x / _SQRT2) - _LOG2


# -- |X| ---------------------------------------------------------------------

def _abs_normal_pdf(x):
    return 2.0 * _normal_pdf(x) if x >= 0 else 0.0


def _abs_normal_tail(x):
    return erfc(x / _SQRT2) if x > 0 else 1.0


def _abs_normal_cdf(x):
    return erf(x / _SQRT2) if x > 0 else 0.0


def _abs_normal_log_tail(x):
    return log_erfc(x / _SQRT2) if x > 0 else 0.0


# -- X + Y ~ N(0, 2) ---------------------------------------------------------

def _sum_normal_pdf(x):
    return exp_neg_square(0.5 * x) / (2.0 * _SQRT_PI)


def _sum_normal_tail(x):
    return 0.5 * erfc(0.5 * x)


def _sum_normal_cdf(x):
    return 0.5 * erfc(-0.5 * x)


def _sum_normal_log_tail(x):
    return log_erfc(0.5 * x) - _LOG2


# -- |X| + |Y| ---------------------------------------------------------------

def _sum_abs_pdf(x):
    if x <= 0:
        return 0.0
    return 2.0 / _SQRT_PI * exp_neg_square(0.5 * x) * erf(0.5 * x)


def _sum_abs_tail(x):
    if x <= 0:
        return 1.0
    e = erf(0.5 * x)
    if e < 0.7:
        # tail > 0.5 here, so 1 - erf^2 has no cancellation and is monotone
        return 1.0 - e * e
    # 1 - erf^2 = erfc * (2 - erfc), free of cancellation in the far tail
    ec = erfc(0.5 * x)
    return ec * (2.0 - ec)


def _sum_abs_cdf(x):
    if x <= 0:
        return 0.0
    e = erf(0.5 * x)
    return e * e


def _sum_abs_log_tail(x):
    if x <= 0:
        return 0.0
    ec = erfc(0.5 * x)
    return log_erfc(0.5 * x) + math.log(2.0 - ec)


# -- |X| - |Y| ---------------------------------------------------------------

def _diff_abs_pdf(x):
    return exp_neg_square(0.5 * x) * erfc(0.5 * abs(x)) / _SQRT_PI


def _diff_abs_tail(x):
    if x >= 0:
        e = erfc(0.5 * x)
        return 0.5 * e * e
    e = erfc(-0.5 * x)
    return 1.0 - 0.5 * e * e


def _diff_abs_cdf(x):
    if x >= 0:
        e = erfc(0.5 * x)
        return 1.0 - 0.5 * e * e
    e = erfc(-0.5 * x)
    return 0.5 * e * e


def _diff_abs_log_tail(x):
    if x >= 0:
        return 2.0 * log_erfc(0.5 * x) - _LOG2
    return math.log(_diff_abs_tail(x))


# -- ||X| - |Y|| -------------------------------------------------------------

def _abs_diff_abs_pdf(x):
    if x < 0:
        return 0.0
    return 2.0 / _SQRT_PI * exp_neg_square(0.5 * x) * erfc(0.5 * x)


def _abs_diff_abs_tail(x):
    if x <= 0:
        return 1.0
    e = erfc(0.5 * x)
    return e * e


def _abs_diff_abs_cdf(x):
    if x <= 0:
        return 0.0
    ec = erfc(0.5 * x)
    if ec * ec < 0.5:
        return 1.0 - ec * ec
    # small cdf: 1 - erfc^2 = erf * (1 + erfc) avoids the cancellation
    return erf(0.5 * x) * (1.0 + ec)


def _abs_diff_abs_log_tail(x):
    if x <= 0:
        return 0.0
    return 2.0 * log_erfc(0.5 * x)


_MODELS = {
    Case.NORMAL: DistributionModel(
        Case.NORMAL, -math.inf, math.inf,
        _normal_pdf, _normal_cdf, _normal_tail, _normal_log_tail,
        TailAsymptote(_INV_SQRT_2PI, 1.0, 0.5),
    ),
    Case.ABS_NORMAL: DistributionModel(
        Case.ABS_NORMAL, 0.0, math.inf,
        _abs_normal_pdf, _abs_normal_cdf, _abs_normal_tail, _abs_normal_log_tail,
        TailAsymptote(math.sqrt(2.0 / math.pi), 1.0, 0.5),
    ),
    Case.SUM_NORMAL: DistributionModel(
        Case.SUM_NORMAL, -math.inf, math.inf,
        _sum_normal_pdf, _sum_normal_cdf, _sum_normal_tail, _sum_normal_log_tail,
        TailAsymptote(1.0 / _SQRT_PI, 1.0, 0.25),
    ),
    Case.SUM_ABS: DistributionModel(
        Case.SUM_ABS, 0.0, math.inf,
        _sum_abs_pdf, _sum_abs_cdf, _sum_abs_tail, _sum_abs_log_tail,
        TailAsymptote(4.0 / _SQRT_PI, 1.0, 0.25),
    ),
    Case.DIFF_ABS: DistributionModel(
        Case.DIFF_ABS, -math.inf, math.inf,
        _diff_abs_pdf, _diff_abs_cdf, _diff_abs_tail, _diff_abs_log_tail,
        TailAsymptote(2.0 / math.pi, 2.0, 0.5),
    ),
    Case.ABS_DIFF_ABS: DistributionModel(
        Case.ABS_DIFF_ABS, 0.0, math.inf,
        _abs_diff_abs_pdf, _abs_diff_abs_cdf, _abs_diff_abs_tail, _abs_diff_abs_log_tail,
        TailAsymptote(4.0 / math.pi, 2.0, 0.5),
    ),
}


def model(case):
    return _MODELS[Case.parse(case)]


def density(case, x):
    return model(case).density(float(x))


def cdf(case, x):
    return model(case).cdf(float(x))


def tail(case, x):
    """Exact ``P(Z > x)`` for the case statistic ``Z``."""
    return model(case).tail(float(x))


def log_tail(case, x):
    """``log P(Z > x)``; stays finite where ``tail`` underflows."""
    return model(case).log_tail(float(x))


def asymptote(case):
    return model(case).asymptote


# -- standard Gumbel ---------------------------------------------------------

GUMBEL_MEDIAN = -math.log(math.log(2.0))


def _scalar_or_array(values, like):
    return float(values) if np.ndim(like) == 0 else values


def gumbel_cdf(x):
    """``exp(-exp(-x))``; accepts scalars or arrays."""
    xa = np.asarray(x, dtype=float)
    return _scalar_or_array(np.exp(-np.exp(-xa)), x)


def gumbel_pdf(x):
    xa = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return _scalar_or_array(np.exp(-xa - np.exp(-xa)), x)


def gumbel_quantile(p):
    """Inverse of :func:`gumbel_cdf`, ``-log(-log(p))`` for ``0 < p < 1``."""
    pa = np.asarray(p, dtype=float)
    if not np.all((pa > 0) & (pa < 1)):
        raise DomainError("Gumbel quantile needs 0 < p < 1")
    return _scalar_or_array(-np.log(-np.log(pa)), p)
