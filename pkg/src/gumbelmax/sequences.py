"""Normalizing sequences for the maxima of the six statistics.

For a sample size ``n`` each case has closed-form ``(a_n, b_n)`` with
``b_n = leading + delta_n``.  Writing ``L = log(m)``:

* normal-type (``X``, and ``|X|`` at ``m = 2n``)::

      a = 1/sqrt(2L),  b = sqrt(2L) + delta,  delta = -log(4 pi L) / (2 sqrt(2L))

* sum-type (``X+Y``, and ``|X|+|Y|`` at ``m = 4n``)::

      a = 1/sqrt(L),   b = 2 sqrt(L) + delta, delta = -log(4 pi L) / (2 sqrt(L))

* difference-type (``|X|-|Y|``, and ``||X|-|Y||`` at ``m = 2n``)::

      a = 1/sqrt(2L),  b = sqrt(2L) + delta,  delta = -log(pi L) / sqrt(2L)

Taking absolute values of a symmetric statistic doubles its tail, which is
why the absolute-value cases are their parents evaluated at ``2n``.
"""

import math
import numbers
from dataclasses import dataclass

from gumbelmax.distributions import Case, tail
from gumbelmax.exceptions import DomainError
from gumbelmax.numerics import find_root

__all__ = ["NormSeq", "sequences", "symmetrize", "invert_tail", "sum_normal_by_scaling"]

# all case tails at 30 are below 1e-38
INVERT_BRACKET = (0.0, 30.0)
INVERT_TOL = 1e-13

_SYMMETRIC_PARENT = {Case.NORMAL: Case.ABS_NORMAL, Case.DIFF_ABS: Case.ABS_DIFF_ABS}


@dataclass(frozen=True)
class NormSeq:
    """Scale ``a``, location ``b`` and the correction ``delta`` inside ``b``."""

    case: Case
    n: int
    a: float
    b: float
    delta: float

    def normalize(self, value):
        return (value - self.b) / self.a

    def as_dict(self):
        return {"case": self.case.value, "n": self.n, "a": self.a, "b": self.b, "delta": self.delta}


def _check_n(n, minimum=2):
    if isinstance(n, bool) or not isinstance(n, (numbers.Integral, float)):
        raise DomainError(f"n must be an integer, got {n!r}")
    if isinstance(n, float):
        if not n.is_integer():
            raise DomainError(f"n must be an integer, got {n!r}")
        n = int(n)
    if n < minimum:
        raise DomainError(f"n must be at least {minimum}, got {n}")
    return int(n)


def _normal_type(m):
    root = math.sqrt(2.0 * math.log(m))
    delta = -math.log(4.0 * math.pi * math.log(m)) / (2.0 * root)
    return 1.0 / root, root + delta, delta


def _sum_type(m):
    root = math.sqrt(math.log(m))
    delta = -math.log(4.0 * math.pi * math.log(m)) / (2.0 * root)
    return 1.0 / root, 2.0 * root + delta, delta


def _difference_type(m):
    root = math.sqrt(2.0 * math.log(m))
    delta = -math.log(math.pi * math.log(m)) / root
    return 1.0 / root, root + delta, delta


_FORMULAS = {
    Case.NORMAL: (_normal_type, 1),
    Case.ABS_NORMAL: (_normal_type, 2),
    Case.SUM_NORMAL: (_sum_type, 1),
    Case.SUM_ABS: (_sum_type, 4),
    Case.DIFF_ABS: (_difference_type, 1),
    Case.ABS_DIFF_ABS: (_difference_type, 2),
}


def sequences(case, n):
    """Normalizing sequences of ``case`` for sample size ``n >= 2``."""
    case = Case.parse(case)
    n = _check_n(n)
    formula, multiplier = _FORMULAS[case]
    a, b, delta = formula(multiplier * n)
    return NormSeq(case, n, a, b, delta)


def symmetrize(base, n):
    """Sequences for the absolute value of a symmetric statistic.

    ``P(|Z| > x) = 2 P(Z > x)``, so the parent's sequences at ``2n`` apply.
    The result is labelled with the absolute-value case.
    """
    base = Case.parse(base)
    if base not in _SYMMETRIC_PARENT:
        raise DomainError(f"{base.value} has no symmetric law to fold")
    n = _check_n(n, minimum=1)
    parent = sequences(base, 2 * n)
    return NormSeq(_SYMMETRIC_PARENT[base], n, parent.a, parent.b, parent.delta)


def sum_normal_by_scaling(n):
    """``X + Y ~ sqrt(2) X``: the normal sequences scaled by sqrt(2)."""
    base = sequences(Case.NORMAL, n)
    s = math.sqrt(2.0)
    return NormSeq(Case.SUM_NORMAL, base.n, s * base.a, s * base.b, s * base.delta)


def invert_tail(case, n):
    """Exact ``U(n)``: the ``b`` with ``tail(case, b) = 1/n``, by bisection."""
    case = Case.parse(case)
    n = _check_n(n)
    target = 1.0 / n
    lo, hi = INVERT_BRACKET
    return find_root(lambda b: tail(case, b) - target, lo, hi, INVERT_TOL)
