import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gumbelmax.distributions import Case, tail
from gumbelmax.exceptions import DomainError
from gumbelmax.sequences import NormSeq, invert_tail, sequences, sum_normal_by_scaling, symmetrize

mpmath.mp.dps = 40

ALL = list(Case)
GRID = [10**4, 10**6, 10**8, 10**12]


def mp_sequences(case, n):
    """The closed forms evaluated in 40-digit arithmetic."""
    mult = {Case.NORMAL: 1, Case.ABS_NORMAL: 2, Case.SUM_NORMAL: 1,
            Case.SUM_ABS: 4, Case.DIFF_ABS: 1, Case.ABS_DIFF_ABS: 2}[case]
    L = mpmath.log(mpmath.mpf(mult) * n)
    pi = mpmath.pi
    if case in (Case.NORMAL, Case.ABS_NORMAL):
        r = mpmath.sqrt(2 * L)
        d = -mpmath.log(4 * pi * L) / (2 * r)
        return 1 / r, r + d, d
    if case in (Case.SUM_NORMAL, Case.SUM_ABS):
        r = mpmath.sqrt(L)
        d = -mpmath.log(4 * pi * L) / (2 * r)
        return 1 / r, 2 * r + d, d
    r = mpmath.sqrt(2 * L)
    d = -mpmath.log(pi * L) / r
    return 1 / r, r + d, d


def truncated(value, digits):
    return math.trunc(value * 10**digits) / 10**digits


def test_sequence_examples():
    s = sequences(Case.NORMAL, 10_000)
    # a is asserted against the closed form; the published digits are off in the 7th
    assert s.a == pytest.approx(0.23299530089232803, rel=1e-14)
    assert truncated(s.b, 4) == 3.7384
    assert truncated(s.delta, 5) == -0.55352
    s = sequences(Case.SUM_ABS, 10_000)
    assert s.a == pytest.approx(0.3071963263271184, rel=1e-14)
    assert truncated(s.b, 4) == 5.7591
    assert truncated(s.delta, 5) == -0.75133


@pytest.mark.parametrize("case", ALL)
@pytest.mark.parametrize("n", [2, 10, 10**4, 10**8, 2**53])
def test_sequences_match_high_precision_formulas(case, n):
    a, b, d = mp_sequences(case, n)
    s = sequences(case, n)
    assert s.a == pytest.approx(float(a), rel=1e-14)
    assert s.b == pytest.approx(float(b), rel=1e-14)
    assert s.delta == pytest.approx(float(d), rel=1e-13)
    assert s.case is case and s.n == n


@pytest.mark.parametrize("n", [10, 1000, 10**6])
def test_absolute_normal_is_normal_at_double_n(n):
    lhs, rhs = sequences(Case.ABS_NORMAL, n), sequences(Case.NORMAL, 2 * n)
    assert (lhs.a, lhs.b, lhs.delta) == (rhs.a, rhs.b, rhs.delta)


@given(st.integers(min_value=2, max_value=2**50))
def test_doubling_identities_are_exact(n):
    for absolute, parent in ((Case.ABS_NORMAL, Case.NORMAL), (Case.ABS_DIFF_ABS, Case.DIFF_ABS)):
        lhs, rhs = sequences(absolute, n), sequences(parent, 2 * n)
        assert (lhs.a, lhs.b, lhs.delta) == (rhs.a, rhs.b, rhs.delta)
    lhs, rhs = sequences(Case.SUM_ABS, n), sequences(Case.SUM_NORMAL, 4 * n)
    assert (lhs.a, lhs.b, lhs.delta) == (rhs.a, rhs.b, rhs.delta)


@given(st.integers(min_value=2, max_value=2**53))
def test_sum_normal_is_scaled_normal(n):
    direct, scaled = sequences(Case.SUM_NORMAL, n), sum_normal_by_scaling(n)
    assert scaled.a == pytest.approx(direct.a, rel=1e-14)
    assert scaled.b == pytest.approx(direct.b, rel=1e-14)
    assert scaled.case is Case.SUM_NORMAL


@pytest.mark.parametrize("case", ALL)
@given(n=st.integers(min_value=2, max_value=2**53))
def test_scale_positive_and_correction_negative(case, n):
    s = sequences(case, n)
    assert s.a > 0
    assert s.delta < 0
    assert s.b > 0


@pytest.mark.parametrize("case", ALL)
def test_correction_decreases_to_zero(case):
    ns = np.unique(np.round(np.geomspace(100, 2.0**53, 400)).astype(np.int64))
    deltas = [sequences(case, int(n)).delta for n in ns]
    assert all(later > earlier for earlier, later in zip(deltas, deltas[1:]))
    assert abs(sequences(case, 1e300).delta) < 0.25 * abs(deltas[0])


def test_symmetrize_examples():
    assert symmetrize(Case.NORMAL, 5000).b == sequences(Case.NORMAL, 10_000).b
    lhs, rhs = symmetrize(Case.DIFF_ABS, 10_000), sequences(Case.ABS_DIFF_ABS, 10_000)
    assert lhs == rhs
    assert symmetrize(Case.NORMAL, 1).b == sequences(Case.NORMAL, 2).b
    with pytest.raises(DomainError):
        symmetrize(Case.SUM_ABS, 10)


@pytest.mark.parametrize("base", [Case.ABS_NORMAL, Case.SUM_NORMAL, Case.SUM_ABS, Case.ABS_DIFF_ABS])
def test_symmetrize_rejects_non_symmetric_bases(base):
    with pytest.raises(DomainError):
        symmetrize(base, 10)


@given(st.integers(min_value=1, max_value=2**50))
def test_symmetrize_equals_absolute_case(n):
    s = symmetrize(Case.NORMAL, n)
    ref = sequences(Case.NORMAL, 2 * n)
    assert (s.case, s.n, s.a, s.b, s.delta) == (Case.ABS_NORMAL, n, ref.a, ref.b, ref.delta)


@pytest.mark.parametrize("n", [1, 0, -5, 2.5, "10", True])
def test_sequences_reject_bad_n(n):
    with pytest.raises(DomainError):
        sequences(Case.NORMAL, n)


def test_integral_float_n_is_accepted():
    assert sequences(Case.NORMAL, 1e4) == sequences(Case.NORMAL, 10_000)


def test_normseq_normalize_and_dict():
    s = sequences(Case.NORMAL, 10_000)
    assert s.normalize(s.b) == 0.0
    assert s.normalize(s.a + s.b) == pytest.approx(1.0, rel=1e-15)
    d = s.as_dict()
    assert d["case"] == "normal" and d["n"] == 10_000 and d["a"] == s.a
    assert isinstance(s, NormSeq)


def test_invert_tail_examples():
    assert invert_tail(Case.NORMAL, 2) == 0.0
    assert invert_tail(Case.DIFF_ABS, 2) == 0.0
    ref = mpmath.findroot(lambda b: mpmath.erfc(b / mpmath.sqrt(2)) / 2 - mpmath.mpf(10) ** -6, 4.75)
    assert invert_tail(Case.NORMAL, 10**6) == pytest.approx(float(ref), abs=1e-12)
    assert invert_tail(Case.NORMAL, 10**6) == pytest.approx(4.753424, abs=1e-6)


@pytest.mark.parametrize("case", ALL)
@pytest.mark.parametrize("n", [10, 10**4, 10**12, 10**30])
def test_invert_tail_solves_tail_equation(case, n):
    u = invert_tail(case, n)
    assert n * tail(case, u) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("case", ALL)
def test_location_approaches_exact_quantile(case):
    gaps = [abs(sequences(case, n).b - invert_tail(case, n)) for n in GRID]
    assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))


@pytest.mark.parametrize("case", ALL)
def test_expected_exceedances_increase_toward_one(case):
    values = [n * tail(case, sequences(case, n).b) for n in GRID]
    assert all(later > earlier for earlier, later in zip(values, values[1:]))
    assert all(v < 1.0 for v in values)


def test_normal_location_matches_quantile_to_first_order():
    # b_n and U(n) differ by O(log log n / log n) only
    for n in GRID:
        gap = abs(sequences(Case.NORMAL, n).b - invert_tail(Case.NORMAL, n))
        assert gap < math.log(math.log(n)) / math.log(n)
