import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ndtri

from gumbelmax.exceptions import BudgetExceeded, NoBracket
from gumbelmax.numerics import (
    AccuracyBudget,
    erf,
    erfc,
    find_root,
    integrate,
    integrate_with_error,
    log_erfc,
    normal_cdf,
    normal_ppf,
)

mpmath.mp.dps = 40

finite_x = st.floats(min_value=-30, max_value=30, allow_nan=False)


def mp_erf(x):
    return float(mpmath.erf(mpmath.mpf(float(x))))


def mp_erfc(x):
    return float(mpmath.erfc(mpmath.mpf(float(x))))


# -- erf / erfc ---------------------------------------------------------------

def test_erf_examples():
    assert erf(0.0) == 0.0
    assert erf(1.0) == pytest.approx(0.8427007929497149, abs=1e-15)
    assert erf(-1.0) == -erf(1.0)


def test_erfc_examples():
    assert erfc(0.0) == 1.0
    assert erfc(1.0) == pytest.approx(0.15729920705028513, rel=1e-14)
    assert erfc(10.0) == pytest.approx(2.088487583762545e-45, rel=1e-12)


def test_erf_absolute_accuracy_on_central_range():
    xs = np.linspace(-6, 6, 2401)
    worst = max(abs(erf(x) - mp_erf(x)) for x in xs)
    assert worst <= 1e-15


def test_erf_relative_accuracy_outside_central_range():
    xs = np.concatenate([np.geomspace(1e-300, 1e-3, 60), np.linspace(6, 30, 50)])
    for x in xs:
        ref = mp_erf(x)
        assert abs(erf(x) - ref) <= 1e-12 * abs(ref)
        assert abs(erf(-x) + ref) <= 1e-12 * abs(ref)


def test_erfc_relative_accuracy_to_26():
    for x in np.linspace(0, 26, 1041):
        ref = mp_erfc(x)
        assert abs(erfc(x) - ref) <= 1e-12 * ref, x


def test_erfc_reaches_underflow_floor():
    # erfc(27) ~ 5e-319 is subnormal but not zero
    assert erfc(27.0) > 0.0
    assert erfc(27.0) == pytest.approx(mp_erfc(27.0), rel=1e-2)
    assert erfc(40.0) == 0.0


def test_erfc_negative_arguments():
    for x in (-0.3, -1.0, -2.5, -8.0):
        assert erfc(x) == pytest.approx(mp_erfc(x), rel=1e-15)


@given(finite_x)
def test_erf_is_exactly_odd(x):
    assert erf(-x) == -erf(x)


def test_erf_plus_erfc_is_one():
    pos = np.geomspace(1e-6, 26, 400)
    for x in np.concatenate([-pos, [0.0], pos]):
        assert abs(erf(x) + erfc(x) - 1.0) <= 1e-14


def test_erf_derivative_matches_gaussian():
    h = 1e-5
    for x in np.linspace(-5, 5, 201):
        fd = (erf(x + h) - erf(x - h)) / (2 * h)
        assert fd == pytest.approx(2 / math.sqrt(math.pi) * math.exp(-x * x), abs=1e-8)


def test_log_erfc_beyond_underflow():
    for x in (0.5, 2.0, 10.0, 30.0, 50.0, 200.0):
        ref = float(mpmath.log(mpmath.erfc(mpmath.mpf(x))))
        assert log_erfc(x) == pytest.approx(ref, rel=1e-14)


# -- normal cdf / quantile ----------------------------------------------------

def test_normal_cdf_examples():
    assert normal_cdf(0.0) == 0.5
    assert normal_cdf(1.959963984540054) == pytest.approx(0.975, abs=1e-15)
    assert normal_cdf(-8.0) == pytest.approx(6.22096057427178e-16, rel=1e-12)


@given(st.floats(min_value=-38, max_value=38, allow_nan=False))
def test_normal_cdf_symmetry(x):
    assert abs(normal_cdf(x) + normal_cdf(-x) - 1.0) <= 1e-15


def test_normal_ppf_against_scipy():
    p = np.concatenate([
        np.geomspace(1e-300, 0.49, 400),
        np.linspace(0.01, 0.99, 401),
        1 - np.geomspace(1e-16, 0.49, 100),
    ])
    z = normal_ppf(p)
    ref = ndtri(p)
    assert np.all(np.abs(z - ref) <= 1e-14 * np.maximum(1.0, np.abs(ref)))


def test_normal_ppf_edges_and_scalars():
    assert normal_ppf(0.5) == 0.0
    assert normal_ppf(0.0) == -math.inf
    assert normal_ppf(1.0) == math.inf
    assert math.isnan(normal_ppf(1.5))
    assert isinstance(normal_ppf(0.3), float)


@given(st.floats(min_value=1e-12, max_value=1 - 1e-12))
def test_normal_ppf_inverts_cdf(p):
    assert normal_cdf(normal_ppf(p)) == pytest.approx(p, rel=1e-12)


# -- quadrature ---------------------------------------------------------------

def test_kronrod_rule_embeds_gauss_legendre_7():
    from gumbelmax import numerics

    nodes, weights = np.polynomial.legendre.leggauss(7)
    gauss_nodes = sorted([numerics._XGK[1], numerics._XGK[3], numerics._XGK[5]])
    assert np.allclose(sorted(nodes[nodes > 1e-12]), gauss_nodes, atol=1e-15)
    assert np.allclose(sorted(weights), sorted([*numerics._WG[:3], *numerics._WG[:3], numerics._WG[3]]),
                       atol=1e-15)
    assert sum(numerics._WGK[:7]) * 2 + numerics._WGK[7] == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("k", range(0, 23))
def test_single_panel_exact_for_low_degree_polynomials(k):
    from gumbelmax.numerics import _gk15

    val, _ = _gk15(lambda t: t**k, 0.0, 1.0)
    assert val == pytest.approx(1.0 / (k + 1), rel=1e-14)


def test_integrate_examples():
    assert integrate(lambda t: math.exp(-t * t), 0, math.inf) == pytest.approx(
        math.sqrt(math.pi) / 2, rel=1e-13)
    half_normal = lambda t: math.sqrt(2 / math.pi) * math.exp(-t * t / 2)
    assert integrate(half_normal, 0, math.inf) == pytest.approx(1.0, abs=1e-13)
    # mpmath: sqrt(pi/2) * erfc(10/sqrt(2))
    tail = integrate(lambda t: math.exp(-t * t / 2), 10, math.inf, AccuracyBudget(0.0, 1e-12))
    assert tail == pytest.approx(1.9100139038893311e-23, rel=1e-11)


def test_integrate_whole_line_and_reversed():
    g = lambda t: math.exp(-t * t / 2)
    assert integrate(g, -math.inf, math.inf) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-13)
    assert integrate(g, -math.inf, 0.0) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-13)
    assert integrate(g, 1.0, 0.0) == pytest.approx(-integrate(g, 0.0, 1.0), rel=1e-15)
    assert integrate(g, 2.0, 2.0) == 0.0


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=40, deadline=None)
def test_integrate_is_additive(a, b, c):
    f = lambda t: math.exp(-t * t) * (1 + t * t)
    v_ab, e_ab = integrate_with_error(f, a, b)
    v_bc, e_bc = integrate_with_error(f, b, c)
    v_ac, e_ac = integrate_with_error(f, a, c)
    assert abs(v_ab + v_bc - v_ac) <= e_ab + e_bc + e_ac + 1e-15


def test_integrate_reports_budget_exhaustion():
    with pytest.raises(BudgetExceeded) as info:
        integrate(lambda t: 1 / math.sqrt(t) if t > 0 else 0.0, 0.0, 1.0,
                  AccuracyBudget(0.0, 1e-14, max_refinements=3))
    assert info.value.refinements == 3
    assert info.value.estimate == pytest.approx(2.0, rel=0.1)
    assert info.value.error > 0


@pytest.mark.parametrize("kwargs", [
    {"abs_tol": 0.0, "rel_tol": 0.0},
    {"abs_tol": -1.0},
    {"max_refinements": 0},
])
def test_accuracy_budget_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        AccuracyBudget(**kwargs)


# -- root finding -------------------------------------------------------------

def test_find_root_examples():
    assert find_root(lambda x: x - 2, 0, 5, 1e-12) == pytest.approx(2.0, abs=1e-12)
    assert find_root(lambda x: normal_cdf(x) - 0.975, 0, 5, 1e-14) == pytest.approx(
        1.959963984540054, abs=1e-13)
    assert find_root(lambda x: erf(x) - 0.5, 0, 2, 1e-15) == pytest.approx(
        0.4769362762044699, abs=1e-15)


def test_find_root_without_sign_change():
    with pytest.raises(NoBracket):
        find_root(lambda x: x * x + 1, -1, 1)


def test_find_root_decreasing_function_and_exact_endpoint():
    assert find_root(lambda x: 1 - x, 0, 3, 1e-13) == pytest.approx(1.0, abs=1e-13)
    assert find_root(lambda x: x, 0.0, 1.0) == 0.0


def test_find_root_is_deterministic():
    f = lambda x: math.tanh(x - 0.3)
    assert find_root(f, -4, 4, 1e-13) == find_root(f, -4, 4, 1e-13)


@given(st.floats(min_value=-9.5, max_value=9.5))
def test_find_root_round_trip(target):
    tol = 1e-12
    f = lambda x: x**3 + x
    root = find_root(lambda x: f(x) - f(target), -10, 10, tol)
    assert abs(root - target) <= tol
