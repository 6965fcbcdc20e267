import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from zetamap import dynamics as dyn
from zetamap.dynamics import (
    LyapunovFunctionParams,
    MapParams,
    iterate,
    linear_step_large,
    linear_step_small,
    lyapunov_function_large,
    lyapunov_function_small,
    montgomery_kernel,
    sinc,
    step,
    step_derivative,
)
from zetamap.errors import DomainError, MapOverflowError, ValidationError

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e12, max_value=1e12)


def mp_step(x, eps=1):
    """50-digit reference for the map."""
    mp.dps = 50
    x = mpf(x)
    t = mp.pi / x
    s = mp.sin(t) / t
    return 1 - s * s + mpf(eps) / x


# sinc / kernel ---------------------------------------------------------------


def test_sinc_examples():
    assert sinc(0.0) == 1.0
    assert abs(sinc(math.pi)) < 1e-15
    assert sinc(math.pi / 2) == pytest.approx(0.63661977236758134, rel=1e-15)


@given(finite)
def test_sinc_range(t):
    assert -0.2173 <= sinc(t) <= 1.0


@given(st.floats(min_value=-1e-3, max_value=1e-3))
def test_sinc_small_argument_expansion(t):
    # sinc(t) - 1 carries a rounding error of up to one ulp of 1.0
    assert abs(sinc(t) - 1 + t * t / 6) <= t**4 / 100 + np.spacing(1.0)


def test_sinc_small_argument_expansion_above_rounding_floor():
    for t in (1e-3, 8e-4, 5e-4, -7e-4):
        assert abs(sinc(t) - 1 + t * t / 6) <= t**4 / 100


def test_kernel_examples():
    assert montgomery_kernel(0.0) == 0.0
    assert montgomery_kernel(1.0) == 1.0
    assert montgomery_kernel(0.5) == pytest.approx(0.59471526543064891, rel=1e-14)


@pytest.mark.parametrize("k", [k for k in range(-10, 11) if k != 0])
def test_kernel_is_one_at_nonzero_integers(k):
    assert abs(montgomery_kernel(float(k)) - 1.0) <= 1e-12


@given(finite)
def test_kernel_range_and_symmetry(u):
    v = montgomery_kernel(u)
    assert 0.0 <= v <= 1.0
    assert montgomery_kernel(-u) == v


@pytest.mark.parametrize("u", [1e-9, 1e-6, 1e-4, 3e-3, 0.01, 0.05, 0.3])
def test_kernel_small_u_matches_high_precision(u):
    mp.dps = 50
    t = mp.pi * mpf(u)
    exact = 1 - (mp.sin(t) / t) ** 2
    assert montgomery_kernel(u) == pytest.approx(float(exact), rel=1e-10)


# step ------------------------------------------------------------------------


def test_step_examples():
    assert step(0.5) == pytest.approx(3.0, rel=1e-14)
    assert step(5e-13) == pytest.approx(2.0e12, rel=1e-9)
    # 1/x + (pi/x)^2/3 at x = 1e6, checked against the 50-digit reference
    assert step(1e6) == pytest.approx(1.0000032898681337e-06, rel=1e-9)


@pytest.mark.parametrize("x", [0.05, 0.3, 0.5, 0.7, 1.7, 3.0, 5.0, 123.4, 1e4, 1e9, -0.4, -2.5])
def test_step_against_high_precision(x):
    assert step(x) == pytest.approx(float(mp_step(x)), rel=1e-12)


def test_step_with_eps():
    assert step(2.0, MapParams(eps=0.0)) == pytest.approx(1 - (2 / math.pi) ** 2, rel=1e-14)
    assert step(2.0, MapParams(eps=3.0)) == pytest.approx(1 - (2 / math.pi) ** 2 + 1.5, rel=1e-14)


@pytest.mark.parametrize("x", [1e3, 1e4, 1e5, 1e6])
def test_large_x_asymptotics(x):
    assert abs(step(x) - 1 / x) <= 4 / x**2


def test_step_guard_and_overflow():
    with pytest.raises(DomainError):
        step(0.0)
    with pytest.raises(DomainError):
        step(1e-301)
    with pytest.raises(DomainError):
        step(math.nan)
    with pytest.raises(MapOverflowError):
        step(1e-300, MapParams(eps=1e300))


def test_map_params_validation():
    with pytest.raises(ValidationError):
        MapParams(eps=math.inf)
    with pytest.raises(ValidationError):
        MapParams(min_abs_x=0.0)
    with pytest.raises(ValidationError):
        LyapunovFunctionParams(c1=0.0)


# derivative ------------------------------------------------------------------


def central_difference(x, params=MapParams()):
    h = 1e-6 * abs(x)
    return (step(x + h, params) - step(x - h, params)) / (2 * h)


def test_derivative_examples():
    assert step_derivative(0.5) == pytest.approx(-4.0, rel=1e-13)
    assert step_derivative(2.0) == pytest.approx(-0.65528473456935109, abs=1e-6)


@pytest.mark.parametrize("x", [0.3, 0.7, 1.7, 5.0])
def test_derivative_matches_finite_difference(x):
    assert step_derivative(x) == pytest.approx(central_difference(x), rel=1e-6)


@settings(max_examples=200)
@given(st.floats(min_value=0.05, max_value=50.0), st.sampled_from([1.0, -1.0]))
def test_derivative_property(a, sign):
    x = sign * a
    d = step_derivative(x)
    if abs(d) < 1e-3:
        return
    assert d == pytest.approx(central_difference(x), rel=1e-6)


def test_derivative_with_eps():
    p = MapParams(eps=0.25)
    for x in (0.4, 1.3, 7.0):
        assert step_derivative(x, p) == pytest.approx(central_difference(x, p), rel=1e-6)


# iterate ---------------------------------------------------------------------


def test_iterate_examples():
    tr = iterate(0.5, 2)
    assert tr.values[0] == 0.5
    assert tr.values[1] == pytest.approx(3.0, rel=1e-14)
    # step(3) = 1 - (sin(pi/3) 3/pi)^2 + 1/3
    assert tr.values[2] == pytest.approx(0.64941534374755338, rel=1e-14)
    assert not tr.terminated_early

    tr = iterate(0.7, 0)
    assert list(tr.values) == [0.7]


def test_iterate_tiny_start_alternates():
    v = iterate(5e-13, 4).values
    assert len(v) == 5
    for k in (1, 3):
        assert v[k] == pytest.approx(2e12, rel=1e-6)
    for k in (0, 2, 4):
        assert v[k] == pytest.approx(5e-13, rel=1e-3)


def test_iterate_tiny_start_matches_high_precision():
    v = iterate(5e-13, 4).values
    mp.dps = 50
    x = mpf(5e-13)
    for k in range(1, 5):
        x = mp_step(x)
        assert v[k] == pytest.approx(float(x), rel=1e-9)


@pytest.mark.parametrize("x0", [1e-6, 1e-9, 5e-13])
def test_two_step_near_return(x0):
    assert iterate(x0, 2).values[2] == pytest.approx(x0, rel=1e-2)


@given(st.floats(min_value=1e-6, max_value=100.0), st.integers(min_value=0, max_value=40))
def test_trajectory_reevaluates_bit_for_bit(x0, n):
    tr = iterate(x0, n)
    v = tr.values
    assert v[0] == x0
    assert np.all(np.isfinite(v)) and np.all(v != 0)
    for k in range(len(v) - 1):
        assert step(v[k]) == v[k + 1]


def test_iterate_truncates_on_overflow():
    tr = iterate(1e-300, 3, MapParams(eps=1e300))
    assert tr.terminated_early
    assert tr.failed_at == 0
    assert list(tr.values) == [1e-300]


def test_iterate_truncates_on_collapse():
    # eps = -1 at x = 1 gives 1 - 0 - 1 = 0
    tr = iterate(1.0, 5, MapParams(eps=-1.0))
    assert tr.terminated_early and tr.failed_at == 0
    assert list(tr.values) == [1.0]


def test_iterate_rejects_bad_input():
    with pytest.raises(ValidationError):
        iterate(0.5, -1)
    with pytest.raises(DomainError):
        iterate(0.0, 3)


def test_trajectory_is_read_only():
    tr = iterate(0.5, 3)
    with pytest.raises(ValueError):
        tr.values[0] = 1.0


# linearizations and Lyapunov functions -------------------------------------


def test_linear_small():
    assert linear_step_small(0.0) == 1.0
    assert abs(linear_step_small(1 / math.pi)) < 1e-15
    assert linear_step_small(0.1) == pytest.approx(0.90130395598910641, abs=1e-6)


def test_linear_small_fixed_points():
    disc = math.sqrt(1 + 4 * math.pi**2)
    for root in ((-1 + disc) / (2 * math.pi**2), (-1 - disc) / (2 * math.pi**2)):
        assert abs(linear_step_small(root) - root) <= 1e-12
    assert (-1 + disc) / (2 * math.pi**2) == pytest.approx(0.27165552506721890, rel=1e-14)


def test_linear_large():
    assert linear_step_large(0.0) == 0.0
    assert linear_step_large(1.0) == pytest.approx(1.6449340668482264, abs=1e-6)
    assert linear_step_large(6 / math.pi**2) == pytest.approx(1.0, rel=1e-15)
    assert dyn.LARGE_X_EXPONENT == pytest.approx(0.49770030247074535, rel=1e-15)


def test_lyapunov_function_small():
    assert lyapunov_function_small(0.0, LyapunovFunctionParams(c1=2.5)) == 2.5
    assert lyapunov_function_small(1.0) == pytest.approx(0.037258762247541241, rel=1e-14)
    assert lyapunov_function_small(0.2) > lyapunov_function_small(0.4) > lyapunov_function_small(0.8)
    assert lyapunov_function_small(-10.0) == math.inf


@given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
def test_lyapunov_function_small_decreases_on_unit_interval(a, b):
    x, x2 = min(a, b), max(a, b)
    assert lyapunov_function_small(x) >= lyapunov_function_small(x2)


@given(finite, st.floats(min_value=1e-3, max_value=1e3))
def test_lyapunov_function_small_positive(x, c1):
    if abs(x) > 5:
        return  # exp under/overflows outside this window
    assert lyapunov_function_small(x, LyapunovFunctionParams(c1=c1)) > 0


def test_lyapunov_function_large():
    assert lyapunov_function_large(0, LyapunovFunctionParams(c2=3.0)) == 3.0
    assert lyapunov_function_large(1) == pytest.approx(1.6449340668482264, abs=1e-6)
    assert lyapunov_function_large(2) == pytest.approx(2.7058080842778455, abs=1e-6)
    with pytest.raises(ValidationError):
        lyapunov_function_large(-1)
