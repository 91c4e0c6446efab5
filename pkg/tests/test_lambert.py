import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diodeprox.lambert import lambert_w0, lambert_w0_of_exp

# bisection on w*exp(w) - 10 over [1, 2] down to 1e-15
W_OF_10 = 1.745528002740699
# Newton on w + log(w) - 1000 from w = 1000 - log(1000)
W_OF_EXP_1000 = 993.0991694723891


def test_zero():
    assert lambert_w0(0.0) == 0.0


def test_e():
    assert lambert_w0(math.e) == pytest.approx(1.0, rel=1e-15)


def test_ten_matches_bisection():
    assert lambert_w0(10.0) == pytest.approx(W_OF_10, rel=1e-14)


def test_log_form_at_one():
    assert lambert_w0_of_exp(1.0) == pytest.approx(1.0, rel=1e-15)


def test_log_form_at_1000():
    assert lambert_w0_of_exp(1000.0) == pytest.approx(W_OF_EXP_1000, rel=1e-14)


def test_log_form_agrees_with_direct_at_ln10():
    assert lambert_w0_of_exp(math.log(10.0)) == pytest.approx(lambert_w0(10.0), rel=1e-12)


def test_huge_log_argument():
    w = lambert_w0_of_exp(1e4)
    assert w + math.log(w) == pytest.approx(1e4, rel=1e-15)


@pytest.mark.parametrize("bad", [-1e-3, -5.0, np.inf, np.nan])
def test_direct_domain_errors(bad):
    with pytest.raises(ValueError):
        lambert_w0(bad)


@pytest.mark.parametrize("bad", [np.inf, -np.inf, np.nan])
def test_log_domain_errors(bad):
    with pytest.raises(ValueError):
        lambert_w0_of_exp(bad)


def test_scalar_and_array_shapes():
    assert isinstance(lambert_w0(1.0), float)
    out = lambert_w0(np.ones((2, 3)))
    assert out.shape == (2, 3)
    assert isinstance(lambert_w0_of_exp(3.0), float)
    assert lambert_w0_of_exp(np.zeros(4)).shape == (4,)


def test_identity_over_600_decades():
    x = np.logspace(-300, 300, 10_000)
    w = lambert_w0(x)
    rel = np.abs(w * np.exp(w) - x) / x
    assert rel.max() <= 1e-12


def test_monotone_on_grid():
    x = np.logspace(-300, 300, 10_000)
    assert np.all(np.diff(lambert_w0(x)) > 0)


def test_log_form_consistency_band():
    y = np.linspace(-30.0, 700.0, 20_001)
    ref = lambert_w0(np.exp(y))
    assert np.max(np.abs(lambert_w0_of_exp(y) - ref) / (1.0 + ref)) <= 1e-12


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=1.0, max_value=1e6))
def test_log_form_identity(y):
    w = lambert_w0_of_exp(y)
    assert w > 0
    assert abs(w + math.log(w) - y) <= 1e-12 * max(1.0, y)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e300), st.floats(min_value=0.0, max_value=1e300))
def test_monotone_pairs(a, b):
    lo, hi = sorted((a, b))
    if lo < hi:
        assert lambert_w0(lo) <= lambert_w0(hi)
