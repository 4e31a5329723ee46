"""Rademacher functions and the exact Khinchine enumeration."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fractl import khinchine_exact, rademacher_value
from fractl.rademacher import (
    MAX_TERMS,
    crude_lower_constant,
    gaussian_upper_constant,
    khinchine_survey,
    sign_sums,
    write_reports_csv,
)


@pytest.mark.parametrize("j,z,value", [
    (1, 0.25, 1), (1, 0.75, -1), (1, 0.0, 1), (1, 0.5, 1), (1, 0.5000001, -1),
    (2, 0.30, -1), (2, 0.10, 1), (3, 0.20, -1), (3, 0.0625, 1),
])
def test_values(j, z, value):
    assert rademacher_value(j, z) == value


@given(j=st.integers(2, 12), z=st.floats(0, 1, exclude_max=True))
def test_dilation(j, z):
    assert rademacher_value(j, z) == rademacher_value(1, (z * 2 ** (j - 1)) % 1.0)


def test_vectorised():
    z = np.array([0.1, 0.6, 0.9])
    assert rademacher_value(1, z).tolist() == [1, -1, -1]


@pytest.mark.parametrize("j,z", [(0, 0.1), (1.5, 0.1), (1, 1.0), (1, -0.1)])
def test_domain(j, z):
    with pytest.raises(ValueError):
        rademacher_value(j, z)


def midpoint_integral(c, p):
    """The z-integral from r_j evaluated at the midpoint of every dyadic cell."""
    n = len(c)
    z = (np.arange(2**n) + 0.5) / 2**n
    s = sum(cj * rademacher_value(j, z) for j, cj in enumerate(c, start=1))
    return float(np.mean(np.abs(s) ** p))


@pytest.mark.parametrize("n", range(1, 9))
def test_sign_sums_are_cell_values(n, rng):
    c = rng.standard_normal(n)
    z = (np.arange(2**n) + 0.5) / 2**n
    direct = sum(cj * rademacher_value(j, z) for j, cj in enumerate(c, start=1))
    np.testing.assert_allclose(sign_sums(c), direct, atol=1e-13)


@given(n=st.integers(1, 8), p=st.floats(1, 7), seed=st.integers(0, 9999))
def test_matches_midpoint_route(n, p, seed):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    assert khinchine_exact(c, p).integral == pytest.approx(midpoint_integral(c, p), rel=1e-12)


@pytest.mark.parametrize("n", range(1, 11))
def test_all_ones_p4(n):
    # E (sum eps_j)^4 = 3n(n-1) + n, checked against brute force over sign tuples
    brute = sum(sum(e) ** 4 for e in itertools.product((1, -1), repeat=n)) / 2**n
    rep = khinchine_exact(np.ones(n), 4)
    assert brute == 3 * n * n - 2 * n
    assert rep.integral == 3 * n * n - 2 * n


@pytest.mark.parametrize("n", [1, 5, 16])
def test_all_ones_p2(n):
    assert khinchine_exact(np.ones(n), 2).integral == n


@pytest.mark.parametrize("p", [1, 2.5, 6])
def test_single_term(p):
    rep = khinchine_exact([1.0, 0.0, 0.0], p)
    assert rep.integral == 1.0 == rep.lhs and rep.ratio_low == 1.0


@given(n=st.integers(1, 14), seed=st.integers(0, 99999))
def test_p2_exact(n, seed):
    rng = np.random.default_rng(seed)
    rep = khinchine_exact(rng.standard_normal(n) + 1j * rng.standard_normal(n), 2)
    assert abs(rep.ratio_low - 1) <= 1e-14


@given(n=st.integers(1, 10), p=st.floats(1, 6), re=st.floats(0.01, 100), im=st.floats(-100, 100),
       seed=st.integers(0, 999))
def test_scale_invariance(n, p, re, im, seed):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = khinchine_exact(c, p).ratio_low
    b = khinchine_exact(complex(re, im) * c, p).ratio_low
    assert b == pytest.approx(a, rel=1e-12)


@pytest.mark.parametrize("p", [4, 6])
def test_survey_inside_bounds(p):
    sv = khinchine_survey(p, 200, (2, 16), seed=p)
    assert sv.inside
    assert sv.lower_bound == crude_lower_constant(p) and sv.upper_bound == gaussian_upper_constant(p)
    # random Gaussian coefficients land well above 1 and below the Gaussian moment
    assert 1.0 <= sv.ratio_low <= sv.ratio_high <= math.prod(range(p - 1, 0, -2))


def test_limits():
    with pytest.raises(ValueError, match="at most"):
        khinchine_exact(np.ones(MAX_TERMS + 1), 2)
    with pytest.raises(ValueError):
        khinchine_exact(np.ones(3), 0.5)
    with pytest.raises(ValueError):
        khinchine_exact(np.ones((2, 2)), 2)


def test_csv(tmp_path):
    reports = [khinchine_exact(np.ones(n), 4) for n in (1, 2, 3)]
    write_reports_csv(tmp_path / "k.csv", reports)
    lines = (tmp_path / "k.csv").read_text().splitlines()
    assert lines[0] == "n,p,lhs,integral,ratio_low,ratio_high"
    assert lines[3].startswith("3,4.0,9.0,21.0")
