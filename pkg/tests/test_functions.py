import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetaquad import (
    BUILTIN_NAMES,
    Exponential,
    PolynomialFunction,
    Runge,
    Sine,
    ValidationError,
    parse_function,
)

INTERVALS = [(0.0, 1.0), (-1.0, 2.0)]


def central_difference(fn, order, x, h=1e-5):
    lo = fn.derivative(order - 1, x - h)
    hi = fn.derivative(order - 1, x + h)
    return (hi - lo) / (2.0 * h)


# ---------------------------------------------------------------- registry


def test_builtin_names():
    assert [name.split(":")[0] for name in BUILTIN_NAMES] == [
        "exp", "sin", "runge", "poly",
    ]


def test_parse_function_dispatch():
    assert isinstance(parse_function("exp"), Exponential)
    sine = parse_function("sin")
    assert isinstance(sine, Sine) and sine.omega == 1.0
    assert isinstance(parse_function("runge"), Runge)
    poly = parse_function("poly:1,0,2")
    assert isinstance(poly, PolynomialFunction)
    assert poly.coefficients == (1.0, 0.0, 2.0)


@pytest.mark.parametrize("text", ["", "exp2", "poly:", "poly:1,zebra", "sin(3x)"])
def test_parse_function_rejects_junk(text):
    with pytest.raises(ValidationError):
        parse_function(text)


# ---------------------------------------------------------------- derivatives


@pytest.mark.parametrize("order", range(1, 5))
def test_exponential_derivatives_are_exp(order):
    f = Exponential()
    assert f.derivative(order, 0.3) == pytest.approx(math.exp(0.3), rel=1e-14)


@pytest.mark.parametrize("order", range(1, 6))
@pytest.mark.parametrize("x", [-0.7, 0.0, 0.4, 1.9])
def test_sine_derivative_cycle(order, x):
    f = Sine(3.0)
    # d^k/dx^k sin(wx) = w^k sin(wx + k pi/2)
    expected = 3.0**order * math.sin(3.0 * x + order * math.pi / 2.0)
    assert f.derivative(order, x) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_sine_rejects_nonpositive_frequency():
    with pytest.raises(ValidationError):
        Sine(0.0)
    with pytest.raises(ValidationError):
        Sine(-2.0)


def test_runge_low_order_derivatives_by_hand():
    f = Runge()
    # f'(x) = -2x/(1+x^2)^2, f''(x) = (6x^2-2)/(1+x^2)^3
    assert f.derivative(1, 1.0) == pytest.approx(-0.5, rel=1e-13)
    assert f.derivative(2, 0.0) == pytest.approx(-2.0, rel=1e-13)
    assert f.derivative(0, 2.0) == pytest.approx(0.2, rel=1e-13)


@pytest.mark.parametrize("order", range(1, 7))
@pytest.mark.parametrize("x", [-0.9, -0.2, 0.5, 1.7])
def test_runge_derivative_ladder_is_consistent(order, x):
    """Each closed-form derivative must differentiate the one below it."""
    f = Runge()
    approx = central_difference(f, order, x)
    exact = f.derivative(order, x)
    assert exact == pytest.approx(approx, rel=5e-6, abs=5e-6)


@given(st.lists(st.floats(min_value=-4.0, max_value=4.0), min_size=1, max_size=7),
       st.floats(min_value=-1.0, max_value=2.0))
@settings(max_examples=60)
def test_polynomial_derivative_matches_term_by_term(coeffs, x):
    f = PolynomialFunction(tuple(coeffs))
    expected = math.fsum(
        c * k * x ** (k - 1) for k, c in enumerate(coeffs) if k >= 1
    )
    assert f.derivative(1, x) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_polynomial_derivatives_vanish_beyond_the_degree():
    f = PolynomialFunction((1.0, 2.0, 3.0))
    assert f.derivative(3, 0.7) == 0.0
    assert f.derivative(9, -2.0) == 0.0


# ---------------------------------------------------------------- metadata
# The exact norm and band values below were re-derived by hand for the test;
# adaptive quadrature cross-checks of the same numbers live in the
# integration-level suite.


def test_exponential_norms_unit_interval():
    nd = Exponential().norm_data(1, 0.0, 1.0)
    assert nd.l1 == pytest.approx(math.e - 1.0, rel=1e-13)
    assert nd.linf == pytest.approx(math.e, rel=1e-13)
    assert nd.l2 == pytest.approx(math.sqrt((math.e**2 - 1.0) / 2.0), rel=1e-13)
    assert nd.endpoint_diff_rate == pytest.approx(math.e - 1.0, rel=1e-13)
    assert nd.provenance == "exact"


def test_exponential_band_is_monotone_range():
    band = Exponential().band(2, -1.0, 2.0)
    assert band.gamma == pytest.approx(math.exp(-1.0), rel=1e-13)
    assert band.Gamma == pytest.approx(math.exp(2.0), rel=1e-13)


def test_sine_l2_closed_form():
    nd = Sine(3.0).norm_data(1, 0.0, 1.0)
    # ||3 cos 3x||_2^2 = 9/2 + (3/4) sin 6 on [0, 1]
    assert nd.l2**2 == pytest.approx(4.5 + 0.75 * math.sin(6.0), rel=1e-12)


def test_sine_sup_hits_interior_peak():
    # 3cos(3x) on [0, 1]: |cos| peaks at x = 0 only, but on [-1, 2] the
    # peak |cos(3x)| = 1 at x = 0 and x = pi/3 is interior
    nd = Sine(3.0).norm_data(1, -1.0, 2.0)
    assert nd.linf == pytest.approx(3.0, rel=1e-13)
    band = Sine(3.0).band(1, -1.0, 2.0)
    assert band.gamma == pytest.approx(-3.0, rel=1e-13)
    assert band.Gamma == pytest.approx(3.0, rel=1e-13)


def test_sine_l1_via_arch_areas():
    # integral of |3 cos 3x| over [0, pi]: three arches of area 2 each... the
    # interval [0, pi] contains exactly 3 half-periods of cos(3x)
    nd = Sine(3.0).norm_data(1, 0.0, math.pi)
    assert nd.l1 == pytest.approx(6.0, rel=1e-12)


def test_runge_first_derivative_norms():
    # f' = -2x/(1+x^2)^2 is nonpositive on [0, 1]: L1 telescopes to 1/2
    nd = Runge().norm_data(1, 0.0, 1.0)
    assert nd.l1 == pytest.approx(0.5, rel=1e-12)
    # sup at the stationary point x = 1/sqrt(3)
    assert nd.linf == pytest.approx(9.0 / (8.0 * math.sqrt(3.0)), rel=1e-12)


def test_runge_band_symmetric_on_wide_interval():
    band = Runge().band(1, -1.0, 2.0)
    peak = 9.0 / (8.0 * math.sqrt(3.0))
    assert band.Gamma == pytest.approx(peak, rel=1e-12)
    assert band.gamma == pytest.approx(-peak, rel=1e-12)


def test_runge_rate_is_exact():
    nd = Runge().norm_data(2, -1.0, 2.0)
    f = Runge()
    expected = (f.derivative(1, 2.0) - f.derivative(1, -1.0)) / 3.0
    assert nd.endpoint_diff_rate == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("a,b", INTERVALS)
@pytest.mark.parametrize("order", [1, 2, 3])
def test_sampled_values_respect_claimed_bounds(a, b, order):
    """Dense sampling can never contradict exact sup/band metadata."""
    for fn in (Exponential(), Sine(3.0), Runge(), PolynomialFunction((1.0, -1.0, 0.5, 2.0, -0.25, 0.125, 1.0))):
        nd = fn.norm_data(order, a, b)
        band = fn.band(order, a, b)
        xs = [a + (b - a) * i / 4000 for i in range(4001)]
        vals = [fn.derivative(order, x) for x in xs]
        top = max(abs(v) for v in vals)
        assert top <= nd.linf * (1.0 + 1e-12) + 1e-12
        # the sampled maximum should come close to the exact one
        assert top >= nd.linf * (1.0 - 1e-3) - 1e-9
        assert min(vals) >= band.gamma - 1e-12
        assert max(vals) <= band.Gamma + 1e-12


@pytest.mark.parametrize("a,b", INTERVALS)
def test_norm_interrelations(a, b):
    width = b - a
    for fn in (Exponential(), Sine(3.0), Runge()):
        for order in (1, 2, 4):
            nd = fn.norm_data(order, a, b)
            assert nd.l1 <= nd.linf * width * (1.0 + 1e-12)
            assert nd.l2**2 <= nd.linf * nd.l1 * (1.0 + 1e-12)
            assert nd.l1 <= nd.l2 * math.sqrt(width) * (1.0 + 1e-12)
            assert nd.sigma <= nd.l2**2 * (1.0 + 1e-12)
            assert abs(nd.endpoint_diff_rate) * width <= nd.l1 * (1.0 + 1e-12)


def test_polynomial_metadata_against_direct_integration():
    f = PolynomialFunction((0.0, 0.0, 1.0))  # x^2
    nd = f.norm_data(1, 0.0, 1.0)  # derivative: 2x on [0, 1]
    assert nd.l1 == pytest.approx(1.0, rel=1e-13)
    assert nd.linf == pytest.approx(2.0, rel=1e-13)
    assert nd.l2 == pytest.approx(math.sqrt(4.0 / 3.0), rel=1e-13)
    # mean of 2x over [0, 1]: (f(1) - f(0)) / (1 - 0)
    assert nd.endpoint_diff_rate == pytest.approx(1.0, rel=1e-13)
    # variance of 2x around its mean 1: integral (2x-1)^2 = 1/3
    assert nd.sigma == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_polynomial_band_covers_negative_dips():
    f = PolynomialFunction((0.0, 0.0, -1.0, 1.0))  # x^3 - x^2
    band = f.band(1, 0.0, 1.0)  # derivative 3x^2 - 2x dips to -1/3 at x=1/3
    assert band.gamma == pytest.approx(-1.0 / 3.0, rel=1e-12)
    assert band.Gamma == pytest.approx(1.0, rel=1e-12)


def test_order_zero_metadata_is_rejected():
    with pytest.raises(ValidationError):
        Exponential().norm_data(0, 0.0, 1.0)
    with pytest.raises(ValidationError):
        Runge().band(0, 0.0, 1.0)


def test_integrand_handles_arbitrary_orders():
    f = Runge().integrand(0.0, 1.0)
    assert f.max_order is None
    assert f.eval_derivative(7, 0.3) == pytest.approx(
        central_difference(Runge(), 7, 0.3), rel=1e-4, abs=1e-2
    )
