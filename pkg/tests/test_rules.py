import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetaquad import (
    CapabilityError,
    DomainError,
    Integrand,
    PRESETS,
    PolynomialFunction,
    RuleSpec,
    ValidationError,
    apply_rule,
    correction_sum,
    perturbation_term,
    preset,
)

thetas = st.floats(min_value=0.0, max_value=1.0)


def spec(theta, n, a=0.0, b=1.0):
    return RuleSpec(theta=theta, n=n, a=a, b=b)


def monomial(degree, a=0.0, b=1.0):
    coeffs = (0.0,) * degree + (1.0,)
    return PolynomialFunction(coeffs).integrand(a, b)


# ---------------------------------------------------------------- presets


def test_preset_table():
    assert PRESETS == {
        "midpoint": 0.0,
        "trapezoid": 1.0,
        "simpson": pytest.approx(1.0 / 3.0),
        "averaged": 0.5,
    }
    assert preset("simpson") == 1.0 / 3.0


def test_unknown_preset_rejected():
    with pytest.raises(ValidationError):
        preset("gauss")


# ---------------------------------------------------------------- integrands


def test_integrand_validates_order_and_domain():
    f = Integrand(derivative_fn=lambda k, x: math.exp(x), domain=(0.0, 1.0))
    assert f.eval_derivative(0, 0.5) == pytest.approx(math.exp(0.5))
    with pytest.raises(ValidationError):
        f.eval_derivative(-1, 0.5)
    with pytest.raises(DomainError):
        f.eval_derivative(0, 2.0)


def test_integrand_order_cap_is_enforced():
    f = Integrand(
        derivative_fn=lambda k, x: float(k), domain=(0.0, 1.0), max_order=2
    )
    assert f.eval_derivative(2, 0.5) == 2.0
    with pytest.raises(CapabilityError):
        f.eval_derivative(3, 0.5)


def test_integrand_from_callables():
    f = Integrand.from_callables(
        [lambda x: x * x, lambda x: 2.0 * x, lambda x: 2.0], (0.0, 1.0)
    )
    assert f.eval_derivative(1, 0.25) == 0.5
    assert f.max_order == 2
    with pytest.raises(CapabilityError):
        f.eval_derivative(3, 0.0)


# ---------------------------------------------------------------- base rule


@given(thetas)
def test_base_rule_blends_midpoint_and_trapezoid(theta):
    f = monomial(1)  # f(x) = x
    res = apply_rule(f, spec(theta, 1))
    # for f(x) = x both the midpoint and trapezoid values equal 1/2
    assert res.base_value == pytest.approx(0.5, abs=1e-15)
    assert res.correction_terms == ()
    assert res.f_n_value == pytest.approx(0.5, abs=1e-15)


def test_base_weights_visible_on_asymmetric_function():
    f = monomial(2)  # x^2 on [0, 1]: midpoint gives 1/4, trapezoid 1/2
    for theta in (0.0, 0.25, 0.5, 1.0):
        res = apply_rule(f, spec(theta, 1))
        assert res.base_value == pytest.approx(
            (1.0 - theta) * 0.25 + theta * 0.5, abs=1e-15
        )


def test_cubic_with_trapezoid_correction_frozen():
    """x^3 on [0,1] at theta = 1, n = 3: the endpoint correction kicks in."""
    res = apply_rule(monomial(3), spec(1.0, 3))
    assert res.base_value == pytest.approx(0.5, abs=1e-15)
    assert len(res.correction_terms) == 1
    assert res.correction_terms[0] == pytest.approx(-0.25, abs=1e-15)
    assert res.f_n_value == pytest.approx(0.25, abs=1e-15)
    assert res.perturbation_term is None


def test_correction_count_grows_with_order():
    f = PolynomialFunction((0.0,) * 8 + (1.0,)).integrand(0.0, 1.0)
    for n in range(1, 9):
        terms = correction_sum(f, spec(0.9, n))
        assert len(terms) == (n - 1) // 2


def test_correction_needs_enough_derivatives():
    f = Integrand(
        derivative_fn=lambda k, x: 1.0, domain=(0.0, 1.0), max_order=1
    )
    with pytest.raises(CapabilityError):
        apply_rule(f, spec(0.5, 4))  # needs the second derivative at the midpoint


# ---------------------------------------------------------------- exactness


@given(thetas, st.integers(min_value=1, max_value=8))
@settings(max_examples=60, deadline=None)
def test_polynomials_below_the_order_are_integrated_exactly(theta, n):
    for degree in range(n):
        res = apply_rule(monomial(degree), spec(theta, n))
        assert res.f_n_value == pytest.approx(1.0 / (degree + 1), abs=1e-12)


@given(thetas, st.integers(min_value=0, max_value=3))
@settings(max_examples=40, deadline=None)
def test_degree_n_exact_when_n_is_odd(theta, i):
    n = 2 * i + 1
    res = apply_rule(monomial(n), spec(theta, n))
    assert res.f_n_value == pytest.approx(1.0 / (n + 1), abs=1e-12)


@given(thetas, st.integers(min_value=1, max_value=4))
@settings(max_examples=40, deadline=None)
def test_degree_n_exact_when_n_is_even_after_perturbation(theta, m):
    n = 2 * m
    res = apply_rule(monomial(n), spec(theta, n))
    assert res.perturbation_term is not None
    assert res.f_n_value + res.perturbation_term == pytest.approx(
        1.0 / (n + 1), abs=1e-12
    )


# ---------------------------------------------------------------- perturbation


@pytest.mark.parametrize(
    "theta,expected",
    [(0.0, 1.0 / 12.0), (1.0 / 3.0, 0.0), (1.0, -1.0 / 6.0)],
)
def test_perturbation_for_x_squared_frozen(theta, expected):
    value = perturbation_term(monomial(2), spec(theta, 2))
    assert value == pytest.approx(expected, abs=1e-15)


def test_perturbation_rejected_for_odd_orders():
    with pytest.raises(ValidationError):
        perturbation_term(monomial(3), spec(0.5, 3))


def test_apply_rule_keeps_perturbation_out_of_the_plain_value():
    res = apply_rule(monomial(2), spec(0.0, 2))
    assert res.f_n_value == pytest.approx(0.25, abs=1e-15)  # pure midpoint
    assert res.perturbation_term == pytest.approx(1.0 / 12.0, abs=1e-15)


@given(thetas)
def test_perturbation_vanishes_when_endpoint_slopes_agree(theta):
    # (x - 1/2)^3 + 1 has equal first derivatives at the endpoints, so the
    # mean of f'' over the interval is zero and the perturbation drops out.
    f = PolynomialFunction((7.0 / 8.0, 3.0 / 4.0, -3.0 / 2.0, 1.0)).integrand(
        0.0, 1.0
    )
    assert perturbation_term(f, spec(theta, 2)) == pytest.approx(0.0, abs=1e-15)


# ---------------------------------------------------------------- result shape


def test_result_records_the_spec_it_was_built_from():
    s = spec(0.5, 2)
    res = apply_rule(monomial(2), s)
    assert res.spec == s
    assert res.f_n_value == pytest.approx(
        math.fsum((res.base_value, *res.correction_terms)), abs=1e-15
    )


@given(thetas, st.integers(min_value=1, max_value=6))
@settings(max_examples=40, deadline=None)
def test_odd_orders_never_carry_a_perturbation(theta, n):
    f = PolynomialFunction(tuple(range(1, 9))).integrand(0.0, 1.0)
    res = apply_rule(f, spec(theta, n))
    if n % 2 == 1:
        assert res.perturbation_term is None
    else:
        assert res.perturbation_term is not None
