"""Scalar Young-function calculus: conjugation, inequalities, growth."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orliczpde.young import (
    ExpMinusLinearYoung,
    ExpMinusOneYoung,
    ExpPowerYoung,
    LegendreConjugate,
    LinearSplicedYoung,
    PowerLogYoung,
    PowerYoung,
    SampledYoungFunction,
    YoungFunctionError,
    check_growth_condition,
    parse_scalar_function,
    psi_of,
    theta_diamond,
)


def test_power_conjugate_closed_form():
    # sup_t (s t - t^3) at t = sqrt(s/3): value = (2 / (3 sqrt(3))) s^{3/2}
    a = PowerYoung(3)
    conj = a.conjugate()
    s = np.geomspace(1e-2, 1e4, 64)
    expected = (2.0 / (3.0 * math.sqrt(3.0))) * s**1.5
    assert np.allclose(conj.value(s), expected, rtol=1e-12)


def test_half_square_is_self_conjugate():
    a = PowerYoung(2, 0.5)
    conj = a.conjugate()
    s = np.geomspace(1e-3, 1e3, 50)
    assert np.allclose(conj.value(s), 0.5 * s**2, rtol=1e-12)


def test_exp_minus_one_conjugate_closed_form():
    conj = ExpMinusOneYoung().conjugate()
    s = np.geomspace(1.0 + 1e-6, 1e3, 40)
    expected = s * np.log(s) - s + 1.0
    assert np.allclose(conj.value(s), expected, rtol=1e-8)


def test_exp_minus_linear_pair():
    # (1+s)log(1+s) - s is the conjugate of e^t - 1 - t
    conj = ExpMinusLinearYoung().conjugate()
    s = np.geomspace(1e-2, 1e3, 40)
    expected = (1.0 + s) * np.log(1.0 + s) - s
    assert np.allclose(conj.value(s), expected, rtol=1e-8)


@settings(max_examples=25, deadline=None)
@given(p=st.floats(1.2, 5.0), log_t=st.floats(-2.0, 3.0))
def test_biconjugation_is_identity(p, log_t):
    a = PowerYoung(p)
    biconj = LegendreConjugate(LegendreConjugate(a))
    t = math.exp(log_t)
    assert biconj.value(t) == pytest.approx(a.value(t), rel=1e-6)


@pytest.mark.parametrize("spec", [
    "power:p=1.5", "power:p=3", "power_log:p=2,alpha=1",
    "exp_minus_one", "exp_minus_linear", "exp_power:beta=1.5",
])
def test_inverse_product_inequality(spec):
    # t <= A^{-1}(t) conj^{-1}(t) <= 2t for every Young function
    a = parse_scalar_function(spec)
    conj = a.conjugate()
    for t in np.geomspace(1e-2, 1e3, 25):
        prod = float(a.inverse(t)) * float(conj.inverse(t))
        assert prod >= t * (1.0 - 1e-9)
        assert prod <= 2.0 * t * (1.0 + 1e-9)


@settings(max_examples=40, deadline=None)
@given(p=st.floats(1.3, 4.0), log_s=st.floats(-2.0, 2.0),
       log_t=st.floats(-2.0, 2.0))
def test_young_inequality(p, log_s, log_t):
    a = PowerYoung(p)
    conj = a.conjugate()
    s, t = math.exp(log_s), math.exp(log_t)
    assert s * t <= (a.value(s) + conj.value(t)) * (1.0 + 1e-12)


def test_growth_verdicts():
    assert check_growth_condition(PowerYoung(3), "delta2")[0] == "holds"
    assert check_growth_condition(PowerYoung(3), "nabla2")[0] == "holds"
    assert check_growth_condition(ExpPowerYoung(1.0), "delta2")[0] == "fails"
    assert check_growth_condition(ExpPowerYoung(1.0), "nabla2")[0] == "holds"
    # t log(e+t): doubling but barely superlinear -> nabla2 fails
    near_linear = PowerLogYoung(1.0, 1.0)
    assert check_growth_condition(near_linear, "delta2")[0] == "holds"
    assert check_growth_condition(near_linear, "nabla2")[0] == "fails"


def test_sampled_round_trip(tmp_path):
    a = PowerLogYoung(2.0, 1.0).ensure_convex()
    tab = a.sample(1e-2, 1e4)
    t = np.geomspace(2e-2, 5e3, 100)
    assert np.allclose(tab.value(t), a.value(t), rtol=1e-4)
    path = tmp_path / "a.csv"
    tab.to_csv(path)
    back = SampledYoungFunction.from_csv(path)
    assert np.allclose(back.value(t), a.value(t), rtol=1e-4)


def test_sampled_inverse_consistency():
    a = PowerYoung(2.5)
    tab = a.sample(1e-2, 1e4)
    for t in np.geomspace(0.1, 100.0, 20):
        assert float(tab.inverse(tab.value(t))) == pytest.approx(t, rel=1e-4)


def test_repair_convexity_drops_bumps():
    # a point bumped above the convex envelope is dropped; the repaired
    # table interpolates back onto the exact power line
    log_t = np.linspace(0.0, 5.0, 40)
    tab = SampledYoungFunction(log_t, 2.0 * log_t)
    tab.log_v[20] += 0.5  # bump above the hull
    tab.repair_convexity()
    assert tab.log_value(log_t[20]) == pytest.approx(2.0 * log_t[20],
                                                     abs=1e-9)
    assert tab.check_second_differences()


def test_linear_splice_continuity():
    base = PowerYoung(2)
    spliced = LinearSplicedYoung(base, knot=1.0)
    assert spliced.value(1.0) == pytest.approx(base.value(1.0), rel=1e-12)
    # linear below the knot
    t = np.linspace(0.05, 0.95, 10)
    assert np.allclose(spliced.value(t) / t, spliced.value(0.5) / 0.5,
                       rtol=1e-12)


def test_psi_and_theta_relations():
    a = PowerYoung(3)
    psi = psi_of(a)
    t = np.geomspace(0.1, 10.0, 9)
    assert np.allclose(psi.value(t), a.value(t) / t, rtol=1e-12)
    th = theta_diamond(a)
    # theta round-trips through its closed-form inverse
    for ti in t:
        assert float(th.inverse(float(th(ti)))) == pytest.approx(
            ti, rel=1e-8)


def test_parse_errors():
    with pytest.raises(YoungFunctionError):
        parse_scalar_function("nope:p=2")
    with pytest.raises(YoungFunctionError):
        PowerYoung(1.0)
    with pytest.raises(YoungFunctionError):
        ExpPowerYoung(0.5)


def test_log_domain_survives_extreme_range():
    a = PowerLogYoung(2.0, 0.5).ensure_convex()
    lv = a.log_value(np.array([500.0, 1000.0]))
    assert np.all(np.isfinite(lv))
    assert lv[1] > lv[0]
