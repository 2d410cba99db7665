"""Several-variable Young functions: sublevel measures, radial
averages, biconjugates, and the derived calculus identities."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import calculus_identity_errors
from orliczpde.anisotropic import (
    BoundBoxError,
    CustomPhi,
    LinearCombinationPhi,
    RadialPhi,
    SplitPhi,
    dilation_constants,
    from_json,
    phi_circ,
    phi_diamond,
    sublevel_measure,
    theta,
    unit_ball_volume,
    vector_conjugate_grid,
)
from orliczpde.young import (
    ExpMinusLinearYoung,
    ExpMinusOneYoung,
    ExpPowerYoung,
    PowerLogYoung,
    PowerYoung,
    SampledYoungFunction,
    YoungFunctionError,
    parse_scalar_function,
)


def test_unit_ball_volume():
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0,
                                                rel=1e-14)


def test_radial_measure_closed_form():
    phi = RadialPhi(3, PowerYoung(2))
    for t in (0.5, 4.0, 1e4):
        expected = unit_ball_volume(3) * t**1.5
        assert sublevel_measure(phi, t) == pytest.approx(expected, rel=1e-12)
        assert sublevel_measure(phi, t, method="star") == pytest.approx(
            expected, rel=1e-6)


def test_split_measure_against_quadrature_oracle():
    # |{x^2 + y^4 <= t}| = 4 * int_0^{t^{1/4}} sqrt(t - y^4) dy
    phi = SplitPhi([PowerYoung(2), PowerYoung(4)])
    for t in (1.0, 1e4, 1e12):
        oracle, err = quad(lambda y: 4.0 * math.sqrt(max(t - y**4, 0.0)),
                           0.0, t**0.25, limit=200)
        assert sublevel_measure(phi, t) == pytest.approx(oracle, rel=1e-9)
    assert sublevel_measure(phi, 1e4, method="star") == pytest.approx(
        sublevel_measure(phi, 1e4), rel=1e-5)


def test_split_measure_scaling_is_exact():
    # the (2,4) split measure is exactly homogeneous: m(t) = C t^{3/4}
    phi = SplitPhi([PowerYoung(2), PowerYoung(4)])
    m1 = sublevel_measure(phi, 1e4)
    m2 = sublevel_measure(phi, 1e12)
    assert m2 / m1 == pytest.approx(1e8**0.75, rel=1e-10)


def test_linear_combination_shear_measure():
    # (x - y)^2 + x^2 is a unimodular shear of u^2 + v^2: measure pi t
    phi = LinearCombinationPhi(2, [([1.0, -1.0], PowerYoung(2)),
                                   ([1.0, 0.0], PowerYoung(2))])
    for t in (1.0, 100.0):
        assert sublevel_measure(phi, t) == pytest.approx(math.pi * t,
                                                         rel=1e-10)
        assert sublevel_measure(phi, t, method="star") == pytest.approx(
            math.pi * t, rel=1e-6)


def test_rank_deficient_rows_rejected():
    with pytest.raises(YoungFunctionError):
        LinearCombinationPhi(2, [([1.0, 0.0], PowerYoung(2)),
                                 ([2.0, 0.0], PowerYoung(2))])


def test_unbounded_sublevel_raises():
    # depends on x only: the sublevel set is an unbounded strip
    phi = CustomPhi(2, lambda xi: xi[..., 0] ** 2, bound_radius=50.0)
    with pytest.raises(BoundBoxError):
        sublevel_measure(phi, 100.0, method="star")


def test_certify_rejects_odd_part():
    phi = CustomPhi(2, lambda xi: xi[..., 0] ** 2 + 0.1 * xi[..., 1])
    with pytest.raises(YoungFunctionError):
        phi.certify()


def test_phi_circ_radial_is_identity():
    a = PowerYoung(3)
    phi = RadialPhi(2, a)
    assert phi_circ(phi) is a


def test_phi_circ_split_slope():
    # measure C t^{3/4} in the plane gives Phi_circ(r) ~ r^{8/3}
    phi = SplitPhi([PowerYoung(2), PowerYoung(4)])
    circ = phi_circ(phi, t_lo=1e-2, t_hi=1e8, n_levels=128)
    lt = np.linspace(circ.log_t[0] + 1.0, circ.log_t[-1] - 1.0, 40)
    slope = np.polyfit(lt, circ.log_value(lt), 1)[0]
    assert slope == pytest.approx(8.0 / 3.0, rel=1e-3)


def test_phi_diamond_analytic_passthrough_and_dilation():
    a = PowerYoung(2, 0.5)
    assert phi_diamond(RadialPhi(2, a)) is a
    phi = SplitPhi([PowerYoung(2), PowerYoung(4)])
    circ = phi_circ(phi, t_lo=1e-2, t_hi=1e8, n_levels=128)
    diamond = phi_diamond(circ)
    assert isinstance(diamond, SampledYoungFunction)
    c1, c2 = dilation_constants(circ, diamond, t_lo=1.0, t_hi=1e3)
    assert 0.25 < c1 <= c2 < 4.0
    # the constants do certify the two-sided dilation bound
    for t in np.geomspace(1.0, 1e3, 12):
        d = float(diamond.value(t))
        assert float(circ.value(c1 * t)) <= d * (1.0 + 1e-6)
        assert d <= float(circ.value(c2 * t)) * (1.0 + 1e-6)


def test_theta_radial_power_closed_form():
    # For Phi = |xi|^2 / 2 (self-conjugate) Theta is the identity map
    phi = RadialPhi(2, PowerYoung(2, 0.5))
    th = theta(phi)
    xi = np.array([[0.3, 0.4], [3.0, 4.0]])
    assert np.allclose(th(xi), [0.5, 5.0], rtol=1e-9)


def test_vector_conjugate_radial_oracle():
    # conj of |xi|^2 is |eta|^2 / 4
    phi = RadialPhi(2, PowerYoung(2))
    got = vector_conjugate_grid(phi, np.array([1.0, 1.0]), t_cap=10.0)
    assert got == pytest.approx(0.5, rel=5e-3)


def test_from_json_forms():
    phi = from_json({"n": 2, "form": "split",
                     "terms": [{"kind": "power", "p": 2},
                               {"kind": "power", "p": 4}]})
    assert isinstance(phi, SplitPhi)
    phi = from_json({"n": 2, "form": "radial",
                     "term": {"kind": "power_log", "p": 2, "alpha": 1}})
    assert isinstance(phi, RadialPhi)
    with pytest.raises(YoungFunctionError):
        from_json({"n": 2, "form": "mystery"})
    with pytest.raises(YoungFunctionError):
        from_json({"n": 3, "form": "split",
                   "terms": [{"kind": "power", "p": 2}]})


@pytest.mark.parametrize("spec,t_lo,t_hi", [
    ("power:p=1.5", 1e-2, 1e3),
    ("power:p=2", 1e-2, 1e3),
    ("power:p=3", 1e-2, 1e3),
    ("power_log:p=2,alpha=1", 1e-2, 1e3),
    ("power_log:p=3,alpha=-0.5", 1e-2, 1e3),
    ("exp_minus_one", 1.5, 60.0),
    ("exp_minus_linear", 1.5, 60.0),
    ("exp_power:beta=1.5", 1.5, 15.0),
])
def test_calculus_identity_suite(spec, t_lo, t_hi):
    a = parse_scalar_function(spec)
    errs = calculus_identity_errors(a, np.geomspace(t_lo, t_hi, 20))
    assert errs["i"] <= 1e-8
    assert errs["ii"] <= 1e-8
    assert errs["iii"] <= 1e-8
    assert errs["iv"] <= 1e-9
    assert errs["v_lo"] <= 1e-9
    assert errs["v_hi"] <= 1e-9
