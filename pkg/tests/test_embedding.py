"""Embedding machinery: growth dichotomy, near-zero modification,
Sobolev conjugate, and the derived quasinorm generators."""

import math

import numpy as np
import pytest

from orliczpde.anisotropic import SplitPhi
from orliczpde.embedding import (
    DichotomyError,
    GaugeModifiedPhi,
    classify_integral,
    hat_phi_circ,
    modify_near_zero,
    near_zero_diverges,
    sobolev_conjugate,
)
from orliczpde.young import PowerLogYoung, PowerYoung


@pytest.mark.parametrize("a,n,verdict", [
    (PowerYoung(1.5), 2, "divergent"),       # p < n
    (PowerYoung(3), 2, "convergent"),        # p > n
    (PowerYoung(2), 2, "divergent"),         # p = n, no log
    (PowerYoung(2.5), 3, "divergent"),
    (PowerYoung(4), 3, "convergent"),
])
def test_dichotomy_powers(a, n, verdict):
    assert classify_integral(a, n) == verdict


@pytest.mark.parametrize("alpha,verdict", [
    (0.5, "divergent"),   # integrand ~ 1/(t log^{1/2} t)
    (2.0, "convergent"),  # integrand ~ 1/(t log^2 t)
    (1.0, "divergent"),   # borderline: partial tails still grow
])
def test_dichotomy_log_critical(alpha, verdict):
    a = PowerLogYoung(2.0, alpha).ensure_convex()
    assert classify_integral(a, 2) == verdict


def test_near_zero_divergence_and_modification():
    assert not near_zero_diverges(PowerYoung(1.5), 2)
    assert near_zero_diverges(PowerYoung(4), 2)
    same, rec = modify_near_zero(PowerYoung(1.5), n=2)
    assert not rec.applied
    a = PowerYoung(4)
    mod, rec = modify_near_zero(a, n=2)
    assert rec.applied
    # linear near zero, untouched above the knot
    assert mod.value(0.25) / 0.25 == pytest.approx(mod.value(0.5) / 0.5,
                                                   rel=1e-12)
    assert mod.value(2.0) == pytest.approx(a.value(2.0), rel=1e-12)
    assert not near_zero_diverges(mod, 2)


def test_gauge_modification_vector():
    phi = SplitPhi([PowerYoung(2), PowerYoung(4)])
    mod, rec = modify_near_zero(phi)
    assert rec.applied
    assert isinstance(mod, GaugeModifiedPhi)
    xi = np.array([0.9, 0.4])  # a point strictly inside {Phi <= 1}
    lam = 1.0 / math.sqrt(float(phi.value(xi)))
    boundary = xi * (1.0 + 0.0)
    # 1-homogeneous along rays inside the unit sublevel set
    g1 = float(mod.value(0.5 * xi))
    g2 = float(mod.value(0.25 * xi))
    assert g1 == pytest.approx(2.0 * g2, rel=1e-6)
    # dominates Phi inside (convexity through the level set)
    assert g1 >= float(phi.value(0.5 * xi)) - 1e-12
    # equals Phi far outside
    far = 10.0 * xi
    assert float(mod.value(far)) == pytest.approx(float(phi.value(far)),
                                                  rel=1e-12)


def test_sobolev_conjugate_refuses_convergent():
    with pytest.raises(DichotomyError):
        sobolev_conjugate(PowerYoung(3), 2)
    with pytest.raises(DichotomyError):
        hat_phi_circ(PowerYoung(3), 2)


def test_h_closed_form_for_powers():
    # For Phi_circ = t^p with p < n (no modification needed):
    # H(t) = ( t^{e+1} / (e+1) )^{(n-1)/n},  e = (1-p)/(n-1)
    for p, n in [(1.5, 2), (2.0, 3)]:
        prof = sobolev_conjugate(PowerYoung(p), n)
        assert not prof.modification.applied
        e = (1.0 - p) / (n - 1.0)
        for t in (1e-2, 1.0, 1e3):
            expected = (t ** (e + 1.0) / (e + 1.0)) ** ((n - 1.0) / n)
            got = math.exp(float(prof.H.log_value(math.log(t))))
            assert got == pytest.approx(expected, rel=2e-3)


def test_profile_defining_identities():
    prof = sobolev_conjugate(PowerYoung(1.5), 2)
    np_prime = prof.n_prime
    for t in (1.0, 50.0, 2000.0):
        log_phi_n = float(prof.phi_n.log_value(math.log(t) / np_prime *
                                               np_prime))
        # vartheta_n(t) = Phi_n(t^{1/n'}) / t
        vt = float(prof.vartheta_n.log_value(math.log(t)))
        assert vt == pytest.approx(
            float(prof.phi_n.log_value(math.log(t) / np_prime)) -
            math.log(t), abs=1e-9)
        # varrho_n(t) = t / Phi_n^{-1}(t)^{n'}
        vr = float(prof.varrho_n.log_value(math.log(t)))
        inv = float(prof.phi_n.inverse(t))
        assert vr == pytest.approx(math.log(t) - np_prime * math.log(inv),
                                   abs=1e-6)


def test_phi_n_composition():
    # Phi_n(H(t)) = Phi_circ(t) by construction
    prof = sobolev_conjugate(PowerYoung(1.5), 2)
    for t in (0.1, 1.0, 100.0):
        s = math.exp(float(prof.H.log_value(math.log(t))))
        got = math.exp(float(prof.phi_n.log_value(math.log(s))))
        assert got == pytest.approx(t ** 1.5, rel=1e-6)


def test_modification_recorded_for_steep_input():
    prof = sobolev_conjugate(PowerYoung(1.9), 2)
    # p > n' = 2? no: near-zero diverges iff (1-p)/(n-1) < -1, i.e. p > 2
    assert not prof.modification.applied
    prof = sobolev_conjugate(PowerLogYoung(2.0, 0.5).ensure_convex(), 2)
    assert prof.modification.applied


def test_hat_target_power_case():
    # for Phi = t^p the nested quadrature collapses to a t^p-equivalent
    # density: int_R^infty I^{-n} phi^{-n/(n-1)} ~ R^{1-n} exactly
    for p, n in [(1.5, 2), (2.0, 3)]:
        hat = hat_phi_circ(PowerYoung(p), n)
        lt = np.linspace(hat.log_t[0] + 2.0, hat.log_t[-1] - 2.0, 50)
        slope = np.polyfit(lt, hat.log_value(lt), 1)[0]
        assert slope == pytest.approx(p, rel=0.05)


def test_exp_regime_profile_is_finite():
    # p = n: Phi_n grows exponentially; the profile must stay
    # representable in log coordinates over an extreme range
    prof = sobolev_conjugate(PowerYoung(2), 2, log_t_hi=1000.0,
                             n_points=4096)
    top = float(prof.H.log_value(999.0))
    assert np.isfinite(top)
    assert float(prof.phi_n.log_value(top)) > 100.0
