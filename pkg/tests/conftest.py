"""Shared helpers for the test suite."""

import numpy as np

from orliczpde.young import psi_of, theta_diamond


def calculus_identity_errors(a, ts):
    """Max errors for the five calculus identities of a scalar Young
    function A with conjugate conj, Theta(t) = conj^{-1}(A(t)) and
    Psi(t) = A(t)/t:

      (i)   A(Theta^{-1}(t))        == conj(t)
      (ii)  A(Theta^{-1}(Theta(t))) == A(t)
      (iii) A^{-1}(t Psi^{-1}(t))   == Psi^{-1}(t)
      (iv)  Theta(Psi^{-1}(t))      <= 2 t
      (v)   A(Psi^{-1}(t/2)) <= conj(t) <= A(Psi^{-1}(t))

    Returns a dict of relative errors (i-iii) and relative slack
    violations (iv-v), each maximized over ``ts``.
    """
    conj = a.conjugate()
    th = theta_diamond(a)
    psi = psi_of(a)

    def rel(x, y):
        return abs(x - y) / max(abs(x), abs(y), 1e-12)

    def overshoot(lhs, rhs):
        # positive part of (lhs - rhs) / rhs, i.e. how far lhs exceeds rhs
        return max(lhs - rhs, 0.0) / max(rhs, 1e-12)

    errs = {k: 0.0 for k in ("i", "ii", "iii", "iv", "v_lo", "v_hi")}
    for t in np.asarray(ts, dtype=float):
        t = float(t)
        ct = float(conj.value(t))
        errs["i"] = max(errs["i"], rel(float(a.value(th.inverse(t))), ct))
        at = float(a.value(t))
        errs["ii"] = max(errs["ii"],
                         rel(float(a.value(th.inverse(float(th(t))))), at))
        z = float(psi.inverse(t))
        if z > 0.0:
            errs["iii"] = max(errs["iii"],
                              rel(float(a.inverse(t * z)), z))
            errs["iv"] = max(errs["iv"], overshoot(float(th(z)), 2.0 * t))
            errs["v_hi"] = max(errs["v_hi"], overshoot(ct, float(a.value(z))))
        z_half = float(psi.inverse(0.5 * t))
        errs["v_lo"] = max(errs["v_lo"],
                           overshoot(float(a.value(z_half)), ct))
    return errs
