"""Young functions of several variables and their radial averages.

An n-dimensional N-function Phi is even, convex, vanishes exactly at 0,
and has bounded sublevel sets.  The central construction here is the
"average in measure" Phi_circ: the radial Young function whose sublevel
balls have the same Lebesgue measure as the sublevel sets of Phi,

    omega_n * Phi_circ^{-1}(t)^n = |{xi : Phi(xi) <= t}|.

Sublevel sets of a convex function vanishing at 0 are convex, hence
star-shaped about the origin, so their measure is computed from the
radial extent R(w) of the boundary in direction w:

    |{Phi <= t}| = (1/n) * Int_{S^{n-1}} R(w)^n dw,

with R found by monotone bisection along each ray (vectorized over
directions) and the spherical integral done by tensor Gauss-Legendre
rules for n = 2, 3 and a scrambled Sobol direction set for n >= 4
(standard error reported).

Phi_diamond is the radial biconjugate of Phi_circ: conjugate twice in
the scalar radial variable; it is convex by construction and equivalent
to Phi_circ up to dilation, with measured dilation constants.

Theta(xi) = conj(Phi_diamond)^{-1}(Phi(xi)) is the vector companion
used by the gradient L^1 estimate.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma
from scipy.stats import qmc

from .young import (
    LegendreConjugate,
    MonotoneFunction,
    SampledYoungFunction,
    ScalarYoungFunction,
    YoungFunctionError,
    parse_scalar_function,
    theta_diamond,
)

__all__ = [
    "unit_ball_volume",
    "AnisotropicYoungFunction",
    "RadialPhi",
    "SplitPhi",
    "LinearCombinationPhi",
    "CustomPhi",
    "BoundBoxError",
    "sublevel_measure",
    "radial_extent",
    "phi_circ",
    "phi_diamond",
    "dilation_constants",
    "theta",
    "theta_function",
    "vector_conjugate_grid",
    "from_json",
]


def unit_ball_volume(n):
    """omega_n, the volume of the unit ball in R^n."""
    return math.pi ** (n / 2.0) / gamma(n / 2.0 + 1.0)


class BoundBoxError(YoungFunctionError):
    """Sublevel set reaches the declared evaluation box."""

    def __init__(self, message, suggested_radius=None):
        super().__init__(message)
        self.suggested_radius = suggested_radius


class AnisotropicYoungFunction:
    """Base: a convex even function on R^n with Phi(0) = 0.

    ``value`` accepts arrays shaped (..., n) and returns (...).
    ``bound_radius`` is the trusted evaluation radius (bound box).
    """

    form = "custom"

    def __init__(self, n, bound_radius=1e8):
        if n < 2:
            raise YoungFunctionError("dimension must be >= 2")
        self.n = int(n)
        self.bound_radius = float(bound_radius)

    def value(self, xi):
        raise NotImplementedError

    def __call__(self, xi):
        return self.value(xi)

    def certify(self, n_probes=200, seed=0, slack=1e-10):
        """Check evenness and segment convexity on random probes."""
        rng = np.random.default_rng(seed)
        xi = rng.standard_normal((n_probes, self.n))
        xi *= np.exp(rng.uniform(-2, 4, (n_probes, 1)))
        eta = rng.standard_normal((n_probes, self.n))
        eta *= np.exp(rng.uniform(-2, 4, (n_probes, 1)))
        v_xi, v_eta = self.value(xi), self.value(eta)
        if not np.allclose(self.value(-xi), v_xi, rtol=1e-10):
            raise YoungFunctionError(f"{self.form}: not even")
        mid = self.value(0.5 * (xi + eta))
        chord = 0.5 * (v_xi + v_eta)
        scale = np.maximum(chord, 1e-300)
        if np.any((mid - chord) / scale > slack):
            raise YoungFunctionError(f"{self.form}: midpoint convexity fails")
        if float(self.value(np.zeros(self.n))) != 0.0:
            raise YoungFunctionError(f"{self.form}: Phi(0) != 0")
        return self


class RadialPhi(AnisotropicYoungFunction):
    """Phi(xi) = A(|xi|) for a scalar Young function A."""

    form = "radial"

    def __init__(self, n, a: ScalarYoungFunction, bound_radius=1e8):
        super().__init__(n, bound_radius)
        self.a = a

    def value(self, xi):
        r = np.linalg.norm(np.asarray(xi, dtype=float), axis=-1)
        return self.a.value(r)


class SplitPhi(AnisotropicYoungFunction):
    """Phi(xi) = sum_i A_i(|xi_i|), one scalar Young function per axis."""

    form = "split"

    def __init__(self, terms, bound_radius=1e8):
        super().__init__(len(terms), bound_radius)
        self.terms = list(terms)

    def value(self, xi):
        xi = np.abs(np.asarray(xi, dtype=float))
        return sum(a.value(xi[..., i]) for i, a in enumerate(self.terms))


class LinearCombinationPhi(AnisotropicYoungFunction):
    """Phi(xi) = sum_k A_k(|c_k . xi|) for coefficient rows c_k.

    When the number of terms equals n and the coefficient matrix M is
    invertible, sublevel sets are linear images of those of the split
    form, so the measure gains a factor 1/|det M| (used as an oracle in
    tests; the generic star-shaped path handles it without this fact).
    """

    form = "linear_combination"

    def __init__(self, n, rows, bound_radius=1e8):
        super().__init__(n, bound_radius)
        self.coeffs = np.asarray([c for c, _ in rows], dtype=float)
        self.terms = [a for _, a in rows]
        if self.coeffs.shape[1] != n:
            raise YoungFunctionError("coefficient rows must have length n")
        if np.linalg.matrix_rank(self.coeffs) < n:
            raise YoungFunctionError(
                "coefficient rows must span R^n (else sublevel sets are "
                "unbounded)"
            )

    def value(self, xi):
        xi = np.asarray(xi, dtype=float)
        y = np.abs(xi @ self.coeffs.T)
        return sum(a.value(y[..., k]) for k, a in enumerate(self.terms))


class CustomPhi(AnisotropicYoungFunction):
    form = "custom"

    def __init__(self, n, fn, bound_radius=1e8):
        super().__init__(n, bound_radius)
        self._fn = fn

    def value(self, xi):
        return self._fn(np.asarray(xi, dtype=float))


# ---------------------------------------------------------------------
# sublevel measure via star-shaped radial extent


def radial_extent(phi, directions, t, rtol=1e-12, maxiter=200):
    """R(w) with Phi(R(w) w) = t for each unit direction w, vectorized.

    Phi is nondecreasing along rays from 0 (convexity + Phi(0)=0), so a
    single bisection bracket serves all directions at once.
    """
    w = np.asarray(directions, dtype=float)
    m = w.shape[0]
    lo = np.zeros(m)
    hi = np.ones(m)
    for _ in range(200):
        too_low = phi.value(hi[:, None] * w) <= t
        if not np.any(too_low):
            break
        hi[too_low] *= 2.0
        if np.any(hi > phi.bound_radius):
            raise BoundBoxError(
                f"sublevel set at t={t} reaches the bound box "
                f"(radius {phi.bound_radius:g})",
                suggested_radius=4.0 * phi.bound_radius,
            )
    else:
        raise BoundBoxError(f"sublevel set at t={t} appears unbounded")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        inside = phi.value(mid[:, None] * w) <= t
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
        if np.max((hi - lo) / np.maximum(hi, 1e-300)) < rtol:
            break
    return 0.5 * (lo + hi)


def _sphere_rule(n, level, seed=0):
    """Directions and weights integrating over S^{n-1} exactly enough.

    n=2: midpoint rule in angle on a quarter circle (evenness) — the
    integrand R(w)^n is smooth and periodic, so this converges fast.
    n=3: product Gauss-Legendre in cos(polar) x uniform azimuthal.
    n>=4: scrambled Sobol points mapped through the Gaussian to uniform
    sphere directions; weights sum to the sphere area.
    """
    if n == 2:
        m = 64 * 2**level
        th = (np.arange(m) + 0.5) * (2.0 * math.pi / m)
        w = np.stack([np.cos(th), np.sin(th)], axis=1)
        wt = np.full(m, 2.0 * math.pi / m)
        return w, wt, False
    if n == 3:
        m = 32 * 2**level
        x, gw = np.polynomial.legendre.leggauss(m)  # cos(polar) in [-1,1]
        k = 2 * m
        az = (np.arange(k) + 0.5) * (2.0 * math.pi / k)
        ct = np.repeat(x, k)
        st = np.sqrt(np.maximum(1.0 - ct**2, 0.0))
        ca, sa = np.tile(np.cos(az), m), np.tile(np.sin(az), m)
        w = np.stack([st * ca, st * sa, ct], axis=1)
        wt = np.repeat(gw, k) * (2.0 * math.pi / k)
        return w, wt, False
    m = 2 ** (14 + level)
    eng = qmc.Sobol(d=n, scramble=True, seed=seed)
    g = eng.random(m)
    from scipy.special import ndtri

    z = ndtri(np.clip(g, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(z, axis=1)
    w = z / np.maximum(norms, 1e-300)[:, None]
    area = 2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0)
    wt = np.full(m, area / m)
    return w, wt, True


_GL12_X, _GL12_W = np.polynomial.legendre.leggauss(12)


def _inverse_vec(a, y, maxiter=120):
    """Vectorized nondecreasing inverse: z with A(z) = y, elementwise."""
    y = np.asarray(y, dtype=float)
    z = np.zeros_like(y)
    pos = y > 0.0
    if not np.any(pos):
        return z
    yp = y[pos]
    hi = np.ones_like(yp)
    with np.errstate(over="ignore"):
        for _ in range(700):
            low = np.asarray(a.value(hi)) < yp
            if not np.any(low):
                break
            hi[low] *= 2.0
        lo = np.zeros_like(yp)
        for _ in range(maxiter):
            mid = 0.5 * (lo + hi)
            below = np.asarray(a.value(mid)) <= yp
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
    z[pos] = 0.5 * (lo + hi)
    return z


def _split_measure(terms, t, n_panels=24):
    """Measure of {sum_k A_k(|x_k|) <= t}: exact iterated quadrature.

    The outermost variable is substituted x = R sin(theta) so the
    boundary edge (where the remaining budget vanishes) carries a
    cos(theta) factor and composite Gauss panels converge fast.  Extreme
    axis anisotropy costs nothing here, unlike the angular rule.
    """
    t = np.asarray(t, dtype=float)
    if len(terms) == 1:
        return 2.0 * _inverse_vec(terms[0], t)
    a1 = terms[0]
    shape = t.shape
    tf = t.ravel()
    R1 = _inverse_vec(a1, tf)
    edges = np.linspace(0.0, 0.5 * math.pi, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    th = (mid[:, None] + half[:, None] * _GL12_X[None, :]).ravel()
    wt = (half[:, None] * _GL12_W[None, :]).ravel()
    x = R1[:, None] * np.sin(th)[None, :]
    rem = np.maximum(tf[:, None] - np.asarray(a1.value(x)), 0.0)
    inner = _split_measure(terms[1:], rem.ravel()).reshape(rem.shape)
    integral = (inner * np.cos(th)[None, :]) @ wt
    return (2.0 * R1 * integral).reshape(shape)


def sublevel_measure(phi, t, rel_tol=1e-7, seed=0, return_error=False,
                     method="auto"):
    """Lebesgue measure of {xi in R^n : Phi(xi) <= t}.

    Radial forms use the closed formula omega_n A^{-1}(t)^n; split forms
    (and square full-rank linear combinations, which are linear images
    of split sublevel sets with Jacobian 1/|det M|) use exact iterated
    quadrature; everything else goes through the star-shaped boundary
    integral with the rule refined until the relative change drops below
    ``rel_tol`` (for the quasi-random path the Sobol standard error is
    reported instead).  ``method="star"`` forces the boundary integral
    for cross-checking.
    """
    if t <= 0.0:
        return (0.0, 0.0) if return_error else 0.0
    n = phi.n
    if phi.form == "radial":
        r = phi.a.inverse(t)
        out = unit_ball_volume(n) * r**n
        return (out, 0.0) if return_error else out
    if method == "auto":
        if phi.form == "split":
            out = float(_split_measure(phi.terms, t))
            return (out, 0.0) if return_error else out
        if phi.form == "linear_combination" and phi.coeffs.shape[0] == n:
            det = abs(float(np.linalg.det(phi.coeffs)))
            if det > 0.0:
                out = float(_split_measure(phi.terms, t)) / det
                return (out, 0.0) if return_error else out
    prev = None
    for level in range(6):
        w, wt, is_qmc = _sphere_rule(n, level, seed=seed)
        r = radial_extent(phi, w, t)
        contrib = wt * r**n / n
        est = float(np.sum(contrib))
        if is_qmc:
            stderr = float(np.std(contrib) * math.sqrt(len(contrib)))
            return (est, stderr) if return_error else est
        if prev is not None and abs(est - prev) <= rel_tol * abs(est):
            return (est, abs(est - prev)) if return_error else est
        prev = est
    return (est, abs(est - prev)) if return_error else est


# ---------------------------------------------------------------------
# Phi_circ and Phi_diamond


def phi_circ(phi, t_lo=1e-3, t_hi=1e6, n_levels=512, seed=0):
    """The radial measure-average of Phi as a sampled scalar function.

    Evaluates Phi_circ^{-1}(t_j) = (|{Phi <= t_j}| / omega_n)^{1/n} on a
    log ladder of levels and tabulates the inverse relation; the table
    is convex-hull corrected.  Radial inputs return their generator
    directly (the construction is the identity for them).
    """
    if phi.form == "radial":
        return phi.a
    omega = unit_ball_volume(phi.n)
    levels = np.geomspace(t_lo, t_hi, n_levels)
    radii = np.empty(n_levels)
    for j, t in enumerate(levels):
        radii[j] = (sublevel_measure(phi, t, seed=seed) / omega) ** (1.0 / phi.n)
    out = SampledYoungFunction(np.log(radii), np.log(levels),
                               name=f"phi_circ[{phi.form}]")
    out.repair_convexity()
    return out


def phi_diamond(phi_or_circ, t_lo=None, t_hi=None, points_per_decade=64):
    """Radial biconjugate of Phi_circ, sampled.

    Conjugate twice in the scalar radial variable; the result is convex
    by construction and agrees with Phi_circ up to bounded dilation.
    Analytic scalar inputs that are already certified convex are
    returned unchanged (a convex function equals its biconjugate).
    """
    circ = phi_or_circ
    if isinstance(circ, AnisotropicYoungFunction):
        circ = phi_circ(circ)
    if circ.convexity_certified and not isinstance(circ, SampledYoungFunction):
        return circ
    t_lo = circ.t_min if t_lo is None else t_lo
    t_hi = circ.t_max if t_hi is None else t_hi
    conj = LegendreConjugate(circ)
    # sample the conjugate on the dual slope range, then conjugate back
    s_lo = max(float(circ.value(t_lo)) / max(t_lo, 1e-300), 1e-300)
    s_hi = float(circ.value(t_hi)) / t_hi
    log_s = np.linspace(math.log(s_lo), math.log(s_hi),
                        int(points_per_decade * max(
                            math.log10(s_hi / s_lo), 1.0)) + 2)
    conj_tab = SampledYoungFunction(
        log_s, np.log(np.maximum(conj.value(np.exp(log_s)), 1e-300)),
        name=f"conj({circ.name})")
    conj_tab.repair_convexity()
    biconj = LegendreConjugate(conj_tab)
    log_t = np.linspace(math.log(t_lo), math.log(t_hi),
                        int(points_per_decade * max(
                            math.log10(t_hi / t_lo), 1.0)) + 2)
    out = SampledYoungFunction(
        log_t, np.log(np.maximum(biconj.value(np.exp(log_t)), 1e-300)),
        name=f"phi_diamond({circ.name})")
    out.repair_convexity()
    return out


def dilation_constants(circ, diamond, t_lo=1.0, t_hi=1e4, n_points=64):
    """(c1, c2) with Phi_circ(c1 t) <= Phi_diamond(t) <= Phi_circ(c2 t).

    Measured as c(t) = Phi_circ^{-1}(Phi_diamond(t)) / t over a log grid.
    """
    t = np.geomspace(t_lo, t_hi, n_points)
    c = np.asarray([float(circ.inverse(float(diamond.value(ti)))) / ti
                    for ti in t])
    return float(np.min(c)), float(np.max(c))


def theta_function(diamond):
    """t -> conj(Phi_diamond)^{-1}(Phi_diamond(t)), with inverse."""
    return theta_diamond(diamond)


def theta(phi, diamond=None):
    """The vector function Theta(xi) = conj(Phi_diamond)^{-1}(Phi(xi))."""
    if diamond is None:
        diamond = phi_diamond(phi)
    conj = diamond.conjugate()

    def fn(xi):
        v = np.asarray(phi.value(xi), dtype=float)
        return conj.inverse(v)

    return fn


def vector_conjugate_grid(phi, eta, t_cap=1e6, m=96):
    """conj(Phi)(eta) = sup_xi (xi . eta - Phi(xi)) by discrete search.

    Diagnostic only (assumption audits); coordinate grid sup for n <= 3
    refined once around the coarse maximizer.
    """
    if phi.n > 3:
        raise YoungFunctionError("vector conjugate materialized for n <= 3 only")
    eta = np.asarray(eta, dtype=float)
    axes = [np.concatenate([-np.geomspace(t_cap, 1e-6, m // 2),
                            [0.0],
                            np.geomspace(1e-6, t_cap, m // 2)])] * phi.n
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    flat = grid.reshape(-1, phi.n)
    vals = flat @ eta - phi.value(flat)
    best = flat[int(np.argmax(vals))]
    # local refinement box around the coarse maximizer
    span = np.maximum(np.abs(best), 1e-3) * 0.5
    axes2 = [np.linspace(b - s, b + s, 41) for b, s in zip(best, span)]
    grid2 = np.stack(np.meshgrid(*axes2, indexing="ij"), axis=-1)
    flat2 = grid2.reshape(-1, phi.n)
    vals2 = flat2 @ eta - phi.value(flat2)
    return float(max(np.max(vals), np.max(vals2), 0.0))


# ---------------------------------------------------------------------
# JSON specification


def _scalar_from_term(term):
    kind = term["kind"]
    args = {k: v for k, v in term.items() if k != "kind" and k != "coeffs"}
    parts = ",".join(f"{k}={v}" for k, v in args.items())
    return parse_scalar_function(f"{kind}:{parts}" if parts else kind)


def from_json(doc):
    """Build an anisotropic function from a JSON-style dict.

    Examples::

        {"n": 2, "form": "radial", "term": {"kind": "power", "p": 2}}
        {"n": 2, "form": "split",
         "terms": [{"kind": "power", "p": 2}, {"kind": "power", "p": 4}]}
        {"n": 2, "form": "linear_combination",
         "terms": [{"coeffs": [1, -1], "kind": "power", "p": 2},
                   {"coeffs": [1, 0], "kind": "power", "p": 3}]}
    """
    n = int(doc["n"])
    form = doc["form"]
    bound = float(doc.get("bound_radius", 1e8))
    if form == "radial":
        return RadialPhi(n, _scalar_from_term(doc["term"]), bound)
    if form == "split":
        terms = [_scalar_from_term(t) for t in doc["terms"]]
        if len(terms) != n:
            raise YoungFunctionError("split form needs one term per axis")
        return SplitPhi(terms, bound)
    if form == "linear_combination":
        rows = [(t["coeffs"], _scalar_from_term(t)) for t in doc["terms"]]
        return LinearCombinationPhi(n, rows, bound)
    raise YoungFunctionError(f"unknown form {form!r}")
