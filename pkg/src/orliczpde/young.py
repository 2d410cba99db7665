"""One-variable Young / N-function calculus.

A Young function A is convex, vanishes at 0 and is nondecreasing on
[0, oo).  An N-function additionally satisfies A(t)/t -> 0 as t -> 0+
and A(t)/t -> oo as t -> oo.  This module provides

* an analytic catalog (powers, power-logs, exponential types),
* a sampled representation interpolating in (log t, log A) coordinates,
* Young conjugation A~(s) = sup_t (st - A(t)), exact pointwise through
  the first-order condition A'(t) = s whenever a monotone derivative is
  available, with a discrete Legendre transform as fallback,
* generalized left-continuous inverses by monotone bisection,
* doubling-condition probes (Delta_2 / Nabla_2 near infinity),
* the derived monotone functions Psi(t) = A(t)/t and
  Theta_diamond(t) = conj(A)^{-1}(A(t)).

Functions of very fast growth are also usable through ``log_value``,
which evaluates log A(t) from log t without overflowing.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "YoungFunctionError",
    "InverseRangeError",
    "NotConvexError",
    "ScalarYoungFunction",
    "PowerYoung",
    "PowerLogYoung",
    "ExpPowerYoung",
    "ExpMinusOneYoung",
    "ExpMinusLinearYoung",
    "LinearSplicedYoung",
    "SampledYoungFunction",
    "LegendreConjugate",
    "MonotoneFunction",
    "psi_of",
    "theta_diamond",
    "check_growth_condition",
    "parse_scalar_function",
]


class YoungFunctionError(Exception):
    """Base error for Young-function operations."""


class InverseRangeError(YoungFunctionError):
    """Requested inverse value lies outside the attainable bracket."""

    def __init__(self, message, lo=None, hi=None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi


class NotConvexError(YoungFunctionError):
    """Convexity certification failed."""


def bisect_increasing(fn, target, lo, hi, rtol=1e-12, maxiter=200):
    """Leftmost t in [lo, hi] with fn(t) >= target, for nondecreasing fn.

    Ties on flat segments resolve to the left endpoint, which realizes
    the left-continuous generalized inverse.
    """
    flo = fn(lo)
    if flo >= target:
        return lo
    fhi = fn(hi)
    if fhi < target:
        raise InverseRangeError(
            f"target {target!r} above attainable value {fhi!r} on "
            f"[{lo!r}, {hi!r}]",
            lo=flo,
            hi=fhi,
        )
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if fn(mid) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rtol * max(abs(hi), 1.0):
            break
    return hi


class ScalarYoungFunction:
    """Base class: a convex nondecreasing function with A(0) = 0.

    ``t_min``/``t_max`` delimit the trusted evaluation range
    (domain hint); evaluation outside is permitted but flagged as
    extrapolation by subclasses where it matters.
    """

    name = "young"
    t_min = 1e-8
    t_max = 1e8
    convexity_certified = False

    # -- evaluation ---------------------------------------------------

    def value(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.value(t)

    def log_value(self, log_t):
        """log A(exp(log_t)); overflow-safe where a subclass can be."""
        log_t = np.asarray(log_t, dtype=float)
        with np.errstate(over="ignore", divide="ignore"):
            v = self.value(np.exp(log_t))
            return np.log(v)

    def derivative(self, t):
        """Nondecreasing (sub)derivative; default central log-step."""
        t = np.asarray(t, dtype=float)
        h = np.maximum(t, 1e-30) * 1e-6
        return (self.value(t + h) - self.value(np.maximum(t - h, 0.0))) / (
            np.minimum(t, h) + h
        )

    # -- inversion ----------------------------------------------------

    def inverse(self, y):
        """Generalized left-continuous inverse, scalar or array."""
        y_arr = np.asarray(y, dtype=float)
        out = np.empty_like(y_arr)
        for idx, yi in np.ndenumerate(y_arr):
            out[idx] = self._inverse_scalar(float(yi))
        if np.isscalar(y) or y_arr.ndim == 0:
            return float(out)
        return out

    def _inverse_scalar(self, y):
        if y <= 0.0:
            return 0.0
        hi = 1.0
        for _ in range(80):
            if self.value(hi) >= y:
                break
            hi *= 4.0
        else:
            raise InverseRangeError(
                f"value {y} not attained below t={hi}", hi=self.value(hi)
            )
        return bisect_increasing(self.value, y, 0.0, hi)

    # -- conjugation --------------------------------------------------

    def conjugate(self):
        """Young conjugate; subclasses override with closed forms."""
        return LegendreConjugate(self)

    # -- certification ------------------------------------------------

    def certify(self, n_points=512, slack=1e-12):
        """Check A(0)=0, monotonicity and midpoint convexity on a log
        grid spanning the trusted range; sets ``convexity_certified``.
        """
        t = np.geomspace(self.t_min, self.t_max, n_points)
        v = self.value(t)
        if not np.all(np.isfinite(np.log(np.maximum(v, 1e-300)))):
            # allow zeros near the origin (flat Young functions)
            pass
        if np.any(np.diff(v) < -slack * np.max(v)):
            raise NotConvexError(f"{self.name}: not nondecreasing")
        mid = 0.5 * (t[:-2] + t[2:])
        vm = self.value(mid)
        chord = 0.5 * (v[:-2] + v[2:])
        scale = np.maximum(np.abs(chord), 1e-300)
        if np.any((vm - chord) / scale > 1e-9):
            raise NotConvexError(f"{self.name}: midpoint convexity fails")
        self.convexity_certified = True
        return self

    def is_n_function(self, ratio_lo=1e-3, ratio_hi=1e3):
        """Numeric N-function check at the trusted-range endpoints."""
        lo = self.value(self.t_min) / self.t_min
        hi = self.value(self.t_max) / self.t_max
        return lo < ratio_lo and hi > ratio_hi

    # -- serialization ------------------------------------------------

    def sample(self, t_lo=None, t_hi=None, points_per_decade=256):
        """Freeze this function to a :class:`SampledYoungFunction`."""
        t_lo = self.t_min if t_lo is None else t_lo
        t_hi = self.t_max if t_hi is None else t_hi
        decades = max(math.log10(t_hi / t_lo), 1.0)
        n = int(decades * points_per_decade) + 2
        log_t = np.linspace(math.log(t_lo), math.log(t_hi), n)
        return SampledYoungFunction(log_t, self.log_value(log_t), name=self.name)

    def to_csv(self, path, t_lo=None, t_hi=None, n=512):
        t_lo = self.t_min if t_lo is None else t_lo
        t_hi = self.t_max if t_hi is None else t_hi
        t = np.geomspace(t_lo, t_hi, n)
        v = self.value(t)
        with open(path, "w", newline="") as fh:
            fh.write("t,A(t)\n")
            for ti, vi in zip(t, v):
                fh.write(f"{float(ti)!r},{float(vi)!r}\n")


class PowerYoung(ScalarYoungFunction):
    """A(t) = coeff * t**p, p > 1."""

    def __init__(self, p, coeff=1.0):
        if p <= 1:
            raise YoungFunctionError("power exponent must exceed 1")
        self.p = float(p)
        self.coeff = float(coeff)
        self.name = f"power(p={p:g})" if coeff == 1.0 else (
            f"power(p={p:g},c={coeff:g})"
        )
        self.convexity_certified = True

    def value(self, t):
        return self.coeff * np.asarray(t, dtype=float) ** self.p

    def log_value(self, log_t):
        return math.log(self.coeff) + self.p * np.asarray(log_t, dtype=float)

    def derivative(self, t):
        return self.coeff * self.p * np.asarray(t, dtype=float) ** (self.p - 1)

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        out = (np.maximum(y, 0.0) / self.coeff) ** (1.0 / self.p)
        return float(out) if out.ndim == 0 else out

    def conjugate(self):
        # sup st - c t^p attained at t = (s/(cp))^(1/(p-1))
        p, c = self.p, self.coeff
        q = p / (p - 1.0)
        coeff = (p - 1.0) * c * (1.0 / (c * p)) ** q
        return PowerYoung(q, coeff)


class PowerLogYoung(ScalarYoungFunction):
    """A(t) = t**p * log(shift + t)**alpha.

    With shift >= e the logarithm stays >= 1, so negative alpha is
    allowed; convexity for a given parameter combination is certified
    numerically (``ensure_convex`` raises the shift until it passes).
    """

    def __init__(self, p, alpha, shift=math.e):
        self.p = float(p)
        self.alpha = float(alpha)
        self.shift = float(shift)
        self.name = f"power_log(p={p:g},alpha={alpha:g})"

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return t**self.p * np.log(self.shift + t) ** self.alpha

    def log_value(self, log_t):
        log_t = np.asarray(log_t, dtype=float)
        # log(shift + t) == log t + log1p(shift/t); for huge t this is log t
        big = log_t > 40.0
        lt = np.where(big, log_t, 0.0)
        small_t = np.exp(np.where(big, 0.0, log_t))
        log_log = np.where(
            big,
            np.log(lt + np.exp(np.log(self.shift) - np.minimum(lt, 700.0))),
            np.log(np.log(self.shift + small_t)),
        )
        return self.p * log_t + self.alpha * log_log

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        ell = np.log(self.shift + t)
        return t ** (self.p - 1.0) * ell ** (self.alpha - 1.0) * (
            self.p * ell + self.alpha * t / (self.shift + t)
        )

    def ensure_convex(self):
        while True:
            try:
                self.certify()
                return self
            except NotConvexError:
                self.shift *= 4.0
                if self.shift > 1e12:
                    raise


class ExpPowerYoung(ScalarYoungFunction):
    """A(t) = exp(t**beta) - 1, beta >= 1."""

    t_max = 300.0

    def __init__(self, beta=1.0):
        if beta < 1:
            raise YoungFunctionError("beta must be >= 1")
        self.beta = float(beta)
        self.name = f"exp_power(beta={beta:g})"
        self.convexity_certified = True

    def value(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return np.expm1(np.minimum(t**self.beta, 700.0))

    def log_value(self, log_t):
        log_t = np.asarray(log_t, dtype=float)
        u = self.beta * log_t  # log(t^beta)
        # log(exp(x) - 1): x + log1p(-exp(-x)) for x > 0
        with np.errstate(over="ignore"):
            x = np.exp(np.minimum(u, 700.0))
        small = x < 1e-8
        return np.where(
            small, u, x + np.log1p(-np.exp(-np.minimum(x, 700.0)))
        )

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return self.beta * t ** (self.beta - 1.0) * np.exp(
                np.minimum(t**self.beta, 700.0)
            )


class ExpMinusOneYoung(ScalarYoungFunction):
    """A(t) = e**t - 1; conjugate s*log s - s + 1 (0 for s <= 1)."""

    name = "exp_minus_one"
    t_max = 500.0
    convexity_certified = True

    def value(self, t):
        return np.expm1(np.minimum(np.asarray(t, dtype=float), 700.0))

    def log_value(self, log_t):
        t = np.exp(np.minimum(np.asarray(log_t, dtype=float), 700.0))
        small = t < 1e-8
        return np.where(small, np.log(np.maximum(t, 1e-300)), t + np.log1p(
            -np.exp(-np.minimum(t, 700.0))))

    def derivative(self, t):
        return np.exp(np.minimum(np.asarray(t, dtype=float), 700.0))

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        out = np.log1p(np.maximum(y, 0.0))
        return float(out) if out.ndim == 0 else out

    def conjugate(self):
        return _ExpMinusOneConjugate()


class _ExpMinusOneConjugate(ScalarYoungFunction):
    """s log s - s + 1 for s >= 1, zero on [0, 1]."""

    name = "conj(exp_minus_one)"
    convexity_certified = True

    def value(self, s):
        s = np.asarray(s, dtype=float)
        out = np.where(s > 1.0, s * np.log(np.maximum(s, 1.0)) - s + 1.0, 0.0)
        return out if out.ndim else float(out)

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s > 1.0, np.log(np.maximum(s, 1.0)), 0.0)

    def conjugate(self):
        return ExpMinusOneYoung()


class ExpMinusLinearYoung(ScalarYoungFunction):
    """A(t) = e**t - t - 1; conjugate (1+s)log(1+s) - s."""

    name = "exp_minus_linear"
    t_max = 500.0
    convexity_certified = True

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return np.expm1(np.minimum(t, 700.0)) - t

    def log_value(self, log_t):
        t = np.exp(np.minimum(np.asarray(log_t, dtype=float), 700.0))
        small = t < 1e-4
        with np.errstate(over="ignore"):
            exact = np.log(np.maximum(np.expm1(np.minimum(t, 700.0)) - t,
                                      1e-300))
        return np.where(small, 2.0 * np.log(np.maximum(t, 1e-300)) -
                        math.log(2.0), np.where(t > 700.0, t, exact))

    def derivative(self, t):
        return np.expm1(np.minimum(np.asarray(t, dtype=float), 700.0))

    def conjugate(self):
        return _ExpMinusLinearConjugate()


class _ExpMinusLinearConjugate(ScalarYoungFunction):
    name = "conj(exp_minus_linear)"
    convexity_certified = True

    def value(self, s):
        s = np.asarray(s, dtype=float)
        return (1.0 + s) * np.log1p(s) - s

    def derivative(self, s):
        return np.log1p(np.asarray(s, dtype=float))

    def conjugate(self):
        return ExpMinusLinearYoung()


class LinearSplicedYoung(ScalarYoungFunction):
    """Base function above a knot, linear with matching value below.

    This is the scalar near-zero modification: linear on [0, knot] with
    slope base(knot)/knot, equal to the base function for t >= knot.
    Convex because the chord slope never exceeds the right derivative.
    """

    def __init__(self, base, knot=1.0):
        self.base = base
        self.knot = float(knot)
        self.slope = float(base.value(knot)) / self.knot
        self.name = f"linear_spliced({base.name})"
        self.t_min = min(base.t_min, 1e-12)
        self.t_max = base.t_max
        self.convexity_certified = base.convexity_certified

    def value(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(t >= self.knot, self.base.value(np.maximum(t, self.knot)),
                       self.slope * t)
        return out if out.ndim else float(out)

    def log_value(self, log_t):
        log_t = np.asarray(log_t, dtype=float)
        log_knot = math.log(self.knot)
        return np.where(
            log_t >= log_knot,
            self.base.log_value(np.maximum(log_t, log_knot)),
            math.log(self.slope) + log_t,
        )

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= self.knot,
                        self.base.derivative(np.maximum(t, self.knot)),
                        self.slope)


class SampledYoungFunction(ScalarYoungFunction):
    """Tabulated Young function, linear in (log t, log A) coordinates.

    Outside the table the end slopes extrapolate, so power-like tails
    keep their exponent.  ``repair_convexity`` replaces the table by its
    convex envelope in linear coordinates (used after discrete Legendre
    transforms).
    """

    def __init__(self, log_t, log_v, name="sampled"):
        log_t = np.asarray(log_t, dtype=float)
        log_v = np.asarray(log_v, dtype=float)
        keep = np.isfinite(log_t) & np.isfinite(log_v)
        self.log_t = log_t[keep]
        self.log_v = log_v[keep]
        if self.log_t.size < 4:
            raise YoungFunctionError("sampled function needs >= 4 finite points")
        order = np.argsort(self.log_t)
        self.log_t = self.log_t[order]
        self.log_v = np.maximum.accumulate(self.log_v[order])
        self.name = name
        self.t_min = math.exp(max(self.log_t[0], -700.0))
        self.t_max = math.exp(min(self.log_t[-1], 700.0))

    def value(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.exp(self.log_value(np.log(np.maximum(t, 1e-300))))
        out = np.where(t <= 0.0, 0.0, out)
        return out if out.ndim else float(out)

    def log_value(self, log_t):
        log_t = np.asarray(log_t, dtype=float)
        out = np.interp(log_t, self.log_t, self.log_v)
        lo_slope = (self.log_v[1] - self.log_v[0]) / (self.log_t[1] - self.log_t[0])
        hi_slope = (self.log_v[-1] - self.log_v[-2]) / (
            self.log_t[-1] - self.log_t[-2]
        )
        out = np.where(log_t < self.log_t[0],
                       self.log_v[0] + lo_slope * (log_t - self.log_t[0]), out)
        out = np.where(log_t > self.log_t[-1],
                       self.log_v[-1] + hi_slope * (log_t - self.log_t[-1]), out)
        return out if out.ndim else float(out)

    def slopes(self):
        """Monotone-repaired local log-log slopes at the table points."""
        s = np.gradient(self.log_v, self.log_t)
        return np.maximum.accumulate(np.maximum(s, 1e-12))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        log_t = np.log(np.maximum(t, 1e-300))
        slope = np.interp(log_t, self.log_t, self.slopes())
        out = slope * self.value(t) / np.maximum(t, 1e-300)
        return out if out.ndim else float(out)

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore"):
            log_y = np.log(np.maximum(y, 1e-300))
        log_v, idx = np.unique(self.log_v, return_index=True)
        log_t = self.log_t[idx]
        out = np.exp(np.interp(log_y, log_v, log_t))
        # extrapolate with end slopes
        lo_slope = (log_t[1] - log_t[0]) / max(log_v[1] - log_v[0], 1e-300)
        hi_slope = (log_t[-1] - log_t[-2]) / max(log_v[-1] - log_v[-2], 1e-300)
        out = np.where(
            log_y < log_v[0],
            np.exp(np.minimum(log_t[0] + lo_slope * (log_y - log_v[0]), 700.0)),
            out)
        out = np.where(
            log_y > log_v[-1],
            np.exp(np.minimum(log_t[-1] + hi_slope * (log_y - log_v[-1]),
                              700.0)),
            out)
        out = np.where(y <= 0.0, 0.0, out)
        return float(out) if out.ndim == 0 else out

    def repair_convexity(self):
        """Upper convex hull in linear (t, A) coordinates, in place."""
        t = np.exp(self.log_t)
        v = np.exp(np.minimum(self.log_v, 700.0))
        hull = [0, 1]
        for i in range(2, t.size):
            while len(hull) >= 2:
                i0, i1 = hull[-2], hull[-1]
                s01 = (v[i1] - v[i0]) / (t[i1] - t[i0])
                s12 = (v[i] - v[i1]) / (t[i] - t[i1])
                if s12 < s01 - 1e-15 * abs(s01):
                    hull.pop()
                else:
                    break
            hull.append(i)
        keep = np.asarray(hull)
        self.log_t = self.log_t[keep]
        self.log_v = self.log_v[keep]
        self.convexity_certified = True
        return self

    def check_second_differences(self, slack=1e-12):
        t = np.exp(self.log_t)
        v = np.exp(np.minimum(self.log_v, 700.0))
        s = np.diff(v) / np.diff(t)
        scale = np.max(np.abs(s))
        return bool(np.all(np.diff(s) >= -slack * scale))

    @classmethod
    def from_csv(cls, path, name=None):
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        return cls(np.log(data[:, 0]), np.log(data[:, 1]),
                   name=name or "sampled")


class LegendreConjugate(ScalarYoungFunction):
    """Pointwise Young conjugate through the first-order condition.

    For convex A with nondecreasing derivative A', the supremum of
    st - A(t) is attained where A'(t) = s; the maximizer is found by
    monotone bisection, which also yields the conjugate's derivative
    (envelope theorem: conj(A)'(s) = argmax t).
    """

    def __init__(self, base, t_cap=1e250):
        self.base = base
        self.t_cap = float(t_cap)
        self.name = f"conj({base.name})"
        self.convexity_certified = True
        self.t_min = 1e-10
        self.t_max = 1e10

    def _argmax(self, s):
        if s <= 0.0:
            return 0.0
        d = self.base.derivative
        if float(d(1e-300)) >= s:
            return 0.0
        hi = 1.0
        while float(d(hi)) < s:
            hi *= 4.0
            if hi > self.t_cap:
                raise InverseRangeError(
                    f"conjugate argument {s} beyond derivative range of "
                    f"{self.base.name}"
                )
        return bisect_increasing(lambda t: float(d(t)), s, 0.0, hi)

    def value(self, s):
        s_arr = np.asarray(s, dtype=float)
        out = np.empty_like(s_arr)
        for idx, si in np.ndenumerate(s_arr):
            si = float(si)
            t_star = self._argmax(si)
            out[idx] = max(si * t_star - float(self.base.value(t_star)), 0.0)
        if np.isscalar(s) or s_arr.ndim == 0:
            return float(out)
        return out

    def derivative(self, s):
        s_arr = np.asarray(s, dtype=float)
        out = np.empty_like(s_arr)
        for idx, si in np.ndenumerate(s_arr):
            out[idx] = self._argmax(float(si))
        if np.isscalar(s) or s_arr.ndim == 0:
            return float(out)
        return out

    def conjugate(self):
        # biconjugate of a certified convex function is the function itself
        return self.base


class MonotoneFunction:
    """A nondecreasing scalar function with a generalized inverse.

    Thin wrapper used for Psi, Theta_diamond, H, and the Marcinkiewicz
    generators; carries optional closed-form inverse and log-domain
    evaluation.
    """

    def __init__(self, fn, inv=None, name="monotone", log_fn=None):
        self._fn = fn
        self._inv = inv
        self._log_fn = log_fn
        self.name = name

    def __call__(self, t):
        return self._fn(t)

    def value(self, t):
        return self._fn(t)

    def log_value(self, log_t):
        if self._log_fn is not None:
            return self._log_fn(log_t)
        with np.errstate(over="ignore", divide="ignore"):
            return np.log(self._fn(np.exp(np.asarray(log_t, dtype=float))))

    def inverse(self, y):
        if self._inv is not None:
            return self._inv(y)
        y_arr = np.asarray(y, dtype=float)
        out = np.empty_like(y_arr)
        for idx, yi in np.ndenumerate(y_arr):
            yi = float(yi)
            if yi <= 0.0:
                out[idx] = 0.0
                continue
            hi = 1.0
            for _ in range(80):
                if float(self._fn(hi)) >= yi:
                    break
                hi *= 4.0
            else:
                raise InverseRangeError(f"{self.name}: {yi} out of range")
            out[idx] = bisect_increasing(lambda t: float(self._fn(t)), yi,
                                         0.0, hi)
        if np.isscalar(y) or y_arr.ndim == 0:
            return float(out)
        return out


def psi_of(a):
    """Psi(t) = A(t)/t for t > 0, Psi(0) = 0; nondecreasing by convexity."""

    def fn(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(t > 0.0, a.value(np.maximum(t, 1e-300)) /
                           np.maximum(t, 1e-300), 0.0)
        return out if out.ndim else float(out)

    def log_fn(log_t):
        return a.log_value(log_t) - np.asarray(log_t, dtype=float)

    return MonotoneFunction(fn, name=f"psi({a.name})", log_fn=log_fn)


def theta_diamond(a):
    """Theta(t) = conj(A)^{-1}(A(t)) for a Young function A."""
    conj = a.conjugate()

    def fn(t):
        return conj.inverse(a.value(t))

    def inv(y):
        return a.inverse(conj.value(y))

    return MonotoneFunction(fn, inv=inv, name=f"theta_diamond({a.name})")


def check_growth_condition(a, which, t_probe=1.0, t_max=None, n_points=64,
                           blowup=1e6):
    """Probe the Delta_2 / Nabla_2 doubling conditions near infinity.

    Returns ``(verdict, witness)`` where verdict is one of ``"holds"``,
    ``"fails"``, ``"inconclusive"`` and witness is the probe point with
    the decisive ratio.  Heuristic by nature: the verdict is only as
    good as the probed range, hence the explicit inconclusive channel.
    """
    if which not in ("delta2", "nabla2"):
        raise ValueError("which must be 'delta2' or 'nabla2'")
    t_max = a.t_max / 2.0 if t_max is None else t_max
    if t_max <= 4.0 * t_probe:
        return "inconclusive", {"reason": "domain hint too narrow",
                                "t_probe": t_probe, "t_max": t_max}
    log_t = np.linspace(math.log(t_probe), math.log(t_max), n_points)
    ratio = np.exp(a.log_value(log_t + math.log(2.0)) - a.log_value(log_t))
    tail = ratio[n_points // 2:]
    t_tail = np.exp(log_t[n_points // 2:])
    if which == "delta2":
        if np.max(ratio) > blowup or (
            np.all(np.diff(tail) > 0) and tail[-1] > 64.0 * tail[0]
        ):
            i = int(np.argmax(tail))
            return "fails", {"t": float(t_tail[i]), "ratio": float(tail[i])}
        spread = np.max(tail) / np.min(tail)
        if spread < 2.0:
            i = int(np.argmax(tail))
            return "holds", {"t": float(t_tail[i]), "ratio": float(tail[i])}
        return "inconclusive", {"spread": float(spread)}
    # nabla2: A(2t) >= c A(t) eventually, for some fixed c > 2
    excess = tail - 2.0
    shrinking = (np.all(np.diff(tail) <= 1e-9)
                 and excess[-1] <= 0.55 * max(excess[0], 1e-30))
    if tail[-1] <= 2.0 + 1e-2 or shrinking:
        return "fails", {"t": float(t_tail[-1]), "ratio": float(tail[-1])}
    if np.all(tail >= 2.0 + 1e-2):
        i = int(np.argmin(tail))
        return "holds", {"t": float(t_tail[i]), "ratio": float(tail[i])}
    return "inconclusive", {"last_ratio": float(tail[-1])}


_CATALOG = {
    "power": lambda p=2.0, coeff=1.0: PowerYoung(p, coeff),
    "power_log": lambda p=2.0, alpha=1.0, shift=math.e: PowerLogYoung(
        p, alpha, shift).ensure_convex(),
    "exp_power": lambda beta=1.0: ExpPowerYoung(beta),
    "exp_minus_one": lambda: ExpMinusOneYoung(),
    "exp_minus_linear": lambda: ExpMinusLinearYoung(),
}


def parse_scalar_function(spec):
    """Build a catalog function from a string id like ``"power:p=3"``.

    Format: ``name`` or ``name:key=value,key=value``.
    """
    if ":" in spec:
        name, _, args = spec.partition(":")
        kwargs = {}
        for item in args.split(","):
            key, _, val = item.partition("=")
            kwargs[key.strip()] = float(val)
    else:
        name, kwargs = spec, {}
    name = name.strip()
    if name not in _CATALOG:
        raise YoungFunctionError(
            f"unknown scalar function {name!r}; available: "
            f"{sorted(_CATALOG)}"
        )
    return _CATALOG[name](**kwargs)
