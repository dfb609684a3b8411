"""Univariate polynomials and the Gibbs approximation ``P(x) ~ exp(-beta x / 2)``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.optimize import minimize_scalar

from .errors import CapExceeded, InputError

DEGREE_CAP = 24


@dataclass(frozen=True)
class Polynomial:
    """``sum_j coeffs[j] * x**j``; trailing exact zeros are dropped."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        cs = [float(a) for a in self.coeffs]
        if not cs:
            cs = [0.0]
        if not all(math.isfinite(a) for a in cs):
            raise InputError("polynomial coefficients must be finite")
        while len(cs) > 1 and cs[-1] == 0.0:
            cs.pop()
        if len(cs) - 1 > DEGREE_CAP:
            raise CapExceeded(f"degree {len(cs) - 1} exceeds the cap of {DEGREE_CAP}")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return horner(self, x)

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        try:
            return cls(tuple(float(v) for v in text.split(",") if v.strip()))
        except ValueError:
            raise InputError(f"cannot parse polynomial coefficients {text!r}") from None


def horner(p: Polynomial, x):
    acc = np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    for a in reversed(p.coeffs):
        acc = acc * x + a
    return acc


eval = horner  # noqa: A001  (module-level name used by callers as poly.eval)


def gibbs_degree_bound(beta: float, h_norm: float, delta: float) -> int:
    """Degree sufficient for a delta-accurate Gibbs approximation: ceil(1.12 b|H| + 0.648 ln(2/delta))."""
    if not 0.0 < delta < 1.0:
        raise InputError(f"delta must lie in (0, 1), got {delta}")
    if beta < 0 or h_norm < 0:
        raise InputError("beta and the norm bound must be nonnegative")
    return math.ceil(1.12 * beta * h_norm + 0.648 * math.log(2.0 / delta))


def _chebyshev_to_monomial(coeffs: Sequence[float], half_width: float) -> tuple[float, ...]:
    """Exact rational conversion of ``sum_k coeffs[k] T_k(x / half_width)`` to powers of ``x``."""
    fc = [Fraction(c) for c in coeffs]
    t_prev, t_cur = [Fraction(1)], [Fraction(0), Fraction(1)]
    out = [Fraction(0)] * max(len(fc), 1)
    if fc:
        out[0] += fc[0]
    for k in range(1, len(fc)):
        for j, v in enumerate(t_cur):
            out[j] += fc[k] * v
        t_next = [Fraction(0)] + [2 * v for v in t_cur]
        for j, v in enumerate(t_prev):
            t_next[j] -= v
        t_prev, t_cur = t_cur, t_next
    scale = Fraction(half_width)
    return tuple(float(v / scale**j) for j, v in enumerate(out))


def sup_error(p: Polynomial, f, bound: float, degree_hint: int | None = None) -> float:
    """Sup-norm of ``p - f`` on ``[-bound, bound]`` by dense Chebyshev sampling plus local refinement."""
    deg = p.degree if degree_hint is None else degree_hint
    npts = max(10 * deg, 64)
    xs = bound * np.cos(np.pi * (np.arange(npts) + 0.5) / npts)
    xs = np.concatenate([xs, [-bound, bound]])
    err = np.abs(horner(p, xs) - f(xs))
    best = float(err.max())
    order = np.argsort(xs)
    xs_sorted, err_sorted = xs[order], err[order]
    for idx in np.argsort(err_sorted)[-4:]:
        lo = xs_sorted[max(idx - 1, 0)]
        hi = xs_sorted[min(idx + 1, len(xs_sorted) - 1)]
        if hi <= lo:
            continue
        res = minimize_scalar(
            lambda t: -abs(float(horner(p, t)) - float(f(t))),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12 * max(bound, 1.0)},
        )
        best = max(best, -float(res.fun))
    return best


@dataclass(frozen=True)
class GibbsPolynomial:
    polynomial: Polynomial
    sup_error: float
    beta: float
    bound: float
    degree: int
    chebyshev: tuple[float, ...]  # truncated expansion on [-bound, bound], for cross-checks

    def chebyshev_eval(self, x):
        return cheb.chebval(np.asarray(x, dtype=float) / self.bound, self.chebyshev)


def gibbs_polynomial(beta: float, h_norm_bound: float, l: int) -> GibbsPolynomial:
    """Degree-``l`` truncated Chebyshev expansion of ``exp(-beta x / 2)`` on ``[-B, B]``.

    For ``l = 0`` the midrange constant is returned instead, which is the best
    uniform constant.  The reported error is sampled, not an analytic bound.
    """
    if l < 0:
        raise InputError("degree must be nonnegative")
    if l > DEGREE_CAP:
        raise CapExceeded(f"degree {l} exceeds the cap of {DEGREE_CAP}")
    if h_norm_bound <= 0:
        raise InputError("the norm bound must be positive")

    def f(x):
        return np.exp(-beta * np.asarray(x, dtype=float) / 2.0)

    if beta == 0:
        p = Polynomial((1.0,))
        return GibbsPolynomial(p, 0.0, beta, h_norm_bound, 0, (1.0,))
    if l == 0:
        half = beta * h_norm_bound / 2.0
        p = Polynomial((math.cosh(half),))
        return GibbsPolynomial(p, math.sinh(half), beta, h_norm_bound, 0, (math.cosh(half),))

    full = cheb.Chebyshev.interpolate(lambda t: f(h_norm_bound * t), max(64, 4 * l))
    coeffs = tuple(float(v) for v in full.coef[: l + 1])
    p = Polynomial(_chebyshev_to_monomial(coeffs, h_norm_bound))
    return GibbsPolynomial(p, sup_error(p, f, h_norm_bound, l), beta, h_norm_bound, l, coeffs)


def gibbs_trace_norm_bound(beta: float, h_norm_bound: float, sup_err: float) -> float:
    """Bound on ``||rho_P(H) - exp(-beta H)/Z||_1`` given ``|P - exp(-beta x/2)| <= sup_err``.

    Both states are diagonal in the eigenbasis of H.  With
    ``r = sup_err * exp(beta B / 2)`` each ratio ``P(x)^2 / exp(-beta x)``
    lies in ``[(1-r)^2, (1+r)^2]``, giving ``4 r / (1 - r)^2``.
    """
    r = sup_err * math.exp(beta * h_norm_bound / 2.0)
    if r >= 1.0:
        return math.inf
    return 4.0 * r / (1.0 - r) ** 2


@dataclass(frozen=True)
class DegreeChoice:
    bound_degree: int  # from the closed-form degree bound
    certified_degree: int | None  # smallest degree whose certificate meets 2*delta
    degree: int
    approximation: GibbsPolynomial
    trace_norm_bound: float


def select_gibbs_degree(beta: float, h_norm_bound: float, delta: float, cap: int = DEGREE_CAP) -> DegreeChoice:
    """Pick ``max(bound degree, smallest certified degree)`` for trace-norm target ``2 * delta``."""
    l_bound = gibbs_degree_bound(beta, h_norm_bound, delta)
    certified = None
    for l in range(0, cap + 1):
        approx = gibbs_polynomial(beta, h_norm_bound, l)
        if gibbs_trace_norm_bound(beta, h_norm_bound, approx.sup_error) <= 2 * delta:
            certified = l
            break
    if certified is None:
        raise CapExceeded(f"no degree up to {cap} certifies delta={delta} at beta={beta}")
    l = max(l_bound, certified)
    if l > cap:
        raise CapExceeded(f"selected degree {l} exceeds the cap of {cap}")
    approx = gibbs_polynomial(beta, h_norm_bound, l)
    return DegreeChoice(
        l_bound, certified, l, approx, gibbs_trace_norm_bound(beta, h_norm_bound, approx.sup_error)
    )
