"""Pointwise evaluation of f_t, its inverse chi_s, the subordination map chi_{s,t}
and its inverse f_{s,t}, plus the boundary solution kappa_s on the unit circle.

Interior inverses are found by Newton's method continued along the segment
from 0 to the target.  Boundary values come from ``kappa``, the root with
nonnegative real part of ``((k - 1)/(k + 1)) exp(s k / 2) = e^{i theta}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .params import DomainError, Params, PreconditionError, SolverError

UNIT_TOL = 1e-14  # |z| within this of 1 is treated as on the circle


def support_endpoints(t: float) -> float:
    """Half-angle of the support arc of nu_t (pi once the support is the circle)."""
    if t <= 0:
        raise PreconditionError("support_endpoints requires t > 0")
    if t >= 4:
        return math.pi
    return 0.5 * math.sqrt(t * (4 - t)) + math.acos(1 - t / 2)


def f_eval(t: float, z):
    """``z exp((t/2)(1+z)/(1-z))``; accepts scalars or arrays."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 1):
        raise PreconditionError("f_t has an essential singularity at z = 1")
    out = z * np.exp(0.5 * t * (1 + z) / (1 - z))
    return out if out.ndim else complex(out)


def f_deriv(t: float, z):
    z = np.asarray(z, dtype=complex)
    out = np.exp(0.5 * t * (1 + z) / (1 - z)) * (1 + (t - 2) * z + z * z) / (1 - z) ** 2
    return out if out.ndim else complex(out)


def _critical_points(t: float) -> tuple[complex, complex]:
    # zeros of f_t': w^2 + (t - 2) w + 1 = 0
    b = t - 2
    d = cmath.sqrt(b * b - 4)
    return (-b + d) / 2, (-b - d) / 2


# --------------------------------------------------------------------------
# boundary solution kappa
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class KappaSolution:
    theta: float
    kappa: complex
    s: float

    @property
    def residual(self) -> float:
        k = self.kappa
        return abs((k - 1) / (k + 1) * cmath.exp(self.s * k / 2) - cmath.exp(1j * self.theta))


def _x_right(s: float) -> float:
    # real root > 1 of log((x-1)/(x+1)) + s x / 2 = 0, i.e. kappa at theta = 0
    g = lambda x: math.log((x - 1) / (x + 1)) + s * x / 2
    hi = 2.0
    while g(hi) < 0:
        hi *= 2
    return brentq(g, 1 + 1e-15, hi, xtol=1e-16, rtol=1e-15)


def _x_left(s: float) -> float:
    # left end of the level curve: 0 up to s = 4, then the root of y(x)^2 = 0 in (0, 1)
    if s <= 4:
        return 0.0
    g = lambda x: 4 - (x - 1) ** 2 * math.expm1(s * x) / x
    return brentq(g, 1e-300, 1.0, xtol=1e-17, rtol=1e-15)


@lru_cache(maxsize=256)
def _level_bracket(s: float) -> tuple[float, float]:
    return _x_left(s), _x_right(s)


def _level_y(s: float, x):
    # imaginary part of kappa on the curve |(k-1)/(k+1)| e^{s Re k / 2} = 1
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(x > 0, np.expm1(s * x) / np.where(x > 0, x, 1.0), s)
        y2 = (4 - (x - 1) ** 2 * r) / r
    return np.sqrt(np.maximum(y2, 0.0))


def _level_theta(s: float, x):
    y = _level_y(s, x)
    k = x + 1j * y
    return np.angle((k - 1) / (k + 1)) + s * y / 2


def kappa(s: float, theta) -> np.ndarray:
    """Vectorised ``kappa_s(e^{i theta})``.

    On the support arc theta decreases strictly along the level curve from
    ``x_right`` (theta = 0) to ``x_left`` (theta = theta_max), so bisection
    in ``x`` pins the branch; three guarded Newton steps then polish.  Off
    the arc (s < 4) the root is ``i y`` with ``pi - 2 atan(y) + s y / 2 = |theta|``.
    """
    if s <= 0:
        raise PreconditionError("kappa requires s > 0")
    th = np.asarray(theta, dtype=float)
    # wrap only when needed: the wrap itself perturbs theta at rounding level
    a = np.where(np.abs(th) <= np.pi, np.abs(th), np.abs(np.remainder(th + np.pi, 2 * np.pi) - np.pi))
    x_lo, x_hi = _level_bracket(s)
    tmax = support_endpoints(s)
    on = a < tmax

    lo = np.full(a.shape, x_lo)
    hi = np.full(a.shape, x_hi)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        right = _level_theta(s, mid) > a
        lo = np.where(right, mid, lo)
        hi = np.where(right, hi, mid)
    x = 0.5 * (lo + hi)
    k = x + 1j * _level_y(s, x)
    with np.errstate(all="ignore"):
        for _ in range(3):
            F = np.log((k - 1) / (k + 1)) + s * k / 2 - 1j * a
            k2 = k - F / (2 / (k * k - 1) + s / 2)
            F2 = np.log((k2 - 1) / (k2 + 1)) + s * k2 / 2 - 1j * a
            good = np.isfinite(k2) & (np.abs(F2) < np.abs(F)) & (k2.real >= 0)
            k = np.where(good, k2, k)

    if s >= 4:
        # theta = pi is the real point x_left; theta(x) is too flat there to bisect
        k = np.where(a >= np.pi, x_lo + 0j, k)
    elif not np.all(on):
        ymax = math.sqrt(4 / s - 1)
        ylo = np.zeros(a.shape)
        yhi = np.full(a.shape, ymax)
        for _ in range(100):
            mid = 0.5 * (ylo + yhi)
            above = np.pi - 2 * np.arctan(mid) + s * mid / 2 > a
            ylo = np.where(above, mid, ylo)
            yhi = np.where(above, yhi, mid)
        k = np.where(on, k, 1j * 0.5 * (ylo + yhi))

    k = np.where(np.sin(th) < 0, np.conj(k), k)
    return k if k.ndim else complex(k)


def kappa_eval(s: float, theta: float) -> KappaSolution:
    k = kappa(s, float(theta))
    sol = KappaSolution(float(theta), k, s)
    if not sol.residual < 1e-9:
        raise SolverError(f"kappa_{s}(e^(i {theta})) did not converge", sol.residual)
    return sol


def chi_boundary(s: float, theta):
    """``chi_s(e^{i theta}) = (k - 1)/(k + 1)``."""
    k = kappa(s, theta)
    return (k - 1) / (k + 1)


def chi_st_boundary(p: Params, theta):
    """``chi_{s,t}(e^{i theta}) = e^{i theta} exp(-t kappa_s / 2)``."""
    th = np.asarray(theta, dtype=float)
    out = np.exp(1j * th - 0.5 * p.t * np.asarray(kappa(p.s, th)))
    return out if out.ndim else complex(out)


# --------------------------------------------------------------------------
# interior inverses by continuation
# --------------------------------------------------------------------------


def _newton(F, dF, y, w, critical, tol, maxit=40):
    for _ in range(maxit):
        try:
            r = F(w) - y
            d = dF(w)
        except (OverflowError, ZeroDivisionError):
            return None, math.inf
        if d == 0:
            return None, abs(r)
        step = r / d
        w_new = w - step
        if any(abs(w_new - c) < 1e-6 for c in critical):
            return None, abs(r)
        w = w_new
        if abs(step) <= tol * max(1.0, abs(w)):
            try:
                return w, abs(F(w) - y)
            except (OverflowError, ZeroDivisionError):
                return None, math.inf
    return None, abs(r)


def continuation_solve(
    F: Callable[[complex], complex],
    dF: Callable[[complex], complex],
    target: complex,
    critical=(),
    accept: Callable[[complex], bool] = lambda w: True,
    tol: float = 1e-15,
    max_depth: int = 40,
) -> complex:
    """Solve ``F(w) = target`` on the branch through ``F(0) = 0``.

    The right-hand side is moved along ``tau * target``; a step that fails to
    converge, lands near a critical point or leaves ``accept`` is halved,
    at most ``max_depth`` times in a row.
    """
    w, tau, step, depth = 0j, 0.0, 0.125, 0
    last = math.inf
    while tau < 1.0:
        tau_new = min(1.0, tau + step)
        w_new, last = _newton(F, dF, tau_new * target, w, critical, tol)
        if w_new is not None and accept(w_new):
            w, tau, depth = w_new, tau_new, 0
            step = min(0.25, 2 * step)
        else:
            step /= 2
            depth += 1
            if depth > max_depth:
                raise SolverError(f"continuation stalled at tau = {tau:.6g}", last)
    residual = abs(F(w) - target)
    if residual > 1e-11 * max(1.0, abs(target)):
        raise SolverError("continuation ended above tolerance", residual)
    return w


def _is_on_circle(z: complex) -> bool:
    return abs(abs(z) - 1) < UNIT_TOL


def chi_eval(s: float, z: complex) -> complex:
    """``chi_s(z)``: inverse of f_s in the disk, by inversion outside it."""
    if s <= 0:
        raise PreconditionError("chi_eval requires s > 0")
    z = complex(z)
    if z == 0:
        return 0j
    if _is_on_circle(z):
        return complex(chi_boundary(s, cmath.phase(z)))
    if abs(z) > 1:
        return 1 / chi_eval(s, 1 / z)
    return continuation_solve(
        lambda w: f_eval(s, w),
        lambda w: f_deriv(s, w),
        z,
        _critical_points(s),
        accept=lambda w: abs(w) < 1,
    )


def chi_st_eval(p: Params, z: complex) -> complex:
    """``chi_{s,t}(z) = z exp(-(t/2)(1 + chi_s(z))/(1 - chi_s(z)))``."""
    z = complex(z)
    if z == 0:
        return 0j
    if _is_on_circle(z):
        return complex(chi_st_boundary(p, cmath.phase(z)))
    if abs(z) > 1:
        return 1 / chi_st_eval(p, 1 / z)
    c = chi_eval(p.s, z)
    return z * cmath.exp(-0.5 * p.t * (1 + c) / (1 - c))


def diffchi_bracket(p: Params, chi_s) -> complex:
    """``1 + t chi / ((chi - 1)^2 + (s - t) chi)`` with ``chi = chi_s(z)``."""
    chi_s = np.asarray(chi_s, dtype=complex)
    out = 1 + p.t * chi_s / ((chi_s - 1) ** 2 + (p.s - p.t) * chi_s)
    return out if out.ndim else complex(out)


def chi_st_deriv(p: Params, z: complex) -> complex:
    """``chi_{s,t}'(z)`` read off from ``bracket * chi' * z = chi_{s,t}``."""
    z = complex(z)
    if z == 0:
        return math.exp(-p.t / 2)
    c = chi_eval(p.s, z)
    denom = (c - 1) ** 2 + (p.s - p.t) * c
    if abs(denom) < 1e-14:
        raise DomainError(f"derivative identity is singular at z = {z}")
    bracket = 1 + p.t * c / denom
    if abs(bracket) < 1e-14:
        raise DomainError(f"derivative identity is singular at z = {z}")
    return chi_st_eval(p, z) / (bracket * z)


def f_st_eval(p: Params, w: complex) -> complex:
    """Inverse of chi_{s,t}: ``f_s(u)`` where ``u`` solves ``f_{s-t}(u) = w``.

    Since ``chi_{s,t} = f_{s-t} o chi_s``, this is the same Newton problem as
    inverting chi_{s,t} directly but with a closed-form derivative.
    """
    w = complex(w)
    if w == 0:
        return 0j
    if abs(w) > 1 and not _is_on_circle(w):
        return 1 / f_st_eval(p, 1 / w)
    r = p.s - p.t
    u = continuation_solve(lambda v: f_eval(r, v), lambda v: f_deriv(r, v), w, _critical_points(r))
    return f_eval(p.s, u)
