"""The measure nu_s on the circle, quadrature against it, and the kernel k_{s,t}.

Densities are taken with respect to normalised Haar measure ``dtheta / 2 pi``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_chebyu, roots_legendre

from .maps import chi_st_eval, kappa, support_endpoints
from .params import Params, PreconditionError
from .series import TruncSeries, chi_st_series

DEFAULT_NODES = 256
MAX_NODES = 4096


def density(s: float, theta):
    """``Re kappa_s(e^{i theta})``, zero off the support arc."""
    rho = np.maximum(np.real(kappa(s, theta)), 0.0)
    return rho if np.ndim(rho) else float(rho)


@dataclass(frozen=True)
class ArcQuadrature:
    """Rule for ``integral g(e^{i theta}) rho_s(theta) dtheta / 2 pi``.

    ``kappa`` caches kappa_s at the nodes, since every integrand downstream
    needs it.
    """

    s: float
    nodes: np.ndarray
    weights: np.ndarray
    kappa: np.ndarray

    @property
    def omega(self) -> np.ndarray:
        return np.exp(1j * self.nodes)

    def __len__(self):
        return self.nodes.size

    def integrate(self, values) -> complex:
        """Weighted sum of integrand values at the nodes (fixed summation order)."""
        return complex(np.sum(self.weights * np.asarray(values)))

    def to_json(self) -> dict:
        return {"s": self.s, "nodes": self.nodes.tolist(), "weights": self.weights.tolist()}


@lru_cache(maxsize=8)
def _arc_plain_rule(s: float, n: int):
    """Nodes, ``dtheta`` weights and kappa for plain arc integrals ``integral g dtheta``.

    For s <= 4 the substitution ``theta = theta_max sin(pi v / 2)`` with
    Gauss-Legendre in ``v`` absorbs the square-root behaviour at the arc ends;
    for s > 4 the integrand is smooth and periodic, so the trapezoid rule is used.
    """
    if s <= 4:
        v, w = roots_legendre(n)
        tmax = support_endpoints(s)
        theta = tmax * np.sin(0.5 * math.pi * v)
        dtheta = w * tmax * 0.5 * math.pi * np.cos(0.5 * math.pi * v)
    else:
        theta = -math.pi + (np.arange(n) + 0.5) * (2 * math.pi / n)
        dtheta = np.full(n, 2 * math.pi / n)
    k = np.asarray(kappa(s, theta))
    for arr in (theta, dtheta, k):
        arr.setflags(write=False)
    return theta, dtheta, k


def quadrature_rule(s: float, n: int = DEFAULT_NODES) -> ArcQuadrature:
    if s <= 0:
        raise PreconditionError("quadrature_rule requires s > 0")
    if n < 8:
        raise PreconditionError("quadrature_rule needs at least 8 nodes")
    theta, dtheta, k = _arc_plain_rule(float(s), int(n))
    return ArcQuadrature(s, theta, dtheta * np.maximum(k.real, 0.0) / (2 * math.pi), k)


def integrate_adaptive(
    s: float,
    integrand: Callable[[ArcQuadrature], np.ndarray],
    tol: float = 1e-12,
    n: int = DEFAULT_NODES,
    nmax: int = MAX_NODES,
) -> tuple[complex, float]:
    """Double the node count until two levels agree to ``tol``; returns (value, gap).

    ``integrand`` maps a rule to the integrand values at its nodes.
    """
    rule = quadrature_rule(s, n)
    prev = rule.integrate(integrand(rule))
    while True:
        n *= 2
        if n > nmax:
            return prev, math.inf
        rule = quadrature_rule(s, n)
        cur = rule.integrate(integrand(rule))
        gap = abs(cur - prev)
        if gap <= tol * max(1.0, abs(cur)):
            return cur, gap
        prev = cur


def moment_quadrature(s: float, n: int, nodes: int = DEFAULT_NODES) -> float:
    """``integral omega^n dnu_s``; the imaginary part (zero by symmetry) is dropped."""
    if n < 0:
        raise PreconditionError("moment index must be >= 0")
    rule = quadrature_rule(s, nodes)
    value = rule.integrate(rule.omega**n)
    if abs(value.imag) > 1e-10:
        warnings.warn(f"moment {n} of nu_{s} has imaginary part {value.imag:.2e}", RuntimeWarning, stacklevel=2)
    return value.real


# --------------------------------------------------------------------------
# kernel k_{s,t}(zeta, d omega) relative to nu_s
# --------------------------------------------------------------------------


def _kernel_from_kappa(p: Params, zeta: complex, theta: np.ndarray, k: np.ndarray) -> np.ndarray:
    # |1 - chi_s|^2 = 4 / |k + 1|^2, and with x = Re k
    # (1 - |chi_st|^2) / (1 - |chi_s|^2) = expm1(-t x) / expm1(-s x)  ->  t/s as x -> 0
    x = np.maximum(k.real, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(x > 0, np.expm1(-p.t * x) / np.expm1(-p.s * x), p.t / p.s)
    chi_st = np.exp(1j * theta - 0.5 * p.t * k)
    pole = (zeta - chi_st) * (1 / zeta - np.conj(chi_st))
    return 4 / np.abs(k + 1) ** 2 * ratio / pole


def kernel_integrand(p: Params, zeta: complex, theta):
    """Density of ``k_{s,t}(zeta, d omega)`` with respect to ``nu_s``, at ``omega = e^{i theta}``.

    ``1/zeta`` is the literal reciprocal, so off the circle the value is the
    analytic continuation in zeta rather than a Poisson-type kernel.
    """
    p.require_regime()
    zeta = complex(zeta)
    if zeta == 0:
        raise PreconditionError("zeta = 0 is not in Sigma_{s,t}")
    th = np.asarray(theta, dtype=float)
    out = _kernel_from_kappa(p, zeta, th, np.asarray(kappa(p.s, th)))
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class KernelEvaluator:
    """``k_{s,t}(zeta, .)`` as a density against nu_s, integrated by arc quadrature."""

    params: Params
    zeta: complex

    def values(self, rule: ArcQuadrature) -> np.ndarray:
        return _kernel_from_kappa(self.params, complex(self.zeta), rule.nodes, rule.kappa)

    def integrate(self, g: Callable[[np.ndarray], np.ndarray], tol: float = 1e-12) -> tuple[complex, float]:
        """``integral g(omega) k(zeta, d omega)`` with its doubling-gap error estimate."""
        return integrate_adaptive(self.params.s, lambda r: g(r.omega) * self.values(r), tol)

    def mass(self) -> complex:
        return self.integrate(lambda w: np.ones_like(w))[0]

    def moment(self, n: int) -> complex:
        return self.integrate(lambda w: w**n)[0]


def kernel_mass(p: Params, zeta: complex) -> complex:
    p.require_regime()
    return KernelEvaluator(p, complex(zeta)).mass()


def kernel_mgf_check(p: Params, zeta: complex, z: complex) -> float:
    """``| integral z w/(1 - z w) k(zeta, dw) - X zeta/(1 - X zeta) |`` with ``X = chi_{s,t}(z)``."""
    p.require_regime()
    z, zeta = complex(z), complex(zeta)
    if abs(z) >= 1:
        raise PreconditionError("kernel_mgf_check needs |z| < 1")
    if z == 0:
        return 0.0
    lhs = KernelEvaluator(p, zeta).integrate(lambda w: z * w / (1 - z * w))[0]
    X = chi_st_eval(p, z)
    return abs(lhs - X * zeta / (1 - X * zeta))


def kernel_moment_series(p: Params, zeta: complex, n: int) -> complex:
    """``sum_{m=1}^n [z^n] chi_{s,t}(z)^m zeta^m``, the n-th kernel moment by series."""
    chi = chi_st_series(p, max(n, 1))
    power = TruncSeries.constant(1.0, chi.order)
    total = 0j
    for m in range(1, n + 1):
        power = power * chi
        total += power.coeffs[n] * complex(zeta) ** m
    return total if n > 0 else 1.0 + 0j


# --------------------------------------------------------------------------
# semicircle law
# --------------------------------------------------------------------------


def semicircle_density(s: float, x):
    """Variance-s semicircle density ``sqrt(4s - x^2) / (2 pi s)`` on ``[-2 sqrt s, 2 sqrt s]``."""
    if s <= 0:
        raise PreconditionError("semicircle_density requires s > 0")
    x = np.asarray(x, dtype=float)
    out = np.sqrt(np.maximum(4 * s - x * x, 0.0)) / (2 * math.pi * s)
    return out if out.ndim else float(out)


def semicircle_integrate(s: float, g: Callable[[np.ndarray], np.ndarray], n: int = 64) -> float:
    """``integral g dmu`` for the variance-s semicircle (Gauss-Chebyshev of the 2nd kind).

    With ``x = 2 sqrt(s) y`` the measure is ``(2/pi) sqrt(1 - y^2) dy``; exact
    for polynomials of degree < 2n.
    """
    y, w = roots_chebyu(n)
    return float(2 / math.pi * np.sum(w * g(2 * math.sqrt(s) * y)))
