"""The transform G_{s,t} on Laurent polynomials of the circle variable.

Three independent routes are provided:

* ``transform_poly``: exact, via the triangular basis ``P^(n)`` with
  ``G P^(n) = zeta^n`` and ``G P^(n)* = zeta^-n``;
* ``transform_eval``: quadrature of ``f`` against the kernel ``k_{s,t}(zeta, .)``;
* ``cauchy_eval``: a contour integral over the boundary of Sigma_{s,t}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import GUARD, boundary_distance, in_sigma
from .laurent import LaurentPoly
from .maps import diffchi_bracket
from .measures import KernelEvaluator, _arc_plain_rule, integrate_adaptive, quadrature_rule
from .params import BoundaryProximityWarning, DomainError, Params, PreconditionError, UnitarityWarning
from .polynomials import q_coefficients
from .series import p_coefficients

CAUCHY_NODES = 512
CAUCHY_GUARD = 1e-4


@dataclass(frozen=True)
class TransformResult:
    zeta: complex
    value: complex
    method: str
    est_error: float

    def to_json(self) -> dict:
        return {
            "zeta": [self.zeta.real, self.zeta.imag],
            "value": [self.value.real, self.value.imag],
            "method": self.method,
            "est_error": self.est_error,
        }


# --------------------------------------------------------------------------
# exact polynomial route
# --------------------------------------------------------------------------


def _split(f: LaurentPoly) -> tuple[complex, np.ndarray, np.ndarray]:
    """Constant term, positive-power coefficients ``a_1..a_n``, negative ``b_1..b_m``."""
    n_pos = max(f.hi, 0)
    n_neg = max(-f.lo, 0)
    pos = np.array([f.coefficient(k) for k in range(1, n_pos + 1)], dtype=complex)
    neg = np.array([f.coefficient(-k) for k in range(1, n_neg + 1)], dtype=complex)
    return f.coefficient(0), pos, neg


def _solve_lower(C: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Coefficients ``x`` with ``sum_k x_k P^(k) = sum_m a_m u^m`` (back-substitution from the top)."""
    n = a.size
    x = np.zeros(n, dtype=complex)
    r = a.astype(complex).copy()
    for k in range(n, 0, -1):
        x[k - 1] = r[k - 1] / C[k - 1, k - 1]
        r[:k] -= x[k - 1] * C[k - 1, :k]
    return x


def transform_poly(p: Params, f: LaurentPoly) -> LaurentPoly:
    """Exact image of ``f`` as a Laurent polynomial in zeta, spanning ``min(lo,0)..max(hi,0)``."""
    p.require_regime()
    c0, pos, neg = _split(f)
    n = max(pos.size, neg.size, 1)
    C = p_coefficients(p, n)
    x = _solve_lower(C[: pos.size, : pos.size], pos) if pos.size else pos
    # P^(k)* has the same real coefficients on u^-m, so the same solve applies
    y = _solve_lower(C[: neg.size, : neg.size], neg) if neg.size else neg
    lo, hi = min(f.lo, 0), max(f.hi, 0)
    out = np.zeros(hi - lo + 1, dtype=complex)
    out[-lo] = c0
    out[-lo + 1 : -lo + 1 + x.size] = x
    for k, v in enumerate(y, start=1):
        out[-lo - k] = v
    return LaurentPoly(out, lo)


def inverse_transform_poly(p: Params, g: LaurentPoly) -> LaurentPoly:
    """Preimage: ``zeta^n -> P^(n)``, ``zeta^-n -> P^(n)*``, constants fixed."""
    p.require_regime()
    c0, pos, neg = _split(g)
    n = max(pos.size, neg.size, 1)
    C = p_coefficients(p, n)
    lo, hi = min(g.lo, 0), max(g.hi, 0)
    out = np.zeros(hi - lo + 1, dtype=complex)
    out[-lo] = c0
    if pos.size:
        out[-lo + 1 : -lo + 1 + pos.size] = pos @ C[: pos.size, : pos.size]
    if neg.size:
        vals = neg @ C[: neg.size, : neg.size]
        for m, v in enumerate(vals, start=1):
            out[-lo - m] = v
    return LaurentPoly(out, lo)


# --------------------------------------------------------------------------
# pointwise routes
# --------------------------------------------------------------------------


def _check_zeta(p: Params, zeta: complex) -> None:
    p.require_regime()
    if not in_sigma(p, zeta):
        raise DomainError(f"zeta = {zeta} is not in Sigma_{{{p.s},{p.t}}}")


def transform_eval_result(p: Params, f: LaurentPoly, zeta: complex, tol: float = 1e-12) -> TransformResult:
    zeta = complex(zeta)
    _check_zeta(p, zeta)
    value, gap = KernelEvaluator(p, zeta).integrate(f, tol)
    return TransformResult(zeta, value, "kernel-quadrature", gap)


def transform_eval(p: Params, f: LaurentPoly, zeta: complex, tol: float = 1e-12) -> complex:
    """``integral f(omega) k_{s,t}(zeta, d omega)`` for ``zeta`` in Sigma_{s,t}."""
    return transform_eval_result(p, f, zeta, tol).value


def _cauchy_sum(p: Params, g: np.ndarray, zeta: complex, theta, dtheta, k) -> complex:
    s, t = p.s, p.t
    # inner boundary z = chi_st(e^{i theta}), traversed with theta increasing,
    # i.e. clockwise as seen from Sigma; tangent from differentiating the kappa equation
    z = np.exp(1j * theta - 0.5 * t * k)
    dk = 1j / (2 / (k * k - 1) + s / 2)
    dz = z * (1j - 0.5 * t * dk)
    chi_s = (k - 1) / (k + 1)
    B = diffchi_bracket(p, chi_s)
    inner = -np.sum(dtheta * g * B * dz / (z - zeta))
    # outer boundary c = 1/conj(z), counter-clockwise; there the bracket is conj(B)
    c = 1 / np.conj(z)
    dc = -np.conj(dz) / np.conj(z) ** 2
    outer = np.sum(dtheta * g * np.conj(B) * dc / (c - zeta))
    return complex((inner + outer) / (2j * math.pi))


def cauchy_eval_result(p: Params, f: LaurentPoly, zeta: complex, n: int = CAUCHY_NODES, tol: float = 1e-10) -> TransformResult:
    zeta = complex(zeta)
    _check_zeta(p, zeta)
    if boundary_distance(p, zeta) < CAUCHY_GUARD:
        warnings.warn(f"zeta = {zeta} is close to the contour; accuracy degrades", BoundaryProximityWarning, stacklevel=2)
    prev = None
    while True:
        theta, dtheta, k = _arc_plain_rule(p.s, n)
        # on the contour f_st(z) = e^{i theta} for both components
        cur = _cauchy_sum(p, f(np.exp(1j * theta)), zeta, theta, dtheta, k)
        if prev is not None:
            gap = abs(cur - prev)
            if gap <= tol * max(1.0, abs(cur)) or 2 * n > 4 * 4096:
                return TransformResult(zeta, cur, "cauchy-contour", gap)
        prev = cur
        n *= 2


def cauchy_eval(p: Params, f: LaurentPoly, zeta: complex) -> complex:
    """``G f(zeta)`` as the Cauchy integral of ``(f o f_st) * bracket`` over the boundary."""
    return cauchy_eval_result(p, f, zeta).value


def polynomial_eval_result(p: Params, f: LaurentPoly, zeta: complex) -> TransformResult:
    zeta = complex(zeta)
    return TransformResult(zeta, complex(transform_poly(p, f)(zeta)), "polynomial-exact", 0.0)


# --------------------------------------------------------------------------
# reproducing kernel and Gram matrices
# --------------------------------------------------------------------------


def reproducing_kernel(p: Params, z: complex, zeta: complex, tol: float = 1e-12) -> complex:
    """``K(z, zeta) = integral h_z conj(h_zeta) dnu_s`` with h the kernel density."""
    p.require_regime()
    kz = KernelEvaluator(p, complex(z))
    kw = KernelEvaluator(p, complex(zeta))
    return integrate_adaptive(p.s, lambda r: kz.values(r) * np.conj(kw.values(r)), tol)[0]


def l2_inner_product(s: float, f: LaurentPoly, g: LaurentPoly, nodes: int = 512) -> complex:
    """``integral f conj(g) dnu_s``."""
    rule = quadrature_rule(s, nodes)
    w = rule.omega
    return rule.integrate(f(w) * np.conj(g(w)))


def preimage_basis(p: Params, order: int) -> list[LaurentPoly]:
    """``P^(order)*, ..., P^(1)*, 1, P^(1), ..., P^(order)``."""
    basis = [inverse_transform_poly(p, LaurentPoly.monomial(k)) for k in range(-order, order + 1)]
    return basis


def gram_matrix(p: Params, order: int = 6, nodes: int = 512) -> np.ndarray:
    """``G[i, j] = <B_i, B_j>_{L^2(nu_s)}`` over :func:`preimage_basis`.

    For s = 4 only one-sided bounds hold for the transform, so a
    :class:`UnitarityWarning` is emitted and no definiteness is implied.
    """
    p.require_regime()
    if p.s == 4:
        warnings.warn("s = 4: the transform is only bounded from one side", UnitarityWarning, stacklevel=2)
    basis = preimage_basis(p, order)
    rule = quadrature_rule(p.s, nodes)
    V = np.array([b(rule.omega) for b in basis])
    return (V * rule.weights) @ V.conj().T


def gram_min_eigenvalue(p: Params, order: int = 6) -> float:
    G = gram_matrix(p, order)
    return float(np.linalg.eigvalsh(0.5 * (G + G.conj().T))[0])


# --------------------------------------------------------------------------
# one-variable free Segal-Bargmann map
# --------------------------------------------------------------------------


def free_sb_poly(p: Params, f: LaurentPoly) -> LaurentPoly:
    """Rewrite ``f`` in the basis ``Q^(k)_{s,0}`` and replace each by ``Q^(k)_{s,t}``."""
    if f.lo < 0:
        raise PreconditionError("free_sb_poly takes ordinary polynomials (lo >= 0)")
    a = f.padded(0, max(f.hi, 0))
    n = a.size - 1
    src = q_coefficients(p.s, n)
    dst = q_coefficients(p.s - p.t, n)
    r = a.copy()
    b = np.zeros(n + 1, dtype=complex)
    for k in range(n, -1, -1):
        b[k] = r[k]  # Q^(k) is monic
        r -= b[k] * src[k]
    return LaurentPoly(b @ dst, 0)
