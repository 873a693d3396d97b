"""Polynomial families: the transform preimages of monomials and the Q recurrence."""

from __future__ import annotations

import numpy as np

from .laurent import LaurentPoly
from .params import Params, PreconditionError
from .series import DEFAULT_ORDER, TruncSeries, f_series, p_coefficients, scaled_residual


def p_poly(p: Params, n: int) -> LaurentPoly:
    """Polynomial ``P^(n)`` whose transform is ``zeta**n``.

    Its coefficients are ``c_{n,m} = [z^n] f_st(z)**m`` for ``m = 1..n``; the
    constant slot is stored as an explicit zero so ``lo = 0``.
    """
    if n < 1:
        raise PreconditionError("p_poly needs n >= 1")
    row = p_coefficients(p, n)[n - 1]
    return LaurentPoly(np.r_[0.0, row], 0)


def p_star_poly(p: Params, n: int) -> LaurentPoly:
    """``P^(n)`` read at ``1/u``: exponents ``-n..-1``, same real coefficients."""
    row = p_coefficients(p, n)[n - 1] if n >= 1 else None
    if row is None:
        raise PreconditionError("p_star_poly needs n >= 1")
    return LaurentPoly(row[::-1], -n)


def q_poly(p: Params, n: int) -> LaurentPoly:
    """``Q^(n+1) = x Q^(n) - (s - t) Q^(n-1)`` from ``Q^(0) = 1``, ``Q^(1) = x``."""
    if n < 0:
        raise PreconditionError("q_poly needs n >= 0")
    return LaurentPoly(q_coefficients(p.s - p.t, n)[n], 0)


def q_coefficients(variance: float, n: int) -> np.ndarray:
    """Rows ``k = 0..n`` hold the monomial coefficients of ``Q^(k)`` (padded)."""
    rows = np.zeros((n + 1, n + 1))
    rows[0, 0] = 1.0
    if n >= 1:
        rows[1, 1] = 1.0
    for k in range(1, n):
        rows[k + 1, 1:] = rows[k, :-1]
        rows[k + 1] -= variance * rows[k - 1]
    return rows


def genfun_verify(p: Params, N: int = 16) -> float:
    """Residual of the generating-function identity for ``P^(n)``.

    Left side: ``sum_n P^(n)(u) g(z)**n`` with ``g = f_{s-t}``.  Right side:
    ``sum_{m>=1} u**m f_s(z)**m``.  Both are compared as arrays of
    ``[u^m z^k]`` coefficients, ``m, k <= N``, using :func:`scaled_residual`
    because the coefficients grow like ``exp(k s / 2)``.
    """
    p.require_regime()
    C = p_coefficients(p, N)  # C[n-1, m-1] = c_{n,m}
    g = f_series(p.s - p.t, N)
    fs = f_series(p.s, N)
    g_pow = [TruncSeries.constant(1.0, N)]
    fs_pow = [TruncSeries.constant(1.0, N)]
    for _ in range(N):
        g_pow.append(g_pow[-1] * g)
        fs_pow.append(fs_pow[-1] * fs)
    lhs = np.zeros((N + 1, N + 1), dtype=complex)
    rhs = np.zeros((N + 1, N + 1), dtype=complex)
    for m in range(1, N + 1):
        for n in range(m, N + 1):
            lhs[m] += C[n - 1, m - 1] * g_pow[n].coeffs
        rhs[m] = fs_pow[m].coeffs
    return scaled_residual(lhs.ravel(), rhs.ravel())


__all__ = ["p_poly", "p_star_poly", "q_poly", "q_coefficients", "genfun_verify", "DEFAULT_ORDER"]
