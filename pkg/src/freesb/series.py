"""Truncated complex power series and the generating series of the nu_t family.

A :class:`TruncSeries` of order ``N`` stores ``c_0 .. c_N``; every operation is
exact modulo ``z**(N+1)``.  When two operands have different orders the result
takes the smaller one, since higher coefficients of the shorter series are
unknown rather than zero.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .params import NonInvertibleError, Params, PreconditionError

DEFAULT_ORDER = 32


class TruncSeries:
    """Power series ``sum_k c_k z**k`` known up to and including ``z**order``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        c = np.array(coeffs, dtype=complex).ravel()
        if order is not None:
            if order < 0:
                raise PreconditionError("order must be >= 0")
            c = np.concatenate([c, np.zeros(max(0, order + 1 - c.size), dtype=complex)])[: order + 1]
        if c.size == 0:
            raise PreconditionError("a series needs at least one coefficient")
        self.coeffs = c

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def constant(cls, value, order: int) -> "TruncSeries":
        return cls([value], order)

    @classmethod
    def identity(cls, order: int) -> "TruncSeries":
        return cls([0, 1], order)

    def __repr__(self):
        return f"TruncSeries(order={self.order}, coeffs={self.coeffs!r})"

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.coeffs.size

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs[: order + 1], order)

    def _coerce(self, other) -> tuple["TruncSeries", "TruncSeries"]:
        if isinstance(other, TruncSeries):
            n = min(self.order, other.order)
            return self.truncate(n), other.truncate(n)
        return self, TruncSeries.constant(other, self.order)

    def __add__(self, other):
        a, b = self._coerce(other)
        return TruncSeries(a.coeffs + b.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(-self.coeffs)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return TruncSeries(a.coeffs - b.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries(self.coeffs * complex(other))
        return ps_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries(self.coeffs / complex(other))
        return ps_mul(self, other.reciprocal())

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        result = TruncSeries.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, z):
        """Evaluate the truncated polynomial at ``z`` (Horner)."""
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc if acc.ndim else complex(acc)

    def derivative(self) -> "TruncSeries":
        k = np.arange(1, self.coeffs.size)
        if k.size == 0:
            return TruncSeries([0.0])
        return TruncSeries(self.coeffs[1:] * k)

    def reciprocal(self) -> "TruncSeries":
        c = self.coeffs
        if c[0] == 0:
            raise PreconditionError("reciprocal needs a nonzero constant term")
        b = np.zeros_like(c)
        b[0] = 1.0 / c[0]
        for n in range(1, c.size):
            b[n] = -np.dot(c[1 : n + 1], b[n - 1 :: -1][:n]) / c[0]
        return TruncSeries(b)

    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        return ps_compose(self, inner)

    def exp(self) -> "TruncSeries":
        return ps_exp(self)

    def revert(self) -> "TruncSeries":
        return ps_revert(self)

    def to_json(self) -> dict:
        return {"lo": 0, "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, payload: dict) -> "TruncSeries":
        if payload.get("lo", 0) != 0:
            raise PreconditionError("a power series must start at exponent 0")
        return cls([complex(re, im) for re, im in payload["coeffs"]])


def ps_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    n = min(a.order, b.order)
    return TruncSeries(np.convolve(a.coeffs[: n + 1], b.coeffs[: n + 1])[: n + 1])


def ps_exp(a: TruncSeries) -> TruncSeries:
    """exp of a series with zero constant term, via ``n b_n = sum_k k a_k b_{n-k}``."""
    c = a.coeffs
    if abs(c[0]) != 0:
        raise PreconditionError("ps_exp requires a(0) = 0")
    b = np.zeros_like(c)
    b[0] = 1.0
    ka = c * np.arange(c.size)
    for n in range(1, c.size):
        b[n] = np.dot(ka[1 : n + 1], b[n - 1 :: -1][:n]) / n
    return TruncSeries(b)


def ps_compose(outer: TruncSeries, inner: TruncSeries) -> TruncSeries:
    """``outer(inner(z))``; requires ``inner(0) = 0``."""
    if abs(inner.coeffs[0]) != 0:
        raise PreconditionError("ps_compose requires inner(0) = 0")
    n = min(outer.order, inner.order)
    h = inner.coeffs[: n + 1]
    acc = np.zeros(n + 1, dtype=complex)
    for c in outer.coeffs[: n + 1][::-1]:
        acc = np.convolve(acc, h)[: n + 1]
        acc[0] += c
    return TruncSeries(acc)


def ps_revert(a: TruncSeries) -> TruncSeries:
    """Compositional inverse ``b`` with ``a(b(z)) = z`` mod ``z**(N+1)``.

    Newton's iteration ``b <- b - (a(b) - z) / a'(b)`` doubles the number of
    correct coefficients per step.
    """
    c = a.coeffs
    if abs(c[0]) != 0:
        raise PreconditionError("ps_revert requires a(0) = 0")
    if a.order < 1 or c[1] == 0:
        raise NonInvertibleError("ps_revert requires a'(0) != 0")
    N = a.order
    z = TruncSeries.identity(N)
    da = TruncSeries(np.r_[a.derivative().coeffs, 0.0], N)
    b = TruncSeries([0, 1.0 / c[1]], N)
    # one sweep beyond the doubling count mops up rounding in the top coefficients
    for _ in range(max(1, math.ceil(math.log2(N + 1))) + 1):
        b = b - (ps_compose(a, b) - z) / ps_compose(da, b)
    return b


def scaled_residual(a: TruncSeries | np.ndarray, b: TruncSeries | np.ndarray) -> float:
    """Largest coefficient gap, absolute below magnitude 1 and relative above."""
    a = a.coeffs if isinstance(a, TruncSeries) else np.asarray(a)
    b = b.coeffs if isinstance(b, TruncSeries) else np.asarray(b)
    n = min(a.size, b.size)
    a, b = a[:n], b[:n]
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return float(np.max(np.abs(a - b) / scale))


def moment_closed_form(n: int, t: float) -> float:
    """n-th moment of the free unitary Brownian motion distribution at time t.

    ``nu_0 = 1``.  The alternating sum cancels badly in floating point once
    ``n t`` exceeds ~20, so it is accumulated exactly in rationals (``t`` is a
    binary float, hence exactly rational) and rounded once.  Consecutive terms
    differ by the factor ``(-t n / (k+1)) * (n-k-1)/(k+2)``.
    """
    if n < 0:
        raise PreconditionError("moment index must be >= 0")
    if t < 0:
        raise PreconditionError("moment formula is stated for t >= 0")
    if n == 0:
        return 1.0
    tq = Fraction(t)
    term = Fraction(1)  # k = 0: n**-1 * C(n, 1)
    total = term
    for k in range(n - 1):
        term *= -tq * n * (n - k - 1) / ((k + 1) * (k + 2))
        total += term
    return math.exp(-n * t / 2) * float(total)


def f_series(t: float, N: int = DEFAULT_ORDER) -> TruncSeries:
    """Taylor coefficients of ``z exp((t/2)(1+z)/(1-z))`` at 0."""
    geometric = TruncSeries(np.r_[0.0, np.ones(N)], N)  # z/(1-z)
    e = ps_exp(t * geometric)
    return TruncSeries(np.r_[0.0, math.exp(t / 2) * e.coeffs[:N]], N)


def psi_series(t: float, N: int = DEFAULT_ORDER) -> TruncSeries:
    """Moment generating series ``sum_{n>=1} nu_n(t) z**n``."""
    if t < 0:
        raise PreconditionError("psi_series is only provided for t >= 0")
    return TruncSeries([0.0] + [moment_closed_form(n, t) for n in range(1, N + 1)], N)


def chi_series(s: float, N: int = DEFAULT_ORDER) -> TruncSeries:
    """Inverse of ``f_s`` near 0, by series reversion."""
    if s <= 0:
        raise PreconditionError("chi_series requires s > 0")
    return ps_revert(f_series(s, N))


def chi_series_from_moments(s: float, N: int = DEFAULT_ORDER) -> TruncSeries:
    """``psi / (1 + psi)`` built from the closed-form moments."""
    psi = psi_series(s, N)
    return psi / (1.0 + psi)


def _one_plus_over_one_minus_exponent(chi: TruncSeries, t: float) -> TruncSeries:
    # exp(-(t/2)(1+chi)/(1-chi)) = exp(-t/2) * exp(-t chi/(1-chi))
    return math.exp(-t / 2) * ps_exp(-t * chi / (1.0 - chi))


def chi_st_series(p: Params, N: int = DEFAULT_ORDER) -> TruncSeries:
    """Subordination function ``f_{s-t} o chi_s``."""
    return ps_compose(f_series(p.s - p.t, N), chi_series(p.s, N))


def chi_st_series_direct(p: Params, N: int = DEFAULT_ORDER) -> TruncSeries:
    """Same series from ``z exp(-(t/2)(1+chi_s)/(1-chi_s))``."""
    e = _one_plus_over_one_minus_exponent(chi_series(p.s, N), p.t)
    return TruncSeries(np.r_[0.0, e.coeffs[:N]], N)


def f_st_series(p: Params, N: int = DEFAULT_ORDER) -> TruncSeries:
    """Inverse of the subordination function, built as ``f_s o f_{s-t}^{-1}``.

    Reverting :func:`chi_st_series` gives the same series, but the double
    reversion costs about three digits for large ``s``.
    """
    p.require_regime()
    return ps_compose(f_series(p.s, N), ps_revert(f_series(p.s - p.t, N)))


@lru_cache(maxsize=64)
def _p_coefficient_matrix(s: float, t: float, n: int) -> np.ndarray:
    # Lagrange-Buermann on f_st = f_s o g^{-1}, g = f_{s-t}:
    #   [z^k] f_st^m = e^{a/2} [w^{k-m}] exp(a w/(1-w)) (1 + r w/(1-w)^2),
    # with r = s - t and a = m s - k r.  The bracket is rational in (s, t),
    # so it is summed exactly and only the prefactor is rounded.
    sq, rq = Fraction(s), Fraction(s) - Fraction(t)
    C = np.zeros((n, n))
    for k in range(1, n + 1):
        for m in range(1, k + 1):
            a = m * sq - k * rq
            j = k - m
            e = [Fraction(1)]
            for i in range(1, j + 1):
                e.append(a * sum(q * e[i - q] for q in range(1, i + 1)) / i)
            bracket = e[j] + rq * sum(q * e[j - q] for q in range(1, j + 1))
            C[k - 1, m - 1] = math.exp(float(a) / 2) * float(bracket)
    C.setflags(write=False)
    return C


def p_coefficients(p: Params, n: int) -> np.ndarray:
    """Lower-triangular ``C`` with ``C[k-1, m-1] = [z^k] f_st(z)**m``, k, m <= n.

    Evaluated from an exact rational closed form rather than by powering
    :func:`f_st_series`, whose rounding is amplified by cancellation.
    """
    p.require_regime()
    return np.array(_p_coefficient_matrix(p.s, p.t, n))
