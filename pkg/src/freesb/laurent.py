"""Laurent polynomials ``sum_{k=lo}^{hi} c_k u**k`` with complex coefficients."""

from __future__ import annotations

import numpy as np

from .params import PreconditionError


class LaurentPoly:
    """Finite Laurent polynomial with exponents ``lo .. lo + len(coeffs) - 1``.

    Coefficients are kept exactly as given (no trimming), so ``(0, 0, 1)@0``
    and ``(1)@2`` are distinct representations of ``u**2`` that compare equal
    under :meth:`allclose`.
    """

    __slots__ = ("lo", "coeffs")

    def __init__(self, coeffs, lo: int = 0):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        self.coeffs = c
        self.lo = int(lo)

    @property
    def hi(self) -> int:
        return self.lo + self.coeffs.size - 1

    @classmethod
    def monomial(cls, k: int, coeff=1.0) -> "LaurentPoly":
        return cls([coeff], k)

    def __repr__(self):
        return f"LaurentPoly(lo={self.lo}, coeffs={self.coeffs!r})"

    def coefficient(self, k: int) -> complex:
        i = k - self.lo
        return complex(self.coeffs[i]) if 0 <= i < self.coeffs.size else 0j

    def padded(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients of exponents ``lo .. hi`` (zero outside the stored range)."""
        if lo > self.lo or hi < self.hi:
            raise PreconditionError("padding range must contain the stored range")
        out = np.zeros(hi - lo + 1, dtype=complex)
        out[self.lo - lo : self.hi - lo + 1] = self.coeffs
        return out

    def trimmed(self, tol: float = 0.0) -> "LaurentPoly":
        nz = np.flatnonzero(np.abs(self.coeffs) > tol)
        if nz.size == 0:
            return LaurentPoly([0.0], 0)
        return LaurentPoly(self.coeffs[nz[0] : nz[-1] + 1], self.lo + nz[0])

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return LaurentPoly(self.padded(lo, hi) + other.padded(lo, hi), lo)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "LaurentPoly":
        return LaurentPoly(self.coeffs * complex(scalar), self.lo)

    __rmul__ = __mul__

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        acc = np.zeros_like(u)
        for c in self.coeffs[::-1]:
            acc = acc * u + c
        out = acc * u ** self.lo if self.lo >= 0 else acc / u ** (-self.lo)
        return out if out.ndim else complex(out)

    def circle_conjugate(self) -> "LaurentPoly":
        """The polynomial equal to ``conj(f(u))`` for ``|u| = 1``."""
        return LaurentPoly(np.conj(self.coeffs[::-1]), -self.hi)

    def allclose(self, other: "LaurentPoly", atol: float = 1e-12) -> bool:
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return bool(np.max(np.abs(self.padded(lo, hi) - other.padded(lo, hi))) <= atol)

    def to_json(self) -> dict:
        return {"lo": self.lo, "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, payload: dict) -> "LaurentPoly":
        return cls([complex(re, im) for re, im in payload["coeffs"]], payload.get("lo", 0))

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Read ``"c_lo,...,c_hi@lo"``; coefficients accept Python complex syntax."""
        body, _, lo = text.strip().partition("@")
        try:
            coeffs = [complex(tok.strip().replace(" ", "")) for tok in body.split(",")]
            start = int(lo) if lo.strip() else 0
        except ValueError as exc:
            raise PreconditionError(f"cannot parse Laurent polynomial {text!r}: {exc}") from None
        return cls(coeffs, start)

    def format(self) -> str:
        def one(c: complex) -> str:
            return repr(c.real) if c.imag == 0 else repr(c)[1:-1]

        return ",".join(one(complex(c)) for c in self.coeffs) + f"@{self.lo}"
