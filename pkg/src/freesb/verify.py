"""Self-check suite run by ``freesb verify``.

Each check returns a :class:`CheckResult` holding the worst residual over its
grid and the tolerance it was held to.  ``quick=True`` trims the grids.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import annulus_deviation, in_sigma, scaled_annulus_deviation, sigma_boundary_curve
from .laurent import LaurentPoly
from .maps import chi_eval, chi_st_eval, diffchi_bracket, f_deriv, support_endpoints
from .measures import kernel_integrand, kernel_mass, kernel_mgf_check, moment_quadrature, semicircle_integrate
from .params import Params, UnitarityWarning
from .polynomials import genfun_verify, p_poly, p_star_poly, q_poly
from .series import (
    chi_series,
    chi_series_from_moments,
    chi_st_series,
    moment_closed_form,
    ps_compose,
    psi_series,
    scaled_residual,
)
from .transform import cauchy_eval, gram_min_eigenvalue, transform_eval

FOUR_PAIRS = ((1.0, 1.0), (3.0, 1.0), (1.0, 1.5), (5.0, 2.0))


@dataclass
class CheckResult:
    name: str
    residual: float
    tol: float
    status: str  # "pass", "fail" or "warn"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "residual": self.residual, "tol": self.tol, "detail": self.detail}


def _result(name: str, residual: float, tol: float, detail: str = "", below: bool = True) -> CheckResult:
    passed = residual < tol if below else residual > tol
    return CheckResult(name, float(residual), tol, "pass" if passed else "fail", detail)


def sigma_samples(p: Params, count: int = 6) -> list[complex]:
    """Deterministic sample of points of Sigma_{s,t}, on and off the unit circle."""
    cands = [1.0, cmath.exp(0.2j), cmath.exp(-0.7j), cmath.exp(2.5j), -1.0, 1.1, 1 / 1.1, 1.05 * cmath.exp(0.4j), 0.5, 2.0, 0.3j, -2.5]
    out = []
    for z in cands:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if in_sigma(p, z):
                out.append(complex(z))
        if len(out) == count:
            break
    return out


def check_moments(quick: bool) -> CheckResult:
    ss = (1.0, 4.0) if quick else (0.5, 1.0, 2.0, 4.0, 6.0)
    r = max(abs(moment_quadrature(s, n) - moment_closed_form(n, s)) for s in ss for n in range(13))
    return _result("moments", r, 1e-8, f"s in {ss}, n <= 12")


def check_chi_two_route(quick: bool) -> CheckResult:
    ss = (1.0, 5.0) if quick else (0.5, 1.0, 2.0, 5.0)
    r = max(scaled_residual(chi_series(s, 24), chi_series_from_moments(s, 24)) for s in ss)
    return _result("chi_two_route", r, 1e-10, f"order 24, s in {ss}")


def check_genfun(quick: bool) -> CheckResult:
    pairs = ((1.0, 1.0), (5.0, 2.0)) if quick else ((1.0, 1.0), (2.0, 1.0), (1.0, 1.5), (5.0, 2.0))
    r = max(genfun_verify(Params(s, t), 16) for s, t in pairs)
    return _result("generating_function", r, 1e-10, f"order 16, (s,t) in {pairs}")


def check_subordination(quick: bool) -> CheckResult:
    r = 0.0
    for s, t in ((3.0, 1.0), (5.0, 2.0)):
        lhs = ps_compose(psi_series(s - t, 24), chi_st_series(Params(s, t), 24))
        r = max(r, scaled_residual(lhs, psi_series(s, 24)))
    return _result("subordination", r, 1e-9, "psi_{s-t} o chi_{s,t} = psi_s, order 24")


def check_transform_monomials(quick: bool) -> CheckResult:
    pairs = FOUR_PAIRS[:2] if quick else FOUR_PAIRS
    nmax = 4 if quick else 8
    r = 0.0
    for s, t in pairs:
        p = Params(s, t)
        for zeta in sigma_samples(p, 3 if quick else 6):
            for n in range(1, nmax + 1):
                r = max(r, abs(transform_eval(p, p_poly(p, n), zeta) - zeta**n))
                r = max(r, abs(transform_eval(p, p_star_poly(p, n), zeta) - zeta ** (-n)))
    return _result("transform_monomials", r, 1e-7, f"n <= {nmax}")


def check_kernel_mass(quick: bool) -> CheckResult:
    pairs = FOUR_PAIRS[:2] if quick else FOUR_PAIRS
    r = max(abs(kernel_mass(Params(s, t), z) - 1) for s, t in pairs for z in sigma_samples(Params(s, t)))
    return _result("kernel_mass", r, 1e-8)


def check_kernel_mgf(quick: bool) -> CheckResult:
    p = Params(2.0, 1.0)
    zs = [0.5 * r * cmath.exp(2j * math.pi * k / 5) for r in (0.3, 1.0) for k in range(5 if not quick else 2)]
    r = max(kernel_mgf_check(p, cmath.exp(0.2j), z) for z in zs)
    return _result("kernel_mgf", r, 1e-8, "(s,t) = (2,1), zeta = e^{0.2i}, |z| <= 0.5")


def check_cauchy(quick: bool) -> CheckResult:
    rng = np.random.default_rng(7)
    r = 0.0
    for s, t in ((1.0, 1.0), (5.0, 2.0)):
        p = Params(s, t)
        f = LaurentPoly(rng.normal(size=13) + 1j * rng.normal(size=13), -6)
        for zeta in sigma_samples(p, 2 if quick else 5):
            r = max(r, abs(cauchy_eval(p, f, zeta) - transform_eval(p, f, zeta)))
    return _result("cauchy_vs_kernel", r, 1e-6, "degree-6 Laurent polynomial, (1,1) and (5,2)")


def chi_st_deriv_direct(p: Params, z: complex) -> complex:
    """``chi_{s,t}'`` by the chain rule, independent of the derivative identity."""
    c = chi_eval(p.s, z)
    dc = 1 / f_deriv(p.s, c)
    return chi_st_eval(p, z) * (1 / z - p.t * dc / (1 - c) ** 2)


def check_diffchi(quick: bool) -> CheckResult:
    rng = np.random.default_rng(11)
    r = 0.0
    for s, t in FOUR_PAIRS[:2] if quick else FOUR_PAIRS:
        p = Params(s, t)
        for _ in range(4 if quick else 12):
            z = 0.9 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
            lhs = diffchi_bracket(p, chi_eval(s, z)) * chi_st_deriv_direct(p, z) * z
            r = max(r, abs(lhs - chi_st_eval(p, z)))
    return _result("derivative_identity", r, 1e-9, "chain-rule derivative inserted into the identity")


def check_degeneration(quick: bool) -> CheckResult:
    r = max(abs(chi_st_eval(Params(t, t), z) - chi_eval(t, z)) for t in (0.5, 1.0, 3.0) for z in (0.4j, 0.2 - 0.5j, 0.7))
    return _result("chi_tt_equals_chi_t", r, 1e-12)


def check_kernel_identity(quick: bool) -> CheckResult:
    r = 0.0
    for s in (0.5, 2.0, 5.0):
        th = support_endpoints(s) * np.linspace(-0.999, 0.999, 41)
        r = max(r, float(np.max(np.abs(kernel_integrand(Params(s, s), 1.0, th) - 1))))
    return _result("kernel_s_equals_t", r, 1e-10, "density of k_{s,s}(1, .) against nu_s")


def check_annulus(quick: bool) -> CheckResult:
    devs = [annulus_deviation(Params(s, 1.0)) for s in (8.0, 16.0, 32.0)]
    scaled = [scaled_annulus_deviation(t) for t in (8.0, 16.0, 32.0)]
    ok = devs[0] > devs[1] > devs[2] and scaled[0] > scaled[1] > scaled[2] and devs[2] < 1e-5
    return CheckResult(
        "annulus_trend",
        devs[2],
        1e-5,
        "pass" if ok else "fail",
        "deviation(t=1, s=8,16,32) = " + ", ".join(f"{d:.3e}" for d in devs),
    )


def check_topology(quick: bool) -> CheckResult:
    bad = []
    sym = 0.0
    for s, expect in ((0.5, 1), (1.0, 1), (3.0, 1), (4.5, 2), (5.0, 2), (8.0, 2)):
        c = sigma_boundary_curve(Params(s, min(1.0, 2 * s)), 512)
        if c.n_components != expect:
            bad.append(s)
        pts = c.points()
        sym = max(sym, max(float(np.min(np.abs(pts - np.conj(z)))) for z in pts))
    status = "pass" if not bad and sym < 1e-10 else "fail"
    return CheckResult("topology", sym, 1e-10, status, f"wrong component count at s = {bad}" if bad else "component counts 1,1,1,2,2,2")


def check_q_layer(quick: bool) -> CheckResult:
    s = 2.0
    r = 0.0
    for m in range(7):
        for n in range(7):
            qm, qn = q_poly(Params(s, 0.0), m), q_poly(Params(s, 0.0), n)
            val = semicircle_integrate(s, lambda x: (qm(x) * qn(x)).real)
            r = max(r, abs(val - (s**n if m == n else 0.0)))
    collapse = max(abs(q_poly(Params(1.5, 1.5), n)(1.3) - 1.3**n) for n in range(8))
    return _result("q_polynomials", max(r, collapse), 1e-8, "semicircle orthogonality and s = t collapse")


def check_gram(quick: bool, p: Params | None = None) -> CheckResult:
    pairs = [p] if p is not None else [Params(s, t) for s, t in FOUR_PAIRS]
    worst, warn = math.inf, False
    for q in pairs:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            lam = gram_min_eigenvalue(q)
        if any(issubclass(w.category, UnitarityWarning) for w in caught):
            warn = True
            continue
        worst = min(worst, lam)
    if warn and worst == math.inf:
        return CheckResult("gram_definite", float("nan"), 1e-10, "warn", "s = 4: one-sided bounds only, not asserted")
    res = _result("gram_definite", worst, 1e-10, "smallest eigenvalue, orders <= 6", below=False)
    if warn:
        res.detail += "; s = 4 skipped with warning"
    return res


CHECKS: list[Callable[[bool], CheckResult]] = [
    check_moments,
    check_chi_two_route,
    check_genfun,
    check_subordination,
    check_transform_monomials,
    check_kernel_mass,
    check_kernel_mgf,
    check_cauchy,
    check_diffchi,
    check_degeneration,
    check_kernel_identity,
    check_annulus,
    check_topology,
    check_q_layer,
    check_gram,
]


def run_suite(quick: bool = False, p: Params | None = None) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        if check is check_gram and p is not None:
            results.append(check_gram(quick, p))
        else:
            results.append(check(quick))
    return results
