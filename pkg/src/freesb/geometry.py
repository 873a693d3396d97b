"""Boundary curves of Omega_t and Sigma_{s,t}, membership in Sigma_{s,t}, and
the large-s annulus diagnostic."""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .maps import chi_boundary, chi_st_boundary, kappa, support_endpoints
from .params import BoundaryProximityWarning, Params, PreconditionError

GUARD = 1e-8


@dataclass
class BoundaryCurve:
    """Closed polylines (first point repeated at the end), positively oriented.

    ``thetas`` holds the circle parameter behind each vertex so that the CSV
    export can report it.
    """

    kind: str
    s: float
    t: float
    components: list[np.ndarray]
    thetas: list[np.ndarray] = field(default_factory=list)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def points(self) -> np.ndarray:
        return np.concatenate(self.components)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "s": self.s,
            "t": self.t,
            "components": [[[float(z.real), float(z.imag)] for z in comp] for comp in self.components],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["component", "theta", "re", "im"])
        for i, (comp, th) in enumerate(zip(self.components, self.thetas)):
            for z, a in zip(comp, th):
                w.writerow([i, f"{a:.17g}", f"{z.real:.17g}", f"{z.imag:.17g}"])
        return buf.getvalue()


def omega_boundary_curve(t: float, npoints: int = 512) -> BoundaryCurve:
    """Boundary of Omega_t = chi_t(D), i.e. ``chi_t(e^{i theta})`` for theta in [-pi, pi].

    Away from the support arc chi_t runs along the unit circle; on the arc the
    points follow the level curve of kappa mapped back by ``(k - 1)/(k + 1)``.
    """
    if t <= 0:
        raise PreconditionError("omega_boundary_curve requires t > 0")
    if npoints < 16:
        raise PreconditionError("npoints must be >= 16")
    th = symmetric_grid(math.pi, npoints)
    tmax = support_endpoints(t)
    if tmax < math.pi:
        th = np.unique(np.r_[th, -tmax, tmax])
    z = np.asarray(chi_boundary(t, th))
    z[-1] = z[0]
    return BoundaryCurve("omega", t, t, [z], [th])


def symmetric_grid(half_width: float, npoints: int) -> np.ndarray:
    """Uniform grid on [-w, w] with exact endpoints and exact mirror symmetry.

    kappa has a square-root branch at the arc ends, so a rounding-level
    asymmetry in theta would surface as ~1e-8 asymmetry in the curves.
    """
    u = np.linspace(-1.0, 1.0, npoints)
    u = 0.5 * (u - u[::-1])
    return half_width * u


def _arc_thetas(s: float, npoints: int) -> np.ndarray:
    return symmetric_grid(support_endpoints(s), npoints)


@lru_cache(maxsize=32)
def _sigma_curve_cached(s: float, t: float, npoints: int) -> BoundaryCurve:
    p = Params(s, t)
    th = _arc_thetas(s, npoints)
    inner = np.asarray(chi_st_boundary(p, th))
    outer = 1 / np.conj(inner)
    if s < 4:
        # inner lobe backwards (Sigma lies outside it), then the outer lobe;
        # the two meet on the unit circle at +-theta_max
        comp = np.r_[inner[::-1], outer[1:]]
        return BoundaryCurve("sigma", s, t, [comp], [np.r_[th[::-1], th[1:]]])
    inner[-1] = inner[0]
    outer[-1] = outer[0]
    return BoundaryCurve("sigma", s, t, [outer, inner[::-1].copy()], [th, th[::-1].copy()])


def sigma_boundary_curve(p: Params, npoints: int = 1024) -> BoundaryCurve:
    """Boundary of Sigma_{s,t}: one closed curve for s < 4, two for s >= 4.

    The inner portion is ``chi_{s,t}(e^{i theta})`` over the support arc, the
    outer portion its reflection ``1/conj``.
    """
    p.require_regime()
    if npoints < 16:
        raise PreconditionError("npoints must be >= 16")
    return _sigma_curve_cached(p.s, p.t, npoints)


def _segment_distance(z: complex, poly: np.ndarray) -> float:
    a, b = poly[:-1], poly[1:]
    d = b - a
    L = np.abs(d) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.clip(np.where(L > 0, ((z - a) * np.conj(d)).real / L, 0.0), 0.0, 1.0)
    return float(np.min(np.abs(a + u * d - z)))


def winding_number(z: complex, poly: np.ndarray) -> float:
    """Winding number of a closed polyline around ``z`` (not normalised to int)."""
    w = poly - z
    with np.errstate(invalid="ignore", divide="ignore"):
        return float(np.nansum(np.angle(w[1:] / w[:-1])) / (2 * math.pi))


def boundary_distance(p: Params, z: complex, npoints: int = 4096) -> float:
    curve = sigma_boundary_curve(p, npoints)
    return min(_segment_distance(complex(z), c) for c in curve.components)


def in_sigma(p: Params, z, npoints: int = 4096) -> bool:
    """Whether ``z`` lies in Sigma_{s,t}; ``None`` or infinity stands for the point at infinity.

    Points within 1e-8 of the sampled boundary trigger a
    :class:`BoundaryProximityWarning`; the answer is still returned.
    """
    if z is None:
        return False
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return False
    if z == 0:
        return False
    curve = sigma_boundary_curve(p, npoints)
    dist = min(_segment_distance(z, c) for c in curve.components)
    if dist < GUARD:
        warnings.warn(
            f"{z} is within {dist:.2e} of the boundary of Sigma_{{{p.s},{p.t}}}",
            BoundaryProximityWarning,
            stacklevel=2,
        )
    wind = sum(winding_number(z, c) for c in curve.components)
    return bool(round(wind) == 1)


def annulus_deviation(p: Params, nsamples: int = 4096) -> float:
    """``max_theta | |chi_{s,t}(e^{i theta})| - e^{-t/2} |`` over a uniform grid.

    On the support ``|chi_{s,t}| = exp(-t Re kappa_s / 2)``; off it the value is 1.
    """
    p.require_regime()
    th = np.linspace(-math.pi, math.pi, nsamples)
    mod = np.exp(-0.5 * p.t * np.real(kappa(p.s, th)))
    return float(np.max(np.abs(mod - math.exp(-p.t / 2))))


def scaled_annulus_deviation(t: float, nsamples: int = 4096) -> float:
    """``max_theta | e^{t/2} |chi_{t,t}(e^{i theta})| - 1 |``; tends to 0 as t grows."""
    th = np.linspace(-math.pi, math.pi, nsamples)
    return float(np.max(np.abs(np.expm1(-0.5 * t * (np.real(kappa(t, th)) - 1)))))
