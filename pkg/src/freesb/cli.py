"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 bad arguments,
3 solver failure, 4 point outside Sigma_{s,t}.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import in_sigma, omega_boundary_curve, sigma_boundary_curve, symmetric_grid
from .laurent import LaurentPoly
from .maps import support_endpoints
from .measures import density, moment_quadrature
from .params import DomainError, FreeSBError, Params, PreconditionError, SolverError
from .series import moment_closed_form
from .transform import (
    cauchy_eval_result,
    polynomial_eval_result,
    transform_eval_result,
    transform_poly,
)
from .verify import run_suite

EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_SOLVER, EXIT_DOMAIN = 0, 1, 2, 3, 4


class UsageError(Exception):
    """Flag combination rejected before any computation."""


@dataclass
class CliConfig:
    s: float = 1.0
    t: float | None = None
    order: int | None = None
    quad_nodes: int = 256
    tol: float = 1e-8
    format: str | None = None
    output: str | None = None
    points: list[complex] | None = None
    npoints: int = 513
    quick: bool = False
    params_given: bool = False

    @property
    def t_or_default(self) -> float:
        return self.s if self.t is None else self.t

    def params(self) -> Params:
        try:
            return Params(self.s, self.t_or_default)
        except PreconditionError as exc:
            raise UsageError(str(exc)) from None


def parse_points(text: str) -> list[complex]:
    """``"re,im;re,im"`` -> complex points."""
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            re_, im_ = (float(v) for v in chunk.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad point {chunk!r}; expected re,im") from None
        pts.append(complex(re_, im_))
    if not pts:
        raise argparse.ArgumentTypeError("empty point list")
    return pts


def _num(x: float) -> str:
    return f"{x:.17g}"


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _csv(header: list[str], rows, meta: dict) -> str:
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}={value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_moments(cfg: CliConfig) -> int:
    """Closed-form vs quadrature moments of nu_r, r = --t if given else --s."""
    r = cfg.t_or_default
    if r < 0:
        raise UsageError("moments need a nonnegative time")
    order = 12 if cfg.order is None else cfg.order
    rows = []
    for n in range(order + 1):
        exact = moment_closed_form(n, r)
        quad = 1.0 if r == 0 else moment_quadrature(r, n, cfg.quad_nodes)  # nu_0 is the point mass at 1
        rows.append((n, exact, quad, abs(exact - quad)))
    ok = all(row[3] < cfg.tol for row in rows)
    meta = {"r": _num(r), "nodes": cfg.quad_nodes, "tol": cfg.tol}
    if (cfg.format or "csv") == "json":
        keys = ("n", "closed_form", "quadrature", "abs_diff")
        text = _dump_json({"meta": meta, "rows": [dict(zip(keys, row)) for row in rows]})
    else:
        text = _csv(["n", "closed_form", "quadrature", "abs_diff"], rows, meta)
    _emit(cfg, text)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_density(cfg: CliConfig) -> int:
    s = cfg.s
    th = symmetric_grid(math.pi, cfg.npoints)
    rho = np.asarray(density(s, th))
    tmax = support_endpoints(s)
    meta = {"s": _num(s), "theta_max": _num(tmax)}
    if (cfg.format or "csv") == "json":
        text = _dump_json({"meta": {"s": s, "theta_max": tmax}, "theta": th.tolist(), "rho": rho.tolist()})
    else:
        text = _csv(["theta", "rho"], zip(th.tolist(), rho.tolist()), meta)
    _emit(cfg, text)
    return EXIT_OK


def cmd_domain(cfg: CliConfig, kind: str) -> int:
    if kind == "omega":
        curve = omega_boundary_curve(cfg.t_or_default, cfg.npoints)
    else:
        p = cfg.params()
        if not p.in_transform_regime:
            raise UsageError(f"sigma needs s >= t/2 > 0, got s={p.s}, t={p.t}")
        curve = sigma_boundary_curve(p, cfg.npoints)
    if (cfg.format or "csv") == "json":
        payload = curve.to_json()
        payload["n_components"] = curve.n_components
        text = _dump_json(payload)
    else:
        head = f"# kind={curve.kind}\n# s={_num(curve.s)}\n# t={_num(curve.t)}\n# components={curve.n_components}\n"
        text = head + curve.to_csv()
    _emit(cfg, text)
    return EXIT_OK


def cmd_transform(cfg: CliConfig, poly: str) -> int:
    p = cfg.params()
    if not p.in_transform_regime:
        raise UsageError(f"transform needs s >= t/2 > 0, got s={p.s}, t={p.t}")
    try:
        f = LaurentPoly.parse(poly)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    image = transform_poly(p, f)
    points = cfg.points or []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        outside = [z for z in points if not in_sigma(p, z)]
    if outside:
        for z in outside:
            print(f"error: zeta = {z.real!r},{z.imag!r} is not in Sigma_{{{p.s},{p.t}}}", file=sys.stderr)
        return EXIT_DOMAIN
    evals = []
    worst = 0.0
    for z in points:
        exact = polynomial_eval_result(p, f, z)
        quad = transform_eval_result(p, f, z)
        cauchy = cauchy_eval_result(p, f, z)
        resid = max(abs(exact.value - quad.value), abs(exact.value - cauchy.value), abs(quad.value - cauchy.value))
        worst = max(worst, resid)
        evals.append({"zeta": [z.real, z.imag], "results": [r.to_json() for r in (exact, quad, cauchy)], "cross_residual": resid})
    if (cfg.format or "json") == "csv":
        rows = []
        for e in evals:
            for r in e["results"]:
                rows.append((e["zeta"][0], e["zeta"][1], r["method"], r["value"][0], r["value"][1], float(r["est_error"])))
        meta = {"s": _num(p.s), "t": _num(p.t), "input": f.format(), "image": image.format()}
        text = _csv(["zeta_re", "zeta_im", "method", "value_re", "value_im", "est_error"], rows, meta)
    else:
        text = _dump_json(
            {
                "s": p.s,
                "t": p.t,
                "input": f.to_json(),
                "image": image.to_json(),
                "image_text": image.format(),
                "evaluations": evals,
                "max_cross_residual": worst,
            }
        )
    _emit(cfg, text)
    return EXIT_OK


def cmd_verify(cfg: CliConfig) -> int:
    p = None
    if cfg.params_given:
        p = cfg.params()
        if not p.in_transform_regime:
            raise UsageError(f"verify --s/--t must satisfy s >= t/2 > 0, got s={p.s}, t={p.t}")
    results = run_suite(cfg.quick, p)
    ok = all(r.ok for r in results)
    if (cfg.format or "json") == "csv":
        text = _csv(["name", "status", "residual", "tol", "detail"], ((r.name, r.status, r.residual, r.tol, r.detail) for r in results), {"quick": cfg.quick})
    else:
        text = _dump_json({"quick": cfg.quick, "passed": ok, "checks": [r.to_json() for r in results]})
    _emit(cfg, text)
    for r in results:
        print(f"[{r.status.upper():4}] {r.name}: residual {r.residual:.3e} (tol {r.tol:.0e}) {r.detail}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


# --------------------------------------------------------------------------
# argument handling
# --------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s", type=_finite, default=None, help="variance parameter of nu_s (default 1)")
    common.add_argument("--t", type=_finite, default=None, help="time parameter (defaults to --s)")
    common.add_argument("--order", type=_nonneg_int, default=None, help="highest moment index / series order")
    common.add_argument("--quad-nodes", type=_positive_int, default=256, help="arc quadrature nodes (>= 8)")
    common.add_argument("--tol", type=_finite, default=1e-8, help="pass/fail tolerance")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", default=None, help="write to this file instead of stdout")
    common.add_argument("--points", type=parse_points, default=None, help='zeta list "re,im;re,im;..."')
    common.add_argument("--npoints", type=_positive_int, default=513, help="samples for profiles and curves")
    common.add_argument("--quick", action="store_true", help="reduced verification grid")

    parser = argparse.ArgumentParser(prog="freesb", description="Free unitary Segal-Bargmann transform toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("moments", parents=[common], help="closed-form vs quadrature moments of nu_t")
    sub.add_parser("density", parents=[common], help="density profile of nu_s on [-pi, pi]")
    dom = sub.add_parser("domain", parents=[common], help="boundary curve of Omega_t or Sigma_{s,t}")
    dom.add_argument("kind", choices=("omega", "sigma"))
    tr = sub.add_parser("transform", parents=[common], help="transform a Laurent polynomial")
    tr.add_argument("poly", help='coefficients "c_lo,...,c_hi@lo"')
    sub.add_parser("verify", parents=[common], help="run the self-check suite")
    return parser


def _config(ns: argparse.Namespace) -> CliConfig:
    cfg = CliConfig(
        s=1.0 if ns.s is None else ns.s,
        t=ns.t,
        order=ns.order,
        quad_nodes=ns.quad_nodes,
        tol=ns.tol,
        format=ns.format,
        output=ns.output,
        points=ns.points,
        npoints=ns.npoints,
        quick=ns.quick,
        params_given=ns.s is not None or ns.t is not None,
    )
    if cfg.s <= 0:
        raise UsageError(f"--s must be positive, got {cfg.s}")
    if cfg.t is not None and cfg.t < 0:
        raise UsageError(f"--t must be >= 0, got {cfg.t}")
    if cfg.quad_nodes < 8:
        raise UsageError("--quad-nodes must be at least 8")
    if cfg.npoints < 16:
        raise UsageError("--npoints must be at least 16")
    if cfg.tol <= 0:
        raise UsageError("--tol must be positive")
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports malformed flags this way; --help exits 0
        return int(exc.code or 0)
    try:
        cfg = _config(ns)
        if ns.command == "moments":
            return cmd_moments(cfg)
        if ns.command == "density":
            return cmd_density(cfg)
        if ns.command == "domain":
            return cmd_domain(cfg, ns.kind)
        if ns.command == "transform":
            return cmd_transform(cfg, ns.poly)
        return cmd_verify(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except FreeSBError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
