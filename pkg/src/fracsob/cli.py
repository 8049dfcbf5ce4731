"""Command-line interface.

Subcommands: ``constants``, ``seminorm``, ``limit``, ``dini``, ``spectral`` and
``suite``.  Reports go to standard output as JSON (default) or CSV; errors
and usage text go to standard error.

Exit status: 0 on success, 1 when a computed value misses its tolerance,
2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import platform
import sys
from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np
import scipy

from . import __version__
from .domains import parse_domain
from .errors import DomainError, UnsupportedFunctionError, UsageError
from .funcspace import closed_form_seminorm, parse_function
from .limits import DIRECTIONS, EXTRAPOLATIONS, dini_limit_study, limit_study
from .quad import METHODS, QuadSpec
from .seminorms import (FracOrder, averaged_modulus, dini_seminorm, dini_via_modulus,
                        gagliardo_seminorm, gradient_seminorm, integer_seminorm, normalized_seminorm)
from .specfun import constant_G, constant_K, constant_M, lambda_norm, limit_constant
from .spectral import (equivalence_check, gagliardo_via_spectral, membership_beppo_levi,
                       spectral_energy)
from .suite import TOLERANCES, run_suite

SEED_ENV = "FRACSOB_SEED"

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """argparse raises instead of exiting so ``main`` controls the exit code."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_seed() -> int:
    text = os.environ.get(SEED_ENV, "0")
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _tol_pair(text: str) -> tuple[str, float]:
    key, sep, val = text.partition("=")
    if not sep or key not in TOLERANCES:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE with NAME in {sorted(TOLERANCES)}")
    return key, float(val)


def _common(p: argparse.ArgumentParser, quad: bool = True, method: str = "polar_singular", order: int = 16):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generation time")
    p.add_argument("--output", help="write the report to this file instead of stdout")
    if quad:
        p.add_argument("--method", choices=METHODS, default=method)
        p.add_argument("--order", type=int, default=order, help="rule order or Monte Carlo samples")
        p.add_argument("--rel-tol", type=float, default=1e-6)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracsob", description="Fractional Sobolev semi-norms and their limits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("constants", help="closed-form constants with quadrature oracles")
    _common(c, quad=False)
    for flag in ("K", "M", "G", "limit", "lambda"):
        c.add_argument(f"--{flag}", action="store_true", dest=f"want_{flag}")
    c.add_argument("--p", type=float, default=2.0)
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--sigma", type=float, default=0.5)
    c.add_argument("--dir", choices=DIRECTIONS, default="to_one")
    c.add_argument("--tol", type=float, default=1e-6, help="oracle relative tolerance")

    s = sub.add_parser("seminorm", help="evaluate one semi-norm")
    _common(s)
    s.add_argument("--fn", default="gauss")
    s.add_argument("--domain", default="rn:8")
    s.add_argument("--r", type=float, default=0.5, help="order r = l + sigma")
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--kind", default="auto",
                   choices=("auto", "integer", "gradient", "gagliardo", "dini", "normalized_lambda",
                            "normalized_one_minus_sigma", "modulus"))
    s.add_argument("--t", type=float, default=0.5, help="radius for --kind modulus")
    s.add_argument("--tol", type=float, default=1e-3, help="relative tolerance against a closed form")

    lim = sub.add_parser("limit", help="sigma sweep toward an endpoint")
    _common(lim)
    lim.add_argument("--fn", default="affine")
    lim.add_argument("--domain", default="box:0,1")
    lim.add_argument("--p", type=float, default=2.0)
    lim.add_argument("--l", type=int, default=0)
    lim.add_argument("--dir", choices=DIRECTIONS, default="to_one")
    lim.add_argument("--k", type=int, choices=(0, 1), default=None,
                     help="default: 1, or 0 for to_zero on the whole space")
    lim.add_argument("--sigmas", type=_float_list, default=None)
    lim.add_argument("--extrapolation", choices=EXTRAPOLATIONS, default="richardson")
    lim.add_argument("--tol", type=float, default=1e-3)

    d = sub.add_parser("dini", help="Dini semi-norm, directly and through the averaged modulus")
    _common(d)
    d.add_argument("--fn", default="affine")
    d.add_argument("--domain", default="box:0,1")
    d.add_argument("--p", type=float, default=2.0)
    d.add_argument("--l", type=int, default=0)
    d.add_argument("--study", action="store_true", help="also run the sigma -> 0 study")
    d.add_argument("--tol", type=float, default=1e-3)

    sp = sub.add_parser("spectral", help="spectral energy and the p = 2 identity")
    _common(sp)
    sp.add_argument("--fn", default="gauss")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--sigma", type=float, default=0.5)
    sp.add_argument("--l", type=int, default=0)
    sp.add_argument("--direct", action="store_true", help="also compute the Gagliardo double integral")
    sp.add_argument("--split", default=None, help="m,s: check the Beppo-Levi split at order m + s")
    sp.add_argument("--tol", type=float, default=1e-3)

    su = sub.add_parser("suite", help="run every acceptance criterion")
    _common(su, quad=False)
    su.add_argument("--only", type=lambda t: [int(x) for x in t.split(",")], default=None)
    su.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")
    return parser


# -- helpers ---------------------------------------------------------------------

def _spec(args) -> QuadSpec:
    return QuadSpec(args.method, args.order, args.seed, args.rel_tol)


def _rel(value: float, reference: Optional[float]) -> Optional[float]:
    if reference is None:
        return None
    if reference == 0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, tuples to lists, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("output",)}


def _versions() -> dict:
    return {"fracsob": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_clean(report), indent=2) + "\n"
    rows = _clean(report["rows"])
    keys: list[str] = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in row.items()})
    return buf.getvalue()


# -- commands ----------------------------------------------------------------------

def cmd_constants(args) -> tuple[list, bool]:
    wants = [k for k in ("K", "M", "G", "limit", "lambda") if getattr(args, f"want_{k}")]
    if not wants:
        wants = ["K", "M", "G"]
    rows, ok = [], True
    for name in wants:
        if name == "K":
            rep = constant_K(args.p, args.n, "sphere_quadrature")
            row = {"name": "K", "p": args.p, "n": args.n}
        elif name == "M":
            rep = constant_M(args.sigma, "line_quadrature")
            row = {"name": "M", "sigma": args.sigma}
        elif name == "G":
            rep = constant_G(args.sigma, args.n)
            row = {"name": "G", "sigma": args.sigma, "n": args.n}
        elif name == "limit":
            rows.append({"name": "limit", "direction": args.dir, "p": args.p, "n": args.n,
                         "value": limit_constant(args.dir, args.p, args.n)})
            continue
        else:
            rows.append({"name": "lambda", "sigma": args.sigma, "p": args.p,
                         "value": lambda_norm(args.sigma, args.p)})
            continue
        row.update(value=rep.closed_form, oracle=rep.oracle, oracle_rel_err=rep.rel_err)
        ok &= rep.rel_err is None or rep.rel_err <= args.tol
        rows.append(row)
    return rows, ok


def cmd_seminorm(args) -> tuple[list, bool]:
    v = parse_function(args.fn)
    dom = parse_domain(args.domain, v.n)
    spec = _spec(args)
    order = FracOrder.from_r(args.r, args.p)
    kind = args.kind
    if kind == "auto":
        kind = "integer" if order.sigma == 0 else "gagliardo"
    registry_kind = {"integer": "sobolev", "gagliardo": "sobolev", "gradient": "gradient", "dini": "dini"}
    row = {"fn": args.fn, "domain": dom.to_text(), "r": order.r, "p": order.p, "kind": kind}
    if kind == "modulus":
        value = averaged_modulus(v, args.t, args.p, dom, spec)
        row.update(t=args.t, value_p=value)
        return [row], True
    if kind == "integer":
        res = integer_seminorm(v, order.l, order.p, dom, spec)
    elif kind == "gradient":
        res = gradient_seminorm(v, order.l, order.p, dom, spec)
    elif kind == "gagliardo":
        res = gagliardo_seminorm(v, order, dom, spec)
    elif kind == "dini":
        res = dini_seminorm(v, order.l, order.p, dom, spec)
    else:
        res = normalized_seminorm(v, order, dom, kind.split("_", 1)[1], spec)
    ref = None
    if kind in registry_kind:
        ref = closed_form_seminorm(v, order.r if kind != "dini" else order.l, order.p, dom, registry_kind[kind])
    rel = _rel(res.value_p, ref)
    row.update(value_p=res.value_p, value=res.value, err_abs=res.estimate.err_abs,
               method=res.estimate.method, cost=res.estimate.cost, reference=ref, rel_err=rel)
    return [row], rel is None or rel <= args.tol


def _study_rows(study, fn: str) -> list:
    rows = [{"fn": fn, "sigma": s, "value": v} for s, v in zip(study.sigmas, study.values)]
    rows.append({"fn": fn, "direction": study.direction, "k": study.k, "l": study.l, "p": study.p,
                 "domain": study.domain.to_text(), "kind": study.label,
                 "extrapolation": study.extrapolation, "extrapolated": study.extrapolated,
                 "err_abs": study.extrapolation_err, "reference": study.reference,
                 "rel_err": study.rel_err, "failures": len(study.failures)})
    return rows


def cmd_limit(args) -> tuple[list, bool]:
    v = parse_function(args.fn)
    dom = parse_domain(args.domain, v.n)
    k = args.k
    if k is None:
        k = 0 if (args.dir == "to_zero" and not dom.bounded) else 1
    study = limit_study(v, args.l, args.p, dom, args.dir, k, args.sigmas, _spec(args), args.extrapolation)
    return _study_rows(study, args.fn), study.rel_err <= args.tol


def cmd_dini(args) -> tuple[list, bool]:
    v = parse_function(args.fn)
    dom = parse_domain(args.domain, v.n)
    spec = _spec(args)
    direct = dini_seminorm(v, args.l, args.p, dom, spec)
    via = dini_via_modulus(v, args.l, args.p, dom, spec)
    ref = closed_form_seminorm(v, args.l, args.p, dom, "dini")
    gap = _rel(via, direct.value_p) if direct.value_p else abs(via)
    row = {"fn": args.fn, "domain": dom.to_text(), "l": args.l, "p": args.p,
           "direct": direct.value_p, "err_abs": direct.estimate.err_abs, "via_modulus": via,
           "rel_gap": gap, "reference": ref, "rel_err": _rel(direct.value_p, ref)}
    rows, ok = [row], gap <= args.tol
    if ref is not None:
        ok &= _rel(direct.value_p, ref) <= args.tol
    if args.study:
        study = dini_limit_study(v, args.l, args.p, dom, spec=spec)
        rows += _study_rows(study, args.fn)
        ok &= study.rel_err <= args.tol
    return rows, ok


def cmd_spectral(args) -> tuple[list, bool]:
    v = parse_function(args.fn, args.n)
    n = v.n
    sigma = args.sigma
    energy = spectral_energy(v, sigma).value
    via = gagliardo_via_spectral(v, sigma, n)
    row = {"fn": args.fn, "n": n, "sigma": sigma, "energy": energy, "gagliardo_spectral": via}
    ok = True
    ref = closed_form_seminorm(v, sigma, 2.0, parse_domain("rn:8", n), "sobolev")
    if ref is not None:
        row.update(reference=ref, rel_err=_rel(via, ref))
        ok &= _rel(via, ref) <= args.tol
    if args.direct:
        direct = gagliardo_seminorm(v, FracOrder(0, sigma, 2.0), parse_domain("rn:8", n), _spec(args))
        row.update(gagliardo_direct=direct.value_p, err_abs=direct.estimate.err_abs,
                   direct_rel_err=_rel(direct.value_p, via))
        ok &= _rel(direct.value_p, via) <= args.tol
    eq = equivalence_check(v, args.l, sigma, n)
    row.update(ratio=eq.ratio, c1=eq.c1, c2=eq.c2, within=eq.within)
    ok &= eq.within
    rows = [row]
    if args.split:
        try:
            m_text, s_text = args.split.split(",")
            m, s = int(m_text), float(s_text)
        except ValueError:
            raise UsageError(f"--split expects m,s, got {args.split!r}") from None
        report = membership_beppo_levi(v, m, s)
        total = spectral_energy(v, m + s).value
        rel = _rel(report.weighted_total(), total) if total else abs(report.weighted_total())
        for a, e in report.entries.items():
            rows.append({"fn": args.fn, "m": m, "s": s, "alpha": list(a), "finite": e.finite, "energy": e.value})
        rows.append({"fn": args.fn, "m": m, "s": s, "weighted_total": report.weighted_total(),
                     "energy_total": total, "rel_err": rel, "finite": report.finite})
        ok &= rel <= 1e-8
    return rows, ok


def cmd_suite(args) -> tuple[list, bool]:
    tol = dict(args.tol)
    results = run_suite(args.seed, tol, args.only)
    rows = []
    for res in results:
        row = {"criterion": res.number, "name": res.name, "passed": res.passed, "details": res.details}
        if not args.no_timestamp:
            row["seconds"] = round(res.seconds, 3)
        rows.append(row)
        print(res.line(), file=sys.stderr)
    return rows, all(r.passed for r in results)


COMMANDS = {"constants": cmd_constants, "seminorm": cmd_seminorm, "limit": cmd_limit,
            "dini": cmd_dini, "spectral": cmd_spectral, "suite": cmd_suite}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.seed is None:
            args.seed = _default_seed()
        rows, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, UnsupportedFunctionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {"command": args.command, "config": _config(args), "rows": rows, "passed": ok,
              "versions": _versions()}
    if not args.no_timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_TOLERANCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
