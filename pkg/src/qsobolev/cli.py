"""Command-line interface: families, zero tables, thresholds, sweeps, verify.

Outputs are byte-stable for identical invocations: deterministic orderings,
JSON with 17 significant digits under a versioned schema, CSV per RFC 4180
with LF endings.  q, alpha and lambda accept rational literals ("2/3") and
decimal strings, parsed exactly.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .context import ConvergenceError, QContext
from .sobolev import SobolevParams, build_sobolev
from .verify import run_suite
from .zeros import RootFindingError, ZeroSet, find_roots, lambda0, lambda_alpha

SCHEMA = "qsobolev/1"

TABLE_CONFIGS = {
    1: {"n": 7, "j": 3, "q": "2/3", "alpha": "-10",
        "lambdas": ["5e-16", "5e-13", "lambda_alpha", "5e-10", "5"], "track": [1, 2]},
    2: {"n": 10, "j": 8, "q": "4/5", "alpha": "15",
        "lambdas": ["5e-21", "5e-20", "lambda_alpha", "5e-15", "1"], "track": [9, 10]},
    3: {"n": 8, "j": 5, "q": "2/5", "alpha": "-120", "lam": "1e-20"},
    4: {"n": 5, "j": 3, "q": "1/2", "alpha": "15", "lam": "1e-9"},
}


class _F17(float):
    """Float that serialises with 17 significant digits in JSON payloads."""

    def __repr__(self) -> str:  # json.dumps uses repr for floats
        return format(float(self), ".17g")


def _parse_rational(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(num.strip()) / Fraction(den.strip())
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational literal: {text!r}") from exc


def _parse_grid(text: str) -> list[Fraction]:
    return [_parse_rational(part) for part in text.split(",") if part.strip()]


def _jsonable(obj):
    if isinstance(obj, float):
        return _F17(obj)
    if isinstance(obj, Fraction):
        return _F17(float(obj))
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(args, payload: dict, csv_header: list[str], csv_rows: list[list]) -> None:
    if args.format == "json":
        doc = {"schema": SCHEMA, **payload}
        _write(args, json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        for row in csv_rows:
            writer.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
        _write(args, buf.getvalue())


def _context(args) -> QContext:
    kwargs = {}
    if getattr(args, "eps_product", None) is not None:
        kwargs["eps_product"] = args.eps_product
    if getattr(args, "eps_sum", None) is not None:
        kwargs["eps_sum"] = args.eps_sum
    max_terms = getattr(args, "max_terms", None)
    if max_terms is None:
        env = os.environ.get("QSOBOLEV_MAX_TERMS")
        max_terms = int(env) if env else None
    if max_terms is not None:
        kwargs["max_terms"] = max_terms
    return QContext(args.q, **kwargs)


def _zero_records(zs: ZeroSet) -> list[dict]:
    return [
        {
            "index": i + 1,
            "re": z.real,
            "im": z.imag,
            "is_real": zs.is_real[i],
            "inside_interval": zs.inside_interval[i],
            "on_boundary": zs.on_boundary[i],
            "beyond_alpha": zs.beyond_alpha[i],
        }
        for i, z in enumerate(zs.roots)
    ]


def _cmd_hermite(args) -> int:
    ctx = _context(args)
    from .hermite import build_hermite

    cache = build_hermite(ctx, args.n)
    polys = [
        {"n": n, "coefficients": [float(c) for c in p.coeffs]}
        for n, p in enumerate(cache.polys)
    ]
    payload = {"command": "hermite", "q": float(ctx.q), "n": args.n, "polynomials": polys}
    rows = [[p["n"], k, c] for p in polys for k, c in enumerate(p["coefficients"])]
    if args.x is not None:
        values = [
            {"n": n, "x": float(x), "value": cache.polys[n].as_float()(float(x))}
            for n in range(args.n + 1)
            for x in args.x
        ]
        payload["values"] = values
        _emit(args, payload, ["n", "x", "value"],
              [[v["n"], v["x"], v["value"]] for v in values])
    else:
        _emit(args, payload, ["n", "power", "coefficient"], rows)
    return 0


def _cmd_sobolev(args) -> int:
    ctx = _context(args)
    params = SobolevParams(args.alpha, args.lam, args.j)
    cache = build_sobolev(ctx, params, args.n)
    polys = [
        {"n": n, "coefficients": [float(c) for c in p.coeffs]}
        for n, p in enumerate(cache.polys)
    ]
    payload = {
        "command": "sobolev",
        "q": float(ctx.q),
        "alpha": params.alpha,
        "lambda": params.lam,
        "j": params.j,
        "n": args.n,
        "polynomials": polys,
    }
    if args.x is not None:
        values = [
            {"n": n, "x": float(x), "value": cache.polys[n].as_float()(float(x))}
            for n in range(args.n + 1)
            for x in args.x
        ]
        payload["values"] = values
        _emit(args, payload, ["n", "x", "value"],
              [[v["n"], v["x"], v["value"]] for v in values])
    else:
        rows = [[p["n"], k, c] for p in polys for k, c in enumerate(p["coefficients"])]
        _emit(args, payload, ["n", "power", "coefficient"], rows)
    return 0


def _cmd_zeros(args) -> int:
    ctx = _context(args)
    params = SobolevParams(args.alpha, args.lam, args.j)
    cache = build_sobolev(ctx, params, args.n)
    zs = find_roots(ctx, cache.polys[args.n], alpha=params.alpha)
    records = _zero_records(zs)
    payload = {
        "command": "zeros",
        "q": float(ctx.q),
        "alpha": params.alpha,
        "lambda": params.lam,
        "j": params.j,
        "n": args.n,
        "zeros": records,
    }
    rows = [
        [r["index"], r["re"], r["im"], r["is_real"], r["inside_interval"],
         r["on_boundary"], r["beyond_alpha"]]
        for r in records
    ]
    _emit(args, payload,
          ["index", "re", "im", "is_real", "inside_interval", "on_boundary", "beyond_alpha"],
          rows)
    return 0


def _cmd_thresholds(args) -> int:
    ctx = _context(args)
    from .hermite import build_hermite

    cache = build_hermite(ctx, args.n)
    lam0 = lambda0(ctx, cache, args.n, args.j, args.alpha)
    lam_a = lambda_alpha(ctx, cache, args.n, args.j, args.alpha)
    payload = {
        "command": "thresholds",
        "q": float(ctx.q),
        "alpha": float(args.alpha),
        "j": args.j,
        "n": args.n,
        "lambda0": lam0,
        "lambda_alpha": lam_a,
    }
    _emit(args, payload, ["quantity", "value"],
          [["lambda0", lam0], ["lambda_alpha", lam_a]])
    return 0


def _six(x: float) -> float:
    return float(format(x, ".6g"))


def _cmd_table(args) -> int:
    ctx_cfg = TABLE_CONFIGS[args.which]
    q = _parse_rational(ctx_cfg["q"])
    alpha = _parse_rational(ctx_cfg["alpha"])
    n, j = ctx_cfg["n"], ctx_cfg["j"]
    args.q = q
    ctx = _context(args)
    from .hermite import build_hermite

    hcache = build_hermite(ctx, n + 2)
    payload: dict = {
        "command": "table",
        "which": args.which,
        "q": float(q),
        "alpha": float(alpha),
        "j": j,
        "n": n,
    }
    rows: list[list] = []
    if args.which in (1, 2):
        lam0 = lambda0(ctx, hcache, n, j, alpha)
        lam_a = lambda_alpha(ctx, hcache, n, j, alpha)
        payload["lambda0"] = _six(lam0)
        payload["lambda_alpha"] = _six(lam_a)
        track = ctx_cfg["track"]
        columns = []
        for lam_text in ctx_cfg["lambdas"]:
            lam = Fraction(lam_a) if lam_text == "lambda_alpha" else _parse_rational(lam_text)
            cache = build_sobolev(ctx, SobolevParams(alpha, lam, j), n)
            zs = find_roots(ctx, cache.polys[n], alpha=float(alpha))
            reals = sorted(z.real for z in zs.roots)
            entry = {
                "lambda": float(lam),
                "zeros": {f"l={l}": _six(reals[l - 1]) for l in track},
            }
            columns.append(entry)
            for l in track:
                rows.append([lam_text, l, format(reals[l - 1], ".6g")])
        payload["columns"] = columns
        _emit(args, payload, ["lambda", "l", "eta"], rows)
    else:
        from .sobolev import limiting_polynomial

        lam = _parse_rational(ctx_cfg["lam"])
        payload["lambda"] = float(lam)
        cache = build_sobolev(ctx, SobolevParams(alpha, lam, j), n)
        g = limiting_polynomial(ctx, cache, n)
        y = [_six(v) for v in sorted(z.real for z in find_roots(ctx, g).roots)]
        eta = [_six(v) for v in sorted(z.real for z in find_roots(ctx, cache.polys[n]).roots)]
        x = [_six(v) for v in sorted(z.real for z in find_roots(ctx, hcache.polys[n]).roots)]
        payload["rows"] = {"y": y, "eta": eta, "x": x}
        for label, values in (("y", y), ("eta", eta), ("x", x)):
            for k, v in enumerate(values, start=1):
                rows.append([label, k, format(v, ".6g")])
        _emit(args, payload, ["row", "k", "value"], rows)
    return 0


def _cmd_sweep(args) -> int:
    ctx = _context(args)
    params = SobolevParams(args.alpha, 0, args.j)
    records = []
    for lam in args.lambda_grid:
        cache = build_sobolev(ctx, params.with_lam(lam), args.n)
        zs = find_roots(ctx, cache.polys[args.n], alpha=params.alpha)
        for i, z in enumerate(zs.roots):
            records.append({"lambda": float(lam), "index": i + 1, "re": z.real, "im": z.imag})
    payload = {
        "command": "sweep",
        "q": float(ctx.q),
        "alpha": params.alpha,
        "j": params.j,
        "n": args.n,
        "trajectory": records,
    }
    rows = [[r["lambda"], r["index"], r["re"], r["im"]] for r in records]
    _emit(args, payload, ["lambda", "index", "re", "im"], rows)
    return 0


def _cmd_verify(args) -> int:
    ctx = _context(args)
    params = SobolevParams(args.alpha, args.lam, args.j)
    cache = build_sobolev(ctx, params, args.n + params.j + 1)
    results = run_suite(ctx, cache, n_max=args.n)
    lines = []
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        suffix = f"  ({r.detail})" if r.detail and not r.ok else ""
        lines.append(f"{status} {r.name}{suffix}")
    text = "\n".join(lines) + "\n"
    _write(args, text)
    if args.out:
        sys.stdout.write(text)
    return 0 if all(r.ok for r in results) else 1


def _add_common(p: argparse.ArgumentParser, *, needs_q=True) -> None:
    if needs_q:
        p.add_argument("--q", type=_parse_rational, required=True,
                       help="base q in (0,1); rational literal like 2/3 or 0.6")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--eps-product", type=float, default=None,
                   help="infinite-product truncation tolerance")
    p.add_argument("--eps-sum", type=float, default=None,
                   help="Jackson-sum tail tolerance")
    p.add_argument("--max-terms", type=int, default=None,
                   help="series/product term cap (env QSOBOLEV_MAX_TERMS)")


def _add_sobolev_params(p: argparse.ArgumentParser, *, with_lambda=True) -> None:
    p.add_argument("--alpha", type=_parse_rational, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    if with_lambda:
        p.add_argument("--lambda", dest="lam", type=_parse_rational, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsobolev",
        description="Discrete q-Hermite I polynomials, their Sobolev-type "
        "relatives, and zero analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hermite", help="coefficients/values of H_0..H_n")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, action="append", default=None,
                   help="evaluate at x instead of printing coefficients (repeatable)")
    p.set_defaults(func=_cmd_hermite)

    p = sub.add_parser("sobolev", help="coefficients/values of the Sobolev family")
    _add_common(p)
    _add_sobolev_params(p)
    p.add_argument("--x", type=float, action="append", default=None)
    p.set_defaults(func=_cmd_sobolev)

    p = sub.add_parser("zeros", help="zero set of the degree-n Sobolev polynomial")
    _add_common(p)
    _add_sobolev_params(p)
    p.set_defaults(func=_cmd_zeros)

    p = sub.add_parser("thresholds", help="critical masses lambda0 and lambda_alpha")
    _add_common(p)
    _add_sobolev_params(p, with_lambda=False)
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser("table", help="reproduce one of the paper-style zero tables")
    _add_common(p, needs_q=False)
    p.add_argument("--which", type=int, choices=(1, 2, 3, 4), required=True)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("sweep", help="zero trajectories across a lambda grid")
    _add_common(p)
    p.add_argument("--alpha", type=_parse_rational, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda-grid", dest="lambda_grid", type=_parse_grid, required=True,
                   help="comma-separated lambda values")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="run the kernel/Sobolev identity suites")
    _add_common(p)
    _add_sobolev_params(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, RootFindingError, ArithmeticError) as exc:
        record = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
