"""Command-line front end: ``permrd {ball,bounds,code,cover,figure,verify}``.

Exit status: 0 on success, 1 when an exact value is infeasible (the
available bounds are printed instead), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import ball_volumes as bv
from . import covering_codes as cc
from . import rd_bounds as rb
from . import verify
from .errors import DomainError, ExactComputationInfeasible, OracleScaleError


class UsageError(Exception):
    pass


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fmt(v: object) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, Fraction) and (v.denominator != 1 or v.numerator >= 10**15):
        try:
            return f"{float(v):.12g}"
        except OverflowError:
            return f"2^{rb.lg(v):.12g}"
    return str(v)


def _require_nonneg(name: str, v: int) -> None:
    if v < 0:
        raise UsageError(f"--{name} must be nonnegative")


def _require_pos(name: str, v: int) -> None:
    if v < 1:
        raise UsageError(f"--{name} must be positive")


# ---------------------------------------------------------------------------
# subcommands


def cmd_ball(args: argparse.Namespace) -> int:
    _require_pos("n", args.n)
    _require_nonneg("r", args.r)
    n, r = args.n, args.r
    want = args.which or "exact"
    lines: list[tuple[str, str]] = []
    if want in ("exact", "all"):
        lines.append(("exact", str(bv.ball_size(args.metric, n, r))))
    if args.metric == "kendall":
        if want in ("upper", "all") and r >= 1:
            lines.append(("upper_binom", str(bv.kendall_ball_upper_binom(n, r))))
        if want in ("lower", "all"):
            if 1 <= r < n:
                lines.append(("lower_quarter", str(bv.kendall_ball_lower_quarter(n, r))))
            lines.append(("lower_floor", str(bv.kendall_ball_lower_floor(n, r))))
    else:
        rc = min(r, n - 1)
        if want in ("upper", "all"):
            b = bv.chebyshev_ball_upper_bregman(n, rc)
            lines.append(("upper_bregman", _fmt(b.value)))
            lines.append(("upper_bregman_ln", _fmt(b.ln_value)))
        if want in ("lower", "all"):
            lines.append(("lower_vdw", str(bv.chebyshev_ball_lower(n, rc))))
    if want == "exact":
        _out(lines[0][1])
    else:
        for k, v in lines:
            _out(f"{k}: {v}")
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    _require_pos("n", args.n)
    _require_pos("D", args.D)
    basis = {"worst": "worst_case", "average": "average"}[args.basis]
    q = rb.DistortionQuery(args.metric, args.n, args.D)
    rows = list(rb.nonasymptotic_bounds(q, basis).rows())
    if args.metric == "kendall" and 4 * args.D < args.n * (args.n - 1):
        lo = rb.kendall_A_lower(args.n, args.D)
        up, branch = rb.kendall_A_upper(args.n, args.D)
        rows.append(("kendall_A_lower", _fmt(lo["worst" if basis == "worst_case" else "average"])))
        rows.append((f"kendall_A_upper ({branch})", _fmt(up)))
    if args.metric == "chebyshev" and args.D < args.n:
        cb = rb.chebyshev_rate_bounds(Fraction(args.D, args.n), args.n, basis)
        rows.append(("chebyshev_rate_lower (leading term)", _fmt(cb.lower_rate)))
        rows.append(("chebyshev_rate_upper (leading term)", _fmt(cb.upper_rate)))
    if args.format == "csv":
        _out(rb.format_csv(["quantity", "value"], rows))
    else:
        width = max(len(k) for k, _ in rows)
        for k, v in rows:
            _out(f"{k:<{width}}  {v}")
    return 0


def cmd_code(args: argparse.Namespace) -> int:
    _require_pos("n", args.n)
    if not 1 <= args.d <= args.n - 1:
        raise UsageError("--d must satisfy 1 <= d <= n-1")
    code = cc.construction_code(args.n, args.d)
    _out(f"n={args.n} d={args.d} size={code.size}")
    if args.emit:
        cc.write_codeword_file(code, args.emit)
        _out(f"wrote {code.size} codewords to {args.emit}")
    if args.verify:
        radius = cc.covering_radius(code)
        _out(f"radius={radius}")
        ok = radius == args.d and code.size == cc.construction_size(args.n, args.d)
        _out("OK" if ok else "FAIL")
        return 0 if ok else 1
    return 0


def cmd_cover(args: argparse.Namespace) -> int:
    _require_pos("n", args.n)
    _require_nonneg("D", args.D)
    if args.kind == "greedy":
        code = cc.greedy_cover(args.metric, args.n, args.D)
    else:
        code = cc.minimal_cover_exact(args.metric, args.n, args.D, args.objective)
    q_bounds = ""
    if args.D >= 1:
        q = rb.DistortionQuery(args.metric, args.n, args.D)
        q_bounds = (f" sphere_lower={_fmt(float(rb.sphere_covering_lower(q)))}"
                    f" stein_upper={_fmt(rb.stein_upper(q).value)}")
    _out(f"{code.provenance} metric={args.metric} n={args.n} size={code.size}{q_bounds}")
    if code.optimal is False:
        _out("warning: time limit reached, size not proven minimal")
    if args.emit:
        cc.write_codeword_file(code, args.emit)
    else:
        for w in code:
            _out(str(w))
    return 0


def _parse_grid(spec: str, integer: bool) -> list:
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"grid spec must be start:stop[:step], got {spec!r}")
    try:
        start, stop = Fraction(parts[0]), Fraction(parts[1])
        step = Fraction(parts[2]) if len(parts) == 3 else Fraction(1)
    except ValueError as exc:
        raise UsageError(f"bad grid spec {spec!r}") from exc
    if step <= 0 or stop < start:
        raise UsageError(f"bad grid spec {spec!r}")
    out = []
    k = 0
    while start + k * step <= stop:
        out.append(start + k * step)
        k += 1
    if integer:
        if any(v.denominator != 1 for v in out):
            raise UsageError("fig1 grid must be integer D values")
        out = [int(v) for v in out]
    return out


def cmd_figure(args: argparse.Namespace) -> int:
    grid = _parse_grid(args.grid, integer=args.fig == "fig1") if args.grid else None
    header, rows = rb.figure_data(args.fig, n=args.n, grid=grid)
    text = rb.format_csv(header, rows)
    if args.format == "text":  # CSV unless asked otherwise
        text = "\n".join("  ".join(f"{c:>14}" for c in line.split(",")) for line in text.splitlines()) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        _out(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = verify.run_all(max_n=args.max_n, echo=_out)
    failed = sum(not r.ok for r in results)
    _out(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="accepted and ignored; everything is deterministic")
    common.add_argument("--format", choices=("text", "csv"), default=None)

    p = argparse.ArgumentParser(prog="permrd", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("ball", parents=[common], help="ball sizes and bounds")
    b.add_argument("--metric", choices=("kendall", "chebyshev"), required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    g = b.add_mutually_exclusive_group()
    for w in ("exact", "upper", "lower", "all"):
        g.add_argument(f"--{w}", dest="which", action="store_const", const=w)
    b.set_defaults(func=cmd_ball)

    bd = sub.add_parser("bounds", parents=[common], help="code-size and rate bounds")
    bd.add_argument("--metric", choices=("kendall", "chebyshev"), required=True)
    bd.add_argument("--n", type=int, required=True)
    bd.add_argument("--D", type=int, required=True)
    bd.add_argument("--basis", choices=("worst", "average"), default="worst")
    bd.set_defaults(func=cmd_bounds)

    c = sub.add_parser("code", parents=[common], help="the block construction")
    csub = c.add_subparsers(dest="action", required=True)
    cons = csub.add_parser("construct", parents=[common])
    cons.add_argument("--n", type=int, required=True)
    cons.add_argument("--d", type=int, required=True)
    cons.add_argument("--emit", metavar="PATH")
    cons.add_argument("--verify", action="store_true")
    cons.set_defaults(func=cmd_code)

    cv = sub.add_parser("cover", parents=[common], help="greedy or exact covering codes")
    cvsub = cv.add_subparsers(dest="kind", required=True)
    for kind in ("greedy", "exact"):
        k = cvsub.add_parser(kind, parents=[common])
        k.add_argument("--metric", choices=("kendall", "chebyshev"), required=True)
        k.add_argument("--n", type=int, required=True)
        k.add_argument("--D", type=int, required=True)
        k.add_argument("--emit", metavar="PATH")
        if kind == "exact":
            k.add_argument("--objective", choices=("worst", "average"), default="worst")
        k.set_defaults(func=cmd_cover)

    f = sub.add_parser("figure", parents=[common], help="figure data as CSV")
    f.add_argument("fig", choices=("fig1", "fig2", "fig3"))
    f.add_argument("--n", type=int, default=None)
    f.add_argument("--grid", metavar="START:STOP[:STEP]")
    f.add_argument("--out", metavar="PATH")
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", parents=[common], help="run the oracle/property suite")
    v.add_argument("target", choices=("all",))
    v.add_argument("--max-n", type=int, default=8)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, DomainError, OracleScaleError) as exc:
        sys.stderr.write(f"permrd: error: {exc}\n")
        return 2
    except ExactComputationInfeasible as exc:
        sys.stderr.write(f"permrd: {exc}\n")
        for k, v in exc.bounds.items():
            _out(f"{k}: {_fmt(v)}")
        return 1


def run(argv: Sequence[str] | None = None) -> int:
    return main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
