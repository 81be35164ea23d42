"""Batch command-line front end: census tables, reconciliation reports,
solver runs, dessin export.

All outputs are deterministic: stable sort orders, rationals printed as
exact p/q strings, floats at 17 significant digits, and no timestamps
anywhere. Run metadata lives in one header line (or JSON field) that is
itself deterministic and can be dropped with --no-header.

Exit codes: 0 success, 2 usage error, 3 degenerate monodromy parameters,
4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import arith, census, dessin, solver, torus
from .errors import DegenerateParameterError, DomainError, NumericError
from .torus import ThetaTriple

MODES = {"proj": "projective", "ord": "ordinary"}
FORMATS = ("csv", "json", "md")


# ----------------------------------------------------------------------
# parsing helpers

def _parse_range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    value = int(text)
    return range(value, value + 1)


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _parse_window(text: str) -> tuple[float, float, float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"window needs x0,x1,y0,y1, got {text!r}")
    return parts[0], parts[1], parts[2], parts[3]


def _parse_seeds(text: str) -> tuple[int, int]:
    rows, cols = text.lower().split("x", 1)
    return int(rows), int(cols)


def _parse_triple(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"need three comma-separated integers, got {text!r}")
    return parts[0], parts[1], parts[2]


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (expected key=value): {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _effective(args: argparse.Namespace, dest: str, convert, default):
    """Flag wins, then config file, then the built-in default."""
    value = getattr(args, dest, None)
    if value is not None:
        return value
    config = getattr(args, "_config", {})
    if dest in config:
        return convert(config[dest])
    return default


# ----------------------------------------------------------------------
# value formatting

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return str(value)


def _render(columns, rows, fmt, header, summary=(), no_header=False) -> str:
    cells = [[_fmt(row[c]) for c in columns] for row in rows]
    if fmt == "json":
        payload = {"columns": list(columns), "rows": cells}
        if summary:
            payload["summary"] = list(summary)
        if not no_header:
            payload = {"header": header, **payload}
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        if not no_header:
            buffer.write(f"# {header}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        for line in summary:
            buffer.write(f"# {line}\n")
        return buffer.getvalue()
    # markdown
    lines = [] if no_header else [f"*{header}*", ""]
    lines.append("| " + " | ".join(columns) + " |")
    lines.append("|" + "|".join(" --- " for _ in columns) + "|")
    lines.extend("| " + " | ".join(row) + " |" for row in cells)
    if summary:
        lines.append("")
        lines.extend(f"- {line}" for line in summary)
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _common_output(args):
    fmt = _effective(args, "format", str, "csv")
    out = _effective(args, "out", str, None)
    no_header = bool(getattr(args, "no_header", False))
    return fmt, out, no_header


# ----------------------------------------------------------------------
# subcommands

def _grid(parser, args):
    n_range = _effective(args, "n_range", _parse_range, None)
    if n_range is None and getattr(args, "n", None) is not None:
        n_range = range(args.n, args.n + 1)
    N_range = _effective(args, "N_range", _parse_range, None)
    if n_range is None or N_range is None:
        parser.error("need --n-range (or --n) and --N-range")
    if len(n_range) == 0 or len(N_range) == 0:
        parser.error("ranges must be nonempty")
    return n_range, N_range


def cmd_census(parser, args) -> int:
    n_range, N_range = _grid(parser, args)
    if min(N_range) < 3:
        parser.error("census requires N >= 3")
    mode = MODES[args.mode]
    variant = _effective(args, "eps", str, "oracle")
    fmt, out, no_header = _common_output(args)
    columns = (
        "n", "N", "mode", "formula_printed", "formula_oracle",
        "oracle", "fixed", "discrepancy", "notes",
    )
    rows = []
    for n in n_range:
        for N in N_range:
            report = census.census_report(n, N, mode, variant)
            formula = census.L_proj_formula if mode == "projective" else census.L_ord_formula
            rows.append({
                "n": n, "N": N, "mode": mode,
                "formula_printed": formula(n, N, "printed"),
                "formula_oracle": formula(n, N, "oracle"),
                "oracle": report.oracle_value,
                "fixed": report.fixed_count,
                "discrepancy": report.discrepancy,
                "notes": report.notes,
            })
    header = (
        f"lame-census census n={n_range.start}..{n_range.stop - 1} "
        f"N={N_range.start}..{N_range.stop - 1} mode={mode} eps={variant} format={fmt}"
    )
    _emit(_render(columns, rows, fmt, header, no_header=no_header), out)
    return 0


def cmd_oracle(parser, args) -> int:
    n_range, N_range = _grid(parser, args)
    mode = MODES[args.mode]
    fmt, out, no_header = _common_output(args)
    columns = ("n", "N", "mode", "configs", "fixed", "orbits")
    rows = []
    for n in n_range:
        for N in N_range:
            count = torus.burnside_count(n, N, mode)
            rows.append({
                "n": n, "N": N, "mode": mode,
                "configs": count.total, "fixed": count.fixed, "orbits": count.orbits,
            })
    header = (
        f"lame-census oracle n={n_range.start}..{n_range.stop - 1} "
        f"N={N_range.start}..{N_range.stop - 1} mode={mode} format={fmt}"
    )
    _emit(_render(columns, rows, fmt, header, no_header=no_header), out)
    return 0


def _reconcile_rows(n_range, N_range, mode):
    columns = (
        "n", "N", "mode", "lhs", "closed_exact", "closed_printed", "closed_corrected",
        "mobius_value", "burnside_total", "exact_match", "printed_match", "mobius_match",
        "eps_printed", "eps_oracle", "eps_agree", "notes",
    )
    rows, summary = [], []
    for n in n_range:
        for N in N_range:
            report = census.verify_divisor_identity(n, N, mode)
            lhs = report.oracle_value
            if mode == "projective":
                exact = census.proj_divisor_sum_closed(n, N, corrected=True)
                printed = census.proj_divisor_sum_closed(n, N, corrected=False)
                corrected = exact
            else:
                exact = census.ord_divisor_sum_region(n, N)
                printed = census.ord_divisor_sum_closed(n, N, corrected=False)
                corrected = census.ord_divisor_sum_closed(n, N, corrected=True)
            def closed(d, _n=n, _mode=mode):
                if _mode == "projective":
                    return census.proj_divisor_sum_closed(_n, d, corrected=True)
                return census.ord_divisor_sum_region(_n, d)

            # Moebius-inverted exact closed form vs the direct Burnside total
            mobius = arith.moebius_invert({d: closed(d) for d in arith.divisors(N)}, N)
            total = torus.burnside_count(n, N, mode).total
            eps_printed = census.epsilon_printed(n, N)
            eps_oracle = torus.epsilon_oracle(n, N, mode)
            row = {
                "n": n, "N": N, "mode": mode, "lhs": lhs,
                "closed_exact": exact, "closed_printed": printed,
                "closed_corrected": corrected, "mobius_value": mobius,
                "burnside_total": total,
                "exact_match": exact == lhs, "printed_match": printed == lhs,
                "mobius_match": mobius == total,
                "eps_printed": eps_printed, "eps_oracle": eps_oracle,
                "eps_agree": eps_printed == eps_oracle,
                "notes": report.notes,
            }
            rows.append(row)
            if not row["printed_match"]:
                summary.append(
                    f"printed closed form mismatch at (n={n}, N={N}, {mode}): "
                    f"printed={printed} lhs={lhs}"
                )
            if not row["eps_agree"]:
                summary.append(
                    f"eps variants disagree at (n={n}, N={N}, {mode}): "
                    f"printed={eps_printed} oracle={eps_oracle}"
                )
            if not row["exact_match"] or not row["mobius_match"]:
                summary.append(f"EXACT IDENTITY BROKEN at (n={n}, N={N}, {mode})")
    if N_range.start >= 3:
        for n in n_range:
            for N in N_range:
                formula = (
                    census.L_proj_formula if mode == "projective" else census.L_ord_formula
                )
                if formula(n, N, "printed").denominator != 1:
                    summary.append(
                        f"printed-eps formula non-integral at (n={n}, N={N}, {mode})"
                    )
    return columns, rows, summary


def cmd_reconcile(parser, args) -> int:
    n_range, N_range = _grid(parser, args)
    mode = MODES[args.mode]
    fmt, out, no_header = _common_output(args)
    columns, rows, summary = _reconcile_rows(n_range, N_range, mode)
    header = (
        f"lame-census reconcile n={n_range.start}..{n_range.stop - 1} "
        f"N={N_range.start}..{N_range.stop - 1} mode={mode} format={fmt}"
    )
    _emit(_render(columns, rows, fmt, header, summary, no_header), out)
    return 0


def cmd_verify_identities(parser, args) -> int:
    n_range, N_range = _grid(parser, args)
    modes = [MODES[args.mode]] if args.mode else ["projective", "ordinary"]
    lines = []
    broken = 0
    for mode in modes:
        _, rows, summary = _reconcile_rows(n_range, N_range, mode)
        exact_ok = all(row["exact_match"] and row["mobius_match"] for row in rows)
        lines.append(
            f"identity {mode}: exact closed form and Moebius inversion "
            f"{'OK' if exact_ok else 'BROKEN'} over n={n_range.start}..{n_range.stop - 1}, "
            f"N={N_range.start}..{N_range.stop - 1}"
        )
        broken += 0 if exact_ok else 1
        lines.extend(summary)
    text = "\n".join(lines) + "\n"
    _emit(text, _effective(args, "out", str, None))
    return 1 if broken else 0


def _solved_payload(config: solver.SolvedConfig) -> dict:
    report = config.verification
    return {
        "n": config.n,
        "tau": [config.tau.real, config.tau.imag],
        "points": [{"t": p.t, "s": p.s} for p in config.ansatz.points],
        "B": [config.B.real, config.B.imag],
        "residuals": {
            "hecke": config.residuals.hecke,
            "system": config.residuals.system,
            "ode": config.residuals.ode,
            "monodromy": config.residuals.monodromy,
        },
        "monodromy": [
            {
                "direction": c.direction,
                "value": [c.value.real, c.value.imag],
                "target": [c.target.real, c.target.imag],
                "distance": c.distance,
            }
            for c in report.monodromy
        ],
        "passed": report.passed,
    }


def cmd_solve(parser, args) -> int:
    if args.n is None or args.s is None or args.t is None:
        parser.error("solve needs --n, --s and --t")
    request = solver.SolveRequest(
        n=args.n,
        s=_parse_fraction(args.s),
        t=_parse_fraction(args.t),
        window=_effective(args, "window", _parse_window, (-0.5, 0.5, 0.3, 3.0)),
        seed_grid=_effective(args, "seeds", _parse_seeds, (12, 12)),
        tol=_effective(args, "tol", float, 1e-12),
    )
    configs = (
        solver.solve_hecke_zero(request) if args.n == 1 else solver.solve_ansatz_n2(request)
    )
    fmt, out, no_header = _common_output(args)
    header = (
        f"lame-census solve n={args.n} s={request.s} t={request.t} "
        f"window={request.window} seeds={request.seed_grid[0]}x{request.seed_grid[1]} "
        f"tol={request.tol:.17g}"
    )
    if fmt == "json":
        payload = {"roots": [_solved_payload(c) for c in configs]}
        pairs = solver.modular_pairs(configs)
        if pairs:
            payload["modular_pairs"] = [
                {"i": i, "j": j, "j_invariant_gap": gap} for i, j, gap in pairs
            ]
        if not no_header:
            payload = {"header": header, **payload}
        _emit(json.dumps(payload, indent=2) + "\n", out)
        return 0
    columns = (
        "root", "re_tau", "im_tau", "hecke", "system", "monodromy", "ode",
        "B_re", "B_im", "passed",
    )
    rows = [
        {
            "root": i,
            "re_tau": c.tau.real,
            "im_tau": c.tau.imag,
            "hecke": c.residuals.hecke,
            "system": c.residuals.system,
            "monodromy": c.residuals.monodromy,
            "ode": c.residuals.ode,
            "B_re": c.B.real,
            "B_im": c.B.imag,
            "passed": c.verification.passed,
        }
        for i, c in enumerate(configs)
    ]
    summary = [f"{len(configs)} verified root(s)"]
    for i, j, gap in solver.modular_pairs(configs):
        summary.append(
            f"roots {i} and {j} share a j-invariant (gap {gap:.3e}): "
            "likely the same equation at modular-equivalent moduli"
        )
    _emit(_render(columns, rows, fmt, header, summary, no_header), out)
    return 0


def cmd_dessin(parser, args) -> int:
    if args.theta is None or args.m is None or args.N is None:
        parser.error("dessin needs --theta, --m and --N")
    try:
        theta = ThetaTriple(*_parse_triple(args.theta))
        m = _parse_triple(args.m)
        built = dessin.dessin_from_config(theta.n, theta, m, args.N)
    except (DomainError, ValueError) as exc:
        parser.error(str(exc))
    target = dessin.quotient_dessin(built) if args.quotient else built
    fmt = _effective(args, "format", str, "dot").upper()
    if fmt not in ("DOT", "JSON"):
        parser.error(f"dessin format must be dot or json, got {fmt.lower()!r}")
    _emit(dessin.export_dessin(target, fmt), _effective(args, "out", str, None))
    return 0


# ----------------------------------------------------------------------
# parser assembly

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lame-census",
        description=(
            "Count Lame equations with finite cyclic monodromy three ways "
            "(formulas, combinatorial oracle, analytic solve) and reconcile."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mode_required=True, mode_default=None):
        p.add_argument("--config", help="key=value config file; flags win")
        p.add_argument("--format", choices=FORMATS, help="output format (default csv)")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--no-header", action="store_true", help="drop the run header")
        p.add_argument("--n", type=int, help="single order n")
        p.add_argument("--n-range", help="order range A..B")
        p.add_argument("--N-range", help="monodromy order range A..B")
        if mode_required:
            p.add_argument(
                "--mode", choices=sorted(MODES), required=mode_default is None,
                default=mode_default, help="projective (proj) or ordinary (ord)",
            )

    p_census = sub.add_parser("census", help="formula vs oracle per (n, N)")
    common(p_census)
    p_census.add_argument("--eps", choices=census.EPSILON_VARIANTS, help="epsilon variant driving the discrepancy flag (default oracle)")
    p_census.set_defaults(func=cmd_census)

    p_oracle = sub.add_parser("oracle", help="Burnside counts per (n, N)")
    common(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    p_rec = sub.add_parser("reconcile", help="divisor-sum identities and eps report")
    common(p_rec)
    p_rec.set_defaults(func=cmd_reconcile)

    p_ver = sub.add_parser("verify-identities", help="identity verdict lines")
    common(p_ver, mode_required=False)
    p_ver.add_argument("--mode", choices=sorted(MODES), help="restrict to one mode")
    p_ver.set_defaults(func=cmd_verify_identities)

    p_solve = sub.add_parser("solve", help="Newton solve for target (s, t)")
    p_solve.add_argument("--config", help="key=value config file; flags win")
    p_solve.add_argument("--format", choices=FORMATS, help="output format")
    p_solve.add_argument("--out", help="output path")
    p_solve.add_argument("--no-header", action="store_true")
    p_solve.add_argument("--n", type=int, choices=(1, 2), help="ansatz order")
    p_solve.add_argument("--s", help="target s as a fraction, e.g. 1/3")
    p_solve.add_argument("--t", help="target t as a fraction")
    p_solve.add_argument("--window", help="tau window x0,x1,y0,y1")
    p_solve.add_argument("--seeds", help="seed grid RxC")
    p_solve.add_argument("--tol", type=float, help="Newton tolerance")
    p_solve.set_defaults(func=cmd_solve)

    p_dessin = sub.add_parser("dessin", help="export a dessin (DOT or JSON)")
    p_dessin.add_argument("--config", help="key=value config file; flags win")
    p_dessin.add_argument("--format", help="dot or json (default dot)")
    p_dessin.add_argument("--out", help="output path")
    p_dessin.add_argument("--theta", help="angle triple a,b,c")
    p_dessin.add_argument("--m", help="integer length triple a,b,c")
    p_dessin.add_argument("--N", type=int, help="common denominator N")
    p_dessin.add_argument("--quotient", action="store_true", help="export the folded genus-0 dessin")
    p_dessin.set_defaults(func=cmd_dessin)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            args._config = _read_config(args.config)
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config file: {exc}")
    else:
        args._config = {}
    sub_parser = parser  # argparse reports usage errors against the main parser
    try:
        return args.func(sub_parser, args)
    except DegenerateParameterError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
