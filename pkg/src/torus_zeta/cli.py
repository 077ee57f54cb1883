"""Command line front end: ``torus-zeta <command> --config FILE``.

Exit codes: 0 success, 1 validation or check failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Sequence

from .checks import CheckResult, run_identity_suite, unsigned_relation
from .cohomology import anosov_check, euler_characteristic
from .config import ConfigError, SystemConfig, load_config
from .dynamics import ConvergenceError, FlowParams, euler_product_partial, euler_tail_bound, orbit_table
from .report import complex_to_json, orbit_table_to_json, zeta_to_json
from .zeta import (
    PoleError,
    build_zeta,
    evaluate,
    order_at,
    special_value,
    special_value_series,
    theta_spectrum,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EULER_TOL = 1e-8
SPECIAL_TOL = 1e-8
SPECTRUM_TOL = 1e-10


class UsageError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("TORUS_ZETA_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def _pmap(fn: Callable, items: Sequence) -> list:
    """Ordered parallel map; order of results never depends on completion order."""
    n = min(_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if not t:
        raise UsageError("empty number")
    try:
        return complex(t)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def parse_s_list(text: str) -> list[complex]:
    """Comma list; an item ``a:b:n`` expands to n evenly spaced points from a to b."""
    out: list[complex] = []
    for item in text.split(","):
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise UsageError(f"grid item must be start:stop:count, got {item!r}")
            a, b = parse_complex(parts[0]), parse_complex(parts[1])
            try:
                n = int(parts[2])
            except ValueError as exc:
                raise UsageError(f"grid count must be an integer, got {parts[2]!r}") from exc
            if n < 1:
                raise UsageError("grid count must be >= 1")
            out.extend(a + (b - a) * j / (n - 1) if n > 1 else a for j in range(n))
        else:
            out.append(parse_complex(item))
    return out


def _fmt(x: Any) -> str:
    if isinstance(x, complex):
        if x.imag == 0:
            return f"{x.real:.12g}"
        return f"{x.real:.12g}{x.imag:+.12g}i"
    if isinstance(x, float):
        return f"{x:.6g}"
    if x is None:
        return "-"
    return str(x)


def _json_default(o):
    if isinstance(o, complex):
        return complex_to_json(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def render_table(rows: list[dict], columns: Sequence[str]) -> str:
    cells = [[_fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells)
    return "\n".join(lines)


def render_csv(rows: list[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


class Output:
    """Accumulates a report; renders text, CSV (main table only) or JSON."""

    def __init__(self, command: str, config: SystemConfig):
        self.report: dict[str, Any] = {"command": command, "config": config.echo()}
        self.text: list[str] = []
        self.table: tuple[list[dict], Sequence[str]] | None = None
        self.ok = True

    def add_checks(self, results: Iterable[CheckResult]) -> None:
        results = list(results)
        self.report.setdefault("checks", []).extend(r.to_dict() for r in results)
        if any(not r.passed for r in results):
            self.ok = False

    def render(self, fmt: str) -> str:
        self.report["status"] = "pass" if self.ok else "fail"
        if fmt == "json":
            return json.dumps(self.report, indent=2, default=_json_default)
        if fmt == "csv":
            rows, cols = self.table if self.table else ([], [])
            return render_csv(rows, cols).rstrip("\n")
        body = list(self.text)
        if "checks" in self.report:
            body.append(render_table(self.report["checks"], ["name", "passed", "residual", "tolerance"]))
        body.append(f"status: {self.report['status']}")
        return "\n\n".join(body)


# --- commands ----------------------------------------------------------------


def cmd_validate(cfg: SystemConfig, args) -> Output:
    out = Output("validate", cfg)
    action = cfg.build_action()
    out.report["validation"] = action.report.to_dict()
    out.report["duality_enabled"] = action.duality_enabled
    out.report["betti"] = list(action.betti)
    out.report["euler_characteristic"] = euler_characteristic(action)
    rows = [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in action.report.checks]
    if action.monodromy is not None:
        anosov = anosov_check(action.monodromy, cfg.precision)
        out.report["anosov"] = anosov.to_dict()
        rows += [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in anosov.checks]
        if anosov.anosov_certificate:
            out.text.append(f"certificate: {anosov.anosov_certificate}")
    out.ok = all(r["passed"] for r in rows)
    out.table = (rows, ["check", "passed", "detail"])
    out.text.insert(0, render_table(rows, ["check", "passed", "detail"]))
    out.text.append(f"duality enabled: {action.duality_enabled}; betti = {list(action.betti)}; "
                    f"chi = {euler_characteristic(action)}")
    out.text.extend(f"note: {n}" for n in action.report.notes)
    return out


def _require_hyperbolic(cfg: SystemConfig, out: Output):
    action = cfg.build_action()
    if action.monodromy is None:
        out.ok = False
        out.report["error"] = "orbit counting needs a toral monodromy matrix"
        out.text.append("refused: orbit counting needs a toral monodromy matrix")
        return None
    anosov = anosov_check(action.monodromy, cfg.precision)
    if not anosov.passed:
        out.ok = False
        msg = "; ".join(f"{c.name}: {c.detail}" for c in anosov.failed())
        out.report["error"] = f"monodromy is not hyperbolic: {msg}"
        out.text.append(f"refused: monodromy is not hyperbolic ({msg})")
        return None
    return action


ORBIT_COLUMNS = ["m", "fix_signed", "fix_unsigned", "exact_period_points", "orbit_count", "log_norm"]


def cmd_orbits(cfg: SystemConfig, args) -> Output:
    out = Output("orbits", cfg)
    m_max = 10 if args.mmax is None else args.mmax
    if m_max < 0:
        raise UsageError("--mmax must be >= 0")
    action = _require_hyperbolic(cfg, out)
    if action is None:
        return out
    table = orbit_table(action.monodromy, m_max, FlowParams(cfg.r, cfg.convention))
    out.report["orbit_table"] = orbit_table_to_json(table)
    rows = [{c: getattr(row, c) for c in ORBIT_COLUMNS} for row in table.rows]
    out.table = (rows, ORBIT_COLUMNS)
    out.text.append(render_table(rows, ORBIT_COLUMNS) if rows else "(empty table)")
    return out


def cmd_zeta(cfg: SystemConfig, args) -> Output:
    out = Output("zeta", cfg)
    if not args.s:
        raise UsageError("zeta needs --s")
    points = parse_s_list(args.s)
    action = cfg.build_action()
    z = build_zeta(action)
    out.report["zeta_factors"] = zeta_to_json(z)
    r = cfg.r
    table = None
    if args.compare_euler is not None:
        if args.compare_euler < 0:
            raise UsageError("--compare-euler must be >= 0")
        if _require_hyperbolic(cfg, out) is None:
            return out
        table = orbit_table(action.monodromy, args.compare_euler, FlowParams(r, cfg.convention))

    def one(s: complex) -> dict:
        row: dict[str, Any] = {"s": s}
        try:
            row["value"] = evaluate(z, s, r)
        except PoleError:
            order = order_at(z, action, s, r, cfg.precision)
            row["pole_order"] = order
            row["special_value"] = special_value(z, action, s, r, cfg.precision).value
            row["note"] = f"pole/removable point: ord = {order}"
            return row
        except OverflowError as exc:
            row["note"] = f"overflow: {exc}"
            return row
        if table is not None:
            try:
                prod = euler_product_partial(table, s, FlowParams(r, cfg.convention))
            except ConvergenceError as exc:
                row["note"] = str(exc)
                return row
            target = row["value"] if cfg.convention == "signed" else 1 / row["value"]
            if cfg.convention == "unsigned":
                rel = unsigned_relation(action.monodromy, z, r, s, table.m_max)
                row["unsigned_relation"] = rel["relation"]
                target = {"equal": row["value"], "reciprocal": 1 / row["value"]}.get(rel["relation"])
            row["euler_product"] = prod
            if target is not None:
                tail = euler_tail_bound(table, s)
                row["euler_residual"] = abs(prod - target)
                row["euler_tolerance"] = EULER_TOL + abs(target) * math.expm1(tail)
                row["euler_pass"] = row["euler_residual"] < row["euler_tolerance"]
        return row

    rows = _pmap(one, points)
    out.report["evaluations"] = rows
    if any(r.get("euler_pass") is False for r in rows):
        out.ok = False
    cols = ["s", "value", "pole_order", "special_value"]
    if table is not None:
        cols += ["euler_product", "euler_residual", "euler_tolerance", "euler_pass"]
    cols.append("note")
    out.table = (rows, cols)
    factors = "\n".join(
        f"  P_{f['degree']}(u) = {f['display']}   exponent {f['exponent']:+d}" for f in out.report["zeta_factors"]["factors"]
    )
    out.text.append("zeta(u) = prod_i P_i(u)^((-1)^(i+1)),  u = r^(-s)\n" + factors)
    out.text.append(render_table(rows, cols))
    return out


def cmd_special(cfg: SystemConfig, args) -> Output:
    out = Output("special", cfg)
    if args.k is None:
        raise UsageError("special needs --k")
    k = parse_complex(args.k)
    m_max = 60 if args.mmax is None else args.mmax
    action = cfg.build_action()
    z = build_zeta(action)
    direct = special_value(z, action, k, cfg.r, cfg.precision)
    info: dict[str, Any] = {
        "k": k,
        "order": direct.order,
        "direct_value": direct.value,
        "rational_part": None if direct.rational_part is None else str(direct.rational_part),
    }
    lines = [f"k = {_fmt(k)}", f"order = {direct.order}", f"direct value = {_fmt(direct.value)}"]
    if direct.rational_part is not None:
        lines.append(f"  = {direct.rational_part} * (log r)^{direct.order}")
    try:
        series = special_value_series(action, k, cfg.r, m_max, cfg.precision)
    except ConvergenceError as exc:
        info["series"] = {"refused": True, "reason": str(exc)}
        lines.append(f"series: refused ({exc})")
    else:
        res = abs(series.value - direct.value)
        tol = SPECIAL_TOL + abs(direct.value) * math.expm1(series.tail_bound)
        info["series"] = {"refused": False, "value": series.value, "m_max": m_max, "tail_bound": series.tail_bound,
                          "residual": res, "tolerance": tol, "passed": res < tol}
        lines.append(f"series (m_max={m_max}) = {_fmt(series.value)}  |diff| = {res:.3e} (tol {tol:.1e}), "
                     f"tail bound {series.tail_bound:.3e}")
        out.ok = res < tol
    out.report["special"] = info
    row = {"k": k, "order": direct.order, "direct_value": direct.value,
           "series_value": info["series"].get("value"), "series_note": info["series"].get("reason", "")}
    out.table = ([row], list(row))
    out.text.append("\n".join(lines))
    return out


def cmd_spectrum(cfg: SystemConfig, args) -> Output:
    out = Output("spectrum", cfg)
    if args.degree is None:
        raise UsageError("spectrum needs --degree")
    vmin = -2 if args.vmin is None else args.vmin
    vmax = 2 if args.vmax is None else args.vmax
    if vmax < vmin:
        raise UsageError("--vmax must be >= --vmin")
    action = cfg.build_action()
    if not 0 <= args.degree <= action.d:
        raise UsageError(f"--degree must lie in 0..{action.d}")
    entries = theta_spectrum(action, args.degree, cfg.r, range(vmin, vmax + 1), cfg.precision)
    rows = [
        {"degree": e.degree, "alpha": e.alpha, "v": e.v, "theta": e.theta, "exp_residual": e.exp_residual(cfg.r),
         "tolerance": SPECTRUM_TOL}
        for e in entries
    ]
    out.ok = all(r["exp_residual"] < SPECTRUM_TOL for r in rows)
    out.report["spectrum"] = rows
    cols = ["degree", "alpha", "v", "theta", "exp_residual", "tolerance"]
    out.table = (rows, cols)
    out.text.append(render_table(rows, cols))
    return out


def cmd_check(cfg: SystemConfig, args) -> Output:
    out = Output("check", cfg)
    action = cfg.build_action()
    z = build_zeta(action)
    m_max = 40 if args.compare_euler is None else args.compare_euler
    out.add_checks(run_identity_suite(action, z, cfg.r, cfg.precision, m_max))
    out.table = (out.report["checks"], ["name", "passed", "residual", "tolerance"])
    return out


COMMANDS = {
    "validate": cmd_validate,
    "orbits": cmd_orbits,
    "zeta": cmd_zeta,
    "special": cmd_special,
    "spectrum": cmd_spectrum,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torus-zeta", description="Dynamical zeta functions of mapping tori.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="JSON system description")
    p.add_argument("--mmax", type=int, help="largest period (orbits; series truncation for special)")
    p.add_argument("--s", help="comma list of s values; complex like 2+1i; grids as start:stop:count")
    p.add_argument("--k", help="point for the special value (complex allowed)")
    p.add_argument("--degree", type=int, help="cohomological degree for spectrum")
    p.add_argument("--vmin", type=int)
    p.add_argument("--vmax", type=int)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--convention", choices=["signed", "unsigned"], help="overrides the config")
    p.add_argument("--precision", type=int, help="digits for root finding (1..15); overrides the config")
    p.add_argument("--compare-euler", type=int, metavar="M", help="also evaluate the Euler product up to period M")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        overrides = {}
        if args.convention:
            overrides["convention"] = args.convention
        if args.precision is not None:
            if not 1 <= args.precision <= 15:
                raise UsageError("--precision must lie in 1..15")
            overrides["precision"] = args.precision
        if overrides:
            from dataclasses import replace

            cfg = replace(cfg, **overrides)
        out = COMMANDS[args.command](cfg, args)
    except (ConfigError, UsageError) as exc:
        print(f"torus-zeta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out.render(args.format))
    return EXIT_OK if out.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
