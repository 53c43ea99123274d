"""Batch command-line interface.

Subcommands: coeffs, eval, verify, diverge, report, tables.  All output is
deterministic for a fixed configuration: JSON documents carry a
schema_version field and CSV uses '.' decimals, UTF-8 and LF endings.
Exit codes: 0 success, 2 configuration error, 3 suite failure.

The UNCLOSED_THREADS environment variable is validated and accepted as an
upper bound on parallel suite execution; the current implementation runs
single-threaded (every computation is deterministic either way).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

import mpmath as mp

from . import divergence, qseries, suites
from .expansion import compute_expansion, render_expansion
from .sequences import bernoulli_numbers, eulerian_triangle, polylog_delta_table

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SUITE = 3


@dataclass
class RunConfig:
    """Validated invocation parameters for one subcommand."""

    subcommand: str
    max_order: int = 12
    precision: int = 30
    s_values: Optional[List[str]] = None
    fmt: str = "json"
    out: Optional[str] = None
    suite: Optional[str] = None
    ebar_max: int = 30
    order: int = 2
    kind: str = "all"
    max_n: int = 16
    threads: int = 1


class ConfigError(ValueError):
    pass


def _thread_cap() -> int:
    raw = os.environ.get("UNCLOSED_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ConfigError(f"UNCLOSED_THREADS must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ConfigError("UNCLOSED_THREADS must be >= 1")
    return cap


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_coeffs(cfg: RunConfig) -> int:
    if not 1 <= cfg.max_order <= 24:
        raise ConfigError("--max-order must lie in [1, 24]")
    result = compute_expansion(cfg.max_order, precision=cfg.precision)
    _emit(render_expansion(result, cfg.fmt), cfg.out)
    return EXIT_OK


def _cmd_eval(cfg: RunConfig) -> int:
    if not cfg.s_values:
        raise ConfigError("eval needs at least one --s value")
    if not 1 <= cfg.order <= 24:
        raise ConfigError("--order must lie in [1, 24]")
    parsed = []
    for s in cfg.s_values:
        try:
            sv = mp.mpf(s)
        except ValueError as exc:
            raise ConfigError(f"bad s value: {s!r}") from exc
        if not 0 < sv <= 5:
            raise ConfigError(f"s = {s} outside the supported range (0, 5]")
        parsed.append((float(sv), s))
    parsed.sort()
    reports = [qseries.eval_report(s, order=cfg.order) for _, s in parsed]
    digits = min(cfg.precision, 20)
    rows = [
        {
            "s": r.s,
            "digits": r.digits,
            "order": r.truncation_order,
            "terms_used": r.terms_used,
            "F": mp.nstr(r.F_value, digits),
            "remainder": mp.nstr(r.remainder, digits),
            "asymptotic": mp.nstr(r.asymptotic, digits),
            "abs_err": mp.nstr(r.abs_err, 8),
            "rel_err": mp.nstr(r.rel_err, 8),
        }
        for r in reports
    ]
    if cfg.fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "kind": "eval", "rows": rows}
        _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    else:
        lines = ["s,remainder,asymptotic,rel_err"]
        for r in rows:
            lines.append(f"{r['s']},{r['remainder']},{r['asymptotic']},{r['rel_err']}")
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def _suite_doc(result: suites.SuiteResult, tag: str) -> dict:
    # no timing fields: output must be byte-identical across runs
    return {
        "suite": result.name,
        "criterion_tag": tag,
        "criterion": result.criterion,
        "ok": result.ok,
        "details": result.details,
    }


def _cmd_verify(cfg: RunConfig) -> int:
    if not cfg.suite:
        raise ConfigError("verify needs --suite")
    try:
        tag = suites.SUITES[cfg.suite][0]
    except KeyError:
        raise ConfigError(
            f"unknown suite {cfg.suite!r}; known: {', '.join(sorted(suites.SUITES))}"
        )
    result = suites.run_suite(cfg.suite)
    doc = {"schema_version": SCHEMA_VERSION, "kind": "verify", **_suite_doc(result, tag)}
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    sys.stderr.write(result.line() + "\n")
    return EXIT_OK if result.ok else EXIT_SUITE


def _cmd_report(cfg: RunConfig) -> int:
    results = suites.run_all()
    docs = [_suite_doc(r, tag) for tag, r in results]
    all_ok = all(r.ok for _, r in results)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "report",
        "all_ok": all_ok,
        "suites": docs,
    }
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    for tag, r in results:
        sys.stderr.write(f"[{tag}] {r.line()}\n")
    return EXIT_OK if all_ok else EXIT_SUITE


def _cmd_diverge(cfg: RunConfig) -> int:
    if not 6 <= cfg.max_order <= 24:
        raise ConfigError("--max-order must lie in [6, 24]")
    if not 6 <= cfg.ebar_max <= 64:
        raise ConfigError("--ebar-max must lie in [6, 64]")
    report = divergence.growth_report(max_order=cfg.max_order, ebar_max=cfg.ebar_max)
    if cfg.fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "diverge",
            "n_range": list(report.n_range),
            "ebar": [repr(x) for x in report.ebar],
            "ebar_err": [repr(x) for x in report.ebar_err],
            "fitted_rate": report.fitted_rate,
            "b_roots": [repr(x) for x in report.b_roots],
            "tail_increasing": report.tail_increasing,
            "ratio_cross_index": report.ratio_cross_index,
            "cosh_rows": [
                {
                    "level": r.level,
                    "v": r.v,
                    "ratio_re": r.ratio_re,
                    "ratio_im": r.ratio_im,
                    "target": r.target,
                    "abs_err": r.abs_err,
                }
                for r in report.cosh_rows
            ],
        }
        _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    else:
        lines = ["kind,index,value"]
        for n, x in enumerate(report.ebar):
            lines.append(f"ebar,{n},{x!r}")
        for j, x in enumerate(report.b_roots):
            lines.append(f"b_root,{j + 1},{x!r}")
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def _cmd_tables(cfg: RunConfig) -> int:
    if not 0 <= cfg.max_n <= 64:
        raise ConfigError("--max-n must lie in [0, 64]")
    if cfg.kind not in ("all", "delta", "bernoulli", "eulerian"):
        raise ConfigError("--kind must be one of all, delta, bernoulli, eulerian")
    doc = {"schema_version": SCHEMA_VERSION, "kind": "tables", "max_n": cfg.max_n}
    want = ("delta", "bernoulli", "eulerian") if cfg.kind == "all" else (cfg.kind,)
    if "delta" in want:
        table = polylog_delta_table(cfg.max_n)
        doc["delta"] = [
            {"n": n, "exact": v.render(), "value": mp.nstr(v.embed_real(cfg.precision), cfg.precision)}
            for n, v in enumerate(table.values)
        ]
    if "bernoulli" in want:
        table = bernoulli_numbers(cfg.max_n)
        doc["bernoulli"] = [{"n": n, "value": str(v)} for n, v in enumerate(table.values)]
    if "eulerian" in want:
        tri = eulerian_triangle(min(cfg.max_n, 24))
        doc["eulerian"] = [{"n": n, "row": [str(x) for x in row]} for n, row in enumerate(tri.rows)]
    if cfg.fmt == "json":
        _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    else:
        lines = ["table,n,values"]
        for key in ("delta", "bernoulli", "eulerian"):
            for row in doc.get(key, ()):
                if key == "delta":
                    lines.append(f"delta,{row['n']},{row['value']}")
                elif key == "bernoulli":
                    lines.append(f"bernoulli,{row['n']},{row['value']}")
                else:
                    lines.append(f"eulerian,{row['n']},{' '.join(row['row'])}")
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unclosed",
        description="Exact and high-precision tools for a divergent q-series expansion",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--precision", type=int, default=30, help="output decimal digits")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("coeffs", help="exact expansion coefficients")
    p.add_argument("--max-order", type=int, default=12)
    common(p)

    p = sub.add_parser("eval", help="high-precision evaluation vs. the expansion")
    p.add_argument("--s", action="append", dest="s_values", metavar="S",
                   help="evaluation point, repeatable; 0 < s <= 5")
    p.add_argument("--order", type=int, default=2, help="expansion order for comparison")
    common(p)

    p = sub.add_parser("verify", help="run one named verification suite")
    p.add_argument("--suite", required=False, choices=sorted(suites.SUITES))
    common(p)

    p = sub.add_parser("diverge", help="divergence diagnostics")
    p.add_argument("--max-order", type=int, default=12)
    p.add_argument("--ebar-max", type=int, default=30)
    common(p)

    p = sub.add_parser("report", help="run all suites and summarize")
    common(p)

    p = sub.add_parser("tables", help="dump the exact sequence tables")
    p.add_argument("--kind", choices=("all", "delta", "bernoulli", "eulerian"), default="all")
    p.add_argument("--max-n", type=int, default=16)
    common(p)

    return parser


_HANDLERS = {
    "coeffs": _cmd_coeffs,
    "eval": _cmd_eval,
    "verify": _cmd_verify,
    "diverge": _cmd_diverge,
    "report": _cmd_report,
    "tables": _cmd_tables,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig(
        subcommand=ns.subcommand,
        max_order=getattr(ns, "max_order", 12),
        precision=ns.precision,
        s_values=getattr(ns, "s_values", None),
        fmt=ns.fmt,
        out=ns.out,
        suite=getattr(ns, "suite", None),
        ebar_max=getattr(ns, "ebar_max", 30),
        order=getattr(ns, "order", 2),
        kind=getattr(ns, "kind", "all"),
        max_n=getattr(ns, "max_n", 16),
    )
    try:
        cfg.threads = _thread_cap()
        if cfg.precision < 1 or cfg.precision > 1000:
            raise ConfigError("--precision must lie in [1, 1000]")
        return _HANDLERS[cfg.subcommand](cfg)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
