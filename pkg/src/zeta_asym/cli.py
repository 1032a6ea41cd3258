"""Command-line driver: ``zeta-asym <command> [options]``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or input
error, 3 numeric failure (non-convergence, insufficient precision, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Dict, List, Optional, Sequence

import mpmath
from mpmath import mp, mpf

from . import __version__
from .coefficients import amzv_form, amzv_value, closed_form, reduce_to_zeta
from .errors import DomainError, NumericFailure, TableFormatError, VerificationFailure
from .expr import COMBINED_SHAPE, LEMMA_RULES, ExprSum, integrate_exprsum, integrate_exprsum_numeric, louchard_integrand_series
from .fit import FitConfig, extract_coeffs, significant_digits
from .hp import MIN_BITS, Precision, to_decimal
from .louchard import I_direct_sample, asymptotic_partial_sum
from .mzv import AmzvIndex, amzv_nested_sum, amzv_numeric, load_rule_table, zagier_check, zeta33_stuffle
from .parallel import parallel_map
from .relations import (
    CONJECTURE_BITS,
    conjecture1_crosscheck,
    conjecture2_test,
    from_zeta2_basis,
)

ENV_PRECISION = "ZETA_ASYM_PRECISION"
FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 256
    order_cap: int = 9
    truncation: int = 10 ** 5
    output_format: str = "text"
    rule_table_path: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.precision_bits < MIN_BITS:
            raise DomainError(f"precision must be at least {MIN_BITS} bits")
        if not 2 <= self.order_cap <= 11:
            raise DomainError("order cap must lie in [2, 11]")
        if self.truncation < 10:
            raise DomainError("truncation must be >= 10")
        if self.output_format not in FORMATS:
            raise DomainError(f"format must be one of {', '.join(FORMATS)}")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")

    @property
    def prec(self) -> Precision:
        return Precision(self.precision_bits)

    def report_view(self) -> Dict[str, object]:
        # the worker count is left out on purpose: reports must not depend on it
        return {
            "precision_bits": self.precision_bits,
            "order_cap": self.order_cap,
            "truncation": self.truncation,
            "rule_table": self.rule_table_path or "embedded",
        }


_CONFIG_KEYS = {
    "precision": ("precision_bits", int),
    "precision_bits": ("precision_bits", int),
    "order_cap": ("order_cap", int),
    "truncation": ("truncation", int),
    "format": ("output_format", str),
    "rules": ("rule_table_path", str),
    "workers": ("workers", int),
}


def read_config_file(path: str) -> Dict[str, object]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in _CONFIG_KEYS:
                raise TableFormatError(f"expected one of {sorted(_CONFIG_KEYS)} as key=value", no, raw)
            name, conv = _CONFIG_KEYS[key]
            try:
                out[name] = conv(value.strip())
            except ValueError:
                raise TableFormatError(f"bad value for {key}", no, raw) from None
    return out


def build_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    """defaults < environment < config file < flags."""
    values: Dict[str, object] = {}
    if environ.get(ENV_PRECISION):
        try:
            values["precision_bits"] = int(environ[ENV_PRECISION])
        except ValueError:
            raise DomainError(f"{ENV_PRECISION} must be an integer") from None
    if args.config:
        values.update(read_config_file(args.config))
    for flag, name in (("precision", "precision_bits"), ("order_cap", "order_cap"),
                       ("truncation", "truncation"), ("format", "output_format"),
                       ("rules", "rule_table_path"), ("workers", "workers")):
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    return RunConfig(**values)


# -- formatting helpers ----------------------------------------------------------

def num(x: mpf, bits: int, digits: Optional[int] = None) -> str:
    """Decimal string of an mpf; full precision unless ``digits`` is given."""
    if digits is None:
        return to_decimal(x, bits)
    with mp.workprec(bits):
        return mpmath.nstr(x, digits)


def _sci(x: mpf, bits: int) -> str:
    with mp.workprec(bits + 20):
        return mpmath.nstr(x, 6, min_fixed=0, max_fixed=0) if x else "0"


def make_report(command: str, cfg: RunConfig, rows: List[Dict[str, object]], passed: bool,
                columns: Sequence[str], extra: Optional[Dict[str, object]] = None) -> Dict[str, object]:
    report = {
        "command": command,
        "version": __version__,
        "config": cfg.report_view(),
        "status": "pass" if passed else "fail",
        "columns": list(columns),
        "rows": rows,
    }
    if extra:
        report.update(extra)
    return report


def render(report: Dict[str, object], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    cols = report["columns"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in report["rows"]:
            w.writerow([row.get(c, "") for c in cols])
        return buf.getvalue()
    lines = [f"# {report['command']}  ({report['status']})"]
    for note in report.get("notes", []):
        lines.append(f"# {note}")
    table = [cols] + [[str(row.get(c, "")) for c in cols] for row in report["rows"]]
    widths = [max(len(r[i]) for r in table) for i in range(len(cols))]
    for r in table:
        lines.append("  ".join(v.ljust(wd) for v, wd in zip(r, widths)).rstrip())
    for block in report.get("text_blocks", []):
        lines.append("")
        lines.append(block)
    return "\n".join(lines) + "\n"


# -- commands -------------------------------------------------------------------------

def cmd_coeffs(cfg: RunConfig, args) -> Dict[str, object]:
    bits = cfg.precision_bits
    rules = load_rule_table(cfg.rule_table_path)
    tol = cfg.prec.tolerance(32)
    rows, ok = [], True
    for j in range(0, 10):
        closed = closed_form(j)
        cval = closed.evaluate(bits)
        row = {"order": j, "closed_form": closed.to_text(), "closed_value": num(cval, bits),
               "amzv_form": "", "amzv_value": "", "difference": "", "reduces": "", "provenance": "closed-form"}
        if j >= 2:
            comb = amzv_form(j)
            row["amzv_form"] = comb.to_text()
            try:
                row["reduces"] = "yes" if reduce_to_zeta(comb, rules) == closed else "no"
            except VerificationFailure as exc:
                row["reduces"] = f"no: {exc}"
            aval, prov = amzv_value(comb, bits, rules)
            with mp.workprec(bits + 20):
                diff = abs(aval - cval)
            row["amzv_value"] = num(aval, bits)
            row["difference"] = _sci(diff, bits)
            row["provenance"] = "closed-form; " + ",".join(sorted(set(prov.values())))
            good = diff <= tol and row["reduces"] == "yes"
            ok = ok and good
        rows.append(row)
    cols = ["order", "closed_form", "amzv_form", "closed_value", "amzv_value", "difference", "reduces", "provenance"]
    return make_report("coeffs", cfg, rows, ok, cols)


def _lemma_integrand(shape, p: int, q: int) -> ExprSum:
    if shape == COMBINED_SHAPE:
        return ExprSum.term(1, p=p, k=1, q=q, r=3) - ExprSum.term(1, p=p, k=2, q=q, r=3)
    k, r = shape
    return ExprSum.term(1, p=p, k=k, q=q, r=r)


def lemma_cell(cell, bits: int, truncation: int, rules_path: Optional[str], oracle: bool = True) -> Dict[str, object]:
    """One grid point: quadrature of the integral against both evaluations of the lemma's right side."""
    name, p, q = cell
    rule = next(r for r in LEMMA_RULES if r.name == name)
    rules = load_rule_table(rules_path)
    integrand = _lemma_integrand(rule.shape, p, q)
    lhs = integrate_exprsum_numeric(integrand, bits)
    rhs = rule.apply(p, q)
    provenance = set()
    with mp.workprec(bits + 20):
        table_val = mpf(0)
        oracle_val = mpf(0)
        for coef, idx in rhs.terms:
            c = mpf(coef.numerator) / coef.denominator
            v, how = amzv_numeric(idx, bits + 20, rules)
            provenance.add(how)
            table_val += c * v
            if oracle:
                ov, _ = amzv_nested_sum(idx, truncation, bits)
                oracle_val += c * ov
        res_table = abs(lhs.value - table_val)
        res_oracle = abs(lhs.value - oracle_val) if oracle else None
    passed = res_table < mpf(10) ** -30 and (res_oracle is None or res_oracle < mpf(10) ** -6)
    return {
        "rule": name,
        "p": p,
        "q": q,
        "rhs": rhs.to_text(),
        "integral": num(lhs.value, bits, 40),
        "residual_table": _sci(res_table, bits),
        "residual_oracle": _sci(res_oracle, bits) if oracle else "",
        "provenance": ",".join(sorted(provenance)) + ("; nested-sum" if oracle else ""),
        "pass": "yes" if passed else "no",
    }


def lemma_grid(p_max: int, q_max: int, p4_max: int) -> List[tuple]:
    cells = []
    for rule in LEMMA_RULES:
        lo, hi = rule.q_range
        qs = range(lo, min(q_max, hi if hi is not None else q_max) + 1)
        if rule.shape in ((0, 0), (0, 1)):
            ps = range(0, p_max + 1)
        elif rule.p_min >= 2:
            ps = range(2, p4_max + 1)
        else:
            ps = range(1, p_max + 1)
        for p in ps:
            if p < rule.p_min:
                continue
            for q in qs:
                cells.append((rule.name, p, q))
    return cells


def cmd_verify_lemmas(cfg: RunConfig, args) -> Dict[str, object]:
    cells = lemma_grid(args.pmax, args.qmax, args.p4max)
    fn = partial(lemma_cell, bits=cfg.precision_bits, truncation=cfg.truncation,
                 rules_path=cfg.rule_table_path, oracle=not args.no_oracle)
    rows = parallel_map(fn, cells, cfg.workers)
    ok = all(r["pass"] == "yes" for r in rows)
    cols = ["rule", "p", "q", "rhs", "integral", "residual_table", "residual_oracle", "provenance", "pass"]
    notes = ["table tolerance 1e-30, nested-sum tolerance 1e-6"]
    return make_report("verify-lemmas", cfg, rows, ok, cols, {"notes": notes})


def _factor_out(s: ExprSum):
    den = math.lcm(*(t.coef.denominator for t in s.terms)) if s else 1
    return Fraction(1, den), s.scale(den)


def cmd_expand(cfg: RunConfig, args) -> Dict[str, object]:
    order = args.order
    if order and not 2 <= order <= cfg.order_cap:
        raise DomainError(f"order must lie in [2, {cfg.order_cap}], got {order}")
    orders = [order] if order else list(range(2, cfg.order_cap + 1))
    series = louchard_integrand_series(max(orders))
    rows, ok, blocks = [], True, []
    for m in orders:
        s = series[m]
        pre, body = _factor_out(s)
        row = {"order": m, "prefactor": str(pre), "integrand": body.to_text(), "amzv": "", "provenance": "symbolic"}
        text = f"n^-{m}:  ({pre}) * ({body.to_text()})"
        if args.integrate:
            try:
                comb = integrate_exprsum(s)
                inner = comb.scale(8)
                row["amzv"] = f"1/8 * ({inner.to_text()})"
                text += f"\n  integral = 1/8 [{inner.pretty()}]"
                row["provenance"] = "symbolic; lemma-rules"
            except VerificationFailure as exc:
                row["amzv"] = f"unmatched: {exc}"
                ok = False
        rows.append(row)
        blocks.append(text)
    cols = ["order", "prefactor", "integrand", "amzv", "provenance"]
    return make_report("expand", cfg, rows, ok, cols, {"text_blocks": blocks})


def cmd_eval_in(cfg: RunConfig, args) -> Dict[str, object]:
    bits = cfg.precision_bits
    M = min(cfg.order_cap, 9)
    samples = parallel_map(partial(I_direct_sample, prec=cfg.prec), args.n, cfg.workers)
    rows = []
    for s in samples:
        row = {"n": s.n, "I_direct": num(s.value, bits), "quad_error": _sci(s.error_estimate, bits),
               "provenance": "direct-quadrature"}
        if s.n >= 2:
            ps = asymptotic_partial_sum(s.n, M, bits)
            with mp.workprec(bits + 20):
                rem = s.value - ps
                scaled = rem * mpf(s.n) ** (M + 1)
            row.update({"partial_sum": num(ps, bits), "remainder": _sci(rem, bits), "scaled_remainder": _sci(scaled, bits)})
        rows.append(row)
    cols = ["n", "I_direct", "quad_error", "partial_sum", "remainder", "scaled_remainder", "provenance"]
    return make_report("eval-in", cfg, rows, True, cols, {"notes": [f"partial sum through order {M}"]})


def cmd_fit(cfg: RunConfig, args) -> Dict[str, object]:
    kwargs = {"max_order": min(cfg.order_cap, 9)}
    if args.ns:
        kwargs["sample_ns"] = args.ns
    if args.fit_precision:
        kwargs["prec"] = Precision(args.fit_precision)
    fc = FitConfig(**kwargs)
    bits = fc.prec.bits
    rows_fit = extract_coeffs(fc, workers=cfg.workers)
    rows, ok = [], True
    for r in rows_fit:
        ref = closed_form(r.order).evaluate(bits)
        with mp.workprec(bits + 20):
            err = abs(r.estimate - ref)
        within = err <= r.stability
        ok = ok and within
        digits = significant_digits(r.estimate, ref)
        rows.append({
            "order": r.order,
            "estimate": num(r.estimate, bits, 40),
            "reference": num(ref, bits, 40),
            "stability": _sci(r.stability, bits),
            "error": _sci(err, bits),
            "digits": "inf" if digits == float("inf") else f"{digits:.2f}",
            "within_stability": "yes" if within else "no",
            "provenance": "direct-quadrature fit; closed-form reference",
        })
    cols = ["order", "estimate", "reference", "error", "stability", "digits", "within_stability", "provenance"]
    notes = [f"samples n = {', '.join(map(str, fc.sample_ns))} at {bits} bits"]
    return make_report("fit", cfg, rows, ok, cols, {"notes": notes})


def _conj2_row(j: int, bits: int) -> Dict[str, object]:
    poly = conjecture2_test(j, bits)
    return {"order": j, "result": from_zeta2_basis(poly).to_text(), "zeta2_basis": poly.to_text(),
            "residual": "", "provenance": "lemma-quadrature; pslq", "pass": "yes"}


def cmd_conjecture(cfg: RunConfig, args) -> Dict[str, object]:
    orders = [args.order] if args.order else list(range(2, 10))
    if any(not 2 <= m <= 9 for m in orders):
        raise DomainError("conjecture orders must lie in [2, 9]")
    bits = cfg.precision_bits
    rows, ok = [], True
    if args.which == 1:
        for m in orders:
            res = conjecture1_crosscheck(m, bits)
            passed = res < mpf(10) ** -30
            ok = ok and passed
            rows.append({"order": m, "result": "", "zeta2_basis": "", "residual": _sci(res, bits),
                         "provenance": "lemma-quadrature", "pass": "yes" if passed else "no"})
    else:
        search_bits = args.search_precision or CONJECTURE_BITS
        results = parallel_map(partial(_conj2_safe, bits=search_bits), orders, cfg.workers)
        for row in results:
            ok = ok and row["pass"] == "yes"
            rows.append(row)
    cols = ["order", "result", "zeta2_basis", "residual", "provenance", "pass"]
    return make_report("conjecture", cfg, rows, ok, cols, {"notes": [f"conjecture {args.which}"]})


def _conj2_safe(j: int, bits: int) -> Dict[str, object]:
    try:
        return _conj2_row(j, bits)
    except VerificationFailure as exc:
        return {"order": j, "result": f"{type(exc).__name__}: {exc}", "zeta2_basis": "", "residual": "",
                "provenance": "lemma-quadrature; pslq", "pass": "no"}


def cmd_zagier(cfg: RunConfig, args) -> Dict[str, object]:
    n = args.n
    bits = cfg.precision_bits
    rows = []
    if n == 1:
        res = zagier_check(1, bits, method="lemma")
        tol = mpf(10) ** -30
        rows.append({"n": 1, "method": "lemma-quadrature vs zeta(3)/8", "residual": _sci(res, bits),
                     "tolerance": "1e-30", "pass": "yes" if res < tol else "no"})
        res2 = zagier_check(1, bits, N=cfg.truncation, method="nested")
        rows.append({"n": 1, "method": f"nested-sum both sides, N={cfg.truncation}", "residual": _sci(res2, bits),
                     "tolerance": "1e-4", "pass": "yes" if res2 < mpf(10) ** -4 else "no"})
    else:
        N = max(cfg.truncation, 10 ** 6) if n == 2 else cfg.truncation
        res = zagier_check(n, bits, N=N, method="nested")
        rows.append({"n": n, "method": f"nested-sum both sides, N={N}", "residual": _sci(res, bits),
                     "tolerance": "1e-6", "pass": "yes" if res < mpf(10) ** -6 else "no"})
        if n == 2:
            lhs, _ = amzv_nested_sum(AmzvIndex.of(-2, 1, -2, 1), N, bits)
            with mp.workprec(bits + 20):
                res3 = abs(lhs - zeta33_stuffle(bits) / 64)
            rows.append({"n": 2, "method": f"nested-sum vs stuffle zeta(3,3), N={N}", "residual": _sci(res3, bits),
                         "tolerance": "1e-6", "pass": "yes" if res3 < mpf(10) ** -6 else "no"})
    ok = all(r["pass"] == "yes" for r in rows)
    return make_report("zagier", cfg, rows, ok, ["n", "method", "residual", "tolerance", "pass"])


COMMANDS = {
    "coeffs": cmd_coeffs,
    "verify-lemmas": cmd_verify_lemmas,
    "expand": cmd_expand,
    "eval-in": cmd_eval_in,
    "fit": cmd_fit,
    "conjecture": cmd_conjecture,
    "zagier": cmd_zagier,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="working precision in bits (default 256)")
    common.add_argument("--order-cap", type=int, help="highest order handled (default 9)")
    common.add_argument("--truncation", type=int, help="nested-sum truncation N (default 100000)")
    common.add_argument("--format", choices=FORMATS, help="report format (default text)")
    common.add_argument("--rules", help="reduction table file replacing the embedded one")
    common.add_argument("--config", help="key=value file with defaults for the flags above")
    common.add_argument("--workers", type=int, help="worker processes (default 1)")

    parser = argparse.ArgumentParser(prog="zeta-asym", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("coeffs", parents=[common], help="closed and AMZV forms of I_0..I_9 side by side")

    p = sub.add_parser("verify-lemmas", parents=[common], help="integral identities on a (p, q) grid")
    p.add_argument("--pmax", type=int, default=6)
    p.add_argument("--qmax", type=int, default=5)
    p.add_argument("--p4max", type=int, default=9, help="upper p for the cubic-denominator shapes")
    p.add_argument("--no-oracle", action="store_true", help="skip the nested-sum comparison")

    p = sub.add_parser("expand", parents=[common], help="per-order integrands of the 1/n expansion")
    p.add_argument("--order", type=int, default=0, help="single order (default: all up to the cap)")
    p.add_argument("--integrate", action="store_true", help="also integrate into AMZVs")

    p = sub.add_parser("eval-in", parents=[common], help="I(n) by quadrature against the partial sum")
    p.add_argument("--n", type=int, nargs="+", required=True)

    p = sub.add_parser("fit", parents=[common], help="blind coefficient extraction from I(n) samples")
    p.add_argument("--ns", type=int, nargs="+", help="sample points (default 64*2^i, i = 0..11)")
    p.add_argument("--fit-precision", type=int, help="sample precision in bits (default 768)")

    p = sub.add_parser("conjecture", parents=[common], help="numerical checks of the two conjectures")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--order", type=int, default=0, help="single order (default 2..9)")
    p.add_argument("--search-precision", type=int, help="relation search precision for --which 2 (default 512)")

    p = sub.add_parser("zagier", parents=[common], help="zeta({2-bar,1}_n) = 8^-n zeta({3}_n)")
    p.add_argument("--n", type=int, default=1)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(args)
        report = COMMANDS[args.command](cfg, args)
    except (NumericFailure,) as exc:
        err.write(f"numeric failure: {type(exc).__name__}: {exc}\n")
        return 3
    except VerificationFailure as exc:
        err.write(f"verification failed: {type(exc).__name__}: {exc}\n")
        return 1
    except (DomainError, TableFormatError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    out.write(render(report, cfg.output_format))
    return 0 if report["status"] == "pass" else 1


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
