"""Command-line front end: analyze words, dump Dirichlet/band data, sweep.

Serialization here is deliberately hand-rolled: floats are written with 17
significant digits (plus a forced decimal point) so json.loads reproduces
every double bit-exactly, and repeated runs of any subcommand are
byte-identical.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    CmvTraceError,
    LambdaNotUnimodular,
    NumericalError,
    ParseError,
    ValidationError,
)
from .opuc import CIRCLE_TOL, VerblunskyWord, validate_word
from .spectra import (
    BandStructure,
    _arc_length,
    _principal_angle,
    band_edges,
    band_layout,
    dirichlet_points,
    dirichlet_weights,
    tilde_word,
)
from .traces import ResidualRecord, ResidualReport, full_report

SWEEP_LAMBDAS = (1.0 + 0j, -1.0 + 0j, 1j, cmath.exp(1j * math.pi / 5))


@dataclass(frozen=True)
class InputDocument:
    p: int
    word: VerblunskyWord
    lambdas: tuple[complex, ...] | None
    tolerances: Tolerances


@dataclass(frozen=True)
class EnsembleSpec:
    periods: tuple[int, ...]
    samples_per_period: int
    radius_max: float
    base_seed: int


# ---------------------------------------------------------------------------
# parsing


def _complex_pair(value, field: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise ParseError(f"field '{field}' must be a [re, im] pair of numbers")
    return complex(float(value[0]), float(value[1]))


def parse_input(source: str | Path) -> InputDocument:
    """Parse a document from a file path or inline JSON text.

    Anything whose first non-space character is '{' is treated as inline.
    """
    text = str(source)
    if not text.lstrip().startswith("{"):
        path = Path(text)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ParseError(f"cannot read input file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    allowed = {"p", "alpha", "lambda_list", "tolerances"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ParseError(f"unknown fields {unknown}; allowed: {sorted(allowed)}")

    p = doc.get("p")
    if not isinstance(p, int) or isinstance(p, bool):
        raise ParseError("field 'p' must be an integer")
    alpha_raw = doc.get("alpha")
    if not isinstance(alpha_raw, list):
        raise ParseError("field 'alpha' must be a list of [re, im] pairs")
    entries = [_complex_pair(v, f"alpha[{j}]") for j, v in enumerate(alpha_raw)]
    if len(entries) != p:
        raise ValidationError(f"length mismatch: p = {p} but alpha has {len(entries)} entries")
    word = validate_word(entries)

    lambdas = None
    if "lambda_list" in doc:
        raw = doc["lambda_list"]
        if not isinstance(raw, list):
            raise ParseError("field 'lambda_list' must be a list of [re, im] pairs")
        parsed = [_complex_pair(v, f"lambda_list[{j}]") for j, v in enumerate(raw)]
        for j, lam in enumerate(parsed):
            if abs(abs(lam) - 1.0) > CIRCLE_TOL:
                raise LambdaNotUnimodular(
                    f"lambda_list[{j}] has modulus {abs(lam)!r}, expected 1"
                )
        lambdas = tuple(parsed)

    tolerances = DEFAULT_TOLERANCES
    if "tolerances" in doc:
        raw = doc["tolerances"]
        if not isinstance(raw, dict):
            raise ParseError("field 'tolerances' must be an object")
        mapping = {"pass": "residual_pass", "eig": "eig", "pairing": "pairing"}
        unknown = sorted(set(raw) - set(mapping))
        if unknown:
            raise ParseError(f"unknown tolerance keys {unknown}; allowed: {sorted(mapping)}")
        updates = {}
        for key, attr in mapping.items():
            if key in raw:
                val = raw[key]
                if not isinstance(val, (int, float)) or isinstance(val, bool) or val <= 0:
                    raise ParseError(f"tolerance '{key}' must be a positive number")
                updates[attr] = float(val)
        tolerances = replace(DEFAULT_TOLERANCES, **updates)

    return InputDocument(p=p, word=word, lambdas=lambdas, tolerances=tolerances)


# ---------------------------------------------------------------------------
# deterministic serialization


def _fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _encode(value, indent: int) -> str:
    pad = " " * indent
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(isinstance(v, (int, float, str, bool)) or v is None for v in value):
            return "[" + ", ".join(_encode(v, 0) for v in value) + "]"
        inner = ",\n".join(pad + "  " + _encode(v, indent + 2) for v in value)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_encode(v, indent + 2)}" for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(value) -> str:
    return _encode(value, 0) + "\n"


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _maybe_pair(z) -> list[float] | None:
    return None if z is None else _pair(z)


def _finite_or_none(x) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return float(x)


# ---------------------------------------------------------------------------
# payload builders


def _record_payload(rec: ResidualRecord) -> dict:
    return {
        "formula_id": rec.formula_id,
        "lambda": _maybe_pair(rec.lam),
        "lhs": _maybe_pair(rec.lhs),
        "rhs": _maybe_pair(rec.rhs),
        "residual": _finite_or_none(rec.residual),
        "applicable": bool(rec.applicable),
        "method_tags": list(rec.method_tags),
        "error": rec.error,
    }


def _report_payload(report: ResidualReport) -> dict:
    return {
        "word": [_pair(a) for a in report.word],
        "lambdas": [_pair(l) for l in report.lambdas],
        "tolerance": float(report.tolerance),
        "max_residual": _finite_or_none(report.max_residual),
        "records": [_record_payload(r) for r in report.records],
        "pass": bool(report.passed),
    }


def _layout_payload(layout: BandStructure) -> dict:
    return {
        "bands": [[_pair(a), _pair(b)] for a, b in layout.bands],
        "gaps": [[_pair(a), _pair(b)] for a, b in layout.gaps],
        "pairing": [int(i) for i in layout.pairing],
        "degenerate": [bool(d) for d in layout.degenerate],
    }


def _capture_warnings():
    ctx = warnings.catch_warnings(record=True)
    caught = ctx.__enter__()
    warnings.simplefilter("always")
    return ctx, caught


def _warning_strings(caught) -> list[str]:
    return sorted({f"{w.category.__name__}: {w.message}" for w in caught})


def analyze_document(doc: InputDocument) -> dict:
    """Full analysis payload for one word (the analyze subcommand)."""
    tol = doc.tolerances
    lambdas = doc.lambdas if doc.lambdas is not None else (1.0 + 0j,)
    ctx, caught = _capture_warnings()
    try:
        word = doc.word
        fin = tilde_word(word)
        points = dirichlet_points(word, eig_tol=tol.eig, cluster_tol=tol.cluster)
        weights = dirichlet_weights(word, points)
        plus, minus = band_edges(word, eig_tol=tol.eig, cluster_tol=tol.cluster)
        layout = band_layout(plus, minus, points, gap_tol=tol.gap, pairing_tol=tol.pairing)
        report = full_report(
            word, lambdas, tolerance=tol.residual_pass, tolerances=tol
        )
    finally:
        ctx.__exit__(None, None, None)
    return {
        "word": [_pair(a) for a in word.alpha],
        "tilde_word": [_pair(a) for a in fin.alpha],
        "dirichlet": {
            "points": [_pair(z) for z in points],
            "weights": [float(w) for w in weights],
        },
        "band_edges": {
            "plus": [_pair(z) for z in plus.expanded()],
            "minus": [_pair(z) for z in minus.expanded()],
        },
        "layout": _layout_payload(layout),
        "residuals": [_record_payload(r) for r in report.records],
        "warnings": _warning_strings(caught),
        "pass": bool(report.passed),
    }


def run_analyze(doc: InputDocument) -> tuple[str, bool]:
    payload = analyze_document(doc)
    return to_json(payload), payload["pass"]


def dirichlet_payload(doc: InputDocument) -> dict:
    tol = doc.tolerances
    ctx, caught = _capture_warnings()
    try:
        fin = tilde_word(doc.word)
        points = dirichlet_points(doc.word, eig_tol=tol.eig, cluster_tol=tol.cluster)
        weights = dirichlet_weights(doc.word, points)
    finally:
        ctx.__exit__(None, None, None)
    return {
        "word": [_pair(a) for a in doc.word.alpha],
        "tilde_word": [_pair(a) for a in fin.alpha],
        "points": [_pair(z) for z in points],
        "weights": [float(w) for w in weights],
        "warnings": _warning_strings(caught),
    }


def bands_payload(doc: InputDocument) -> dict:
    tol = doc.tolerances
    ctx, caught = _capture_warnings()
    try:
        points = dirichlet_points(doc.word, eig_tol=tol.eig, cluster_tol=tol.cluster)
        plus, minus = band_edges(doc.word, eig_tol=tol.eig, cluster_tol=tol.cluster)
        layout = band_layout(plus, minus, points, gap_tol=tol.gap, pairing_tol=tol.pairing)
    finally:
        ctx.__exit__(None, None, None)
    return {
        "word": [_pair(a) for a in doc.word.alpha],
        "band_edges": {
            "plus": [_pair(z) for z in plus.expanded()],
            "minus": [_pair(z) for z in minus.expanded()],
        },
        "layout": _layout_payload(layout),
        "warnings": _warning_strings(caught),
    }


def dirichlet_csv(payload: dict) -> str:
    rows = ["index,re,im,arg_radians,weight"]
    for i, (pt, w) in enumerate(zip(payload["points"], payload["weights"])):
        z = complex(pt[0], pt[1])
        rows.append(
            f"{i},{_fmt_float(z.real)},{_fmt_float(z.imag)},"
            f"{_fmt_float(_principal_angle(z))},{_fmt_float(w)}"
        )
    return "\n".join(rows) + "\n"


def bands_csv(payload: dict) -> str:
    """One row per band; the degenerate flag describes the gap after it."""
    rows = ["index,re,im,arg_radians,band_start,band_end,degenerate"]
    layout = payload["layout"]
    for i, (start, end) in enumerate(layout["bands"]):
        z = complex(start[0], start[1])
        a = _principal_angle(z)
        b_angle = _principal_angle(complex(end[0], end[1]))
        b = a + ((b_angle - a) % (2.0 * math.pi))
        flag = "true" if layout["degenerate"][i] else "false"
        rows.append(
            f"{i},{_fmt_float(z.real)},{_fmt_float(z.imag)},{_fmt_float(a)},"
            f"{_fmt_float(a)},{_fmt_float(b)},{flag}"
        )
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# random sweeps


def draw_word(p: int, radius_max: float, seed: int) -> VerblunskyWord:
    """One word with entries uniform on the disk of radius radius_max.

    Draw order is pinned (angle, then radius via sqrt of a uniform) so a
    seed identifies the same word everywhere.
    """
    rng = np.random.default_rng(seed)
    entries = []
    for _ in range(p):
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        r = radius_max * math.sqrt(float(rng.uniform()))
        entries.append(complex(r * math.cos(theta), r * math.sin(theta)))
    return validate_word(entries)


def _validate_spec(spec: EnsembleSpec) -> None:
    if not spec.periods:
        raise ValidationError("ensemble needs at least one period")
    for p in spec.periods:
        if p < 2 or p % 2:
            raise ValidationError(f"periods must be even and >= 2, got {p}")
    if spec.samples_per_period < 1:
        raise ValidationError("samples_per_period must be >= 1")
    if not 0.0 < spec.radius_max < 1.0:
        raise ValidationError(f"radius_max must lie in (0, 1), got {spec.radius_max!r}")


def sweep_summary(
    spec: EnsembleSpec,
    *,
    tolerance: float = 1e-8,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> dict:
    _validate_spec(spec)
    period_rows = []
    overall = 0.0
    all_pass = True
    for p in spec.periods:
        max_residual = 0.0
        worst_sample = 0
        failures = []
        for i in range(spec.samples_per_period):
            word = draw_word(p, spec.radius_max, spec.base_seed + i)
            report = full_report(
                word, SWEEP_LAMBDAS, tolerance=tolerance, tolerances=tolerances
            )
            res = report.max_residual
            if res > max_residual:
                max_residual = res
                worst_sample = i
            if not report.passed:
                all_pass = False
                failures.append(
                    {
                        "sample": i,
                        "max_residual": _finite_or_none(res),
                        "errors": sorted(
                            {r.error for r in report.records if r.error and r.applicable}
                        ),
                    }
                )
        overall = max(overall, max_residual)
        period_rows.append(
            {
                "period": p,
                "samples": spec.samples_per_period,
                "max_residual": _finite_or_none(max_residual),
                "worst_sample": worst_sample,
                "failures": failures,
            }
        )
    return {
        "spec": {
            "periods": list(spec.periods),
            "samples_per_period": spec.samples_per_period,
            "radius_max": float(spec.radius_max),
            "base_seed": spec.base_seed,
        },
        "lambdas": [_pair(l) for l in SWEEP_LAMBDAS],
        "tolerance": float(tolerance),
        "max_residual": _finite_or_none(overall),
        "periods": period_rows,
        "pass": all_pass,
    }


def run_random_sweep(
    spec: EnsembleSpec,
    *,
    tolerance: float = 1e-8,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> str:
    return to_json(sweep_summary(spec, tolerance=tolerance, tolerances=tolerances))


def sweep_csv(summary: dict) -> str:
    rows = ["period,samples,max_residual,worst_sample,n_failures,pass"]
    for row in summary["periods"]:
        res = row["max_residual"]
        res_txt = _fmt_float(res) if res is not None else "null"
        flag = "true" if not row["failures"] else "false"
        rows.append(
            f"{row['period']},{row['samples']},{res_txt},{row['worst_sample']},"
            f"{len(row['failures'])},{flag}"
        )
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# argparse front end


def _parse_lambda_flags(texts) -> tuple[complex, ...] | None:
    if not texts:
        return None
    out = []
    for t in texts:
        parts = t.split(",")
        if len(parts) != 2:
            raise ParseError(f"--lambda expects 're,im', got {t!r}")
        try:
            lam = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ParseError(f"--lambda expects 're,im', got {t!r}") from exc
        if abs(abs(lam) - 1.0) > CIRCLE_TOL:
            raise LambdaNotUnimodular(f"--lambda {t!r} has modulus {abs(lam)!r}")
        out.append(lam)
    return tuple(out)


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--tol", type=float, default=1e-8, help="pass/fail residual tolerance")
    shared.add_argument(
        "--lambda",
        dest="lambdas",
        action="append",
        metavar="RE,IM",
        help="unimodular rotation (repeatable); overrides the document's lambda_list",
    )
    shared.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    shared.add_argument("--seed", type=int, default=42, help="base seed (sweep only)")
    needs_input = argparse.ArgumentParser(add_help=False)
    needs_input.add_argument(
        "--input", required=True, help="input document: a file path or inline JSON"
    )

    parser = argparse.ArgumentParser(
        prog="cmvtrace",
        description="Dirichlet data, band structure, and trace-identity residuals "
        "for periodic Verblunsky coefficient words.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[shared, needs_input], help="full report for one word")
    sub.add_parser("dirichlet", parents=[shared, needs_input], help="Dirichlet points and weights")
    sub.add_parser("bands", parents=[shared, needs_input], help="band edges and gap layout")
    sub.add_parser("trace-check", parents=[shared, needs_input], help="residual records only")
    sweep = sub.add_parser("sweep", parents=[shared], help="random-ensemble residual sweep")
    sweep.add_argument("--periods", default="2,4,6,8", help="comma-separated even periods")
    sweep.add_argument("--samples", type=int, default=200, help="words per period")
    sweep.add_argument("--radius", type=float, default=0.9, help="disk radius for draws")
    return parser


def _with_overrides(doc: InputDocument, args) -> InputDocument:
    lambdas = _parse_lambda_flags(args.lambdas)
    if lambdas is not None:
        doc = replace(doc, lambdas=lambdas)
    if args.tol != 1e-8:
        doc = replace(doc, tolerances=replace(doc.tolerances, residual_pass=args.tol))
    return doc


def _dispatch(args) -> tuple[str, bool]:
    if args.command == "sweep":
        try:
            periods = tuple(int(x) for x in args.periods.split(",") if x.strip())
        except ValueError as exc:
            raise ParseError(f"--periods expects comma-separated integers: {exc}") from exc
        spec = EnsembleSpec(
            periods=periods,
            samples_per_period=args.samples,
            radius_max=args.radius,
            base_seed=args.seed,
        )
        summary = sweep_summary(spec, tolerance=args.tol)
        text = sweep_csv(summary) if args.fmt == "csv" else to_json(summary)
        return text, summary["pass"]

    doc = _with_overrides(parse_input(args.input), args)
    if args.command == "analyze":
        text, passed = run_analyze(doc)
        return text, passed
    if args.command == "dirichlet":
        payload = dirichlet_payload(doc)
        return (dirichlet_csv(payload) if args.fmt == "csv" else to_json(payload)), True
    if args.command == "bands":
        payload = bands_payload(doc)
        return (bands_csv(payload) if args.fmt == "csv" else to_json(payload)), True
    if args.command == "trace-check":
        lambdas = doc.lambdas if doc.lambdas is not None else (1.0 + 0j,)
        report = full_report(
            doc.word,
            lambdas,
            tolerance=doc.tolerances.residual_pass,
            tolerances=doc.tolerances,
        )
        return to_json(_report_payload(report)), report.passed
    raise ParseError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        text, passed = _dispatch(args)
    except (ParseError, ValidationError) as exc:
        sys.stdout.write(
            to_json({"error": {"type": type(exc).__name__, "message": str(exc)}})
        )
        return 2
    except NumericalError as exc:
        sys.stdout.write(
            to_json({"error": {"type": type(exc).__name__, "message": str(exc)}})
        )
        return 3
    except CmvTraceError as exc:
        sys.stdout.write(
            to_json({"error": {"type": type(exc).__name__, "message": str(exc)}})
        )
        return 2
    sys.stdout.write(text)
    return 0 if passed else 1
