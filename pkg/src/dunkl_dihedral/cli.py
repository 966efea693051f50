"""Command-line entry point: ``python -m dunkl_dihedral <command> ...``.

Exit codes: 0 when everything behaves as expected, 1 when a check fails,
2 for invalid flags or parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import forms, harmonic, quadrature, weight
from .exceptions import DunklError, MirrorLineError, ParameterError
from .report import FLOAT_DIGITS, canonical_json
from .scalars import Params
from .verify import TOLERANCES, run_verify

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
DEFAULT_WEIGHT_POINTS = 48


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Invalid(message)


class _Invalid(Exception):
    pass


def _tol_pair(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    if name not in TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"unknown tolerance {name!r}; choose from {', '.join(sorted(TOLERANCES))}"
        )
    try:
        tol = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {value!r} is not a number") from None
    if not tol >= 0:
        raise argparse.ArgumentTypeError("tolerances must be nonnegative")
    return name, tol


def _nonnegative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, required=True, help="dihedral order, m >= 3")
    common.add_argument("--ell", type=int, required=True,
                        help="representation label, 1 <= ell <= (m-1)//2")
    common.add_argument("--kappa", type=float, default=0.0, help="parameter, |kappa| < 1/2")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the artifact here instead of stdout")

    parser = _Parser(prog="dunkl-dihedral", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basis", parents=[common], help="harmonic basis polynomials")
    p.add_argument("--degree", type=_nonnegative, default=2)
    p.add_argument("--style", choices=("orthogonal", "raw"), default="orthogonal")

    p = sub.add_parser("norms", parents=[common], help="closed norms against the pairing")
    p.add_argument("--degree", type=_nonnegative, default=None, help="default 2m+2")

    p = sub.add_parser("gram", parents=[common], help="Gram matrix of the harmonic basis")
    p.add_argument("--degree", type=_nonnegative, default=None, help="default 2m+2")
    p.add_argument("--style", choices=("orthogonal", "raw"), default="orthogonal")

    p = sub.add_parser("weight", parents=[common], help="kernel values on a theta grid")
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--points", type=_positive, default=DEFAULT_WEIGHT_POINTS,
                      help="uniform grid theta = 2 pi i / points")
    grid.add_argument("--theta", type=float, nargs="+", help="explicit angles in radians")

    p = sub.add_parser("verify", parents=[common], help="run every identity check")
    p.add_argument("--degree", type=_nonnegative, default=None, help="default 2m+2")
    p.add_argument("--nodes", type=_positive, default=quadrature.DEFAULT_ANGULAR_LEVEL,
                   help="angular tanh-sinh level")
    p.add_argument("--level", type=_positive, default=quadrature.DEFAULT_SINGULAR_LEVEL,
                   help="tanh-sinh level for the one-dimensional integrals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-polys", type=_positive, default=50)
    p.add_argument("--tol-override", type=_tol_pair, action="append", default=[],
                   metavar="NAME=VALUE")
    p.add_argument("--timings", action="store_true",
                   help="include per-check seconds (makes output nondeterministic)")
    return parser


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _params_echo(params: Params) -> dict:
    return {"m": params.m, "ell": params.ell, "kappa": params.kappa}


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format(x, f".{FLOAT_DIGITS}g") if isinstance(x, float) else x
                         for x in row])
    return buf.getvalue()


def cmd_basis(params: Params, degree: int, style: str, fmt: str) -> tuple:
    entries = []
    for n in range(degree + 1):
        labels = harmonic.degree_labels(n, params, style)
        for lab, poly in zip(labels, harmonic.degree_basis(n, params, style)):
            entries.append({"label": lab.name, "degree": n, "terms": poly.to_records()})
    if fmt == "json":
        text = canonical_json({"params": _params_echo(params), "style": style,
                               "basis": entries})
    else:
        rows = [(e["label"], e["degree"], r["a"], r["b"], r["component"], r["re"], r["im"])
                for e in entries for r in e["terms"]]
        text = _csv(("label", "degree", "a", "b", "component", "re", "im"), rows)
    return text, [f"{len(entries)} basis polynomials through degree {degree}"], True


def cmd_norms(params: Params, degree: int, fmt: str) -> tuple:
    rows = []
    for lab in harmonic.harmonic_labels(degree, params):
        p = harmonic.label_poly(lab, params)
        closed = forms.closed_norm(lab, params)
        computed = forms.pairing(p, p, params)
        rel = abs(computed - closed) / abs(closed) if closed else abs(computed)
        rows.append({"label": lab.name, "family": lab.family, "n": lab.n,
                     "closed": closed, "computed": computed.real,
                     "computed_imag": computed.imag, "rel_err": rel})
    worst = max(r["rel_err"] for r in rows)
    if fmt == "json":
        text = canonical_json({"params": _params_echo(params), "norms": rows})
    else:
        keys = ("label", "family", "n", "closed", "computed", "computed_imag", "rel_err")
        text = _csv(keys, [[r[k] for k in keys] for r in rows])
    return text, [f"{len(rows)} norms, worst relative error {worst:.3e}"], True


def cmd_gram(params: Params, degree: int, style: str, fmt: str) -> tuple:
    labels = harmonic.harmonic_labels(degree, params, style)
    g = forms.label_gram(labels, params)
    names = [lab.name for lab in labels]
    if fmt == "json":
        text = canonical_json({
            "params": _params_echo(params),
            "style": style,
            "labels": names,
            "re": g.entries.real.tolist(),
            "im": g.entries.imag.tolist(),
            "positive_definite": g.is_positive_definite(),
            "offdiagonal_ratio": g.offdiagonal_ratio(),
        })
    else:
        rows = [(names[i], names[j], g.entries[i, j].real, g.entries[i, j].imag)
                for i in range(len(names)) for j in range(len(names))]
        text = _csv(("row", "col", "re", "im"), rows)
    summary = [f"{len(names)} x {len(names)} Gram matrix, "
               f"positive definite: {g.is_positive_definite()}"]
    return text, summary, True


def weight_rows(params: Params, thetas) -> tuple:
    """Kernel rows at each angle plus notices for skipped wall points."""
    rows, notices = [], []
    det_real = weight.det_K_closed(params)
    for theta in thetas:
        z = complex(math.cos(theta), math.sin(theta))
        try:
            K = weight.K_at(z, params)
        except MirrorLineError:
            notices.append(f"skipped theta = {theta!r}: on a mirror line")
            continue
        eig = np.linalg.eigvalsh(K)
        rows.append({
            "theta": float(theta),
            "K11": float(K[0, 0].real),
            "K12re": float(K[0, 1].real),
            "K12im": float(K[0, 1].imag),
            "K22": float(K[1, 1].real),
            "det": float(np.linalg.det(K).real),
            "det_real_closed": det_real,
            "min_eig": float(eig[0]),
        })
    return rows, notices


def cmd_weight(params: Params, thetas, fmt: str) -> tuple:
    rows, notices = weight_rows(params, thetas)
    if fmt == "json":
        text = canonical_json({"params": _params_echo(params), "basis": "t, tbar",
                               "rows": rows, "skipped": len(notices)})
    else:
        keys = ("theta", "K11", "K12re", "K12im", "K22", "det", "det_real_closed", "min_eig")
        text = _csv(keys, [[r[k] for k in keys] for r in rows])
    return text, notices + [f"{len(rows)} rows, {len(notices)} skipped"], True


def cmd_verify(params: Params, degree, nodes, level, seed, random_polys, overrides,
               timings, fmt) -> tuple:
    report = run_verify(params, degree=degree, angular_level=nodes, singular_level=level,
                        seed=seed, random_count=random_polys, tol_override=dict(overrides))
    if fmt == "json":
        text = report.to_json(timings=timings)
    else:
        keys = ["name", "status", "computed", "tolerance", "expect_pass"]
        if timings:
            keys.append("seconds")
        text = _csv(keys, [[c.to_dict(True)[k] for k in keys] for c in report.checks])
    summary = report.summary_lines() + [f"overall: {'pass' if report.ok else 'FAIL'}"]
    return text, summary, report.ok


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------


def _dispatch(args) -> tuple:
    params = Params(args.m, args.ell, args.kappa)
    params.require_integrable()
    degree = getattr(args, "degree", None)
    if degree is None:
        degree = 2 * params.m + 2
    if args.command == "basis":
        return cmd_basis(params, degree, args.style, args.format)
    if args.command == "norms":
        return cmd_norms(params, degree, args.format)
    if args.command == "gram":
        return cmd_gram(params, degree, args.style, args.format)
    if args.command == "weight":
        thetas = args.theta if args.theta else [2 * math.pi * i / args.points
                                                for i in range(args.points)]
        return cmd_weight(params, thetas, args.format)
    return cmd_verify(params, degree, args.nodes, args.level, args.seed, args.random_polys,
                      args.tol_override, args.timings, args.format)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text, summary, ok = _dispatch(args)
    except (_Invalid, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DunklError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print("\n".join(summary))
    else:
        sys.stdout.write(text)
        print("\n".join(summary), file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK_FAILED
