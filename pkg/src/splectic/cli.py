"""Command-line front end.

Exit codes: 0 check passed, 1 negative verdict, 2 input error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import linalg as la
from .ap_group import check_block_conditions, is_ap_member
from .exceptions import NotClosedError, SplecticError
from .io import format_fraction, load_json, matrix_from_dict, subspace_from_dict, subspace_to_dict
from .mechanics import Metric, OscillatorParams, PhasePoint, default_step, simulate
from .observables import (
    GEOMETRIES,
    check_identity,
    classify_algebra,
    geometry_hamiltonian,
    jhf_components,
    structure_constants,
)
from .sform import BilinearForm, classify_subspace, orthogonal_complement

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class InputError(Exception):
    pass


def _seed() -> int:
    return int(os.environ.get("SPLECTIC_SEED", "0"))


def _rational(text: str) -> Fraction:
    try:
        return la.as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _pair(text: str) -> tuple[float, float]:
    vals = [float(_rational(v)) for v in text.split(",")]
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return vals[0], vals[1]


def _read(path: str) -> dict:
    try:
        return load_json(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _metric(tokens: list[str]) -> Metric:
    kind = tokens[0]
    if kind == "custom":
        if len(tokens) != 2:
            raise InputError("--metric custom needs a FILE argument")
        try:
            return Metric.custom(matrix_from_dict(_read(tokens[1])))
        except (SplecticError, ValueError, TypeError) as exc:
            raise InputError(f"bad custom metric: {exc}") from exc
    if len(tokens) != 1 or kind not in GEOMETRIES:
        raise InputError(f"unknown metric {' '.join(tokens)!r}")
    return Metric.named(kind)


def _emit(payload: dict, out=None) -> None:
    json.dump(payload, out or sys.stdout, indent=2)
    (out or sys.stdout).write("\n")


# -- commands -----------------------------------------------------------------

def cmd_check_ap(args) -> int:
    try:
        d = matrix_from_dict(_read(args.matrix_file))
    except (SplecticError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from exc
    size = len(d)
    n = args.n if args.n is not None else size // 2
    if size == 0 or size != 2 * n or any(len(r) != size for r in d):
        raise InputError(f"expected a {2 * n}x{2 * n} matrix, got {la.shape(d)}")
    member = is_ap_member(d, n)
    conds = check_block_conditions(d, n)
    det = la.det(d)
    _emit({
        "n": n,
        "member": member,
        "block_conditions": conds.as_dict(),
        "det": format_fraction(det),
        "det_squared_is_one": det * det == 1,
    })
    return EXIT_OK if member else EXIT_NEGATIVE


def cmd_classify(args) -> int:
    try:
        form = BilinearForm(matrix_from_dict(_read(args.form_file)))
        w = subspace_from_dict(_read(args.subspace_file))
        perp = orthogonal_complement(form, w)
        label = classify_subspace(form, w)
    except (SplecticError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from exc
    _emit({
        "subspace": subspace_to_dict(w),
        "complement": subspace_to_dict(perp),
        "classification": label.value,
    })
    return EXIT_OK


def cmd_simulate(args) -> int:
    metric = _metric(args.metric)
    try:
        params = OscillatorParams(args.mass, args.omega)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    h = args.step if args.step is not None else default_step(params)
    t_end = args.t_end if args.t_end is not None else params.period
    point0 = PhasePoint(args.x0, args.p0)
    try:
        traj = simulate(params, metric, point0, t_end, h, args.integrator)
    except ValueError as exc:
        raise InputError(str(exc)) from exc

    comps = jhf_components(params)
    mats = np.array([la.to_float(c.gram) for c in comps])
    values = np.einsum("ni,kij,nj->kn", traj.states, mats, traj.states)
    extra = {f"H{k}": values[k] for k in range(4)}
    scale = abs(values[0, 0]) or 1.0
    drift = {f"H{k}": float(np.max(np.abs(values[k] - values[k, 0]))) for k in range(4)}
    h_geom = geometry_hamiltonian(metric, params)
    geom_vals = np.einsum("ni,ij,nj->n", traj.states, la.to_float(h_geom.gram), traj.states)
    report = {
        "metric": metric.kind,
        "integrator": args.integrator,
        "samples": len(traj),
        "t_end": float(traj.times[-1]),
        "step": h,
        "max_drift": drift,
        "max_relative_drift": {k: v / scale for k, v in drift.items()},
        "hamiltonian_drift": float(np.max(np.abs(geom_vals - geom_vals[0]))),
    }
    verdict = EXIT_OK
    if args.tolerance is not None:
        report["tolerance"] = args.tolerance
        report["within_tolerance"] = bool(max(report["max_relative_drift"].values()) <= args.tolerance)
        verdict = EXIT_OK if report["within_tolerance"] else EXIT_NEGATIVE

    text = {"csv": traj.to_csv, "json": traj.to_json, "gnuplot": traj.to_gnuplot}[args.format](extra)
    if args.output in (None, "-"):
        sys.stdout.write(text)
        _emit(report, sys.stderr)
    else:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_IO
        report["output"] = args.output
        _emit(report)
    return verdict


def cmd_brackets(args) -> int:
    try:
        params = OscillatorParams(args.mass, args.omega)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    comps = jhf_components(params)
    if args.triple == "custom":
        if not args.basis:
            raise InputError("--triple custom needs --basis, e.g. H0,H1,H2")
        names = [b.strip() for b in args.basis.split(",")]
        labels = {f"H{i}": i for i in range(4)}
        if len(names) != 3 or any(nm not in labels for nm in names):
            raise InputError(f"--basis must name three of H0..H3, got {args.basis!r}")
        idx = [labels[nm] for nm in names]
        metric = _metric(args.metric or ["euclidean"])
    else:
        geom = GEOMETRIES[args.triple]
        idx = list(geom.triple)
        metric = _metric(args.metric) if args.metric else geom.metric

    identity = check_identity(params, samples=args.samples, seed=_seed())
    try:
        bs = structure_constants([comps[i] for i in idx], metric)
    except NotClosedError as exc:
        _emit({
            "error": "not closed",
            "message": str(exc),
            "metric": metric.kind,
            "basis": [comps[i].label for i in idx],
            "residual": str(exc.residual),
        })
        return EXIT_NEGATIVE
    payload = bs.as_dict() | {
        "classification": classify_algebra(bs).value,
        "identity": identity.as_dict(),
    }
    _emit(payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splectic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-ap", help="test membership of a matrix in Ap(n)")
    p.add_argument("matrix_file")
    p.add_argument("--n", type=int, default=None, help="half dimension (default: inferred)")
    p.set_defaults(func=cmd_check_ap)

    p = sub.add_parser("classify", help="orthogonal complement and type of a subspace")
    p.add_argument("form_file")
    p.add_argument("subspace_file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="integrate the D=2 isotropic oscillator")
    p.add_argument("--metric", nargs="+", default=["euclidean"], metavar="KIND",
                   help="euclidean | hyperbolic | s | custom FILE")
    p.add_argument("--mass", type=_rational, default=Fraction(1))
    p.add_argument("--omega", type=_rational, default=Fraction(1))
    p.add_argument("--x0", type=_pair, default=(1.0, 0.0), help="dualized positions, e.g. 1,0")
    p.add_argument("--p0", type=_pair, default=(0.0, 1.0), help="momenta, e.g. 0,1")
    p.add_argument("--t-end", type=float, default=None, help="default: one period")
    p.add_argument("--step", type=float, default=None, help="default: 1e-3 * 2 pi / omega")
    p.add_argument("--integrator", choices=("exact", "verlet"), default="exact")
    p.add_argument("--format", choices=("csv", "json", "gnuplot"), default="csv")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--tolerance", type=float, default=None,
                   help="fail (exit 1) if a relative invariant drift exceeds this")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("brackets", help="structure constants and algebra type of an integral triple")
    p.add_argument("--triple", choices=("euclidean", "hyperbolic", "s", "custom"), default="euclidean")
    p.add_argument("--basis", default=None, help="for --triple custom: e.g. H0,H1,H2")
    p.add_argument("--metric", nargs="+", default=None, metavar="KIND")
    p.add_argument("--mass", type=_rational, default=Fraction(1))
    p.add_argument("--omega", type=_rational, default=Fraction(1))
    p.add_argument("--samples", type=int, default=1000, help="points for the numeric identity check")
    p.set_defaults(func=cmd_brackets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
