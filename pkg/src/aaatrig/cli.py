"""Command-line surface: data ingestion, fitting, model files, experiments.

File formats are documented in docs/FORMATS.md.  Complex numbers are
serialized as [re, im] pairs with shortest round-trip decimal formatting,
so writing a model and reading it back is bit-exact.  All numeric tables
are TSV.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import baselines, calculus, lightning, polezero, solver
from .trigbary import (
    FarField,
    Parity,
    SampleSet,
    TrigModel,
    TWO_PI,
    evaluate_batch,
)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Serialization


def _pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _pairs(zs) -> list:
    return [_pair(z) for z in np.asarray(zs, dtype=complex)]


def _unpairs(pairs) -> np.ndarray:
    return np.asarray([complex(p[0], p[1]) for p in pairs], dtype=complex)


def model_to_dict(model: TrigModel, report=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "parity": model.parity.value,
        "support": _pairs(model.support),
        "fvals": _pairs(model.fvals),
        "weights": _pairs(model.weights),
        "err_history": [float(e) for e in model.err_history],
        "scale": float(model.scale),
        "converged": bool(model.converged),
    }
    if report is not None:
        doc["polezero"] = {
            "poles": _pairs(report.poles),
            "zeros": _pairs(report.zeros),
            "residues": _pairs(report.residues),
            "constant": _pair(report.constant),
        }
    return doc


def model_from_dict(doc: dict) -> TrigModel:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema: {doc.get('schema_version')!r}")
    return TrigModel(
        Parity.from_string(doc["parity"]),
        _unpairs(doc["support"]),
        _unpairs(doc["fvals"]),
        _unpairs(doc["weights"]),
        np.asarray(doc["err_history"], dtype=float),
        float(doc["scale"]),
        converged=bool(doc.get("converged", True)),
    )


def write_model(path: str, model: TrigModel, report=None) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model, report), fh, indent=2)
        fh.write("\n")


def read_model(path: str) -> TrigModel:
    with open(path) as fh:
        return model_from_dict(json.load(fh))


def write_table(path: str, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write(
                "\t".join(
                    str(int(v)) if isinstance(v, (int, np.integer)) else repr(float(v))
                    for v in row
                )
                + "\n"
            )


# ---------------------------------------------------------------------------
# Ingestion

CSV_COLUMNS = ["re_z", "im_z", "re_f", "im_f"]


def ingest(path: str, fmt: str = "csv") -> SampleSet:
    """Load samples from CSV (header re_z,im_z,re_f,im_f) or JSON."""
    if fmt == "csv":
        points, values = _read_csv_samples(path)
    elif fmt == "json":
        with open(path) as fh:
            doc = json.load(fh)
        try:
            points = _unpairs(doc["points"])
            values = _unpairs(doc["values"])
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"{path}: malformed JSON sample file ({exc})")
        if len(points) != len(values):
            raise ValueError(f"{path}: points and values differ in length")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        return SampleSet.from_data(points, values)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}")


def _read_csv_samples(path: str):
    points, values = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CSV_COLUMNS:
            raise ValueError(f"{path}: expected header {','.join(CSV_COLUMNS)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}: line {lineno}: expected 4 columns")
            try:
                vals = [float(v) for v in row]
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: malformed number")
            points.append(complex(vals[0], vals[1]))
            values.append(complex(vals[2], vals[3]))
    return np.asarray(points, dtype=complex), np.asarray(values, dtype=complex)


def read_points(path: str, fmt: str = "csv") -> np.ndarray:
    """Load evaluation points: CSV (header re_z,im_z) or JSON {"points": ...}."""
    if fmt == "json":
        with open(path) as fh:
            return _unpairs(json.load(fh)["points"])
    points = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header][:2] != CSV_COLUMNS[:2]:
            raise ValueError(f"{path}: expected header re_z,im_z")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            try:
                points.append(complex(float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                raise ValueError(f"{path}: line {lineno}: malformed point")
    return np.asarray(points, dtype=complex)


# ---------------------------------------------------------------------------
# Commands


def _parse_finf(text: str, parity: Parity) -> FarField:
    parts = text.split(";")
    try:
        pairs = [tuple(float(v) for v in part.split(",")) for part in parts]
        vals = [complex(a, b) for a, b in pairs]
    except (ValueError, TypeError):
        raise ValueError(f"malformed --finf value {text!r}")
    if parity is Parity.EVEN:
        if len(vals) != 1:
            raise ValueError("even parity takes a single far-field value")
        return FarField(vals[0], vals[0])
    if len(vals) == 1:
        return FarField(vals[0], vals[0])
    if len(vals) == 2:
        return FarField(vals[0], vals[1])
    raise ValueError("--finf takes at most two values")


def _fit_config(args) -> solver.FitConfig:
    parity = Parity.from_string(args.parity)
    far = _parse_finf(args.finf, parity) if args.finf else None
    return solver.FitConfig(
        parity=parity,
        rel_tol=args.tol,
        max_order=args.mmax,
        cleanup=not args.no_cleanup,
        far_field=far,
    )


def _scale_in(points: np.ndarray, period: float) -> np.ndarray:
    return points * (TWO_PI / period)


def _scale_out(points: np.ndarray, period: float) -> np.ndarray:
    return np.asarray(points, dtype=complex) * (period / TWO_PI)


def cmd_fit(args) -> int:
    samples = ingest(args.data, args.format)
    if args.period != TWO_PI:
        samples = SampleSet.from_data(_scale_in(samples.points, args.period), samples.values)
    model = solver.fit(samples, _fit_config(args))
    write_model(args.out + ".model.json", model)
    write_table(
        args.out + ".errors.tsv",
        ["m", "max_err"],
        [(m + 1, e) for m, e in enumerate(model.err_history)],
    )
    print(
        f"fit: m={model.m} max_err={model.err_history[-1]:.17g} "
        f"converged={model.converged}"
    )
    return 0


def cmd_eval(args) -> int:
    model = read_model(args.model)
    pts = read_points(args.points, args.format)
    vals = evaluate_batch(model, _scale_in(pts, args.period))
    write_table(
        args.out + ".values.tsv",
        ["re_z", "im_z", "re_f", "im_f"],
        [(p.real, p.imag, v.real, v.imag) for p, v in zip(pts, vals)],
    )
    return 0


def cmd_poles(args) -> int:
    model = read_model(args.model)
    report = polezero.poles_and_zeros(model)
    factor = args.period / TWO_PI
    write_table(
        args.out + ".poles.tsv",
        ["re_pole", "im_pole", "re_res", "im_res"],
        [
            ((p * factor).real, (p * factor).imag, (r * factor).real, (r * factor).imag)
            for p, r in zip(report.poles, report.residues)
        ],
    )
    write_model(args.out + ".model.json", model, report)
    print(f"poles: {len(report.poles)} zeros: {len(report.zeros)}")
    return 0


def cmd_diff(args) -> int:
    model = read_model(args.model)
    pts = read_points(args.points, args.format)
    chain = (TWO_PI / args.period) ** args.order
    rows = []
    for p in pts:
        d = calculus.derivative_at(model, complex(p) * (TWO_PI / args.period), args.order)
        d *= chain
        rows.append((p.real, p.imag, d.real, d.imag))
    write_table(args.out + ".derivs.tsv", ["re_z", "im_z", "re_df", "im_df"], rows)
    return 0


def cmd_clean(args) -> int:
    model = read_model(args.model)
    samples = ingest(args.data, args.format)
    if args.period != TWO_PI:
        samples = SampleSet.from_data(_scale_in(samples.points, args.period), samples.values)
    config = solver.FitConfig(parity=model.parity, cleanup_tol=args.tol)
    cleaned = solver.cleanup(model, samples, config)
    write_model(args.out + ".model.json", cleaned)
    print(f"clean: m {model.m} -> {cleaned.m}")
    return 0


_COMPARE_FUNCTIONS = {
    "exp-sin": lambda z: np.exp(np.sin(z)),
    "exp": np.exp,
}


def cmd_compare_aaa(args) -> int:
    func = _COMPARE_FUNCTIONS[args.function]
    samples = baselines.rectangle_samples(func, args.n, args.seed)
    trig = solver.fit(samples, solver.FitConfig(rel_tol=args.tol, max_order=args.mmax, cleanup=False))
    aaa = baselines.aaa_fit(samples, rel_tol=args.tol, max_order=args.mmax)
    write_table(
        args.out + ".aaatrig.tsv",
        ["m", "max_err"],
        [(m + 1, e) for m, e in enumerate(trig.err_history)],
    )
    write_table(
        args.out + ".aaa.tsv",
        ["m", "max_err"],
        [(m + 1, e) for m, e in enumerate(aaa.err_history)],
    )
    print(f"compare-aaa[{args.function}]: aaatrig m={trig.m} aaa m={aaa.m}")
    return 0


def cmd_compare_fft(args) -> int:
    M = args.n
    x = TWO_PI * np.arange(M) / M
    f = np.tanh(60.0 * np.cos(x))
    samples = SampleSet.from_data(x.astype(complex), f.astype(complex))
    trig = solver.fit(samples, solver.FitConfig(rel_tol=args.tol, max_order=args.mmax, cleanup=False))
    orders = np.arange(1, args.mmax + 1)
    fft_errs = baselines.fft_least_squares_errors(samples, orders)
    write_table(
        args.out + ".aaatrig.tsv",
        ["m", "max_err"],
        [(m + 1, e) for m, e in enumerate(trig.err_history)],
    )
    write_table(args.out + ".fft.tsv", ["m", "max_err"], zip(orders, fft_errs))
    print(f"compare-fft: aaatrig m={trig.m} err={trig.err_history[-1]:.3e}")
    return 0


def cmd_lightning_demo(args) -> int:
    model = lightning.solve_flow_demo(args.per_corner, args.sigma, args.runge)
    compressed = lightning.compress(model)
    grid = lightning.interior_grid()
    vals = lightning.evaluate_lightning(model, grid)
    write_table(
        args.out + ".field.tsv",
        ["re_z", "im_z", "re_f", "im_f"],
        [(z.real, z.imag, v.real, v.imag) for z, v in zip(grid, vals)],
    )
    report = polezero.poles_and_zeros(compressed)
    write_model(args.out + ".compressed.model.json", compressed, report)
    print(
        f"lightning-demo: residual={model.boundary_residual:.3e} "
        f"poles={model.n_newman} compressed={len(report.poles)}"
    )
    return 0


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common(p: argparse.ArgumentParser, data: bool = False, model: bool = False,
                points: bool = False) -> None:
    if data:
        p.add_argument("--data", required=True, help="samples file")
    if model:
        p.add_argument("--model", required=True, help="model JSON file")
    if points:
        p.add_argument("--points", required=True, help="points file")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--period", type=float, default=TWO_PI)
    p.add_argument("--out", required=True, help="output path prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aaatrig",
        description="Adaptive trigonometric rational approximation of periodic data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a model to sampled data")
    _add_common(p, data=True)
    p.add_argument("--parity", choices=["odd", "even"], default="odd")
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--mmax", type=int, default=100)
    p.add_argument("--no-cleanup", action="store_true")
    p.add_argument("--finf", default=None, help='far-field target "re,im[;re,im]"')
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate a model at points")
    _add_common(p, model=True, points=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("poles", help="poles, zeros and residues of a model")
    _add_common(p, model=True)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("diff", help="differentiate a model at points")
    _add_common(p, model=True, points=True)
    p.add_argument("--order", type=int, default=1)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("clean", help="rerun doublet cleanup on a model")
    _add_common(p, data=True, model=True)
    p.add_argument("--tol", type=float, default=1e-13)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("compare-aaa", help="error tables: trigonometric vs classic fit")
    _add_common(p)
    p.add_argument("--function", choices=sorted(_COMPARE_FUNCTIONS), default="exp-sin")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--mmax", type=int, default=100)
    p.set_defaults(func=cmd_compare_aaa)

    p = sub.add_parser("compare-fft", help="error tables: trigonometric fit vs truncated DFT")
    _add_common(p)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--mmax", type=int, default=100)
    p.set_defaults(func=cmd_compare_fft)

    p = sub.add_parser("lightning-demo", help="periodic flow demo with compression")
    _add_common(p)
    p.add_argument("--per-corner", type=int, default=61)
    p.add_argument("--sigma", type=float, default=4.0)
    p.add_argument("--runge", type=int, default=24)
    p.set_defaults(func=cmd_lightning_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"aaatrig: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
