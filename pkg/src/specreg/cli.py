"""Command-line surface: generate datasets, regularize them, diagnose residuals.

Exit codes: 0 success; 2 bad input or usage; 3 the regularized residual
failed the discrepancy check (outputs are still written); 4 the design
matrix was rank deficient.

The environment variable SPECREG_SEED, when set, overrides --seed.
"""

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .basis import BasisFamily
from .diagnostics import whiteness_report
from .linalg import RankDeficiencyError
from .problems import (DEFAULT_M, DEFAULT_SEED, DEFAULT_SIGMA, NoiseSpec,
                       abel_problem, craig_brown, cubic_problem, make_dataset)
from .regularize import (DEFAULT_GAP_FACTOR, DEFAULT_TAU, NoisyDataset,
                         discrete_pipeline, run_pipeline)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DISCREPANCY = 3
EXIT_RANK = 4

PROBLEMS = {
    "craig-brown": lambda: craig_brown(),
    "craig-brown-wide": lambda: craig_brown(variant="wide"),
    "cubic": lambda: cubic_problem(),
    "cubic-legendre": lambda: cubic_problem(variant="legendre"),
    "abel": lambda: abel_problem(),
}


class InputError(Exception):
    """Bad file content or inconsistent flags; maps to exit code 2."""


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".specreg-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, columns) -> str:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _read_csv_columns(path: str):
    try:
        with open(path) as handle:
            lines = [ln.strip() for ln in handle if ln.strip()]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise InputError(f"{path} is empty")
    header = [h.strip() for h in lines[0].split(",")]
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise InputError(f"{path}: row has {len(cells)} cells, header has {len(header)}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise InputError(f"{path}: non-numeric cell in row {len(rows) + 2}") from exc
    if not rows:
        raise InputError(f"{path} has a header but no data rows")
    data = np.asarray(rows, dtype=np.float64)
    return header, {name: data[:, k] for k, name in enumerate(header)}


def _read_dataset(path: str) -> NoisyDataset:
    header, cols = _read_csv_columns(path)
    for name in ("x", "g", "s"):
        if name not in cols:
            raise InputError(f"{path}: expected columns x,g,s, got {header}")
    try:
        return NoisyDataset(xs=cols["x"], g=cols["g"], s=cols["s"])
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _seed_from(args) -> int:
    env = os.environ.get("SPECREG_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"SPECREG_SEED={env!r} is not an integer") from exc
    return args.seed


def _parse_demote(text: str):
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise InputError(f"--demote wants comma-separated integers, got {text!r}") from exc


def cmd_generate(args) -> int:
    problem = PROBLEMS[args.problem]()
    if not args.sigma > 0.0:
        raise InputError("--sigma must be positive")
    if args.m < 1:
        raise InputError("--m must be at least 1")
    spec = NoiseSpec(sigma=args.sigma, seed=_seed_from(args))
    ds = make_dataset(problem, m=args.m, noise=spec)
    _atomic_write(args.out, _csv_text(("x", "g", "s"), (ds.xs, ds.g, ds.s)))
    return EXIT_OK


def _family_from(args) -> BasisFamily:
    if args.family == "fractional":
        if args.mu is None:
            raise InputError("--family fractional needs --mu")
        return BasisFamily.fractional(args.mu)
    if args.mu is not None:
        raise InputError("--mu only applies to --family fractional")
    return BasisFamily(args.family)


def cmd_regularize(args) -> int:
    ds = _read_dataset(args.input)
    demote = _parse_demote(args.demote)
    doc = {
        "method": args.method,
        "tau": args.tau,
        "gap_factor": args.gap_factor,
        "demote": list(demote),
        "dataset": {
            "m": ds.m,
            "x": ds.xs.tolist(),
            "g": ds.g.tolist(),
            "s": ds.s.tolist(),
        },
    }
    try:
        if args.method == "projection":
            family = _family_from(args)
            result = run_pipeline(ds, family, n=args.n, tau=args.tau,
                                  gap_factor=args.gap_factor, demote=demote,
                                  pad_to=args.pad_to)
            doc["family"] = family.kind
            if family.mu is not None:
                doc["mu"] = family.mu
            doc["n"] = int(result.split.a.size)
            doc["expansions"] = {
                "data": result.data_expansion.to_dict(),
                "source": result.source_expansion.to_dict(),
                "full": result.full_expansion.to_dict(),
            }
            lo, hi = family.domain
            grid = np.linspace(lo, hi, args.eval_points)
            curves = _csv_text(
                ("x", "g", "g_S", "f_hat"),
                (grid,
                 result.full_expansion(grid),
                 result.data_expansion(grid),
                 result.source_expansion(grid)))
        else:
            result = discrete_pipeline(ds, tau=args.tau, gap_factor=args.gap_factor,
                                       demote=demote, pad_to=args.pad_to)
            doc["f_hat"] = result.f_hat.tolist()
            doc["midpoints"] = result.midpoints.tolist()
            curves = _csv_text(
                ("x", "g", "g_S", "x_mid", "f_hat"),
                (ds.xs, ds.g, result.g_S, result.midpoints, result.f_hat))
    except RankDeficiencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANK
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    doc["split"] = result.split.to_dict()
    doc["diagnostics"] = result.report.to_dict()
    _atomic_write(args.report, json.dumps(doc, indent=2) + "\n")
    _atomic_write(args.curves, curves)
    if not result.report.pass_d1:
        print("discrepancy check failed: residual energy is outside the noise bounds",
              file=sys.stderr)
        return EXIT_DISCREPANCY
    return EXIT_OK


def cmd_diagnose(args) -> int:
    header, cols = _read_csv_columns(args.input)
    column = "r" if "r" in cols else header[0]
    resid = cols[column]
    try:
        report = whiteness_report(resid, pad_to=args.pad_to)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _atomic_write(args.report, json.dumps(report.to_dict(), indent=2) + "\n")
    _atomic_write(args.periodogram,
                  _csv_text(("frequency", "power"),
                            (report.frequencies, report.periodogram)))
    _atomic_write(args.cumulative,
                  _csv_text(("frequency", "cumulative"),
                            (report.frequencies, report.cumulative)))
    if not report.pass_d1:
        print("discrepancy check failed: residual energy is outside the noise bounds",
              file=sys.stderr)
        return EXIT_DISCREPANCY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specreg",
        description="Split noisy samples of a smooth function into signal and "
                    "noise by truncated spectral projection, and estimate the "
                    "function, its derivative, or its fractional derivative.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a benchmark problem with seeded noise")
    gen.add_argument("--problem", choices=sorted(PROBLEMS), required=True)
    gen.add_argument("--m", type=int, default=DEFAULT_M, help="number of samples")
    gen.add_argument("--sigma", type=float, default=DEFAULT_SIGMA, help="noise level")
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--out", default="dataset.csv")
    gen.set_defaults(run=cmd_generate)

    reg = sub.add_parser("regularize", help="run a pipeline on a dataset CSV")
    reg.add_argument("--input", required=True)
    reg.add_argument("--method", choices=("projection", "discrete-svd"),
                     default="projection")
    reg.add_argument("--family", choices=("trig", "fractional", "legendre"),
                     default="trig")
    reg.add_argument("--mu", type=float, default=None,
                     help="fractional order in (0,1), fractional family only")
    reg.add_argument("--n", type=int, default=None, help="number of basis columns")
    reg.add_argument("--tau", type=float, default=DEFAULT_TAU)
    reg.add_argument("--gap-factor", type=float, default=DEFAULT_GAP_FACTOR)
    reg.add_argument("--demote", default="", help="comma-separated component indices")
    reg.add_argument("--pad-to", type=int, default=None,
                     help="power-of-two FFT length for the diagnostics")
    reg.add_argument("--eval-points", type=int, default=501,
                     help="points on which the closed-form curves are written")
    reg.add_argument("--report", default="report.json")
    reg.add_argument("--curves", default="curves.csv")
    reg.set_defaults(run=cmd_regularize)

    diag = sub.add_parser("diagnose", help="run the residual checks on a series")
    diag.add_argument("--input", required=True,
                      help="CSV; uses column 'r' if present, else the first column")
    diag.add_argument("--pad-to", type=int, default=None)
    diag.add_argument("--report", default="report.json")
    diag.add_argument("--periodogram", default="periodogram.csv")
    diag.add_argument("--cumulative", default="cumulative.csv")
    diag.set_defaults(run=cmd_diagnose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
