"""Command-line interface: ``hypercat <command> [options]``.

Exit status: 0 on success, 1 when a verification, comparison or tolerance
check fails, 2 on usage, I/O, precision or resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import mpmath

from . import __version__
from .asymptotics import (
    DEFAULT_ACCEL_POWER,
    DEFAULT_PRECISION_BITS,
    conjectured_constants,
    estimate_growth,
)
from .bfile import first_mismatch, format_bfile, read_bfile
from .errors import BudgetExceeded, CacheFormatError, PrecisionError, ValidationError
from .gluing import trace_polynomial
from .series import f_and_F, hypercat_sequence
from .tours import hypercatalan
from .trees import catalog
from .verify import FAULTS, Bounds, run_battery

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
COMMANDS = ("seq", "gf", "verify", "asymp", "gluing", "trees")
FORMATS = ("plain", "csv", "json", "bfile")


@dataclass(frozen=True)
class RunConfig:
    command: str
    m: int = 2
    n_max: int = 10
    format: str = "plain"
    cache_path: Path | None = None
    precision_bits: int = DEFAULT_PRECISION_BITS
    accel_power: int = DEFAULT_ACCEL_POWER
    compare_bfile: Path | None = None
    via: str = "tree"
    terms: int = 100
    assert_tol: float | None = None
    no_header: bool = False
    jobs: int = 1
    r: int | None = None
    m_given: bool = True
    n_given: bool = True
    faults: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.m < 1:
            raise ValidationError("--m must be >= 1")
        if self.n_max < 0:
            raise ValidationError("--n-max must be >= 0")
        if self.format not in FORMATS:
            raise ValidationError(f"unknown format {self.format!r}")
        if self.format == "bfile" and self.command != "seq":
            raise ValidationError("--format bfile is only available for seq")
        if self.jobs < 1:
            raise ValidationError("--jobs must be >= 1")


def _tree_cache(cfg: RunConfig, vertices: int) -> Path | None:
    if cfg.cache_path is None:
        return None
    cfg.cache_path.mkdir(parents=True, exist_ok=True)
    return cfg.cache_path / f"trees_n{vertices}.txt"


def _sequence(cfg: RunConfig) -> list[int]:
    if cfg.via == "gf":
        return hypercat_sequence(cfg.m, cfg.n_max)
    return [
        hypercatalan(n, cfg.m, cache_path=_tree_cache(cfg, n + 1) if n else None, jobs=cfg.jobs)
        for n in range(cfg.n_max + 1)
    ]


def _emit_values(cfg: RunConfig, values: list[int], out) -> None:
    if cfg.format == "plain":
        out.write(" ".join(map(str, values)) + "\n")
    elif cfg.format == "csv":
        if not cfg.no_header:
            out.write("n,value\n")
        out.writelines(f"{n},{v}\n" for n, v in enumerate(values))
    elif cfg.format == "json":
        record = {"m": cfg.m, "values": [str(v) for v in values], "route": cfg.via, "version": __version__}
        out.write(json.dumps(record) + "\n")
    else:
        out.write(format_bfile(values))


def cmd_seq(cfg: RunConfig, out, err) -> int:
    values = _sequence(cfg)
    _emit_values(cfg, values, out)
    if cfg.compare_bfile is not None:
        reference = read_bfile(cfg.compare_bfile)
        shared = [i for i in range(len(values)) if i in reference]
        if not shared:
            err.write(f"no indices 0..{cfg.n_max} in {cfg.compare_bfile}\n")
            return EXIT_FAIL
        bad = first_mismatch(values, reference)
        if bad is not None:
            err.write(f"mismatch at n={bad}: computed {values[bad]}, b-file has {reference[bad]}\n")
            return EXIT_FAIL
    return EXIT_OK


def cmd_gf(cfg: RunConfig, out, err) -> int:
    """Coefficients of f_m and of F_m = sum C_n x^(n+1)."""
    order = cfg.n_max + 1
    f, F = f_and_F(cfg.m, order)
    fs = [str(c) for c in f.coeffs[1:]]
    Fs = [str(c) for c in F.coeffs[1:]]
    if cfg.format == "json":
        out.write(json.dumps({"m": cfg.m, "f": fs, "F": Fs, "version": __version__}) + "\n")
    elif cfg.format == "csv":
        if not cfg.no_header:
            out.write("power,f,F\n")
        out.writelines(f"{i + 1},{a},{b}\n" for i, (a, b) in enumerate(zip(fs, Fs)))
    else:
        out.write("f: " + " ".join(fs) + "\n")
        out.write("F: " + " ".join(Fs) + "\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out, err) -> int:
    bounds = Bounds()
    if cfg.m_given:
        bounds = replace(bounds, ms=(cfg.m,))
    if cfg.n_given:
        bounds = replace(bounds, n_max=cfg.n_max)
    if not cfg.no_header:
        out.write(f"# hypercat {__version__} verify\n")
    results = run_battery(bounds, cfg.faults)
    for r in results:
        out.write(r.line() + "\n")
    failed = [r for r in results if not r.passed]
    for r in failed:
        out.write("FAILURE " + r.record() + "\n")
    if not cfg.no_header:
        out.write(f"# {len(results) - len(failed)}/{len(results)} checks passed\n")
    return EXIT_FAIL if failed else EXIT_OK


def _num(x, digits: int = 25) -> str:
    return mpmath.nstr(x, digits, strip_zeros=False)


def cmd_asymp(cfg: RunConfig, out, err) -> int:
    est = estimate_growth(cfg.m, cfg.terms, cfg.accel_power, cfg.precision_bits)
    conj = conjectured_constants(cfg.m, cfg.precision_bits)
    rows = [("A", est.A, conj.A), ("rho", est.rho, conj.rho), ("K", est.K, conj.K)]
    if conj.K_m is not None:
        rows.append(("K_m", est.K_m, conj.K_m))
    if not cfg.no_header:
        out.write(
            f"# m={cfg.m} terms={cfg.terms} k={cfg.accel_power} precision={cfg.precision_bits}\n"
        )
        out.write("quantity empirical conjectured abs_difference\n")
    worst = 0
    for name, e, c in rows:
        diff = abs(e - c)
        worst = max(worst, diff)
        out.write(f"{name} {_num(e)} {_num(c)} {mpmath.nstr(diff, 5)}\n")
    if cfg.assert_tol is not None and worst > cfg.assert_tol:
        err.write(f"largest difference {mpmath.nstr(worst, 5)} exceeds {cfg.assert_tol}\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_gluing(cfg: RunConfig, out, err) -> int:
    size = 2 * cfg.m
    rs = [cfg.r] if cfg.r is not None else list(range(0, cfg.n_max + 1, size))
    for r in rs:
        p = trace_polynomial(cfg.m, r)
        out.write(f"{p}\n" if cfg.r is not None else f"P_{size}(N,{r}) = {p}\n")
    return EXIT_OK


def cmd_trees(cfg: RunConfig, out, err) -> int:
    """Free-tree counts for 1..n_max vertices, filling the cache if given."""
    if cfg.format == "csv" and not cfg.no_header:
        out.write("vertices,trees\n")
    sep = "," if cfg.format == "csv" else " "
    for n in range(1, cfg.n_max + 1):
        count = sum(1 for _ in catalog(n, _tree_cache(cfg, n)))
        out.write(f"{n}{sep}{count}\n")
    return EXIT_OK


HANDLERS = {
    "seq": cmd_seq,
    "gf": cmd_gf,
    "verify": cmd_verify,
    "asymp": cmd_asymp,
    "gluing": cmd_gluing,
    "trees": cmd_trees,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypercat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=None, help="edge multiplicity parameter (default 2)")
    common.add_argument("--n-max", type=int, default=None, help="largest index (default 10)")
    common.add_argument("--format", choices=FORMATS, default="plain")
    common.add_argument("--no-header", action="store_true", help="omit header lines")
    common.add_argument("--inject-fault", action="append", default=[], choices=sorted(FAULTS),
                        help=argparse.SUPPRESS)

    p = sub.add_parser("seq", parents=[common], help="C_0..C_n_max")
    p.add_argument("--via", choices=("tree", "gf"), default="tree")
    p.add_argument("--cache", type=Path, help="directory for tree catalogues")
    p.add_argument("--compare-bfile", type=Path, help="b-file to compare against")
    p.add_argument("--jobs", type=int, default=1)

    sub.add_parser("gf", parents=[common], help="coefficients of f_m and F_m")
    sub.add_parser("verify", parents=[common], help="run the cross-check battery")

    p = sub.add_parser("asymp", parents=[common], help="growth constants vs closed forms")
    p.add_argument("--terms", type=int, default=100, help="last index used (default 100)")
    p.add_argument("--accel-power", type=int, default=DEFAULT_ACCEL_POWER)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION_BITS, help="bits")
    p.add_argument("--assert-tol", type=float, default=None)

    p = sub.add_parser("gluing", parents=[common], help="trace polynomials P_2m(N, r)")
    p.add_argument("--r", type=int, default=None, help="polygon size (default: all r <= n-max)")

    p = sub.add_parser("trees", parents=[common], help="free-tree counts and cache files")
    p.add_argument("--cache", type=Path, help="directory for tree catalogues")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        m=2 if args.m is None else args.m,
        n_max=10 if args.n_max is None else args.n_max,
        format=args.format,
        cache_path=getattr(args, "cache", None),
        precision_bits=getattr(args, "precision", DEFAULT_PRECISION_BITS),
        accel_power=getattr(args, "accel_power", DEFAULT_ACCEL_POWER),
        compare_bfile=getattr(args, "compare_bfile", None),
        via=getattr(args, "via", "tree"),
        terms=getattr(args, "terms", 100),
        assert_tol=getattr(args, "assert_tol", None),
        no_header=args.no_header,
        jobs=getattr(args, "jobs", 1),
        r=getattr(args, "r", None),
        m_given=args.m is not None,
        n_given=args.n_max is not None,
        faults=tuple(args.inject_fault),
    )


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        return HANDLERS[cfg.command](cfg, out, err)
    except (ValidationError, CacheFormatError, PrecisionError, BudgetExceeded, OSError) as exc:
        err.write(f"hypercat: {exc}\n")
        return EXIT_ERROR


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
