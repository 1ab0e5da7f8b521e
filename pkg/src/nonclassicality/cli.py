"""Command-line interface: ``witness``, ``sweep``, ``oracle-check``, ``figdata``."""

from __future__ import annotations

import argparse
import os
import sys
import warnings

from . import __version__
from .errors import AnnihilatedStateError, DomainError, TruncationError
from .fock import DEFAULT_TAIL_TOL
from .moments import DEFAULT_CAT_GRID, DEFAULT_SQUEEZED_GRID, compare_backends
from .sweep import (
    PRESETS,
    WITNESS_NAMES,
    SweepSpec,
    evaluate,
    fmt,
    parse_number,
    parse_range,
    preset,
    report_failures,
    run_sweep,
    write_csv,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
USER_ERRORS = (DomainError, AnnihilatedStateError, TruncationError, ValueError)


def _number(text):
    try:
        return parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _number_list(text):
    return tuple(_number(t) for t in text.split(",") if t.strip())


def _add_state_args(p):
    p.add_argument("--state", choices=("cat", "squeezed"), default="cat")
    p.add_argument("--alpha", type=_number, default=1.0, help="cat amplitude (real, >= 0)")
    p.add_argument("--phi", type=_number, default=0.0, help="cat relative phase; accepts pi")
    p.add_argument("--xi", type=_number, default=0.5, help="continuous superposition |xi| < 1")
    p.add_argument("--theta", type=_number, default=0.0, help="phase of xi")
    p.add_argument("--add", type=int, default=0, metavar="M", help="photons added first")
    p.add_argument("--sub", type=int, default=0, metavar="Q", help="photons subtracted after")
    p.add_argument("--angle", type=_number, default=0.0,
                   help="quadrature angle for the Hong-Mandel witness (default 0)")
    p.add_argument("--backend", choices=("auto", "analytic", "fock"), default="auto")
    p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    p.add_argument("--nmax", type=int, default=None,
                   help="force this Fock truncation; smaller than automatic warns")


def _point(args) -> dict:
    pt = {"alpha": args.alpha, "phi": args.phi} if args.state == "cat" else {
        "xi": args.xi, "theta": args.theta}
    pt.update(added=args.add, subtracted=args.sub, angle=args.angle)
    return pt


def _describe(pt: dict) -> str:
    return " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in pt.items())


def cmd_witness(args) -> int:
    pt = _point(args)
    orders = (args.order,) if args.order is not None else None
    if orders is None:
        orders = {"hoa": (1,), "hosps": (2,), "hong-mandel": (2,)}.get(args.witness, (2,))
    results = evaluate(args.state, pt, args.witness, orders, args.backend, args.tail_tol,
                       args.nmax)
    head = f"state={args.state} {_describe(pt)} witness={args.witness} order={orders[0]}"
    if args.witness in ("hillery2", "hillery"):
        parts = []
        for r in results:
            tag = "A1" if r.kind.endswith("1") else "A2"
            parts.append(f"{tag}={fmt(r.value)} {tag}_nonclassical={str(r.nonclassical).lower()}")
        print(f"{head} {' '.join(parts)}")
    else:
        r = results[0]
        print(f"{head} value={fmt(r.value)} nonclassical={str(r.nonclassical).lower()}")
    return EXIT_OK


def _emit(spec: SweepSpec, jobs: int, output: str) -> int:
    rows = run_sweep(spec, jobs)
    failed = report_failures(rows, spec.param)
    if output == "-":
        write_csv(spec, rows, sys.stdout)
    else:
        with open(output, "w", newline="") as fh:
            write_csv(spec, rows, fh)
    return EXIT_FAIL if rows and failed == len(rows) else EXIT_OK


def cmd_sweep(args) -> int:
    start, stop, step = parse_range(args.range)
    fixed = _point(args)
    for key in ("added", "subtracted", "angle"):
        fixed.pop(key)
    spec = SweepSpec(args.state, fixed, args.param, start, stop, step, args.witness,
                     args.orders or (), args.add, args.sub, args.angle, args.backend,
                     args.tail_tol, args.nmax)
    return _emit(spec, args.jobs, args.output)


def cmd_figdata(args) -> int:
    if args.list:
        for name, spec in PRESETS.items():
            print(f"{name}: {spec.notes[0] if spec.notes else spec.witness}")
        return EXIT_OK
    if not args.preset:
        raise DomainError("figdata needs a preset name (use --list)")
    overrides = {}
    if args.range:
        overrides.update(zip(("start", "stop", "step"), parse_range(args.range)))
    if args.orders:
        overrides["orders"] = args.orders
    if args.nmax is not None:
        overrides["nmax"] = args.nmax
    overrides["tail_tol"] = args.tail_tol
    return _emit(preset(args.preset, **overrides), args.jobs, args.output)


def cmd_oracle_check(args) -> int:
    if args.family == "cat":
        grid = DEFAULT_CAT_GRID
        if args.alphas or args.phis:
            grid = tuple((a, p) for a in (args.alphas or sorted({g[0] for g in grid}))
                         for p in (args.phis or sorted({g[1] for g in grid})))
        names = ("alpha", "phi")
    else:
        grid = DEFAULT_SQUEEZED_GRID
        if args.xis or args.thetas:
            grid = tuple((x, t) for x in (args.xis or sorted({g[0] for g in grid}))
                         for t in (args.thetas or sorted({g[1] for g in grid})))
        names = ("xi", "theta")
    worst = compare_backends(args.family, grid, args.kmax, args.tail_tol)
    print(f"oracle-check family={args.family} kmax={args.kmax} tol={args.tol:g} "
          f"points={len(grid)}")
    print("k l max_abs_dev")
    for (k, l), (dev, _) in sorted(worst.items()):
        print(f"{k} {l} {dev:.3e}")
    (k, l), (dev, pt) = max(worst.items(), key=lambda kv: kv[1][0])
    where = " ".join(f"{n}={fmt(float(v))}" for n, v in zip(names, pt))
    if dev < args.tol:
        print(f"PASS max deviation {dev:.3e} < {args.tol:g}")
        return EXIT_OK
    print(f"FAIL worst k={k} l={l} deviation {dev:.3e} at {where}")
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonclassicality",
        description="Higher-order nonclassicality witnesses for superpositions of coherent states.",
        epilog="Order convention: hoa --order l gives D(l) (l=1 is ordinary antibunching); "
               "hosps --order l gives D_h(l-1), so l=2 coincides with D(1).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("witness", help="evaluate one witness at one parameter point")
    _add_state_args(w)
    w.add_argument("--witness", choices=WITNESS_NAMES, required=True)
    w.add_argument("--order", type=int, default=None)
    w.set_defaults(func=cmd_witness)

    s = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    _add_state_args(s)
    s.add_argument("--witness", choices=WITNESS_NAMES, required=True)
    s.add_argument("--param", required=True,
                   choices=("alpha", "phi", "xi", "theta", "added", "subtracted", "angle"))
    s.add_argument("--range", required=True, help="start:stop:step, stop inclusive")
    s.add_argument("--orders", type=_int_list, default=None, help="e.g. 1,2,3")
    s.add_argument("--output", "-o", default="-")
    s.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1))
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oracle-check", help="closed-form moments against the Fock oracle")
    o.add_argument("--family", choices=("cat", "squeezed"), default="cat")
    o.add_argument("--kmax", type=int, default=5)
    o.add_argument("--tol", type=float, default=1e-9)
    o.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    o.add_argument("--alphas", type=_number_list, default=None)
    o.add_argument("--phis", type=_number_list, default=None)
    o.add_argument("--xis", type=_number_list, default=None)
    o.add_argument("--thetas", type=_number_list, default=None)
    o.set_defaults(func=cmd_oracle_check)

    f = sub.add_parser("figdata", help="CSV data behind a figure preset")
    f.add_argument("preset", nargs="?", choices=tuple(PRESETS))
    f.add_argument("--list", action="store_true")
    f.add_argument("--range", default=None, help="override start:stop:step")
    f.add_argument("--orders", type=_int_list, default=None)
    f.add_argument("--nmax", type=int, default=None)
    f.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    f.add_argument("--output", "-o", default="-")
    f.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1))
    f.set_defaults(func=cmd_figdata)
    return parser


class _WarningSink:
    """Print the first warning of each category; count the rest."""

    def __init__(self):
        self.seen: dict[type, int] = {}

    def __call__(self, message, category, filename, lineno, file=None, line=None):
        count = self.seen.get(category, 0)
        self.seen[category] = count + 1
        if count == 0:
            sys.stderr.write(f"warning: {message}\n")

    def summary(self):
        for category, count in self.seen.items():
            if count > 1:
                sys.stderr.write(f"warning: {count - 1} more {category.__name__} "
                                 "messages suppressed\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    sink = _WarningSink()
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = sink
        try:
            return args.func(args)
        except USER_ERRORS as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        finally:
            sink.summary()


if __name__ == "__main__":
    sys.exit(main())
