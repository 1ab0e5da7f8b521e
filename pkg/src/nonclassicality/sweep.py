"""Parameter sweeps over witness values, CSV emission, and figure presets."""

from __future__ import annotations

import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from . import __version__
from .errors import AnnihilatedStateError, DomainError, TruncationError
from .fock import DEFAULT_TAIL_TOL
from .moments import FockMoments, provider_for
from .states import CatParams, NonGaussianOp, SqueezedParams, build_state
from . import witnesses as W

CSV_HEADER = "param_name,param_value,witness,order,value,nonclassical"
FLOAT_FMT = ".12g"

WITNESS_NAMES = ("hoa", "hosps", "hong-mandel", "hillery2", "hillery")
DEFAULT_ORDERS = {"hoa": (1,), "hosps": (2,), "hong-mandel": (2,), "hillery2": (2,), "hillery": (2,)}
STATE_PARAMS = {"cat": ("alpha", "phi"), "squeezed": ("xi", "theta")}
INT_PARAMS = ("added", "subtracted")

_PI_EXPR = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_number(text: str) -> float:
    """Float, or a multiple of pi such as ``pi``, ``2pi``, ``-pi/2``, ``0.5*pi``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_EXPR.match(text.lower())
    if not m:
        raise ValueError(f"cannot parse number {text!r}")
    sign, coef, div = m.groups()
    val = (float(coef) if coef else 1.0) * math.pi
    if div:
        val /= float(div)
    return -val if sign == "-" else val


def parse_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("range must be start:stop:step")
    start, stop, step = (parse_number(p) for p in parts)
    if not step > 0:
        raise ValueError("range step must be > 0")
    if stop < start:
        raise ValueError("range is empty (stop < start)")
    return start, stop, step


def range_values(start: float, stop: float, step: float) -> list[float]:
    """start + i*step up to and including stop (with a 1e-9*step allowance)."""
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def fmt(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    return format(x, FLOAT_FMT)


@dataclass(frozen=True)
class SweepSpec:
    family: str
    fixed: dict
    param: str
    start: float
    stop: float
    step: float
    witness: str
    orders: tuple[int, ...] = ()
    added: int = 0
    subtracted: int = 0
    angle: float = 0.0
    backend: str = "auto"
    tail_tol: float = DEFAULT_TAIL_TOL
    nmax: int | None = None
    preset: str | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.family not in STATE_PARAMS:
            raise DomainError(f"unknown state family {self.family!r}")
        if self.witness not in WITNESS_NAMES:
            raise DomainError(f"unknown witness {self.witness!r}")
        allowed = STATE_PARAMS[self.family] + INT_PARAMS + ("angle",)
        if self.param not in allowed:
            raise DomainError(f"cannot sweep {self.param!r} for the {self.family} family")
        if not self.step > 0:
            raise DomainError("step must be > 0")
        if self.stop < self.start:
            raise DomainError("range must be non-empty")
        if not self.orders:
            object.__setattr__(self, "orders", DEFAULT_ORDERS[self.witness])

    def values(self) -> list[float]:
        vals = range_values(self.start, self.stop, self.step)
        if self.param in INT_PARAMS:
            vals = [int(round(v)) for v in vals]
        return vals

    def labels(self) -> list[tuple[str, int]]:
        """(kind, order) pairs emitted per parameter value, in output order."""
        if self.witness == "hillery2":
            return [(W.HILLERY_1, 2), (W.HILLERY_2, 2)]
        if self.witness == "hillery":
            return [(k, o) for o in self.orders for k in (W.HILLERY_1, W.HILLERY_2)]
        kind = {"hoa": W.HOA, "hosps": W.HOSPS, "hong-mandel": W.HM_HOS}[self.witness]
        return [(kind, o) for o in self.orders]

    def point(self, value) -> dict:
        pt = dict(self.fixed)
        pt.setdefault("added", self.added)
        pt.setdefault("subtracted", self.subtracted)
        pt.setdefault("angle", self.angle)
        pt[self.param] = value
        return pt


def state_params(family: str, pt: dict):
    if family == "cat":
        return CatParams(pt.get("alpha", 1.0), pt.get("phi", 0.0))
    return SqueezedParams(pt.get("xi", 0.5), pt.get("theta", 0.0))


def _evaluate(family: str, pt: dict, witness: str, orders, backend: str,
              tail_tol: float, nmax: int | None):
    params = state_params(family, pt)
    op = NonGaussianOp(int(pt.get("added", 0)), int(pt.get("subtracted", 0)))
    angle = pt.get("angle", 0.0)
    if witness == "hillery":
        state = build_state(family, params, op, tail_tol, nmax)
        res = [W.hillery_general(state, o, which, pt) for o in orders for which in (1, 2)]
        return res, state.dim
    m = provider_for(family, params, op, backend, tail_tol, nmax)
    dim = m.state.dim if isinstance(m, FockMoments) else None
    if witness == "hoa":
        return [W.hoa(m, o, pt) for o in orders], dim
    if witness == "hosps":
        return [W.hosps(m, o, pt) for o in orders], dim
    if witness == "hong-mandel":
        return [W.hong_mandel(m, o, angle, pt) for o in orders], dim
    if witness == "hillery2":
        return list(W.hillery2(m, pt)), dim
    raise DomainError(f"unknown witness {witness!r}")


def evaluate(family: str, pt: dict, witness: str, orders, backend: str = "auto",
             tail_tol: float = DEFAULT_TAIL_TOL, nmax: int | None = None) -> list[W.WitnessResult]:
    """Witness values at one parameter point."""
    return _evaluate(family, pt, witness, orders, backend, tail_tol, nmax)[0]


def auto_dim(family: str, pt: dict, tail_tol: float) -> int | None:
    """Truncation the automatic policy would pick at this point (None if undefined)."""
    op = NonGaussianOp(int(pt.get("added", 0)), int(pt.get("subtracted", 0)))
    try:
        return build_state(family, state_params(family, pt), op, tail_tol).dim
    except (AnnihilatedStateError, DomainError, TruncationError):
        return None


@dataclass
class SweepRow:
    value: float
    results: list | None
    error: str | None = None
    dim: int | None = None
    auto_dim: int | None = None


POINT_ERRORS = (AnnihilatedStateError, DomainError, TruncationError)


def _run_point(spec: SweepSpec, value) -> SweepRow:
    pt = spec.point(value)
    auto = auto_dim(spec.family, pt, spec.tail_tol) if spec.nmax is not None else None
    try:
        res, dim = _evaluate(spec.family, pt, spec.witness, spec.orders, spec.backend,
                             spec.tail_tol, spec.nmax)
    except POINT_ERRORS as exc:
        return SweepRow(value, None, f"{type(exc).__name__}: {exc}", auto_dim=auto)
    return SweepRow(value, res, dim=dim, auto_dim=auto)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """Evaluate every point; the returned order is the parameter order regardless of jobs."""
    values = spec.values()
    if jobs <= 1:
        return [_run_point(spec, v) for v in values]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda v: _run_point(spec, v), values))


def csv_lines(spec: SweepSpec, rows: list[SweepRow]) -> list[str]:
    lines = [f"# tool: nonclassicality {__version__}"]
    if spec.preset:
        lines.append(f"# preset: {spec.preset}")
    fixed = " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}"
                     for k, v in sorted(spec.point(None).items()) if k != spec.param)
    lines.append(f"# family: {spec.family} fixed: {fixed}")
    lines.append(f"# witness: {spec.witness} orders: {','.join(map(str, spec.orders))}")
    lines.append(f"# tail_tol: {spec.tail_tol:g}")
    dims = [r.dim for r in rows if r.dim is not None]
    if dims:
        lines.append(f"# truncation_dim: {min(dims)}..{max(dims)}")
    else:
        lines.append("# truncation_dim: none (closed-form moments)")
    short = [(r.dim, r.auto_dim) for r in rows
             if r.dim is not None and r.auto_dim is not None and r.dim < r.auto_dim]
    if short:
        lines.append(f"# WARNING: nmax override below automatic truncation at {len(short)} "
                     f"points (automatic {min(a for _, a in short)}..{max(a for _, a in short)})")
    lines.extend(f"# {note}" for note in spec.notes)
    lines.append(CSV_HEADER)
    labels = spec.labels()
    for row in rows:
        pv = fmt(float(row.value))
        if row.results is None:
            for kind, order in labels:
                lines.append(f"{spec.param},{pv},{kind},{order},NaN,false")
            continue
        for r in row.results:
            flag = "true" if r.nonclassical else "false"
            lines.append(f"{spec.param},{pv},{r.kind},{r.order},{fmt(r.value)},{flag}")
    return lines


def write_csv(spec: SweepSpec, rows: list[SweepRow], stream) -> None:
    for line in csv_lines(spec, rows):
        stream.write(line + "\n")


def report_failures(rows: list[SweepRow], param: str, stream=None) -> int:
    stream = stream or sys.stderr
    failed = 0
    for r in rows:
        if r.error is not None:
            failed += 1
            stream.write(f"warning: {param}={fmt(float(r.value))} gave NaN ({r.error})\n")
    return failed


def _cat(param, start, stop, step, witness, orders, alpha=1.0, phi=math.pi, added=0,
         subtracted=0, notes=()):
    return SweepSpec("cat", {"alpha": alpha, "phi": phi}, param, start, stop, step, witness,
                     tuple(orders), added, subtracted, notes=tuple(notes))


def _sq(param, start, stop, step, witness, orders, xi=0.5, theta=0.0, added=0, angle=0.0,
        notes=()):
    return SweepSpec("squeezed", {"xi": xi, "theta": theta}, param, start, stop, step, witness,
                     tuple(orders), added, 0, angle, notes=tuple(notes))


_ORDER_NOTE = "orders per curve are not printed with the figure; chosen here and adjustable"

PRESETS: dict[str, SweepSpec] = {
    "fig1a": _cat("alpha", 0.05, 2.0, 0.05, "hoa", (1, 2, 3), phi=math.pi,
                  notes=("HOA of the odd coherent state (phi=pi) against alpha", _ORDER_NOTE)),
    "fig1b": _cat("alpha", 0.05, 2.0, 0.05, "hoa", (1, 2, 3), phi=3 * math.pi / 4,
                  notes=("HOA against alpha at intermediate phase phi=3pi/4 (assumed)",
                         _ORDER_NOTE)),
    "fig1c": _cat("phi", 0.0, 2 * math.pi, math.pi / 50, "hoa", (1, 2, 3), alpha=1.0,
                  notes=("HOA against relative phase at alpha=1", _ORDER_NOTE)),
    "fig1d": _cat("alpha", 0.05, 2.0, 0.05, "hosps", (2, 3, 4), phi=math.pi,
                  notes=("HOSPS D_h(l-1) of the odd coherent state against alpha",
                         _ORDER_NOTE)),
    "fig1e": _cat("alpha", 0.05, 2.0, 0.05, "hosps", (2, 3, 4), phi=3 * math.pi / 4,
                  notes=("HOSPS against alpha at phi=3pi/4 (assumed)", _ORDER_NOTE)),
    "fig1f": _cat("phi", 0.0, 2 * math.pi, math.pi / 50, "hosps", (2, 3, 4), alpha=1.0,
                  notes=("HOSPS against relative phase at alpha=1", _ORDER_NOTE)),
    "fig2a": _sq("xi", 0.01, 0.9, 0.01, "hosps", (2, 3, 4),
                 notes=("HOSPS of the continuous superposition, theta=0", _ORDER_NOTE)),
    "fig2b": _sq("xi", 0.01, 0.9, 0.01, "hillery2", (2,),
                 notes=("amplitude-squared (Hillery) squeezing, theta=0",)),
    "fig2c": _sq("xi", 0.01, 0.9, 0.01, "hillery2", (2,), added=1,
                 notes=("Hillery squeezing after adding one photon, theta=0",)),
    "fig3a": _cat("alpha", 0.05, 2.0, 0.05, "hillery2", (2,), phi=math.pi / 2, added=1,
                  notes=("single-photon-added cat against alpha at phi=pi/2 (assumed)",)),
    "fig3b": _cat("phi", 0.0, 2 * math.pi, math.pi / 50, "hillery2", (2,), alpha=0.5, added=1,
                  notes=("single-photon-added cat against phi at alpha=0.5",)),
    "fig3c": _cat("phi", 0.0, 2 * math.pi, math.pi / 50, "hillery2", (2,), alpha=0.5, added=2,
                  notes=("two-photon-added cat against phi at alpha=0.5",)),
    "fig3d": _cat("phi", 0.0, 2 * math.pi, math.pi / 50, "hillery2", (2,), alpha=0.5,
                  added=2, subtracted=1,
                  notes=("add two photons then subtract one, against phi at alpha=0.5",)),
    "fig4a": _cat("added", 1, 6, 1, "hillery2", (2,), alpha=1.5, phi=0.0,
                  notes=("m-photon addition at alpha=1.5; phi=0 assumed",)),
    "fig4b": _cat("added", 1, 6, 1, "hillery2", (2,), alpha=1.5, phi=0.0, subtracted=2,
                  notes=("m-photon addition then two-photon subtraction at alpha=1.5; "
                         "phi=0 assumed",)),
    "hm-squeezed": _sq("xi", 0.01, 0.9, 0.01, "hong-mandel", (2, 4, 6), angle=math.pi / 2,
                       notes=("Hong-Mandel witness of the continuous superposition",
                              "quadrature angle pi/2: the squeezed quadrature for theta=0")),
}


def preset(name: str, **overrides) -> SweepSpec:
    try:
        spec = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return replace(spec, preset=name, **overrides)
