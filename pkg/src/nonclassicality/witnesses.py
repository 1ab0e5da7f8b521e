"""Moment-based higher-order nonclassicality witnesses.

Each witness is negative exactly when the corresponding nonclassical
feature is detected; coherent states sit at zero. Orders follow the usual
convention: ``hoa(m, l)`` is the l-th order antibunching parameter D(l)
built from the (l+1)-th factorial moment, and ``hosps(m, l)`` returns
D_h(l-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock
from .errors import ConsistencyError, DomainError
from .fock import FockVector
from .moments import MomentProvider, rotate
from .numerics import binomial, double_factorial, pochhammer, stirling2

NONCLASSICAL_THRESHOLD = -1e-12
IMAG_TOL = 1e-10

HOA = "HOA"
HOSPS = "HOSPS"
HM_HOS = "HM_HOS"
HILLERY_1 = "HILLERY_1"
HILLERY_2 = "HILLERY_2"
KINDS = (HOA, HOSPS, HM_HOS, HILLERY_1, HILLERY_2)


@dataclass(frozen=True)
class WitnessResult:
    kind: str
    order: int
    value: float
    params: dict = field(default_factory=dict, compare=False)

    @property
    def nonclassical(self) -> bool:
        return self.value < NONCLASSICAL_THRESHOLD


def _real(z: complex, what: str) -> float:
    z = complex(z)
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        raise ConsistencyError(f"{what} has imaginary residue {z.imag:.3g}")
    return z.real


def hoa(m: MomentProvider, l: int, params: dict | None = None) -> WitnessResult:
    """D(l) = <a^dagger^(l+1) a^(l+1)> - <a^dagger a>^(l+1)."""
    if not 1 <= l <= 8:
        raise DomainError("HOA order must satisfy 1 <= l <= 8")
    d = m.moment(l + 1, l + 1) - m.moment(1, 1) ** (l + 1)
    return WitnessResult(HOA, l, _real(d, "D(l)"), params or {})


def _factorial_excess(m: MomentProvider, k: int) -> complex:
    # D(k-1) = <a^dagger^k a^k> - <N>^k; D(-1) = 0 for normalized moments
    return m.moment(k, k) - m.moment(1, 1) ** k


def hosps(m: MomentProvider, l: int, params: dict | None = None) -> WitnessResult:
    """D_h(l-1): Stirling-weighted alternating sum of factorial-moment excesses."""
    if not 2 <= l <= 8:
        raise DomainError("HOSPS order must satisfy 2 <= l <= 8")
    n = m.moment(1, 1)
    total = 0j
    for r in range(l + 1):
        outer = binomial(l, r) * (-1) ** r * n ** (l - r)
        for k in range(r + 1):
            s2 = stirling2(r, k)
            if s2:
                total += s2 * outer * _factorial_excess(m, k)
    return WitnessResult(HOSPS, l, _real(total, "D_h(l-1)"), params or {})


def quadrature_central_moment(m: MomentProvider, n: int) -> float:
    """<(X - <X>)^n> for X = (a + a^dagger)/sqrt(2), from normal-ordered moments.

    Expands (X - <X>)^n binomially and normal-orders (a + a^dagger)^r; the
    (2i-1)!! factors count the contractions [a, a^dagger] = 1.
    """
    if n < 1:
        raise DomainError("order must be positive")
    mean = m.moment(1, 0) + m.moment(0, 1)
    total = 0j
    for r in range(n + 1):
        outer = (-1) ** (n - r) * binomial(n, r) * mean ** (n - r)
        for i in range(r // 2 + 1):
            w = outer * binomial(r, 2 * i) * double_factorial(2 * i - 1)
            rest = r - 2 * i
            for k in range(rest + 1):
                total += w * binomial(rest, k) * m.moment(k, rest - k)
    return _real(total / 2 ** (n / 2), "<(dX)^n>")


def coherent_quadrature_moment(n: int) -> float:
    """(1/2)_(n/2), the coherent-state value of <(dX)^n> for even n."""
    return pochhammer(0.5, n // 2)


def hong_mandel(m: MomentProvider, n: int, angle: float = 0.0,
                params: dict | None = None) -> WitnessResult:
    """S_HM(n) = [<(dX_angle)^n> - (1/2)_(n/2)] / (1/2)_(n/2)."""
    if n % 2 or not 2 <= n <= 10:
        raise DomainError("Hong-Mandel order must be even with 2 <= n <= 10")
    central = quadrature_central_moment(rotate(m, angle), n)
    ref = coherent_quadrature_moment(n)
    return WitnessResult(HM_HOS, n, (central - ref) / ref, params or {})


def hillery2(m: MomentProvider, params: dict | None = None) -> tuple[WitnessResult, WitnessResult]:
    """Amplitude-squared squeezing (A1, A2), with the commutator bound <N> + 1/2 folded in."""
    h40, h04, h22 = m.moment(4, 0), m.moment(0, 4), m.moment(2, 2)
    h20, h02 = m.moment(2, 0), m.moment(0, 2)
    a1 = (h40 + h04 + 2 * h22 - (h20 + h02) ** 2) / 4
    a2 = (-h40 - h04 + 2 * h22 + (h20 - h02) ** 2) / 4
    p = params or {}
    return (WitnessResult(HILLERY_1, 2, _real(a1, "A1"), p),
            WitnessResult(HILLERY_2, 2, _real(a2, "A2"), p))


def _power_lower(v: np.ndarray, l: int) -> np.ndarray:
    out = v
    for _ in range(l):
        nxt = np.zeros_like(out)
        nxt[:-1] = np.sqrt(np.arange(1, out.size)) * out[1:]
        out = nxt
    return out


def _power_raise(v: np.ndarray, l: int) -> np.ndarray:
    out = v
    for _ in range(l):
        nxt = np.zeros_like(out)
        nxt[1:] = np.sqrt(np.arange(1, out.size)) * out[:-1]
        out = nxt
    return out


def hillery_general(s: FockVector, l: int, which: int,
                    params: dict | None = None) -> WitnessResult:
    """(dY_i)^2 - |<[Y1, Y2]>| / 2 with Y1 = (a^l + a^dagger^l)/2, Y2 = -i(a^l - a^dagger^l)/2.

    Every expectation is an overlap of operator-applied vectors, so this path
    shares no algebra with :func:`hillery2`.
    """
    if not 1 <= l <= 4:
        raise DomainError("Hillery order must satisfy 1 <= l <= 4")
    if which not in (1, 2):
        raise DomainError("which must be 1 or 2")
    dim = s.dim + 2 * l + 1
    if dim > fock.MAX_DIM:
        raise fock.TruncationError(f"Hillery order {l} needs dim {dim} > {fock.MAX_DIM}")
    c = fock.pad(s, dim).amplitudes
    c = c / np.linalg.norm(c)
    low, up = _power_lower(c, l), _power_raise(c, l)
    y1 = (low + up) / 2
    y2 = -1j * (low - up) / 2
    comm = np.vdot(y1, y2) - np.vdot(y2, y1)
    y = y1 if which == 1 else y2
    mean = _real(np.vdot(c, y), "<Y>")
    var = np.vdot(y, y).real - mean**2
    value = var - abs(comm) / 2
    kind = HILLERY_1 if which == 1 else HILLERY_2
    return WitnessResult(kind, l, float(value), params or {})
