"""State families: the phase-shifted cat state and the Gaussian-weighted
continuous superposition of coherent states (a squeezed vacuum), plus
photon addition / subtraction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import AnnihilatedStateError, DomainError
from .fock import DEFAULT_TAIL_TOL, FockVector
from .numerics import log_factorial_table

XI_MAX = 1.0 - 1e-6
MAX_OPS = 8


def unit_phase(phi: float) -> complex:
    """exp(i phi), exact at integer multiples of pi/2.

    Exactness there keeps the parity zeros of the even/odd cat states
    exactly zero instead of ~1e-16.
    """
    q = phi / (math.pi / 2)
    nearest = round(q)
    if abs(q - nearest) <= 1e-15 * max(1.0, abs(q)):
        return (1, 1j, -1, -1j)[nearest % 4]
    return complex(math.cos(phi), math.sin(phi))


@dataclass(frozen=True)
class CatParams:
    """|alpha> + exp(i phi)|-alpha>, normalized; alpha real, non-negative."""

    alpha: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.phi)):
            raise DomainError("alpha and phi must be finite")
        if self.alpha < 0:
            raise DomainError("alpha must be >= 0")

    @property
    def degenerate(self) -> bool:
        """True at alpha = 0, phi = pi where the superposition vanishes."""
        return self.alpha == 0 and unit_phase(self.phi) == -1

    def norm_factor(self) -> float:
        """N_m = 2 + 2 exp(-2 alpha^2) cos(phi)."""
        return 2.0 + 2.0 * math.exp(-2 * self.alpha**2) * unit_phase(self.phi).real


@dataclass(frozen=True)
class SqueezedParams:
    """Gaussian-weighted line of coherent states; Fock parameter zeta = xi e^{i theta}."""

    xi_mag: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.xi_mag) and math.isfinite(self.theta)):
            raise DomainError("xi and theta must be finite")
        if self.xi_mag < 0:
            raise DomainError("xi must be >= 0")
        if self.xi_mag >= 1:
            raise DomainError("xi must be < 1")

    @property
    def zeta(self) -> complex:
        return self.xi_mag * unit_phase(self.theta)

    @property
    def mean_photons(self) -> float:
        return self.xi_mag**2 / (1 - self.xi_mag**2)

    @property
    def squeeze_r(self) -> float:
        return math.atanh(self.xi_mag)


@dataclass(frozen=True)
class NonGaussianOp:
    """Add ``added`` photons, then subtract ``subtracted``."""

    added: int = 0
    subtracted: int = 0

    def __post_init__(self):
        if self.added < 0 or self.subtracted < 0:
            raise DomainError("photon counts must be non-negative")
        if self.added + self.subtracted > MAX_OPS:
            raise DomainError(f"added + subtracted must be <= {MAX_OPS}")

    @property
    def is_identity(self) -> bool:
        return self.added == 0 and self.subtracted == 0


def cat_fock(p: CatParams, tail_tol: float = DEFAULT_TAIL_TOL,
             dim: int | None = None) -> FockVector:
    if p.degenerate:
        raise AnnihilatedStateError("cat state undefined at alpha=0, phi=pi (zero vector)")
    length = fock._raw_length(p.alpha**2, tail_tol)
    amps = fock.coherent_amplitudes(p.alpha, length)
    ph = unit_phase(p.phi)
    parity = np.where(np.arange(length) % 2 == 0, 1 + ph, 1 - ph)
    return fock.truncate(amps * parity, tail_tol, dim)


def _squeezed_length(xi: float, tail_tol: float) -> int:
    if xi == 0:
        return 1
    # walk past the peak of |c_2m|^2 (2m)^w ~ xi^(2m) m^w until far below tail_tol
    w = fock.MOMENT_WEIGHT
    target = math.log(tail_tol) - 10
    m = max(1, int(w / -math.log(xi)))
    while 2 * m * math.log(xi) + w * math.log(2 * m + 1) > target and 2 * m <= fock.MAX_DIM:
        m += 1
    return 2 * m + 16


def squeezed_vacuum_fock(p: SqueezedParams, tail_tol: float = DEFAULT_TAIL_TOL,
                         dim: int | None = None) -> FockVector:
    if p.xi_mag >= XI_MAX:
        raise DomainError("xi must be < 1 - 1e-6")
    length = _squeezed_length(p.xi_mag, tail_tol)
    if length > fock.MAX_DIM:
        raise fock.TruncationError(f"xi={p.xi_mag} needs more than {fock.MAX_DIM} levels")
    amps = np.zeros(length, dtype=complex)
    if p.xi_mag == 0:
        amps[0] = 1.0
        return fock.truncate(amps, tail_tol, dim)
    ms = np.arange((length + 1) // 2)
    lf = log_factorial_table(2 * int(ms[-1]))
    logmag = (ms * math.log(p.xi_mag) + 0.5 * lf.values[2 * ms]
              - ms * math.log(2.0) - lf.values[ms])
    amps[2 * ms] = np.exp(logmag) * np.exp(1j * p.theta * ms)
    return fock.truncate(amps, tail_tol, dim)


def photon_added(s: FockVector, m: int = 1) -> FockVector:
    return apply_non_gaussian(s, NonGaussianOp(m, 0))


def photon_subtracted(s: FockVector, q: int = 1, m: int = 0) -> FockVector:
    """Subtract ``q`` photons, after first adding ``m``."""
    return apply_non_gaussian(s, NonGaussianOp(m, q))


def apply_non_gaussian(s: FockVector, op: NonGaussianOp) -> FockVector:
    """Normalized ``a^q a^dagger^m s``."""
    if op.is_identity:
        return s
    out = s
    for _ in range(op.added):
        out = fock.apply_creation(out)
    for _ in range(op.subtracted):
        out = fock.apply_annihilation(out)
    # keep the headroom the input had above its occupied levels
    out = fock.pad(out, s.dim + op.added)
    return fock.normalize(out)[0]


def build_state(family: str, params, op: NonGaussianOp | None = None,
                tail_tol: float = DEFAULT_TAIL_TOL, dim: int | None = None) -> FockVector:
    if family == "cat":
        s = cat_fock(params, tail_tol, dim)
    elif family == "squeezed":
        s = squeezed_vacuum_fock(params, tail_tol, dim)
    else:
        raise DomainError(f"unknown state family {family!r}")
    if op is not None:
        s = apply_non_gaussian(s, op)
    return s
