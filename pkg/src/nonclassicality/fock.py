"""Truncated single-mode Fock space.

Everything here works on plain amplitude vectors and applies ladder
operators directly; no operator matrices or factorial ratios are formed,
so truncations of several thousand levels are fine.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AnnihilatedStateError,
    ConsistencyError,
    DomainError,
    TruncationError,
    TruncationWarning,
)

DEFAULT_TAIL_TOL = 1e-14
MAX_DIM = 1 << 15
# extra levels kept beyond the minimal tail-mass cut
SAFETY_MARGIN = 8
# tail mass is measured with weights (n+1)**MOMENT_WEIGHT so that moments up to
# about this total order keep relative truncation error below tail_tol
MOMENT_WEIGHT = 16
TAIL_WINDOW = 4
ZERO_NORM = 1e-300


@dataclass(frozen=True, eq=False)
class FockVector:
    """Immutable amplitude vector ``c[n]`` on the number basis ``n = 0..dim-1``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex, copy=True).reshape(-1)
        if amps.size == 0:
            raise DomainError("FockVector needs at least one level")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tail_mass(self, window: int = TAIL_WINDOW) -> float:
        """Probability held in the top ``window`` levels."""
        return float(self.probabilities()[max(self.dim - window, 0):].sum())

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"FockVector(dim={self.dim}, norm={self.norm:.6g})"


def basis(n: int, dim: int | None = None) -> FockVector:
    """Number state ``|n>``; ``dim`` defaults to ``n + 1 + SAFETY_MARGIN``."""
    if n < 0:
        raise DomainError("photon number must be non-negative")
    dim = n + 1 + SAFETY_MARGIN if dim is None else dim
    if dim <= n:
        raise TruncationError(f"dim={dim} cannot hold |{n}>")
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def coherent(alpha: complex, tail_tol: float = DEFAULT_TAIL_TOL, dim: int | None = None):
    """Coherent state with amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!)."""
    amps = coherent_amplitudes(alpha, _raw_length(abs(alpha) ** 2, tail_tol))
    return truncate(amps, tail_tol, dim)


def coherent_amplitudes(alpha: complex, length: int) -> np.ndarray:
    """Coherent amplitudes for n < length via the ratio recursion (no factorials)."""
    amps = np.empty(length, dtype=complex)
    amps[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, length):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    return amps


def _raw_length(mean: float, tail_tol: float) -> int:
    # generous bound on where a Poisson-like tail, weighted by n**MOMENT_WEIGHT,
    # falls far below tail_tol
    width = np.sqrt(mean + 1.0)
    return int(mean + 25 * width + 4 * np.log10(1.0 / tail_tol) + 2 * MOMENT_WEIGHT + 40)


def minimal_dim(probs: np.ndarray, tail_tol: float, weight: int = 0) -> int:
    """Smallest dim whose top ``TAIL_WINDOW`` levels and everything above hold < tail_tol.

    With ``weight > 0`` the tail is measured in the distribution proportional
    to ``probs * (n+1)**weight``, which is always at least the plain tail.
    """
    if weight:
        logw = np.log(np.maximum(probs, 1e-320)) + weight * np.log1p(np.arange(probs.size))
        probs = np.exp(logw - logw.max())
        probs = probs / probs.sum()
    tail = np.append(np.cumsum(probs[::-1])[::-1], 0.0)
    ok = np.nonzero(tail < tail_tol)[0]
    if ok.size == 0:
        raise TruncationError(
            f"tail mass never drops below {tail_tol:g} within {probs.size} levels"
        )
    return int(ok[0]) + TAIL_WINDOW


def truncate(raw: np.ndarray, tail_tol: float = DEFAULT_TAIL_TOL, dim: int | None = None,
             margin: int = SAFETY_MARGIN, weight: int = MOMENT_WEIGHT) -> FockVector:
    """Normalize ``raw`` and cut it to an automatically chosen dimension.

    ``dim`` overrides the automatic choice; an override below it triggers
    a :class:`TruncationWarning` and the state is renormalized at the
    smaller size.
    """
    if tail_tol <= 0:
        raise DomainError("tail_tol must be positive")
    raw = np.asarray(raw, dtype=complex)
    total = np.linalg.norm(raw)
    if total < ZERO_NORM:
        raise AnnihilatedStateError("state has zero norm")
    probs = np.abs(raw / total) ** 2
    auto = min(minimal_dim(probs, tail_tol, weight) + margin, MAX_DIM)
    if dim is None:
        dim = auto
    elif dim < auto:
        warnings.warn(
            f"truncation dim={dim} is below the automatic choice {auto}; "
            f"tail mass {probs[max(dim - TAIL_WINDOW, 0):].sum():.3g} exceeds tail_tol",
            TruncationWarning,
            stacklevel=2,
        )
    if dim > MAX_DIM:
        raise TruncationError(f"dim={dim} exceeds budget {MAX_DIM}")
    amps = np.zeros(dim, dtype=complex)
    n = min(dim, raw.size)
    amps[:n] = raw[:n]
    return normalize(FockVector(amps))[0]


def pad(s: FockVector, dim: int) -> FockVector:
    """Zero-extend to ``dim`` levels (never shrinks)."""
    if dim <= s.dim:
        return s
    amps = np.zeros(dim, dtype=complex)
    amps[: s.dim] = s.amplitudes
    return FockVector(amps)


def apply_annihilation(s: FockVector) -> FockVector:
    """``a s``; one level shorter (vacuum maps to a zero vector)."""
    c = s.amplitudes
    if s.dim == 1:
        return FockVector(np.zeros(1, dtype=complex))
    return FockVector(np.sqrt(np.arange(1, s.dim)) * c[1:])


def apply_creation(s: FockVector) -> FockVector:
    """``a^dagger s``; one level longer."""
    out = np.zeros(s.dim + 1, dtype=complex)
    out[1:] = np.sqrt(np.arange(1, s.dim + 1)) * s.amplitudes
    return FockVector(out)


def normalize(s: FockVector) -> tuple[FockVector, float]:
    nrm = s.norm
    if nrm < ZERO_NORM:
        raise AnnihilatedStateError("cannot normalize the zero vector (annihilated state)")
    return FockVector(s.amplitudes / nrm), nrm


def phase_rotate(s: FockVector, angle: float) -> FockVector:
    """Multiply ``c[n]`` by ``exp(-i n angle)``, i.e. ``a -> a exp(-i angle)``."""
    return FockVector(s.amplitudes * np.exp(-1j * angle * np.arange(s.dim)))


def _lowered(c: np.ndarray, k: int) -> np.ndarray:
    for _ in range(k):
        c = np.sqrt(np.arange(1, c.size)) * c[1:]
    return c


def _inner(u: np.ndarray, v: np.ndarray) -> complex:
    n = min(u.size, v.size)
    return complex(np.vdot(u[:n], v[:n]))


def moment(s: FockVector, k: int, l: int) -> complex:
    """<a^dagger^k a^l> as the overlap <a^k s | a^l s>."""
    if k < 0 or l < 0:
        raise DomainError("moment orders must be non-negative")
    if k + l >= s.dim:
        raise TruncationError(f"moment order k+l={k + l} needs dim > {k + l}, got {s.dim}")
    c = s.amplitudes
    return _inner(_lowered(c, k), _lowered(c, l))


def moment_table(s: FockVector, kmax: int) -> np.ndarray:
    """All moments ``<a^dagger^k a^l>`` for ``0 <= k, l <= kmax`` as a matrix."""
    if 2 * kmax >= s.dim:
        raise TruncationError(f"moment table up to {kmax} needs dim > {2 * kmax}")
    lowered = [s.amplitudes]
    for _ in range(kmax):
        lowered.append(_lowered(lowered[-1], 1))
    table = np.empty((kmax + 1, kmax + 1), dtype=complex)
    for k in range(kmax + 1):
        for l in range(kmax + 1):
            table[k, l] = _inner(lowered[k], lowered[l])
    return table


def _apply_quadrature(v: np.ndarray, angle: float) -> np.ndarray:
    # X = (a e^{-i angle} + a^dagger e^{i angle}) / sqrt(2), kept at fixed length
    sq = np.sqrt(np.arange(1, v.size))
    out = np.zeros_like(v)
    out[:-1] += np.exp(-1j * angle) * sq * v[1:]
    out[1:] += np.exp(1j * angle) * sq * v[:-1]
    return out / np.sqrt(2.0)


def quadrature_moment(s: FockVector, n: int, angle: float = 0.0,
                      imag_tol: float = 1e-10) -> float:
    """Central moment ``<(X - <X>)^n>`` of the rotated quadrature, by direct application."""
    if n < 1:
        raise DomainError("quadrature moment order must be positive")
    dim = s.dim + n + 1
    if dim > MAX_DIM:
        raise TruncationError(f"quadrature moment needs dim {dim} > budget {MAX_DIM}")
    c = pad(s, dim).amplitudes
    mean = np.vdot(c, _apply_quadrature(c, angle))
    if abs(mean.imag) > imag_tol:
        raise ConsistencyError(f"<X> has imaginary part {mean.imag:.3g}")
    w = c
    for _ in range(n):
        w = _apply_quadrature(w, angle) - mean.real * w
    val = np.vdot(c, w)
    if abs(val.imag) > imag_tol * max(1.0, abs(val.real)):
        raise ConsistencyError(f"quadrature moment has imaginary part {val.imag:.3g}")
    return float(val.real)
