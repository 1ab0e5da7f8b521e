"""Normalized normally-ordered moments <a^dagger^k a^l>.

Every provider returns expectations in the unit-norm state, so
``moment(0, 0) == 1`` exactly. Three backends exist: the closed form for
the cat family, Wick contractions for the squeezed family, and direct
Fock-space overlaps for anything representable as a :class:`FockVector`.
"""

from __future__ import annotations

import math
import threading

import numpy as np

from . import fock
from .errors import AnnihilatedStateError, DomainError
from .fock import DEFAULT_TAIL_TOL, FockVector
from .numerics import binomial, double_factorial
from .states import CatParams, NonGaussianOp, SqueezedParams, build_state, unit_phase

SQUEEZED_KMAX = 12


def _cat_bracket(alpha: complex, phi: float, k: int, l: int) -> complex:
    # [1+(-1)^(k+l)] + E [(-1)^k e^{-i phi} + (-1)^l e^{i phi}], E = exp(-2|alpha|^2),
    # regrouped as (c0 + c1) + expm1(-2|alpha|^2) c1 to avoid cancellation near the odd state
    ph = unit_phase(phi)
    c0 = 1 + (-1) ** (k + l)
    c1 = (-1) ** k * ph.conjugate() + (-1) ** l * ph
    d = math.expm1(-2 * abs(alpha) ** 2)
    return (c0 + c1) + d * c1


def cat_moment_unnormalized(alpha: complex, phi: float, k: int, l: int) -> complex:
    """<a^dagger^k a^l> in the unnormalized superposition |alpha> + e^{i phi}|-alpha>."""
    alpha = complex(alpha)
    return alpha.conjugate() ** k * alpha**l * _cat_bracket(alpha, phi, k, l)


def cat_moment(p: CatParams, k: int, l: int) -> complex:
    if k < 0 or l < 0:
        raise DomainError("moment orders must be non-negative")
    if p.degenerate:
        raise AnnihilatedStateError("cat state undefined at alpha=0, phi=pi")
    if k == 0 and l == 0:
        return 1.0 + 0j
    return cat_moment_unnormalized(p.alpha, p.phi, k, l) / _cat_bracket(p.alpha, p.phi, 0, 0)


def squeezed_moment(p: SqueezedParams, k: int, l: int) -> complex:
    """Normal-ordered Wick sum over pairings.

    Contractions: <a^dagger a> = n, <a a> = mu, <a^dagger a^dagger> = conj(mu),
    with n = |zeta|^2 / (1 - |zeta|^2) and mu = zeta / (1 - |zeta|^2).
    """
    if k < 0 or l < 0:
        raise DomainError("moment orders must be non-negative")
    if k > SQUEEZED_KMAX or l > SQUEEZED_KMAX:
        raise DomainError(f"squeezed moments limited to k, l <= {SQUEEZED_KMAX}")
    if (k + l) % 2:
        return 0j
    z = p.zeta
    denom = 1.0 - abs(z) ** 2
    n = abs(z) ** 2 / denom
    mu = z / denom
    total = 0j
    for j in range(min(k, l) + 1):
        if (k - j) % 2 or (l - j) % 2:
            continue
        ways = (binomial(k, j) * binomial(l, j) * math.factorial(j)
                * double_factorial(k - j - 1) * double_factorial(l - j - 1))
        total += ways * n**j * mu.conjugate() ** ((k - j) // 2) * mu ** ((l - j) // 2)
    return complex(total)


def squeezed_moment_integral(p: SqueezedParams, kmax: int = 3) -> np.ndarray:
    """Moments from the double integral over the real line of coherent states.

    Integrates F(x) F(y) exp(-(x - y)^2 / 2) x^k y^l with the Gaussian weight
    F(x) = exp(-(1 - xi) x^2 / (2 xi)) by the trapezoid rule (spectrally
    accurate for Gaussian integrands) and normalizes by the (0, 0) entry.
    Only real positive xi (theta = 0) is supported.
    """
    xi = p.xi_mag
    if unit_phase(p.theta) != 1:
        raise DomainError("integral oracle implemented for theta = 0 only")
    if xi <= 0:
        raise DomainError("integral oracle needs xi > 0")
    a = (1 - xi) / (2 * xi)
    # quadratic form a(x^2+y^2) + (x-y)^2/2 has eigenvalues 2a and 2a+2 (per unit vector)
    wide = 1 / math.sqrt(4 * a)
    narrow = 1 / math.sqrt(4 * a + 4)
    half = 14 * wide + 2 * kmax
    h = narrow / 4
    x = np.arange(-half, half + h / 2, h)
    gx = np.exp(-a * x**2)
    kernel = np.exp(-((x[:, None] - x[None, :]) ** 2) / 2)
    weights = gx[:, None] * kernel * gx[None, :]
    powers = np.vander(x, kmax + 1, increasing=True)
    raw = powers.T @ weights @ powers
    return (raw / raw[0, 0]).astype(complex)


class MomentProvider:
    """Memoized normalized moments; subclasses implement ``_compute``."""

    backend = "abstract"

    def __init__(self):
        self._cache: dict[tuple[int, int], complex] = {}
        self._lock = threading.Lock()

    def _compute(self, k: int, l: int) -> complex:
        raise NotImplementedError

    def moment(self, k: int, l: int) -> complex:
        key = (k, l)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        val = complex(self._compute(k, l))
        with self._lock:
            # write-once: a racing thread computed the same deterministic value
            return self._cache.setdefault(key, val)

    __call__ = moment

    def table(self, kmax: int) -> np.ndarray:
        return np.array([[self.moment(k, l) for l in range(kmax + 1)]
                         for k in range(kmax + 1)])

    def mean_photons(self) -> float:
        return self.moment(1, 1).real


class CatMoments(MomentProvider):
    backend = "analytic-cat"

    def __init__(self, params: CatParams):
        super().__init__()
        if params.degenerate:
            raise AnnihilatedStateError("cat state undefined at alpha=0, phi=pi")
        self.params = params

    def _compute(self, k, l):
        return cat_moment(self.params, k, l)

    def __repr__(self):
        return f"CatMoments(alpha={self.params.alpha}, phi={self.params.phi})"


class SqueezedMoments(MomentProvider):
    backend = "analytic-squeezed"

    def __init__(self, params: SqueezedParams):
        super().__init__()
        self.params = params

    def _compute(self, k, l):
        return squeezed_moment(self.params, k, l)

    def __repr__(self):
        return f"SqueezedMoments(xi={self.params.xi_mag}, theta={self.params.theta})"


class FockMoments(MomentProvider):
    backend = "fock-numeric"

    def __init__(self, state: FockVector):
        super().__init__()
        self.params = state
        self._norm2 = fock.moment(state, 0, 0).real
        if self._norm2 <= 0:
            raise AnnihilatedStateError("zero-norm state")

    @property
    def state(self) -> FockVector:
        return self.params

    def _compute(self, k, l):
        if k == 0 and l == 0:
            return 1.0
        return fock.moment(self.params, k, l) / self._norm2

    def __repr__(self):
        return f"FockMoments(dim={self.params.dim})"


class RotatedMoments(MomentProvider):
    """``a -> a exp(-i angle)``: moment'(k, l) = exp(i (k - l) angle) moment(k, l)."""

    def __init__(self, base: MomentProvider, angle: float):
        super().__init__()
        self.base = base
        self.angle = angle
        self.backend = base.backend

    def _compute(self, k, l):
        return unit_phase((k - l) * self.angle) * self.base.moment(k, l)

    def __repr__(self):
        return f"RotatedMoments({self.base!r}, angle={self.angle})"


def rotate(provider: MomentProvider, angle: float) -> MomentProvider:
    if angle == 0:
        return provider
    return RotatedMoments(provider, angle)


def provider_for(family: str, params, op: NonGaussianOp | None = None,
                 backend: str = "auto", tail_tol: float = DEFAULT_TAIL_TOL,
                 dim: int | None = None) -> MomentProvider:
    """Pick a provider; ``auto`` uses the closed form unless an operation or a
    truncation override forces the Fock backend."""
    if backend not in ("auto", "analytic", "fock"):
        raise DomainError(f"unknown backend {backend!r}")
    needs_fock = (op is not None and not op.is_identity) or dim is not None
    if backend == "analytic" and needs_fock:
        raise DomainError("photon addition/subtraction requires the fock backend")
    if backend == "fock" or (backend == "auto" and needs_fock):
        return FockMoments(build_state(family, params, op, tail_tol, dim))
    if family == "cat":
        return CatMoments(params)
    if family == "squeezed":
        return SqueezedMoments(params)
    raise DomainError(f"unknown state family {family!r}")


DEFAULT_CAT_GRID = tuple((a, p) for a in (0.3, 0.7, 1.2, 1.8)
                         for p in (0.0, 1.0, math.pi / 2, math.pi))
DEFAULT_SQUEEZED_GRID = tuple((x, t) for x in (0.1, 0.3, 0.5, 0.7, 0.9)
                              for t in (0.0, math.pi / 3))


def compare_backends(family: str, grid=None, kmax: int = 5,
                     tail_tol: float = DEFAULT_TAIL_TOL) -> dict:
    """Closed form against Fock overlaps on a parameter grid.

    Returns ``{(k, l): (max_abs_deviation, worst_grid_point)}``.
    """
    if family == "cat":
        grid = DEFAULT_CAT_GRID if grid is None else grid
        make = CatParams
    elif family == "squeezed":
        grid = DEFAULT_SQUEEZED_GRID if grid is None else grid
        make = SqueezedParams
    else:
        raise DomainError(f"unknown state family {family!r}")
    worst: dict = {}
    for point in grid:
        p = make(*point)
        analytic = provider_for(family, p).table(kmax)
        numeric = fock.moment_table(build_state(family, p, tail_tol=tail_tol), kmax)
        dev = np.abs(analytic - numeric)
        for k in range(kmax + 1):
            for l in range(kmax + 1):
                if (k, l) not in worst or dev[k, l] > worst[k, l][0]:
                    worst[k, l] = (float(dev[k, l]), point)
    return worst
