"""Combinatorial primitives used by the witness formulas.

Binomials and Stirling numbers are exact Python integers inside their
stated ranges; outside, ``log_binomial`` and the log-factorial table give
real-valued fallbacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError

BINOMIAL_EXACT_MAX = 64
STIRLING_MAX = 32
DOUBLE_FACTORIAL_MAX = 300


@dataclass(frozen=True)
class LogFactorialTable:
    """``values[n] = ln(n!)`` for ``0 <= n <= max_n``."""

    max_n: int
    values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.max_n < 0:
            raise DomainError("max_n must be non-negative")
        logs = np.zeros(self.max_n + 1)
        if self.max_n > 0:
            # cumulative sum of ln k keeps consecutive differences exact to rounding
            logs[1:] = np.cumsum(np.log(np.arange(1, self.max_n + 1, dtype=float)))
        logs.setflags(write=False)
        object.__setattr__(self, "values", logs)

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return self.max_n + 1


@lru_cache(maxsize=8)
def log_factorial_table(max_n: int) -> LogFactorialTable:
    return LogFactorialTable(max_n)


def binomial(n: int, k: int) -> int:
    """n choose k, exact; 0 when k > n."""
    if n < 0 or k < 0:
        raise DomainError("binomial arguments must be non-negative")
    if n > BINOMIAL_EXACT_MAX:
        raise DomainError(
            f"exact binomial limited to n <= {BINOMIAL_EXACT_MAX}; use log_binomial"
        )
    if k > n:
        return 0
    return math.comb(n, k)


def log_binomial(n: int, k: int) -> float:
    """ln(n choose k) for arbitrary n; -inf when k > n."""
    if n < 0 or k < 0:
        raise DomainError("binomial arguments must be non-negative")
    if k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@lru_cache(maxsize=None)
def _stirling2_row(r: int) -> tuple[int, ...]:
    if r == 0:
        return (1,)
    prev = _stirling2_row(r - 1)
    row = [0] * (r + 1)
    for k in range(1, r + 1):
        left = prev[k] if k < len(prev) else 0
        row[k] = k * left + prev[k - 1]
    return tuple(row)


def stirling2(r: int, k: int) -> int:
    """Stirling number of the second kind S(r, k), exact."""
    if r < 0 or k < 0:
        raise DomainError("stirling2 arguments must be non-negative")
    if r > STIRLING_MAX:
        raise DomainError(f"stirling2 limited to r <= {STIRLING_MAX}")
    if k > r:
        return 0
    return _stirling2_row(r)[k]


def double_factorial(n: int) -> float:
    """n!! with (-1)!! = 0!! = 1.

    Evaluated through log-gamma so large arguments do not overflow
    intermediate products; small arguments are returned exactly.
    """
    if n < -1:
        raise DomainError("double factorial defined for n >= -1")
    if n > DOUBLE_FACTORIAL_MAX:
        raise DomainError(f"double factorial limited to n <= {DOUBLE_FACTORIAL_MAX}")
    if n <= 0:
        return 1.0
    if n <= 40:
        return float(math.prod(range(n, 0, -2)))
    if n % 2 == 0:
        m = n // 2
        logv = m * math.log(2.0) + math.lgamma(m + 1)
    else:
        m = (n + 1) // 2
        # (2m-1)!! = (2m)! / (2^m m!)
        logv = math.lgamma(2 * m + 1) - m * math.log(2.0) - math.lgamma(m + 1)
    return math.exp(logv)


def pochhammer(x: float, n: int) -> float:
    """Rising factorial x (x+1) ... (x+n-1); empty product for n = 0."""
    if n < 0:
        raise DomainError("pochhammer count must be non-negative")
    out = 1.0
    for j in range(n):
        out *= x + j
    return out
