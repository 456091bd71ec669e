"""Significance-budget sequences consumed by the streaming procedures.

A schedule is a positive, non-increasing sequence ``lambda_i`` whose
infinite sum equals the total FDR budget ``q``. Two kinds are provided:

* power: ``lambda_i = L * i**-nu`` with ``nu > 1`` and ``L = q / zeta(nu)``;
* adaptive: ``lambda_i = L / ((i + 1) * log(i + 1)**2)``, which is summable
  yet decays slower than every power ``i**-nu`` with ``nu > 1``, so it
  needs no tuning of ``nu``.

Values are materialized lazily in fixed-size chunks; scalar lookups and
array slices read the same chunk arrays, so both return bit-identical
floats no matter the access order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

__all__ = ["LambdaSchedule", "make_power_schedule", "make_adaptive_schedule"]

_CHUNK = 4096
# Chunks are cached up to this index; beyond it they are recomputed per
# request so unbounded streams cannot exhaust memory.
_CACHE_LIMIT = 10**7

_adaptive_norm_cache: float | None = None


def _adaptive_norm() -> float:
    """sum_{j>=2} 1/(j log^2 j), via 1e7 terms plus an Euler-Maclaurin tail.

    The tail from index M is 1/log(M) + f(M)/2 - f'(M)/12 with
    f(x) = 1/(x log^2 x); the neglected correction is O(M^-3), far inside
    the 1e-9 normalization budget.
    """
    global _adaptive_norm_cache
    if _adaptive_norm_cache is None:
        n_terms = 10**7
        j = np.arange(2, n_terms + 2, dtype=np.float64)
        partial = float(np.sum(1.0 / (j * np.log(j) ** 2)))
        m = float(n_terms + 2)
        log_m = math.log(m)
        f_m = 1.0 / (m * log_m**2)
        fp_m = -(1.0 + 2.0 / log_m) / (m**2 * log_m**2)
        _adaptive_norm_cache = partial + 1.0 / log_m + 0.5 * f_m - fp_m / 12.0
    return _adaptive_norm_cache


def _check_q(q: float) -> float:
    q = float(q)
    if math.isnan(q) or not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    return q


@dataclass
class LambdaSchedule:
    """A concrete significance-budget sequence.

    ``normalizer`` is the constant L that makes the infinite sum equal
    ``q``. Instances are immutable apart from the internal chunk cache
    and safe to share once constructed.
    """

    kind: str
    q: float
    nu: float | None
    normalizer: float
    _chunks: dict = field(default_factory=dict, repr=False, compare=False)

    def _chunk(self, c: int) -> np.ndarray:
        cached = self._chunks.get(c)
        if cached is not None:
            return cached
        start = c * _CHUNK + 1
        i = np.arange(start, start + _CHUNK, dtype=np.float64)
        if self.kind == "power":
            values = self.normalizer * i ** (-self.nu)
        else:
            values = self.normalizer / ((i + 1.0) * np.log(i + 1.0) ** 2)
        if start <= _CACHE_LIMIT:
            self._chunks[c] = values
        return values

    def lambda_at(self, i: int) -> float:
        """The i-th budget value, i >= 1."""
        if i != int(i) or i < 1:
            raise ValueError(f"index must be a positive integer, got {i}")
        c, offset = divmod(int(i) - 1, _CHUNK)
        return float(self._chunk(c)[offset])

    def slice(self, lo: int, hi: int) -> np.ndarray:
        """Values lambda_lo .. lambda_{hi-1} as an array (lo >= 1)."""
        if lo < 1 or hi < lo:
            raise ValueError(f"invalid index range [{lo}, {hi})")
        out = np.empty(hi - lo, dtype=np.float64)
        pos = lo
        while pos < hi:
            c, offset = divmod(pos - 1, _CHUNK)
            take = min(hi - pos, _CHUNK - offset)
            out[pos - lo : pos - lo + take] = self._chunk(c)[offset : offset + take]
            pos += take
        return out

    def prefix(self, n: int) -> np.ndarray:
        """lambda_1 .. lambda_n as an array."""
        return self.slice(1, n + 1)


def make_power_schedule(nu: float, q: float) -> LambdaSchedule:
    """Power-law schedule ``lambda_i = L * i**-nu`` summing to ``q``.

    ``nu`` must exceed 1 for the series to converge; L = q / zeta(nu).
    """
    nu = float(nu)
    if math.isnan(nu) or nu <= 1.0:
        raise ValueError(f"nu must exceed 1 (the series diverges otherwise), got {nu}")
    q = _check_q(q)
    return LambdaSchedule(kind="power", q=q, nu=nu, normalizer=q / float(special.zeta(nu)))


def make_adaptive_schedule(q: float) -> LambdaSchedule:
    """Slow-decay schedule ``lambda_i = L / ((i+1) log(i+1)^2)``.

    Summable, strictly decreasing, and ``i**nu * lambda_i`` diverges for
    every ``nu > 1``, so it trades a little early budget for robustness
    when the right power exponent is unknown.
    """
    q = _check_q(q)
    return LambdaSchedule(kind="adaptive", q=q, nu=None, normalizer=q / _adaptive_norm())
