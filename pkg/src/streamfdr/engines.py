"""Sequential decision procedures and the static step-up baseline.

Two one-pass streaming rules share a budget schedule: one resets the
budget clock at each discovery (``lord_step``), the other scales the
budget by the discovery count (``lond_step``). Both decide each
hypothesis from past P-values only. ``bh_reject`` is the classic static
step-up rule over a complete P-value vector, used as a non-sequential
baseline.

``run_stream`` and the ``*_levels`` array cores compute exactly what
folding the step functions would, via a block scan: within a stretch of
acceptances the significance levels are a fixed slice of the schedule,
so each block is one vectorized comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .schedules import LambdaSchedule

__all__ = [
    "LordState",
    "LondState",
    "Decision",
    "lord_step",
    "lond_step",
    "lord_levels",
    "lond_levels",
    "run_stream",
    "bh_reject",
    "bh_mask",
]

# Block scans gallop: start small so dense-discovery streams pay per
# discovery, double on every miss so long acceptance runs stay vectorized.
_SCAN_MIN = 64
_SCAN_MAX = 65536


@dataclass
class LordState:
    """Per-stream state: 1-based next index and last discovery (0 = none)."""

    next_index: int = 1
    last_discovery: int = 0


@dataclass
class LondState:
    """Per-stream state: 1-based next index and discovery count."""

    next_index: int = 1
    discoveries: int = 0


@dataclass(frozen=True)
class Decision:
    """One step's record; ``rejected`` holds iff ``p <= alpha``."""

    index: int
    alpha: float
    p: float
    rejected: bool


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise ValueError(f"P-value must lie in [0, 1], got {p}")
    return p


def _check_p_array(pvalues) -> np.ndarray:
    arr = np.asarray(pvalues, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if not bool(np.all((arr >= 0.0) & (arr <= 1.0))):
        raise ValueError("all P-values must lie in [0, 1] and be non-NaN")
    return arr


def _check_q(q: float) -> float:
    q = float(q)
    if math.isnan(q) or not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    return q


def lord_step(state: LordState, schedule: LambdaSchedule, p: float) -> Decision:
    """Decide one hypothesis with the level set by time since last discovery.

    ``alpha_i = lambda_{i - t}`` where ``t`` is the index of the most
    recent rejection (0 before any). Equality ``p == alpha`` rejects.
    """
    p = _check_p(p)
    i = state.next_index
    alpha = schedule.lambda_at(i - state.last_discovery)
    rejected = p <= alpha
    if rejected:
        state.last_discovery = i
    state.next_index = i + 1
    return Decision(i, alpha, p, rejected)


def lond_step(state: LondState, schedule: LambdaSchedule, p: float) -> Decision:
    """Decide one hypothesis with the level scaled by discoveries so far.

    ``alpha_i = lambda_i * (D + 1)`` with D the discovery count before
    step i, clamped to 1 (the product can exceed 1 for large D).
    """
    p = _check_p(p)
    i = state.next_index
    alpha = min(1.0, schedule.lambda_at(i) * (state.discoveries + 1))
    rejected = p <= alpha
    if rejected:
        state.discoveries += 1
    state.next_index = i + 1
    return Decision(i, alpha, p, rejected)


def lord_levels(pvalues, schedule: LambdaSchedule):
    """Vectorized one-pass run of the recent-discovery rule.

    Returns ``(alpha, rejected)`` arrays bit-identical to folding
    ``lord_step`` over the stream.
    """
    p = _check_p_array(pvalues)
    n = p.size
    alpha = np.empty(n, dtype=np.float64)
    rejected = np.zeros(n, dtype=bool)
    i = 0  # 0-based position of the next decision
    t = 0  # 1-based index of the last discovery, 0 before any
    block = _SCAN_MIN
    while i < n:
        stop = min(n, i + block)
        lam = schedule.slice(i + 1 - t, stop + 1 - t)
        hits = np.flatnonzero(p[i:stop] <= lam)
        if hits.size:
            h = int(hits[0])
            alpha[i : i + h + 1] = lam[: h + 1]
            rejected[i + h] = True
            t = i + h + 1
            i = t
            block = _SCAN_MIN
        else:
            alpha[i:stop] = lam
            i = stop
            block = min(2 * block, _SCAN_MAX)
    return alpha, rejected


def lond_levels(pvalues, schedule: LambdaSchedule):
    """Vectorized one-pass run of the discovery-count rule.

    Returns ``(alpha, rejected)`` arrays bit-identical to folding
    ``lond_step`` over the stream.
    """
    p = _check_p_array(pvalues)
    n = p.size
    alpha = np.empty(n, dtype=np.float64)
    rejected = np.zeros(n, dtype=bool)
    i = 0
    d = 0
    block = _SCAN_MIN
    while i < n:
        stop = min(n, i + block)
        seg = np.minimum(1.0, schedule.slice(i + 1, stop + 1) * (d + 1))
        hits = np.flatnonzero(p[i:stop] <= seg)
        if hits.size:
            h = int(hits[0])
            alpha[i : i + h + 1] = seg[: h + 1]
            rejected[i + h] = True
            d += 1
            i = i + h + 1
            block = _SCAN_MIN
        else:
            alpha[i:stop] = seg
            i = stop
            block = min(2 * block, _SCAN_MAX)
    return alpha, rejected


_LEVELS = {"lord": lord_levels, "lond": lond_levels}


def run_stream(engine: str, schedule: LambdaSchedule, pvalues) -> list[Decision]:
    """Run a streaming procedure over a finite P-value list.

    The output equals folding the corresponding step function over the
    list from a fresh state; in particular the first m decisions depend
    only on the first m P-values.
    """
    try:
        levels = _LEVELS[engine.lower()]
    except (KeyError, AttributeError):
        raise ValueError(f"engine must be one of {sorted(_LEVELS)}, got {engine!r}") from None
    p = _check_p_array(pvalues)
    alpha, rejected = levels(p, schedule)
    return [
        Decision(k + 1, float(alpha[k]), float(p[k]), bool(rejected[k]))
        for k in range(p.size)
    ]


def bh_mask(pvalues, q: float) -> np.ndarray:
    """Boolean rejection mask of the static step-up rule at level ``q``.

    With sorted P-values p_(1) <= ... <= p_(n), find the largest j with
    ``p_(j) <= q * j / n`` and reject everything at or below p_(j); ties
    at the threshold value are all included.
    """
    q = _check_q(q)
    p = _check_p_array(pvalues)
    n = p.size
    if n == 0:
        return np.zeros(0, dtype=bool)
    sorted_p = np.sort(p)
    passed = sorted_p <= q * np.arange(1, n + 1, dtype=np.float64) / n
    if not passed.any():
        return np.zeros(n, dtype=bool)
    cutoff = sorted_p[int(np.flatnonzero(passed)[-1])]
    return p <= cutoff


def bh_reject(pvalues, q: float) -> set[int]:
    """1-based indices rejected by the step-up rule; empty input -> empty set."""
    mask = bh_mask(pvalues, q)
    return set((np.flatnonzero(mask) + 1).tolist())
