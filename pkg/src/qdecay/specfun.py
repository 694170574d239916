"""Stable special-function kernels shared by the analytic state engines.

Everything here is evaluated by upward three-term recurrences, which are
stable for the dominant solutions we need, plus a log-space Poisson weight
built on an exact ln(n!) table.  Orders are capped so that silent overflow
is impossible; callers that legitimately need very high orders pass their
own cap.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import OrderLimitError

MAX_ORDER = 512

# ln(n!) by exact cumulative summation of ln k.  The table deliberately
# overshoots MAX_ORDER: photon-statistics internals index it up to twice
# their own n_max.
_TABLE_SIZE = 4096
_LN_FACTORIAL = np.concatenate(
    ([0.0], np.cumsum(np.log(np.arange(1, _TABLE_SIZE + 1))))
)


def log_factorial(n: int) -> float:
    """ln(n!) from the exact table."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n > _TABLE_SIZE:
        raise OrderLimitError(f"ln({n}!) exceeds the table size {_TABLE_SIZE}")
    return float(_LN_FACTORIAL[n])


def _check_order(order: int, max_order: int) -> None:
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    if order > max_order:
        raise OrderLimitError(
            f"order {order} above the configured cap {max_order}"
        )


def laguerre(order: int, x: float, *, max_order: int = MAX_ORDER) -> float:
    """Laguerre polynomial L_order(x) by upward recurrence.

    (l+1) L_{l+1} = (2l+1-x) L_l - l L_{l-1}
    """
    _check_order(order, max_order)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    if order == 0:
        return 1.0
    prev, cur = 1.0, 1.0 - x
    for l in range(1, order):
        prev, cur = cur, ((2 * l + 1 - x) * cur - l * prev) / (l + 1)
    if not math.isfinite(cur):
        raise OrderLimitError(
            f"L_{order}({x}) overflowed double precision"
        )
    return cur


def laguerre_sequence(l_max: int, x, *, max_order: int = MAX_ORDER) -> np.ndarray:
    """All of L_0..L_{l_max} at x (x may be an array); shape (l_max+1, *x.shape)."""
    _check_order(l_max, max_order)
    x = np.asarray(x, dtype=float)
    out = np.empty((l_max + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if l_max == 0:
        return out
    out[1] = 1.0 - x
    for l in range(1, l_max):
        out[l + 1] = ((2 * l + 1 - x) * out[l] - l * out[l - 1]) / (l + 1)
    return out


def hermite(order: int, z: complex, *, max_order: int = MAX_ORDER) -> complex:
    """Hermite polynomial H_order(z) for complex z by upward recurrence.

    H_{j+1} = 2 z H_j - 2 j H_{j-1}
    """
    _check_order(order, max_order)
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"z must be finite, got {z}")
    if order == 0:
        return 1.0 + 0j
    prev, cur = 1.0 + 0j, 2.0 * z
    for j in range(1, order):
        prev, cur = cur, 2.0 * z * cur - 2.0 * j * prev
    if not (math.isfinite(cur.real) and math.isfinite(cur.imag)):
        raise OrderLimitError(f"H_{order}({z}) overflowed double precision")
    return cur


def hermite_log_sequence(j_max: int, z: complex) -> tuple[np.ndarray, np.ndarray]:
    """H_0..H_{j_max} at complex z in scaled form.

    Returns (logmag, unit) with H_j = exp(logmag[j]) * unit[j]; |unit| = 1
    (unit = 1 where H_j = 0, logmag = -inf there).  The recurrence is
    rescaled whenever magnitudes approach the overflow threshold, so any
    order representable by a float exponent is reachable.
    """
    if j_max < 0:
        raise ValueError(f"j_max must be non-negative, got {j_max}")
    z = complex(z)
    logmag = np.full(j_max + 1, -np.inf)
    unit = np.ones(j_max + 1, dtype=complex)
    shift = 0.0  # running log of the factor divided out so far
    prev, cur = 1.0 + 0j, 2.0 * z

    def record(j, value):
        m = abs(value)
        if m > 0.0:
            logmag[j] = math.log(m) + shift
            unit[j] = value / m

    record(0, prev)
    if j_max == 0:
        return logmag, unit
    record(1, cur)
    for j in range(1, j_max):
        prev, cur = cur, 2.0 * z * cur - 2.0 * j * prev
        scale = max(abs(cur), abs(prev))
        if scale > 1e250:
            prev /= scale
            cur /= scale
            shift += math.log(scale)
        record(j + 1, cur)
    return logmag, unit


def log_poisson_weight(n, mean: float):
    """ln of the Poisson weight e^{-mean} mean^n / n!, elementwise.

    Returns -inf for n > 0 at mean = 0 (and 0.0 at n = 0), so that
    exponentiation gives the exact degenerate distribution.  Scalar ``n``
    gives a float, integer arrays map elementwise through the table.
    """
    idx = np.asarray(n)
    if np.any(idx < 0):
        raise ValueError("n must be non-negative")
    if np.any(idx > _TABLE_SIZE):
        raise OrderLimitError(f"ln(n!) exceeds the table size {_TABLE_SIZE}")
    if mean < 0 or not math.isfinite(mean):
        raise ValueError(f"mean must be finite and non-negative, got {mean}")
    if mean == 0.0:
        out = np.where(idx == 0, 0.0, -math.inf)
    else:
        out = -mean + idx * math.log(mean) - _LN_FACTORIAL[idx]
    return float(out) if idx.ndim == 0 else out


def poisson_tail_cutoff(mean: float, tail: float, *, cap: int = _TABLE_SIZE) -> int:
    """Smallest n with the Poisson(mean) mass above n below `tail`."""
    if tail <= 0:
        raise ValueError("tail must be positive")
    remaining = 1.0
    for n in range(cap):
        remaining -= math.exp(log_poisson_weight(n, mean))
        if remaining < tail:
            return n + 1
    raise OrderLimitError(
        f"Poisson tail {tail} at mean {mean} not reached within {cap} terms"
    )
