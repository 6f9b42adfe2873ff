"""Hermite and generalized Laguerre polynomials by three-term recurrence."""

from __future__ import annotations

import math

import numpy as np

_LOG_FACT_TABLE_SIZE = 171


def _build_log_factorials(n: int) -> tuple[float, ...]:
    logs = [0.0] * n
    for k in range(2, n):
        logs[k] = math.fsum(math.log(j) for j in range(2, k + 1))
    return tuple(logs)


_LOG_FACT = _build_log_factorials(_LOG_FACT_TABLE_SIZE)


def log_factorial(n: int) -> float:
    """ln(n!) from a precomputed table for n <= 170, lgamma beyond."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < _LOG_FACT_TABLE_SIZE:
        return _LOG_FACT[n]
    return math.lgamma(n + 1.0)


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x); broadcasts over ``x``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if x.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if x.ndim else float(h)


def glaguerre(k: int, alpha: int, x):
    """Generalized Laguerre polynomial L_k^(alpha)(x) for integer alpha >= 0."""
    if k < 0 or alpha < 0:
        raise ValueError("degree and order must be non-negative")
    if int(alpha) != alpha:
        raise ValueError("only integer alpha is supported")
    x = np.asarray(x, dtype=float)
    l_prev = np.ones_like(x)
    if k == 0:
        return l_prev if x.ndim else float(l_prev)
    l = 1.0 + alpha - x
    for j in range(1, k):
        l_prev, l = l, ((2 * j + 1 + alpha - x) * l - (j + alpha) * l_prev) / (j + 1)
    return l if x.ndim else float(l)
