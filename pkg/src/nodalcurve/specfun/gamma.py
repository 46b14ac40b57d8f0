"""Closed forms for ``|Gamma(1/2 + i tau)|`` and the conical gamma ratio."""
from __future__ import annotations

import math

import numpy as np

from .core import LOG_LIMIT, as_tau


class LogScaled(float):
    """A float holding ``log|v|`` for a value ``v`` too large or small to store."""

    def __repr__(self):
        return f"LogScaled({float(self)!r})"

_LOG_PI = math.log(math.pi)


def log_cosh(x: float) -> float:
    """``log cosh x`` without overflow."""
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)


def log_abs_gamma_half(tau) -> float:
    """``log|Gamma(1/2 + i tau)| = (log pi - log cosh(pi tau)) / 2``."""
    return 0.5 * (_LOG_PI - log_cosh(math.pi * as_tau(tau)))


def abs_gamma_half(tau) -> float:
    """``|Gamma(1/2 + i tau)| = sqrt(pi / cosh(pi tau))``.

    For ``tau > 500`` the plain value underflows, so the logarithm
    is returned instead, wrapped as :class:`LogScaled`.
    """
    t = as_tau(tau)
    if t > 500:
        return LogScaled(log_abs_gamma_half(t))
    return math.sqrt(math.pi / math.cosh(math.pi * t))


def log_gamma_ratio(m: int, tau) -> float:
    """``log prod_{k<m} sqrt((k+1/2)^2 + tau^2)``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return 0.0
    t = as_tau(tau)
    k = np.arange(m, dtype=float) + 0.5
    return 0.5 * float(np.sum(np.log(k * k + t * t)))


def gamma_ratio(m: int, tau):
    """``|Gamma(1/2 + m + i tau)| / |Gamma(1/2 + i tau)|``.

    Returns the logarithm, wrapped as :class:`LogScaled`, when the ratio
    would overflow.
    """
    lg = log_gamma_ratio(m, tau)
    return LogScaled(lg) if lg > LOG_LIMIT else math.exp(lg)
