"""Value types shared by the special-function routines."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ..errors import ArgumentOutOfRange

# log(DBL_MAX) with margin; values whose log-magnitude falls outside
# [-LOG_LIMIT, LOG_LIMIT] are reported in log-scaled form.
LOG_LIMIT = 700.0


class Regime(enum.Enum):
    MONOTONE_LARGE_X = "MONOTONE_LARGE_X"
    OSCILLATORY = "OSCILLATORY"
    AIRY = "AIRY"
    LEGENDRE_BESSEL_K = "LEGENDRE_BESSEL_K"
    LEGENDRE_BESSEL_J = "LEGENDRE_BESSEL_J"
    ORACLE = "ORACLE"


@dataclass(frozen=True)
class SpectralParam:
    """Spectral parameter of a Laplace eigenvalue ``-(1/4 + tau**2)``."""

    tau: float

    def __post_init__(self):
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ArgumentOutOfRange(f"tau must be positive and finite, got {self.tau!r}")

    @property
    def eigenvalue(self) -> float:
        return -(0.25 + self.tau * self.tau)

    def __float__(self) -> float:
        return float(self.tau)


def as_tau(tau) -> float:
    """Accept a plain number or a :class:`SpectralParam`."""
    return float(tau.tau) if isinstance(tau, SpectralParam) else float(tau)


@dataclass(frozen=True)
class EvalReport:
    """A special-function value.

    When ``log_scaled`` is true, ``value`` is ``log|f|`` and the sign is in
    ``sign``; ``est_error`` is then a relative error.  Otherwise ``value``
    is ``f`` itself and ``est_error`` is absolute.
    """

    value: float
    log_scaled: bool
    regime: Regime
    est_error: float
    sign: int = 1

    def __post_init__(self):
        if not (self.est_error >= 0 and math.isfinite(self.est_error)):
            raise ValueError(f"est_error must be finite and nonnegative, got {self.est_error}")

    @property
    def real(self) -> float:
        """The value as an ordinary float (may under/overflow)."""
        if self.log_scaled:
            return self.sign * math.exp(min(self.value, 709.0)) if self.value > -745 else 0.0
        return self.value

    @property
    def log_abs(self) -> float:
        if self.log_scaled:
            return self.value
        return math.log(abs(self.value)) if self.value != 0 else -math.inf

    @classmethod
    def from_log(cls, log_abs: float, sign: int, regime: Regime, rel_error: float) -> "EvalReport":
        """Build a report, switching to log scale only when the value would not fit."""
        rel_error = float(min(abs(rel_error), 1e300))
        if sign == 0:
            return cls(0.0, False, regime, 0.0, 0)
        if -LOG_LIMIT < log_abs < LOG_LIMIT:
            v = sign * math.exp(log_abs)
            return cls(v, False, regime, abs(v) * rel_error, sign)
        return cls(float(log_abs), True, regime, rel_error, sign)
