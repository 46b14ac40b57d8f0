"""Normalized Bessel functions of imaginary order ``K~_{i tau}(x)`` and ``J_m``.

``K~_{i tau}(x) = K_{i tau}(x) / |Gamma(1/2 + i tau)|`` is O(1) in the
oscillatory range, so it is assembled in log form and never passes
through the unnormalized value.
"""
from __future__ import annotations

import functools
import math

import numpy as np
from scipy.special import airy, jv, gamma as _gamma

from ..config import Config, resolve
from ..errors import NonPositiveArgument, TauTooLarge
from ..quadrature import abs_integral, integrate
from .core import EvalReport, Regime, as_tau
from .gamma import log_abs_gamma_half

# Value of K~(tau, tau) * tau**(1/3) in the limit tau -> infinity.
AIRY_C0 = 2.0 ** (-2.0 / 3.0) * 3.0 ** (-1.0 / 6.0) * _gamma(1.0 / 3.0) / math.sqrt(2.0 * math.pi)
# The same constant as it is often quoted without the normalization
# of K~; larger than AIRY_C0 by a factor pi * sqrt(2 pi).
AIRY_C0_UNNORMALIZED = 2.0 ** (-2.0 / 3.0) * 3.0 ** (-1.0 / 6.0) * math.pi * _gamma(1.0 / 3.0)

# Calibrated constants of the neglected second-order terms, see
# tests/test_specfun.py::test_asymptotic_error_model.
_ERR_MONOTONE = 16.0
_ERR_OSC = 12.0
_ERR_AIRY = 0.01


# -- oracle ---------------------------------------------------------------

def _oracle_panels(tau: float, x: float, ca: float, sa: float, tstar: float) -> np.ndarray:
    edges = [0.0]
    t = 0.0
    scale = x * ca
    while t < tstar:
        h = min(0.5, 2.0 / (tau + x * sa * math.cosh(t + 0.5) + scale * math.sinh(t + 0.5) + 1.0))
        if scale > 1.0:
            h = min(h, 1.0 / math.sqrt(scale))
        t = min(t + h, tstar)
        edges.append(t)
    return np.array(edges)


def _k_tilde_log(tau: float, x: float, rtol: float) -> tuple[float, int, float]:
    """Return ``(log|K~|, sign, relative error)`` by quadrature.

    Starts from ``K_{i tau}(x) = int_0^inf exp(-x cosh t) cos(tau t) dt`` and
    moves the path to ``Im t = a`` with ``sin a ~ tau / x``.  On the shifted
    path the oscillation of ``cos(tau t)`` is absorbed by the phase of
    ``cosh``, so no exponentially small difference of large terms is formed.
    """
    if tau > 0:
        a = min(math.asin(min(tau / x, 1.0)), math.pi / 2 - min(math.pi / 2, 2.0 / tau))
    else:
        a = 0.0
    ca, sa = math.cos(a), math.sin(a)
    scale = x * ca
    # beyond tstar the integrand modulus is below exp(-45)
    tstar = math.acosh(1.0 + 45.0 / scale)
    edges = _oracle_panels(tau, x, ca, sa, tstar)

    def f(t):
        return np.exp(-scale * (np.cosh(t) - 1.0) - 1j * x * sa * np.sinh(t) + 1j * tau * t).real

    # the tolerance is tied to int|f| so that values near a zero of K do
    # not demand accuracy beyond the rounding level of the integrand
    l1 = abs_integral(f, edges)
    val, err = integrate(f, edges, rtol=rtol, atol=rtol * l1)
    err += math.exp(-45.0) * 2.0 / math.sqrt(scale)
    if val == 0.0:
        return -math.inf, 0, 0.0
    logc = -tau * a - scale - log_abs_gamma_half(tau)
    return math.log(abs(val)) + logc, (1 if val > 0 else -1), err / abs(val)


def k_bessel_oracle(tau, x: float, config: Config | None = None) -> EvalReport:
    """``K~_{i tau}(x)`` by adaptive quadrature (regime ``ORACLE``)."""
    cfg = resolve(config)
    t = as_tau(tau)
    if t > cfg.oracle_tau_max:
        raise TauTooLarge(f"tau={t} exceeds oracle_tau_max={cfg.oracle_tau_max}")
    if not x > 0:
        raise NonPositiveArgument(f"x must be positive, got {x!r}")
    if t < 0:
        raise NonPositiveArgument("tau must be nonnegative")
    lg, sign, rel = _k_tilde_log(t, float(x), cfg.k_quad_rtol)
    return EvalReport.from_log(lg, sign, Regime.ORACLE, rel)


# -- asymptotics ------------------------------------------------------------

def bessel_regime(tau: float, x: float) -> Regime:
    """Pick the asymptotic regime containing ``x`` (Airy window is open)."""
    w = tau ** (1.0 / 3.0)
    if abs(tau - x) < w:
        return Regime.AIRY
    return Regime.MONOTONE_LARGE_X if x > tau else Regime.OSCILLATORY


def _airy_zeta(z: float) -> float:
    if abs(z - 1.0) < 1e-6:
        return 2.0 ** (1.0 / 3.0) * (z - 1.0)
    if z > 1.0:
        return (1.5 * (math.sqrt(z * z - 1.0) - math.acos(1.0 / z))) ** (2.0 / 3.0)
    return -((1.5 * (math.acosh(1.0 / z) - math.sqrt(1.0 - z * z))) ** (2.0 / 3.0))


def _airy_b0(z: float, zeta: float) -> float:
    # first correction coefficient of the uniform expansion; its limit at
    # the turning point is 2**(1/3)/70
    if abs(z - 1.0) < 1e-3:
        return 2.0 ** (1.0 / 3.0) / 70.0
    q = z * z - 1.0
    s = 1.0 if z > 1.0 else -1.0
    return s * (0.125 + 5.0 / (24.0 * q)) / math.sqrt(zeta * q) - 5.0 / (48.0 * zeta * zeta)


def _log_norm_factor(tau: float) -> float:
    # log sqrt(1 + exp(-2 pi tau)): what is left of sqrt(cosh(pi tau)) after
    # the exponential part cancels against the Debye/Airy exponent
    return 0.5 * math.log1p(math.exp(-2.0 * math.pi * tau))


def _monotone(tau: float, x: float) -> tuple[float, int, float]:
    w = math.sqrt((x - tau) * (x + tau))
    corr = (3.0 * w * w + 5.0 * tau * tau) / (24.0 * w ** 3)
    theta = math.acos(tau / x)
    lg = math.log(0.5) + _log_norm_factor(tau) - 0.5 * math.log(w) - (w - tau * theta)
    if corr < 1.0:
        lg += math.log1p(-corr)
    return lg, 1, _ERR_MONOTONE * corr * corr


def _oscillatory(tau: float, x: float) -> tuple[float, float, float]:
    """Return ``(value, envelope, abs error)``."""
    v = math.sqrt((tau - x) * (tau + x))
    phase = tau * math.acosh(tau / x) - v + math.pi / 4
    d = (5.0 * tau * tau - 3.0 * v * v) / (24.0 * v ** 3)
    env = math.exp(_log_norm_factor(tau)) / math.sqrt(v)
    return env * math.sin(phase - d), env, _ERR_OSC * env * d * d


def _airy(tau: float, x: float) -> tuple[float, float, float]:
    """Return ``(value, envelope, abs error)`` of the uniform Airy form."""
    z = x / tau
    zeta = _airy_zeta(z)
    if abs(z - 1.0) < 1e-6:
        pref = 2.0 ** (-1.0 / 6.0)
    else:
        pref = (zeta / (z * z - 1.0)) ** 0.25
    nu23 = tau ** (2.0 / 3.0)
    ai, aip, _, _ = airy(nu23 * zeta)
    scale = math.sqrt(math.pi) * math.exp(_log_norm_factor(tau)) * tau ** (-1.0 / 3.0) * pref
    val = scale * (ai + aip * _airy_b0(z, zeta) / tau ** (4.0 / 3.0))
    env = scale * 0.5357  # max of |Ai| on the real line
    return val, env, _ERR_AIRY * env / (tau * tau)


def k_tilde_asym(tau, x: float) -> EvalReport:
    """``K~_{i tau}(x)`` from the uniform asymptotic expansions.

    Regimes and ``est_error`` (absolute unless log-scaled):

    * ``MONOTONE_LARGE_X`` (``x >= tau + tau**(1/3)``): Debye form with
      its first correction; relative error ~ ``corr**2``.
    * ``OSCILLATORY`` (``x <= tau - tau**(1/3)``): Debye form, envelope
      ``(tau^2-x^2)^(-1/4)``; error ~ ``envelope * d**2``.
    * ``AIRY`` (``|tau - x| < tau**(1/3)``): uniform Airy expansion with
      one correction term; error ~ ``envelope / tau**2``.
    """
    t = as_tau(tau)
    if not x > 0:
        raise NonPositiveArgument(f"x must be positive, got {x!r}")
    if not t > 0:
        raise NonPositiveArgument("tau must be positive for the asymptotic forms")
    regime = bessel_regime(t, float(x))
    if regime is Regime.MONOTONE_LARGE_X:
        lg, sign, rel = _monotone(t, float(x))
        return EvalReport.from_log(lg, sign, regime, rel)
    fn = _airy if regime is Regime.AIRY else _oscillatory
    val, _, err = fn(t, float(x))
    return EvalReport(float(val), False, regime, float(err), 1 if val >= 0 else -1)


def k_tilde_envelope(tau: float, x: float) -> float:
    """Local amplitude scale of ``K~`` used to judge near-zero points."""
    regime = bessel_regime(tau, x)
    if regime is Regime.OSCILLATORY:
        return _oscillatory(tau, x)[1]
    if regime is Regime.AIRY:
        return _airy(tau, x)[1]
    return math.exp(_monotone(tau, x)[0])


def k_tilde(tau, x: float, config: Config | None = None) -> EvalReport:
    """Oracle when ``tau`` is in quadrature range, asymptotics beyond."""
    cfg = resolve(config)
    if as_tau(tau) <= cfg.oracle_tau_max:
        return k_bessel_oracle(tau, x, cfg)
    return k_tilde_asym(tau, x)


@functools.lru_cache(maxsize=65536)
def k_tilde_value(tau: float, x: float) -> float:
    """Plain float ``K~_{i tau}(x)`` (0.0 on underflow), memoized."""
    return k_tilde(tau, x).real


@functools.lru_cache(maxsize=65536)
def k_tilde_log(tau: float, x: float) -> tuple[float, int]:
    """Memoized ``(log|K~|, sign)``."""
    r = k_tilde(tau, x)
    return r.log_abs, r.sign


def j_bessel(m: int, y: float) -> float:
    """Bessel function of the first kind ``J_m(y)`` for integer ``m >= 0``."""
    if m < 0 or y < 0:
        raise ValueError("j_bessel needs m >= 0 and y >= 0")
    return float(jv(m, y))
