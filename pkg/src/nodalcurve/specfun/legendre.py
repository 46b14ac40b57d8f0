"""Normalized conical Legendre functions ``C_tau(m, x)`` and ``P_s(cosh r)``.

``C_tau(m, x) = |Gamma(1/2+m+i tau)| / |Gamma(1/2+i tau)| * P^{-m}_{-1/2+i tau}(x)``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from math import lgamma

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from ..config import Config, resolve
from ..errors import ArgumentOutOfRange, NoBracket, RegimeUnavailable, TauTooLarge
from ..quadrature import abs_integral, integrate
from .bessel import AIRY_C0, bessel_regime, j_bessel, k_tilde
from .core import EvalReport, Regime, as_tau
from .gamma import log_gamma_ratio

_QUAD = dict(epsabs=0.0, epsrel=1e-13, limit=200)


# -- implicit variables of the uniform expansions ----------------------------

def _solve_monotone(lhs, rhs: float, hi: float) -> float:
    """Root of the increasing function ``lhs(w) = rhs`` on ``[0, hi]``."""
    if rhs <= 0.0:
        return 0.0
    if lhs(hi) < rhs:
        raise NoBracket(f"right side {rhs!r} exceeds the search range")
    return brentq(lambda w: lhs(w) - rhs, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def solve_eta(beta: float, x: float) -> float:
    """Solve the defining integral equation for ``eta(beta, x)``.

    With ``xi = 1/(x^2-1)``: ``eta > beta^2`` exactly when ``xi > beta^2``.
    In the second case both integrals are taken with limits swapped so
    the integrands stay nonnegative.
    """
    if not beta > 0:
        raise ArgumentOutOfRange("beta must be positive")
    if not x > 1:
        raise ArgumentOutOfRange("x must exceed 1")
    b2 = beta * beta
    xi = 1.0 / ((x - 1.0) * (x + 1.0))
    if xi == b2:
        return b2
    if xi > b2:
        # s = beta^2 + w^2
        rhs = quad(lambda w: w * w / ((b2 + w * w) * math.sqrt(1.0 + b2 + w * w)),
                   0.0, math.sqrt(xi - b2), **_QUAD)[0]
        w = _solve_monotone(lambda w: w - beta * math.atan(w / beta), rhs, rhs + beta * math.pi / 2 + 1.0)
        return b2 + w * w
    # s = beta^2 - W^2 with W = beta tanh(u)
    rhs = quad(lambda w: w * w / ((b2 - w * w) * math.sqrt(1.0 + b2 - w * w)),
               0.0, math.sqrt(b2 - xi), **_QUAD)[0]
    u = _solve_monotone(lambda u: beta * (u - math.tanh(u)), rhs, rhs / beta + 2.0)
    return b2 / math.cosh(u) ** 2


def solve_zeta(alpha: float, x: float) -> float:
    """Solve the defining integral equation for ``zeta(alpha, x)``.

    ``zeta > alpha^2`` exactly when ``x > x_alpha = sqrt(1 + alpha^2)``.
    """
    if not alpha >= 0:
        raise ArgumentOutOfRange("alpha must be nonnegative")
    if not x > 1:
        raise ArgumentOutOfRange("x must exceed 1")
    if alpha == 0.0:
        return math.acosh(x) ** 2
    a2 = alpha * alpha
    xa2 = 1.0 + a2
    if x * x == xa2:
        return a2
    if x * x > xa2:
        rhs = quad(lambda w: w * w / (math.sqrt(xa2 + w * w) * (a2 + w * w)),
                   0.0, math.sqrt(x * x - xa2), **_QUAD)[0]
        w = _solve_monotone(lambda w: w - alpha * math.atan(w / alpha), rhs, rhs + alpha * math.pi / 2 + 1.0)
        return a2 + w * w
    rhs = quad(lambda w: w * w / (math.sqrt(xa2 - w * w) * (a2 - w * w)),
               0.0, math.sqrt(xa2 - x * x), **_QUAD)[0]
    u = _solve_monotone(lambda u: alpha * (u - math.tanh(u)), rhs, rhs / alpha + 2.0)
    return a2 / math.cosh(u) ** 2


@dataclass(frozen=True)
class AsymVariables:
    """Auxiliary quantities of the uniform expansions at one point.

    ``theta`` and ``phase`` refer to the Bessel point ``(tau, x)``; the
    remaining fields to the Legendre point ``(tau, m, x)``.
    """

    beta: float
    alpha: float
    xi: float
    eta: float
    zeta: float
    x_alpha: float
    theta: float
    phase: float
    c0: float


def asym_variables(tau, m: int, x: float) -> AsymVariables:
    t = as_tau(tau)
    if not x > 1:
        raise ArgumentOutOfRange("x must exceed 1")
    beta = t / m if m > 0 else math.inf
    alpha = m / t
    theta = math.acos(t / x) if x >= t else math.nan
    phase = t * math.acosh(t / x) - math.sqrt(t * t - x * x) + math.pi / 4 if x < t else math.nan
    return AsymVariables(
        beta=beta,
        alpha=alpha,
        xi=1.0 / ((x - 1.0) * (x + 1.0)),
        eta=solve_eta(beta, x) if m > 0 else math.nan,
        zeta=solve_zeta(alpha, x),
        x_alpha=math.sqrt(1.0 + alpha * alpha),
        theta=theta,
        phase=phase,
        c0=AIRY_C0,
    )


# -- ODE oracle ----------------------------------------------------------------

def _series_start(tau: float, m: int, u: float) -> tuple[float, float, float]:
    """Hypergeometric series for ``P^{-m}`` near ``u = 0`` (``x = cosh u``).

    Returns ``(log prefactor, w, dw/du)`` with the normalized value equal to
    ``exp(log prefactor) * w``.
    """
    z = -math.sinh(0.5 * u) ** 2
    dz = -math.sinh(0.5 * u) * math.cosh(0.5 * u)
    big_f, d_f, term, k = 1.0, 0.0, 1.0, 0
    while True:
        term *= ((k + 0.5) ** 2 + tau * tau) / ((m + k + 1) * (k + 1)) * z
        big_f += term
        d_f += term * (k + 1) / z
        k += 1
        if abs(term) < 1e-18 * abs(big_f) and k > 3:
            break
        if k > 10_000:
            raise ArgumentOutOfRange("series start did not converge")
    logpre = m * math.log(math.tanh(0.5 * u)) - lgamma(m + 1) + log_gamma_ratio(m, tau)
    return logpre, big_f, big_f * m / math.sinh(u) + d_f * dz


def _series_reach(tau: float, m: int) -> float:
    """Largest start point where the series terms shrink from the first one on.

    The leading term ratio is ``(1/4 + tau^2) sinh^2(u/2) / (m + 1)``; keeping
    it below 1/2 avoids cancellation in the alternating sum.
    """
    return min(1.0, 2.0 * math.asinh(math.sqrt(0.5 * (m + 1) / (tau * tau + 0.25))), 0.05 + 0.02 * m)


def _series_log_moment(tau: float, m: int, u1: float) -> float:
    """``log int_0^u1 C(cosh u)^2 sinh u du`` from the series (small ``u1``).

    Integrated in ``p = (u/u1)^(2m+2)``, in which the integrand, close to
    a power ``u^(2m+1)``, becomes nearly constant.
    """
    k = 2.0 * m + 2.0
    lp, w, _ = _series_start(tau, m, u1)
    ref = 2.0 * (lp + math.log(abs(w)))

    def f(ps):
        out = np.empty(ps.size)
        for j, p in enumerate(ps):
            u = u1 * p ** (1.0 / k)
            if u <= 0.0:
                out[j] = 0.0
                continue
            lpu, wu, _ = _series_start(tau, m, u)
            out[j] = math.exp(2.0 * (lpu + math.log(abs(wu))) - ref) * math.sinh(u) * u / (k * p)
        return out

    val, _ = integrate(f, [0.0, 0.5, 1.0], rtol=1e-12)
    return math.log(val) + ref if val > 0 else -math.inf


def _check_c_args(t: float, m: int, cfg: Config):
    if t > cfg.oracle_tau_max:
        raise TauTooLarge(f"tau={t} exceeds oracle_tau_max={cfg.oracle_tau_max}")
    if m < 0 or m > 10 * t + 50:
        raise ArgumentOutOfRange(f"m={m} outside [0, 10 tau + 50]")


def c_tau_path(tau, m: int, xs, rtol: float = 1e-12, config: Config | None = None):
    """Integrate the Legendre equation along ``x = cosh u`` through all ``xs``.

    Returns ``(log|C|, sign, log moment)`` where the arrays follow ``xs``
    and ``log moment`` is ``log int_1^{max xs} C^2 dx``.  The state is
    renormalized after every segment, so growth never overflows.
    """
    cfg = resolve(config)
    t = as_tau(tau)
    _check_c_args(t, m, cfg)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 1.0) or np.any(xs > 50.0):
        raise ArgumentOutOfRange("x must lie in (1, 50]")
    order = np.argsort(xs, kind="stable")
    targets = np.arccosh(xs[order])
    lam = 0.25 + t * t
    m2 = float(m * m)

    def rhs(u, y):
        sh = math.sinh(u)
        return [y[1], -y[1] * math.cosh(u) / sh - (lam - m2 / (sh * sh)) * y[0], y[0] * y[0] * sh]

    u0 = _series_reach(t, m)
    log_out = np.empty(xs.size)
    sign_out = np.empty(xs.size, dtype=int)
    i = 0
    # targets below the start point come straight from the series
    while i < targets.size and targets[i] <= u0:
        lp, w, _ = _series_start(t, m, targets[i])
        log_out[order[i]] = lp + math.log(abs(w))
        sign_out[order[i]] = 1 if w > 0 else -1
        i += 1
    logs, w, wp = _series_start(t, m, u0)
    y = np.array([w, wp, 0.0])
    u = u0
    log_moment = _series_log_moment(t, m, min(u0, float(targets[-1])))
    step_cap = min(1.0, 150.0 / (m + 1))
    while i < targets.size:
        end = min(targets[i], 2.0 * u if u < 1.0 else u + step_cap)
        sol = solve_ivp(rhs, (u, end), y, method="DOP853", rtol=max(rtol, 2.5e-14), atol=1e-300,
                        first_step=min(0.125 * (end - u), 0.1 / (t + m + 1.0)))
        if not sol.success:
            raise ArgumentOutOfRange(f"ODE integration failed: {sol.message}")
        y = sol.y[:, -1].copy()
        u = end
        if y[2] > 0:
            log_moment = np.logaddexp(log_moment, math.log(y[2]) + 2.0 * logs)
        y[2] = 0.0
        norm = math.hypot(y[0], y[1])
        y[:2] /= norm
        logs += math.log(norm)
        while i < targets.size and targets[i] <= u:
            log_out[order[i]] = logs + math.log(abs(y[0])) if y[0] != 0 else -math.inf
            sign_out[order[i]] = 1 if y[0] > 0 else (-1 if y[0] < 0 else 0)
            i += 1
    return log_out, sign_out, float(log_moment)


class ConicalProfile:
    """Dense ``u -> C_tau(m, cosh u)`` on ``[0, u_max]`` from one ODE run.

    Used where many radii are needed for the same ``(tau, m)``, e.g.
    when evaluating polar waves on grids.
    """

    def __init__(self, tau: float, m: int, u_max: float, rtol: float = 1e-12):
        self.tau, self.m, self.u_max = float(tau), int(m), float(u_max)
        t, lam, m2 = self.tau, 0.25 + self.tau ** 2, float(m * m)

        def rhs(u, y):
            sh = math.sinh(u)
            return [y[1], -y[1] * math.cosh(u) / sh - (lam - m2 / (sh * sh)) * y[0]]

        self.u0 = min(_series_reach(t, m), u_max)
        logs, w, wp = _series_start(t, m, self.u0)
        y = np.array([w, wp])
        u = self.u0
        self._segments = []  # (start, end, dense solution, log scale)
        step_cap = min(1.0, 150.0 / (m + 1))
        while u < u_max:
            end = min(u_max, 2.0 * u if u < 1.0 else u + step_cap)
            sol = solve_ivp(rhs, (u, end), y, method="DOP853", rtol=max(rtol, 2.5e-14), atol=1e-300,
                            dense_output=True, first_step=min(0.125 * (end - u), 0.1 / (t + m + 1.0)))
            if not sol.success:
                raise ArgumentOutOfRange(f"ODE integration failed: {sol.message}")
            self._segments.append((u, end, sol.sol, logs))
            y = sol.y[:, -1].copy()
            norm = math.hypot(y[0], y[1])
            y /= norm
            logs += math.log(norm)
            u = end
        self._starts = np.array([seg[0] for seg in self._segments])

    def values(self, us) -> np.ndarray:
        """``C_tau(m, cosh u)`` for an array of ``u`` (0 allowed)."""
        us = np.abs(np.atleast_1d(np.asarray(us, dtype=float)))
        if np.any(us > self.u_max * (1 + 1e-12)):
            raise ArgumentOutOfRange(f"u beyond profile range {self.u_max}")
        out = np.empty(us.size)
        for j, u in enumerate(us):
            if u == 0.0:
                out[j] = 1.0 if self.m == 0 else 0.0
            elif u <= self.u0:
                lp, w, _ = _series_start(self.tau, self.m, float(u))
                out[j] = math.exp(lp) * w
            else:
                k = max(0, int(np.searchsorted(self._starts, u, side="right")) - 1)
                _, _, dense, logs = self._segments[k]
                out[j] = dense(u)[0] * math.exp(logs)
        return out


@functools.lru_cache(maxsize=4096)
def conical_profile(tau: float, m: int, u_max: float = 6.0, rtol: float = 1e-12) -> ConicalProfile:
    return ConicalProfile(tau, m, u_max, rtol)


def c_tau_oracle(tau, m: int, x: float, config: Config | None = None) -> EvalReport:
    """``C_tau(m, x)`` by ODE integration (regime ``ORACLE``).

    The error estimate is the change when the integration tolerance is
    tightened by ``config.ode_refine``.
    """
    cfg = resolve(config)
    lg, sg, _ = c_tau_path(tau, m, [x], cfg.ode_rtol, cfg)
    lg2, _, _ = c_tau_path(tau, m, [x], cfg.ode_rtol / cfg.ode_refine, cfg)
    return EvalReport.from_log(float(lg2[0]), int(sg[0]), Regime.ORACLE, abs(math.expm1(lg[0] - lg2[0])))


# -- uniform asymptotics -------------------------------------------------------

def _quartic_ratio(num: float, den: float) -> float:
    return abs(num / den) ** 0.25


def _part_k(t: float, m: int, x: float, cfg: Config) -> tuple[float, int, float]:
    beta = t / m
    eta = solve_eta(beta, x)
    den = x * x * beta * beta - 1.0 - beta * beta
    if abs(den) < 1e-12 * (1.0 + beta * beta):
        # both sides of the ratio vanish at the turning point; step off it
        return _part_k(t, m, x * (1.0 + 1e-7), cfg)
    pref = math.sqrt(2.0 / math.pi) * _quartic_ratio(beta * beta - eta, den)
    k = k_tilde(t, m * math.sqrt(eta), cfg)
    return math.log(pref) + k.log_abs, k.sign, math.sqrt(eta) / m


def _part_j(t: float, m: int, x: float) -> tuple[float, float, float]:
    alpha = m / t
    zeta = solve_zeta(alpha, x)
    den = x * x - alpha * alpha - 1.0
    if abs(den) < 1e-12 * (1.0 + alpha * alpha):
        return _part_j(t, m, x * (1.0 + 1e-7))
    pref = _quartic_ratio(zeta - alpha * alpha, den)
    y = t * math.sqrt(zeta)
    val = pref * j_bessel(m, y)
    env = pref * min(1.0, math.sqrt(2.0 / (math.pi * max(y, 1e-300))))
    return val, env, 1.0 / t


def c_tau_asym(tau, m: int, x: float, config: Config | None = None) -> EvalReport:
    """``C_tau(m, x)`` from the uniform Legendre expansions.

    The K-Bessel form applies for ``tau/m <= beta_max`` (relative error
    ~ ``sqrt(eta)/m``), the J-Bessel form for ``m/tau <= alpha_max``
    (relative error ~ ``1/tau``).  Where both apply the smaller error
    estimate wins.  Fourth roots are taken of ``|ratio|``: numerator and
    denominator change sign together at the turning point.
    """
    cfg = resolve(config)
    t = as_tau(tau)
    if not x > 1:
        raise ArgumentOutOfRange("x must exceed 1")
    if m < 0:
        raise ArgumentOutOfRange("m must be nonnegative")
    k_ok = m > 0 and t / m <= cfg.beta_max
    j_ok = m / t <= cfg.alpha_max
    if not (k_ok or j_ok):
        raise RegimeUnavailable(f"no expansion covers tau={t}, m={m} with the configured thresholds")
    k_err = math.sqrt(solve_eta(t / m, x)) / m if k_ok else math.inf
    if k_ok and k_err <= 1.0 / t or not j_ok:
        lg, sign, rel = _part_k(t, m, x, cfg)
        return EvalReport.from_log(lg, sign, Regime.LEGENDRE_BESSEL_K, rel)
    val, env, rel = _part_j(t, m, x)
    return EvalReport(float(val), False, Regime.LEGENDRE_BESSEL_J, float(rel * max(abs(val), env)),
                      1 if val >= 0 else -1)


def c_tau(tau, m: int, x: float, config: Config | None = None) -> EvalReport:
    """Oracle inside its range, asymptotics outside."""
    cfg = resolve(config)
    t = as_tau(tau)
    if t <= cfg.oracle_tau_max and 1 < x <= 50 and m <= 10 * t + 50:
        lg, sg, _ = c_tau_path(t, m, [x], cfg.ode_rtol, cfg)
        return EvalReport.from_log(float(lg[0]), int(sg[0]), Regime.ORACLE, cfg.ode_rtol * 100)
    return c_tau_asym(t, m, x, cfg)


# -- circle averages -----------------------------------------------------------

def p_s_circle_avg(s: complex, r: float, config: Config | None = None) -> complex:
    """``P_s(cosh r) = (1/pi) int_0^pi (cosh r + sinh r cos t)^s dt``.

    With ``t = pi - phi`` the base is ``e^r sin^2(phi/2) + e^-r cos^2(phi/2)``,
    which is computed without cancellation.  Near ``phi = 0`` the integrand
    varies on the scale ``e^-r``; the rest of the range is integrated in
    ``log phi``.
    """
    cfg = resolve(config)
    s = complex(s)
    if not -1.0 < s.real < 0.0:
        raise ArgumentOutOfRange("Re(s) must lie in (-1, 0)")
    if r < 0:
        raise ArgumentOutOfRange("r must be nonnegative")
    if r == 0:
        return 1.0 + 0.0j
    ep, em = math.exp(r), math.exp(-r)

    def base(phi):
        return ep * np.sin(0.5 * phi) ** 2 + em * np.cos(0.5 * phi) ** 2

    def f_lin(phi):
        return np.exp(s * np.log(base(phi)))

    def f_log(v):
        phi = np.exp(v)
        return np.exp(s * np.log(base(phi))) * phi

    phi1 = min(math.pi, 2.0 * em)
    edges_lin = np.linspace(0.0, phi1, 9)
    step = 0.25 / (1.0 + abs(s))
    n_log = max(1, int(math.ceil((math.log(math.pi) - math.log(phi1)) / step)))
    edges_log = np.linspace(math.log(phi1), math.log(math.pi), n_log + 1)
    scale = abs_integral(f_lin, edges_lin) + abs_integral(f_log, edges_log)
    atol = cfg.quad_rtol * scale
    a, _ = integrate(f_lin, edges_lin, rtol=cfg.quad_rtol, atol=atol)
    b, _ = integrate(f_log, edges_log, rtol=cfg.quad_rtol, atol=atol) if phi1 < math.pi else (0.0, 0.0)
    return complex((a + b) / math.pi)
