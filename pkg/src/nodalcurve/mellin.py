"""Gamma factor, Dirichlet sums and the smoothed test function ``psi``.

The test function is

    psi(X) = (1/2 pi i) int_{(sigma)} F(s, tau) s (1 + s^2/4 tau^2) e^{-s^{4m}} X^{-s} ds,

with ``F(s, tau) = pi^-s Gamma(s/2)^2 Gamma(s/2 - i tau) Gamma(s/2 + i tau) / Gamma(s)``.
Everything is scaled by ``cosh(pi tau)``, which removes the exponential
size of ``F`` on vertical lines.

Contour integrals use the trapezoid rule on ``[-T, T]``; the integrand is
analytic and decays like ``e^{-t^{4m}}``, so the rule converges
geometrically in the step.  Where ``e^{-s^{4m}}`` is large on the contour
(e.g. ``sigma = 2``, where it reaches ``e^{128}``) the integral cancels
heavily and is summed in extended precision.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Mapping, Sequence

import mpmath as mp
import numpy as np
from scipy.special import loggamma

from .errors import ArgumentOutOfRange, DivergentTail, PoleProximity, TruncationInsufficient
from .specfun import as_tau
from .specfun.gamma import log_cosh

__all__ = [
    "GammaFactorEval", "AfeConfig", "AfeReport", "gamma_factor", "log_gamma_factor",
    "l_series", "psi_test", "psi_test_complex", "afe_two_sided_check", "afe_split",
    "gamma_growth_scan", "contour_plan", "psi_decay_constant",
]

_LOG_PI = math.log(math.pi)
# above this peak (natural log) of the integrand the double sum loses too many digits
_DOUBLE_PEAK_LIMIT = 15.0
# beyond this the cancellation needs more than ~900 digits
_EXTENDED_PEAK_LIMIT = 2000.0


@dataclass(frozen=True)
class GammaFactorEval:
    s: complex
    tau: float
    log_value: complex  # log(cosh(pi tau) F(s, tau))

    @property
    def value(self) -> complex:
        return complex(np.exp(self.log_value))


def _singular_points(tau: float, s: complex):
    # poles at s = -2k and s = +-2 i tau - 2k; zeros at s = -(2k+1)
    kmax = max(0, int(math.ceil(-s.real / 2.0)) + 1)
    for k in range(kmax + 1):
        yield complex(-2 * k, 0.0)
        yield complex(-2 * k, 2 * tau)
        yield complex(-2 * k, -2 * tau)
        yield complex(-2 * k - 1, 0.0)


def log_gamma_factor(s, tau: float) -> np.ndarray:
    """Vectorized ``log(cosh(pi tau) F(s, tau))`` (no singularity check)."""
    s = np.asarray(s, dtype=complex)
    h = 0.5 * s
    return (log_cosh(math.pi * tau) - s * _LOG_PI + 2.0 * loggamma(h)
            + loggamma(h - 1j * tau) + loggamma(h + 1j * tau) - loggamma(s))


def gamma_factor(s: complex, tau) -> GammaFactorEval:
    """``log(cosh(pi tau) F(s, tau))`` from complex log-gamma."""
    t = as_tau(tau) if not (isinstance(tau, (int, float)) and tau == 0) else 0.0
    s = complex(s)
    for p in _singular_points(t, s):
        if abs(s - p) < 1e-8:
            raise PoleProximity(f"s={s} is within 1e-8 of the singular point {p}")
    return GammaFactorEval(s, t, complex(log_gamma_factor(s, t)))


def l_series(s, coeffs, cutoff: int | None = None):
    """``sum_{n >= 1} b(n) n^{-s}``.

    ``coeffs`` is a sequence (``coeffs[0]`` is ``b(1)``), a mapping
    ``n -> b(n)``, or a callable for an infinite profile, which is summed to
    ``cutoff`` and needs ``Re s > 1``.  ``s`` may be an array.
    """
    s_arr = np.asarray(s, dtype=complex)
    if callable(coeffs):
        if np.any(s_arr.real <= 1.0):
            raise DivergentTail("infinite profiles need Re(s) > 1")
        if cutoff is None:
            raise ArgumentOutOfRange("infinite profiles need a cutoff")
        ns = np.arange(1, int(cutoff) + 1)
        b = np.array([coeffs(int(n)) for n in ns], dtype=float)
    else:
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs, start=1)
        pairs = [(int(n), float(v)) for n, v in items if v != 0 and (cutoff is None or n <= cutoff)]
        if any(n < 1 for n, _ in pairs):
            raise ArgumentOutOfRange("Dirichlet coefficients are indexed from n = 1")
        if not pairs:
            return np.zeros(s_arr.shape, dtype=complex) if s_arr.ndim else 0j
        ns = np.array([n for n, _ in pairs])
        b = np.array([v for _, v in pairs])
    out = np.exp(-np.multiply.outer(s_arr, np.log(ns))) @ b
    return out if s_arr.ndim else complex(out)


@dataclass(frozen=True)
class AfeConfig:
    """Contour setup: ``e^{-s^{4 m_exp}}`` damping on ``Re s = sigma``.

    ``t_max``/``quad_step`` default to automatic choices (see
    :func:`contour_plan`).
    """

    m_exp: int = 1
    sigma: float = 1.0
    t_max: float | None = None
    quad_step: float | None = None

    def __post_init__(self):
        if int(self.m_exp) != self.m_exp or self.m_exp < 1:
            raise ArgumentOutOfRange("m_exp must be a positive integer")
        if not self.sigma > -2.0:
            raise ArgumentOutOfRange("sigma must exceed -2")
        if abs(self.sigma) < 1e-8:
            raise ArgumentOutOfRange("sigma = 0 runs through the cancelled poles; pick another line")
        if self.t_max is not None and not self.t_max > 0:
            raise ArgumentOutOfRange("t_max must be positive")
        if self.quad_step is not None and not self.quad_step > 0:
            raise ArgumentOutOfRange("quad_step must be positive")


def _log_kernel(s: np.ndarray, tau: float, m_exp: int) -> np.ndarray:
    """``log G(s)`` for ``G = cosh(pi tau) F(s) s (1 + s^2/4 tau^2) e^{-s^{4m}}``."""
    return (log_gamma_factor(s, tau) + np.log(s) + np.log1p(s * s / (4.0 * tau * tau))
            - s ** (4 * m_exp))


@dataclass(frozen=True)
class ContourPlan:
    t_max: float
    step: float
    peak: float  # max of Re log G on the line
    extended: bool


def contour_plan(tau, cfg: AfeConfig, log_x_max: float = 0.0) -> ContourPlan:
    """Choose truncation and step on ``Re s = sigma``.

    ``T`` is where ``Re log G`` stays below ``-45`` (the result is O(1)
    after scaling, whatever the peak); the step keeps the phase advance of
    ``G X^{-s}`` below ``pi/4``.
    """
    t = as_tau(tau)
    probe = np.linspace(0.0, 40.0, 40001)
    re = _log_kernel(cfg.sigma + 1j * probe, t, cfg.m_exp)
    peak = float(np.max(re.real))
    alive = np.nonzero(re.real > min(peak, 0.0) - 45.0)[0]
    t_auto = float(probe[alive[-1]]) + 0.05 if alive.size else 1.0
    t_max = cfg.t_max if cfg.t_max is not None else t_auto
    if cfg.quad_step is not None:
        step = cfg.quad_step
    else:
        mask = probe <= t_max
        phase = np.unwrap(re.imag[mask])
        rate = np.max(np.abs(np.diff(phase)) / np.diff(probe[mask])) + abs(log_x_max)
        step = min(0.05, (math.pi / 4) / max(rate, 1e-3))
    return ContourPlan(t_max, step, peak, peak > _DOUBLE_PEAK_LIMIT)


def _nodes(plan: ContourPlan, refine: int = 1) -> np.ndarray:
    h = plan.step / refine
    n = int(math.ceil(plan.t_max / h))
    return h * np.arange(-n, n + 1), h


def _check_tail(tau: float, cfg: AfeConfig, plan: ContourPlan, h: float, scale: float):
    """Estimate the integral beyond ``T`` and compare with the accumulated value."""
    tail_t = plan.t_max + h * np.arange(1, 400)
    tail = np.exp(_log_kernel(cfg.sigma + 1j * tail_t, tau, cfg.m_exp).real)
    est = float(np.sum(tail) * h / math.pi)
    if est > 1e-10 * max(scale, 1e-300):
        raise TruncationInsufficient(f"tail estimate {est:.3g} vs value scale {scale:.3g}")


def _check_peak(plan: ContourPlan, cfg: AfeConfig):
    if plan.peak > _EXTENDED_PEAK_LIMIT:
        raise ArgumentOutOfRange(
            f"e^(-s^{4 * cfg.m_exp}) reaches e^{plan.peak:.0f} on Re s = {cfg.sigma}; move the line left")


def _psi_double(xs: np.ndarray, tau: float, cfg: AfeConfig, plan: ContourPlan) -> np.ndarray:
    t, h = _nodes(plan)
    s = cfg.sigma + 1j * t
    lg = _log_kernel(s, tau, cfg.m_exp)
    out = np.empty(xs.size, dtype=complex)
    for i, x in enumerate(xs):
        out[i] = np.sum(np.exp(lg - s * math.log(x))) * h / (2.0 * math.pi)
    _check_tail(tau, cfg, plan, h, float(np.max(np.abs(out))) * float(np.min(xs ** cfg.sigma)))
    return out


def _mp_kernel(s, tau, m_exp):
    h = s / 2
    return (mp.log(mp.cosh(mp.pi * tau)) - s * mp.log(mp.pi) + 2 * mp.loggamma(h)
            + mp.loggamma(h - 1j * tau) + mp.loggamma(h + 1j * tau) - mp.loggamma(s)
            + mp.log(s) + mp.log(1 + s * s / (4 * tau * tau)) - s ** (4 * m_exp))


def _psi_extended(xs: np.ndarray, tau: float, cfg: AfeConfig, plan: ContourPlan,
                  weights_fn: Callable | None = None) -> np.ndarray:
    """Nested dyadic trapezoid sums in extended precision.

    ``weights_fn(s)`` multiplies the kernel.  Nodes are exact in the working
    precision: with terms of size ``e^peak`` a node misplaced by a double
    rounding error already spoils the cancellation.
    """
    dps = int(25 + plan.peak / math.log(10.0))
    out = np.empty(xs.size, dtype=complex)
    with mp.workdps(dps):
        tau_mp = mp.mpf(tau)
        lxs = [mp.log(mp.mpf(float(x))) for x in xs]
        t_max = mp.mpf(plan.t_max)

        def terms(u):
            sv = mp.mpc(cfg.sigma, u)
            base = _mp_kernel(sv, tau_mp, cfg.m_exp)
            w = weights_fn(sv) if weights_fn is not None else 1
            return [mp.exp(base - sv * lx) * w for lx in lxs]

        h = mp.mpf(1) / 32
        n = int(mp.ceil(t_max / h))
        sums = [mp.fsum(col) for col in zip(*(terms(j * h) for j in range(-n, n + 1)))]
        prev = [v * h for v in sums]
        for _ in range(8):
            h /= 2
            n = int(mp.ceil(t_max / h))
            new = [mp.fsum(col) for col in zip(*(terms(j * h) for j in range(-n, n + 1) if j % 2))]
            sums = [a + b for a, b in zip(sums, new)]
            cur = [v * h for v in sums]
            if all(abs(mp.re(c - q)) <= 1e-13 * max(abs(mp.re(c)), mp.mpf(1e-300)) for c, q in zip(cur, prev)):
                break
            prev = cur
        else:
            raise TruncationInsufficient("extended-precision trapezoid sums did not settle")
        for i, v in enumerate(cur):
            out[i] = complex(v / (2 * mp.pi))
    _check_tail(tau, cfg, plan, plan.step, float(np.max(np.abs(out))) * float(np.min(xs ** cfg.sigma)))
    return out


def psi_test_complex(X, tau, cfg: AfeConfig | None = None) -> np.ndarray:
    """``cosh(pi tau) psi(X)`` with its (rounding-level) imaginary part kept."""
    cfg = cfg or AfeConfig()
    t = as_tau(tau)
    xs = np.atleast_1d(np.asarray(X, dtype=float))
    if np.any(xs <= 0):
        raise ArgumentOutOfRange("X must be positive")
    plan = contour_plan(t, cfg, float(np.max(np.abs(np.log(xs)))))
    _check_peak(plan, cfg)
    return (_psi_extended if plan.extended else _psi_double)(xs, t, cfg, plan)


def psi_test(X, tau, cfg: AfeConfig | None = None):
    """``cosh(pi tau) psi(X)`` (real for real ``X``)."""
    vals = psi_test_complex(X, tau, cfg).real
    return float(vals[0]) if np.ndim(X) == 0 else vals


@dataclass(frozen=True)
class AfeReport:
    X: float
    tau: float
    sigma: float
    m_exp: int
    lhs: float
    rhs: float
    rel_diff: float

    def as_dict(self) -> dict:
        return asdict(self)


def _profile_pairs(coeffs) -> list[tuple[int, float]]:
    items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs, start=1)
    pairs = [(int(n), float(v)) for n, v in items if v != 0]
    if any(n < 1 for n, _ in pairs):
        raise ArgumentOutOfRange("profile is indexed from n = 1")
    return pairs


def afe_two_sided_check(coeffs: Sequence[float] | Mapping[int, float], X: float, tau,
                        cfg: AfeConfig | None = None) -> AfeReport:
    """Compare ``sum |a(n)|^2 psi(n/X)`` with the contour integral of the Dirichlet sum.

    The right side sums the Dirichlet series inside the integral (on a step
    half as large in double precision), so the two sides are computed
    independently.
    """
    cfg = cfg or AfeConfig()
    t = as_tau(tau)
    if not X > 0:
        raise ArgumentOutOfRange("X must be positive")
    pairs = _profile_pairs(coeffs)
    if not pairs:
        return AfeReport(float(X), t, cfg.sigma, cfg.m_exp, 0.0, 0.0, 0.0)
    ns = np.array([n for n, _ in pairs], dtype=float)
    ws = np.array([v for _, v in pairs])
    lhs = float(np.dot(ws, np.atleast_1d(psi_test(ns / X, t, cfg))))
    plan = contour_plan(t, cfg, max(abs(math.log(X)), float(np.max(np.abs(np.log(ns / X))))))
    _check_peak(plan, cfg)
    tt, h = _nodes(plan, refine=2)
    s = cfg.sigma + 1j * tt
    if not plan.extended:
        g = np.exp(_log_kernel(s, t, cfg.m_exp) + s * math.log(X))
        rhs = float((np.sum(g * l_series(s, dict(pairs))) * h / (2.0 * math.pi)).real)
    else:
        def dirichlet(sv):
            return mp.fsum(w * mp.exp(-sv * mp.log(int(n))) for n, w in pairs)

        rhs = float(_psi_extended(np.array([1.0 / X]), t, cfg, plan, dirichlet)[0].real)
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    return AfeReport(float(X), t, cfg.sigma, cfg.m_exp, lhs, rhs, rel)


def afe_split(coeffs, X: float, tau, c: float, cfg: AfeConfig | None = None) -> tuple[float, float, float]:
    """Split ``sum |a(n)|^2 psi(n/X)`` into ``n < X/c``, ``X/c <= n <= c X`` and ``n > c X``."""
    if not c > 1:
        raise ArgumentOutOfRange("c must exceed 1")
    pairs = _profile_pairs(coeffs)
    parts = [0.0, 0.0, 0.0]
    if not pairs:
        return tuple(parts)
    ns = np.array([n for n, _ in pairs], dtype=float)
    vals = np.atleast_1d(psi_test(ns / X, tau, cfg)) * np.array([v for _, v in pairs])
    for n, v in zip(ns, vals):
        parts[0 if n < X / c else (2 if n > c * X else 1)] += float(v)
    return tuple(parts)


def gamma_growth_scan(sigma: float, tau, t_list) -> list[tuple[float, float]]:
    """Rows ``(t, |cosh(pi tau) F(sigma + i t, tau)| e^{-t})``."""
    if not sigma > -2:
        raise ArgumentOutOfRange("sigma must exceed -2")
    t = as_tau(tau)
    rows = []
    for tt in t_list:
        g = gamma_factor(complex(sigma, tt), t)
        rows.append((float(tt), float(math.exp(g.log_value.real - tt))))
    return rows


def psi_decay_constant(tau, cfg: AfeConfig | None = None) -> float:
    """Constant ``C`` with ``|cosh(pi tau) psi(X)| <= C X^{-sigma} / log^2 X`` for ``X > 1``.

    Integrating by parts twice in ``t`` gives
    ``C = (1/2 pi) int |d^2/dt^2 G(sigma + i t)| dt``; the second derivative
    is taken by fourth-order differences on a fine grid.
    """
    cfg = cfg or AfeConfig()
    t = as_tau(tau)
    plan = contour_plan(t, cfg)
    _check_peak(plan, cfg)
    if plan.extended:
        raise ArgumentOutOfRange("decay constant is computed in double precision; use a line with sigma <= 1")
    h = min(plan.step, 1e-3)
    tt = np.arange(-plan.t_max - 2 * h, plan.t_max + 2.5 * h, h)
    g = np.exp(_log_kernel(cfg.sigma + 1j * tt, t, cfg.m_exp))
    d2 = (-g[:-4] + 16 * g[1:-3] - 30 * g[2:-2] + 16 * g[3:-1] - g[4:]) / (12 * h * h)
    return float(np.sum(np.abs(d2)) * h / (2.0 * math.pi))
