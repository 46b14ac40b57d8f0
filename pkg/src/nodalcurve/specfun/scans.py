"""Parameter scans built on the Legendre evaluators."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import Config, resolve
from ..errors import ArgumentOutOfRange, NodalCurveError
from ..quadrature import integrate
from .bessel import k_bessel_oracle, k_tilde_asym, k_tilde_envelope
from .core import Regime, as_tau
from .legendre import c_tau_asym, c_tau_path


@dataclass(frozen=True)
class ColaRow:
    tau: float
    m: int
    log_c: float  # log C_tau(m, cosh x0)
    ratio: float  # log_c / m
    positive: bool
    spot_rel_err: float = math.nan  # |asym/oracle - 1| where a spot check ran


@dataclass
class ColaScan:
    rows: list[ColaRow] = field(default_factory=list)
    exponent: dict[float, float] = field(default_factory=dict)  # A(tau)

    @property
    def nan_fraction(self) -> float:
        if not self.rows:
            return 0.0
        return sum(math.isnan(r.ratio) for r in self.rows) / len(self.rows)


def cola_scan(x0: float, c1: float, c2: float, tau_list, spot_checks: int = 3,
              config: Config | None = None) -> ColaScan:
    """Tabulate ``log C_tau(m, cosh x0) / m`` for integers ``c1 tau < m < c2 tau``.

    Values come from the K-Bessel uniform expansion; ``spot_checks`` evenly
    spaced rows per tau are also run through the ODE oracle and the
    relative discrepancy is recorded.  ``A(tau)`` is the largest
    ``-log C / m`` over the band.
    """
    cfg = resolve(config)
    if not (c2 > c1 > 0):
        raise ArgumentOutOfRange("need c2 > c1 > 0")
    x = math.cosh(x0)
    scan = ColaScan()
    for tau in tau_list:
        t = as_tau(tau)
        ms = [m for m in range(int(math.floor(c1 * t)) + 1, int(math.ceil(c2 * t))) if c1 * t < m < c2 * t]
        spot = set(ms[i] for i in np.linspace(0, len(ms) - 1, min(spot_checks, len(ms))).astype(int)) if ms else set()
        worst = -math.inf
        for m in ms:
            try:
                rep = c_tau_asym(t, m, x, cfg)
                log_c, positive = rep.log_abs, rep.sign > 0
            except NodalCurveError:
                scan.rows.append(ColaRow(t, m, math.nan, math.nan, False))
                continue
            spot_err = math.nan
            if m in spot and t <= cfg.oracle_tau_max and x <= 50:
                lo, so, _ = c_tau_path(t, m, [x], cfg.ode_rtol, cfg)
                spot_err = abs(math.expm1(log_c - lo[0])) if so[0] == rep.sign else math.inf
            scan.rows.append(ColaRow(t, m, log_c, log_c / m, positive, spot_err))
            worst = max(worst, -log_c / m)
        if ms:
            scan.exponent[t] = worst
    return scan


def c_moment(tau, m: int, R: float, config: Config | None = None) -> float:
    """``int_1^R C_tau(m, x)^2 dx``.

    Inside the oracle range the square is integrated alongside the ODE
    (as an extra state), which is exact to the ODE tolerance; beyond it
    the asymptotic values are integrated by adaptive quadrature.
    """
    cfg = resolve(config)
    t = as_tau(tau)
    if R < 2:
        raise ArgumentOutOfRange("R must be at least 2")
    if not abs(m) < t * math.sqrt(R * R - 1.0):
        raise ArgumentOutOfRange("need |m| < tau sqrt(R^2 - 1)")
    m = abs(int(m))
    if t <= cfg.oracle_tau_max and R <= 50 and m <= 10 * t + 50:
        _, _, lm = c_tau_path(t, m, [R], cfg.ode_rtol, cfg)
        return math.exp(lm)

    def f(xs):
        return np.array([c_tau_asym(t, m, float(x), cfg).real ** 2 for x in xs])

    # start just off the endpoint, where the expansions are singular
    edges = 1.0 + (R - 1.0) * np.linspace(0.0, 1.0, 33) ** 2
    edges[0] = 1.0 + 1e-9
    val, _ = integrate(f, edges, rtol=1e-5)
    return float(val)


# -- Bessel comparison grids ------------------------------------------------------

_BESSEL_REGIMES = (Regime.MONOTONE_LARGE_X, Regime.OSCILLATORY, Regime.AIRY)


def regime_grid(tau, regime: Regime | str, n_points: int = 20) -> np.ndarray:
    """``n_points`` evenly spaced ``x`` inside one regime of ``K~_{i tau}(x)``.

    Monotone: ``[tau + w, tau + w + 10 max(tau, 1)]``; oscillatory:
    ``[0.05, tau - w]`` (empty when that is void); Airy: the open window
    ``|x - tau| < w``, with ``w = tau^(1/3)``.
    """
    t = as_tau(tau)
    regime = Regime(regime)
    w = t ** (1.0 / 3.0)
    if regime is Regime.MONOTONE_LARGE_X:
        return np.linspace(t + w, t + w + 10.0 * max(t, 1.0), n_points)
    if regime is Regime.OSCILLATORY:
        return np.linspace(0.05, t - w, n_points) if t - w > 0.05 else np.empty(0)
    if regime is Regime.AIRY:
        return np.linspace(max(0.02, t - w + 1e-9), t + w - 1e-9, n_points)
    raise ArgumentOutOfRange(f"{regime.value} is not a Bessel regime")


@dataclass(frozen=True)
class CompareRow:
    tau: float
    x: float
    oracle: float
    asym: float
    regime: str
    rel_err: float


def bessel_compare(tau, regime: Regime | str, n_points: int = 20,
                   config: Config | None = None) -> list[CompareRow]:
    """Oracle vs asymptotic ``K~`` on :func:`regime_grid`.

    Points where the oracle is below a tenth of the local envelope (next to
    an oscillation zero, where relative error is meaningless) are dropped.
    """
    t = as_tau(tau)
    rows = []
    for x in regime_grid(t, regime, n_points):
        o = k_bessel_oracle(t, float(x), config).real
        if abs(o) < 0.1 * k_tilde_envelope(t, float(x)):
            continue
        a = k_tilde_asym(t, float(x))
        rows.append(CompareRow(t, float(x), o, a.real, a.regime.value, abs(a.real / o - 1.0)))
    return rows
