"""Laplace eigenfunctions on the hyperbolic plane built from separated solutions.

Three coordinate systems are supported:

* horocyclic ``(x, y)`` on the upper half-plane, with Fourier modes
  ``sqrt(y) K~_{i tau}(2 pi |n| y / a) e^{2 pi i n x / a}``;
* geodesic polar ``(r, theta)`` around ``z = i``, with modes
  ``C_tau(|m|, cosh r) e^{i m theta}``;
* the band around the geodesic ``x = 0``, ``(r, theta)`` with
  ``x + iy = e^theta (tanh r + i / cosh r)``, with modes ``D_tau(m, sinh r)
  e^{2 pi i m theta / a}``.

All eigenvalues are ``-(1/4 + tau^2)``.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .config import Config, resolve
from .errors import ArgumentOutOfRange, IntegrationRange, KindMismatch
from .specfun import abs_gamma_half, as_tau, conical_profile, k_tilde_value
from .specfun.bessel import k_bessel_oracle

__all__ = [
    "HorocycleWave", "PolarWave", "BandWave", "CurveKind", "CurveSpec", "Profile", "Wave",
    "eval_horocycle_wave", "eval_polar_wave", "eval_band_wave", "eval_wave_halfplane",
    "intro_family", "find_bessel_zero_taus", "random_wave", "geodesic_coords",
    "geodesic_coords_inverse", "polar_coords", "laplace_residual", "wave_band",
    "add_waves", "scale_wave", "dump_wave", "load_wave", "profile_range",
]


def _clean_coeffs(coeffs: Mapping[int, complex]) -> dict[int, complex]:
    return {int(n): complex(c) for n, c in sorted(coeffs.items()) if c != 0}


def _check_real(coeffs: dict[int, complex], name: str):
    for n, c in coeffs.items():
        other = coeffs.get(-n, 0j)
        if other != c.conjugate():
            raise ArgumentOutOfRange(f"{name}: coefficient at {-n} is not the conjugate of the one at {n}")


@dataclass(frozen=True)
class HorocycleWave:
    """``alpha y^{1/2+i tau} + beta y^{1/2-i tau} + sum_n c(n) sqrt(y) K~(2 pi |n| y/a) e^{2 pi i n x/a}``.

    ``k_normalization`` records the factor already folded into ``coeffs``
    when the wave was specified with unnormalized ``K``: the coefficient of
    ``K_{i tau}`` is ``c(n) / k_normalization``.
    """

    tau: float
    coeffs: Mapping[int, complex]
    period: float = 1.0
    alpha_const: complex = 0j
    beta_const: complex = 0j
    real: bool = False
    k_normalization: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "tau", as_tau(self.tau))
        object.__setattr__(self, "coeffs", _clean_coeffs(self.coeffs))
        if 0 in self.coeffs:
            raise ArgumentOutOfRange("horocyclic coefficients are indexed by nonzero n")
        if not self.period > 0:
            raise ArgumentOutOfRange("period must be positive")
        if self.real:
            _check_real(self.coeffs, "HorocycleWave")
            if complex(self.alpha_const).imag or complex(self.beta_const).imag:
                raise ArgumentOutOfRange("real wave needs real alpha and beta")


@dataclass(frozen=True)
class PolarWave:
    """``sum_m b(m) C_tau(|m|, cosh r) e^{i m theta}``."""

    tau: float
    coeffs: Mapping[int, complex]
    real: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tau", as_tau(self.tau))
        object.__setattr__(self, "coeffs", _clean_coeffs(self.coeffs))
        if self.real:
            _check_real(self.coeffs, "PolarWave")


@dataclass(frozen=True)
class BandWave:
    """``sum_m b(m) D_m(sinh r) e^{2 pi i m theta / a}``.

    ``D_m`` solves the separated equation with ``D_m(0), D_m'(0)`` given by
    ``boundary_data[m]`` (default: even solution ``(1, 0)``).
    """

    tau: float
    coeffs: Mapping[int, complex]
    period: float = 1.0
    boundary_data: Mapping[int, tuple[complex, complex]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "tau", as_tau(self.tau))
        object.__setattr__(self, "coeffs", _clean_coeffs(self.coeffs))
        bd = {int(m): (complex(v), complex(d)) for m, (v, d) in self.boundary_data.items()}
        for m in self.coeffs:
            bd.setdefault(m, (1 + 0j, 0j))
        object.__setattr__(self, "boundary_data", {m: bd[m] for m in sorted(bd) if m in self.coeffs})
        if not self.period > 0:
            raise ArgumentOutOfRange("period must be positive")


Wave = Union[HorocycleWave, PolarWave, BandWave]


def wave_band(w: Wave) -> int:
    return max((abs(n) for n in w.coeffs), default=0)


def _replace_coeffs(w: Wave, coeffs, **extra):
    kw = dict(w.__dict__)
    kw.update(coeffs=coeffs, **extra)
    return type(w)(**kw)


def scale_wave(w: Wave, factor: complex) -> Wave:
    factor = complex(factor)
    extra = {}
    if isinstance(w, HorocycleWave):
        extra = dict(alpha_const=w.alpha_const * factor, beta_const=w.beta_const * factor)
    real = getattr(w, "real", False) and factor.imag == 0
    if hasattr(w, "real"):
        extra["real"] = real
    return _replace_coeffs(w, {n: c * factor for n, c in w.coeffs.items()}, **extra)


def add_waves(a: Wave, b: Wave) -> Wave:
    if type(a) is not type(b) or a.tau != b.tau or getattr(a, "period", 1.0) != getattr(b, "period", 1.0):
        raise KindMismatch("waves must share kind, tau and period")
    coeffs = dict(a.coeffs)
    for n, c in b.coeffs.items():
        coeffs[n] = coeffs.get(n, 0j) + c
    extra = {}
    if isinstance(a, HorocycleWave):
        if a.k_normalization != b.k_normalization:
            raise KindMismatch("waves use different K normalizations")
        extra = dict(alpha_const=a.alpha_const + b.alpha_const, beta_const=a.beta_const + b.beta_const)
    if hasattr(a, "real"):
        extra["real"] = a.real and b.real
    if isinstance(a, BandWave):
        bd = dict(b.boundary_data)
        for m, pair in a.boundary_data.items():
            if m in bd and bd[m] != pair:
                raise KindMismatch(f"boundary data differ at m={m}")
            bd[m] = pair
        extra["boundary_data"] = bd
    return _replace_coeffs(a, coeffs, **extra)


# -- evaluation ----------------------------------------------------------------

def eval_horocycle_wave(w: HorocycleWave, x, y):
    """Evaluate at points ``x + i y`` (broadcasting arrays)."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(y <= 0):
        raise ArgumentOutOfRange("y must be positive")
    out = np.zeros(x.shape, dtype=complex)
    if w.alpha_const or w.beta_const:
        out += (w.alpha_const * np.exp((0.5 + 1j * w.tau) * np.log(y))
                + w.beta_const * np.exp((0.5 - 1j * w.tau) * np.log(y)))
    flat_y = y.ravel()
    uniq, inv = np.unique(flat_y, return_inverse=True)
    sqrt_y = np.sqrt(y)
    for n, c in w.coeffs.items():
        k = np.array([k_tilde_value(w.tau, 2.0 * math.pi * abs(n) * yy / w.period) for yy in uniq])[inv]
        out += c * sqrt_y * k.reshape(y.shape) * np.exp(2j * math.pi * n * x / w.period)
    return out if out.ndim else complex(out)


def profile_range(r: float) -> float:
    """Integration range for radial profiles covering radius ``r`` (quantized for caching)."""
    return float(max(2.0, math.ceil(r)))


def eval_polar_wave(w: PolarWave, r, theta, config: Config | None = None):
    """Evaluate in geodesic polar coordinates about ``z = i``."""
    r, theta = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
    if np.any(r < 0):
        raise ArgumentOutOfRange("r must be nonnegative")
    out = np.zeros(r.shape, dtype=complex)
    flat = r.ravel()
    for m, b in w.coeffs.items():
        prof = conical_profile(w.tau, abs(m), profile_range(float(flat.max(initial=0.0))))
        out += b * prof.values(flat).reshape(r.shape) * np.exp(1j * m * theta)
    return out if out.ndim else complex(out)


class _BandSolutions:
    """Even and odd solutions of the band equation in ``r`` on ``[0, r_max]``.

    In ``r`` (with ``x = sinh r``) the separated equation reads
    ``D'' + tanh(r) D' + (1/4 + tau^2 - k^2 / cosh^2 r) D = 0``,
    ``k = 2 pi m / a``; the coefficients are even in ``r`` so the two
    solutions have definite parity, and ``dD/dx = dD/dr`` at ``r = 0``.
    """

    def __init__(self, tau: float, k: float, r_max: float, rtol: float):
        lam = 0.25 + tau * tau

        def rhs(r, y):
            return [y[1], -math.tanh(r) * y[1] - (lam - (k / math.cosh(r)) ** 2) * y[0],
                    y[3], -math.tanh(r) * y[3] - (lam - (k / math.cosh(r)) ** 2) * y[2]]

        sol = solve_ivp(rhs, (0.0, r_max), [1.0, 0.0, 0.0, 1.0], method="DOP853",
                        rtol=rtol, atol=1e-14, dense_output=True)
        if not sol.success:
            raise IntegrationRange(sol.message)
        self._sol = sol.sol

    def __call__(self, r: np.ndarray):
        ar = np.abs(r)
        y = self._sol(ar)
        even = y[0]
        odd = np.sign(r) * y[2]
        return even, odd


@functools.lru_cache(maxsize=1024)
def _band_solutions(tau: float, k: float, r_max: float, rtol: float) -> _BandSolutions:
    return _BandSolutions(tau, k, r_max, rtol)


def eval_band_wave(w: BandWave, r, theta, config: Config | None = None, rtol: float = 1e-12):
    """Evaluate in band coordinates ``(r, theta)`` about the geodesic ``x = 0``."""
    cfg = resolve(config)
    r, theta = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
    if np.any(np.abs(r) > cfg.band_r_max):
        raise IntegrationRange(f"|r| exceeds {cfg.band_r_max}")
    out = np.zeros(r.shape, dtype=complex)
    flat = r.ravel()
    for m, b in w.coeffs.items():
        k = 2.0 * math.pi * m / w.period
        even, odd = _band_solutions(w.tau, abs(k), cfg.band_r_max, rtol)(flat)
        v, d = w.boundary_data[m]
        d_m = (v * even + d * odd).reshape(r.shape)
        out += b * d_m * np.exp(1j * k * theta)
    return out if out.ndim else complex(out)


# -- coordinates ----------------------------------------------------------------

def geodesic_coords(x, y):
    """Band coordinates ``(r, theta) = (asinh(x/y), log sqrt(x^2 + y^2))``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ArgumentOutOfRange("y must be positive")
    return np.arcsinh(x / y), 0.5 * np.log(x * x + y * y)


def geodesic_coords_inverse(r, theta):
    """``(x, y) = (e^theta tanh r, e^theta / cosh r)``."""
    r, theta = np.asarray(r, dtype=float), np.asarray(theta, dtype=float)
    e = np.exp(theta)
    return e * np.tanh(r), e / np.cosh(r)


def polar_coords(x, y):
    """Geodesic polar coordinates ``(r, theta)`` of ``x + iy`` about ``i``.

    ``theta`` is the argument of the disk image ``(z - i)/(z + i)``.
    """
    z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
    d = (z - 1j) / (z + 1j)
    rho = np.minimum(np.abs(d), 1.0 - 1e-16)
    return 2.0 * np.arctanh(rho), np.angle(d)


def eval_wave_halfplane(w: Wave, x, y, config: Config | None = None):
    """Evaluate any wave at upper half-plane points ``x + iy``."""
    if isinstance(w, HorocycleWave):
        return eval_horocycle_wave(w, x, y)
    if isinstance(w, PolarWave):
        return eval_polar_wave(w, *polar_coords(x, y), config=config)
    return eval_band_wave(w, *geodesic_coords(x, y), config=config)


# -- curves ---------------------------------------------------------------------

class CurveKind(enum.Enum):
    HOROCYCLE = "HOROCYCLE"
    GEODESIC_CIRCLE = "GEODESIC_CIRCLE"
    SEGMENT = "SEGMENT"


@dataclass(frozen=True)
class CurveSpec:
    """A restriction target.

    ``HOROCYCLE``: ``y = y0``, one period of length ``period``.
    ``GEODESIC_CIRCLE``: distance ``r0`` from ``i``.
    ``SEGMENT``: ``t -> path(t) = (x(t), y(t))`` for ``t`` in ``[0, 1]``;
    ``endpoints`` is set for straight Euclidean segments.
    """

    kind: CurveKind
    y0: float = math.nan
    period: float = 1.0
    r0: float = math.nan
    path: Callable | None = field(default=None, compare=False)
    endpoints: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if self.kind is CurveKind.HOROCYCLE and not self.y0 > 0:
            raise ArgumentOutOfRange("y0 must be positive")
        if self.kind is CurveKind.HOROCYCLE and not self.period > 0:
            raise ArgumentOutOfRange("period must be positive")
        if self.kind is CurveKind.GEODESIC_CIRCLE and not self.r0 > 0:
            raise ArgumentOutOfRange("r0 must be positive")
        if self.kind is CurveKind.SEGMENT:
            if self.path is None:
                raise ArgumentOutOfRange("segment needs a path")
            t = np.linspace(0.0, 1.0, 257)
            x, y = self.path(t)
            if np.any(np.asarray(y) <= 0):
                raise ArgumentOutOfRange("segment leaves the upper half-plane")
            speed = np.hypot(np.gradient(x, t), np.gradient(y, t))
            if np.any(speed <= 0):
                raise ArgumentOutOfRange("segment speed vanishes")

    @classmethod
    def horocycle(cls, y0: float, period: float = 1.0) -> "CurveSpec":
        return cls(CurveKind.HOROCYCLE, y0=float(y0), period=float(period))

    @classmethod
    def geodesic_circle(cls, r0: float) -> "CurveSpec":
        return cls(CurveKind.GEODESIC_CIRCLE, r0=float(r0))

    @classmethod
    def segment(cls, x0: float, y0: float, x1: float, y1: float) -> "CurveSpec":
        ends = (float(x0), float(y0), float(x1), float(y1))

        def path(t):
            t = np.asarray(t, dtype=float)
            return ends[0] + (ends[2] - ends[0]) * t, ends[1] + (ends[3] - ends[1]) * t

        return cls(CurveKind.SEGMENT, path=path, endpoints=ends)

    @classmethod
    def parametric(cls, path: Callable) -> "CurveSpec":
        return cls(CurveKind.SEGMENT, path=path)


# -- families -------------------------------------------------------------------

def intro_family(kind: str, tau: float | None = None, n: int | None = None) -> HorocycleWave:
    """The two explicit families ``sqrt(y) K_{i tau}(2 pi y) cos(2 pi x)`` (``"EX1"``)
    and ``sqrt(y) K_i(2 pi n y) cos(2 pi n x)`` (``"EX2"``).

    Both use the unnormalized ``K``; the factor ``|Gamma(1/2 + i tau)|``
    is folded into the coefficients and recorded as ``k_normalization``.
    """
    kind = kind.upper()
    if kind in ("EX1", "EX1_TAU"):
        if tau is None or not tau > 0:
            raise ArgumentOutOfRange("EX1 needs tau > 0")
        g = abs_gamma_half(tau)
        return HorocycleWave(tau, {1: g / 2, -1: g / 2}, real=True, k_normalization=g)
    if kind in ("EX2", "EX2_N"):
        if n is None or int(n) < 1:
            raise ArgumentOutOfRange("EX2 needs n >= 1")
        g = abs_gamma_half(1.0)
        n = int(n)
        return HorocycleWave(1.0, {n: g / 2, -n: g / 2}, real=True, k_normalization=g)
    raise ArgumentOutOfRange(f"unknown family {kind!r}")


def find_bessel_zero_taus(x0: float, tau_lo: float, tau_hi: float, step: float = 0.05,
                          config: Config | None = None) -> list[float]:
    """All ``tau`` in ``[tau_lo, tau_hi]`` where ``K~_{i tau}(x0)`` changes sign."""
    cfg = resolve(config)
    if not (0 < tau_lo < tau_hi <= cfg.oracle_tau_max):
        raise ArgumentOutOfRange("need 0 < tau_lo < tau_hi <= oracle_tau_max")
    if not 0 < step <= 0.05:
        raise ArgumentOutOfRange("grid step must lie in (0, 0.05]")
    grid = np.linspace(tau_lo, tau_hi, int(math.ceil((tau_hi - tau_lo) / step)) + 1)

    def f(t):
        return k_bessel_oracle(t, x0, cfg).real

    vals = [f(t) for t in grid]
    zeros = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            zeros.append(float(a))
        elif fa * fb < 0:
            zeros.append(brentq(f, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200))
    if vals[-1] == 0.0:
        zeros.append(float(grid[-1]))
    return zeros


class Profile(enum.Enum):
    FLAT = "FLAT"
    EXP_TAIL = "EXP_TAIL"


def random_wave(tau: float, band_c: float, seed: int, profile: Profile | str = Profile.FLAT,
                kind: str = "horocycle", period: float = 1.0) -> Wave:
    """Real wave with random coefficients: uniform magnitudes in ``[0, 1]`` for
    ``|n| < band_c tau`` and, for ``EXP_TAIL``, ``e^{-|n|}``-damped ones for the
    next 30 indices.  Phases are uniform.

    The coefficients are rescaled if needed so that
    ``S(X) = sum_{|n| < X} |c(n)|^2 <= 2 X + tau`` for every ``X``.
    """
    t = as_tau(tau)
    if not t > 0:
        raise ArgumentOutOfRange("tau must be positive")
    if not band_c > 1:
        raise ArgumentOutOfRange("band_c must exceed 1")
    profile = Profile(profile) if not isinstance(profile, Profile) else profile
    rng = np.random.default_rng(seed)
    edge = band_c * t
    n_max = int(math.ceil(edge)) - 1 + (30 if profile is Profile.EXP_TAIL else 0)
    start = 1 if kind == "horocycle" else 0
    coeffs: dict[int, complex] = {}
    for n in range(start, n_max + 1):
        mag = rng.uniform(0.0, 1.0)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        if n >= edge:
            mag *= math.exp(-n)
        if n == 0:
            coeffs[0] = complex(mag * math.cos(phase))
        else:
            coeffs[n] = mag * complex(math.cos(phase), math.sin(phase))
            coeffs[-n] = coeffs[n].conjugate()
    # partial-sum contract; S jumps at integers, so checking X = k + 1 suffices
    sq = np.zeros(n_max + 2)
    for n, c in coeffs.items():
        sq[abs(n)] += abs(c) ** 2
    s_vals = np.cumsum(sq)
    ks = np.arange(n_max + 2)
    ratio = np.max(s_vals / (2.0 * (ks + 1) + t))
    if ratio > 1.0:
        coeffs = {n: c / math.sqrt(ratio) for n, c in coeffs.items()}
    if kind == "horocycle":
        return HorocycleWave(t, coeffs, period=period, real=True)
    if kind == "polar":
        return PolarWave(t, coeffs, real=True)
    raise ArgumentOutOfRange(f"unknown wave kind {kind!r}")


# -- eigen-equation check ---------------------------------------------------------

_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_OFF = np.arange(-2, 3)


def laplace_residual(w: Wave, point: tuple[float, float], h: float = 1e-3,
                     config: Config | None = None) -> float:
    """``|Delta phi + (1/4 + tau^2) phi|`` at ``point`` by fourth-order central differences.

    ``point`` is ``(x, y)`` for horocyclic waves and ``(r, theta)`` for polar
    and band waves, each differentiated in its own coordinates.
    """
    if not 1e-5 <= h <= 1e-2:
        raise ArgumentOutOfRange("h must lie in [1e-5, 1e-2]")
    p, q = float(point[0]), float(point[1])
    lam = 0.25 + w.tau * w.tau
    if isinstance(w, HorocycleWave):
        fx = eval_horocycle_wave(w, p + h * _OFF, q)
        fy = eval_horocycle_wave(w, p, q + h * _OFF)
        phi = fx[2]
        lap = q * q * (_D2 @ fx + _D2 @ fy) / (h * h)
    else:
        ev = eval_polar_wave if isinstance(w, PolarWave) else eval_band_wave
        if isinstance(w, PolarWave) and p < 3 * h:
            raise ArgumentOutOfRange("polar residual needs r >= 3h")
        fr = ev(w, p + h * _OFF, q, config=config)
        ft = ev(w, p, q + h * _OFF, config=config)
        phi = fr[2]
        d2r, d1r, d2t = _D2 @ fr / (h * h), _D1 @ fr / h, _D2 @ ft / (h * h)
        if isinstance(w, PolarWave):
            lap = d2r + d1r / math.tanh(p) + d2t / math.sinh(p) ** 2
        else:
            lap = d2r + math.tanh(p) * d1r + d2t / math.cosh(p) ** 2
    return float(abs(lap + lam * phi))


# -- serialization ----------------------------------------------------------------

def _f(v: float) -> str:
    return format(float(v), ".17g")


def dump_wave(w: Wave) -> str:
    """Text form: ``key value`` header lines, then one ``n re im`` line per coefficient."""
    kind = {HorocycleWave: "horocycle", PolarWave: "polar", BandWave: "band"}[type(w)]
    lines = [f"kind {kind}", f"tau {_f(w.tau)}"]
    if not isinstance(w, PolarWave):
        lines.append(f"period {_f(w.period)}")
    if not isinstance(w, BandWave):
        lines.append(f"real {int(w.real)}")
    if isinstance(w, HorocycleWave):
        a, b = complex(w.alpha_const), complex(w.beta_const)
        lines += [f"alpha {_f(a.real)} {_f(a.imag)}", f"beta {_f(b.real)} {_f(b.imag)}",
                  f"k_normalization {_f(w.k_normalization)}"]
    lines.append("coeffs")
    for n, c in w.coeffs.items():
        row = f"{n} {_f(c.real)} {_f(c.imag)}"
        if isinstance(w, BandWave):
            v, d = w.boundary_data[n]
            row += f" {_f(v.real)} {_f(v.imag)} {_f(d.real)} {_f(d.imag)}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def load_wave(text: str) -> Wave:
    header: dict[str, list[str]] = {}
    rows: list[list[str]] = []
    in_coeffs = False
    for raw in text.splitlines():
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if in_coeffs:
            rows.append(parts)
        elif parts[0] == "coeffs":
            in_coeffs = True
        else:
            header[parts[0]] = parts[1:]
    try:
        kind = header["kind"][0]
        tau = float(header["tau"][0])
        coeffs = {int(r[0]): complex(float(r[1]), float(r[2])) for r in rows}
        if kind == "horocycle":
            a, b = header.get("alpha", ["0", "0"]), header.get("beta", ["0", "0"])
            return HorocycleWave(tau, coeffs, period=float(header["period"][0]),
                                 alpha_const=complex(float(a[0]), float(a[1])),
                                 beta_const=complex(float(b[0]), float(b[1])),
                                 real=bool(int(header.get("real", ["0"])[0])),
                                 k_normalization=float(header.get("k_normalization", ["1"])[0]))
        if kind == "polar":
            return PolarWave(tau, coeffs, real=bool(int(header.get("real", ["0"])[0])))
        if kind == "band":
            bd = {int(r[0]): (complex(float(r[3]), float(r[4])), complex(float(r[5]), float(r[6])))
                  for r in rows}
            return BandWave(tau, coeffs, period=float(header["period"][0]), boundary_data=bd)
    except (KeyError, IndexError, ValueError) as exc:
        raise ArgumentOutOfRange(f"malformed wave text: {exc}") from exc
    raise ArgumentOutOfRange(f"unknown wave kind {kind!r}")
