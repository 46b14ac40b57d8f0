"""Restriction of waves to curves as finite Fourier series on the unit circle."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .config import Config
from .eigenmodel import (
    BandWave, CurveKind, CurveSpec, HorocycleWave, PolarWave, Wave,
    eval_horocycle_wave, eval_polar_wave, eval_wave_halfplane, profile_range, wave_band,
)
from .errors import AllZero, ArgumentOutOfRange, KindMismatch
from .specfun import conical_profile, k_tilde_value

__all__ = [
    "CircleFunction", "restrict", "l2_norm_parseval", "l2_norm_quadrature",
    "partial_sum", "annulus_sup", "dump_circle_function", "load_circle_function",
]


@dataclass(frozen=True)
class CircleFunction:
    """``theta -> sum_n a(n) e^{i n theta}`` on ``[0, 2 pi)``.

    ``periodic`` is false for data sampled along an open segment, where the
    circle variable is the segment parameter scaled to ``[0, 2 pi)``;
    ``alias_error`` then bounds the change of the coefficients under
    doubling of the sample count.
    """

    coeffs: Mapping[int, complex]
    source_tau: float = math.nan
    real: bool = False
    periodic: bool = True
    alias_error: float = 0.0

    def __post_init__(self):
        cleaned = {int(n): complex(c) for n, c in sorted(self.coeffs.items()) if c != 0}
        object.__setattr__(self, "coeffs", cleaned)

    @property
    def band(self) -> int:
        return max((abs(n) for n in self.coeffs), default=0)

    @property
    def min_index(self) -> int:
        return min(self.coeffs, default=0)

    def conjugate(self) -> "CircleFunction":
        """The circle function ``conj(f(theta))``."""
        return CircleFunction({-n: c.conjugate() for n, c in self.coeffs.items()},
                              self.source_tau, self.real, self.periodic, self.alias_error)

    def scaled(self, factor: complex) -> "CircleFunction":
        factor = complex(factor)
        return CircleFunction({n: c * factor for n, c in self.coeffs.items()}, self.source_tau,
                              self.real and factor.imag == 0, self.periodic, self.alias_error * abs(factor))

    def laurent(self) -> tuple[int, np.ndarray]:
        """``(lowest index, dense coefficient array)`` of ``psi(q) = sum a(n) q^n``."""
        if not self.coeffs:
            return 0, np.zeros(1, dtype=complex)
        lo, hi = min(self.coeffs), max(self.coeffs)
        arr = np.zeros(hi - lo + 1, dtype=complex)
        for n, c in self.coeffs.items():
            arr[n - lo] = c
        return lo, arr

    def evaluate(self, q) -> np.ndarray:
        """``psi(q)`` at complex points (``q = e^{i theta}`` gives the function)."""
        q = np.asarray(q, dtype=complex)
        lo, arr = self.laurent()
        # Horner in q, then shift by q^lo; stable for |q| near 1
        acc = np.zeros(q.shape, dtype=complex)
        for c in arr[::-1]:
            acc = acc * q + c
        return acc * q ** lo

    def on_circle(self, n_points: int, radius: float = 1.0) -> np.ndarray:
        """``psi(radius e^{2 pi i j / N})`` for ``j < N`` via one FFT (``N > 2 band``)."""
        if n_points <= 2 * self.band:
            raise ArgumentOutOfRange("need more than 2*band points")
        buf = np.zeros(n_points, dtype=complex)
        for n, c in self.coeffs.items():
            buf[n % n_points] += c * radius ** n
        return np.fft.ifft(buf) * n_points


def _horocycle_coeffs(w: HorocycleWave, y0: float) -> dict[int, complex]:
    out = {n: c * math.sqrt(y0) * k_tilde_value(w.tau, 2.0 * math.pi * abs(n) * y0 / w.period)
           for n, c in w.coeffs.items()}
    const = (w.alpha_const * np.exp((0.5 + 1j * w.tau) * math.log(y0))
             + w.beta_const * np.exp((0.5 - 1j * w.tau) * math.log(y0)))
    if const != 0:
        out[0] = complex(const)
    return out


def _sample_segment(w: Wave, curve: CurveSpec, n: int, config: Config | None) -> np.ndarray:
    t = np.arange(n) / n
    x, y = curve.path(t)
    return np.asarray(eval_wave_halfplane(w, x, y, config=config), dtype=complex)


def _dft(values: np.ndarray) -> dict[int, complex]:
    n = values.size
    spec = np.fft.fft(values) / n
    idx = np.fft.fftfreq(n, 1.0 / n).astype(int)
    return {int(k): complex(c) for k, c in zip(idx, spec)}


def restrict(w: Wave, curve: CurveSpec, n_samples: int | None = None,
             config: Config | None = None) -> CircleFunction:
    """Fourier data of ``w`` along ``curve``, re-parameterized to period ``2 pi``.

    Horocycles and geodesic circles are exact (coefficientwise); segments
    are sampled at ``n_samples >= 8 band`` points (default
    ``max(64, 16 band)``) and transformed, with the alias error estimated
    from a run at twice the sample count.
    """
    real = bool(getattr(w, "real", False))
    if curve.kind is CurveKind.HOROCYCLE:
        if not isinstance(w, HorocycleWave):
            raise KindMismatch("horocycle restriction needs a HorocycleWave")
        if not math.isclose(curve.period, w.period, rel_tol=0, abs_tol=1e-15 * w.period):
            raise KindMismatch("horocycle period differs from the wave period")
        return CircleFunction(_horocycle_coeffs(w, curve.y0), w.tau, real)
    if curve.kind is CurveKind.GEODESIC_CIRCLE:
        if not isinstance(w, PolarWave):
            raise KindMismatch("geodesic circle restriction needs a PolarWave")
        coeffs = {m: b * conical_profile(w.tau, abs(m), profile_range(curve.r0)).values([curve.r0])[0]
                  for m, b in w.coeffs.items()}
        return CircleFunction(coeffs, w.tau, real)
    band = wave_band(w)
    n = n_samples or max(64, 16 * max(band, 1))
    if n < 8 * band:
        raise ArgumentOutOfRange("segment restriction needs at least 8*band samples")
    n += n % 2
    coarse = _dft(_sample_segment(w, curve, n, config))
    fine = _dft(_sample_segment(w, curve, 2 * n, config))
    keep = [k for k in coarse if abs(k) <= n // 4]
    alias = max((abs(coarse[k] - fine.get(k, 0j)) for k in keep), default=0.0)
    coeffs = {k: coarse[k] for k in keep}
    return CircleFunction(coeffs, w.tau, real, periodic=False, alias_error=float(alias))


def l2_norm_parseval(cf: CircleFunction) -> float:
    """``sqrt(sum |a(n)|^2)``: the L2 norm for the normalized measure ``d theta / 2 pi``."""
    return float(math.sqrt(sum(abs(c) ** 2 for c in cf.coeffs.values())))


def l2_norm_quadrature(w: Wave, curve: CurveSpec, n_nodes: int | None = None,
                       config: Config | None = None) -> float:
    """Trapezoidal ``sqrt(mean |phi|^2)`` along the curve by direct wave evaluation.

    Uses ``n_nodes >= 16 band`` equispaced nodes in the curve parameter; for
    closed curves this is spectrally accurate.
    """
    band = max(wave_band(w), 1)
    n = n_nodes or max(64, 16 * band)
    if n < 16 * wave_band(w):
        raise ArgumentOutOfRange("need at least 16*band nodes")
    s = np.arange(n) / n
    if curve.kind is CurveKind.HOROCYCLE:
        vals = eval_horocycle_wave(w, curve.period * s, curve.y0)
    elif curve.kind is CurveKind.GEODESIC_CIRCLE:
        vals = eval_polar_wave(w, np.full(n, curve.r0), 2.0 * math.pi * s, config=config)
    else:
        x, y = curve.path(s)
        vals = eval_wave_halfplane(w, x, y, config=config)
    return float(math.sqrt(np.mean(np.abs(vals) ** 2)))


def partial_sum(coeffs, X: float) -> float:
    """``S(X) = sum_{|n| < X} |c(n)|^2`` for a coefficient map, wave or circle function."""
    if not X > 0:
        raise ArgumentOutOfRange("X must be positive")
    items = getattr(coeffs, "coeffs", coeffs)
    return float(sum(abs(c) ** 2 for n, c in items.items() if abs(n) < X))


def annulus_sup(cf: CircleFunction, epsilon: float, n_points: int | None = None) -> float:
    """``max log|psi(q)|`` over ``|q| = e^{+-epsilon}``, sampled at ``>= 16 band`` points."""
    if not 0 < epsilon <= 0.5:
        raise ArgumentOutOfRange("epsilon must lie in (0, 1/2]")
    if not cf.coeffs:
        raise AllZero("circle function is identically zero")
    n = n_points or max(256, 16 * cf.band)
    n = max(n, 2 * cf.band + 1)
    best = -math.inf
    for rad in (math.exp(epsilon), math.exp(-epsilon)):
        best = max(best, float(np.max(np.abs(cf.on_circle(n, rad)))))
    if best == 0:
        raise AllZero("circle function vanishes on the annulus boundary")
    return math.log(best)


def dump_circle_function(cf: CircleFunction) -> str:
    f = lambda v: format(float(v), ".17g")  # noqa: E731
    lines = ["kind circle", f"tau {f(cf.source_tau)}", f"real {int(cf.real)}",
             f"periodic {int(cf.periodic)}", f"alias_error {f(cf.alias_error)}", "coeffs"]
    lines += [f"{n} {f(c.real)} {f(c.imag)}" for n, c in cf.coeffs.items()]
    return "\n".join(lines) + "\n"


def load_circle_function(text: str) -> CircleFunction:
    header, rows, in_coeffs = {}, [], False
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
        if header["kind"][0] != "circle":
            raise ArgumentOutOfRange("not a circle function")
        return CircleFunction(
            {int(r[0]): complex(float(r[1]), float(r[2])) for r in rows},
            source_tau=float(header.get("tau", ["nan"])[0]),
            real=bool(int(header.get("real", ["0"])[0])),
            periodic=bool(int(header.get("periodic", ["1"])[0])),
            alias_error=float(header.get("alias_error", ["0"])[0]),
        )
    except (KeyError, IndexError, ValueError) as exc:
        raise ArgumentOutOfRange(f"malformed circle function text: {exc}") from exc
