"""Zero counting for restricted waves: sign changes, winding numbers, Jensen bounds."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .config import Config, resolve
from .eigenmodel import (
    CurveKind, CurveSpec, HorocycleWave, PolarWave, Profile, Wave,
    eval_wave_halfplane, intro_family, random_wave, wave_band,
)
from .errors import (
    AllZero, ArgumentOutOfRange, ContourZero, NodalCurveError, Unresolved, ZeroRestriction,
)
from .restriction import CircleFunction, l2_norm_parseval, restrict
from .specfun import k_tilde_envelope

__all__ = [
    "count_sign_changes", "count_sign_changes_along", "count_zeros_annulus",
    "jensen_zero_bound", "jensen_cover", "goodness_certificate", "Certificate",
    "SweepRow", "zero_sweep", "SWEEP_COLUMNS",
]

_TANGENT_TOL = 1e-13


def _count_changes(v: np.ndarray, cyclic: bool) -> int:
    s = np.sign(v)
    s = s[s != 0]
    if s.size == 0:
        return 0
    n = int(np.count_nonzero(s[1:] != s[:-1]))
    if cyclic and s[0] != s[-1]:
        n += 1
    return n


def _near_tangent(v: np.ndarray, cyclic: bool) -> bool:
    """True if some local minimum of |v| between equal signs is at rounding level."""
    scale = np.max(np.abs(v))
    a = np.abs(v)
    prev = np.roll(a, 1) if cyclic else np.concatenate([[np.inf], a[:-1]])
    nxt = np.roll(a, -1) if cyclic else np.concatenate([a[1:], [np.inf]])
    sp = np.sign(np.roll(v, 1)) if cyclic else np.concatenate([[0], np.sign(v[:-1])])
    sn = np.sign(np.roll(v, -1)) if cyclic else np.concatenate([np.sign(v[1:]), [0]])
    minima = (a <= prev) & (a <= nxt) & (sp == sn) & (a < _TANGENT_TOL * scale)
    return bool(np.any(minima))


def count_sign_changes(cf: CircleFunction, initial_grid: int | None = None,
                       config: Config | None = None) -> int:
    """Sign changes of ``theta -> Re sum a(n) e^{i n theta}`` on ``[0, 2 pi)``.

    The grid doubles until two consecutive refinements agree.  Data from an
    open segment (``cf.periodic`` false) is not counted across the seam.
    """
    cfg = resolve(config)
    if not cf.real:
        raise ArgumentOutOfRange("sign changes need a real-flagged circle function")
    if not cf.coeffs:
        raise AllZero("circle function is identically zero")
    n = initial_grid or max(64, 8 * cf.band)
    if n < 8 * cf.band:
        raise ArgumentOutOfRange("initial grid must have at least 8*band points")
    n = max(n, 2 * cf.band + 1)
    counts = []
    for _ in range(cfg.sign_refine_max + 2):
        v = cf.on_circle(n).real
        counts.append(_count_changes(v, cf.periodic))
        if len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            if _near_tangent(v, cf.periodic):
                raise Unresolved("a near-tangential zero could not be resolved")
            return counts[-1]
        n *= 2
    raise Unresolved(f"sign-change count did not stabilize: {counts}")


def count_sign_changes_along(w: Wave, curve: CurveSpec, initial_grid: int | None = None,
                             config: Config | None = None) -> int:
    """Sign changes of ``Re w`` sampled directly along a curve parameter ``t in [0, 1]``."""
    cfg = resolve(config)
    if curve.kind is not CurveKind.SEGMENT:
        raise ArgumentOutOfRange("direct sampling is for segments; use restrict() for closed curves")
    n = initial_grid or max(64, 8 * wave_band(w))
    counts = []
    for _ in range(cfg.sign_refine_max + 2):
        t = np.linspace(0.0, 1.0, n + 1)
        x, y = curve.path(t)
        v = np.real(eval_wave_halfplane(w, x, y, config=cfg))
        counts.append(_count_changes(v, cyclic=False))
        if len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            if _near_tangent(v, cyclic=False):
                raise Unresolved("a near-tangential zero could not be resolved")
            return counts[-1]
        n *= 2
    raise Unresolved(f"sign-change count did not stabilize: {counts}")


def _derivative(cf: CircleFunction) -> CircleFunction:
    return CircleFunction({n - 1: n * c for n, c in cf.coeffs.items() if n != 0})


def _winding(cf: CircleFunction, dcf: CircleFunction, radius: float, n0: int,
             min_dist: float) -> int | None:
    """Winding number of ``psi`` on ``|q| = radius``; None if a zero is too close."""
    n = n0
    while True:
        vals = cf.on_circle(n, radius)
        if np.any(vals == 0):
            return None
        dvals = dcf.on_circle(n, radius) if dcf.coeffs else np.zeros(n)
        with np.errstate(divide="ignore"):
            dist = np.abs(vals) / np.abs(dvals)
        if np.min(dist) < min_dist:
            return None
        steps = np.angle(np.roll(vals, -1) / vals)
        if np.max(np.abs(steps)) < math.pi / 2:
            return int(round(float(np.sum(steps)) / (2.0 * math.pi)))
        if n > 1 << 24:
            return None
        n *= 2


def count_zeros_annulus(cf: CircleFunction, epsilon: float, config: Config | None = None) -> int:
    """Zeros (with multiplicity) of ``psi(q) = sum a(n) q^n`` in ``e^{-eps/2} < |q| < e^{eps/2}``.

    Argument principle on both boundary circles with phase tracking.  If a
    zero sits within ``zero_rel_tol`` of a contour, ``epsilon`` is nudged by
    +-5 %, +-10 %, ... and the count retried.
    """
    cfg = resolve(config)
    if not 0 < epsilon <= 0.5:
        raise ArgumentOutOfRange("epsilon must lie in (0, 1/2]")
    if not cf.coeffs:
        raise AllZero("circle function is identically zero")
    dcf = _derivative(cf)
    n0 = 1 << int(math.ceil(math.log2(max(64, 64 * cf.band, 2 * cf.band + 2))))
    nudges = [0.0] + [s * 0.05 * k for k in range(1, cfg.contour_retries + 1) for s in (1, -1)]
    for nudge in nudges[: cfg.contour_retries + 1]:
        eps = epsilon * (1.0 + nudge)
        outer = _winding(cf, dcf, math.exp(eps / 2), n0, cfg.zero_rel_tol)
        inner = _winding(cf, dcf, math.exp(-eps / 2), n0, cfg.zero_rel_tol)
        if outer is not None and inner is not None:
            return outer - inner
    raise ContourZero("a zero lies on the contour for every tried epsilon")


@dataclass(frozen=True)
class JensenCover:
    n_disks: int
    cover_radius: float
    ratio: float = 1.5

    @property
    def log_ratio(self) -> float:
        return math.log(self.ratio)


def jensen_cover(epsilon: float) -> JensenCover:
    """Disks centred on ``|q| = 1`` covering ``e^{-eps/2} <= |q| <= e^{eps/2}``.

    Radius ``sqrt(2) (e^{eps/2} - 1)``; the number of disks is the least
    ``M`` for which the outer corners of each ``2 pi / M`` sector lie
    inside its disk.
    """
    if not 0 < epsilon <= 0.5:
        raise ArgumentOutOfRange("epsilon must lie in (0, 1/2]")
    r = math.sqrt(2.0) * math.expm1(epsilon / 2)
    need = (math.exp(epsilon) + 1.0 - r * r) / (2.0 * math.exp(epsilon / 2))
    m = int(math.ceil(math.pi / math.acos(min(1.0, need))))
    while math.exp(epsilon) + 1.0 - 2.0 * math.exp(epsilon / 2) * math.cos(math.pi / m) > r * r:
        m += 1
    return JensenCover(m, r)


def jensen_zero_bound(cf: CircleFunction, epsilon: float, config: Config | None = None) -> float:
    """Upper bound for the zeros of ``psi`` in ``e^{-eps/2} < |q| < e^{eps/2}``.

    For each covering disk a nearby unit-circle point ``c`` where ``|psi|``
    is largest serves as centre; the disk of radius ``rho = r + |c - c_k|``
    about ``c`` contains the covering disk, and Jensen's formula on the
    concentric disk of radius ``1.5 rho`` bounds its zeros by
    ``(log max|psi| - log|psi(c)|) / log 1.5``.  The input is normalized
    to unit l2 norm first.
    """
    if not cf.coeffs:
        raise AllZero("circle function is identically zero")
    cover = jensen_cover(epsilon)
    cf = cf.scaled(1.0 / l2_norm_parseval(cf))
    m, r = cover.n_disks, cover.cover_radius
    half_arc = min(math.pi / (2 * m), r / 8.0)
    n_arc = 33
    n_rim = max(1024, 64 * cf.band)
    phis = 2.0 * math.pi * np.arange(n_rim) / n_rim
    total = 0.0
    for k in range(m):
        theta_k = 2.0 * math.pi * k / m
        arc = theta_k + np.linspace(-half_arc, half_arc, n_arc)
        vals = np.abs(cf.evaluate(np.exp(1j * arc)))
        j = int(np.argmax(vals))
        if vals[j] == 0:
            raise AllZero("circle function vanishes on a whole arc")
        c = np.exp(1j * arc[j])
        rho = r + abs(c - np.exp(1j * theta_k))
        big = cover.ratio * rho
        if big >= 1.0:
            raise ArgumentOutOfRange("Jensen disk reaches the origin; epsilon too large")
        rim = np.abs(cf.evaluate(c + big * np.exp(1j * phis)))
        total += max(0.0, math.log(np.max(rim)) - math.log(vals[j])) / cover.log_ratio
    return float(total)


@dataclass(frozen=True)
class Certificate:
    """Norm-based zero bound for one wave on one curve.

    ``bound = (M / log 1.5) * max(0, log max|psi| - log ||psi||)`` with the
    maximum taken over the region swept by the Jensen disks; ``band_c`` is
    the coefficient band divided by ``tau``; ``level`` is the ``B`` with
    ``norm = e^{-B tau}``.
    """

    norm: float
    band_c: float
    tau: float
    bound: float
    log_growth: float
    level: float


def _reference_scale(w: Wave, curve: CurveSpec) -> float:
    """Size of the restriction if no cancellation or special zero occurred."""
    if isinstance(w, HorocycleWave) and curve.kind is CurveKind.HOROCYCLE:
        acc = sum(abs(c) ** 2 * curve.y0 * k_tilde_envelope(w.tau, 2 * math.pi * abs(n) * curve.y0 / w.period) ** 2
                  for n, c in w.coeffs.items())
        acc += abs(w.alpha_const) ** 2 * curve.y0 + abs(w.beta_const) ** 2 * curve.y0
        return math.sqrt(acc)
    if isinstance(w, PolarWave) and curve.kind is CurveKind.GEODESIC_CIRCLE:
        return math.sqrt(sum(abs(c) ** 2 for c in w.coeffs.values()) / (1.0 + w.tau * math.sinh(curve.r0)))
    return math.sqrt(sum(abs(c) ** 2 for c in w.coeffs.values()))


def goodness_certificate(w: Wave, curve: CurveSpec, epsilon: float = 0.5,
                         config: Config | None = None) -> Certificate:
    cf = restrict(w, curve, config=config)
    norm = l2_norm_parseval(cf)
    ref = _reference_scale(w, curve)
    if norm == 0.0 or norm <= 1e-12 * ref:
        raise ZeroRestriction(f"restricted norm {norm:.3g} is at rounding level of {ref:.3g}")
    cover = jensen_cover(epsilon)
    big = cover.ratio * (cover.cover_radius + math.pi / cover.n_disks)
    n = max(1024, 64 * cf.band)
    sup = max(float(np.max(np.abs(cf.on_circle(n, rad)))) for rad in (1.0 - big, 1.0 + big))
    growth = math.log(sup) - math.log(norm)
    bound = cover.n_disks / cover.log_ratio * max(0.0, growth)
    return Certificate(norm=norm, band_c=cf.band / w.tau, tau=w.tau, bound=bound,
                       log_growth=growth, level=-math.log(norm) / w.tau)


SWEEP_COLUMNS = ("param", "tau", "exact_count", "annulus_count", "jensen_bound",
                 "certificate_bound", "l2_norm", "status")


@dataclass(frozen=True)
class SweepRow:
    param: float
    tau: float
    exact_count: float
    annulus_count: float
    jensen_bound: float
    certificate_bound: float
    l2_norm: float
    status: str

    def as_dict(self) -> dict:
        return asdict(self)


def _sweep_one(family: str, curve: CurveSpec, param, band_c: float, seed: int,
               profile: Profile, config: Config | None) -> SweepRow:
    nan = math.nan
    tau = nan
    try:
        if family == "EX2":
            w = intro_family("EX2", n=int(param))
        elif family == "RANDOM":
            kind = "polar" if curve.kind is CurveKind.GEODESIC_CIRCLE else "horocycle"
            w = random_wave(float(param), band_c, seed, profile, kind=kind,
                            period=curve.period if curve.kind is CurveKind.HOROCYCLE else 1.0)
        else:
            raise ArgumentOutOfRange(f"unknown family {family!r}")
        tau = w.tau
        if curve.kind is CurveKind.SEGMENT:
            exact = count_sign_changes_along(w, curve, config=config)
            cf = restrict(w, curve, config=config)
            return SweepRow(float(param), tau, exact, nan, nan, nan, l2_norm_parseval(cf), "ok")
        cf = restrict(w, curve, config=config)
        exact = count_sign_changes(cf, config=config)
        annulus = count_zeros_annulus(cf, 0.5, config)
        jensen = jensen_zero_bound(cf, 0.5, config)
        cert = goodness_certificate(w, curve, 0.5, config)
        return SweepRow(float(param), tau, exact, annulus, jensen, cert.bound, cert.norm, "ok")
    except (NodalCurveError, OverflowError) as exc:
        return SweepRow(float(param), tau, nan, nan, nan, nan, nan, type(exc).__name__)


def zero_sweep(family: str, curve: CurveSpec, params, band_c: float = 2.0, seed: int = 0,
               profile: Profile | str = Profile.FLAT, threads: int = 1,
               config: Config | None = None) -> list[SweepRow]:
    """One row per parameter (``n`` for ``EX2``, ``tau`` for ``RANDOM``), in input order.

    Errors are recorded in the ``status`` column instead of aborting.
    """
    family = family.upper()
    profile = Profile(profile) if not isinstance(profile, Profile) else profile

    def job(p):
        return _sweep_one(family, curve, p, band_c, seed, profile, config)

    params = list(params)
    if threads > 1 and len(params) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(job, params))
    return [job(p) for p in params]
