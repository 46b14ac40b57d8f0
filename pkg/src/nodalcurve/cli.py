"""Command-line front end: tables, sweeps and certificates as CSV or JSON.

Exit codes: 0 success, 2 tolerance breach, 64 usage error, 1 I/O or
internal error.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .config import Config, resolve
from .eigenmodel import (CurveSpec, Profile, dump_wave, intro_family, load_wave, random_wave)
from .errors import (ArgumentOutOfRange, ConfigError, KindMismatch, NodalCurveError, NonPositiveArgument,
                     TauTooLarge)
from .mellin import AfeConfig, afe_two_sided_check, psi_test_complex
from .restriction import l2_norm_parseval, restrict
from .specfun import (Regime, bessel_compare, c_tau_asym, c_tau_oracle, k_bessel_oracle,
                      k_tilde_asym, p_s_circle_avg)
from .zeros import (SWEEP_COLUMNS, count_sign_changes, count_sign_changes_along,
                    count_zeros_annulus, goodness_certificate, jensen_zero_bound, zero_sweep)

EXIT_OK, EXIT_IO, EXIT_BREACH, EXIT_USAGE = 0, 1, 2, 64
_USAGE_ERRORS = (ArgumentOutOfRange, NonPositiveArgument, TauTooLarge, ConfigError, KindMismatch)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- parsing helpers -------------------------------------------------------------

def _number_list(text: str) -> list[float]:
    """``"1,2,5"`` or ``"a:b"`` (unit step) or ``"a:b:step"``; empty string is an empty list."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] <= 0):
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        a, b = parts[0], parts[1]
        step = parts[2] if len(parts) == 3 else 1.0
        n = int(math.floor((b - a) / step + 1e-9)) + 1
        return [a + k * step for k in range(max(n, 0))]
    try:
        return [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _curve(text: str) -> CurveSpec:
    """``horocycle:y0[:period]``, ``circle:r0`` or ``segment:x0,y0,x1,y1``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "horocycle":
            vals = [float(v) for v in rest.split(":")]
            return CurveSpec.horocycle(*vals)
        if kind == "circle":
            return CurveSpec.geodesic_circle(float(rest))
        if kind == "segment":
            vals = [float(v) for v in rest.split(",")]
            if len(vals) != 4:
                raise ValueError("segment needs four numbers")
            return CurveSpec.segment(*vals)
    except (TypeError, ValueError, ArgumentOutOfRange) as exc:
        raise argparse.ArgumentTypeError(f"bad curve {text!r}: {exc}") from exc
    raise argparse.ArgumentTypeError(f"unknown curve kind {kind!r}")


def _regime(text: str) -> Regime:
    try:
        r = Regime(text.upper())
    except ValueError:
        r = None
    if r not in (Regime.MONOTONE_LARGE_X, Regime.OSCILLATORY, Regime.AIRY):
        raise argparse.ArgumentTypeError(f"invalid regime {text!r}")
    return r


# -- output ---------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        return None if not math.isfinite(v) else float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def render(columns, rows, fmt: str, timestamp: bool, meta: dict | None = None) -> str:
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds") if timestamp else None
    if fmt == "json":
        doc = {"columns": list(columns), "rows": [{c: _json_value(r[c]) for c in columns} for r in rows]}
        if meta:
            doc["meta"] = {k: _json_value(v) for k, v in meta.items()}
        if stamp:
            doc["generated"] = stamp
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    if stamp:
        buf.write(f"# generated {stamp}\n")
    for k, v in (meta or {}).items():
        buf.write(f"# {k} = {_fmt(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _emit(args, text: str):
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _table(args, columns, rows, meta=None):
    _emit(args, render(columns, rows, args.format, not args.no_timestamp, meta))


def _read_wave(path: str):
    with open(path, encoding="utf-8") as fh:
        return load_wave(fh.read())


# -- subcommands ------------------------------------------------------------------

def cmd_specfun_compare(args, cfg: Config) -> int:
    cols = ("tau", "x", "oracle", "asym", "regime", "rel_err")
    rows = []
    for tau in args.tau:
        rows += [r.__dict__ for r in bessel_compare(tau, args.regime, args.points, cfg)]
    _table(args, cols, rows)
    return EXIT_BREACH if any(r["rel_err"] > cfg.tolerance for r in rows) else EXIT_OK


def cmd_specfun_eval(args, cfg: Config) -> int:
    cols = ("function", "tau", "m", "x", "oracle", "oracle_err", "asym", "asym_err", "regime")
    rows = []
    for tau in args.tau:
        for x in args.x:
            if args.function == "k":
                o, a = k_bessel_oracle(tau, x, cfg), k_tilde_asym(tau, x)
                m = 0
            else:
                m = args.m
                o, a = c_tau_oracle(tau, m, x, cfg), c_tau_asym(tau, m, x, cfg)
            rows.append({"function": args.function, "tau": tau, "m": m, "x": x,
                         "oracle": o.real, "oracle_err": o.est_error,
                         "asym": a.real, "asym_err": a.est_error, "regime": a.regime.value})
    _table(args, cols, rows)
    return EXIT_OK


def cmd_wave_make(args, cfg: Config) -> int:
    fam = args.family.upper()
    if fam == "EX1":
        w = intro_family("EX1", tau=args.tau)
    elif fam == "EX2":
        w = intro_family("EX2", n=args.n)
    elif fam == "RANDOM":
        if args.tau is None:
            raise UsageError("RANDOM needs --tau")
        w = random_wave(args.tau, args.band_c, args.seed, args.profile, kind=args.kind)
    else:
        raise UsageError(f"unknown family {args.family!r}")
    _emit(args, dump_wave(w))
    return EXIT_OK


def cmd_restrict(args, cfg: Config) -> int:
    cf = restrict(_read_wave(args.wave), args.curve, config=cfg)
    rows = [{"n": n, "re": complex(c).real, "im": complex(c).imag} for n, c in sorted(cf.coeffs.items())]
    _table(args, ("n", "re", "im"), rows,
           {"l2_norm": l2_norm_parseval(cf), "alias_error": cf.alias_error})
    return EXIT_OK


def cmd_zeros_count(args, cfg: Config) -> int:
    w = _read_wave(args.wave)
    cols = ("exact_count", "annulus_count", "jensen_bound", "l2_norm")
    cf = restrict(w, args.curve, config=cfg)
    if args.curve.endpoints is not None:
        row = {"exact_count": count_sign_changes_along(w, args.curve, config=cfg),
               "annulus_count": math.nan, "jensen_bound": math.nan}
    else:
        row = {"exact_count": count_sign_changes(cf, config=cfg),
               "annulus_count": count_zeros_annulus(cf, args.epsilon, cfg),
               "jensen_bound": jensen_zero_bound(cf, args.epsilon, cfg)}
    row["l2_norm"] = l2_norm_parseval(cf)
    _table(args, cols, [row])
    return EXIT_OK


def cmd_zeros_sweep(args, cfg: Config) -> int:
    params = [int(p) for p in args.params] if args.family.upper() == "EX2" else args.params
    rows = zero_sweep(args.family, args.curve, params, band_c=args.band_c, seed=args.seed,
                      profile=args.profile, threads=args.threads, config=cfg)
    _table(args, SWEEP_COLUMNS, [r.as_dict() for r in rows])
    return EXIT_OK


def _afe_cfg(args) -> AfeConfig:
    return AfeConfig(m_exp=args.m_exp, sigma=args.sigma, t_max=args.t_max, quad_step=args.quad_step)


def cmd_afe_psi(args, cfg: Config) -> int:
    vals = psi_test_complex(np.array(args.x, dtype=float), args.tau, _afe_cfg(args)) if args.x else []
    rows = [{"X": x, "value": v.real, "imag": v.imag} for x, v in zip(args.x, vals)]
    _table(args, ("X", "value", "imag"), rows, {"tau": args.tau, "sigma": args.sigma, "m_exp": args.m_exp})
    return EXIT_OK


def cmd_afe_check(args, cfg: Config) -> int:
    if args.coeffs is not None:
        profiles = [args.coeffs]
    else:
        rng = np.random.default_rng(args.seed)
        profiles = [list(rng.uniform(0.0, 1.0, size=int(rng.integers(1, args.max_len + 1))))
                    for _ in range(args.profiles)]
    reports = [afe_two_sided_check(p, args.X, args.tau, _afe_cfg(args)).as_dict() for p in profiles]
    cols = ("X", "tau", "sigma", "m_exp", "lhs", "rhs", "rel_diff")
    _table(args, cols, reports)
    return EXIT_BREACH if any(r["rel_diff"] > args.rtol for r in reports) else EXIT_OK


def cmd_equidist(args, cfg: Config) -> int:
    s = complex(args.s.replace(" ", "")) if args.s is not None else complex(-0.5, args.tau)
    rs = args.r
    if any(b <= a for a, b in zip(rs, rs[1:])):
        raise UsageError("r list must be increasing")
    rows = [{"r": r, "abs_p": abs(p_s_circle_avg(s, r, cfg))} for r in rs]
    _table(args, ("r", "abs_p"), rows, {"s_re": s.real, "s_im": s.imag})
    spans = len(rs) > 1 and rs[0] <= 1.0 and rs[-1] >= 15.0
    if spans and rows[-1]["abs_p"] > 0.01 * rows[0]["abs_p"]:
        return EXIT_BREACH
    return EXIT_OK


def cmd_cert(args, cfg: Config) -> int:
    c = goodness_certificate(_read_wave(args.wave), args.curve, args.epsilon, cfg)
    cols = ("tau", "norm", "band_c", "bound", "log_growth", "level")
    _table(args, cols, [c.__dict__])
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def _global_flags(p, default):
    p.add_argument("--seed", type=int, default=default)
    p.add_argument("--out", default=default, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default)
    p.add_argument("--threads", type=int, default=default)
    p.add_argument("--config", default=default, help="key = value file overriding numerical settings")
    p.add_argument("--no-timestamp", action="store_true", default=default)


class _Sub:
    """Subparser action wrapper that attaches the shared global flags to every leaf."""

    def __init__(self, action, common):
        self.action, self.common = action, common

    def add_parser(self, name, **kw):
        return self.action.add_parser(name, parents=[self.common], **kw)

    def group(self, name, dest="action"):
        return _Sub(self.action.add_parser(name).add_subparsers(dest=dest, required=True, parser_class=_Parser),
                    self.common)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nodalcurve", description="Eigenfunction restrictions, nodal counts and special functions.")
    _global_flags(p, argparse.SUPPRESS)
    p.set_defaults(seed=0, out=None, format="csv", threads=1, config=None, no_timestamp=False)
    # global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = _Sub(p.add_subparsers(dest="group", required=True, parser_class=_Parser), common)

    sf = sub.group("specfun")
    c = sf.add_parser("compare", help="oracle vs asymptotic K~ on a regime grid")
    c.add_argument("--tau", type=_number_list, default=[5.0])
    c.add_argument("--regime", type=_regime, default=Regime.MONOTONE_LARGE_X)
    c.add_argument("--points", type=int, default=20)
    c.set_defaults(func=cmd_specfun_compare)
    e = sf.add_parser("eval", help="oracle and asymptotic values")
    e.add_argument("--function", choices=("k", "c"), default="k")
    e.add_argument("--tau", type=_number_list, required=True)
    e.add_argument("--x", type=_number_list, required=True)
    e.add_argument("--m", type=int, default=0)
    e.set_defaults(func=cmd_specfun_eval)

    wv = sub.group("wave")
    m = wv.add_parser("make", help="write a wave in text form")
    m.add_argument("--family", required=True, help="EX1, EX2 or RANDOM")
    m.add_argument("--tau", type=float)
    m.add_argument("--n", type=int)
    m.add_argument("--band-c", type=float, default=2.0)
    m.add_argument("--profile", choices=[x.value for x in Profile], default="FLAT")
    m.add_argument("--kind", choices=("horocycle", "polar"), default="horocycle")
    m.set_defaults(func=cmd_wave_make)

    r = sub.add_parser("restrict", help="Fourier coefficients of a wave along a curve")
    r.add_argument("--wave", required=True)
    r.add_argument("--curve", type=_curve, required=True)
    r.set_defaults(func=cmd_restrict)

    zs = sub.group("zeros")
    zc = zs.add_parser("count")
    zc.add_argument("--wave", required=True)
    zc.add_argument("--curve", type=_curve, required=True)
    zc.add_argument("--epsilon", type=float, default=0.5)
    zc.set_defaults(func=cmd_zeros_count)
    zw = zs.add_parser("sweep")
    zw.add_argument("--family", required=True, help="EX2 or RANDOM")
    zw.add_argument("--curve", type=_curve, required=True)
    zw.add_argument("--params", type=_number_list, required=True, help="n values (EX2) or tau values (RANDOM)")
    zw.add_argument("--band-c", type=float, default=2.0)
    zw.add_argument("--profile", choices=[x.value for x in Profile], default="FLAT")
    zw.set_defaults(func=cmd_zeros_sweep)

    af = sub.group("afe")
    for name, func in (("psi", cmd_afe_psi), ("check", cmd_afe_check)):
        a = af.add_parser(name)
        a.add_argument("--tau", type=float, default=5.0)
        a.add_argument("--sigma", type=float, default=1.0)
        a.add_argument("--m-exp", type=int, default=1)
        a.add_argument("--t-max", type=float)
        a.add_argument("--quad-step", type=float)
        a.set_defaults(func=func)
        if name == "psi":
            a.add_argument("--x", type=_number_list, required=True)
        else:
            a.add_argument("--X", type=float, default=10.0)
            a.add_argument("--coeffs", type=_number_list, help="|a(1)|^2,|a(2)|^2,...")
            a.add_argument("--profiles", type=int, default=20)
            a.add_argument("--max-len", type=int, default=40)
            a.add_argument("--rtol", type=float, default=1e-6)

    q = sub.add_parser("equidist", help="|P_s(cosh r)| along a list of radii")
    grp = q.add_mutually_exclusive_group()
    grp.add_argument("--s", help="complex s with -1 < Re s < 0, e.g. -0.5+5j")
    grp.add_argument("--tau", type=float, default=5.0, help="use s = -1/2 + i tau")
    q.add_argument("--r", type=_number_list, default=_number_list("1:15"))
    q.set_defaults(func=cmd_equidist)

    ce = sub.add_parser("cert", help="norm-based zero bound for a wave on a curve")
    ce.add_argument("--wave", required=True)
    ce.add_argument("--curve", type=_curve, required=True)
    ce.add_argument("--epsilon", type=float, default=0.5)
    ce.set_defaults(func=cmd_cert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        cfg = Config.load(args.config) if args.config else resolve(None)
        if args.out not in (None, "-") and not Path(args.out).parent.is_dir():
            raise FileNotFoundError(f"output directory {Path(args.out).parent} does not exist")
        return args.func(args, cfg)
    except (UsageError, *_USAGE_ERRORS) as exc:
        print(f"nodalcurve: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nodalcurve: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NodalCurveError as exc:
        print(f"nodalcurve: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
