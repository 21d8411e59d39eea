"""Command line interface: one subcommand per pipeline, JSON on stdout.

Exit status is 0 on success, 1 on a domain error and 2 on a usage error
(bad flags or unparsable input).  Human-readable summaries go to stderr.
The default precision comes from GVALUES_PRECISION_BITS when set.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path as FsPath

import mpmath

from . import __version__
from .errors import GValuesError, ParseError, SchemaError

DEFAULT_ORDER = 256
DEFAULT_R = 2.0
DEFAULT_STEP_FRACTION = 0.5
PRECISION_ENV = "GVALUES_PRECISION_BITS"


def default_precision() -> int:
    v = os.environ.get(PRECISION_ENV)
    if v is None:
        return 256
    try:
        bits = int(v)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {v!r}") from None
    if bits < 32:
        raise UsageError(f"{PRECISION_ENV} must be at least 32")
    return bits


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    order: int = DEFAULT_ORDER
    precision_bits: int = 256
    R: float = DEFAULT_R
    step_fraction: float = DEFAULT_STEP_FRACTION
    output: str | None = None
    seed: int = 0
    inputs: dict = field(default_factory=dict)

    def validate(self):
        if self.order <= 0:
            raise UsageError("--order must be positive")
        if self.precision_bits < 32:
            raise UsageError("--precision-bits must be at least 32")
        if not self.R > 0:
            raise UsageError("--R must be positive")
        if not 0 < self.step_fraction < 1:
            raise UsageError("--step-fraction must lie in (0, 1)")


# -- helpers -----------------------------------------------------------------


def _gr_str(g) -> str:
    return str(g)


def _ball_json(b, digits: int | None = None) -> dict:
    return b.to_json(digits)


def _radius_json(r):
    if isinstance(r, Fraction):
        return str(r)
    if math.isinf(float(r)):
        return "inf"
    return float(r)


def _read_text(arg: str) -> str:
    """Inline text, or the contents of a file when prefixed with @ or an existing .json path."""
    if arg.startswith("@"):
        return FsPath(arg[1:]).read_text()
    if arg.endswith((".json", ".csv")) and FsPath(arg).exists():
        return FsPath(arg).read_text()
    return arg


def _gaussians(text: str):
    from .parser import parse_gaussian

    return [parse_gaussian(t) for t in text.split(",") if t.strip()]


def _load_series(arg: str):
    from .parser import parse_series, values_from_csv
    from .series import GSeries

    text = _read_text(arg)
    if text.lstrip().startswith("{"):
        return parse_series(text)
    vals = values_from_csv(text, exact=True)
    return GSeries(tuple(vals), None, None)


def _parse_point(text: str):
    from .parser import parse_gaussian

    return parse_gaussian(text)


def _ode(arg: str):
    from .parser import parse_ode

    return parse_ode(_read_text(arg))


def _path(args):
    from .ode import Path
    from .parser import parse_path

    if args.path_json:
        return parse_path(_read_text(args.path_json))
    pts = [_parse_point(t) for t in args.path.split(";")] if ";" in args.path else _gaussians(args.path)
    return Path(tuple(pts), args.branch_note or "")


def _pick_root(Q, near, which, bits):
    from .roots import complex_roots

    roots = [rb for rb in complex_roots(Q, bits) if rb.multiplicity == 1]
    if not roots:
        from .errors import NoWitnessFound

        raise NoWitnessFound("polynomial has no simple root")
    if near is not None:
        z = complex(near.replace("i", "j").replace(" ", "")) if "j" in near or "i" in near else complex(float(near))
        return min(roots, key=lambda r: abs(r.mid - mpmath.mpc(z)))
    if which is not None:
        return roots[which]
    return max(roots, key=lambda r: (r.mid.real, r.mid.imag))


# -- subcommands ---------------------------------------------------------------


def cmd_root(cfg, args):
    from .algroots import build_root_series, verify_functional_equation
    from .parser import parse_poly, series_to_json

    Q = parse_poly(args.poly)
    rb = _pick_root(Q, args.near, args.which, cfg.precision_bits)
    rs = build_root_series(Q, rb.ball, cfg.R, cfg.order, cfg.precision_bits)
    out = {
        "poly": str(Q),
        "u": str(rs.u),
        "radius_exact": _radius_json(rs.radius_exact),
        "target_root": _ball_json(rs.target_root),
        "value_at_1": _ball_json(rs.value),
    }
    if args.verify:
        out["functional_equation"] = verify_functional_equation(rs)
    if not args.no_series:
        out["series"] = series_to_json(rs.phi)
    _summary(f"u = {rs.u}, radius {out['radius_exact']}, value {rs.value}")
    return out


def cmd_log(cfg, args):
    from .logvalues import exp_consistent, log_algebraic
    from .parser import parse_poly, series_to_json

    Q = parse_poly(args.poly)
    rb = _pick_root(Q, args.near, args.which, cfg.precision_bits)
    real = log_algebraic(Q, rb.ball, cfg.R, cfg.order, cfg.precision_bits)
    comps = []
    for s, label in real.components:
        d = {"label": label}
        if not args.no_series:
            d["series"] = series_to_json(s)
        comps.append(d)
    _summary(f"log = {real.value} with m = {real.m}, u = {real.u}")
    return {
        "poly": str(Q),
        "root": _ball_json(rb.ball),
        "m": real.m,
        "u": str(real.u),
        "components": comps,
        "value": _ball_json(real.value),
        "exp_consistent": exp_consistent(real, rb.ball, cfg.precision_bits),
    }


def cmd_series(cfg, args):
    from . import series as S
    from .parser import parse_gaussian, series_to_csv, series_to_json

    a = _load_series(args.a)
    op = args.op
    binary = {"add": S.add, "sub": S.sub, "mul": S.mul, "hadamard": S.hadamard, "divide": S.divide}
    unary = {"differentiate": S.differentiate, "antiderivative": S.antiderivative, "conjugate": S.conjugate}
    if op in binary:
        if not args.b:
            raise UsageError(f"--op {op} needs --b")
        return {"op": op, "series": series_to_json(binary[op](a, _load_series(args.b)))}
    if op in unary:
        return {"op": op, "series": series_to_json(unary[op](a))}
    if op == "evaluate":
        z = parse_gaussian(args.z or "1")
        v = S.evaluate(a, z, args.tail_ratio, precision_bits=cfg.precision_bits)
        return {"op": op, "z": str(z), "value": _ball_json(v)}
    if op == "radius":
        return {"op": op, "radius_estimate": S.radius_estimate(a)}
    if op == "csv":
        return {"op": op, "csv": series_to_csv(a)}
    raise UsageError(f"unknown op {op}")


def _initial(text: str):
    return tuple(_gaussians(text))


def cmd_continue(cfg, args):
    from .ode import continue_along_path

    ode = _ode(args.ode)
    path = _path(args)
    v = continue_along_path(ode, _initial(args.initial), path, cfg.order, cfg.step_fraction, precision_bits=cfg.precision_bits)
    _summary(f"f(end) = {v[0]}")
    return {"end": str(path.end), "values": [_ball_json(b) for b in v]}


def cmd_connect(cfg, args):
    from .ode import connection_constants, local_basis

    ode = _ode(args.ode)
    path = _path(args)
    center = _parse_point(args.target) if args.target else path.end
    basis = local_basis(ode, center, cfg.order)
    res = connection_constants(ode, _initial(args.initial), path, basis, cfg.order, cfg.step_fraction, precision_bits=cfg.precision_bits)
    _summary(f"constants {list(res.constants)}")
    return {
        "target_center": str(center),
        "constants": [_ball_json(c) for c in res.constants],
        "wronskian_value": _ball_json(res.wronskian_value),
        "residual": res.residual,
        "matching_point": str(res.matching_point) if res.matching_point is not None else None,
    }


def cmd_wronskian(cfg, args):
    from .ode import local_basis, wronskian_certify

    ode = _ode(args.ode)
    basis = local_basis(ode, _parse_point(args.center), cfg.order)
    fit = wronskian_certify(ode, basis, _gaussians(args.points), precision_bits=cfg.precision_bits)
    _summary(f"nu = {fit.nu}, exponents {[str(e) for e in fit.exponents]}")
    return {
        "center": args.center,
        "abel_identity": "exact",
        "nu": _ball_json(fit.nu),
        "poles": [_ball_json(p) for p in fit.poles],
        "exponents": [str(e) for e in fit.exponents],
    }


def cmd_profile(cfg, args):
    from .ode import sample_profile, singular_profile

    ode = _ode(args.ode)
    pts, vals = sample_profile(
        ode,
        _initial(args.initial),
        _parse_point(args.start),
        _parse_point(args.zeta),
        args.samples,
        cfg.order,
        cfg.step_fraction,
        precision_bits=cfg.precision_bits,
    )
    prof = singular_profile(pts, vals, _parse_point(args.zeta), precision_bits=cfg.precision_bits)
    _summary(f"c = {prof.c}, sigma = {prof.sigma}, tau = {prof.tau}")
    return {
        "c": _ball_json(prof.c),
        "sigma": prof.sigma,
        "tau": str(prof.tau) if prof.snapped else float(prof.tau),
        "snapped": prof.snapped,
        "tau_raw": float(prof.tau_raw),
    }


def _numeric_values(arg: str):
    from .parser import parse_series, values_from_csv

    text = _read_text(arg)
    if text.lstrip().startswith("{"):
        return list(parse_series(text).coeffs)
    return values_from_csv(text)


def cmd_asymfit(cfg, args):
    from .asymptotics import fit_profile

    vals = _numeric_values(args.input)
    cands = None
    if args.candidates:
        cands = [complex(_parse_point(t)) for t in args.candidates.split(",")]
    prof = fit_profile(vals, cands)
    _summary(f"rho = {prof.rho:.6g}, sigma = {prof.sigma}, tau = {prof.tau}")
    return {
        "rho": prof.rho,
        "sigma": prof.sigma,
        "tau": str(prof.tau) if isinstance(prof.tau, Fraction) else prof.tau,
        "fronts": [{"zeta": _ball_json(z, 17), "c": _ball_json(c, 17)} for z, c in prof.fronts],
    }


def _fronts(text: str | None):
    if not text:
        return ()
    out = []
    for item in text.split(";"):
        z, c = item.split(":")
        out.append((_parse_point(z), _parse_point(c)))
    return tuple(out)


def cmd_asympredict(cfg, args):
    from .asymptotics import SingularProfile, predict_coeffs

    rho = Fraction(args.rho)
    tau = Fraction(args.tau)
    prof = SingularProfile(rho, args.sigma, tau, _fronts(args.fronts))
    vals = predict_coeffs(prof, range(args.n_min, args.n_max + 1), precision_bits=cfg.precision_bits)
    return {"n_min": args.n_min, "n_max": args.n_max, "values": [_ball_json(v, 20) for v in vals]}


def cmd_amplitudes(cfg, args):
    from .asymptotics import AmplitudeSystem, recover_amplitudes

    om = _gaussians(args.omegas)
    samples = _gaussians(args.samples)
    res = recover_amplitudes(AmplitudeSystem(om, args.start, samples), precision_bits=cfg.precision_bits)
    return {
        "kappas": [_ball_json(k) for k in res.kappas],
        "exact": [str(k) for k in res.exact] if res.exact is not None else None,
        "delta0": _ball_json(res.delta0),
    }


def cmd_apery(cfg, args):
    from .apery import apery_zeta3_sequences, denominator_growth, limit_check, partial_sum_pair

    if args.zeta3:
        a, b = apery_zeta3_sequences(args.zeta3)
        with mpmath.workprec(cfg.precision_bits):
            ratio = mpmath.mpf(a[-1].re.numerator) / a[-1].re.denominator / (mpmath.mpf(b[-1].re.numerator) / b[-1].re.denominator)
        return {
            "demo": "zeta3",
            "n": args.zeta3,
            "ratio": mpmath.nstr(ratio, 40),
            "denominator_growth": denominator_growth(a) if len(a) >= 64 else None,
        }
    if not (args.u and args.v):
        raise UsageError("apery needs --u and --v series files (or --zeta3 N)")
    pair = partial_sum_pair(_load_series(args.u), _load_series(args.v))
    report = limit_check(pair, rate=args.rate)
    report["target"] = _ball_json(pair.target)
    report["error_rate"] = pair.error_rate
    return report


def cmd_mubound(cfg, args):
    from .apery import MuBoundInput, NoConclusion, mu_bound

    val = mu_bound(MuBoundInput(args.C, args.r, args.R_big))
    if isinstance(val, NoConclusion):
        return {"bound": None, "reason": val.reason}
    _summary(f"mu <= {val:.6f}")
    return {"bound": val}


def cmd_dengrowth(cfg, args):
    from .apery import denominator_growth
    from .parser import values_from_csv

    vals = values_from_csv(_read_text(args.input), args.column, exact=True)
    return {"n": len(vals), "slope": denominator_growth(vals)}


COMMANDS = {
    "root": cmd_root,
    "log": cmd_log,
    "series": cmd_series,
    "continue": cmd_continue,
    "connect": cmd_connect,
    "wronskian": cmd_wronskian,
    "profile": cmd_profile,
    "asymfit": cmd_asymfit,
    "asympredict": cmd_asympredict,
    "amplitudes": cmd_amplitudes,
    "apery": cmd_apery,
    "mubound": cmd_mubound,
    "dengrowth": cmd_dengrowth,
}


def _summary(msg: str):
    print(msg, file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    def flags(with_R: bool):
        c = _Parser(add_help=False)
        c.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order N (default 256)")
        c.add_argument("--precision-bits", type=int, default=None, help=f"working precision (default ${PRECISION_ENV} or 256)")
        if with_R:
            c.add_argument("--R", type=float, default=DEFAULT_R, help="target radius (default 2)")
        c.add_argument("--step-fraction", type=float, default=DEFAULT_STEP_FRACTION, help="continuation step bound (default 1/2)")
        c.add_argument("--output", "-o", default=None, help="write JSON here instead of stdout")
        c.add_argument("--seed", type=int, default=0)
        return c

    common = flags(True)

    p = _Parser(prog="gvalues", description="Values of G-series: exact constructions with certified balls.")
    p.add_argument("--version", action="version", version=f"gvalues {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    for name in ("root", "log"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--poly", required=True, help='polynomial text, e.g. "X^2-2"')
        s.add_argument("--near", default=None, help="pick the root closest to this complex number")
        s.add_argument("--which", type=int, default=None, help="index of the simple root")
        s.add_argument("--no-series", action="store_true", help="omit series coefficients")
        if name == "root":
            s.add_argument("--verify", action="store_true", help="also check the functional equation exactly")

    s = sub.add_parser("series", parents=[common])
    s.add_argument("--op", required=True, choices=["add", "sub", "mul", "hadamard", "divide", "differentiate", "antiderivative", "conjugate", "evaluate", "radius", "csv"])
    s.add_argument("--a", required=True, help="series JSON (inline, @file or .json path) or CSV")
    s.add_argument("--b", default=None)
    s.add_argument("--z", default=None, help="evaluation point (exact)")
    s.add_argument("--tail-ratio", type=float, default=None)

    for name in ("continue", "connect"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--ode", required=True, help="ODE text or JSON")
        s.add_argument("--path", default="0", help='waypoints, e.g. "0,1/2+i,1" (";" also separates)')
        s.add_argument("--path-json", default=None)
        s.add_argument("--branch-note", default="")
        s.add_argument("--initial", required=True, help="f, f', ... at the start, comma separated")
        if name == "connect":
            s.add_argument("--target", default=None, help="center of the target basis (default: path end)")

    s = sub.add_parser("wronskian", parents=[common])
    s.add_argument("--ode", required=True)
    s.add_argument("--center", default="0")
    s.add_argument("--points", required=True, help="test points, comma separated")

    s = sub.add_parser("profile", parents=[common])
    s.add_argument("--ode", required=True)
    s.add_argument("--initial", required=True)
    s.add_argument("--start", default="0")
    s.add_argument("--zeta", required=True)
    s.add_argument("--samples", type=int, default=24)

    s = sub.add_parser("asymfit", parents=[common])
    s.add_argument("--input", required=True, help="series JSON or CSV column")
    s.add_argument("--candidates", default=None, help="candidate zeta_i, comma separated")

    s = sub.add_parser("asympredict", parents=[common])
    s.add_argument("--rho", default="1")
    s.add_argument("--sigma", type=int, default=0)
    s.add_argument("--tau", required=True)
    s.add_argument("--fronts", default=None, help='"zeta:c;zeta:c" (default one front 1:1)')
    s.add_argument("--n-min", type=int, default=2)
    s.add_argument("--n-max", type=int, default=20)

    s = sub.add_parser("amplitudes", parents=[common])
    s.add_argument("--omegas", required=True)
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--samples", required=True)

    s = sub.add_parser("apery", parents=[common])
    s.add_argument("--u", default=None)
    s.add_argument("--v", default=None)
    s.add_argument("--rate", type=float, default=None)
    s.add_argument("--zeta3", type=int, default=None, help="run the zeta(3) demo to this index")

    s = sub.add_parser("mubound", parents=[flags(False)])
    s.add_argument("--C", type=float, required=True)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--R", dest="R_big", type=float, required=True)

    s = sub.add_parser("dengrowth", parents=[common])
    s.add_argument("--input", required=True, help="CSV (inline, @file or .csv path)")
    s.add_argument("--column", default=None)
    return p


def _resolve(args) -> RunConfig:
    bits = args.precision_bits if args.precision_bits is not None else default_precision()
    R = getattr(args, "R", DEFAULT_R)
    skip = {"subcommand", "order", "precision_bits", "R", "step_fraction", "output", "seed"}
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg = RunConfig(args.subcommand, args.order, bits, R, args.step_fraction, args.output, args.seed, inputs)
    cfg.validate()
    return cfg


def _emit(payload: dict, output: str | None):
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if output:
        FsPath(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _resolve(args)
    except UsageError as exc:
        _emit({"schema": "gvalues.error/1", "error": {"code": "usage_error", "message": str(exc)}}, None)
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        with mpmath.workprec(cfg.precision_bits):
            result = COMMANDS[cfg.subcommand](cfg, args)
    except UsageError as exc:
        _emit({"schema": "gvalues.error/1", "config": asdict(cfg), "error": {"code": "usage_error", "message": str(exc)}}, None)
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, SchemaError) as exc:
        err = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, ParseError):
            err["span"] = list(exc.span)
        _emit({"schema": "gvalues.error/1", "config": asdict(cfg), "error": err}, None)
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        _emit({"schema": "gvalues.error/1", "config": asdict(cfg), "error": {"code": "io_error", "message": str(exc)}}, None)
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except (GValuesError, ValueError, ZeroDivisionError) as exc:
        code = getattr(exc, "code", "invalid_input")
        _emit({"schema": "gvalues.error/1", "config": asdict(cfg), "error": {"code": code, "message": str(exc)}}, None)
        print(f"{code}: {exc}", file=sys.stderr)
        return 1
    _emit({"schema": f"gvalues.{cfg.subcommand}/1", "config": asdict(cfg), "result": result}, cfg.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
