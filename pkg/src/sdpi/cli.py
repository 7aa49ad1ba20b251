"""Command-line front end.

Emits CSV curve data (with a `# meta:` header recording version, seed and
the constants used) or JSON reports.  Identical config and seed produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .channels import DMCKernel, NoiseModel
from .contraction import eta_tv_amplitude, theta_shift
from .core_prob import DiscretePMF, GridDensity
from .deconv import esseen_bound, g1_profile, ks_deconv_solve, ks_from_tv_bound
from .errors import DomainError
from .fi_curves import fi_bsc, fi_dmc_envelope, fi_erasure
from .gaussian_sdpi import gd_lower, horizontal_constants, t_lower_from_gap
from .general_sdpi import general_diag_bound, strict_contraction_check


def _parse_grid(spec: str) -> np.ndarray:
    try:
        lo, hi, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise DomainError(f"bad grid spec {spec!r}, expected lo:hi:step")
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def _parse_channel(spec: str) -> tuple[str, DMCKernel, dict]:
    kind, _, arg = spec.partition(":")
    if kind == "bsc":
        delta = float(arg)
        return kind, DMCKernel.bsc(delta), {"delta": delta}
    if kind == "erasure":
        parts = arg.split(":")
        alpha = float(parts[0])
        size = int(parts[1]) if len(parts) > 1 else 2
        return kind, DMCKernel.erasure(alpha, size), {"alpha": alpha, "size": size}
    if kind == "identity":
        return kind, DMCKernel.identity(int(arg)), {"size": int(arg)}
    if kind == "csv":
        rows = [[float(c) for c in ln.split(",")]
                for ln in open(arg).read().strip().splitlines()
                if ln and not ln.startswith("#")]
        return kind, DMCKernel(np.array(rows)), {"path": arg}
    raise DomainError(f"unknown channel {spec!r}")


def _parse_noise(spec: str) -> NoiseModel:
    kind, _, arg = spec.partition(":")
    if kind == "gaussian":
        return NoiseModel.gaussian(float(arg) if arg else 1.0)
    if kind == "uniform":
        a, b = (float(x) for x in arg.split(",")) if arg else (0.0, 1.0)
        return NoiseModel.uniform(a, b)
    if kind == "laplace":
        return NoiseModel.laplace(float(arg) if arg else 1.0)
    if kind == "grid":
        return NoiseModel.from_grid(GridDensity.from_csv(open(arg).read()))
    raise DomainError(f"unknown noise {spec!r}")


def _load_distribution(path: str):
    text = open(path).read()
    header = text.strip().splitlines()[0].strip().lower()
    if header == "atom,weight":
        return DiscretePMF.from_csv(text)
    return GridDensity.from_csv(text)


def _meta_line(args, **constants) -> str:
    parts = [f"version={__version__}"]
    if getattr(args, "seed", None) is not None:
        parts.append(f"seed={args.seed}")
    for k, v in constants.items():
        parts.append(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}")
    return "# meta: " + " ".join(parts) + "\n"


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_fi_curve(args):
    kind, K, info = _parse_channel(args.channel)
    ts = _parse_grid(args.t_grid)
    if kind == "bsc":
        vals = [fi_bsc(t, info["delta"]) for t in ts]
    elif kind == "erasure":
        vals = [fi_erasure(t, info["alpha"], info["size"]) for t in ts]
    elif kind == "identity":
        vals = [min(t, math.log(info["size"])) for t in ts]
    else:
        curve = fi_dmc_envelope(K, ts, {"seed": args.seed or 0})
        vals = curve.values
    out = _meta_line(args, channel=args.channel)
    out += "t,fi\n"
    out += "".join(f"{float(t)!r},{float(v)!r}\n" for t, v in zip(ts, vals))
    _emit(args, out)
    return 0


def _cmd_bounds(args):
    if args.bound == "diag":
        ts = _parse_grid(args.t_grid)
        out = _meta_line(args, gamma=args.gamma)
        out += "t,gd\n"
        out += "".join(f"{float(t)!r},{gd_lower(t, args.gamma)!r}\n" for t in ts)
    elif args.bound == "horiz":
        eps = _parse_grid(args.eps_grid)
        hc = horizontal_constants(args.gamma)
        out = _meta_line(args, gamma=args.gamma, c1=hc.c1, kappa=hc.kappa,
                         a5=hc.a5, log_eps0=hc.log_eps0)
        out += "eps,t_lower\n"
        rows = []
        for e in eps:
            try:
                rows.append(f"{float(e)!r},{t_lower_from_gap(e, args.gamma)!r}\n")
            except DomainError:
                rows.append(f"{float(e)!r},nan\n")
        out += "".join(rows)
    else:  # general-diag
        noise = _parse_noise(args.noise)
        ts = _parse_grid(args.t_grid)
        out = _meta_line(args, gamma=args.gamma, p=args.p, noise=args.noise,
                         note="eta replaced by eta_tv upper bound")
        out += "t,gd\n"
        out += "".join(
            f"{float(t)!r},{float(general_diag_bound(t, noise, args.p, args.gamma))!r}\n" for t in ts)
    _emit(args, out)
    return 0


def _cmd_contraction(args):
    noise = _parse_noise(args.noise)
    grid = _parse_grid(args.t_grid)
    if args.what == "theta":
        out = _meta_line(args, noise=args.noise)
        out += "delta,theta\n"
        out += "".join(f"{float(d)!r},{float(theta_shift(noise, d))!r}\n" for d in grid)
    else:
        out = _meta_line(args, noise=args.noise)
        out += "A,eta_tv\n"
        out += "".join(f"{float(a)!r},{float(eta_tv_amplitude(noise, a))!r}\n" for a in grid)
    _emit(args, out)
    return 0


def _cmd_deconv(args):
    from .core_prob import convolve, ks_distance, tv_distance
    noise = _parse_noise(args.noise)
    P = _load_distribution(args.p_dist)
    Q = _load_distribution(args.q_dist)
    z = noise.to_grid(step=args.step)
    pc = convolve(P, z)
    qc = convolve(Q, z)
    # align grids for TV
    lo = min(pc.x_min, qc.x_min)
    hi = max(pc.x_max, qc.x_max)
    grid = np.arange(round(lo / z.step), round(hi / z.step) + 1) * z.step

    def on_grid(d):
        v = np.interp(grid, d.grid, d.values, left=0.0, right=0.0)
        return v / np.trapezoid(v, dx=z.step)

    d_tv = float(0.5 * np.trapezoid(np.abs(on_grid(pc) - on_grid(qc)), dx=z.step))
    d_ks = ks_distance(P, Q)
    m2 = Q.max_density() if isinstance(Q, GridDensity) else None
    report = {"d_tv_conv": d_tv, "d_ks": d_ks}
    mom = (P.abs_moment(1.0), Q.abs_moment(1.0))
    if m2 is not None and 0 < d_tv < 1:
        profile = g1_profile(noise)
        T = profile.g1_of_u(min(noise.m1 * d_tv, 1.0))
        try:
            report["ks_from_tv_bound"] = ks_from_tv_bound(noise, m2, mom, profile, T, d_tv)
        except Exception as e:  # profile without a closed-form floor
            report["ks_from_tv_bound_error"] = str(e)
        report["ks_deconv_solve"] = ks_deconv_solve(noise, d_tv, m2, mom)
        report["esseen_bound"] = esseen_bound(P, Q, m2, T)
        report["T"] = T
    _emit(args, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_check_strict(args):
    density = GridDensity.from_csv(open(args.density).read())
    if args.shift_grid:
        shifts = _parse_grid(args.shift_grid)
    else:
        span = density.x_max - density.x_min
        shifts = np.linspace(-span, span, 81)
    v = strict_contraction_check(density, shifts)
    _emit(args, json.dumps({"verdict": v.verdict, "witness": v.witness,
                            "grid_step": v.grid_step}, sort_keys=True) + "\n")
    return 0


def _cmd_verify(args):
    from .verify import run_suite
    report = run_suite(args.suite, args.seed)
    _emit(args, json.dumps(report, indent=2, sort_keys=True, default=float) + "\n")
    return 0 if report["violations"] == 0 else 1


def _apply_config(args, argv):
    if not getattr(args, "config", None):
        return args
    given = {tok[2:].partition("=")[0].replace("-", "_")
             for tok in argv if tok.startswith("--")}
    overrides = {}
    with open(args.config) as f:
        for ln in f:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            key, _, val = ln.partition("=")
            overrides[key.strip().replace("-", "_")] = val.strip()
    for key, val in overrides.items():
        # flags given on the command line win over the config file
        if key not in given and hasattr(args, key):
            current = getattr(args, key)
            if isinstance(current, int) and not isinstance(current, bool):
                val = int(val)
            elif isinstance(current, float):
                val = float(val)
            setattr(args, key, val)
    return args


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sdpi", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--config", default=None)

    sp = sub.add_parser("fi-curve", help="F_I curve of a discrete channel")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--t-grid", dest="t_grid", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_fi_curve)

    sp = sub.add_parser("bounds", help="diagonal / horizontal gap bounds")
    sp.add_argument("bound", choices=["diag", "horiz", "general-diag"])
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--noise", default="gaussian")
    sp.add_argument("--t-grid", dest="t_grid", default="0.1:1:0.1")
    sp.add_argument("--eps-grid", dest="eps_grid", default="1e-6:1e-5:1e-6")
    common(sp)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("contraction", help="theta and eta_tv curves")
    sp.add_argument("--noise", required=True)
    sp.add_argument("--what", choices=["theta", "eta"], default="theta")
    sp.add_argument("--t-grid", dest="t_grid", default="0:4:0.05")
    common(sp)
    sp.set_defaults(func=_cmd_contraction)

    sp = sub.add_parser("deconv", help="deconvolution bounds for a (P, Q) pair")
    sp.add_argument("--noise", default="gaussian")
    sp.add_argument("--p", dest="p_dist", required=True, help="CSV of P")
    sp.add_argument("--q", dest="q_dist", required=True, help="CSV of Q")
    sp.add_argument("--step", type=float, default=0.01)
    common(sp)
    sp.set_defaults(func=_cmd_deconv)

    sp = sub.add_parser("check", help="structural checks")
    sp.add_argument("what", choices=["strict"])
    sp.add_argument("--density", required=True)
    sp.add_argument("--shift-grid", dest="shift_grid", default=None)
    common(sp)
    sp.set_defaults(func=_cmd_check_strict)

    sp = sub.add_parser("verify", help="run a validation suite")
    sp.add_argument("--suite", choices=["diag", "horiz", "bsc", "deconv"], required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.add_argument("--config", default=None)
    sp.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        args = _apply_config(args, argv)
        return args.func(args)
    except Exception as e:
        sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
