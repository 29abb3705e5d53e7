"""Command-line entry point: ``fracorlicz {analyze,bound,solve,verify}``.

Exit codes: 0 success, 1 verification failure, 2 invalid config,
3 solver nonconvergence (diagnostics are still written).
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import bounds as bd
from . import matuszewska as mz
from . import report as rp
from . import spectral as sp
from . import verify as vf
from .config import RunConfig, load_config
from .errors import ConfigError, NonconvergentError, OrliczError
from .young import classify_doubling

log = logging.getLogger("fracorlicz")

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_CONFIG, EXIT_NONCONVERGENT = 0, 1, 2, 3
SWEEP_FACTORS = np.logspace(-1, 1, 9)


def _out_dir(args, cfg: RunConfig | None) -> Path:
    if args.out:
        return Path(args.out)
    if cfg is not None and "dir" in cfg.outputs:
        return Path(cfg.outputs["dir"])
    return Path("fracorlicz_out")


def cmd_analyze(cfg: RunConfig, args) -> tuple[int, dict, dict]:
    f = cfg.young
    prof = mz.profile(f, numeric=False)
    body = {
        "config": cfg.echo(),
        "matuszewska": prof.to_dict(),
        "doubling": classify_doubling(f).to_dict(),
        "conditions": bd.check_conditions(f, cfg.n, cfg.s).to_dict(),
    }
    return EXIT_OK, body, {"matuszewska.csv": prof.to_csv()}


def _bound_reports(cfg: RunConfig, C: float, r: float, d: float, l1: float, linf: float):
    f, n, s = cfg.young, cfg.n, cfg.s
    return [
        bd.bound_thm1(f, n, s, r, l1, cfg.alpha_regime, C),
        bd.bound_thm2_inverse(f, n, s, r, l1, cfg.alphas[0], C, cfg.alpha_regime),
        bd.bound_diameter(f, n, s, d, linf, C),
        bd.bound_inradius_delta2(f, n, s, r, linf, C),
    ]


def cmd_bound(cfg: RunConfig, args) -> tuple[int, dict, dict]:
    dom = cfg.domain
    l1, linf = sp.weight_norms(cfg.omega, dom)
    reports = _bound_reports(cfg, cfg.calibration_C, dom.r_Omega, dom.d_Omega, l1, linf)
    doubling = classify_doubling(cfg.young)
    rescaled = []
    if doubling.delta2_global and math.isfinite(doubling.pA_plus):
        rescaled = [bd.rescale_by_pA(r, doubling.pA_plus).to_dict() for r in reports]
    body = {"config": cfg.echo(), "geometry": dom.to_dict(),
            "omega_L1": l1, "omega_Linf": linf,
            "reports": [r.to_dict() for r in reports],
            "eigenvalue_reports": rescaled}
    rows = []
    for k in SWEEP_FACTORS:
        rep = _bound_reports(cfg, cfg.calibration_C, dom.r_Omega * k, dom.d_Omega * k, l1, linf)
        rows.append([dom.r_Omega * k] + [x.value for x in rep])
    csv = rp.csv_text(["r", "thm1", "thm2_inverse", "thm2_diameter", "thm4_inradius"], rows)
    return EXIT_OK, body, {"bound_sweep.csv": csv}


def cmd_solve(cfg: RunConfig, args) -> tuple[int, dict, dict]:
    opts = sp.SolverOptions(seed=cfg.seed, n_random=cfg.n_random)
    files = {}
    results = []
    status = EXIT_OK
    warm = None
    for a in cfg.alphas:
        o = sp.SolverOptions(**{**opts.__dict__, "warm_start": warm})
        try:
            r = sp.minimize_critical_value(cfg.domain, cfg.young, cfg.omega, a, cfg.s, o)
        except NonconvergentError as exc:
            r = exc.result
            status = EXIT_NONCONVERGENT
        results.append(r)
        warm = r.minimizer.values
        files[f"minimizer_alpha_{a:g}.csv"] = r.minimizer.to_csv()
    rows = [[r.alpha, r.alpha * r.lam, r.lam, r.Lambda] for r in results]
    files["energy.csv"] = rp.csv_text(["alpha", "energy", "lambda", "Lambda"], rows)
    body = {"config": cfg.echo(), "geometry": cfg.domain.to_dict(),
            "results": [r.to_dict(include_minimizer=False) for r in results]}
    d = classify_doubling(cfg.young)
    if d.delta2_global:
        body["eigenvalue_intervals"] = [list(bd.eigenvalue_interval(r.lam, d.pA_plus))
                                        for r in results]
    if cfg.alpha0:
        try:
            a0 = sp.solve_alpha0(cfg.domain, cfg.young, cfg.omega, cfg.s, opts)
            body["alpha0"] = {"alpha0": a0.alpha0, "energy": a0.energy,
                              "target": a0.target, "evaluations": a0.evaluations}
        except NonconvergentError as exc:
            body["alpha0"] = {"error": str(exc)}
            status = EXIT_NONCONVERGENT
        except OrliczError as exc:
            body["alpha0"] = {"error": f"{type(exc).__name__}: {exc}"}
    return status, body, files


def cmd_verify(cfg, args) -> tuple[int, dict, dict]:
    res = vf.run_all(seed=args.seed if args.seed is not None else 0)
    return (EXIT_OK if res["passed"] else EXIT_VERIFY_FAILED), res, {}


COMMANDS = {"analyze": cmd_analyze, "bound": cmd_bound, "solve": cmd_solve,
            "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracorlicz",
                                description="Young functions, Matuszewska indices and "
                                            "fractional Orlicz eigenvalue bounds.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("analyze", "Matuszewska profile, doubling class, growth conditions"),
                        ("bound", "lower bounds for the critical value"),
                        ("solve", "minimize the discrete Rayleigh quotient"),
                        ("verify", "run every invariant suite")):
        sp_ = sub.add_parser(name, help=help_)
        sp_.add_argument("--config", required=(name != "verify"), help="JSON config file")
        sp_.add_argument("--seed", type=int, default=None, help="override the config seed")
        sp_.add_argument("--out", default=None, help="output directory")
        sp_.add_argument("--no-timestamp", action="store_true",
                         help="omit the generation timestamp (byte-stable reports)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cfg = None
    if args.config:
        try:
            cfg = load_config(args.config)
        except ConfigError as exc:
            print(f"invalid config: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        if args.seed is not None:
            cfg.seed = args.seed
    out = _out_dir(args, cfg)
    log.info("running %s -> %s", args.command, out)
    try:
        status, body, files = COMMANDS[args.command](cfg, args)
    except OrliczError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT if isinstance(exc, NonconvergentError) else 1
    doc = rp.envelope(args.command, body, timestamp=not args.no_timestamp)
    path = rp.write_json(out / f"{args.command}.json", doc)
    for name, text in files.items():
        rp.write_text(out / name, text)
    print(path)
    if status == EXIT_NONCONVERGENT:
        print("solver did not converge; diagnostics written", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
