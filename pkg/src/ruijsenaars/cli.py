"""Command line interface: run verification suites, evaluate primitives.

Exit codes: 0 all checks pass, 1 at least one verification failure,
2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from .errors import ConfigError, RuijsenaarsError, UnknownSuite
from .kernels import KernelContext, hat_K, hat_mu, kernel_K, measure_mu
from .params import Params, ResonanceWarning, validate
from .quadrature import QuadratureSpec
from .report import write_csv, write_json
from .suites import PRESETS, RunConfig, SUITE_NAMES, preset, run_suite
from .wavefunction import SpectralVector, psi


def _complex_arg(text: str) -> complex:
    """Parse 'RE,IM' or a bare real number."""
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def _emit_complex(value: complex) -> None:
    print(json.dumps([value.real, value.imag]))


def _params_from_args(args) -> Params:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResonanceWarning)
        if getattr(args, "omega1", None) is not None:
            return validate(args.omega1, args.omega2, args.g)
        return preset(getattr(args, "params", None) or "REAL-SYMM")


def _load_config(args) -> RunConfig:
    obj = {}
    if args.config:
        with open(args.config) as fh:
            obj = json.load(fh)
    cfg = RunConfig.from_json(obj)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.profile:
        cfg.profile = args.profile
    if args.params:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResonanceWarning)
            cfg.params = preset(args.params)
    return cfg


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    names = [args.suite] if args.suite != "all" else ["all"]
    reports = []
    for name in names:
        reports.extend(run_suite(name, cfg))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_csv(outdir / "results.csv", reports, cfg.params)
    write_json(outdir / "results.json", reports, cfg.params,
               config_echo={"suites": names, "seed": cfg.seed,
                            "profile": cfg.profile,
                            "quadrature": cfg.quadrature.to_json()})
    n_fail = sum(not r.passed for r in reports)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.check} (n={r.n}) residual={r.residual:.3e} "
              f"tol={r.tolerance:.1e} [{r.runtime_ms:.0f} ms]")
    print(f"{len(reports) - n_fail}/{len(reports)} checks passed; "
          f"results in {outdir}")
    return 0 if n_fail == 0 else 1


def cmd_eval_s2(args) -> int:
    from .double_sine import s2
    p = _params_from_args(args)
    _emit_complex(s2(args.z, p))
    return 0


def cmd_eval_kernel(args) -> int:
    ctx = KernelContext(_params_from_args(args))
    fn = {"K": kernel_K, "mu": measure_mu,
          "hatK": hat_K, "hatmu": hat_mu}[args.which]
    _emit_complex(complex(fn(args.x, ctx)))
    return 0


def cmd_eval_psi(args) -> int:
    cfg = _load_config(args)
    ctx = KernelContext(cfg.params)
    lam = SpectralVector(tuple(args.lam), args.imag_shift)
    if args.n != len(args.lam) or args.n != len(args.x):
        raise ConfigError("--n must match the lengths of --lambda and --x")
    spec = cfg.quadrature if args.config else None
    value = psi(lam, tuple(args.x), ctx, spec)
    err = (spec.tolerance if spec else
           {1: 0.0, 2: 1e-9, 3: 1e-7, 4: 1e-2}.get(args.n, 0.0))
    print(json.dumps({"value": [value.real, value.imag], "error": err}))
    return 0


def _float_list(text: str) -> list:
    return [float(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ruij",
        description="Double sine special functions, wave functions, and "
                    "verification suites for the hyperbolic quantum system")
    sub = ap.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run a named verification suite")
    pv.add_argument("suite", choices=SUITE_NAMES)
    pv.add_argument("--config", help="JSON run configuration")
    pv.add_argument("--out", default="results", help="output directory")
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--profile", choices=("full", "smoke"), default=None)
    pv.add_argument("--params", choices=tuple(PRESETS), default=None)
    pv.set_defaults(fn=cmd_verify)

    ps2 = sub.add_parser("eval-s2", help="evaluate the double sine function")
    ps2.add_argument("--z", type=_complex_arg, required=True)
    ps2.add_argument("--omega1", type=_complex_arg)
    ps2.add_argument("--omega2", type=_complex_arg)
    ps2.add_argument("--g", type=_complex_arg, default=0.5 + 0j)
    ps2.add_argument("--params", choices=tuple(PRESETS))
    ps2.set_defaults(fn=cmd_eval_s2)

    pk = sub.add_parser("eval-kernel", help="evaluate K, mu, or their duals")
    pk.add_argument("--which", choices=("K", "mu", "hatK", "hatmu"),
                    required=True)
    pk.add_argument("--x", type=_complex_arg, required=True)
    pk.add_argument("--omega1", type=_complex_arg)
    pk.add_argument("--omega2", type=_complex_arg)
    pk.add_argument("--g", type=_complex_arg, default=0.5 + 0j)
    pk.add_argument("--params", choices=tuple(PRESETS))
    pk.set_defaults(fn=cmd_eval_kernel)

    pp = sub.add_parser("eval-psi", help="evaluate the wave function")
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--lambda", dest="lam", type=_float_list, required=True,
                    help="comma-separated real spectral parts")
    pp.add_argument("--x", type=_float_list, required=True,
                    help="comma-separated coordinates")
    pp.add_argument("--imag-shift", type=float, default=0.0)
    pp.add_argument("--config", help="JSON run configuration")
    pp.add_argument("--seed", type=int, default=None)
    pp.add_argument("--profile", default=None)
    pp.add_argument("--params", choices=tuple(PRESETS), default=None)
    pp.set_defaults(fn=cmd_eval_psi)

    return ap


def main(argv=None) -> int:
    if os.environ.get("RUIJ_THREADS"):
        # cap worker threads used by the array backend
        os.environ.setdefault("OMP_NUM_THREADS", os.environ["RUIJ_THREADS"])
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.fn(args)
    except (ConfigError, UnknownSuite) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuijsenaarsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
