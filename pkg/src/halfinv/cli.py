"""Batch front end.

One JSON config file describes a job; subcommands pick the pipeline:

  forward      eigenvalues and norming constants of (sigma, boundary)
  phi0         transformation kernel and phi0 from sigma0 on (0,1/2)
  check        solvability certificate for (sigma0, Lambda)
  reconstruct  full half-inverse reconstruction
  roundtrip    reconstruct, then re-solve the forward problem and compare
  example      closed-form fixture tables for the gamma family

Outputs are CSV (12 significant digits) and JSON, written to --output or
the config's "output" directory.  Everything is deterministic: the same
config produces byte-identical files.  Exit codes: 0 success, 1 bad
config, 2 solvability gate failed (the report is still written), 3
numerical failure.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import basis, forward, glm, oracle, transform
from .core import GridSpec, Primitive, SampledFunction, SpectralSequence
from .errors import (ConfigError, HalfInvError, NumericalError, PoleReached,
                     Unsolvable)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the exit table reserves 2 for
    # solvability, so remap to ConfigError -> 1
    def error(self, message):
        raise ConfigError(message)


def _threads():
    raw = os.environ.get("HALFINV_THREADS")
    if raw is None:
        return 1
    try:
        k = int(raw)
    except ValueError:
        raise ConfigError("HALFINV_THREADS must be an integer, got %r" % raw)
    if k < 0:
        raise ConfigError("HALFINV_THREADS must be >= 0")
    return k if k > 0 else (os.cpu_count() or 1)


def _load_config(path):
    try:
        with open(path, "r") as fh:
            return json.load(fh)
    except OSError as e:
        raise ConfigError("cannot read config %s: %s" % (path, e))
    except ValueError as e:
        raise ConfigError("config %s is not valid JSON: %s" % (path, e))


def _load_samples(path):
    try:
        with open(path, "r") as fh:
            first = fh.readline()
        skip = 1
        try:
            float(first.split(",")[0])
            skip = 0
        except ValueError:
            pass  # header line
        table = np.loadtxt(path, delimiter=",", comments="#", ndmin=2,
                           skiprows=skip)
    except OSError as e:
        raise ConfigError("cannot read sample file %s: %s" % (path, e))
    except ValueError as e:
        raise ConfigError("sample file %s is not two-column CSV: %s"
                          % (path, e))
    if table.ndim != 2 or table.shape[1] != 2 or table.shape[0] < 2:
        raise ConfigError("sample file %s must have two columns and at "
                          "least two rows" % path)
    x, v = table[:, 0], table[:, 1]
    if np.any(np.diff(x) <= 0.0):
        raise ConfigError("sample file %s: x must be strictly increasing"
                          % path)
    return x, v


def _reject_unknown(spec, allowed, what):
    # a misspelled key would otherwise fall back to a default and run a
    # different job than the user wrote down
    extra = sorted(set(spec) - allowed)
    if extra:
        raise ConfigError("unknown %s key(s): %s" % (what, ", ".join(extra)))


def _sigma_from_config(spec, grid):
    """Build the Primitive named by the config on the working grid."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError('sigma0 must be an object with a "type" field')
    _reject_unknown(spec, {"type", "gamma", "path"}, "sigma0")
    kind = spec["type"]
    if kind == "zero":
        return Primitive.zero()
    if kind == "example_gamma":
        if "gamma" not in spec:
            raise ConfigError("example_gamma needs a gamma value")
        return Primitive.example_gamma(float(spec["gamma"]))
    if kind in ("sampled", "antiderivative"):
        if "path" not in spec:
            raise ConfigError("%s needs a sample file path" % kind)
        x, v = _load_samples(spec["path"])
        vals = np.interp(grid.nodes, x, v)
        f = SampledFunction(grid, vals)
        if kind == "sampled":
            return Primitive.sampled(f)
        return Primitive.antiderivative_of(f)
    raise ConfigError("unknown sigma0 type %r" % kind)


def _spectrum_from_config(spec):
    if spec is None:
        return SpectralSequence.harmonic()
    if not isinstance(spec, dict):
        raise ConfigError("spectrum must be an object")
    _reject_unknown(spec, {"head", "tail", "c"}, "spectrum")
    head = spec.get("head", [0.0])
    tail = spec.get("tail", "exact_pi")
    c = float(spec.get("c", 0.0))
    return SpectralSequence(head, tail, c)


def _boundary_from_config(spec):
    if spec is None:
        return forward.BoundaryParam.robin(0.0)
    if not isinstance(spec, dict):
        raise ConfigError("boundary must be an object")
    _reject_unknown(spec, {"kind", "h"}, "boundary")
    kind = spec.get("kind", "robin")
    if kind == "robin":
        return forward.BoundaryParam.robin(float(spec.get("h", 0.0)))
    if kind == "dirichlet":
        return forward.BoundaryParam.dirichlet()
    raise ConfigError("boundary kind must be robin or dirichlet, got %r"
                      % kind)


def _grid_size(cfg, default=257):
    n = int(cfg.get("grid", default))
    if n < 3 or n % 2 == 0:
        raise ConfigError("grid must be an odd node count >= 3, got %d" % n)
    return n


def _fmt(x):
    return "%.12g" % float(x)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _report_dict(report):
    return {
        "solvable": bool(report.solvable),
        "marginal": bool(report.marginal),
        "min_alpha": float(report.min_alpha),
        "expansion_residual": float(report.expansion_residual),
        "alpha_head": [float(a) for a in report.alpha.head],
        "beta_head": [float(b) for b in report.beta.head],
    }


def _cmd_forward(cfg, outdir):
    n = _grid_size(cfg)
    grid = GridSpec(n, 0.0, 1.0)
    sigma = _sigma_from_config(cfg.get("sigma0", {"type": "zero"}), grid)
    bc = _boundary_from_config(cfg.get("boundary"))
    count = int(cfg.get("count", 10))
    lams = forward.eigenvalues(sigma, bc, count, grid)
    alphas = forward.norming_constants(sigma, bc, lams, grid)
    _write_csv(os.path.join(outdir, "forward.csv"),
               ["n", "lambda", "alpha"],
               [(k, lams[k], alphas[k]) for k in range(count)])
    return 0


def _half_pipeline(cfg, threads):
    """sigma0 on (0,1/2) -> kernel -> phi0, shared by phi0 and check."""
    n = _grid_size(cfg)
    half = GridSpec(n, 0.0, 0.5)
    sigma0 = _sigma_from_config(cfg.get("sigma0", {"type": "zero"}), half)
    method = cfg.get("kernel_method", "auto")
    if method == "auto":
        method = ("goursat" if sigma0.kind == "antiderivative"
                  else "collocation")
    if method == "goursat":
        if sigma0.kind != "antiderivative":
            raise ConfigError("goursat needs sigma0 of type antiderivative")
        kern = transform.goursat_kernel(sigma0.q, half)
    elif method == "collocation":
        kern = transform.collocation_kernel(sigma0, half, threads=threads)
    else:
        raise ConfigError("kernel_method must be auto, goursat or "
                          "collocation, got %r" % method)
    return sigma0, transform.phi0(sigma0, kern)


def _cmd_phi0(cfg, outdir):
    _, ph = _half_pipeline(cfg, _threads())
    _write_csv(os.path.join(outdir, "phi0.csv"), ["x", "phi0"],
               zip(ph.grid.nodes, ph.values))
    return 0


def _cmd_check(cfg, outdir):
    threads = _threads()
    lam = _spectrum_from_config(cfg.get("spectrum"))
    sigma0, ph = _half_pipeline(cfg, threads)
    trunc = cfg.get("truncation")
    report = basis.membership_check(ph, lam, trunc)
    out = _report_dict(report)
    out["regularity"] = basis.regularity_diagnostic(report, lam)
    if sigma0.kind == "antiderivative":
        out["local_certificate"] = basis.local_existence_check(sigma0.q, lam)
    _write_json(os.path.join(outdir, "check.json"), out)
    return 0 if report.solvable else 2


def _reconstruct(cfg, outdir):
    threads = _threads()
    lam = _spectrum_from_config(cfg.get("spectrum"))
    half = GridSpec(_grid_size(cfg), 0.0, 0.5)
    sigma0 = _sigma_from_config(cfg.get("sigma0", {"type": "zero"}), half)
    rc = {
        "grid": _grid_size(cfg),
        "truncation": cfg.get("truncation"),
        "kernel_method": cfg.get("kernel_method", "auto"),
        "threads": threads,
    }
    try:
        res = glm.reconstruct(sigma0, lam, rc)
    except Unsolvable as e:
        out = {"error": "unsolvable", "message": str(e)}
        if e.report is not None:
            out["report"] = _report_dict(e.report)
        _write_json(os.path.join(outdir, "reconstruct.json"), out)
        return None, 2
    _write_csv(os.path.join(outdir, "sigma.csv"), ["x", "sigma"],
               zip(res.sigma.grid.nodes, res.sigma.values))
    out = {
        "h": float(res.h),
        "diagnostics": {k: float(v) for k, v in res.diagnostics.items()},
        "report": _report_dict(res.report),
    }
    _write_json(os.path.join(outdir, "reconstruct.json"), out)
    return res, 0


def _cmd_reconstruct(cfg, outdir):
    _, code = _reconstruct(cfg, outdir)
    return code


def _cmd_roundtrip(cfg, outdir):
    res, code = _reconstruct(cfg, outdir)
    if code:
        return code
    lam = _spectrum_from_config(cfg.get("spectrum"))
    count = int(cfg.get("count", lam.head.size))
    bc = forward.BoundaryParam.robin(res.h)
    lams = forward.eigenvalues(res.sigma, bc, count,
                               res.sigma.grid.refine())
    target = lam.lambdas(count)
    _write_csv(os.path.join(outdir, "roundtrip.csv"),
               ["n", "lambda_target", "lambda_recovered", "abs_error"],
               [(k, target[k], lams[k], abs(lams[k] - target[k]))
                for k in range(count)])
    return 0


def _cmd_example(cfg, outdir):
    if "gamma" not in cfg:
        raise ConfigError("example needs a gamma value in the config")
    g = float(cfg["gamma"])
    n = _grid_size(cfg, default=65)
    grid = GridSpec(n, 0.0, 1.0)
    x = grid.nodes
    _write_csv(os.path.join(outdir, "example.csv"),
               ["x", "sigma", "w0"],
               zip(x, oracle.sigma_gamma(g, x),
                   oracle.eigenfunction_gamma(g, 0, x)))
    meta = {"gamma": g, "solvable": g < 1.0,
            "h": oracle.h_gamma(g) if g < 1.0 else None}
    _write_json(os.path.join(outdir, "example.json"), meta)
    return 0


_COMMANDS = {
    "forward": _cmd_forward,
    "phi0": _cmd_phi0,
    "check": _cmd_check,
    "reconstruct": _cmd_reconstruct,
    "roundtrip": _cmd_roundtrip,
    "example": _cmd_example,
}

_BASE_KEYS = {"command", "output", "grid"}
_KEYS = {
    "forward": _BASE_KEYS | {"sigma0", "boundary", "count"},
    "phi0": _BASE_KEYS | {"sigma0", "kernel_method"},
    "check": _BASE_KEYS | {"sigma0", "kernel_method", "spectrum",
                           "truncation"},
    "reconstruct": _BASE_KEYS | {"sigma0", "kernel_method", "spectrum",
                                 "truncation"},
    "roundtrip": _BASE_KEYS | {"sigma0", "kernel_method", "spectrum",
                               "truncation", "count"},
    "example": _BASE_KEYS | {"gamma"},
}


def _run(argv):
    parser = _Parser(prog="halfinv",
                     description="half-inverse spectral problem toolkit")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="JSON job file")
    parser.add_argument("--output", help="output directory override")
    parser.add_argument("--grid", type=int, help="grid size override")
    parser.add_argument("--truncation", type=int,
                        help="basis truncation override")
    args = parser.parse_args(argv)

    _threads()  # validate the env var up front for every command
    cfg = _load_config(args.config)
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    if "command" in cfg and cfg["command"] != args.command:
        raise ConfigError("config names command %r but %r was requested"
                          % (cfg["command"], args.command))
    _reject_unknown(cfg, _KEYS[args.command], args.command + " config")
    if args.grid is not None:
        cfg["grid"] = args.grid
    if args.truncation is not None:
        cfg["truncation"] = args.truncation
    outdir = args.output or cfg.get("output", ".")
    os.makedirs(outdir, exist_ok=True)
    return _COMMANDS[args.command](cfg, outdir)


def main(argv=None):
    try:
        return _run(sys.argv[1:] if argv is None else argv)
    except (ConfigError, PoleReached) as e:
        print("halfinv: config error: %s" % e, file=sys.stderr)
        return 1
    except Unsolvable as e:
        print("halfinv: unsolvable: %s" % e, file=sys.stderr)
        return 2
    except NumericalError as e:
        print("halfinv: numerical failure: %s" % e, file=sys.stderr)
        return 3
    except HalfInvError as e:
        print("halfinv: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
