"""Command line entry point: ``frechet-er <command> [options]``.

Exit status is 0 on success, 1 on invalid input (a one-line JSON error
``{"code": ..., "message": ...}`` goes to stderr) and 2 when a verification
step fails.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import SCHEMA_VERSION, __version__

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
IDENTITY_TOL = 1e-9


class UsageError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        code = "UnknownCommand" if "invalid choice" in message and "command" in message else "InvalidFlag"
        raise UsageError(code, message)


def dumps(obj, indent: int = 2) -> str:
    """JSON with every float written to 17 significant digits (NaN and
    infinities become null)."""
    return _encode(obj, indent, 0)


def _encode(obj, indent, level):
    import numpy as np

    if isinstance(obj, (bool, type(None), str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _probes(text):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probe list {text!r}") from None


def _grid(text):
    """``start:stop:step`` (inclusive) or a comma separated list."""
    try:
        if ":" in text:
            lo, hi, step = (float(tok) for tok in text.split(":"))
            if step <= 0:
                raise ValueError
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return [round(lo + i * step, 12) for i in range(count)]
        return [float(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p grid {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="root seed for every random draw")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--out", default=None, help="write the report to this path")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help="worker threads (default: all cores)")

    parser = _Parser(prog="frechet-er", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"frechet-er {__version__} (schema {SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True,
                                parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("mean-set", "describe the Frechet mean set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--emit-graph", default=None, help="write the canonical mean graph here")

    p = add("moments", "exact mean and variance of the squared distance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)

    p = add("sample", "draw one G(n, p) graph in the text graph format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--replica", type=int, default=0)

    p = add("simulate", "replicated squared distances with a distributional test")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--test", required=True,
                   choices=["moments", "poisson", "normal", "sqrt-normal", "lln"])
    p.add_argument("--case", default=None, choices=["very-sparse", "sparse", "dense"])
    p.add_argument("--scaling", default="exact", choices=["exact", "asymptotic"])
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--alpha", type=float, default=0.01)

    p = add("stein-check", "difference identities and V statistics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--replicas", type=int, default=1000)
    p.add_argument("--identity-samples", type=int, default=10)

    p = add("oracle", "exhaustive checks on small graphs")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--p-grid", type=_grid, default=_grid("0.05:0.95:0.05"))

    p = add("regime", "classify a named schedule p(n)")
    p.add_argument("--schedule", required=True,
                   choices=["constant", "c-over-n", "lambda-over-n2", "power"])
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--probes", type=_probes, required=True)
    return parser


def _configure_threads(threads):
    if threads is None:
        return
    if "numba" not in sys.modules:
        # the pool size is fixed when numba is first imported
        current = int(os.environ.get("NUMBA_NUM_THREADS", "0") or 0)
        os.environ["NUMBA_NUM_THREADS"] = str(max(current, threads))
    from . import kernels

    kernels.set_threads(threads)


def _text(report, prefix="") -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(_text(value, prefix + key + "."))
        else:
            if isinstance(value, float):
                value = format(value, ".17g")
            lines.append(f"{prefix}{key}: {value}")
    return "\n".join(lines)


def _emit(args, report, force_json=False):
    body = dumps(report) if (args.json or force_json) else _text(report)
    body += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _stamp(report: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, **report}


def cmd_mean_set(args):
    from .er_model import ErParams
    from .frechet import construct_mean, mean_set_spec
    from .graph import write_graph

    params = ErParams(args.n, args.p)
    spec = mean_set_spec(params)
    report = spec.to_dict()
    if args.emit_graph:
        write_graph(construct_mean(params), args.emit_graph)
        report["graph_file"] = args.emit_graph
    _emit(args, _stamp(report), force_json=True)
    return EXIT_OK


def cmd_moments(args):
    from .er_model import ErParams
    from .moments import moments

    _emit(args, _stamp(moments(ErParams(args.n, args.p)).to_dict()))
    return EXIT_OK


def cmd_sample(args):
    from .er_model import ErParams, sample
    from .graph import format_graph

    params = ErParams(args.n, args.p)
    g = sample(params, 0 if args.seed is None else args.seed, args.replica)
    text = format_graph(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _require_seed(args):
    if args.seed is None:
        raise UsageError("InvalidFlag", f"{args.command} requires --seed")


def cmd_simulate(args):
    _require_seed(args)
    from .harness import SimConfig, run

    config = SimConfig(args.n, args.p, args.replicas, args.seed, test=args.test,
                       case=args.case, scaling=args.scaling, lam=args.lam, alpha=args.alpha)
    result = run(config)
    if args.out and args.out.endswith(".csv"):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(result.to_csv())
    else:
        _emit(args, _stamp(result.to_dict()), force_json=bool(args.out))
    return EXIT_OK if result.passed else EXIT_VERIFY


def cmd_stein_check(args):
    _require_seed(args)
    from .er_model import ErParams
    from .stein import stein_check

    if args.identity_samples < 0:
        raise UsageError("InvalidFlag", "--identity-samples must be >= 0")
    params = ErParams(args.n, args.p)
    check = stein_check(params, args.seed, args.replicas, args.identity_samples)
    report = check.to_dict()
    tol = IDENTITY_TOL * max(1.0, math.sqrt(check.sigma2))
    ok_identities = max(check.max_delta_dev, check.max_prefix_dev,
                        check.telescoping_residual) <= tol
    ok_means = (abs(check.v_mean - 1) <= 3 * check.v_se
                and abs(check.v_star_mean) <= 3 * check.v_star_se)
    report.update(identity_tolerance=tol, identities_ok=ok_identities, means_ok=ok_means,
                  verdict="pass" if ok_identities and ok_means else "fail")
    _emit(args, _stamp(report), force_json=True)
    return EXIT_OK if report["verdict"] == "pass" else EXIT_VERIFY


def cmd_oracle(args):
    from .errors import TooLarge
    from .oracle import MAX_MINIMIZER_N, oracle_sweep

    if not 2 <= args.max_n <= MAX_MINIMIZER_N:
        raise TooLarge(f"--max-n must lie in 2..{MAX_MINIMIZER_N}")
    cells = oracle_sweep(args.max_n, args.p_grid)
    passed = all(c["passed"] for c in cells)
    if args.json or args.out:
        _emit(args, _stamp({"passed": passed, "cells": cells}), force_json=True)
    else:
        for c in cells:
            worst = max(c.get(k, 0.0) for k in ("closed_form_rel_dev", "mean_rel_dev", "var_rel_dev"))
            status = "PASS" if c["passed"] else "FAIL"
            sys.stdout.write(f"{status} n={c['n']} p={c['p']:g} case={c['case']} "
                             f"minimizers={c['minimizers']} worst_rel_dev={worst:.3g}\n")
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_regime(args):
    from .moments import classify_regime, schedule_from_name

    regime = classify_regime(schedule_from_name(args.schedule, args.param), args.probes)
    report = regime.to_dict()
    report.update(schedule=args.schedule, param=args.param, probes=args.probes)
    _emit(args, _stamp(report))
    return EXIT_OK


COMMANDS = {
    "mean-set": cmd_mean_set,
    "moments": cmd_moments,
    "sample": cmd_sample,
    "simulate": cmd_simulate,
    "stein-check": cmd_stein_check,
    "oracle": cmd_oracle,
    "regime": cmd_regime,
}


def _fail(code, message):
    sys.stderr.write(json.dumps({"code": code, "message": message}) + "\n")
    return EXIT_USAGE


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _configure_threads(args.threads)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(exc.code, str(exc))
    except ValueError as exc:
        # FrechetERError derives from ValueError
        return _fail(getattr(exc, "code", "InvalidFlag"), str(exc))
    except OSError as exc:
        return _fail("IOError", str(exc))


if __name__ == "__main__":
    sys.exit(main())
