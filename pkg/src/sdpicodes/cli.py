"""Command-line entry point: ``sdpicodes <subcommand> ...``.

Exit status 2 means ``verify`` found a violation; usage or input errors give 1.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import bounds, channel, code, gf, sdpi, simulate, verifier
from .errors import SdpiError, ViolationFound
from .prob_space import parse_dist
from .tensor_fn import TensorFn

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x):
    return f"{x:.12g}"


def _round(obj):
    """Round every float to 12 significant digits, recursively."""
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not math.isfinite(x) else float(_num(x))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_round(obj), sort_keys=True)


def _q(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return math.inf
    return float(t)


def _count(text: str) -> int:
    v = float(text)
    if v != int(v) or v < 0:
        raise argparse.ArgumentTypeError(f"not a count: {text}")
    return int(v)


def _load_code(path) -> code.LinearCode:
    return code.code_from_matrix(gf.read_matrix(path))


def _out(args, text: str):
    target = getattr(args, "out", "-") or "-"
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", newline="") as fh:
            fh.write(text)


# --- subcommands ----------------------------------------------------------

def cmd_lambda(args):
    lam = sdpi.lambda_opt(args.q, args.mu_star, args.rho)
    if args.json:
        print(dumps({"q": verifier.fmt_q(args.q), "mu_star": args.mu_star, "rho": args.rho,
                     "lambda": lam}))
    else:
        print(_num(lam))


def cmd_sdpi_sup(args):
    res = sdpi.sup_search(args.q, args.rho, args.alpha, grid=args.grid, seed=args.seed)
    ext = sdpi.extremal_rv(args.alpha)
    print(dumps({
        "q": verifier.fmt_q(args.q), "rho": args.rho, "alpha": args.alpha, "seed": args.seed,
        "atoms": list(res.rv.atoms), "probs": list(res.rv.probs), "value": res.value,
        "r_extremal": sdpi.r_ratio(ext, args.q, args.rho),
        "lambda_opt": sdpi.lambda_opt(args.q, 1.0 / (1.0 + args.alpha), args.rho),
    }))


def _summary(rep: verifier.CheckReport) -> str:
    status = "PASS" if rep.ok else "FAIL"
    cfg = " ".join(f"{k}={_num(v) if isinstance(v, float) else v}"
                   for k, v in sorted(_round(rep.config).items()))
    return (f"{status} {cfg} trials={rep.trials} min_margin={_num(rep.min_margin)} "
            f"violations={rep.violations} tight_failures={rep.tight_failures}")


def cmd_verify(args):
    suite = args.suite
    if suite in ("base", "tensor", "minkowski", "function") and args.seed is None \
            and not (suite == "function" and args.mode == "exact"):
        raise SdpiError("--seed is required for stochastic checks")
    dist = parse_dist(args.dist)
    if suite == "base":
        reps = [verifier.check_base_case(dist, args.q, args.rho, args.trials, args.seed)]
    elif suite == "tensor":
        reps = [verifier.check_tensor(dist, args.n, args.q, args.rho, args.trials, args.seed,
                                      lambda_override=args.lambda_override)]
    elif suite == "minkowski":
        reps = [verifier.check_minkowski(dist, args.n, args.trials, args.seed)]
    elif suite == "monotone":
        reps = verifier.monotone_suite()
    else:
        if not args.function:
            raise SdpiError("--function is required for suite 'function'")
        f = TensorFn.from_csv(args.function, dist)
        reps = [verifier.check_function(f, args.q, args.rho, lam=args.lambda_override,
                                        mode=args.mode, trials=args.trials, seed=args.seed)]
    for r in reps:
        print(_summary(r), file=sys.stderr)
    payload = [r.to_dict() for r in reps]
    print(dumps(payload if len(payload) > 1 else payload[0]))
    return EXIT_OK if all(r.ok for r in reps) else EXIT_VIOLATION


def cmd_field(args):
    F = gf.make_field(args.p, args.ell)
    out = {"p": F.p, "ell": F.ell, "k": F.k, "modulus": list(F.modulus)}
    if args.mul:
        out["mul"] = int(F.mul(*args.mul))
    if args.add:
        out["add"] = int(F.add(*args.add))
    if args.inv is not None:
        out["inv"] = int(F.inv(args.inv))
    if args.trace is not None:
        out["trace"] = int(F.trace(args.trace))
    print(dumps(out))


def cmd_code(args):
    C = _load_code(args.file)
    if args.action == "dual":
        _out(args, gf.format_matrix(C.dual().generator))
        return
    wd = code.weight_distribution(C)
    out = {
        "n": C.n, "k": C.k, "dim": C.dim,
        "d": code.min_distance(C) if C.dim else None,
        "wd": list(wd.counts),
        "dual_wd": list(code.macwilliams(wd, C.k).counts),
    }
    if args.lam is not None:
        if args.mode == "mc" and (args.seed is None or args.trials is None):
            raise SdpiError("--mode mc needs --trials and --seed")
        out["lambda"] = args.lam
        out["H_bits"] = code.erasure_entropy(C, args.lam, args.mode, args.trials, args.seed)
    print(dumps(out))


def cmd_channel(args):
    W = channel.parse_channel(args.descriptor)
    try:
        cap = channel.capacity(W)
    except SdpiError:
        cap = None
    print(dumps({"kind": W.kind, "param": W.param, "k": W.input_size, "m": W.output_size,
                 "Z": channel.bhattacharyya(W), "capacity": cap}))


def _curve_csv(ks, points) -> str:
    cs = np.linspace(0.0, 1.0, points + 1)[1:]
    rows = []
    header = ["c_e", "eta_star", "g_k"] if len(ks) == 1 else ["k", "c_e", "eta_star", "g_k"]
    for k in ks:
        for c, eta, g in bounds.gk_curve(k, cs):
            vals = [_num(c), _num(eta), _num(g)]
            rows.append(vals if len(ks) == 1 else [str(k)] + vals)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _ks(text):
    try:
        ks = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad k list {text!r}") from e
    if not ks or any(k < 2 for k in ks):
        raise argparse.ArgumentTypeError("every k must be >= 2")
    return ks


def cmd_curve(args):
    if args.points < 1:
        raise SdpiError("--points must be >= 1")
    _out(args, _curve_csv(args.k, args.points))


def cmd_bounds(args):
    kind = args.kind
    if kind == "curve":
        return cmd_curve(args)
    if not args.code:
        raise SdpiError("--code is required")
    C = _load_code(args.code)
    lam = args.lam
    if kind == "weight":
        lhs, rhs = bounds.weight_bound_margin(C, lam)
        print(dumps({"lambda": lam, "lhs_bits": lhs, "rhs_bits": rhs, "margin": rhs - lhs,
                     "holds": lhs <= rhs + 1e-9}))
    elif kind == "blockerr":
        if not args.channel:
            raise SdpiError("--channel is required")
        W = channel.parse_channel(args.channel)
        Z = channel.bhattacharyya(W)
        h = code.erasure_entropy(C, lam)
        wd = code.weight_distribution(C)
        d = code.min_distance(C)
        print(dumps({"lambda": lam, "Z": Z, "d": d, "H_bits": h,
                     "bound": bounds.block_error_bound(d, Z, C.k, lam, h),
                     "union_sum": bounds.union_bhattacharyya_sum(wd, Z)}))
    elif kind == "pue":
        if args.eta is None:
            raise SdpiError("--eta is required")
        reps = bounds.p_ue_bounds(C, lam, args.eta)
        print(dumps({name: r.to_dict() for name, r in reps.items()}))


def cmd_simulate(args):
    C = _load_code(args.code)
    W = channel.parse_channel(args.channel)
    res = simulate.monte_carlo_pb(C, W, args.trials, args.seed, tie_break=args.tie_break)
    print(dumps(res.to_dict()))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sdpicodes", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("lambda", help="optimal exponent lambda(q, mu*, rho)")
    s.add_argument("--q", type=_q, required=True)
    s.add_argument("--mu-star", type=float, required=True)
    s.add_argument("--rho", type=float, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_lambda)

    s = sub.add_parser("sdpi-sup", help="brute-force supremum of the moment ratio")
    s.add_argument("--q", type=_q, required=True)
    s.add_argument("--rho", type=float, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--grid", type=_count, default=1000)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_sdpi_sup)

    s = sub.add_parser("verify", help="randomized inequality checks")
    s.add_argument("--suite", choices=["base", "tensor", "minkowski", "monotone", "function"],
                   required=True)
    s.add_argument("--dist", default="uniform:2")
    s.add_argument("--q", type=_q, default=2.0)
    s.add_argument("--rho", type=float, default=0.5)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--trials", type=_count, default=1000)
    s.add_argument("--seed", type=int)
    s.add_argument("--lambda-override", type=float)
    s.add_argument("--function", help="CSV of f values in mixed-radix order")
    s.add_argument("--mode", choices=["exact", "mc"], default="exact")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("field", help="finite field GF(p^ell) info and arithmetic")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--mul", type=int, nargs=2)
    s.add_argument("--add", type=int, nargs=2)
    s.add_argument("--inv", type=int)
    s.add_argument("--trace", type=int)
    s.set_defaults(func=cmd_field)

    s = sub.add_parser("code", help="linear code statistics")
    s.add_argument("action", choices=["analyze", "dual"])
    s.add_argument("file")
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--mode", choices=["exact", "mc"], default="exact")
    s.add_argument("--trials", type=_count)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_code)

    s = sub.add_parser("channel", help="Bhattacharyya coefficient and capacity")
    s.add_argument("descriptor", help="kec:k:lambda, ksc:k:eta or a CSV matrix")
    s.set_defaults(func=cmd_channel)

    s = sub.add_parser("bounds", help="weight, block-error, undetected-error bounds")
    s.add_argument("kind", choices=["weight", "blockerr", "pue", "curve"])
    s.add_argument("--code")
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--channel")
    s.add_argument("--eta", type=float)
    s.add_argument("--k", type=_ks, default=[2])
    s.add_argument("--points", type=_count, default=200)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("curve", help="g_k curve as CSV")
    s.add_argument("--k", type=_ks, required=True)
    s.add_argument("--points", type=_count, default=200)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("simulate", help="Monte Carlo MAP block-error probability")
    s.add_argument("--code", required=True)
    s.add_argument("--channel", required=True)
    s.add_argument("--trials", type=_count, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--tie-break", choices=["first", "last"], default="first")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # argparse usage errors and --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        rc = args.func(args)
    except ViolationFound as e:
        print(f"violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except (SdpiError, ValueError, OSError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if rc is None else rc


if __name__ == "__main__":
    sys.exit(main())
