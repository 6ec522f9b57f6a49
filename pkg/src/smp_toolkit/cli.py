"""Command-line front end.

Every command prints deterministic JSON (or CSV for ``charfn`` without
``--out``). Exit codes: 0 success, 2 bad input, 3 precondition refused,
4 numerical failure.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import characteristic as ch
from . import counterexample as ce
from . import monotonicity as mono
from . import radial
from . import subequations as sub
from .errors import InputError, PreconditionError, Refusal
from .functions import parse_g, parse_scalar_fn
from .serialize import dumps, fmt_float

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_NUMERIC = 0, 2, 3, 4


def _default_seed():
    raw = os.environ.get("SMP_TOOLKIT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"SMP_TOOLKIT_SEED must be an integer, got {raw!r}") from None


def _scalar_fn(args):
    kw = {}
    if args.c is not None:
        kw["c"] = args.c
    if args.beta is not None:
        kw["beta"] = args.beta
    return parse_scalar_fn(args.f, **kw)


def _g_fn(args):
    kw = {}
    if args.alpha is not None:
        kw["alpha"] = args.alpha
    if args.delta is not None:
        kw["delta"] = args.delta
    return parse_g(args.g, **kw)


def build_spec(args):
    """Catalog spec from ``--spec file.json`` or ``--kind`` plus parameters."""
    if args.spec:
        spec = sub.from_json(Path(args.spec).read_text())
    else:
        if not args.kind:
            raise InputError("either --kind or --spec is required")
        n = args.dim
        kind = args.kind

        def need(name):
            v = getattr(args, name)
            if v is None:
                raise InputError(f"--kind {kind} needs --{name}")
            return v

        if kind == "pos":
            spec = sub.Pos(n)
        elif kind == "subaffine":
            spec = sub.Subaffine(n)
        elif kind == "minmax-cone":
            spec = sub.MinMaxCone(n, need("alpha"))
        elif kind == "pucci":
            spec = sub.Pucci(n, need("lam0"), need("Lam"))
        elif kind == "p-delta":
            spec = sub.PDelta(n, need("delta"))
        elif kind == "sigma-psi-k":
            spec = sub.SigmaPsiK(n, need("a"), int(need("k")))
        elif kind in ("minmax-f", "min2-f"):
            f = parse_scalar_fn(args.f or "sqrt")
            spec = sub.MinMaxF(n, f) if kind == "minmax-f" else sub.MinTwoF(n, f)
        elif kind == "mg":
            spec = sub.Mg(n, _g_fn(args))
        elif kind == "halfspace":
            spec = sub.HalfSpace(n, args.c if args.c is not None else 0.0)
        else:
            raise InputError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    return sub.Dual(spec) if args.dual else spec


KINDS = ("pos", "subaffine", "minmax-cone", "pucci", "p-delta", "sigma-psi-k",
         "minmax-f", "min2-f", "mg", "halfspace")


def _emit(args, name, payload):
    text = dumps(payload)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(text + "\n")
    print(text)


def cmd_classify(args):
    spec = build_spec(args)
    c = ch.classify(spec, seed=args.seed)
    _emit(args, "classify", {"spec": spec.to_dict(), **c.to_dict()})
    return EXIT_OK


def _grid(args):
    if args.points < 2 or not 0 < args.lambda_min < args.lambda_max:
        raise InputError("need points >= 2 and 0 < lambda-min < lambda-max")
    grid = ch.default_grid(args.points, args.lambda_min, args.lambda_max)
    if args.negative:
        grid = np.concatenate([-grid[:0:-1], grid])
    return grid


def cmd_charfn(args):
    spec = build_spec(args)
    if args.tol <= 0 or args.mu_cap <= 0:
        raise InputError("--tol and --mu-cap must be positive")
    table = ch.char_fn(spec, args.side, _grid(args), e_samples=args.e_samples,
                       mu_cap=args.mu_cap, tol=args.tol, seed=args.seed)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = table.to_csv(out / "charfn.csv")
        print(dumps({"table": str(path), "meta": str(path.with_suffix(".meta.json")),
                     "rows": int(table.lambdas.size), "monotone": table.is_monotone()}))
    else:
        sys.stdout.write("lambda,f_value\n")
        for lam, v in zip(table.lambdas, table.values):
            sys.stdout.write(f"{fmt_float(lam)},{fmt_float(v)}\n")
    return EXIT_OK


def cmd_smp(args):
    spec = build_spec(args)
    v = ch.smp_verdict(spec, seed=args.seed)
    _emit(args, "smp", {"spec": spec.to_dict(), **v.to_dict()})
    return EXIT_OK


def cmd_counterexample(args):
    if args.f == "hopf":
        beta = 10.0 if args.beta is None else args.beta
        R = 1.0 if args.R is None else args.R
        rf = ce.hopf_function(beta, R, points=args.points)
        res = radial.radial_residual(ce.hopf_characteristic(beta), rf)
        summary = {"kind": "hopf", "beta": beta, "R": R, "points": args.points,
                   "max_residual": float(np.max(np.abs(res))),
                   "increasing": bool(np.all(rf.psi1 > 0)),
                   "psi_at_R": float(ce.hopf_function(beta, R, grid=[R, 2.0 * R]).psi[0])}
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            rf.to_csv(out / "psi.csv")
        _emit(args, "counterexample", summary)
        return EXIT_OK
    f = _scalar_fn(args)
    try:
        rec = ce.build_counterexample(f, m=args.m, y0=args.y0, n_points=args.points)
    except Refusal as exc:
        _emit(args, "counterexample", {"refused": str(exc), "integral": exc.witness})
        return EXIT_PRECONDITION
    res = radial.radial_residual(f, rec.psi)
    inside = (rec.psi.ts > 1.0) & (rec.psi.ts < rec.t0)
    up = radial.verify_monotone_radial(f, rec.psi, "up")
    summary = {
        "kind": "construction", **rec.to_dict(),
        "max_residual": float(np.nanmax(np.abs(res[inside]))),
        "monotone_up": up.to_dict(),
        "smp_witness": radial.smp_witness_check(rec.psi),
    }
    if args.out:
        rec.write_bundle(args.out)
    _emit(args, "counterexample", summary)
    return EXIT_OK


def cmd_scp(args):
    if args.dim < 2:
        raise InputError("--dim must be >= 2")
    g = _g_fn(args)
    rep = mono.scp_report(g, args.dim, trials=args.trials, seed=args.seed)
    payload = rep.to_dict()
    if not args.full:
        payload.pop("dual_char")
    _emit(args, "scp", payload)
    return EXIT_OK


def _add_spec_args(p):
    p.add_argument("--kind", choices=KINDS, help="catalog entry")
    p.add_argument("--spec", help="JSON spec file {kind, dim, params}")
    p.add_argument("--dim", type=int, default=3, help="matrix dimension n (default 3)")
    p.add_argument("--dual", action="store_true", help="use the Dirichlet dual of the spec")
    p.add_argument("--alpha", type=float, help="minmax-cone alpha; loginv alpha")
    p.add_argument("--a", type=float, help="sigma-psi-k exponent a")
    p.add_argument("--k", type=int, help="sigma-psi-k order k")
    p.add_argument("--c", type=float, help="halfspace level; linear coefficient")
    p.add_argument("--delta", type=float, help="p-delta delta; linear g slope")
    p.add_argument("--lam0", type=float, help="pucci lower ellipticity constant")
    p.add_argument("--Lam", type=float, help="pucci upper ellipticity constant")
    p.add_argument("--f", help="characteristic f for minmax-f/min2-f (sqrt, linear)")
    p.add_argument("--g", default="sqrt", help="g for mg (sqrt, rational, linear, loginv)")


def make_parser():
    parser = argparse.ArgumentParser(prog="smp-toolkit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: $SMP_TOOLKIT_SEED or 0)")
    common.add_argument("--out", help="output directory for JSON/CSV files")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", parents=[common], help="Generic / Borderline / Counterexample")
    _add_spec_args(p)
    p.set_defaults(func=cmd_classify)

    p = subs.add_parser("charfn", parents=[common], help="tabulate a characteristic function")
    _add_spec_args(p)
    p.add_argument("--side", choices=("upper", "lower"), default="upper")
    p.add_argument("--points", type=int, default=200, help="geometric grid points (default 200)")
    p.add_argument("--lambda-min", type=float, default=1e-8)
    p.add_argument("--lambda-max", type=float, default=10.0)
    p.add_argument("--negative", action="store_true", help="mirror the grid to negative lambda")
    p.add_argument("--e-samples", type=int, default=None,
                   help="random directions besides the axes (default 1 if invariant, else 64)")
    p.add_argument("--tol", type=float, default=1e-10, help="bisection tolerance (default 1e-10)")
    p.add_argument("--mu-cap", type=float, default=1e12, help="bracket cap (default 1e12)")
    p.set_defaults(func=cmd_charfn)

    p = subs.add_parser("smp", parents=[common], help="strong maximum principle verdict")
    _add_spec_args(p)
    p.set_defaults(func=cmd_smp)

    p = subs.add_parser("counterexample", parents=[common], help="radial SMP violator or Hopf profile")
    p.add_argument("--f", default="sqrt", help="sqrt, linear, power, hopf (default sqrt)")
    p.add_argument("--c", type=float, help="coefficient of f")
    p.add_argument("--m", type=float, default=0.0, help="plateau value (default 0)")
    p.add_argument("--y0", type=float, default=1.0, help="top of the y range (default 1)")
    p.add_argument("--points", type=int, default=4096, help="grid points (default 4096)")
    p.add_argument("--beta", type=float, help="Hopf beta (default 10)")
    p.add_argument("--R", type=float, help="Hopf radius (default 1)")
    p.set_defaults(func=cmd_counterexample)

    p = subs.add_parser("scp", parents=[common], help="strong comparison report for M(g)")
    p.add_argument("--g", default="loginv", help="sqrt, rational, linear, loginv (default loginv)")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--alpha", type=float, help="loginv alpha (default 1)")
    p.add_argument("--delta", type=float, help="linear g slope (default 1)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--full", action="store_true", help="include the dual characteristic table")
    p.set_defaults(func=cmd_scp)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        if getattr(args, "dim", 1) < 1:
            raise InputError("--dim must be >= 1")
        return args.func(args)
    except PreconditionError as exc:
        print(json.dumps({"error": "precondition", "message": str(exc)}), file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "input", "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(json.dumps({"error": "numerical", "message": str(exc)}), file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
