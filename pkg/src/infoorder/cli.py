"""Command-line entry point: ``infoorder <command> [options]``.

Exit codes: 0 success, 2 usage error, 3 ordering does not hold,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys

import numpy as np

from . import ica, majorization, measures, transforms
from .dist import GmmSpec, Gmm, SpecError, parse_spec, parse_spec_list
from .quadrature import QuadratureConfig, QuadratureError

EXIT_OK, EXIT_USAGE, EXIT_ORDER, EXIT_NUMERIC = 0, 2, 3, 4

TABLE_DEFAULT = ["norm:0,1", "laplace:1", "lognorm:0,1", "unif:0,1", "gmm:0,4,1,2,0.4"]
TABLE_COLUMNS = ["e2H_f", "e2H_fstar", "e2H_ftilde", "HstarInv2_f", "HstarInv2_fstar", "HstarInv2_ftilde"]

PANELS = {
    "a": ("mu2", (0.0, 6.0, 0.25), GmmSpec(0, 2, 1, 1, 0.5)),
    "b": ("sigma2", (0.25, 4.0, 0.25), GmmSpec(0, 2, 1, 1, 0.5)),
    "c": ("w", (0.0, 1.0, 0.05), GmmSpec(0, 2, 1, 1, 0.5)),
}
REPRS = ("f", "fstar", "ftilde")
SWEEP_MEASURES = ("epow", "hstar_inv_sq")


class UsageError(Exception):
    pass


def _g12(x):
    return f"{x:.12g}"


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _cfg(args):
    if args.tol is None:
        return None
    return QuadratureConfig(rel_tol=args.tol)


# -- table ---------------------------------------------------------------------------


def table_row(d, grid=1000, cfg=None):
    """The six Table-1 style measures of one density.

    Values for f are exact quadratures; f* and f~ are midpoint-grid
    tabulations, renormalized to unit mass.
    """
    fs = transforms.pdq(d, grid)
    ft = transforms.f_tilde(d, grid)
    return {
        "e2H_f": measures.entropy_power(d, cfg),
        "e2H_fstar": measures.entropy_power(fs),
        "e2H_ftilde": measures.entropy_power(ft),
        "HstarInv2_f": measures.h_star(d, cfg) ** -2,
        "HstarInv2_fstar": measures.h_star(fs) ** -2,
        "HstarInv2_ftilde": measures.h_star(ft) ** -2,
    }


def cmd_table(args):
    specs = args.dists or TABLE_DEFAULT
    dens = []
    for s in specs:
        dens.extend(parse_spec_list(s))
    rows = [(d, table_row(d, args.grid or 1000, _cfg(args))) for d in dens]
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dist"] + TABLE_COLUMNS + [c + "_full" for c in TABLE_COLUMNS])
        for d, r in rows:
            w.writerow([d.spec_text] + [f"{r[c]:.3f}" for c in TABLE_COLUMNS] + [_g12(r[c]) for c in TABLE_COLUMNS])
    return EXIT_OK


# -- sweep ---------------------------------------------------------------------------


def _parse_range(text):
    try:
        start, stop, step = (float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--range needs start,stop,step; got {text!r}") from None
    if not step > 0 or not start < stop:
        raise UsageError("--range needs step > 0 and start < stop")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def sweep_rows(vary, values, base: GmmSpec, reprs=REPRS, which=SWEEP_MEASURES, grid=1000, cfg=None):
    if vary not in ("mu2", "sigma2", "w"):
        raise UsageError(f"cannot vary {vary!r}")
    if vary == "w" and (min(values) < 0 or max(values) > 1):
        raise UsageError("w must stay within [0, 1]")
    rows = []
    for val in values:
        params = dict(base.__dict__)
        params[vary] = val
        d = Gmm(GmmSpec(**params))
        row = {vary: val}
        for r in reprs:
            rep = d if r == "f" else transforms.pdq(d, grid) if r == "fstar" else transforms.f_tilde(d, grid)
            c = cfg if r == "f" else None
            if "epow" in which:
                row[f"epow_{r}"] = measures.entropy_power(rep, c)
            if "hstar_inv_sq" in which:
                row[f"hstar_inv_sq_{r}"] = measures.h_star(rep, c) ** -2
        rows.append(row)
    return rows


def cmd_sweep(args):
    if args.panel:
        vary, rng, base = PANELS[args.panel]
        values = _parse_range(args.range) if args.range else _parse_range(",".join(map(str, rng)))
    else:
        if not (args.vary and args.range):
            raise UsageError("sweep needs --panel or both --vary and --range")
        vary, values = args.vary, _parse_range(args.range)
        base = PANELS["a"][2]
    if args.vary and args.panel and args.vary != vary:
        raise UsageError(f"panel {args.panel} varies {vary}, not {args.vary}")
    if args.fixed:
        try:
            vals = [float(t) for t in args.fixed.split(",")]
            base = GmmSpec(*vals)
        except (TypeError, ValueError) as e:
            raise UsageError(f"--fixed needs mu1,mu2,sigma1,sigma2,w: {e}") from None
    reprs = _subset(args.repr, REPRS, "--repr")
    which = _subset(args.measures, SWEEP_MEASURES, "--measures")
    rows = sweep_rows(vary, values, base, reprs, which, args.grid or 1000, _cfg(args))
    cols = list(rows[0])
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_g12(r[c]) for c in cols])
    return EXIT_OK


def _subset(text, allowed, flag):
    if not text:
        return allowed
    items = tuple(t.strip() for t in text.split(","))
    bad = [t for t in items if t not in allowed]
    if bad:
        raise UsageError(f"{flag}: unknown entries {bad}; choose from {list(allowed)}")
    return items


# -- transform -------------------------------------------------------------------------


def cmd_transform(args):
    d = parse_spec(args.dist)
    grid = args.grid or 1000
    if grid < 128:
        raise UsageError("--grid must be at least 128")
    if args.which == "fstar":
        g = transforms.pdq_density(d).to_grid(grid)
    elif args.which == "ftilde":
        g = transforms.f_tilde(d, grid)
    else:
        if not args.ref:
            raise UsageError("fcolong needs --ref SPEC")
        g = transforms.f_colon_g(d, parse_spec(args.ref), grid)
    with _open_out(args.out) as fh:
        g.to_csv(fh)
    return EXIT_OK


# -- ica -----------------------------------------------------------------------------------


def cmd_ica(args):
    try:
        idx = ica.ProjectionIndex.parse(args.index)
    except ValueError as e:
        raise UsageError(str(e)) from None
    seed = args.seed if args.seed is not None else 0
    tol = args.tol if args.tol is not None else 1e-6
    mixing = None
    if args.data:
        X = ica.read_matrix(args.data)
    else:
        sources = parse_spec_list(args.sources)
        X, mixing, _ = ica.simulate_mixture(sources, "random", args.n, seed)
    res = ica.run_pipeline(X, idx, args.q, seed, args.max_iter, tol, mixing=mixing)
    with _open_out(args.out) as fh:
        fh.write(res.to_json() + "\n")
    if not all(res.converged):
        print("warning: some components did not converge", file=sys.stderr)
    return EXIT_OK


# -- order ---------------------------------------------------------------------------------


def cmd_order(args):
    if args.pvec:
        if len(args.pvec) != 2 or args.left or args.right:
            raise UsageError("order --pvec needs exactly two vectors and no distribution specs")
        p, q = (_pvec(t) for t in args.pvec)
        holds = majorization.majorizes(p, q)
        state = "holds" if holds else "does not hold"
        text = f"majorization p < q {state}"
    else:
        if not (args.left and args.right):
            raise UsageError("order needs LEFT and RIGHT specs (or two --pvec vectors)")
        dF, dG = parse_spec(args.left), parse_spec(args.right)
        if args.check == "dilation":
            v = transforms.dilation_check(dF, dG, cfg=_cfg(args))
        else:
            v = transforms.check_ordering(dF, dG, args.check, grid=args.grid or 401)
        holds, text = v.holds, str(v)
    with _open_out(args.out) as fh:
        fh.write(text + "\n")
    return EXIT_OK if holds else EXIT_ORDER


def _pvec(text):
    try:
        return majorization.parse_pvec(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


# -- measures ------------------------------------------------------------------------------


def cmd_measures(args):
    if args.pvec:
        if args.dist:
            raise UsageError("measures takes either a spec or --pvec, not both")
        if len(args.pvec) != 1:
            raise UsageError("measures takes a single --pvec")
        p = _pvec(args.pvec[0])
        H, hs, hm = majorization.discrete_measures(p)
        out = {"H": H, "H_bits": majorization.bits(H), "H_star": hs, "H_mode": hm}
    else:
        if not args.dist:
            raise UsageError("measures needs a distribution spec")
        out = measures.report(parse_spec(args.dist), _cfg(args)).to_dict()
    out = {k: (v if not isinstance(v, float) or math.isfinite(v) else str(v)) for k, v in out.items()}
    with _open_out(args.out) as fh:
        fh.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------


def _global_flags(default):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=default, help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=default, help="random seed")
    common.add_argument("--grid", type=int, default=default, help="grid size for tabulated transforms")
    common.add_argument("--tol", type=float, default=default, help="relative quadrature / convergence tolerance")
    return common


def build_parser():
    # flags are accepted before or after the command; the subcommand copy
    # suppresses its defaults so it cannot clobber a value given up front
    top = _global_flags(None)
    common = _global_flags(argparse.SUPPRESS)

    ap = argparse.ArgumentParser(prog="infoorder", parents=[top],
                                 description="Information measures, orderings and projection pursuit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="power entropy and [H*]^-2 for f, f*, f~")
    p.add_argument("dists", nargs="*", help="distribution specs, e.g. norm:0,1 gmm:0,4,1,2,0.4")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sweep", parents=[common], help="GMM parameter sweeps")
    p.add_argument("--panel", choices=sorted(PANELS))
    p.add_argument("--vary", choices=("mu2", "sigma2", "w"))
    p.add_argument("--range", help="start,stop,step")
    p.add_argument("--fixed", help="base GMM mu1,mu2,sigma1,sigma2,w")
    p.add_argument("--repr", help="comma list from f,fstar,ftilde")
    p.add_argument("--measures", help="comma list from epow,hstar_inv_sq")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("transform", parents=[common], help="tabulate f*, f~ or f:g on (0, 1)")
    p.add_argument("dist")
    p.add_argument("--which", choices=("fstar", "ftilde", "fcolong"), default="fstar")
    p.add_argument("--ref", help="reference spec g for fcolong")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("ica", parents=[common], help="simulate, whiten and run projection pursuit")
    p.add_argument("--sources", default="unif:0,1,laplace:1")
    p.add_argument("--data", help="headerless CSV data matrix instead of a simulation")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--index", default="kappa4")
    p.add_argument("--q", type=int)
    p.add_argument("--max-iter", type=int, default=500)
    p.set_defaults(func=cmd_ica)

    p = sub.add_parser("order", parents=[common], help="check a partial ordering")
    p.add_argument("left", nargs="?")
    p.add_argument("right", nargs="?")
    p.add_argument("--check", default="dispersion",
                   choices=("location", "dispersion", "skewness", "kurtosis", "information", "dilation"))
    p.add_argument("--pvec", action="append", help="probability vector (give twice for majorization)")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("measures", parents=[common], help="all scalar measures of one density")
    p.add_argument("dist", nargs="?")
    p.add_argument("--pvec", action="append", help="discrete distribution instead of a spec")
    p.set_defaults(func=cmd_measures)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SpecError) as e:
        print(f"infoorder {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, ArithmeticError, np.linalg.LinAlgError, ValueError) as e:
        print(f"infoorder {args.command}: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
