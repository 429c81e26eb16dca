"""Command-line front end: ``specradius {abscissa,radius,sweep,sample,generate}``.

Results go to ``--output`` (or standard output). Exit status is 0 on success,
1 when a solver fails and 2 for unreadable or invalid input; failures also
print a JSON object ``{"error", "message", "exit_code"}`` on standard error.
"""
import argparse
import csv
import io as _io
import json
import sys


from . import io
from .abscissa import abscissa_sweep, best_of_starts, convergence_rate, multistart_guesses
from .errors import InvalidStructure, ParseError, ShapeMismatch, SingularShift, SpecRadiusError
from .perturbation import PerturbationStructure
from .radius import INIT_POLICIES, stability_radius
from .sampling import cloud_to_csv, sample_pseudospectrum

EXIT_OK, EXIT_SOLVER, EXIT_INPUT = 0, 1, 2


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="specradius", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def system(sp):
        sp.add_argument("--matrix", required=True, help="Matrix Market file")
        sp.add_argument("--structure", required=True, help="structure JSON file")
        sp.add_argument("--output", "-o", help="output file (default: stdout)")
        sp.add_argument("--tol-delta", type=_positive, default=1e-3)
        sp.add_argument("--k-max", type=int, default=1000)
        sp.add_argument("--restarts", type=_nonneg_int, default=10,
                        help="random initial guesses besides the zero matrix")
        sp.add_argument("--seed", type=int, default=0)

    a = sub.add_parser("abscissa", help="worst-case perturbation at one energy")
    system(a)
    a.add_argument("--epsilon", type=float, required=True)

    r = sub.add_parser("radius", help="structured stability radius")
    system(r)
    r.add_argument("--eps0", type=_positive, default=1.0)
    r.add_argument("--tol-alpha", type=_positive, default=1e-3)
    r.add_argument("--zeta", type=float, default=0.1)
    r.add_argument("--l-max", type=int, default=100)
    r.add_argument("--init", choices=INIT_POLICIES, default="multistart",
                   help="initial-guess policy at each Newton step")

    s = sub.add_parser("sweep", help="structured pseudospectral abscissa over an energy grid")
    system(s)
    s.add_argument("--eps", type=_floats, required=True, help="comma-separated ascending energies")
    s.add_argument("--policy", choices=("warm", "zero", "multistart"), default="warm")
    s.add_argument("--format", choices=("csv", "json"), default="csv")

    m = sub.add_parser("sample", help="Monte-Carlo structured pseudospectrum")
    m.add_argument("--matrix", required=True)
    m.add_argument("--structure", required=True)
    m.add_argument("--epsilon", type=float, required=True)
    m.add_argument("--samples", type=int, default=1000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--output", "-o")

    g = sub.add_parser("generate", help="write an example system or structure")
    gsub = g.add_subparsers(dest="kind", required=True)
    gc = gsub.add_parser("companion", help="companion matrix of s^n + a_1 s^(n-1) + ... + a_n")
    gc.add_argument("--coeffs", type=_floats, required=True)
    gr = gsub.add_parser("circulant", help="banded circulant matrix")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--diag", type=float, required=True)
    gr.add_argument("--sup", type=float, required=True)
    gr.add_argument("--sub", type=float, required=True)
    gs = gsub.add_parser("rows", help="structure perturbing whole rows")
    gs.add_argument("--n", type=int, required=True)
    gs.add_argument("--rows", type=int, nargs="+", required=True)
    gs.add_argument("--lo", type=float)
    gs.add_argument("--hi", type=float)
    for sp in (gc, gr, gs):
        sp.add_argument("--output", "-o")
    return p


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(args):
    A = io.read_matrix_market(args.matrix)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"matrix is {A.shape[0]}x{A.shape[1]}, not square")
    return A, io.read_structure(args.structure, n=A.shape[0])


def _rate(A, res):
    if res.epsilon == 0:
        return None
    try:
        return convergence_rate(A + res.delta.to_dense(), res.triple, res.epsilon)
    except SingularShift:
        return None


def _kw(args):
    return dict(tol_delta=args.tol_delta, k_max=args.k_max)


def cmd_abscissa(args):
    A, H = _load(args)
    starts = multistart_guesses(H, args.epsilon, args.restarts, args.seed) if args.epsilon > 0 else [None]
    res = best_of_starts(A, args.epsilon, H, starts, **_kw(args))
    _emit(io.dumps(io.abscissa_to_dict(res, _rate(A, res))), args.output)


def cmd_radius(args):
    A, H = _load(args)
    res = stability_radius(
        A, H, eps0=args.eps0, tol_delta=args.tol_delta, tol_alpha=args.tol_alpha,
        zeta=args.zeta, init_policy=args.init, l_max=args.l_max,
        n_restarts=args.restarts, seed=args.seed, k_max=args.k_max,
    )
    _emit(io.dumps(io.radius_to_dict(res, _rate(A, res.final))), args.output)


def cmd_sweep(args):
    A, H = _load(args)
    sw = abscissa_sweep(
        A, H, args.eps, restart_policy=args.policy, n_restarts=args.restarts,
        seed=args.seed, **_kw(args),
    )
    rows = []
    for eps, alpha, res in zip(sw.eps, sw.alpha, sw.results):
        rows.append((float(eps), float(alpha), res is not None and res.converged,
                     0 if res is None else res.iterations))
    if args.format == "json":
        doc = {
            "points": [{"eps": e, "alpha": a, "converged": c, "iterations": k} for e, a, c, k in rows],
            "errors": [{"eps": e, "error": type(x).__name__, "message": str(x)} for e, x in sw.errors],
        }
        _emit(io.dumps(doc), args.output)
        return
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps", "alpha", "converged", "iterations"])
    for e, a, c, k in rows:
        w.writerow([f"{e:.17g}", f"{a:.17g}", int(c), k])
    _emit(buf.getvalue(), args.output)


def cmd_sample(args):
    A, H = _load(args)
    cloud = sample_pseudospectrum(A, H, args.epsilon, args.samples, args.seed)
    _emit(cloud_to_csv(cloud), args.output)


def cmd_generate(args):
    if args.kind == "rows":
        H = PerturbationStructure.rows(args.n, args.rows, args.lo, args.hi)
        _emit(io.dumps(io.structure_to_dict(H)), args.output)
        return
    if args.kind == "companion":
        A = io.gen_companion(args.coeffs)
    else:
        A = io.gen_circulant(args.n, args.diag, args.sup, args.sub)
    _emit(io.format_matrix_market(A), args.output)


COMMANDS = {
    "abscissa": cmd_abscissa,
    "radius": cmd_radius,
    "sweep": cmd_sweep,
    "sample": cmd_sample,
    "generate": cmd_generate,
}


def _fail(exc, code):
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(err) + "\n")
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (OSError, ParseError, InvalidStructure, ShapeMismatch) as exc:
        return _fail(exc, EXIT_INPUT)
    except SpecRadiusError as exc:
        return _fail(exc, EXIT_SOLVER)
    except ValueError as exc:
        # argument values the parser could not vet (e.g. zeta outside (0, 1))
        return _fail(exc, EXIT_INPUT)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
