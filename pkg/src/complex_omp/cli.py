"""Command line interface: ``complex-omp {mu,coherence,solve,certify,gtd-sim}``.

Exit codes: 0 success, 2 usage error, 3 bad input data (parse errors,
dimension mismatches, singular systems).
"""

import argparse
import json
import sys

import numpy as np

from . import erc
from .dictionary import coherence_surface, normalize_columns, write_surface_csv
from .errors import OmpError, ParseError
from .experiment import ExperimentConfig, run_monte_carlo, write_outputs
from .gtd import build_gtd_dictionary, scene_from_config
from .io import read_complex_matrix, read_complex_vector
from .omp import SparseSignal, StoppingRule, omp_solve

EXIT_USAGE = 2
EXIT_DATA = 3


class _DataError(Exception):
    pass


def _load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from exc


def _dictionary(path):
    M = read_complex_matrix(path)
    return normalize_columns(M), np.linalg.norm(M, axis=0)


def cmd_mu(args):
    D, _ = _dictionary(args.matrix)
    rep = D.coherence
    print(json.dumps({"mu": rep.mu, "argmax_pair": list(rep.argmax_pair)}))


def cmd_coherence(args):
    scene = scene_from_config(_load_json(args.scene))
    D = build_gtd_dictionary(scene)
    surface, slice_rows = coherence_surface(D, args.ref_atom)
    write_surface_csv(surface, args.out)
    if args.slice_out:
        write_surface_csv(slice_rows, args.slice_out)


def cmd_solve(args):
    D, norms = _dictionary(args.matrix)
    y = read_complex_vector(args.y)
    if args.iters is not None:
        rule = StoppingRule.iterations(args.iters, args.max_iters)
    elif args.noise_bound is not None:
        rule = StoppingRule.noise_bound(args.noise_bound, args.max_iters)
    else:
        rule = StoppingRule.residual(args.eps if args.eps is not None else 0.0, args.max_iters)
    res = omp_solve(D, y, rule)
    # report coefficients for the matrix as given, not its normalized copy
    c = res.coefficients
    res.coefficients = SparseSignal(c.length, c.support, c.values / norms[list(c.support)])
    with open(args.out, "w") as fh:
        json.dump(res.to_dict(), fh, indent=2)
        fh.write("\n")


def cmd_certify(args):
    D, norms = _dictionary(args.matrix)
    if args.x is not None:
        x = read_complex_vector(args.x)
        if x.size != D.n:
            raise _DataError(f"x has length {x.size}, matrix has {D.n} columns")
        target = SparseSignal.from_dense(x * norms)
        if target.k == 0:
            raise _DataError("x has no nonzero entries")
    else:
        target = args.k
    k = target if isinstance(target, int) else target.k
    if args.sigma is not None:
        report = erc.certify_cawgn(D, target, args.sigma, args.variant)
    elif args.noise_bound is not None:
        report = erc.certify_bounded_noise(D, target, args.noise_bound)
    else:
        report = erc.certify_noiseless(D, k)
    print(report.to_json(indent=2))


def cmd_gtd_sim(args):
    cfg = ExperimentConfig.from_json(args.config)
    out = args.out or cfg.output_path
    if out is None:
        raise _DataError("no output directory: pass --out or set output_path")
    result = run_monte_carlo(cfg, workers=args.workers)
    write_outputs(result, out)
    for row in result.summary:
        print(f"k={row['k']} success_rate={row['success_rate']:.4f} median_error={row['median_error']:.4g}")


def build_parser():
    p = argparse.ArgumentParser(prog="complex-omp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mu", help="mutual coherence of a matrix file")
    s.add_argument("--matrix", required=True)
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("coherence", help="coherence surface CSV of a GTD scene dictionary")
    s.add_argument("--scene", required=True, help="scene JSON")
    s.add_argument("--out", required=True)
    s.add_argument("--slice-out", help="also write the rows with j = --ref-atom")
    s.add_argument("--ref-atom", type=int, default=None, help="reference atom (default: middle)")
    s.set_defaults(func=cmd_coherence)

    s = sub.add_parser("solve", help="run OMP and write the result as JSON")
    s.add_argument("--matrix", required=True)
    s.add_argument("--y", required=True)
    stop = s.add_mutually_exclusive_group()
    stop.add_argument("--eps", type=float, help="stop once ||r|| <= EPS (default 0)")
    stop.add_argument("--noise-bound", type=float, help="stop once ||r|| <= B")
    stop.add_argument("--iters", type=int, help="run exactly K iterations")
    s.add_argument("--max-iters", type=int, default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("certify", help="print an exact-recovery certificate as JSON")
    s.add_argument("--matrix", required=True)
    tgt = s.add_mutually_exclusive_group(required=True)
    tgt.add_argument("--k", type=int)
    tgt.add_argument("--x", help="dense coefficient vector file")
    s.add_argument("--sigma", type=float)
    s.add_argument("--variant", choices=("b1", "b2"), default="b1")
    s.add_argument("--noise-bound", type=float)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("gtd-sim", help="Monte Carlo recovery experiment on a GTD scene")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="output directory")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_gtd_sim)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "certify":
        if args.sigma is not None and args.noise_bound is not None:
            parser.error("--sigma and --noise-bound are mutually exclusive")
        if args.k is not None and args.k < 1:
            parser.error("--k must be positive")
    try:
        args.func(args)
    except (OmpError, _DataError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
