"""Command-line interface.

Exit codes: 0 success, 1 an experiment bound was violated, 2 usage or input
error, 3 budget exceeded. Logarithms are natural throughout.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

from . import __version__
from .constructions import affine_subspace, paraboloid, sphere
from .deviation import (
    DeviationParams,
    chebyshev_size_bound,
    cosine_identity_check,
    deviation_bound,
    failure_prob_bound,
    hayes_threshold,
    main_threshold,
    per_part_tail_bound,
    proof_alpha,
    proof_lambda,
    proof_mu2,
)
from .errors import InputError, ResourceError
from .explore import conjecture_explore
from .field import SpaceParams, coords_of, index_of
from .harness import (
    VariableSpec,
    expectation_identity_experiment,
    lemma_oracle_experiment,
    percolation_tail_experiment,
    real_imag_tail_experiment,
    size_concentration_experiment,
    uniform_tail_experiment,
)
from .sampling import SeedSpec, sample_bernoulli, sample_uniform_m
from .spectral import PointSet, dft_full, phi

CSV_VERSION_LINE = "# ffsalem-trials v1"
CSV_COLUMNS = (
    "stream_id",
    "cardinality",
    "phi",
    "threshold",
    "exceeded",
    "real_part_abs",
    "imag_part_abs",
)

_NUM = {"type": "number"}
_INT = {"type": "integer"}

SUMMARY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ffsalem experiment summary",
    "type": "object",
    "required": [
        "experiment", "version", "master_seed", "params", "trials", "exceed_count",
        "empirical_prob", "theoretical_bound", "slack", "pass", "wall_time", "details",
    ],
    "properties": {
        "experiment": {"enum": ["percolation", "uniform", "tail", "size", "lemma"]},
        "version": {"type": "string"},
        "master_seed": {"type": "integer", "minimum": 0},
        "params": {"type": "object"},
        "trials": {"type": "integer", "minimum": 1},
        "exceed_count": {"type": "integer", "minimum": 0},
        "empirical_prob": {"type": "number", "minimum": 0, "maximum": 1},
        "theoretical_bound": {"type": "number", "minimum": 0},
        "slack": {"type": "number", "minimum": 0},
        "pass": {"type": "boolean"},
        "wall_time": {"type": "number", "minimum": 0},
        "details": {"type": "object"},
    },
    "additionalProperties": False,
}

EXPECTATION_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ffsalem expectation report",
    "type": "object",
    "required": [
        "experiment", "version", "master_seed", "params", "trials",
        "mean_coeff_real", "mean_coeff_imag", "mean_coeff_abs", "mean_coeff_slack",
        "mean_sq_modulus", "expected_sq_modulus", "sq_modulus_stderr", "pass",
        "wall_time",
    ],
    "properties": {
        "experiment": {"const": "expectation"},
        "version": {"type": "string"},
        "master_seed": {"type": "integer", "minimum": 0},
        "params": {"type": "object"},
        "trials": {"type": "integer", "minimum": 1},
        "mean_coeff_real": _NUM,
        "mean_coeff_imag": _NUM,
        "mean_coeff_abs": _NUM,
        "mean_coeff_slack": _NUM,
        "mean_sq_modulus": _NUM,
        "expected_sq_modulus": _NUM,
        "sq_modulus_stderr": _NUM,
        "pass": {"type": "boolean"},
        "wall_time": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}

SEARCH_SCHEMA = {
    "type": "object",
    "required": ["p", "d", "m", "mode", "best_ratio", "best_set", "evaluations"],
    "properties": {
        "p": _INT, "d": _INT, "m": _INT,
        "mode": {"enum": ["exhaustive", "local"]},
        "best_ratio": _NUM,
        "best_set": {"type": "array", "items": _INT},
        "evaluations": _INT,
        "restarts": _INT,
        "master_seed": _INT,
    },
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _fmt(x):
    return f"{x:.7f}"


def read_point_file(path, space):
    """Read newline-delimited point indices; '#' lines and blanks are skipped."""
    with open(path) as fh:
        text = fh.read()
    indices = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            indices.append(int(line))
        except ValueError:
            raise InputError(f"{path}:{lineno}: not a decimal index: {line!r}")
    return PointSet.from_indices(space, indices)


def write_point_file(E, fh):
    fh.write(f"# {E.space} cardinality={E.cardinality}\n")
    for i in E.indices():
        fh.write(f"{i}\n")


def _parse_vector(text, space):
    """A point given either as a single index or as comma-separated coordinates."""
    text = text.strip()
    try:
        parts = [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse vector {text!r}")
    if len(parts) == 1:
        return coords_of(space, parts[0])
    index_of(space, parts)
    return tuple(parts)


def _space(args):
    return SpaceParams(args.p, args.d)


def _construct(args, space):
    name = args.set
    if name == "paraboloid":
        return paraboloid(space)
    if name == "sphere":
        return sphere(space, args.r)
    if name == "subspace":
        basis = [_parse_vector(v, space) for v in (args.basis or "").split(";") if v]
        offset = _parse_vector(args.offset, space) if args.offset else None
        return affine_subspace(space, basis, offset)
    if name == "full":
        return PointSet.full(space)
    if name == "point":
        return PointSet.from_indices(space, [0])
    raise InputError(f"unknown construction {name!r}")


def _input_set(args, space):
    chosen = [x for x in (args.set, args.sample, args.file) if x]
    if len(chosen) != 1:
        raise InputError("give exactly one of --set, --sample or --file")
    if args.set:
        return _construct(args, space)
    if args.file:
        return read_point_file(args.file, space)
    seed = SeedSpec(args.seed, args.trial)
    if args.sample == "percolation":
        if args.delta is None:
            raise InputError("--sample percolation needs --delta")
        return sample_bernoulli(space, args.delta, seed)
    if args.m is None:
        raise InputError("--sample uniform needs --m")
    return sample_uniform_m(space, args.m, seed)


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def cmd_phi(args):
    space = _space(args)
    E = _input_set(args, space)
    res = phi(E)
    ratio = res.phi / math.sqrt(E.cardinality) if E.cardinality else math.nan
    if args.format == "json":
        _emit(_dumps({"p": space.p, "d": space.d, "cardinality": E.cardinality,
                      "phi": res.phi, "argmax_xi": res.argmax_xi,
                      "argmax_coords": list(coords_of(space, res.argmax_xi)),
                      "ratio": None if math.isnan(ratio) else ratio}), args.output)
    else:
        _emit(
            f"phi={_fmt(res.phi)}\nratio={_fmt(ratio)}\n"
            f"argmax_xi={res.argmax_xi} {coords_of(space, res.argmax_xi)}\n"
            f"cardinality={E.cardinality}\n",
            args.output,
        )
    return 0


def cmd_dft(args):
    space = _space(args)
    E = _input_set(args, space)
    coeffs = dft_full(E.membership, space).coeffs
    if args.format == "json":
        _emit(_dumps({"p": space.p, "d": space.d, "cardinality": E.cardinality,
                      "real": coeffs.real.tolist(), "imag": coeffs.imag.tolist()}),
              args.output)
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["xi", "coords", "real", "imag", "modulus"])
    for k, c in enumerate(coeffs):
        w.writerow([k, " ".join(map(str, coords_of(space, k))), repr(float(c.real)),
                    repr(float(c.imag)), repr(float(abs(c)))])
    _emit(buf.getvalue(), args.output)
    return 0


def cmd_sample(args):
    space = _space(args)
    args.set, args.file = None, None
    args.sample = args.model
    E = _input_set(args, space)
    buf = io.StringIO()
    write_point_file(E, buf)
    _emit(buf.getvalue(), args.output)
    return 0


def cmd_construct(args):
    space = _space(args)
    args.set = args.name
    E = _construct(args, space)
    if args.emit == "bitmap":
        text = "".join("1" if b else "0" for b in E.membership) + "\n"
    elif args.emit == "points":
        text = "".join(" ".join(map(str, c)) + "\n" for c in E.points())
    else:
        buf = io.StringIO()
        write_point_file(E, buf)
        text = buf.getvalue()
    _emit(text, args.output)
    return 0


def _bounds_n(args):
    if args.n is not None:
        return args.n
    if args.p is None or args.d is None:
        raise InputError("give --n or both --p and --d")
    return SpaceParams(args.p, args.d).n


def cmd_bounds(args):
    q = args.quantity
    out = {}
    if q == "deviation":
        params = DeviationParams(N=args.N, mu1=args.mu1, mu2=args.mu2,
                                 alpha=args.alpha, lam=args.lam)
        value = deviation_bound(params)
        out["vacuous"] = value >= 1.0
    elif q == "cosine-identities":
        space = _space(args)
        res = cosine_identity_check(space, _parse_vector(args.xi, space))
        value = max(res.cos_sum, res.cos_sq)
        out.update(res._asdict())
        out["ok"] = res.ok
    else:
        n = _bounds_n(args)
        eps, delta = args.epsilon, args.delta

        def need(**kw):
            missing = [k for k, v in kw.items() if v is None]
            if missing:
                raise InputError(f"{q} needs --{' --'.join(missing)}")

        if q == "main-threshold":
            need(delta=delta, epsilon=eps)
            value = main_threshold(n, delta, eps)
        elif q == "hayes-threshold":
            need(m=args.m, epsilon=eps)
            value = hayes_threshold(args.m, n, eps)
        elif q == "failure-prob":
            need(epsilon=eps)
            value = failure_prob_bound(n, eps)
            out["vacuous"] = value >= 1.0
        elif q == "per-part-tail":
            need(epsilon=eps)
            value = per_part_tail_bound(n, eps)
        elif q == "chebyshev":
            need(delta=delta)
            value = chebyshev_size_bound(n, delta)
            out["vacuous"] = value >= 1.0
        elif q == "mu2":
            need(delta=delta)
            value = proof_mu2(n, delta)
        elif q == "alpha":
            need(delta=delta, epsilon=eps)
            value = proof_alpha(n, delta, eps)
        else:
            need(delta=delta, epsilon=eps)
            value = proof_lambda(n, delta, eps)
            out["lambda_valid"] = value <= 1.0
        out["n"] = n
    if args.format == "json":
        _emit(_dumps({"quantity": q, "value": value, **out}), args.output)
    else:
        extra = "".join(f"\n{k}={v}" for k, v in out.items() if isinstance(v, bool))
        _emit(f"{_fmt(value)}{extra}\n", args.output)
    return 0


def records_csv(summary):
    buf = io.StringIO()
    buf.write(CSV_VERSION_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in summary.records():
        w.writerow([r.stream_id, r.cardinality, repr(r.phi), repr(r.threshold),
                    int(r.exceeded), repr(r.real_part_abs), repr(r.imag_part_abs)])
    return buf.getvalue()


def _run_experiment(args):
    kind = args.kind
    needs_space = kind != "lemma" or args.family == "cosine"
    if needs_space and (args.p is None or args.d is None):
        raise InputError(f"experiment {kind} needs --p and --d")
    space = _space(args) if needs_space else None
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    seed = args.seed
    probe = _parse_vector(args.xi, space) if args.xi and space else None

    def need(**kw):
        missing = [k for k, v in kw.items() if v is None]
        if missing:
            raise InputError(f"experiment {kind} needs --{' --'.join(missing)}")

    if kind == "percolation":
        need(delta=args.delta, epsilon=args.epsilon)
        return percolation_tail_experiment(space, args.delta, args.epsilon,
                                           args.trials, seed, probe, jobs=jobs)
    if kind == "uniform":
        need(m=args.m, epsilon=args.epsilon)
        return uniform_tail_experiment(space, args.m, args.epsilon, args.trials, seed,
                                       constant=args.constant, probe_xi=probe,
                                       jobs=jobs)
    if kind == "tail":
        need(delta=args.delta, epsilon=args.epsilon)
        return real_imag_tail_experiment(space, args.delta, args.epsilon,
                                         args.trials, probe, seed, jobs=jobs)
    if kind == "expectation":
        need(delta=args.delta)
        return expectation_identity_experiment(space, args.delta, args.trials,
                                               probe, seed, jobs=jobs)
    if kind == "size":
        need(delta=args.delta)
        return size_concentration_experiment(space, args.delta, args.trials, seed,
                                             jobs=jobs)
    need(alpha=args.alpha, lam=args.lam)
    if args.family == "cosine":
        spec = VariableSpec("cosine", p=space.p, d=space.d,
                            delta=args.delta if args.delta is not None else 0.3,
                            xi=index_of(space, probe) if probe else 1)
        N = spec.N
    else:
        need(N=args.N)
        spec = VariableSpec(args.family, N=args.N, q=args.q)
        N = args.N
    return lemma_oracle_experiment(N, spec, args.alpha, args.lam, args.trials, seed,
                                   jobs=jobs)


def cmd_experiment(args):
    summary = _run_experiment(args)
    if args.format == "csv":
        if getattr(summary, "trial_data", None) is None:
            raise InputError(f"experiment {args.kind} has no per-trial CSV records")
        _emit(records_csv(summary), args.output)
    else:
        _emit(_dumps(summary.to_dict()), args.output)
    if args.records:
        if getattr(summary, "trial_data", None) is None:
            raise InputError(f"experiment {args.kind} has no per-trial CSV records")
        with open(args.records, "w", newline="") as fh:
            fh.write(records_csv(summary))
    return 0 if summary.passed else 1


def cmd_explore(args):
    space = _space(args)
    res = conjecture_explore(space, args.m, args.mode, args.budget, args.seed)
    doc = {
        "p": space.p, "d": space.d, "m": args.m, "mode": res.mode,
        "best_ratio": res.best_ratio,
        "best_set": [int(i) for i in res.best_set.indices()],
        "evaluations": res.evaluations, "restarts": res.restarts,
        "master_seed": args.seed,
    }
    if args.format == "json":
        _emit(_dumps(doc), args.output)
    else:
        _emit(
            f"best_ratio={_fmt(res.best_ratio)}\nbest_set={doc['best_set']}\n"
            f"evaluations={res.evaluations}\n",
            args.output,
        )
    return 0


def _add_space(p, required=True):
    p.add_argument("--p", type=int, required=required, help="prime modulus")
    p.add_argument("--d", type=int, required=required, help="dimension")


def _add_set_source(p):
    p.add_argument("--set", choices=["paraboloid", "sphere", "subspace", "full", "point"])
    p.add_argument("--r", type=int, default=1, help="sphere radius residue")
    p.add_argument("--basis", help="subspace basis, e.g. '1,0;0,1'")
    p.add_argument("--offset", help="subspace offset, e.g. '1,2'")
    p.add_argument("--sample", choices=["percolation", "uniform"])
    p.add_argument("--delta", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial", type=int, default=0, help="stream id")
    p.add_argument("--file", help="point-index file")


def build_parser():
    parser = _Parser(
        prog="ffsalem",
        description="Fourier analysis of subsets of F_p^d. All logarithms are natural.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ph = sub.add_parser("phi", help="max |F(xi)| over xi != 0 and the Salem ratio")
    _add_space(ph)
    _add_set_source(ph)
    ph.add_argument("--format", choices=["text", "json"], default="text")
    ph.add_argument("--output")
    ph.set_defaults(func=cmd_phi)

    df = sub.add_parser("dft", help="all Fourier coefficients of a set")
    _add_space(df)
    _add_set_source(df)
    df.add_argument("--format", choices=["csv", "json"], default="csv")
    df.add_argument("--output")
    df.set_defaults(func=cmd_dft)

    sa = sub.add_parser("sample", help="draw a random set, print its point indices")
    _add_space(sa)
    sa.add_argument("--model", choices=["percolation", "uniform"], required=True)
    sa.add_argument("--delta", type=float)
    sa.add_argument("--m", type=int)
    sa.add_argument("--seed", type=int, default=0)
    sa.add_argument("--trial", type=int, default=0)
    sa.add_argument("--output")
    sa.set_defaults(func=cmd_sample)

    co = sub.add_parser("construct", help="emit a deterministic example set")
    _add_space(co)
    co.add_argument("name", choices=["paraboloid", "sphere", "subspace", "full", "point"])
    co.add_argument("--r", type=int, default=1)
    co.add_argument("--basis")
    co.add_argument("--offset")
    co.add_argument("--emit", choices=["indices", "points", "bitmap"], default="indices")
    co.add_argument("--output")
    co.set_defaults(func=cmd_construct)

    bo = sub.add_parser("bounds", help="evaluate a closed-form bound (natural log)")
    bo.add_argument(
        "quantity",
        choices=["main-threshold", "hayes-threshold", "failure-prob", "per-part-tail",
                 "chebyshev", "mu2", "alpha", "lambda", "deviation",
                 "cosine-identities"],
    )
    _add_space(bo, required=False)
    bo.add_argument("--n", type=int, help="number of points (instead of --p/--d)")
    bo.add_argument("--delta", type=float)
    bo.add_argument("--epsilon", type=float)
    bo.add_argument("--m", type=int)
    bo.add_argument("--N", type=int)
    bo.add_argument("--mu1", type=float, default=0.0)
    bo.add_argument("--mu2", type=float, default=0.0)
    bo.add_argument("--alpha", type=float)
    bo.add_argument("--lambda", dest="lam", type=float)
    bo.add_argument("--xi", default="1", help="frequency index or comma coords")
    bo.add_argument("--format", choices=["text", "json"], default="text")
    bo.add_argument("--output")
    bo.set_defaults(func=cmd_bounds)

    ex = sub.add_parser("experiment", help="seeded Monte Carlo check of a bound")
    ex.add_argument("kind", choices=["percolation", "uniform", "tail", "expectation",
                                     "size", "lemma"])
    _add_space(ex, required=False)
    ex.add_argument("--delta", type=float)
    ex.add_argument("--m", type=int)
    ex.add_argument("--epsilon", type=float)
    ex.add_argument("--trials", type=int, default=10000)
    ex.add_argument("--seed", type=int, default=0)
    ex.add_argument("--xi", help="probe frequency (index or comma coords)")
    ex.add_argument("--constant", type=float, default=4.0,
                    help="uniform model: constant in front of n^-eps")
    ex.add_argument("--family", choices=["rademacher", "bernoulli", "cosine"],
                    default="rademacher")
    ex.add_argument("--N", type=int)
    ex.add_argument("--q", type=float, default=0.5)
    ex.add_argument("--alpha", type=float)
    ex.add_argument("--lambda", dest="lam", type=float)
    ex.add_argument("--jobs", type=int, help="worker processes (default: all CPUs)")
    ex.add_argument("--format", choices=["json", "csv"], default="json")
    ex.add_argument("--output")
    ex.add_argument("--records", help="also write per-trial CSV records here")
    ex.set_defaults(func=cmd_experiment)

    xp = sub.add_parser("explore", help="minimise phi(E)/sqrt(#E) over m-subsets")
    _add_space(xp)
    xp.add_argument("--m", type=int, required=True)
    xp.add_argument("--mode", choices=["exhaustive", "local"], default="exhaustive")
    xp.add_argument("--budget", type=int)
    xp.add_argument("--seed", type=int, default=0)
    xp.add_argument("--format", choices=["text", "json"], default="text")
    xp.add_argument("--output")
    xp.set_defaults(func=cmd_explore)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"ffsalem: error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"ffsalem: error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"ffsalem: budget: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"ffsalem: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
