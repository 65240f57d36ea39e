"""Command-line entry point.

Exit status: 0 success, 1 domain or regime error, 2 usage error, 3 resource
cap reached.  Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import mpmath

from . import distributions as dist
from .bounds import bonferroni_threshold, chebyshev_ratio, var_mean_ratio
from .errors import DomainError, ResourceLimitError
from .moments import (DEFAULT_MAX_NODES, binomial_moment, central_moment, factorial_moment,
                      leading_central_reference, raw_moment, raw_moment_info,
                      standardized_moment)
from .oracle import DEFAULT_MAX_N, exact_distribution
from .simulator import DEFAULT_MAX_COST, fit_and_compare, run
from .verify import CHECKS, over_budget, run_suite

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
GLOBAL_KEYS = ("output", "precision", "cap_profile_nodes", "cap_oracle_n", "cap_subset_cost", "seed")


class UsageError(Exception):
    pass


def _frac(x: Fraction) -> dict:
    return {"numerator": str(x.numerator), "denominator": str(x.denominator)}


def _mpf(x) -> float:
    return float(x)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, mpmath.mpf)):
        return format(float(x), ".17g")
    return str(x)


def _positive_int(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _precision(s: str) -> int:
    v = int(s)
    if v < 64:
        raise argparse.ArgumentTypeError(f"precision must be at least 64 bits, got {v}")
    return v


def _csv_list(s: str) -> list[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ramsey-moments",
                                description="Moments of the monochromatic clique count.")
    p.add_argument("--output", choices=["pretty", "json", "csv"], default="pretty",
                   help="output format (default pretty)")
    p.add_argument("--precision", type=_precision, default=dist.PREC,
                   help="floating-point precision in bits, at least 64 (default %(default)s)")
    p.add_argument("--cap-profile-nodes", type=_positive_int, default=DEFAULT_MAX_NODES,
                   help="search-node cap for moment enumeration (default %(default)s)")
    p.add_argument("--cap-oracle-n", type=_positive_int, default=DEFAULT_MAX_N,
                   help="largest n for exhaustive enumeration (default %(default)s)")
    p.add_argument("--cap-subset-cost", type=_positive_int, default=DEFAULT_MAX_COST,
                   help="cap on samples x C(n,k) for simulation (default %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--config", metavar="FILE",
                   help="key=value file of global options; flags on the command line win")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.add_argument("--json", action="store_true", help="shorthand for --output json")
        return sp

    sp = add("moments", "exact raw, factorial or binomial moment as a polynomial in n")
    sp.add_argument("--k", type=int, required=True, help="clique size")
    sp.add_argument("--r", type=int, required=True, help="moment order")
    sp.add_argument("--kind", choices=["raw", "factorial", "binomial"], default="raw",
                    help="moment kind (default raw)")
    sp.add_argument("--eval-n", type=int, help="evaluate at this n instead of printing the polynomial")
    sp.add_argument("--workers", type=_positive_int, default=1, help="enumeration threads")

    sp = add("central", "exact central moment E[(X-mu)^m]")
    sp.add_argument("--k", type=int, required=True, help="clique size")
    sp.add_argument("--m", type=int, required=True, help="moment order")
    sp.add_argument("--eval-n", type=int, help="evaluate at this n")
    sp.add_argument("--standardized", action="store_true",
                    help="with --eval-n, divide by Var^(m/2)")

    sp = add("oracle", "exact distribution of X by listing all colourings")
    sp.add_argument("--n", type=int, required=True, help="number of vertices")
    sp.add_argument("--k", type=int, required=True, help="clique size")
    sp.add_argument("--moments", type=int, default=5, help="report E[X^r] for r up to this (default 5)")
    sp.add_argument("--workers", type=_positive_int, default=1, help="enumeration threads")

    sp = add("dist", "Poisson, negative binomial and Delaporte pmf, mgf and moments")
    sp.add_argument("what", choices=["pmf", "mgf", "moments"], help="quantity")
    sp.add_argument("family", choices=["delaporte", "poisson", "negbin"], help="distribution")
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0, help="Poisson mean")
    sp.add_argument("--alpha", type=float, default=1.0, help="negative binomial shape")
    sp.add_argument("--beta", type=float, default=1.0, help="negative binomial scale")
    sp.add_argument("--max-j", type=int, default=20, help="pmf up to this value (default 20)")
    sp.add_argument("--t", type=float, default=0.0, help="mgf argument (default 0)")

    sp = add("fit", "Delaporte or Poisson parameters matched to the clique count")
    sp.add_argument("--k", type=int, required=True, help="clique size")
    sp.add_argument("--n", type=int, required=True, help="number of vertices")
    sp.add_argument("--regime", choices=["big", "small"], required=True, help="fit regime")
    sp.add_argument("--boundary-constant", type=float,
                    help="reject n below c*k*2^(k/2) in the big regime (off by default)")
    sp.add_argument("--exact-mean", action="store_true",
                    help="big regime: lambda = E[X] - alpha*beta with the exact E[X]")

    sp = add("bounds", "Ramsey lower bounds from truncated inclusion-exclusion")
    sp.add_argument("--k", type=int, required=True, help="clique size")
    sp.add_argument("--m", type=_csv_list, default=["1"], help="odd truncation orders, comma separated")
    sp.add_argument("--chebyshev", action="store_true", help="also report Var/E^2 and Var/E at --n")
    sp.add_argument("--n", type=int, help="n for --chebyshev")

    sp = add("simulate", "Monte Carlo histogram of X with optional model fits")
    sp.add_argument("--n", type=int, required=True, help="number of vertices")
    sp.add_argument("--k", type=int, required=True, help="clique size")
    sp.add_argument("--samples", type=_positive_int, required=True, help="number of colourings")
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="overrides the global seed")
    sp.add_argument("--workers", type=_positive_int, default=1, help="threads")
    sp.add_argument("--fit", type=_csv_list, default=[],
                    help="models: delaporte, poisson, normal, delaporte-bign, delaporte-bign-exact")
    sp.add_argument("--csv", action="store_true", help="shorthand for --output csv")

    sp = add("verify", "run the identity suite")
    sp.add_argument("--only", type=_csv_list, help=f"comma separated subset of: {', '.join(CHECKS)}")
    return p


def _load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in GLOBAL_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = val
    return out


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = _load_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        # config values become defaults, so explicit flags still win
        conv = {a.dest: a for a in parser._actions}
        defaults = {}
        for key, val in cfg.items():
            act = conv[key]
            try:
                defaults[key] = act.type(val) if act.type else val
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config {key}: {exc}") from exc
            if act.choices and defaults[key] not in act.choices:
                raise UsageError(f"config {key}: {val!r} not in {act.choices}")
        parser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    if getattr(args, "json", False):
        args.output = "json"
    if getattr(args, "csv", False):
        args.output = "csv"
    return args


# commands


def _poly_json(p) -> list:
    return p.to_json()


def cmd_moments(a):
    fn = {"raw": raw_moment, "factorial": factorial_moment, "binomial": binomial_moment}[a.kind]
    kw = {"max_nodes": a.cap_profile_nodes, "workers": a.workers}
    poly = fn(a.k, a.r, **kw)
    info = raw_moment_info(a.k, a.r, **kw) if a.r >= 1 else {}
    val = poly(a.eval_n) if a.eval_n is not None else None
    data = {"command": "moments", "k": a.k, "r": a.r, "kind": a.kind, "polynomial": _poly_json(poly),
            "eval_n": a.eval_n, "value": _frac(val) if val is not None else None,
            "profile_count": info.get("profile_count"), "elapsed_ms": info.get("elapsed_ms")}
    pretty = str(val) if val is not None else str(poly)
    return data, pretty, None


def cmd_central(a):
    kw = {"max_nodes": a.cap_profile_nodes}
    poly = central_moment(a.k, a.m, **kw)
    data = {"command": "central", "k": a.k, "m": a.m, "polynomial": _poly_json(poly),
            "eval_n": a.eval_n, "value": None, "standardized": None, "leading_reference": None}
    lead = poly.leading_term()
    try:
        deg, coeff = leading_central_reference(a.k, a.m)
        data["leading_reference"] = {"degree": deg, **_frac(coeff),
                                     "matches": lead == (deg, coeff)}
    except DomainError:
        pass
    if a.eval_n is None:
        return data, str(poly), None
    val = poly(a.eval_n)
    data["value"] = _frac(val)
    pretty = str(val)
    if a.standardized:
        c = standardized_moment(a.k, a.m, a.eval_n, prec=a.precision, **kw)
        data["standardized"] = _mpf(c)
        pretty = _fmt(c)
    return data, pretty, None


def cmd_oracle(a):
    d = exact_distribution(a.n, a.k, max_n=a.cap_oracle_n, workers=a.workers)
    data = {"command": "oracle", **d.as_json(a.moments)}
    lines = [f"{i}\t{c}/{d.denominator}" for i, c in sorted(d.counts.items())]
    rows = [("value", "count")] + [(i, c) for i, c in sorted(d.counts.items())]
    return data, "\n".join(lines), rows


def _dist_params(a):
    if a.family == "delaporte":
        return dist.DelaporteParams(a.lam, a.alpha, a.beta)
    return None


def cmd_dist(a):
    fam, what = a.family, a.what
    data = {"command": "dist", "what": what, "family": fam,
            "params": {"lambda": a.lam, "alpha": a.alpha, "beta": a.beta}}
    if what == "pmf":
        js = range(a.max_j + 1)
        if fam == "poisson":
            vals = [dist.poisson_pmf(a.lam, j) for j in js]
        elif fam == "negbin":
            vals = [dist.negbin_pmf(a.alpha, a.beta, j) for j in js]
        else:
            p = _dist_params(a)
            vals = dist.delaporte_pmf_vector(p, max_j=a.max_j).probabilities
        data["pmf"] = [_mpf(v) for v in vals]
        rows = [("value", "probability")] + [(j, _fmt(v)) for j, v in zip(js, vals)]
        return data, "\n".join(f"{j}\t{_fmt(v)}" for j, v in zip(js, vals)), rows
    if what == "mgf":
        if fam == "poisson":
            v = dist.poisson_mgf(a.lam, a.t)
        elif fam == "negbin":
            v = dist.negbin_mgf(a.alpha, a.beta, a.t)
        else:
            v = dist.delaporte_mgf(_dist_params(a), a.t)
        data["t"] = a.t
        data["mgf"] = _mpf(v)
        return data, _fmt(v), None
    if fam == "poisson":
        lam = mpmath.mpf(a.lam)
        mom = {"mean": lam, "variance": lam, "central_3": lam, "central_4": 3 * lam ** 2 + lam}
    elif fam == "negbin":
        p = dist.DelaporteParams(0, a.alpha, a.beta)
        mom = {"mean": p.mean, "variance": p.variance,
               "central_3": dist.delaporte_central_moment(p, 3),
               "central_4": dist.delaporte_central_moment(p, 4)}
    else:
        p = _dist_params(a)
        mom = {"mean": p.mean, "variance": p.variance,
               "central_3": dist.delaporte_central_moment(p, 3),
               "central_4": dist.delaporte_central_moment(p, 4),
               "poisson_gap": dist.delaporte_poisson_gap(p)}
    data["moments"] = {key: _mpf(v) for key, v in mom.items()}
    return data, "\n".join(f"{key}\t{_fmt(v)}" for key, v in mom.items()), None


def cmd_fit(a):
    data = {"command": "fit", "k": a.k, "n": a.n, "regime": a.regime}
    if a.regime == "small":
        lam = dist.poisson_rate_smalln(a.n, a.k)
        data["params"] = {"lambda": float(lam)}
        data["lambda_exact"] = _frac(lam)
        return data, f"lambda\t{lam}", None
    bound = dist.bign_regime_boundary(a.k, a.boundary_constant) if a.boundary_constant else None
    p = dist.fit_bign(a.n, a.k, min_n=bound, exact_mean=a.exact_mean)
    data["params"] = p.as_dict()
    data["poisson_gap"] = _mpf(dist.delaporte_poisson_gap(p))
    pretty = "\n".join(f"{key}\t{_fmt(v)}" for key, v in
                       [("lambda", p.lam), ("alpha", p.alpha), ("beta", p.beta)])
    return data, pretty, None


def cmd_bounds(a):
    try:
        ms = [int(m) for m in a.m]
    except ValueError as exc:
        raise UsageError(f"--m expects integers: {exc}") from exc
    reports = [bonferroni_threshold(a.k, m, max_nodes=a.cap_profile_nodes) for m in ms]
    data = {"command": "bounds", "k": a.k, "reports": [r.as_json() for r in reports]}
    lines = []
    for r in reports:
        cert = ", ".join(f"S({n})={v}" for n, v in sorted(r.certificate.items()))
        extra = "" if r.improves_on_first_moment is None else \
            f"; improves on m=1 ({r.first_moment_threshold}): {r.improves_on_first_moment}"
        lines.append(f"m={r.m}: threshold n={r.threshold_n}, {r.implied_bound}{extra}; {cert}")
    if a.chebyshev:
        if a.n is None:
            raise UsageError("--chebyshev needs --n")
        ch = chebyshev_ratio(a.k, a.n)
        vm = var_mean_ratio(a.k, a.n)
        data["chebyshev"] = {"n": a.n, "exact": _frac(ch.exact), "reference": ch.reference,
                             "reference_falling": ch.reference_falling}
        data["var_mean"] = {"n": a.n, "exact": _frac(vm.exact), "reference": vm.reference,
                            "super_poisson": vm.exact > 1}
        lines.append(f"Var/E^2 at n={a.n}: {_fmt(float(ch.exact))} "
                     f"(k^6/(2n^3) = {_fmt(ch.reference)}, (k)_3^2/(2n^3) = {_fmt(ch.reference_falling)})")
        lines.append(f"Var/E at n={a.n}: {_fmt(float(vm.exact))} (reference {_fmt(vm.reference)})")
    lines.append(f"note: {reports[0].note}")
    return data, "\n".join(lines), None


def cmd_simulate(a):
    rep = run(a.n, a.k, a.samples, a.seed, a.workers, max_cost=a.cap_subset_cost)
    fits = fit_and_compare(rep, a.fit) if a.fit else []
    data = {"command": "simulate", "report": rep.as_json(), "fits": [f.as_json() for f in fits]}
    lines = [f"n={rep.n} k={rep.k} samples={rep.samples} seed={rep.seed} mean={_fmt(float(rep.mean))}"
             f" var={_fmt(float(rep.central_moment(2)))}"]
    lines += [f"{x}\t{c}" for x, c in rep.histogram.items()]
    for f in fits:
        if f.params is None:
            lines.append(f"{f.model}: {f.note}")
        else:
            lines.append(f"{f.model}: params={f.params} chi2={_fmt(f.chi_square)} dof={f.dof} "
                         f"loglik={_fmt(f.log_likelihood)}")
    rows = [("value", "count")] + list(rep.histogram.items())
    return data, "\n".join(lines), rows


def cmd_verify(a):
    try:
        results = run_suite(a.only)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    data = {"command": "verify", "passed": all(r.passed for r in results),
            "results": [r.as_json() for r in results]}
    lines = []
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.name:<28} {r.elapsed_s:8.2f}s  {r.detail}"
        if not r.passed:
            line += f" (expected {r.expected}, got {r.actual})"
        lines.append(line)
    if over_budget(results):
        print("warning: verify exceeded its time budget", file=sys.stderr)
    return data, "\n".join(lines), None


COMMANDS = {"moments": cmd_moments, "central": cmd_central, "oracle": cmd_oracle, "dist": cmd_dist,
            "fit": cmd_fit, "bounds": cmd_bounds, "simulate": cmd_simulate, "verify": cmd_verify}


def _emit(args, data, pretty, rows, out) -> None:
    if args.output == "json":
        json.dump(data, out, indent=2)
        out.write("\n")
    elif args.output == "csv":
        if rows is None:
            raise UsageError(f"{args.command} has no CSV form")
        csv.writer(out, lineterminator="\n").writerows(rows)
    else:
        out.write(pretty + "\n")


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    old_prec = dist.PREC
    dist.PREC = args.precision
    try:
        data, pretty, rows = COMMANDS[args.command](args)
        _emit(args, data, pretty, rows, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=err)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    finally:
        dist.PREC = old_prec
    if args.command == "verify" and not data["passed"]:
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
