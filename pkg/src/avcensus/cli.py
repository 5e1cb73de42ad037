"""``avcensus`` command-line interface.

Exit codes: 0 success, 2 precondition violation, 3 internal assertion.
"""

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import config
from .errors import CensusError, InternalAssertionError, PreconditionError

EXIT_OK, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3


def _rat(x):
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _emit(obj, fmt, out=None):
    out = out or sys.stdout
    if fmt == "csv" and isinstance(obj, list) and obj and isinstance(obj[0], dict):
        w = csv.DictWriter(out, fieldnames=list(obj[0].keys()), lineterminator="\n")
        w.writeheader()
        for row in obj:
            w.writerow(row)
    else:
        json.dump(obj, out, indent=2, sort_keys=True, default=str)
        out.write("\n")


# -- weil ----------------------------------------------------------------------

def cmd_weil_count(args):
    from .weil import enumerate_weil, lemma_count_bounds, to_json_list
    res = enumerate_weil(args.g, args.q, keep_list=bool(args.list))
    lb = lemma_count_bounds(args.g, args.q)
    if args.list:
        with open(args.list, "w") as fh:
            json.dump(to_json_list(res.polynomials), fh)
    paper = float(lb.paper_bound.value())
    _emit({"g": args.g, "q": args.q, "count": res.count,
           "paper_bound": lb.paper_decimal, "rigorous_bound": lb.rigorous_bound,
           "paper_bound_exceeded": res.count > paper}, args.format)


# -- lattice ---------------------------------------------------------------------

def cmd_lattice_hilb(args):
    from .lattice_count import hilb_brute_force, hilb_count
    out = {"ell": args.ell, "j": args.j, "count": hilb_count(args.ell, args.j)}
    if args.brute:
        out["brute_force"] = hilb_brute_force(args.ell, args.j)
    _emit(out, args.format)


def cmd_lattice_stable(args):
    from .lattice_count import TruncatedMatrix, count_stable_sublattices
    try:
        with open(args.matrix) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise PreconditionError(f"cannot read matrix file {args.matrix}: {exc}") from exc
    gamma = TruncatedMatrix.from_json(data)
    counts = count_stable_sublattices(gamma, args.max_colength)
    rows = [{"colength": c, "count": n} for c, n in sorted(counts.items())]
    _emit(rows, args.format)


def cmd_lattice_glue(args):
    from .lattice_count import isotypic_glue_count
    f1 = [int(x) for x in args.f1.split(",")]
    f2 = [int(x) for x in args.f2.split(",")]
    r = isotypic_glue_count(f1, f2, args.ell, args.precision)
    _emit({"brute_count": r.brute_count, "delta_prime": r.delta_prime,
           "ell_delta_prime": r.predicted, "delta_unordered": r.delta_unordered,
           "matches": r.matches}, args.format)


# -- field -----------------------------------------------------------------------

def cmd_field_classno(args):
    from .numfield import class_number, class_number_brute, fundamental_discriminant
    _emit({"d": args.d, "D": fundamental_discriminant(args.d), "h": class_number(args.d),
           "h_brute": class_number_brute(args.d)}, args.format)


def cmd_field_scan(args):
    from .numfield import class_number_one_scan
    ds = class_number_one_scan(args.limit)
    fmt = args.format or "csv"
    _emit([{"d": d, "h": 1} for d in ds] if fmt == "csv" else ds, fmt)


def cmd_field_minkowski(args):
    from .numfield import minkowski_bound
    _emit({"n": args.n, "bound": minkowski_bound(args.n)}, args.format)


# -- hermitian -------------------------------------------------------------------

def _field_arg(s):
    return "Z" if s.upper() == "Z" else int(s)


def cmd_hermitian_classes(args):
    from .hermitian.enumerate import enumerate_classes
    from .hermitian.isometry import automorphism_count
    reps = enumerate_classes(_field_arg(args.field), args.rank, args.bound)
    out = [{"gram": g.to_json(), "aut": automorphism_count(g), "norm_tag": g.norm_gcd()}
           for g in reps]
    _emit({"field": args.field, "rank": args.rank, "classes": len(reps), "lattices": out}, "json")


def cmd_hermitian_mass(args):
    from .hermitian.enumerate import mass_brute
    from .hermitian.mass import mass_formula
    field_ = _field_arg(args.field)
    out = {"field": args.field, "rank": args.rank}
    if args.method in ("formula", "both"):
        out["formula"] = mass_formula(field_, args.rank).to_json()
    if args.method in ("brute", "both"):
        out["brute"] = _rat(mass_brute(field_, args.rank, args.bound))
    if args.method == "both":
        f = out["formula"]["mass"]
        out["agree"] = f == out["brute"]
        if not out["agree"]:
            _emit(out, "json")
            raise InternalAssertionError("mass formula and enumeration disagree")
    _emit(out, "json")


# -- cl --------------------------------------------------------------------------

def cmd_cl_sample(args):
    from .cohen_lenstra import joint_sample, trivial_cokernel_density
    ns = [int(x) for x in args.n.split(",")]
    targets = [()] * len(ns)
    if args.targets:
        targets = [tuple(int(e) for e in t.split(".") if e) for t in args.targets.split(",")]
    workers = args.workers or config.get("census.threads")
    est = joint_sample(args.g, args.ell, args.k, ns, targets, args.trials, args.seed, workers)
    out = est.to_json()
    out["exact_trivial_density_single"] = float(trivial_cokernel_density(args.g, args.ell))
    _emit(out, "json")


def cmd_cl_pm1(args):
    from .cohen_lenstra import pm1_avoidance_bound
    r = pm1_avoidance_bound(args.ell, args.g, args.trials, args.seed)
    _emit(r.to_json(), "json")
    if not r.consistent:
        raise InternalAssertionError("avoidance estimate below bound - 3 sigma")


# -- ec --------------------------------------------------------------------------

def cmd_ec_scan(args):
    from .ellcurve import primes_upto, verify_not_both_p_groups
    rows = []
    failed = False
    for p in primes_upto(args.p_max):
        p = int(p)
        if p < 5:
            continue
        r = verify_not_both_p_groups(p)
        rows.append({"p": p, "curves": r.curves, "violations": len(r.violations),
                     "passed": r.passed})
        failed |= not r.passed
    _emit(rows, args.format or "csv")
    if failed:
        raise InternalAssertionError("a curve with both N1 and N2 p-powers was found")


def cmd_ec_density(args):
    from .ellcurve import good_prime_density
    good, total, ratio = good_prime_density(args.x)
    _emit([{"x": args.x, "good": good, "primes": total, "ratio": ratio,
            "target": 511 / 512}], args.format or "csv")


def cmd_ec_cm(args):
    from .ellcurve import find_cm_trace
    hit = find_cm_trace(args.p, args.d)
    row = {"p": args.p, "d": args.d, "found": hit is not None,
           "a": hit[0] if hit else "", "b": hit[1] if hit else "",
           "note": "order-level certificate only: Z[Frob] in O_L"}
    _emit([row], args.format or "csv")


# -- census ----------------------------------------------------------------------

def cmd_census_report(args):
    from .census import report
    sys.stdout.write(report(args.p, args.g_min, args.g_max, args.format or "csv",
                            cache_dir=args.cache_dir))


def cmd_census_bounds(args):
    from .census import (isogeny_bound, per_class_bound, squarefree_polarization_bound,
                         total_unpolarized_bound)
    out = {"isogeny": isogeny_bound(args.g, args.p).to_json(args.p),
           "per_class": per_class_bound(args.g, args.p).to_json(args.p),
           "total_unpolarized": total_unpolarized_bound(args.g, args.p).to_json(args.p)}
    if args.g >= 2:
        out["squarefree_polarization"] = squarefree_polarization_bound(args.g, args.p).to_json(args.p)
    _emit(out, "json")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="versioned JSON key-value config file")
    common.add_argument("--cache-dir", dest="cache_dir", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=["json", "csv"], default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    ap = argparse.ArgumentParser(prog="avcensus", parents=[common],
                                 description="Counts and bounds for abelian varieties over finite fields.")
    sub = ap.add_subparsers(dest="group", required=True)

    def group(name, help_):
        g = sub.add_parser(name, help=help_)
        return g.add_subparsers(dest="cmd", required=True)

    def cmd(grp, name, func, help_):
        p = grp.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    w = group("weil", "Weil polynomials")
    p = cmd(w, "count", cmd_weil_count, "count q-Weil polynomials of degree 2g")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--list", metavar="OUT.json")

    lat = group("lattice", "stable lattices and Hilbert-scheme counts")
    p = cmd(lat, "hilb", cmd_lattice_hilb, "colength-j ideals of Z_l[[x]]")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="also run the exhaustive count")
    p = cmd(lat, "stable", cmd_lattice_stable, "gamma-stable sublattices by colength")
    p.add_argument("--matrix", required=True)
    p.add_argument("--max-colength", dest="max_colength", type=int, required=True)
    p = cmd(lat, "glue", cmd_lattice_glue, "isotypic gluing count")
    p.add_argument("--f1", required=True, help="coefficients, lowest degree first")
    p.add_argument("--f2", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--precision", type=int, default=6)

    f = group("field", "imaginary quadratic fields")
    p = cmd(f, "classno", cmd_field_classno, "class number of Q(sqrt(-d))")
    p.add_argument("--d", type=int, required=True)
    p = cmd(f, "scan-h1", cmd_field_scan, "class-number-1 fields up to a limit")
    p.add_argument("--limit", type=int, required=True)
    p = cmd(f, "minkowski", cmd_field_minkowski, "maximal finite subgroup order bound of GL_n(Z)")
    p.add_argument("--n", type=int, required=True)

    h = group("hermitian", "unimodular hermitian lattices")
    p = cmd(h, "classes", cmd_hermitian_classes, "enumerate classes")
    p.add_argument("--field", required=True, help="d for Q(sqrt(-d)), or Z")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--bound", type=int)
    p = cmd(h, "mass", cmd_hermitian_mass, "mass by formula and/or enumeration")
    p.add_argument("--field", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--method", choices=["formula", "brute", "both"], default="formula")
    p.add_argument("--bound", type=int)

    c = group("cl", "Cohen-Lenstra sampling")
    p = cmd(c, "sample", cmd_cl_sample, "joint cokernel sampling")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", required=True, help="comma-separated exponents n_j")
    p.add_argument("--targets", help="comma-separated groups, each as dot-separated exponents; default trivial")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int)
    p = cmd(c, "pm1", cmd_cl_pm1, "+-1 eigenvalue avoidance bound and estimate")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--g", type=int, default=6)
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)

    e = group("ec", "elliptic curves over prime fields")
    p = cmd(e, "scan-lemma", cmd_ec_scan, "check N1, N2 are not both p-powers")
    p.add_argument("--p-max", dest="p_max", type=int, required=True)
    p = cmd(e, "density", cmd_ec_density, "density of good primes")
    p.add_argument("--x", type=int, required=True)
    p = cmd(e, "cm", cmd_ec_cm, "solve a^2 - 4p = -d b^2")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    cen = group("census", "headline bounds")
    p = cmd(cen, "report", cmd_census_report, "per-g table of bounds")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--g-min", dest="g_min", type=int, default=1)
    p.add_argument("--g-max", dest="g_max", type=int, required=True)
    p = cmd(cen, "bounds", cmd_census_bounds, "component breakdown at one (g, p)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("cache_dir", "format", "threads"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        config.from_environment()
        if args.config:
            config.load(args.config)
        if args.cache_dir:
            config.set_value("census.cache_dir", args.cache_dir)
        if args.threads:
            config.set_value("census.threads", args.threads)
        args.func(args)
    except InternalAssertionError as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (PreconditionError, CensusError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
