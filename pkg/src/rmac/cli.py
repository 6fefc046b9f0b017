"""Command-line interface.

Subcommands: bounds, construct, search profile|gmax|certify, verify,
corpus.  Exit codes: 0 = feasible / achieved / verified, 1 = infeasible /
refuted / failed, 2 = unknown or usage/parse error.  RMAC_BUDGET_SECS sets
the default wall budget; explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .bounds import DomainError, Inapplicable, Relaxed, Strict, n0_bounds
from .certio import (IoFailure, ParseError, certificate_for, format_certificate,
                     read_certificates, regenerate_corpus, verify_certificate,
                     write_certificate, write_certificates)
from .construct import build_construction
from .family import Family
from .search import (Exact, Feasible, Infeasible, Interval, LowerBound,
                     ProfileInstance, SearchBudget, SearchConfig, Unknown,
                     certify_threshold_range, feasible_exact_profile, g_exact)

EXIT_OK = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2

BUDGET_ENV = "RMAC_BUDGET_SECS"


def parse_levels(spec: str) -> tuple[int, ...]:
    """Parse a level list like '2..6' or '2..6,9' or '3'."""
    out: set[int] = set()
    for part in spec.split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"empty level token in {spec!r}")
        if ".." in part:
            a_str, b_str = part.split("..", 1)
            a, b = int(a_str), int(b_str)
            if a > b:
                raise ValueError(f"bad range {part!r}")
            out.update(range(a, b + 1))
        else:
            out.add(int(part))
    return tuple(sorted(out))


def parse_range(spec: str) -> tuple[int, int] | None:
    if spec.strip().lower() in ("", "none", "skip"):
        return None
    if ".." in spec:
        a, b = spec.split("..", 1)
        return (int(a), int(b))
    v = int(spec)
    return (v, v)


def _budget(args) -> SearchBudget:
    wall = getattr(args, "budget_secs", None)
    if wall is None:
        env = os.environ.get(BUDGET_ENV)
        if env:
            wall = float(env)
    return SearchBudget(max_nodes=getattr(args, "budget_nodes", None),
                        wall_time=wall,
                        threads=getattr(args, "threads", 1))


def _config(args) -> SearchConfig:
    return SearchConfig(symmetry=not getattr(args, "no_symmetry", False))


def _emit_witness(args, family: Family, r: int, provenance: str) -> None:
    cert = certificate_for(family, r, provenance, version=__version__)
    if getattr(args, "output", None):
        write_certificate(cert, args.output)
    else:
        sys.stdout.write(format_certificate(cert))


def _cmd_bounds(args) -> int:
    report = n0_bounds(args.r, args.n)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
        return EXIT_OK
    print(f"r = {report.r}")
    if report.n is not None:
        print(f"g({report.n},{report.r}) <= {report.g_upper}"
              f"    [{report.notes.get('g_upper', '')}]")
    exact = "unknown" if report.n0_exact is None else str(report.n0_exact)
    print(f"n0 lower bound: {report.n0_lower}")
    print(f"n0 upper bound: {report.n0_upper}")
    print(f"n0 exact:       {exact}")
    return EXIT_OK


def _cmd_construct(args) -> int:
    from .bounds import construction_applicability
    app = construction_applicability(args.n, args.r)
    if isinstance(app, Inapplicable):
        print(f"construction inapplicable at (n={args.n}, r={args.r}): {app.reason}",
              file=sys.stderr)
        return EXIT_NO
    if args.mode == "strict" and not isinstance(app, Strict):
        print(f"(n={args.n}, r={args.r}) is below the strict threshold; "
              f"rerun with --mode best-effort", file=sys.stderr)
        return EXIT_NO
    fam = build_construction(args.n, args.r)
    tag = "constructed-strict" if isinstance(app, Strict) else "constructed-relaxed"
    _emit_witness(args, fam, args.r, tag)
    if args.json:
        print(json.dumps({"n": args.n, "r": args.r, "tier": tag,
                          "num_levels": len(fam.profile.occurring)}))
    return EXIT_OK


def _print_stats(args, stats) -> None:
    if getattr(args, "stats_json", False):
        print(json.dumps(stats.to_dict()))


def _cmd_search_profile(args) -> int:
    inst = ProfileInstance(args.n, args.r, parse_levels(args.levels))
    out = feasible_exact_profile(inst, _budget(args), _config(args))
    if isinstance(out, Feasible):
        _emit_witness(args, out.witness, args.r, "search")
        if args.json:
            print(json.dumps({"verdict": "feasible", "stats": out.stats.to_dict()}))
        else:
            print("feasible")
        _print_stats(args, out.stats)
        return EXIT_OK
    verdict = "infeasible" if isinstance(out, Infeasible) else "unknown"
    if args.json:
        print(json.dumps({"verdict": verdict, "stats": out.stats.to_dict()}))
    else:
        print(verdict)
    _print_stats(args, out.stats)
    return EXIT_NO if verdict == "infeasible" else EXIT_UNKNOWN


def _cmd_search_gmax(args) -> int:
    out = g_exact(args.n, args.r, _budget(args), _config(args))
    if isinstance(out, Exact):
        if args.json:
            print(json.dumps({"kind": "exact", "value": out.value,
                              "stats": out.stats.to_dict()}))
        else:
            print(f"g({args.n},{args.r}) = {out.value}")
        if out.value > 0:
            _emit_witness(args, out.witness, args.r, "search")
        _print_stats(args, out.stats)
        return EXIT_OK
    if isinstance(out, LowerBound):
        if args.json:
            print(json.dumps({"kind": "lower_bound", "value": out.value,
                              "stats": out.stats.to_dict()}))
        else:
            print(f"g({args.n},{args.r}) >= {out.value} (budget expired)")
        _emit_witness(args, out.witness, args.r, "search")
        _print_stats(args, out.stats)
        return EXIT_UNKNOWN
    if args.json:
        print(json.dumps({"kind": "interval", "lo": out.lo, "hi": out.hi,
                          "stats": out.stats.to_dict()}))
    else:
        print(f"g({args.n},{args.r}) in [{out.lo}, {out.hi}] (budget expired)")
    _print_stats(args, out.stats)
    return EXIT_UNKNOWN


def _cmd_search_certify(args) -> int:
    reports = certify_threshold_range(args.r, args.from_n, args.to_n,
                                      _budget(args), _config(args))
    certs = []
    for rep in reports:
        line = f"n={rep.n}: {rep.status} (n-3 = {rep.n - 3}, via {rep.method})"
        if not args.json:
            print(line)
        if rep.witness is not None:
            certs.append(certificate_for(rep.witness, args.r, "search",
                                         version=__version__))
    if args.json:
        print(json.dumps([rep.to_dict() for rep in reports], indent=2))
    if args.output and certs:
        write_certificates(certs, args.output)
    statuses = {rep.status for rep in reports}
    if "unknown" in statuses:
        return EXIT_UNKNOWN
    if "refuted" in statuses:
        return EXIT_NO
    return EXIT_OK


def _cmd_verify(args) -> int:
    all_ok = True
    results = []
    for path in args.files:
        try:
            certs = read_certificates(path)
        except (ParseError, IoFailure) as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            return EXIT_UNKNOWN
        for i, cert in enumerate(certs):
            report = verify_certificate(cert)
            ok = report.matches_claim and report.g_bound_consistent
            all_ok &= ok
            results.append({"file": str(path), "index": i, "n": cert.n,
                            "r": cert.r, "provenance": cert.provenance,
                            **report.to_dict()})
            if not args.json:
                status = "ok" if ok else "FAIL"
                print(f"{path}[{i}] n={cert.n} r={cert.r} "
                      f"levels={report.num_levels}: {status}")
    if args.json:
        print(json.dumps(results, indent=2))
    return EXIT_OK if all_ok else EXIT_NO


def _cmd_corpus(args) -> int:
    extra = tuple(int(t) for t in args.extra_r.split(",") if t.strip()) \
        if args.extra_r else ()
    if args.heavy:
        extra = tuple(sorted(set(extra) | set(range(4, 11))))
    manifest = regenerate_corpus(
        args.out,
        r2_range=parse_range(args.r2_range),
        r3_range=parse_range(args.r3_range),
        extra_r=extra,
        budget=_budget(args),
        config=_config(args),
        version=__version__,
    )
    if args.json:
        print(json.dumps(manifest, indent=2))
    else:
        done = sum(1 for e in manifest["entries"] if e["status"] == "ok")
        print(f"wrote {len(manifest['files'])} files, {done} certificates, "
              f"{len(manifest['unknown'])} unknown")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="machine-readable output")
    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget-nodes", type=int, default=None, metavar="X")
    budget.add_argument("--budget-secs", type=float, default=None, metavar="S")
    budget.add_argument("--threads", type=int, default=1, metavar="T")
    budget.add_argument("--no-symmetry", action="store_true",
                        help="disable first-level orbit pruning")
    budget.add_argument("--stats-json", action="store_true",
                        help="print search statistics as JSON")

    parser = argparse.ArgumentParser(
        prog="rmac",
        description="Antichains with a multiplicity floor on every occurring level",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common],
                       help="evaluate the closed-form bounds")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("construct", parents=[common],
                       help="build the explicit family at (n, r)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=["strict", "best-effort"],
                   default="best-effort")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("search", help="exhaustive search commands")
    ssub = p.add_subparsers(dest="search_command", required=True)

    sp = ssub.add_parser("profile", parents=[common, budget],
                         help="decide one exact-profile instance")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--levels", required=True, metavar="A..B[,C]")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_search_profile)

    sp = ssub.add_parser("gmax", parents=[common, budget],
                         help="maximize the number of occurring sizes")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_search_gmax)

    sp = ssub.add_parser("certify", parents=[common, budget],
                         help="certify the n-3 target over a range of n")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--from", dest="from_n", type=int, required=True)
    sp.add_argument("--to", dest="to_n", type=int, required=True)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_search_certify)

    p = sub.add_parser("verify", parents=[common],
                       help="re-verify certificate files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("corpus", parents=[common, budget],
                       help="regenerate the certificate corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--heavy", action="store_true",
                   help="include the n=2r+5 instances for r=4..10")
    p.add_argument("--r2-range", default="4..21", metavar="A..B|none")
    p.add_argument("--r3-range", default="9..24", metavar="A..B|none")
    p.add_argument("--extra-r", default="4", metavar="R[,R...]")
    p.set_defaults(func=_cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


def run() -> None:
    sys.exit(main())
