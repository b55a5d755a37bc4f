"""Batch command-line driver with JSON/CSV reports.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage errors,
violated hypotheses, or I/O failures.  Reports are deterministic apart from
the timing field.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import __version__, classical
from .cache import ENV_VAR, cache_from_env
from .cong import CongError, gamma0, SubgroupSpec
from .eig import (HypothesisError, decompose, levelraise_check, sturm_bound,
                  verify_weight_raising)
from .gfq import FieldError, build_field, is_prime
from .msym import ManinSpace
from .rep import (brauer_signature, group_table, meataxe_irreducible,
                  signature_direct_sum, ss_equal, verify_semisimplicity)
from .coef import induced_module, symm_module, trivial_module, twisted_tensor_module

SCHEMA_VERSION = 1


def _parser():
    ap = argparse.ArgumentParser(
        prog="modpsym",
        description="exact mod-p modular symbol verifications")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("-o", "--output", help="report path (default: stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--cache-dir", help=f"operator cache dir (or ${ENV_VAR})")

    sp = sub.add_parser("verify", help="weight-raising suite at (level, p)")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--subgroup", choices=("gamma0", "gamma1"), default="gamma1")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--degree-cap", type=int, default=4)
    common(sp)

    sp = sub.add_parser("eig", help="cuspidal eigensystem table")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--subgroup", choices=("gamma0", "gamma1"), default="gamma0")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--degree-cap", type=int, default=4)
    common(sp)

    sp = sub.add_parser("levelraise", help="mod-p level-raising shadow")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--subgroup", choices=("gamma0", "gamma1"), default="gamma0")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--degree-cap", type=int, default=4)
    common(sp)

    sp = sub.add_parser("rep", help="SL2(F_q) splitting and irreducibility suite")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--p", type=int, help="characteristic (validated against q)")
    common(sp)

    sp = sub.add_parser("classical", help="q-expansion congruence checks")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--precision", type=int, default=100)
    common(sp)
    return ap


def _check(name, ok, **details):
    return {"name": name, "pass": bool(ok),
            "details": {k: v for k, v in sorted(details.items())}}


def _run_eig(args, cache):
    t0 = time.time()
    spec = gamma0(args.level) if args.subgroup == "gamma0" else SubgroupSpec(args.level, ())
    F = build_field(args.p, 1)
    S = ManinSpace(spec, args.weight, None, F, cache)
    bound = args.bound or sturm_bound(spec, args.weight)
    primes = [r for r in range(2, bound + 1)
              if is_prime(r) and args.level % r and r != args.p][:8]
    systems, unsplit = decompose(S, primes, max_degree=args.degree_cap)
    return {
        "driver": "eig",
        "level": args.level,
        "weight": args.weight,
        "p": args.p,
        "subgroup": args.subgroup,
        "dim_cuspidal": S.cuspidal_basis().ncols,
        "systems": [e.serialize() for e in systems],
        "unsplit_blocks": len(unsplit),
        "pass": True,
        "timing_s": round(time.time() - t0, 3),
    }


def _run_rep(args, cache):
    t0 = time.time()
    q = args.q
    G = group_table(q)
    p = G.p
    if args.p is not None and args.p != p:
        raise HypothesisError(f"--p {args.p} does not match the characteristic of F_{q}")
    F = G.field
    checks = []
    checks.append(_check("class-equation", sum(c.size for c in G.classes) == len(G),
                         order=len(G), n_classes=len(G.classes)))
    ind = induced_module(q, F)
    triv = trivial_module(F)
    if q == p:
        partner = symm_module(p - 1, F)
        partner_name = f"symm({p - 1})"
    else:
        partner = twisted_tensor_module(p, list(range(F.d)), F)
        partner_name = f"twisted_tensor({p},{list(range(F.d))})"
    sig_ind = brauer_signature(ind, G)
    sig_sum = signature_direct_sum(brauer_signature(triv, G),
                                   brauer_signature(partner, G), F)
    checks.append(_check("brauer-semisimplification", ss_equal(sig_ind, sig_sum),
                         partner=partner_name,
                         p_regular_classes=len(sig_ind)))
    verdict = meataxe_irreducible(partner, G)
    checks.append(_check("partner-irreducible", verdict.irreducible,
                         dimension=partner.dim, tries=verdict.tries))
    vind = meataxe_irreducible(ind, G)
    checks.append(_check("induced-reducible", (not vind.irreducible)
                         and vind.witness is not None,
                         witness_dim=0 if vind.witness is None else vind.witness.nrows))
    checks.append(_check("induced-semisimple", verify_semisimplicity(ind, G)))
    return {
        "driver": "rep",
        "q": q,
        "p": p,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
        "timing_s": round(time.time() - t0, 3),
    }


def _run_classical(args):
    t0 = time.time()
    p = args.p
    if not is_prime(p) or p < 5:
        raise HypothesisError("characteristic must be a prime >= 5")
    checks = []
    checks.append(_check("hasse-lift-congruence",
                         classical.hasse_congruence_holds(p, args.precision),
                         weight=p - 1, precision=args.precision))
    bern = classical.bernoulli(p - 1)
    checks.append(_check("bernoulli-denominator",
                         bern.denominator % p == 0,
                         denominator=str(bern.denominator)))
    vs_ok = all(classical.bernoulli(k).denominator ==
                classical.von_staudt_clausen_denominator(k)
                for k in range(2, 42, 2))
    checks.append(_check("von-staudt-clausen", vs_ok, max_weight=40))
    import random
    rng = random.Random(p)
    theta_ok = True
    for _ in range(20):
        coeffs = [rng.randrange(p) for _ in range(30)]
        f = classical.QExpansion(p, coeffs, 30)
        g = f
        for _ in range(p):
            g = classical.theta_op(g)
        theta_ok = theta_ok and (g == classical.theta_op(f))
    checks.append(_check("theta-iteration", theta_ok, trials=20, precision=30))
    return {
        "driver": "classical",
        "p": p,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
        "timing_s": round(time.time() - t0, 3),
    }


def _eigensystem_rows(report):
    rows = []
    for item in report.get("systems", []):
        sysrec = item.get("system", item)
        for r, coeffs in sysrec["values"].items():
            rows.append({"prime": r, "value": ":".join(map(str, coeffs)),
                         "degree": sysrec["degree"],
                         "multiplicity": sysrec["multiplicity"],
                         "orbit": sysrec["orbit"]})
    return rows


def _write_report(report, args):
    report = dict(report)
    report["schema_version"] = SCHEMA_VERSION
    report["artifact_version"] = __version__
    if args.format == "csv":
        rows = _eigensystem_rows(report)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["prime", "value", "degree",
                                            "multiplicity", "orbit"])
        w.writeheader()
        for row in rows:
            w.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    ap = _parser()
    args = ap.parse_args(argv)
    cache = cache_from_env(getattr(args, "cache_dir", None))
    try:
        if args.command == "verify":
            report = verify_weight_raising(args.level, args.p, args.subgroup,
                                           bound=args.bound,
                                           max_degree=args.degree_cap,
                                           cache=cache)
        elif args.command == "eig":
            report = _run_eig(args, cache)
        elif args.command == "levelraise":
            report = levelraise_check(args.level, args.weight, args.p,
                                      args.subgroup, bound=args.bound,
                                      max_degree=args.degree_cap, cache=cache)
        elif args.command == "rep":
            report = _run_rep(args, cache)
        elif args.command == "classical":
            report = _run_classical(args)
        else:  # pragma: no cover
            raise HypothesisError(f"unknown command {args.command}")
    except (HypothesisError, CongError, FieldError, ValueError) as exc:
        print(f"modpsym: rejected: {exc}", file=sys.stderr)
        return 2
    try:
        _write_report(report, args)
    except OSError as exc:
        print(f"modpsym: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0 if report.get("pass", False) else 1


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
