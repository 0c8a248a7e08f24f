"""Command line interface.

Exit codes: 0 on success / certified / verified, 2 on NotCertifiable or a
failed verification or check, 1 on any other error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import cohom, fields
from .certify import Certificate, canonical_dumps, certify, verify_report
from .errors import Kpi1Error, NotCertifiable, NotFoundWithinBound
from .fields import FieldDescriptor, PrimeSet
from .linking import linking_data
from .mild import find_mild_witness
from .search import SearchDomain, augment_to_mild

DEFAULTS = {"bound": 1_000_000, "workers": 1, "lie_degree": 6}


def _primes(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(x) for x in text.split(",") if x.strip()]


def _places(fld: FieldDescriptor, primes: list[int]) -> list:
    out = []
    for q in primes:
        out.extend(fields.places_over(fld, q))
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="Q", help="Q, Q(i) or Q(sqrt-d)")
    common.add_argument("--p", type=int, default=3)
    common.add_argument("--primes", default="", help="comma separated rational primes")
    common.add_argument("--bound", type=int)
    common.add_argument("--lie-degree", type=int, dest="lie_degree")
    common.add_argument("--workers", type=int)
    common.add_argument("--out", help="write JSON output to this file")
    common.add_argument("--config", help="JSON file with bound/workers/lie_degree defaults")

    parser = argparse.ArgumentParser(prog="tamekpi1", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("invariants", "cohomology", "linking", "check-mild", "certify",
                 "augment", "classify-degenerate", "minimize"):
        sub.add_parser(name, parents=[common])
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("certificate", help="path to a certificate JSON file")
    return parser


def _settings(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    for key in DEFAULTS:
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    return cfg


def _emit(obj, args, canonical: bool = False) -> None:
    text = canonical_dumps(obj) if canonical else json.dumps(obj, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def run(args) -> int:
    cfg = _settings(args)
    fld = FieldDescriptor.parse(args.field)
    p = args.p
    primes = _primes(args.primes)
    cmd = args.command

    if cmd == "invariants":
        _emit(asdict(fields.invariants(fld, p)), args)
        return 0
    if cmd == "cohomology":
        S = fields.minimize(_places(fld, primes), p)
        _emit(cohom.global_dimensions(fld, p, S).to_json(), args)
        return 0
    if cmd == "minimize":
        S, dropped = fields.minimize_with_reasons(_places(fld, primes), p)
        _emit({"kept": [pl.to_json() for pl in S],
               "dropped": [{"place": pl.to_json(), "reason": why} for pl, why in dropped]}, args)
        return 0
    if cmd == "classify-degenerate":
        places = _places(fld, primes)
        if len(places) != 1:
            raise Kpi1Error("classify-degenerate expects exactly one prime")
        verdict = cohom.classify_degenerate(fld, p, places[0])
        _emit(asdict(verdict), args)
        return 0 if verdict.degenerate else 2
    if cmd == "linking":
        _emit(linking_data(primes, p).to_json(), args)
        return 0
    if cmd == "check-mild":
        result = find_mild_witness(linking_data(primes, p))
        if result:
            _emit({"witness": result.to_json()}, args)
            return 0
        _emit({"witness": None, "evaluated": result.evaluated, "reason": result.reason}, args)
        return 2
    dom = SearchDomain(p, cfg["bound"], workers=cfg["workers"])
    if cmd == "augment":
        try:
            res = augment_to_mild(primes, dom, fld)
        except NotFoundWithinBound as exc:
            _emit({"error": str(exc), "transcript": exc.transcript.to_json() if exc.transcript else None}, args)
            return 2
        _emit(res.to_json(), args)
        return 0
    if cmd == "certify":
        try:
            cert = certify(fld, p, primes, dom, cfg["lie_degree"])
        except (NotCertifiable, NotFoundWithinBound) as exc:
            print(f"not certifiable: {exc}", file=sys.stderr)
            return 2
        _emit(cert.to_json(), args, canonical=True)
        return 0
    if cmd == "verify":
        with open(args.certificate) as fh:
            cert = Certificate.loads(fh.read())
        rep = verify_report(cert, args.lie_degree)
        _emit({"ok": rep.ok, "checks": rep.checks, "notes": rep.notes}, args)
        return 0 if rep.ok else 2
    raise Kpi1Error(f"unknown command {cmd}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (Kpi1Error, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
