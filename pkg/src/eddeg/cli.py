"""``eddeg`` command line.

Exit codes: 0 success, 1 usage or parse error, 2 trials disagreed
(NonGeneric), 3 resource limit hit.  Reports go to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import euler
from .critical import (
    EDCertificate,
    Protocol,
    conormal_ideal,
    ed_degree,
    linear_critical_count,
    load_variety,
)
from .errors import EddegError, NonGeneric, ResourceLimit
from .fields import ALT_PRIME, DEFAULT_PRIME, QQ, is_prime, make_field
from .groebner import Limits, groebner_basis, ideal_dimension
from .multiview import conjecture_value, ed_degree_multiview, hl_bound, random_camera_rig
from .poly import MonomialOrder, PolyRing, parse_poly

log = logging.getLogger("eddeg")

DEFAULT_SEED = 20240101
LONG_RUNNING_N = 4
COUNTING = ("implicit", "parametric", "linear-count", "multiview")


@dataclass
class RunConfig:
    command: str
    inputs: dict
    modulus: int = DEFAULT_PRIME
    trials: int = 3
    seed: int = DEFAULT_SEED
    order: MonomialOrder = MonomialOrder()
    output_format: str = "json"
    flags: dict = field(default_factory=dict)

    def protocol(self, primes=None, workers: int = 1, limits: Limits = Limits()) -> Protocol:
        if primes is None:
            if self.flags.get("qq"):
                primes = (0,)
            else:
                second = ALT_PRIME if self.modulus != ALT_PRIME else DEFAULT_PRIME
                primes = (self.modulus, second)
        return Protocol(self.trials, tuple(primes), self.seed, self.order, limits, workers=workers)


class UsageError(EddegError):
    pass


def _env_modulus() -> int:
    raw = os.environ.get("EDDEG_MODULUS")
    if not raw:
        return DEFAULT_PRIME
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"EDDEG_MODULUS is not an integer: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modulus", type=int, default=None,
                        help="prime for GF(p) counting (default: $EDDEG_MODULUS or %d)" % DEFAULT_PRIME)
    common.add_argument("--primes", default=None, help="comma-separated primes to cycle through")
    common.add_argument("--qq", action="store_true", help="count over the rationals")
    common.add_argument("--trials", type=int, default=3)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--order", default="degrevlex", help="degrevlex | lex | block(k)")
    common.add_argument("--format", dest="output_format", choices=("json", "tsv"), default="json")
    common.add_argument("--workers", type=int, default=1, help="run trials in parallel processes")
    common.add_argument("--max-degree", type=int, default=Limits.max_degree)
    common.add_argument("--max-basis", type=int, default=Limits.max_basis)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="eddeg", description="Euclidean distance degrees, two ways.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("implicit", parents=[common], help="ED degree of an implicit variety file")
    p.add_argument("path")
    p.add_argument("--check-codim", action="store_true", help="cross-check the declared codimension")

    p = sub.add_parser("parametric", parents=[common], help="ED degree of a parametrized variety file")
    p.add_argument("path")

    p = sub.add_parser("linear-count", parents=[common], help="critical points of a generic linear function")
    p.add_argument("path")
    p.add_argument("--functional", default=None, help="fixed coefficients, e.g. '2,1'")

    p = sub.add_parser("conormal", parents=[common], help="conormal ideal and its dimension")
    p.add_argument("path")
    p.add_argument("--dual", default=None, help="names for the dual coordinates")

    p = sub.add_parser("multiview", parents=[common], help="ED degree of the affine multiview variety")
    p.add_argument("n", type=int)
    p.add_argument("--long", action="store_true", help=f"allow n >= {LONG_RUNNING_N}")
    p.add_argument("--verify-second-chart", action="store_true",
                   help="rerun every trial in a second random chart of P^3")
    p.add_argument("--rig-out", default=None, help="write the first trial's camera rig as JSON")

    p = sub.add_parser("euler", parents=[common], help="Euler characteristic chain")
    p.add_argument("--symbolic", action="store_true", help="polynomial identities in n")
    p.add_argument("--n", dest="n_range", default="2-10", help="n or a range like 2-10")

    p = sub.add_parser("milnor", parents=[common], help="local Milnor numbers and model fibers")
    p.add_argument("poly", nargs="?", default=None)
    p.add_argument("--vars", default="x,y,z")
    p.add_argument("--point", default=None)
    p.add_argument("--models", action="store_true", help="reduced Euler characteristics of the local models")
    return parser


def _config(args) -> RunConfig:
    modulus = args.modulus if args.modulus is not None else _env_modulus()
    if modulus == 2 or not is_prime(modulus):
        raise UsageError(f"modulus must be an odd prime, got {modulus}")
    if args.command in COUNTING and args.trials < 3:
        raise UsageError("counting commands need --trials >= 3")
    inputs = {k: v for k, v in vars(args).items()
              if k in ("path", "n", "functional", "dual", "poly", "vars", "point", "n_range") and v is not None}
    flags = {k: getattr(args, k) for k in ("qq", "symbolic", "long", "verify_second_chart", "check_codim", "models")
             if getattr(args, k, False)}
    return RunConfig(args.command, inputs, modulus, args.trials, args.seed,
                     MonomialOrder.parse(args.order), args.output_format, flags)


def _primes(args):
    if not args.primes:
        return None
    primes = tuple(int(p) for p in args.primes.split(","))
    for p in primes:
        if p and (p == 2 or not is_prime(p)):
            raise UsageError(f"{p} is not an odd prime")
    return primes


def _base_report(cfg: RunConfig) -> dict:
    return {
        "command": cfg.command,
        "inputs": cfg.inputs,
        "seed": cfg.seed,
        "modulus": 0 if cfg.flags.get("qq") else cfg.modulus,
        "order": str(cfg.order),
        "flags": sorted(cfg.flags),
    }


def _certificate_report(report: dict, cert: EDCertificate) -> dict:
    report.update(cert.as_dict())
    return report


def run_command(args) -> tuple[dict, int]:
    cfg = _config(args)
    limits = Limits(max_degree=args.max_degree, max_basis=args.max_basis)
    protocol = cfg.protocol(_primes(args), args.workers, limits)
    report = _base_report(cfg)
    cmd = cfg.command

    if cmd in ("implicit", "parametric"):
        V = load_variety(args.path)
        if V.mode != cmd:
            raise UsageError(f"{args.path} holds a {V.mode} presentation")
        if getattr(args, "check_codim", False):
            report["dimension"] = V.check_codim()
        return _certificate_report(report, ed_degree(V, protocol, strict=False)), 0

    if cmd == "linear-count":
        V = load_variety(args.path)
        l = None
        if args.functional:
            from fractions import Fraction
            l = tuple(Fraction(x) for x in args.functional.split(","))
        return _certificate_report(report, linear_critical_count(V, l, protocol, strict=False)), 0

    if cmd == "conormal":
        V = load_variety(args.path)
        dual = args.dual.split(",") if args.dual else None
        if not cfg.flags.get("qq"):
            V = V.change_field(make_field(cfg.modulus))
        ideal = conormal_ideal(V, dual)
        G = groebner_basis(ideal, cfg.order, limits=limits)
        report["variables"] = list(ideal.ring.names)
        report["generators"] = [str(g) for g in ideal.generators]
        report["dimension"] = ideal_dimension(G)
        return report, 0

    if cmd == "multiview":
        n = args.n
        if n < 2:
            raise UsageError("multiview needs n >= 2")
        if n >= LONG_RUNNING_N and not args.long:
            raise UsageError(f"n >= {LONG_RUNNING_N} is long-running; pass --long")
        if args.rig_out:
            rig = random_camera_rig(n, cfg.seed, space_twist=args.verify_second_chart)
            Path(args.rig_out).write_text(rig.to_json() + "\n", encoding="utf-8")
        cert = ed_degree_multiview(n, protocol, strict=False)
        report = _certificate_report(report, cert)
        if args.verify_second_chart:
            second = ed_degree_multiview(n, protocol, second_chart=True, strict=False)
            report["second_chart"] = second.as_dict()
            if second.count != cert.count:
                report["agreed"] = False
        report["conjecture"] = conjecture_value(n)
        report["upper_bound"] = hl_bound(n)
        return report, 0

    if cmd == "euler":
        if args.symbolic:
            row = euler.euler_row(euler.SYMBOLIC)
            report["table"] = [{k: euler.format_value(v) for k, v in row.items()}]
            report["polynomial"] = euler.format_value(row["ed_degree"])
        else:
            lo, _, hi = args.n_range.partition("-")
            ns = range(int(lo), int(hi or lo) + 1)
            if ns.start < 2:
                raise UsageError("the Euler chain needs n >= 2")
            report["table"] = [{k: euler.format_value(v) for k, v in euler.euler_row(n).items()} for n in ns]
        return report, 0

    if cmd == "milnor":
        if args.models:
            report["models"] = {m.name: euler.model_fiber_chi(m) for m in euler.MilnorModel}
            return report, 0
        if not args.poly:
            raise UsageError("milnor needs a polynomial or --models")
        ring = PolyRing([v.strip() for v in args.vars.split(",")], QQ)
        f = parse_poly(args.poly, ring)
        point = [x for x in args.point.split(",")] if args.point else None
        from fractions import Fraction
        report["milnor_number"] = euler.milnor_number(f, [Fraction(x) for x in point] if point else None)
        return report, 0

    raise UsageError(f"unknown command {cmd}")  # pragma: no cover


def _exit_code(report: dict) -> int:
    if "agreed" in report and not report["agreed"]:
        return 2
    return 0


def to_tsv(report: dict) -> str:
    if "table" in report:
        cols = list(euler.EULER_COLUMNS)
        lines = ["\t".join(cols)]
        for row in report["table"]:
            lines.append("\t".join(str(row[c]) for c in cols))
        return "\n".join(lines) + "\n"
    keys = [k for k in ("command", "count", "agreed", "dimension", "milnor_number", "seed", "modulus")
            if k in report]
    return "\t".join(keys) + "\n" + "\t".join(str(report[k]) for k in keys) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "tsv":
        return to_tsv(report)
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    start = time.perf_counter()
    try:
        report, code = run_command(args)
    except NonGeneric as exc:
        print(f"eddeg: {exc}", file=sys.stderr)
        return 2
    except ResourceLimit as exc:
        print(f"eddeg: resource limit: {exc}", file=sys.stderr)
        return 3
    except (EddegError, ValueError, OSError) as exc:
        print(f"eddeg: {exc}", file=sys.stderr)
        return 1
    report["timings"] = {"total_seconds": round(time.perf_counter() - start, 3)}
    code = code or _exit_code(report)
    if code == 2:
        print("eddeg: trials disagree; see the trials field", file=sys.stderr)
    sys.stdout.write(render(report, args.output_format))
    return code


if __name__ == "__main__":
    sys.exit(main())
