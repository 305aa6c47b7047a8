"""Command-line entry point.

Exit codes: 0 success, 1 validation or decoding failure, 2 usage error,
3 construction error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import core
from .caching import round_trip_verify
from .chain import ChainSyntaxError
from .errors import ConstructionError, DecodeFailure, MalformedPda, PdaError
from .pipeline import StepMismatch, run_chain
from .randbc import RandBcSpec, rand_bc
from .sweep import FAMILIES, lower_hull, mn_points, sort_points, sweep, to_csv

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_CONSTRUCTION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload) if args.json else text)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load(path: str) -> core.PdaArray:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return core.loads(text)


def cmd_build(args) -> int:
    res = run_chain(args.chain, validate_steps=args.check_steps)
    if args.out:
        _write(args.out, core.dumps(res.pda) + "\n")
    prm = res.params
    payload = {"chain": args.chain, "K": prm.K, "f": prm.f, "Z": prm.Z, "S": prm.S,
               "g": prm.g, "memoryRatio": str(prm.memory_ratio), "rate": str(prm.rate),
               "trace": [str(t) for t in res.trace]}
    _emit(args, payload, f"{prm}  M/N={prm.memory_ratio}  R={prm.rate}")
    return EXIT_OK


def cmd_validate(args) -> int:
    rep = core.validate(_load(args.input))
    print(json.dumps(rep.to_json()))
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_verify(args) -> int:
    p = _load(args.input)
    rep = core.validate(p)
    if not rep.valid:
        _emit(args, {"decodedOk": False, "validation": rep.to_json()}, rep.summary())
        return EXIT_INVALID
    if args.bytes % p.f:
        print(f"--bytes must be a multiple of f={p.f}", file=sys.stderr)
        return EXIT_USAGE
    out = round_trip_verify(p, args.files, args.bytes, trials=args.trials, seed=args.seed)
    _emit(args, out.to_json(),
          f"decodedOk={out.decoded_ok} rate={out.measured_rate} "
          f"memoryRatio={out.measured_memory_ratio} trials={out.trials}")
    return EXIT_OK if out.decoded_ok else EXIT_INVALID


def cmd_sweep(args) -> int:
    fams = FAMILIES if not args.families else [s.strip() for s in args.families.split(",")]
    bad = set(fams) - set(FAMILIES)
    if bad:
        print(f"unknown families: {', '.join(sorted(bad))}", file=sys.stderr)
        return EXIT_USAGE
    if args.users < 2:
        print("--users must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    if args.json and args.csv == "-":
        print("--json needs --csv to name a file", file=sys.stderr)
        return EXIT_USAGE
    points = sweep(args.users, fams, max_steps=args.max_steps, randbc_max_r=args.randbc_max_r)
    rows = list(points)
    if args.baseline == "mn":
        rows = sort_points(rows + mn_points(args.users))
    if args.hull:
        rows = rows + lower_hull(points)
    _write(args.csv, to_csv(rows, with_derived=args.hull))
    if args.json:
        print(json.dumps([t.to_json() for t in rows]))
    return EXIT_OK


def cmd_randbc(args) -> int:
    spec = RandBcSpec(args.b, args.r, args.e, args.alpha, args.eta, args.seed, args.attempts)
    out = rand_bc(spec)
    payload = {"spec": spec.to_json(), **out.to_json()}
    if args.out:
        _write(args.out, json.dumps(payload) + "\n")
    _emit(args, payload,
          f"success={out.success} attempts={out.attempts_used} seed={out.seed_used}")
    return EXIT_OK if out.success else EXIT_CONSTRUCTION


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON on stdout")
    ap = _Parser(prog="pdalift", description="Build, check and compare lifted arrays.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="construct an array from a chain")
    b.add_argument("--chain", required=True)
    b.add_argument("--out")
    b.add_argument("--check-steps", action="store_true", help="validate every intermediate array")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("validate", parents=[common], help="check an array file")
    v.add_argument("--in", dest="input", required=True)
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("verify", parents=[common], help="simulate placement, delivery and decoding")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--files", type=int, required=True)
    r.add_argument("--bytes", type=int, required=True)
    r.add_argument("--trials", type=int, default=20)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="enumerate chains for K users")
    s.add_argument("--users", type=int, required=True)
    s.add_argument("--families", help="comma-separated subset of: " + ",".join(FAMILIES))
    s.add_argument("--csv", required=True, help="output path, or - for stdout")
    s.add_argument("--baseline", choices=["mn"])
    s.add_argument("--hull", action="store_true")
    s.add_argument("--max-steps", type=int, default=4)
    s.add_argument("--randbc-max-r", type=int, default=4)
    s.set_defaults(func=cmd_sweep)

    q = sub.add_parser("randbc", parents=[common], help="run the randomized family search")
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--e", type=int, required=True)
    q.add_argument("--alpha", type=int, default=1)
    q.add_argument("--eta", type=int, default=1)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--attempts", type=int, default=100)
    q.add_argument("--out")
    q.set_defaults(func=cmd_randbc)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ChainSyntaxError, MalformedPda, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StepMismatch, DecodeFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ConstructionError, PdaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
