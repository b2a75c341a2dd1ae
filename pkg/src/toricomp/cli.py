"""Command-line surface: validation, invariants, construction, verification.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.  Failures
emit a machine-readable JSON object on stderr.  All outputs are byte-stable
for identical inputs (sorted keys, reduced rationals).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .complements import (
    CertificateError,
    MODE_SHARP,
    MODE_STRICT,
    budget_sum_bound,
    construct_certificate,
    index_budget,
    verify_certificate,
)
from .jsonio import (
    DocumentError,
    emit_certificate,
    emit_pair,
    emit_rational,
    parse_certificate,
    parse_pair,
    parse_rational,
    random_pair,
    write_atomic,
)
from .pairs import anticanonical_volume, body, mld
from .width import WidthRadiusExceeded, min_basis_width_exact, min_width_functional


def _print_json(doc) -> None:
    print(json.dumps(doc, sort_keys=True, indent=2))


def _fail(message: str, code: int, detail=None) -> int:
    err = {"error": message}
    if detail is not None:
        err["detail"] = detail
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def _load_pair(path: str):
    with open(path) as handle:
        return parse_pair(handle.read())


def cmd_validate(args) -> int:
    try:
        with open(args.pair) as handle:
            text = handle.read()
        pair = parse_pair(text)
    except (OSError, DocumentError) as exc:
        return _fail("invalid pair", 1, str(exc))
    _print_json({"ok": True, "violations": [], "dim": pair.dim, "rays": len(pair.rays)})
    return 0


def cmd_mld(args) -> int:
    pair = _load_pair(args.pair)
    _print_json({"mld": emit_rational(mld(pair))})
    return 0


def cmd_width(args) -> int:
    pair = _load_pair(args.pair)
    if args.radius is not None:
        radius = parse_rational(args.radius)
    else:
        d = pair.dim
        radius = Fraction(d * (d + 1)) / mld(pair)
    result = min_width_functional(body(pair).U, radius)
    _print_json(
        {
            "phi": list(result.phi),
            "interval": [emit_rational(result.interval.lo), emit_rational(result.interval.hi)],
            "w": emit_rational(result.w),
            "w_minus": emit_rational(result.w_minus),
            "w_plus": emit_rational(result.w_plus),
            "radius": emit_rational(radius),
        }
    )
    return 0


def cmd_construct(args) -> int:
    pair = _load_pair(args.pair)
    epsilon = parse_rational(args.epsilon) if args.epsilon else None
    mode = {"strict": MODE_STRICT, "sharp": MODE_SHARP}[args.mode]
    cert = construct_certificate(pair, epsilon=epsilon, mode=mode, n=args.n)
    text = emit_certificate(pair, cert)
    if args.output:
        write_atomic(args.output, text)
        _print_json({"written": args.output, "witness": emit_rational(cert.witness), "n": cert.n})
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    pair = _load_pair(args.pair)
    with open(args.certificate) as handle:
        cert_pair, cert = parse_certificate(handle.read())
    if cert_pair != pair:
        return _fail("certificate was issued for a different pair", 1)
    report = verify_certificate(pair, cert)
    _print_json(
        {
            "ok": report.ok,
            "checks": [
                {"name": c.name, "ok": c.ok, "detail": c.detail} for c in report.checks
            ],
        }
    )
    return 0 if report.ok else 1


def cmd_oracle_lambda(args) -> int:
    pair = _load_pair(args.pair)
    if pair.dim > 3:
        return _fail("exact basis-width oracle supports dimension <= 3", 2)
    if args.cap is not None:
        cap = parse_rational(args.cap)
    else:
        cap = construct_certificate(pair).witness
    value, basis = min_basis_width_exact(body(pair).U, cap)
    _print_json(
        {
            "lambda": emit_rational(value),
            "basis": [list(phi) for phi in basis],
            "cap": emit_rational(cap),
        }
    )
    return 0


def cmd_table(args) -> int:
    epsilons = [parse_rational(e) for e in args.epsilons.split(",")]
    rows = [
        {
            "epsilon": emit_rational(e),
            "budget": emit_rational(index_budget(args.dim, e)),
            "sum_bound": emit_rational(budget_sum_bound(args.dim, e)),
        }
        for e in epsilons
    ]
    if args.csv:
        lines = ["epsilon,budget,sum_bound"]
        lines += [f"{r['epsilon']},{r['budget']},{r['sum_bound']}" for r in rows]
        write_atomic(args.csv, "\n".join(lines) + "\n")
        _print_json({"written": args.csv, "rows": len(rows)})
    else:
        _print_json({"dim": args.dim, "rows": rows})
    return 0


def cmd_volume(args) -> int:
    pair = _load_pair(args.pair)
    cert = construct_certificate(pair)
    vol = anticanonical_volume(pair)
    bound = Fraction(1) / cert.witness**pair.dim
    _print_json(
        {
            "anticanonical_volume": emit_rational(vol),
            "witness": emit_rational(cert.witness),
            "witness_power_bound": emit_rational(bound),
            "ok": vol >= bound,
        }
    )
    return 0 if vol >= bound else 1


def cmd_corpus(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("SEED", "0"))
    os.makedirs(args.out, exist_ok=True)
    written = []
    for i in range(args.count):
        ray_count = args.rays if args.rays else (2 if args.dim == 1 else args.dim + 2)
        pair = random_pair(args.dim, ray_count, args.denominator_bound, f"{seed}:{i}")
        name = f"pair_{args.dim}d_{i:03d}.json"
        path = os.path.join(args.out, name)
        write_atomic(path, emit_pair(pair))
        written.append(name)
    _print_json({"written": written, "dir": args.out, "seed": seed})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricomp",
        description="Exact complements of bounded index on toric weak log Fano pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a pair document")
    p.add_argument("pair")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mld", help="exact minimal log discrepancy")
    p.add_argument("pair")
    p.set_defaults(func=cmd_mld)

    p = sub.add_parser("width", help="minimal-width primitive functional")
    p.add_argument("pair")
    p.add_argument("--radius", help="search radius as p/q (default dim(dim+1)/mld)")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("construct", help="build a complement certificate")
    p.add_argument("pair")
    p.add_argument("--epsilon", help="discrepancy lower bound as p/q (default: exact mld)")
    p.add_argument("--mode", choices=["strict", "sharp"], default="strict")
    p.add_argument("--n", type=int, default=None, help="complement index (default ceil(witness))")
    p.add_argument("-o", "--output", help="write the certificate to this file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-check a certificate against a pair")
    p.add_argument("pair")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle-lambda", help="exact minimal basis width (dim <= 3)")
    p.add_argument("pair")
    p.add_argument("--cap", help="width cap as p/q (default: constructed witness)")
    p.set_defaults(func=cmd_oracle_lambda)

    p = sub.add_parser("table", help="budget values for a list of epsilons")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--epsilons", required=True, help="comma-separated p/q values")
    p.add_argument("--csv", help="also write a CSV file")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("volume", help="anticanonical volume vs witness bound")
    p.add_argument("pair")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("corpus", help="generate deterministic random pair files")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--rays", type=int, default=None)
    p.add_argument("--denominator-bound", type=int, default=4)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (WidthRadiusExceeded, CertificateError) as exc:
        return _fail(exc.__class__.__name__, 1, str(exc))
    except (OSError, DocumentError, ValueError) as exc:
        return _fail(exc.__class__.__name__, 2, str(exc))
    except RuntimeError as exc:
        return _fail(exc.__class__.__name__, 1, str(exc))


if __name__ == "__main__":
    sys.exit(main())
