"""Batch command-line front end: every operation with file-based I/O, exact
rationals end to end, deterministic bytes for identical inputs.

Exit codes: 0 success (and clean reports where a check was requested),
1 when a requested check found violations or a construction reported
failure, 2 on usage or input-format errors.

``FEKETE_THREADS`` caps scan parallelism; unset means sequential.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import checker, constructions, limits, model


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _workers_from_env() -> int:
    raw = os.environ.get("FEKETE_THREADS")
    if raw is None:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"FEKETE_THREADS must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ValueError("FEKETE_THREADS must be >= 1")
    return workers


def _error_term_for(spec: str, horizon: int) -> model.ErrorTerm | None:
    """--f grammar: ``zero``, a file path, or ``family:name[,param,...]``
    with parameters in the family's positional order."""
    if spec == "zero":
        return None
    if spec.startswith("family:"):
        name, *raw = spec[len("family:"):].split(",")
        names = model.family_parameters(name)
        if len(raw) != len(names):
            raise ValueError(
                f"family {name!r} expects parameters {list(names)}, got {len(raw)}"
            )
        params = {key: model.parse_rational(val) for key, val in zip(names, raw)}
        return model.builtin_error_term(name, horizon, params)
    return model.parse_error_term(_read(spec))


def _domain_from(spec: str) -> model.PairDomain:
    """--domain grammar: full | threshold:N | muband:P/Q,N | oneplus:N |
    explicit:FILE (a JSON object with a "pairs" list)."""
    if spec == "full":
        return model.FullDomain()
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise ValueError(f"malformed domain spec: {spec!r}")
    if kind == "threshold":
        return model.ThresholdDomain(int(rest))
    if kind == "oneplus":
        return model.OnePlusDomain(int(rest))
    if kind == "muband":
        mu_s, sep2, n_s = rest.partition(",")
        if not sep2:
            raise ValueError("muband needs 'P/Q,N'")
        return model.MuBandDomain(model.parse_rational(mu_s), int(n_s))
    if kind == "explicit":
        payload = json.loads(_read(rest))
        pairs = payload.get("pairs") if isinstance(payload, dict) else None
        if not isinstance(pairs, list):
            raise ValueError("explicit domain file needs a 'pairs' list")
        return model.ExplicitDomain(tuple(p) for p in pairs)
    raise ValueError(f"unknown domain variant: {kind!r}")


def _cmd_check(args) -> int:
    seq = model.parse_sequence(_read(args.seq))
    f = _error_term_for(args.f, seq.horizon)
    domain = _domain_from(args.domain)
    report = checker.scan_violations(seq, f, domain, workers=_workers_from_env())
    _write(_dump(report.to_json_dict()), args.output)
    return 0 if report.ok else 1


def _cmd_limit(args) -> int:
    seq = model.parse_sequence(_read(args.seq))
    bracket = limits.fekete_bracket(seq, args.N)
    _write(_dump(bracket.to_json_dict()), args.output)
    return 0


def _cmd_certify_mu(args) -> int:
    cert = limits.mu_chain_certificate(model.parse_rational(args.mu), args.N, args.n)
    _write(_dump(cert.to_json_dict()), args.output)
    return 0


def _cmd_decompose(args) -> int:
    chain = constructions.two_good_chain(args.n, args.k)
    _write(_dump(chain.to_json_dict()), args.output)
    return 0


def _cmd_gdeficit(args) -> int:
    seq = model.parse_sequence(_read(args.seq))
    f = _error_term_for(args.f, seq.horizon)
    value = limits.g_deficit(seq, f, args.n, args.m)
    sys.stdout.write(model.format_rational(value) + "\n")
    return 0


def _emit_sequence(prefix: model.SequencePrefix, args) -> None:
    if args.format == "csv":
        _write(model.sequence_to_csv(prefix), args.output)
    else:
        _write(model.sequence_to_json(prefix), args.output)


def _cmd_construct_convex(args) -> int:
    f = _error_term_for(args.f, args.H)
    if f is None:
        f = model.zero_error_term(args.H)
    _emit_sequence(constructions.convex_from_error(f, args.H), args)
    return 0


def _cmd_construct_rational_slopes(args) -> int:
    f = _error_term_for(args.f, args.Hmax)
    if f is None:
        f = model.zero_error_term(args.Hmax)
    out = constructions.rational_slope_sequence(f, args.K, args.Hmax)
    if args.format == "csv":
        _write(model.sequence_to_csv(out.b), args.output)
    else:
        _write(_dump(out.to_json_dict()), args.output)
    return 0


def _cmd_construct_threshold_gap(args) -> int:
    anchors = [int(x) for x in args.anchors.split(",")]
    _emit_sequence(constructions.threshold_gap_example(args.N, anchors, args.H), args)
    return 0


def _cmd_construct_linear_error(args) -> int:
    f = _error_term_for(args.f, args.H)
    if f is None:
        f = model.zero_error_term(args.H)
    prefix = constructions.linear_error_example(f, model.parse_rational(args.L), args.H)
    _emit_sequence(prefix, args)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fekete",
        description="Exact analysis of nearly-subadditive sequence prefixes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="scan a prefix for subadditivity violations")
    check.add_argument("--seq", required=True, help="sequence file (JSON or CSV)")
    check.add_argument("--f", default="zero", help="zero | FILE | family:name,params")
    check.add_argument("--domain", default="full",
                       help="full | threshold:N | muband:P/Q,N | oneplus:N | explicit:FILE")
    check.add_argument("-o", "--output", default=None)
    check.set_defaults(func=_cmd_check)

    limit = sub.add_parser("limit", help="certified slope bracket for a prefix")
    limit.add_argument("--seq", required=True)
    limit.add_argument("--N", type=int, required=True)
    limit.add_argument("-o", "--output", default=None)
    limit.set_defaults(func=_cmd_limit)

    certify = sub.add_parser("certify-mu", help="doubling-chain certificate")
    certify.add_argument("--mu", required=True, help="growth factor P/Q, > 1")
    certify.add_argument("--N", type=int, required=True)
    certify.add_argument("--n", type=int, required=True, help="chain base")
    certify.add_argument("-o", "--output", default=None)
    certify.set_defaults(func=_cmd_certify_mu)

    decompose = sub.add_parser("decompose", help="2-good merge chain for (n, k)")
    decompose.add_argument("--n", type=int, required=True)
    decompose.add_argument("--k", type=int, required=True)
    decompose.add_argument("-o", "--output", default=None)
    decompose.set_defaults(func=_cmd_decompose)

    gdef = sub.add_parser("gdeficit", help="exact smoothing-transform deficit")
    gdef.add_argument("--seq", required=True)
    gdef.add_argument("--f", default="zero")
    gdef.add_argument("--n", type=int, required=True)
    gdef.add_argument("--m", type=int, required=True)
    gdef.set_defaults(func=_cmd_gdeficit)

    construct = sub.add_parser("construct", help="generate a named sequence")
    csub = construct.add_subparsers(dest="what", required=True)

    convex = csub.add_parser("convex", help="convex sequence from an error term")
    convex.add_argument("--f", required=True)
    convex.add_argument("--H", type=int, required=True)
    convex.add_argument("-o", "--output", required=True)
    convex.add_argument("--format", choices=("json", "csv"), default="json")
    convex.set_defaults(func=_cmd_construct_convex)

    slopes = csub.add_parser("rational-slopes",
                             help="shifted convex sequence covering enumerated rationals")
    slopes.add_argument("--f", required=True)
    slopes.add_argument("--K", type=int, required=True)
    slopes.add_argument("--Hmax", type=int, required=True)
    slopes.add_argument("-o", "--output", required=True)
    slopes.add_argument("--format", choices=("json", "csv"), default="json")
    slopes.set_defaults(func=_cmd_construct_rational_slopes)

    gap = csub.add_parser("threshold-gap", help="ramp sequence with pinned bands")
    gap.add_argument("--N", type=int, required=True)
    gap.add_argument("--anchors", required=True, help="comma-separated increasing list")
    gap.add_argument("--H", type=int, default=None)
    gap.add_argument("-o", "--output", required=True)
    gap.add_argument("--format", choices=("json", "csv"), default="json")
    gap.set_defaults(func=_cmd_construct_threshold_gap)

    linerr = csub.add_parser("linear-error", help="spike sequence with oscillating slopes")
    linerr.add_argument("--f", required=True)
    linerr.add_argument("--L", required=True, help="oscillation bound P/Q, > 0")
    linerr.add_argument("--H", type=int, required=True)
    linerr.add_argument("-o", "--output", required=True)
    linerr.add_argument("--format", choices=("json", "csv"), default="json")
    linerr.set_defaults(func=_cmd_construct_linear_error)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except constructions.HorizonExhausted as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
