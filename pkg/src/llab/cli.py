"""Experiment driver: weight-class checks, index estimation, extremal
constructions, certificates, and operator-norm probes, with CSV/JSON output.

All randomized searches are fully determined by the seed (overridable via
the LLAB_SEED environment variable); two runs with the same configuration
produce byte-identical CSV bodies.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from typing import Optional

from . import boyd, construction, operators
from .errors import ConfigurationError, PreconditionError, SingularInputError
from .intervals import Interval, parse_union
from .weights import (
    WeightModel,
    check_A1,
    check_Ainf,
    check_Bp,
    check_Bstar_inf,
    check_delta2,
)

EXIT_CONFIG = 2
EXIT_PRECONDITION = 3


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _load_weight(path: str) -> WeightModel:
    try:
        return WeightModel.load(path)
    except OSError as exc:
        raise ConfigurationError(f"cannot read weight config {path}: {exc}") from exc


def _seed(args) -> int:
    env = os.environ.get("LLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigurationError(f"LLAB_SEED must be an integer, got {env!r}") from exc
    return args.seed


def _write_csv(path: Optional[str], header: str, rows: list[str]) -> None:
    body = header + "\n" + "".join(row + "\n" for row in rows)
    if path:
        with open(path, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


# -- subcommands ------------------------------------------------------------


def cmd_classes(args) -> int:
    w = _load_weight(args.w)
    u = _load_weight(args.u) if args.u else None
    out = {}
    out["Delta2"] = json.loads(check_delta2(w).to_json())
    if args.p is not None:
        out["Bp"] = json.loads(check_Bp(w, args.p).to_json())
    out["BstarInf"] = json.loads(check_Bstar_inf(w).to_json())
    if u is not None:
        out["A1"] = json.loads(check_A1(u).to_json())
        out["AInf"] = json.loads(check_Ainf(u).to_json())
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_indices(args) -> int:
    u = _load_weight(args.u)
    w = _load_weight(args.w)
    seed = _seed(args)
    est = boyd.compute_estimates(u, w, args.p, budget=args.budget, seed=seed)
    rows = []
    for t, v in zip(est.upper.arguments, est.upper.values):
        rows.append(
            f"{_fmt(t)},{_fmt(v)},,{est.upper.direction},{args.budget},{seed}"
        )
    for t, v in zip(est.lower.arguments, est.lower.values):
        rows.append(
            f"{_fmt(t)},,{_fmt(v)},{est.lower.direction},{args.budget},{seed}"
        )
    _write_csv(args.out, "t,wbar_u,underline_wu,direction,budget,seed", rows)
    mv = boyd.maximal_verdict(u, w, args.p, est)
    summary = {
        "alpha": est.alpha.exponent,
        "alpha_constant": est.alpha.constant,
        "alpha_residual": est.alpha.residual,
        "beta": est.beta.exponent,
        "beta_constant": est.beta.constant,
        "beta_residual": est.beta.residual,
        "q": mv.q,
        "q_constant": mv.q_constant,
        "margin": mv.margin,
        "maximal": mv.verdict,
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_extremal(args) -> int:
    I = Interval(args.interval[0], args.interval[1])
    S = parse_union(args.set)
    F = construction.build_extremal(I, S)
    floor = F.floor
    s = 1.0 / floor
    rows = []
    max_err = 0.0
    n = args.lambdas
    for i in range(n):
        lam = floor + (1.0 - floor) * (i + 1) / n
        J = F.level_set(lam)
        from .intervals import intersect

        for k, part in enumerate(J.parts):
            inter = intersect(S, construction.IntervalUnion((part,)))
            err = abs(inter.measure - lam * part.length) / max(part.length, 1e-300)
            max_err = max(max_err, err)
            rows.append(f"{_fmt(lam)},{k},{_fmt(part.lo)},{_fmt(part.hi)},{_fmt(err)}")
    _write_csv(args.out, "lambda,k,lo,hi,measure_check", rows)
    import math

    summary = {
        "s": s,
        "mean": F.mean_value(),
        "mean_formula": (1.0 + math.log(s)) / s,
        "max_identity_error": max_err,
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_certify(args) -> int:
    u = _load_weight(args.u)
    w = _load_weight(args.w)
    I = Interval(args.interval[0], args.interval[1])
    S = parse_union(args.set)
    ratio = I.length / S.measure
    family = boyd.Configuration(pairs=((I, S),), ratio=ratio)
    cert = construction.weak_type_lower_bound(u, w, args.p, family)
    print(json.dumps(cert.as_dict(), sort_keys=True))
    return 0


def cmd_opnorm(args) -> int:
    u = _load_weight(args.u)
    w = _load_weight(args.w)
    seed = _seed(args)
    if args.family == "indicators":
        family = operators.indicator_family(args.count, seed)
    elif args.family == "extremals":
        family = operators.extremal_family(s=float(args.ratio), count=1)
    elif args.family.startswith("random"):
        n = int(args.family.split(":")[1]) if ":" in args.family else args.count
        family = operators.random_step_family(n, seed)
    else:
        raise ConfigurationError(f"unknown family {args.family!r}")
    report = operators.empirical_opnorm(args.operator, u, w, args.p, family, args.target)
    rows = [
        f"{tid},{_fmt(in_n)},{_fmt(out_n)},{_fmt(out_n / in_n)}"
        for tid, in_n, out_n in report.details
    ]
    _write_csv(args.out, "test_id,input_norm,output_norm,ratio", rows)
    print(
        json.dumps(
            {
                "operator": report.operator,
                "target": report.norm_kind,
                "max_ratio": report.max_ratio,
                "approximate": report.approximate,
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_verdict(args) -> int:
    u = _load_weight(args.u)
    w = _load_weight(args.w)
    seed = _seed(args)
    est = boyd.compute_estimates(u, w, args.p, budget=args.budget, seed=seed)
    hv = operators.hilbert_verdict(u, w, args.p, estimates=est)
    out = {
        "alpha": est.alpha.exponent,
        "beta": est.beta.exponent,
        "maximal": hv.maximal.as_dict(),
        "hilbert": hv.as_dict(),
    }
    print(json.dumps(out, sort_keys=True))
    return 0


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llab", description="weighted-Lorentz-space experiment driver"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, with_p=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=1)
        sp.add_argument("--out", default=None, help="CSV output path (default stdout)")
        if with_p:
            sp.add_argument("--p", type=float, default=2.0)

    sp = sub.add_parser("classes", help="weight-class certifications")
    sp.add_argument("--w", required=True)
    sp.add_argument("--u", default=None)
    sp.add_argument("--p", type=float, default=None)
    sp.set_defaults(func=cmd_classes)

    sp = sub.add_parser("indices", help="Boyd index estimation")
    sp.add_argument("--u", required=True)
    sp.add_argument("--w", required=True)
    common(sp)
    sp.set_defaults(func=cmd_indices)

    sp = sub.add_parser("extremal", help="extremal function level-set report")
    sp.add_argument("--interval", type=float, nargs=2, required=True)
    sp.add_argument("--set", required=True, help="'a,b;c,d' or JSON [[a,b],...]")
    sp.add_argument("--lambdas", type=int, default=50)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_extremal)

    sp = sub.add_parser("certify", help="weak-type operator-norm lower bound")
    sp.add_argument("--u", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--interval", type=float, nargs=2, required=True)
    sp.add_argument("--set", required=True)
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("opnorm", help="empirical operator-norm probing")
    sp.add_argument("--operator", choices=["maximal", "hilbert", "hstar", "q"], required=True)
    sp.add_argument("--u", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--family", default="indicators")
    sp.add_argument("--count", type=int, default=8)
    sp.add_argument("--ratio", type=float, default=math_e())
    sp.add_argument("--target", choices=["strong", "weak"], default="strong")
    common(sp)
    sp.set_defaults(func=cmd_opnorm)

    sp = sub.add_parser("verdict", help="combined boundedness verdicts")
    sp.add_argument("--u", required=True)
    sp.add_argument("--w", required=True)
    common(sp)
    sp.set_defaults(func=cmd_verdict)

    return parser


def math_e() -> float:
    import math

    return math.e


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PreconditionError, SingularInputError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    raise SystemExit(main())
