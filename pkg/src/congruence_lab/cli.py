"""Batch command-line front end.

Subcommands wire flat flags to the library modules and emit CSV or JSON.
Exit codes: 0 success, 1 identity/assertion failure, 2 usage error.  Output
is byte-identical for identical inputs; the CONGRUENCE_LAB_THREADS
environment variable overrides --threads.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .arith import PrimePower
from .characters import gauss_identity_suite, twisted_identity_suite
from .congruence import (
    ExperimentConfig,
    THRESHOLD_EXPONENTS,
    exceptional_set,
    main_term,
    n_threshold,
    padic_small_value_count,
    solution_histogram,
)
from .exppair import (
    ExponentPair,
    apply_word,
    objective_f,
    remark_bracket_decimals,
    search_min_f,
)
from .variance import (
    VarianceDecompositionError,
    bound_ratio_report,
    quadruple_count_identity,
    variance_decomposition_check,
)

DEFAULT_MAX_Q = 10_000


def _resolve_threads(flag: int | None) -> int:
    env = os.environ.get("CONGRUENCE_LAB_THREADS")
    if env is not None:
        return max(1, int(env))
    if flag is not None:
        return max(1, flag)
    return os.cpu_count() or 1


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines += [",".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def _usage_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _make_config(args) -> ExperimentConfig:
    pp = PrimePower(args.p, args.m)
    return ExperimentConfig(pp, args.alpha2, args.N, getattr(args, "epsilon", 0.0))


def _cfg_dict(cfg: ExperimentConfig) -> dict:
    return {
        "p": cfg.pp.p,
        "m": cfg.pp.m,
        "q": cfg.pp.q,
        "alpha2": cfg.alpha2,
        "N": cfg.N,
    }


# ---------------------------------------------------------------- subcommands

def cmd_count(args) -> int:
    try:
        cfg = _make_config(args)
    except ValueError as e:
        return _usage_error(str(e))
    from .congruence import count_solutions

    print(count_solutions(cfg, args.alpha3))
    return 0


def cmd_histogram(args) -> int:
    try:
        cfg = _make_config(args)
    except ValueError as e:
        return _usage_error(str(e))
    hist = solution_histogram(cfg, threads=_resolve_threads(args.threads))
    if args.format == "csv":
        rows = [[a3, int(c)] for a3, c in enumerate(hist.counts)]
        text = _csv_text(["alpha3", "count"], rows)
    else:
        text = _json_text({**_cfg_dict(cfg), "counts": [int(c) for c in hist.counts]})
    _emit(text, args.output)
    return 0


def cmd_main_term(args) -> int:
    try:
        cfg = _make_config(args)
    except ValueError as e:
        return _usage_error(str(e))
    report = main_term(cfg)
    payload = {**_cfg_dict(cfg), **report.to_dict()}
    if args.format == "csv":
        text = _csv_text(list(payload), [list(payload.values())])
    else:
        text = _json_text(payload)
    _emit(text, args.output)
    return 0


def cmd_exceptional(args) -> int:
    try:
        cfg = _make_config(args)
        if args.delta <= 0:
            raise ValueError(f"delta must be positive, got {args.delta}")
    except ValueError as e:
        return _usage_error(str(e))
    threads = _resolve_threads(args.threads)
    hist = solution_histogram(cfg, threads=threads)
    report = exceptional_set(cfg, args.delta, histogram=hist, sample=args.sample, seed=args.seed)
    if args.format == "csv":
        pred = report.predicted
        rows = [[a3, int(hist.counts[a3]), abs(hist.counts[a3] / pred - 1.0)] for a3 in report.indices]
        text = _csv_text(["alpha3", "count", "rel_err"], rows)
    else:
        text = _json_text({**_cfg_dict(cfg), **report.to_dict()})
    _emit(text, args.output)
    return 0


def cmd_variance_check(args) -> int:
    try:
        cfg = _make_config(args)
        if cfg.pp.q > args.max_q:
            raise ValueError(f"q = {cfg.pp.q} exceeds the safety cap {args.max_q} (raise --max-q to override)")
    except ValueError as e:
        return _usage_error(str(e))
    try:
        report = variance_decomposition_check(cfg)
    except VarianceDecompositionError as e:
        _emit(_json_text({**_cfg_dict(cfg), **e.report.to_dict()}), args.output)
        print(f"FAIL: divergent route(s): {', '.join(e.routes)}", file=sys.stderr)
        return 1
    _emit(_json_text({**_cfg_dict(cfg), **report.to_dict()}), args.output)
    return 0


def cmd_quadruple_check(args) -> int:
    try:
        cfg = _make_config(args)
        if cfg.pp.q > args.max_q:
            raise ValueError(f"q = {cfg.pp.q} exceeds the safety cap {args.max_q} (raise --max-q to override)")
    except ValueError as e:
        return _usage_error(str(e))
    try:
        lhs, rhs = quadruple_count_identity(cfg)
    except ArithmeticError as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    print(f"lhs={lhs} rhs={rhs}")
    return 0


def cmd_gauss_check(args) -> int:
    if not 3 <= args.p_max <= 500:
        return _usage_error(f"--p-max must lie in [3, 500], got {args.p_max}")
    gauss = gauss_identity_suite(args.p_max)
    print(
        f"gauss closed form: {gauss.pairs_checked} (a,b) pairs checked, "
        f"worst rel err {gauss.worst_gauss_rel_err:.3e}, tau worst {gauss.worst_tau_rel_err:.3e}"
    )
    if not gauss.ok:
        p, a, b, err = gauss.first_failure
        print(f"FAIL: first failing triple p={p} a={a} b={b} rel_err={err:.3e}", file=sys.stderr)
        return 1
    twisted = twisted_identity_suite(args.p_max)
    print(
        f"twisted double sum: {twisted.triples_checked} (alpha2,h1,h2) triples checked, "
        f"worst rel err {twisted.worst_rel_err:.3e}"
    )
    if not twisted.ok:
        p, a2, h1, h2, err = twisted.first_failure
        print(f"FAIL: first failure p={p} alpha2={a2} h1={h1} h2={h2} rel_err={err:.3e}", file=sys.stderr)
        return 1
    return 0


def cmd_exppair(args) -> int:
    if args.action == "apply":
        try:
            pair = apply_word(args.word)
            f = objective_f(pair)
        except ValueError as e:
            return _usage_error(str(e))
        print(f"{pair.k},{pair.l} f={f}")
        print(f"{pair.decimal_str()} f={float(f):.15f}")
        return 0
    if args.action == "search":
        if args.budget < 1:
            return _usage_error(f"--budget must be >= 1, got {args.budget}")
        result = search_min_f(args.budget)
        print(f"{result.best_pair.k},{result.best_pair.l} f={result.best_f}")
        print(f"{result.best_pair.decimal_str()} f={float(result.best_f):.15f}")
        print(f"word={result.best_pair.word or '(empty)'}")
        print(f"nodes_expanded={result.nodes_expanded} frontier_bound={float(result.frontier_bound):.15f}")
        return 0
    # bracket
    lower, upper = remark_bracket_decimals()
    print(f"{lower} / {upper}")
    return 0


def cmd_thresholds(args) -> int:
    try:
        pp = PrimePower(args.p, args.m)
        n_min, n_max = n_threshold(pp, args.epsilon, args.mode)
    except ValueError as e:
        return _usage_error(str(e))
    e = THRESHOLD_EXPONENTS[args.mode]
    payload = {
        "p": pp.p,
        "m": pp.m,
        "q": pp.q,
        "mode": args.mode,
        "exponent": f"{e.numerator}/{e.denominator}",
        "epsilon": args.epsilon,
        "N_min": n_min,
        "N_max": n_max,
    }
    if args.format == "csv":
        text = _csv_text(list(payload), [list(payload.values())])
    else:
        text = _json_text(payload)
    _emit(text, args.output)
    return 0


def cmd_bound_ratios(args) -> int:
    try:
        pp = PrimePower(args.p, args.m)
        if args.N < 1:
            raise ValueError(f"N must be >= 1, got {args.N}")
        pair = ExponentPair(Fraction(args.k), Fraction(args.l))
        rows = bound_ratio_report(pp, args.N, pair)
    except (ValueError, ZeroDivisionError) as e:
        return _usage_error(str(e))
    table = [[r.bound_name, r.empirical_max, r.reference_value, r.ratio] for r in rows]
    if args.format == "json":
        text = _json_text(
            [
                {
                    "bound_name": r.bound_name,
                    "empirical_max": r.empirical_max,
                    "reference_value": r.reference_value,
                    "ratio": r.ratio,
                }
                for r in rows
            ]
        )
    else:
        text = _csv_text(["bound_name", "empirical_max", "reference_value", "ratio"], table)
    _emit(text, args.output)
    return 0


def cmd_padic_count(args) -> int:
    try:
        if args.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {args.gamma}")
        count = padic_small_value_count(args.p, args.gamma, args.N, args.alpha2, args.alpha3)
    except ValueError as e:
        return _usage_error(str(e))
    print(count)
    return 0


# -------------------------------------------------------------------- parser

def _add_modulus_args(sp, with_alpha2=True, with_n=True):
    sp.add_argument("--p", type=int, required=True, help="odd prime")
    sp.add_argument("--m", type=int, default=1, help="exponent of the modulus q = p^m")
    if with_alpha2:
        sp.add_argument("--alpha2", type=int, required=True, help="fixed coefficient, coprime to q")
    if with_n:
        sp.add_argument("--N", type=float, required=True, help="box radius (real; lattice box uses floor N)")


def _add_output_args(sp, default_format="json"):
    sp.add_argument("--format", choices=["csv", "json"], default=default_format)
    sp.add_argument("--output", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="congruence-lab",
        description="Solution counts, variance identities and exponent pairs for "
        "x1^2 + alpha2 x2^2 + alpha3 x3^2 = 0 mod p^m.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("count", help="S(alpha3) for one coefficient")
    _add_modulus_args(sp)
    sp.add_argument("--alpha3", type=int, required=True)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("histogram", help="S(alpha3) for every residue alpha3")
    _add_modulus_args(sp)
    _add_output_args(sp, default_format="csv")
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(func=cmd_histogram)

    sp = sub.add_parser("main-term", help="exact K, L, M and the constant C_q")
    _add_modulus_args(sp)
    _add_output_args(sp)
    sp.set_defaults(func=cmd_main_term)

    sp = sub.add_parser("exceptional", help="coefficients straying from C_q N^3/q")
    _add_modulus_args(sp)
    sp.add_argument("--delta", type=float, required=True, help="relative deviation threshold")
    sp.add_argument("--sample", type=int, default=None, help="report on a seeded sample of coprime alpha3")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=None)
    _add_output_args(sp)
    sp.set_defaults(func=cmd_exceptional)

    sp = sub.add_parser("variance-check", help="V by definition vs V1+V2 vs character sums")
    _add_modulus_args(sp)
    sp.add_argument("--max-q", type=int, default=DEFAULT_MAX_Q)
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_variance_check)

    sp = sub.add_parser("quadruple-check", help="exact orthogonality quadruple identity")
    _add_modulus_args(sp)
    sp.add_argument("--max-q", type=int, default=DEFAULT_MAX_Q)
    sp.set_defaults(func=cmd_quadruple_check)

    sp = sub.add_parser("gauss-check", help="Gauss sum, tau_p and twisted double-sum identity suites")
    sp.add_argument("--p-max", type=int, required=True, dest="p_max")
    sp.set_defaults(func=cmd_gauss_check)

    sp = sub.add_parser("exppair", help="exponent-pair calculus")
    es = sp.add_subparsers(dest="action", required=True)
    e1 = es.add_parser("apply", help="apply a word (rightmost letter first) to (0, 1)")
    e1.add_argument("--word", default="", help="word over A/B, exponent shorthand allowed (ABA2B)")
    e2 = es.add_parser("search", help="minimize f(k, l) within a node budget")
    e2.add_argument("--budget", type=int, required=True)
    es.add_parser("bracket", help="the 25-letter bracketing word's two objective values")
    sp.set_defaults(func=cmd_exppair)

    sp = sub.add_parser("thresholds", help="N-window (q^(e+eps)/2, q^(7/12)/2) per mode")
    _add_modulus_args(sp, with_alpha2=False, with_n=False)
    sp.add_argument("--mode", choices=sorted(THRESHOLD_EXPONENTS), required=True)
    sp.add_argument("--epsilon", type=float, default=0.0)
    _add_output_args(sp)
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("bound-ratios", help="empirical character-sum max vs reference curves")
    _add_modulus_args(sp, with_alpha2=False, with_n=False)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--k", type=str, required=True, help="exponent-pair k as a fraction, e.g. 1/9")
    sp.add_argument("--l", type=str, required=True, help="exponent-pair l as a fraction, e.g. 13/18")
    _add_output_args(sp, default_format="csv")
    sp.set_defaults(func=cmd_bound_ratios)

    sp = sub.add_parser("padic-count", help="p-adic small-value count via congruence reduction")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--alpha2", type=int, required=True)
    sp.add_argument("--alpha3", type=int, required=True)
    sp.set_defaults(func=cmd_padic_count)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:
        # anything that slipped past per-command validation is still a usage error
        return _usage_error(str(e))


if __name__ == "__main__":
    sys.exit(main())
