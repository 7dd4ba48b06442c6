"""Command-line interface.

Subcommands: check, density, construct, verify-prop, certify, search,
phi-levelset.  Exit codes: 0 success / property holds, 1 property fails
(witness or violation found), 2 usage or I/O error.  Machine-readable
output prints exact rationals as "num/den"; timings and node counts go to
stderr under --stats so stdout stays deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import constructions, density, productfree, proofkit, search
from .density import frac_str
from .sets import (
    DEFAULT_EXPLICIT_HORIZON,
    Dfa,
    LayeredSet,
    StateBudgetError,
    explicit_empty,
    explicit_from_words,
    read_dfa,
    write_dfa,
)
from .words import Alphabet, FormatError, read_word_list, write_word_list

BUDGET_ENV = "PRODFREE_BUDGET"


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r} (use forms like 1/10)") from exc


def _parse_lengths(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ValueError(f"bad length list {text!r} (use forms like 1,2,5)") from exc


def _load_set(args) -> LayeredSet | Dfa:
    if getattr(args, "dfa", None):
        return read_dfa(Path(args.dfa).read_text())
    if getattr(args, "words", None):
        alphabet, horizon, words = read_word_list(Path(args.words).read_text())
        if horizon is None:
            horizon = max((len(w) for w in words), default=1)
        if not words:
            return explicit_empty(alphabet, horizon)
        return explicit_from_words(words, horizon)
    raise ValueError("provide --dfa FILE or --words FILE")


def _default_horizon(s: LayeredSet | Dfa, requested: int | None) -> int:
    if requested is not None:
        return requested
    return s.horizon if isinstance(s, LayeredSet) else density.DEFAULT_REGULAR_HORIZON


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_check(args) -> int:
    s = _load_set(args)
    if isinstance(s, LayeredSet):
        witness = productfree.check_explicit(s)
    else:
        witness = productfree.check_regular(s)
    if witness is None:
        print("product-free")
        return 0
    print(witness.x.text)
    print(witness.y.text)
    print(witness.z.text)
    return 1


def cmd_density(args) -> int:
    s = _load_set(args)
    horizon = _default_horizon(s, args.horizon)
    prof = density.profile(s, horizon)
    if args.format == "csv":
        _emit(density.profile_csv(prof), args.out)
    elif args.format == "json":
        report = density.limits_report(prof, args.min_window)
        report["profile"] = [
            {"n": c.n, "count": c.count, "total": c.total,
             "density": frac_str(c.density)}
            for c in prof.counts
        ]
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        asym = density.upper_asymptotic(prof)
        ban = density.upper_banach(prof, args.min_window)
        lines = [
            f"horizon {prof.horizon}",
            _describe_limit("upper asymptotic density", asym),
            _describe_limit("upper Banach density", ban),
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _describe_limit(label: str, limit: density.DensityLimit) -> str:
    kind = "exactly" if limit.exact else "finite-horizon estimate"
    return (
        f"{label}: {kind} {frac_str(limit.value)} "
        f"(≈ {float(limit.value):.6f}), window "
        f"[{limit.window.start}, {limit.window.end}]"
    )


def cmd_construct(args) -> int:
    alphabet = Alphabet(args.alphabet)
    if args.mode == "odd-occurrence":
        dfa = constructions.odd_occurrence(alphabet, args.gamma)
        _emit(write_dfa(dfa), args.out)
        return 0
    if args.mode == "pathology":
        s = constructions.counting_pathology(alphabet, args.c, args.horizon)
        _emit(write_word_list(s.words(), alphabet, s.horizon), args.out)
        return 0
    if args.mode == "asymmetric":
        triple = constructions.asymmetric_triple(alphabet, args.n, _parse_fraction(args.eps))
        prefix = args.out or "asymmetric"
        Path(f"{prefix}.w.words").write_text(
            write_word_list(triple.w_set.words(), alphabet, triple.w_set.horizon)
        )
        for tag, dfa in (("x", triple.x), ("y", triple.y), ("z", triple.z)):
            Path(f"{prefix}.{tag}.dfa").write_text(write_dfa(dfa))
        print(f"wrote {prefix}.w.words and {prefix}.{{x,y,z}}.dfa")
        return 0
    if args.mode == "random":
        s = constructions.greedy_random_productfree(
            alphabet, args.max_len, args.seed, args.schedule
        )
        _emit(write_word_list(s.words(), alphabet, s.horizon), args.out)
        return 0
    raise ValueError(f"unknown construct mode {args.mode!r}")


def cmd_verify_prop(args) -> int:
    s = _load_set(args)
    lengths = _parse_lengths(args.lengths)
    report = proofkit.chained_inequality_check(s, lengths, args.n)
    payload = {
        "n": report.n,
        "lengths": list(report.lengths),
        "refined_terms": [frac_str(t) for t in report.refined_terms],
        "lhs": frac_str(report.lhs),
        "mid": frac_str(report.mid),
        "ok": report.ok,
    }
    print(json.dumps(payload, indent=2))
    return 0 if report.ok else 1


def cmd_certify(args) -> int:
    s = _load_set(args)
    horizon = _default_horizon(s, args.horizon)
    eps = _parse_fraction(args.eps)
    lseq, trace = proofkit.extract_lsequence(s, eps, horizon, args.min_window)
    if args.trace:
        with open(args.trace, "w") as fh:
            for probe in trace.probes:
                fh.write(json.dumps({
                    "stage": probe.stage,
                    "window": [probe.window.start, probe.window.end],
                    "mean": frac_str(probe.mean),
                    "qualifies": probe.qualifies,
                    "chosen": probe.chosen,
                }) + "\n")

    certificates = []
    all_hold = True
    if lseq.k >= 1:
        lk = lseq.lengths[-1]
        for start in range(lk + 1, horizon - args.min_window + 2):
            window = density.WindowSpec(start, min(horizon, start + args.min_window - 1))
            if window.length < args.min_window:
                continue
            cert = proofkit.window_bound_certificate(s, window, lseq)
            certificates.append({
                "window": [window.start, window.end],
                "bound": frac_str(cert.bound),
                "mean": frac_str(cert.mean),
                "holds": cert.holds,
            })
            all_hold = all_hold and cert.holds
    payload = {
        "policy": trace.policy,
        "stop_reason": trace.stop_reason,
        "lengths": list(lseq.lengths),
        "terms": [frac_str(t) for t in lseq.terms],
        "cumulative": [frac_str(c) for c in lseq.cumulative],
        "window_certificates": certificates,
        "all_hold": all_hold,
    }
    print(json.dumps(payload, indent=2))
    return 0 if all_hold else 1


def cmd_search(args) -> int:
    alphabet = Alphabet(args.alphabet)
    budget = args.budget
    if budget is None:
        budget = int(float(os.environ.get(BUDGET_ENV, search.DEFAULT_NODE_BUDGET)))
    started = time.monotonic()
    result = search.max_productfree(alphabet, args.horizon, args.objective, budget)
    elapsed = time.monotonic() - started
    payload = {
        "alphabet": alphabet.symbols,
        "horizon": result.horizon,
        "objective": result.objective,
        "value": frac_str(result.value),
        "witness_layer_counts": [
            result.best.layer_count(n) for n in range(1, result.horizon + 1)
        ],
        "optimal": result.proved,
    }
    print(json.dumps(payload, indent=2))
    if args.out:
        Path(args.out).write_text(
            write_word_list(result.best.words(), alphabet, result.horizon)
        )
    if args.stats:
        print(f"nodes={result.nodes} seconds={elapsed:.3f}", file=sys.stderr)
    return 0


def cmd_phi_levelset(args) -> int:
    s = _load_set(args)
    horizon = _default_horizon(s, args.horizon)
    report = proofkit.phi_level_set(s, horizon)
    payload = {
        "horizon": report.horizon,
        "threshold": "(sqrt(5)-1)/2",
        "level_set": list(report.level_set),
        "sum_free": report.sum_free,
        "violation": list(report.violation) if report.violation else None,
    }
    print(json.dumps(payload, indent=2))
    return 0 if report.sum_free else 1


# ---------------------------------------------------------------------------
# Parser wiring


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dfa", help="automaton file")
    group.add_argument("--words", help="word-list file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prodfree",
        description="Exact analysis of product-free subsets of the free semigroup",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide product-freeness, print any witness")
    _add_input_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("density", help="exact density profile and limit estimates")
    _add_input_flags(p)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--min-window", type=int, default=density.DEFAULT_MIN_WINDOW)
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("construct", help="build one of the named sets")
    modes = p.add_subparsers(dest="mode", required=True)
    m = modes.add_parser("odd-occurrence")
    m.add_argument("--gamma", required=True, help="symbols counted for parity")
    m = modes.add_parser("pathology")
    m.add_argument("--c", type=int, required=True)
    m.add_argument("--horizon", type=int, default=None)
    m = modes.add_parser("asymmetric")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--eps", required=True, help="rational like 1/10")
    m = modes.add_parser("random")
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--max-len", type=int, default=DEFAULT_EXPLICIT_HORIZON)
    m.add_argument("--schedule", choices=("uniform", "odd-first"), default="uniform")
    for m in modes.choices.values():
        m.add_argument("--alphabet", default="ab")
        m.add_argument("--out", help="output file (prefix for asymmetric)")
        m.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify-prop", help="check the chained density inequality")
    _add_input_flags(p)
    p.add_argument("--lengths", required=True, help="comma list like 1,2")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_verify_prop)

    p = sub.add_parser("certify", help="extract a length sequence and window bounds")
    _add_input_flags(p)
    p.add_argument("--eps", default="1/16", help="rational like 1/16")
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--min-window", type=int, default=8)
    p.add_argument("--trace", help="JSONL trace file, one record per window")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="exact maximum-density search over a ball")
    p.add_argument("--alphabet", default="ab")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--objective", choices=search.OBJECTIVES, default="mean")
    p.add_argument("--budget", type=int, default=None,
                   help=f"node budget (default from ${BUDGET_ENV} or built-in)")
    p.add_argument("--out", help="write the witness as a word list")
    p.add_argument("--stats", action="store_true",
                   help="print node count and timing to stderr")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("phi-levelset", help="layers denser than phi, sum-free check")
    _add_input_flags(p)
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(func=cmd_phi_levelset)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ValueError, StateBudgetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
