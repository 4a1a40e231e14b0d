"""Command-line front end.

Exit codes: 0 success or pass, 1 verification failure (or witness not
found), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import serialize
from .automata import (
    DEFAULT_BIT_BUDGET,
    BitBudgetExceeded,
    UnaryDFA,
    UnaryMCQFA,
    UnaryPFA,
    dfa_accepts,
    dfa_to_pfa,
    float_shadow,
    pfa_outcome,
    qfa_accept_probability,
)
from .constructions import (
    BlockRotationQFA,
    ConversionError,
    build_lkn_dfa,
    build_lkn_pfa,
    build_lkn_qfa,
    build_theta_qfa,
    cyclic_conversion,
)
from .markov import analyze_chain
from .numtheory import ResidueConstraint, crt_solve, parse_rational
from .problems import LknProblem, LThetaProblem, PythagoreanAngle, classify, generate_no_instance_lkn
from .verify import NoInstanceNotFound, emit_table, find_no_instance_in_progression, verify_bounds

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"1..4"`` (inclusive) or ``"1,2,5"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out or any(v < 1 for v in out):
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return out


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(obj, fmt: str, out, text: str | None = None) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    elif fmt == "csv":
        rows = obj if isinstance(obj, list) else [obj]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in row.items()})
        out.write(buf.getvalue())
    else:
        out.write((text if text is not None else json.dumps(obj, indent=2, sort_keys=True)) + "\n")


def _problem_from_args(args) -> LknProblem | LThetaProblem:
    if args.family == "lkn":
        if args.k is None or args.n is None:
            raise UsageError("--family lkn needs -k and -n")
        return LknProblem(args.k, args.n)
    if args.family == "theta":
        return LThetaProblem.from_sines(args.phi_sin, args.theta_sin)
    raise UsageError("--family is required")


def _add_family(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--family", choices=["theta", "lkn"], required=required)
    p.add_argument("-k", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--phi-sin", type=_rational_arg, default=Fraction(3, 5))
    p.add_argument("--theta-sin", type=_rational_arg, default=Fraction(5, 13))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--bit-budget", type=int, default=DEFAULT_BIT_BUDGET)


def _load(path: str):
    try:
        return serialize.load_automaton(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load automaton {path}: {exc}") from None


# -- subcommands ---------------------------------------------------------------


def cmd_build(args, out) -> int:
    what = args.construction
    if what == "theta-qfa":
        automaton = build_theta_qfa(PythagoreanAngle.from_sin(args.phi_sin))
    elif what in ("lkn-qfa", "lkn-pfa", "lkn-dfa"):
        if args.k is None or args.n is None:
            raise UsageError(f"{what} needs -k and -n")
        builder = {"lkn-qfa": build_lkn_qfa, "lkn-pfa": build_lkn_pfa, "lkn-dfa": build_lkn_dfa}[what]
        automaton = builder(args.k, args.n)
    else:  # cyclic-dfa
        if not args.automaton:
            raise UsageError("cyclic-dfa needs --automaton PFA.json")
        source = _load(args.automaton)
        if isinstance(source, UnaryDFA):
            source = dfa_to_pfa(source)
        problem = _problem_from_args(args) if args.family else None
        result = cyclic_conversion(source, args.epsilon, problem, args.search_bound)
        automaton = result.dfa
        sys.stderr.write(f"period {result.period}, threshold {result.threshold}\n")
    text = serialize.dumps_automaton(automaton)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    problem = _problem_from_args(args)
    label = classify(problem, args.m, args.bit_budget)
    _emit({"m": args.m, "label": str(label)}, args.format, out, text=str(label))
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    automaton = _load(args.automaton)
    m = args.m
    if isinstance(automaton, UnaryDFA):
        result = {"accept": "1" if dfa_accepts(automaton, m) else "0"}
    elif isinstance(automaton, UnaryPFA):
        o = pfa_outcome(automaton, m, args.bit_budget)
        result = {"accept": str(o.accept), "reject": str(o.reject), "dont_know": str(o.dont_know)}
    elif isinstance(automaton, UnaryMCQFA):
        result = {"accept": str(qfa_accept_probability(automaton, m, args.bit_budget))}
    else:
        iv = automaton.accept_interval(m)
        result = (
            {"accept": str(iv.lo)}
            if iv.is_exact
            else {"accept_lo": str(iv.lo), "accept_hi": str(iv.hi), "accept_float": iv.midpoint()}
        )
    text = " ".join(f"{k}={v}" for k, v in result.items())
    if args.format == "text" and "accept" in result:
        text += f"  (~{float_shadow(parse_rational(result['accept'])):.6g})"
    _emit(result, args.format, out, text=text)
    return EXIT_OK


def _short(x: Fraction | None) -> str:
    # long certified endpoints are unreadable in text mode; json/csv keep them exact
    if x is None or len(str(x)) <= 24:
        return str(x)
    return f"~{float_shadow(x):.12g}"


def cmd_verify(args, out) -> int:
    problem = _problem_from_args(args)
    if args.automaton:
        automaton = _load(args.automaton)
    else:
        if args.construction == "theta-qfa":
            automaton = build_theta_qfa(PythagoreanAngle.from_sin(args.phi_sin))
        elif args.construction in ("lkn-qfa", "lkn-pfa", "lkn-dfa"):
            builder = {"lkn-qfa": build_lkn_qfa, "lkn-pfa": build_lkn_pfa, "lkn-dfa": build_lkn_dfa}
            automaton = builder[args.construction](problem.k, problem.n)
        else:
            raise UsageError("verify needs --automaton FILE or --construction NAME")
    # defaults: the bounds each construction is claimed to meet
    if isinstance(problem, LThetaProblem):
        yes, no = problem.yes_bound, problem.no_bound
    elif isinstance(automaton, BlockRotationQFA):
        yes, no = Fraction(1), Fraction(2, 3)
    elif isinstance(automaton, UnaryDFA):
        yes, no = Fraction(1), Fraction(0)
    else:
        yes, no = Fraction(1), Fraction(1, 3)
    if args.yes_bound is not None:
        yes = args.yes_bound
    if args.no_bound is not None:
        no = args.no_bound
    report = verify_bounds(automaton, problem, args.m_max, yes, no, args.bit_budget)
    data = report.to_dict()
    if args.format == "csv":
        flat = {k: v for k, v in data.items() if k not in ("counterexamples",)}
        flat["counterexamples"] = len(report.counterexamples)
        _emit(flat, "csv", out)
    else:
        text = (
            f"{report.verdict}: yes={report.yes_count} no={report.no_count} "
            f"unpromised={report.unpromised_count} budget_exceeded={report.budget_exceeded} "
            f"min_yes={_short(report.min_yes)} max_no={_short(report.max_no)} "
            f"(required >= {report.yes_bound}, <= {report.no_bound})"
        )
        _emit(data, args.format, out, text=text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_analyze(args, out) -> int:
    automaton = _load(args.automaton)
    if isinstance(automaton, UnaryDFA):
        automaton = dfa_to_pfa(automaton)
    if not isinstance(automaton, UnaryPFA):
        raise UsageError("analyze needs a DFA or PFA")
    structure = analyze_chain(automaton.transition)
    data = structure.to_dict()
    text = json.dumps(data, sort_keys=True)
    _emit(data, "json" if args.format == "csv" else args.format, out, text=text)
    return EXIT_OK


def cmd_progression(args, out) -> int:
    problem = LThetaProblem.from_sines(args.phi_sin, args.theta_sin)
    try:
        l = find_no_instance_in_progression(problem, args.n0, args.D, args.search_limit, args.bit_budget)
    except NoInstanceNotFound as exc:
        _emit({"found": False, "message": str(exc)}, args.format, out, text=f"not found: {exc}")
        return EXIT_FAIL
    m = args.n0 + l * args.D
    _emit({"found": True, "l": l, "m": m}, args.format, out, text=f"l={l} m={m}")
    return EXIT_OK


def cmd_table(args, out) -> int:
    rows = emit_table(args.k, args.n)
    dicts = [{f: getattr(r, f) for f in r.FIELDS} for r in rows]
    if args.format == "text":
        lines = ["\t".join(rows[0].FIELDS)] + ["\t".join(str(x) for x in r.as_tuple()) for r in rows]
        out.write("\n".join(lines) + "\n")
    else:
        _emit(dicts, args.format, out)
    return EXIT_OK


def cmd_crt(args, out) -> int:
    if args.witness:
        problem = LknProblem(args.k, args.n)
        value = generate_no_instance_lkn(problem, args.satisfied, args.offset)
    else:
        if not args.constraints:
            raise UsageError("crt needs RESIDUE:MODULUS pairs or --witness")
        constraints = []
        for item in args.constraints:
            try:
                r, mod = item.split(":")
                constraints.append(ResidueConstraint(int(r), int(mod)))
            except ValueError as exc:
                raise UsageError(f"bad constraint {item!r}: {exc}") from None
        value = crt_solve(constraints)
    _emit({"K": value}, args.format, out, text=str(value))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="promise-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit a construction as automaton JSON")
    p.add_argument("construction", choices=["theta-qfa", "lkn-qfa", "lkn-pfa", "lkn-dfa", "cyclic-dfa"])
    _add_family(p, required=False)
    p.add_argument("--automaton", help="source PFA for cyclic-dfa")
    p.add_argument("--epsilon", type=_rational_arg, default=Fraction(1, 3))
    p.add_argument("--search-bound", type=int, default=1024)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("classify", help="label an input length")
    _add_family(p)
    p.add_argument("-m", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="acceptance probability at one length")
    p.add_argument("--automaton", required=True)
    p.add_argument("-m", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="sweep promised lengths against bounds")
    _add_family(p)
    p.add_argument("--automaton")
    p.add_argument("--construction", choices=["theta-qfa", "lkn-qfa", "lkn-pfa", "lkn-dfa"])
    p.add_argument("-m", "--m-max", type=int, default=10**4)
    p.add_argument("--yes-bound", type=_rational_arg)
    p.add_argument("--no-bound", type=_rational_arg)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="Markov-chain structure of a PFA or DFA")
    p.add_argument("--automaton", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("progression", help="search n0 + l*D for a no-instance of L^theta")
    p.add_argument("--phi-sin", type=_rational_arg, default=Fraction(3, 5))
    p.add_argument("--theta-sin", type=_rational_arg, default=Fraction(5, 13))
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("-D", type=int, default=1)
    p.add_argument("--search-limit", type=int, default=10**6)
    _add_common(p)
    p.set_defaults(func=cmd_progression)

    p = sub.add_parser("table", help="state counts and lower-bound quantities")
    p.add_argument("-k", type=parse_range, required=True)
    p.add_argument("-n", type=parse_range, required=True)
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("crt", help="solve congruences, or build an L^{k,n} no-instance")
    p.add_argument("constraints", nargs="*", metavar="RESIDUE:MODULUS")
    p.add_argument("--witness", action="store_true")
    p.add_argument("-k", type=int, default=1)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--satisfied", type=lambda s: [int(x) for x in s.split(",")], default=None)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.set_defaults(func=cmd_crt)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (BitBudgetExceeded, ConversionError, ValueError, TypeError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
