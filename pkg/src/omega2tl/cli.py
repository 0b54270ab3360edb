"""Command-line front-end.

Subcommands: parse, check, sat, valid, entail, transitions, selftest,
demo-noncompactness.  Exit codes: 0 for positive results, 1 for
false/unsat-style negatives, 2 for usage errors.  ``--json`` switches to
machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from omega2tl import checker, selftest, solver, transitions
from omega2tl.formula import (Formula, ParseError, closure, desugar, length,
                              parse, render)
from omega2tl.model import ModelFormatError, TimeInstant, load, to_json_dict

DEFAULT_MAX_CLOSURE = 64


class UsageError(Exception):
    pass


def _parse_formula(text: str) -> Formula:
    try:
        phi = parse(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse formula: {exc}")
    cap = int(os.environ.get("OMEGA2TL_MAX_CLOSURE", DEFAULT_MAX_CLOSURE))
    size = len(closure(desugar(phi)))
    if size > cap:
        raise UsageError(
            f"closure size {size} exceeds the cap {cap} "
            "(raise OMEGA2TL_MAX_CLOSURE to override)")
    return phi


def _load_model(path: str):
    try:
        return load(path)
    except (OSError, json.JSONDecodeError, ModelFormatError) as exc:
        raise UsageError(f"cannot load model {path}: {exc}")


def _parse_at(text: str) -> TimeInstant:
    try:
        row, col = (int(part) for part in text.split(","))
        if row < 0 or col < 0:
            raise ValueError
    except ValueError:
        raise UsageError(f"--at expects 'i,j' with nonnegative integers, got {text!r}")
    return TimeInstant(row, col)


def _load_theory(path: str) -> list[Formula]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read theory {path}: {exc}")
    theory = []
    for n, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            theory.append(_parse_formula(text))
        except UsageError as exc:
            raise UsageError(f"{path}:{n}: {exc}")
    return theory


def _bounds(args) -> solver.SolverBounds:
    if args.complete:
        return solver.SolverBounds(complete=True)
    return solver.SolverBounds(
        max_outer_prefix=args.max_prefix, max_outer_loop=args.max_loop,
        max_inner_prefix=args.max_prefix, max_inner_loop=args.max_loop)


def _emit(args, human: str, data: dict) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(human)


# --- subcommands ----------------------------------------------------------


def _cmd_parse(args) -> int:
    phi = _parse_formula(args.formula)
    core = desugar(phi)
    _emit(args,
          f"parsed: {render(phi)}\nast: {phi!r}\ndesugared: {render(core)}\n"
          f"length: {length(phi)}  desugared length: {length(core)}",
          {"parsed": render(phi), "ast": repr(phi), "desugared": render(core),
           "length": length(phi), "desugared_length": length(core)})
    return 0


def _cmd_check(args) -> int:
    model = _load_model(args.model)
    phi = _parse_formula(args.formula)
    t = _parse_at(args.at)
    result = checker.holds(model, t, phi)
    _emit(args, "true" if result else "false",
          {"holds": result, "at": [t.row, t.col], "formula": render(phi)})
    return 0 if result else 1


def _cmd_sat(args) -> int:
    phi = _parse_formula(args.formula)
    result = solver.sat(phi, _bounds(args))
    match result:
        case solver.Sat(witness):
            doc = to_json_dict(witness)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    json.dump(doc, fh, indent=2, sort_keys=True)
                    fh.write("\n")
                _emit(args, f"SAT (witness written to {args.output})",
                      {"result": "sat", "witness_file": args.output})
            else:
                _emit(args, "SAT\n" + json.dumps(doc, indent=2, sort_keys=True),
                      {"result": "sat", "witness": doc})
            return 0
        case solver.Unsat():
            _emit(args, "UNSAT", {"result": "unsat"})
            return 1
        case solver.UnsatWithinBounds():
            _emit(args, "UNSAT-WITHIN-BOUNDS",
                  {"result": "unsat-within-bounds"})
            return 1
    raise AssertionError


def _verdict(args, verdict: bool | None, positive: str, negative: str) -> int:
    if verdict is True:
        _emit(args, positive, {"result": positive})
        return 0
    if verdict is False:
        _emit(args, negative, {"result": negative})
        return 1
    _emit(args, "unknown (within bounds)", {"result": "unknown"})
    return 1


def _cmd_valid(args) -> int:
    phi = _parse_formula(args.formula)
    return _verdict(args, solver.valid(phi, _bounds(args)), "valid", "not valid")


def _cmd_entail(args) -> int:
    theory = _load_theory(args.theory) if args.theory else []
    phi = _parse_formula(args.formula)
    return _verdict(args, solver.entails(theory, phi, _bounds(args)),
                    "entailed", "not entailed")


def _cmd_transitions(args) -> int:
    model = _load_model(args.model)
    report = transitions.check_transition_discipline(model)
    doc = {"tr1_variable_violations":
           [{"row": r, "var": f"p{p}"} for r, p in report.tr1_variable_violations],
           "tr2_variable_violations":
           [{"row": r, "col": c, "var": f"p{p}"}
            for r, c, p in report.tr2_variable_violations],
           "clean": report.clean}
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0 if report.clean else 1


def _cmd_selftest(args) -> int:
    ok, lines = selftest.run(args.seed, args.cases)
    for line in lines:
        print(line)
    print("selftest:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_demo_noncompactness(args) -> int:
    family = transitions.noncompactness_family(args.n)
    witness = transitions.noncompactness_witness(args.n)
    verified = checker.check_theory(witness, TimeInstant(0, 0), family)
    beyond = parse("[w]" * (args.n + 1) + "p0")
    escape = checker.holds(witness, TimeInstant(0, 0), beyond)
    if args.json:
        print(json.dumps({
            "n": args.n,
            "family": [render(f) for f in family],
            "witness": to_json_dict(witness),
            "family_satisfied_at_origin": verified,
            "next_row_power_satisfied": escape,
        }, indent=2, sort_keys=True))
    else:
        print(f"family (n={args.n}):")
        for f in family:
            print(f"  {render(f)}")
        print("witness:", json.dumps(to_json_dict(witness), sort_keys=True))
        print(f"family satisfied by witness at <0,0>: {verified}")
        print(f"  (the witness already fails [w]^{args.n + 1}p0: {escape})")
    return 0 if verified else 1


# --- entry point ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="omega2tl",
        description="Temporal logic over two-level (row/column) time: "
                    "parsing, model checking, satisfiability.")
    top.add_argument("--json", action="store_true",
                     help="machine-readable output")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and desugar a formula")
    p.add_argument("formula")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("check", help="evaluate a formula on a model")
    p.add_argument("--model", required=True)
    p.add_argument("--at", default="0,0", help="time instant i,j")
    p.add_argument("formula")
    p.set_defaults(func=_cmd_check)

    for name, func in (("sat", _cmd_sat), ("valid", _cmd_valid),
                       ("entail", _cmd_entail)):
        p = sub.add_parser(name)
        p.add_argument("--max-prefix", type=int, default=8)
        p.add_argument("--max-loop", type=int, default=8)
        p.add_argument("--complete", action="store_true",
                       help="run to exhaustion; Unsat answers become definitive")
        if name == "sat":
            p.add_argument("--output", help="write the witness model here")
        if name == "entail":
            p.add_argument("--theory", help="file with one formula per line")
        p.add_argument("formula")
        p.set_defaults(func=func)

    p = sub.add_parser("transitions", help="variable-level TR1/TR2 report")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_transitions)

    p = sub.add_parser("selftest", help="differential and axiom suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=1000)
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("demo-noncompactness",
                       help="emit the clipped noncompactness family and witness")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=_cmd_demo_noncompactness)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
