"""Command-line interface.

Exit codes: 0 verdict true / success, 1 verdict false / invalid input word,
2 usage or parse errors, 3 selftest counterexample. Reports go to stdout and
are deterministic for fixed inputs and seed; timing goes to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .evaluator import models, sat_table, until_witness
from .formulas import (
    Alphabet,
    AlphabetMismatchError,
    ClassicUntil,
    Formula,
    FreqUntil,
    desugar,
)
from .minsky import (
    MachineFormatError,
    MinskyMachine,
    ReplayError,
    find_successful_computation,
    parse_machine,
    replay,
    validate_machine,
)
from .reduction import (
    Violation,
    decode_word,
    encode_computation,
    is_well_formed_encoding,
    machine_to_formula,
)
from .syntax import ParseError, parse, render
from .words import LassoWord, WordFormatError, format_word, parse_word


class UsageError(Exception):
    pass


def _load_formula_text(arg: str) -> str:
    path = Path(arg)
    if path.is_file():
        return path.read_text().strip()
    return arg


def _load_machine(arg: str) -> MinskyMachine:
    path = Path(arg)
    if not path.is_file():
        raise UsageError(f"machine file not found: {arg}")
    try:
        machine = parse_machine(path.read_text())
    except MachineFormatError as exc:
        raise UsageError(f"{arg}: {exc}") from exc
    problems = validate_machine(machine)
    if problems:
        raise UsageError(f"{arg}: invalid machine: " + "; ".join(problems))
    return machine


def _parse_word(arg: str) -> LassoWord:
    try:
        return parse_word(arg)
    except WordFormatError as exc:
        raise UsageError(str(exc)) from exc


def _parse_formula(text: str, word: LassoWord, alphabet_arg: str | None) -> tuple[Formula, Alphabet]:
    if alphabet_arg is not None:
        letters = tuple(alphabet_arg.split())
        if not letters:
            raise UsageError("alphabet must list at least one letter")
        alphabet = Alphabet(letters)
    else:
        # permissive default: everything mentioned by the word or the formula
        probe = Alphabet(tuple(sorted(word.letters() | _mentioned(text))))
        alphabet = probe
    try:
        return parse(text, alphabet), alphabet
    except ParseError as exc:
        raise UsageError(f"formula: {exc}") from exc


def _mentioned(text: str) -> set[str]:
    from .syntax import _tokenize

    try:
        return {tok.text for tok in _tokenize(text) if tok.kind == "LETTER"}
    except ParseError:
        return set()


def cmd_eval(args: argparse.Namespace) -> int:
    word = _parse_word(args.word)
    text = _load_formula_text(args.formula)
    phi, alphabet = _parse_formula(text, word, args.alphabet)
    started = time.perf_counter()
    verdict = models(word, phi, alphabet)
    print(f"command: eval {text!r} {format_word(word)!r}")
    print("true" if verdict else "false")
    if args.table:
        core = desugar(phi, alphabet)
        table = sat_table(word, core, alphabet)
        for node in table.order:
            bits = "".join("T" if b else "F" for b in table.row(node))
            print(f"table: {bits}  {render(node)}")
    if args.witness:
        if isinstance(phi, (FreqUntil, ClassicUntil)):
            witness = until_witness(word, phi, alphabet)
            if witness is None:
                print("witness: none")
            else:
                threshold = witness.threshold
                print(
                    f"witness: j={witness.position} count={witness.count} "
                    f"threshold={threshold.numerator}/{threshold.denominator}"
                )
        else:
            print("witness: not an until formula")
    print(f"time: {time.perf_counter() - started:.3f}s", file=sys.stderr)
    return 0 if verdict else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    machine = _load_machine(args.machine)
    try:
        comp = replay(machine, args.ids)
    except ReplayError as exc:
        print(f"invalid computation: {exc}")
        return 1
    _print_computation(comp)
    return 0


def _print_computation(comp) -> None:
    parts = [f"({comp.configs[0][0]},{comp.configs[0][1]})"]
    for name, config in zip(comp.transitions, comp.configs[1:]):
        parts.append(f"--{name}--> ({config[0]},{config[1]})")
    print("computation: " + " ".join(parts))
    print(f"successful: {'yes' if comp.successful else 'no'}")


def cmd_reduce(args: argparse.Namespace) -> int:
    machine = _load_machine(args.machine)
    text = render(machine_to_formula(machine))
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    machine = _load_machine(args.machine)
    if args.search:
        max_steps, max_counter = args.search
        comp = find_successful_computation(machine, max_steps, max_counter)
        if comp is None:
            print("no successful computation within bounds")
            return 1
    else:
        if not args.ids:
            raise UsageError("encode needs --ids or --search")
        try:
            comp = replay(machine, args.ids)
        except ReplayError as exc:
            print(f"invalid computation: {exc}")
            return 1
        if not comp.successful:
            print("computation is not successful, cannot encode")
            return 1
    encoded = encode_computation(comp, machine)
    print(format_word(encoded.word))
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    machine = _load_machine(args.machine)
    word = _parse_word(args.word)
    if not is_well_formed_encoding(word, machine):
        print("word is not a well-formed encoding")
        return 1
    outcome = decode_word(word, machine)
    if isinstance(outcome, Violation):
        print(str(outcome))
        return 1
    _print_computation(outcome)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    machine = _load_machine(args.machine)
    word = _parse_word(args.word)
    verdict = is_well_formed_encoding(word, machine)
    print("true" if verdict else "false")
    return 0 if verdict else 1


def cmd_selftest(args: argparse.Namespace) -> int:
    from .campaigns import selftest_suites

    started = time.perf_counter()
    results = selftest_suites(args.seed, args.budget)
    failed = False
    for result in results:
        print(result.summary())
        for failure in result.failures:
            print(f"  counterexample: {failure}")
        failed = failed or not result.ok
    print(f"time: {time.perf_counter() - started:.1f}s", file=sys.stderr)
    return 3 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fltl",
        description="Frequency LTL toolkit: evaluate, simulate, reduce, "
        "encode, decode, check, selftest.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a formula on a lasso word")
    p.add_argument("formula", help="formula literal or path to a formula file")
    p.add_argument("word", help="word literal, e.g. 'c b a a b b ; c'")
    p.add_argument("--table", action="store_true", help="dump the satisfaction table")
    p.add_argument(
        "--witness", action="store_true", help="print the minimal until witness"
    )
    p.add_argument("--alphabet", help="explicit alphabet (space-separated letters)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("simulate", help="replay a transition sequence")
    p.add_argument("machine")
    p.add_argument("ids", nargs="+")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reduce", help="emit the formula a machine reduces to")
    p.add_argument("machine")
    p.add_argument("-o", "--out", help="write the formula to a file")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("encode", help="encode a successful computation as a word")
    p.add_argument("machine")
    p.add_argument("--ids", nargs="+", help="transition names to replay")
    p.add_argument(
        "--search",
        nargs=2,
        type=int,
        metavar=("MAX_STEPS", "MAX_COUNTER"),
        help="search for a shortest successful computation within bounds",
    )
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode an encoding back to a computation")
    p.add_argument("machine")
    p.add_argument("word")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("check", help="membership in the shape language")
    p.add_argument("machine")
    p.add_argument("word")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("selftest", help="run the property campaigns")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--budget", choices=("small", "full"), default="small")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        ParseError,
        WordFormatError,
        MachineFormatError,
        AlphabetMismatchError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
