"""From Minsky machines to formulas, and back.

A successful computation is spelled out as a lasso word over the machine's
reduction alphabet: a separator, the white counter block ``a^m b^n``, a
transition letter, the gray counter block ``ah^m bh^n``, the next separator,
the gray block copied back to white (the carryover), and so on, ending in a
``#`` loop. Two formula families recognize these words:

* the shape formula, a frequency-free formula whose models are exactly the
  well-formed encodings (checked independently by
  :func:`is_well_formed_encoding`);
* the balance formula, whose half-frequency untils force complementary
  letter classes to balance, which pins counter updates and carryovers.

The decoder inverts the encoding and reports the first carryover or update
violation, which is what the mutation campaigns key on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from random import Random
from typing import Iterator, Sequence

from .formulas import (
    Alphabet,
    Always,
    And,
    Atom,
    ClassicUntil,
    Eventually,
    Formula,
    FreqUntil,
    Implies,
    Next,
    Not,
    conj,
    disj,
    letter_set,
)
from .minsky import (
    Computation,
    MinskyMachine,
    Operation,
    replay,
    step,
    validate_machine,
)
from .words import LassoWord

LETTER_A = "a"
LETTER_B = "b"
LETTER_AH = "ah"
LETTER_BH = "bh"
SEP0 = "$0"
SEP1 = "$1"
SEPZ = "$z"
PAD = "#"

SEPARATORS = (SEP0, SEP1, SEPZ)

# Transition names may not collide with these.
RESERVED_TOKENS = (
    LETTER_A,
    LETTER_B,
    LETTER_AH,
    LETTER_BH,
    SEP0,
    SEP1,
    SEPZ,
    "$zero",
    PAD,
)

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_GRAMMAR_KEYWORDS = frozenset({"true", "false", "X", "F", "G", "U"})


class ReductionError(ValueError):
    pass


def _require_valid(machine: MinskyMachine) -> None:
    problems = validate_machine(machine)
    if problems:
        raise ReductionError("invalid machine: " + "; ".join(problems))


def build_alphabet(machine: MinskyMachine) -> Alphabet:
    """The encoding alphabet: counter letters, transition names, separators
    and the padding letter; size 8 + |T|."""
    _require_valid(machine)
    for name in machine.transition_names:
        if name in RESERVED_TOKENS:
            raise ReductionError(
                f"transition name {name!r} collides with a reserved token"
            )
        if name in _GRAMMAR_KEYWORDS or not _NAME_RE.match(name):
            raise ReductionError(
                f"transition name {name!r} is not a formula identifier"
            )
    return Alphabet(
        (LETTER_A, LETTER_B, LETTER_AH, LETTER_BH)
        + machine.transition_names
        + (SEP0, SEP1, SEPZ, PAD)
    )


# --- letter partitions ---


@dataclass(frozen=True)
class PartitionTable:
    """The two partitions of the alphabet minus ``#``.

    ``update_classes`` fold increment/decrement transition letters into the
    counter letters they act like (used to check counter updates);
    ``carryover_classes`` keep counter letters alone and lump transitions and
    separators (used to check carryovers). ``complements`` is the involution
    pairing each class with the one it must balance against.
    """

    update_classes: dict[str, frozenset[str]]
    carryover_classes: dict[str, frozenset[str]]
    complements: dict[str, str]
    update_tuples: tuple[tuple[str, str, str, str], ...]
    carryover_tuples: tuple[tuple[str, str, str], ...]


def partition_table(machine: MinskyMachine) -> PartitionTable:
    def ops(*wanted: Operation) -> frozenset[str]:
        return frozenset(t.name for t in machine.with_op(*wanted))

    update = {
        "a": frozenset({LETTER_A}) | ops(Operation.INC1),
        "ah": frozenset({LETTER_AH}) | ops(Operation.DEC1),
        "b": frozenset({LETTER_B}) | ops(Operation.INC2),
        "bh": frozenset({LETTER_BH}) | ops(Operation.DEC2),
        "0": frozenset({SEP0}),
        "1": frozenset({SEP1}),
        "zero": ops(Operation.ZERO1, Operation.ZERO2),
        "zerobar": frozenset({SEPZ}),
    }
    carryover = {
        "a": frozenset({LETTER_A}),
        "ah": frozenset({LETTER_AH}),
        "b": frozenset({LETTER_B}),
        "bh": frozenset({LETTER_BH}),
        "0": frozenset(machine.transition_names),
        "1": frozenset(SEPARATORS),
    }
    complements = {
        "a": "ah",
        "ah": "a",
        "b": "bh",
        "bh": "b",
        "0": "1",
        "1": "0",
        "zero": "zerobar",
        "zerobar": "zero",
    }
    update_tuples = tuple(
        product(("a", "ah"), ("b", "bh"), ("0", "1"), ("zero", "zerobar"))
    )
    carryover_tuples = tuple(product(("a", "ah"), ("b", "bh"), ("0", "1")))
    return PartitionTable(
        update, carryover, complements, update_tuples, carryover_tuples
    )


def _class_counts(
    word: Sequence[str], classes: dict[str, frozenset[str]]
) -> dict[str, int]:
    lookup: dict[str, str] = {}
    for key, letters in classes.items():
        for letter in letters:
            lookup[letter] = key
    counts = {key: 0 for key in classes}
    for token in word:
        key = lookup.get(token)
        if key is None:
            raise ValueError(f"token {token!r} not covered by the partition")
        counts[key] += 1
    return counts


def balance_check_update(
    word: Sequence[str], table: PartitionTable
) -> tuple[bool, dict[str, int]]:
    """Whether every four-class tuple covers at least half of the word, plus
    the per-class occurrence counts."""
    counts = _class_counts(word, table.update_classes)
    ok = all(
        2 * sum(counts[key] for key in tup) >= len(word)
        for tup in table.update_tuples
    )
    return ok, counts


def balance_check_carryover(
    word: Sequence[str], table: PartitionTable
) -> tuple[bool, dict[str, int]]:
    """Three-class variant of :func:`balance_check_update`."""
    counts = _class_counts(word, table.carryover_classes)
    ok = all(
        2 * sum(counts[key] for key in tup) >= len(word)
        for tup in table.carryover_tuples
    )
    return ok, counts


# --- the formulas ---


def _dollar() -> Formula:
    return letter_set(SEPARATORS)


def _transition_set(machine: MinskyMachine) -> Formula:
    return letter_set(machine.transition_names)


def encoding_shape_formula(machine: MinskyMachine) -> Formula:
    """Frequency-free formula recognizing the well-formed encodings.

    Conjunction of the block-shape skeleton with: initial/final transition
    placement, location chaining, zero tests leaving the tested counter
    empty, zero transitions followed by the zero separator, and strict
    alternation of the two plain separators.
    """
    _require_valid(machine)
    dollar = _dollar()
    trans = _transition_set(machine)
    pad = Atom(PAD)
    a, b = Atom(LETTER_A), Atom(LETTER_B)
    ah, bh = Atom(LETTER_AH), Atom(LETTER_BH)

    form = And(
        And(dollar, Next(ClassicUntil(Not(pad), And(dollar, Next(Always(pad)))))),
        Always(
            Implies(
                And(dollar, Not(Next(pad))),
                Next(
                    ClassicUntil(
                        a,
                        ClassicUntil(
                            b,
                            And(
                                trans,
                                Next(ClassicUntil(ah, ClassicUntil(bh, dollar))),
                            ),
                        ),
                    )
                ),
            )
        ),
    )

    placement = And(
        Next(Atom(machine.t_init)),
        Eventually(And(Atom(machine.t_final), Next(Always(Not(trans))))),
    )

    chaining = Always(
        conj(
            Implies(
                Atom(t.name),
                Not(
                    Next(
                        disj(
                            ClassicUntil(Not(trans), Atom(succ.name))
                            for succ in machine.transitions
                            if t.trg != succ.src
                        )
                    )
                ),
            )
            for t in machine.transitions
        )
    )

    zero1_names = [t.name for t in machine.with_op(Operation.ZERO1)]
    zero2_names = [t.name for t in machine.with_op(Operation.ZERO2)]
    zero_names = zero1_names + zero2_names
    zero1_empty = Always(
        Implies(letter_set(zero1_names), ClassicUntil(Not(ah), dollar))
    )
    zero2_empty = Always(
        Implies(letter_set(zero2_names), ClassicUntil(Not(bh), dollar))
    )

    zero_separator = And(
        Atom(SEP0),
        Always(Implies(letter_set(zero_names), ClassicUntil(Not(dollar), Atom(SEPZ)))),
    )

    plain = letter_set((SEP0, SEP1))
    nonzero_names = [
        t.name for t in machine.transitions if t.op not in (Operation.ZERO1, Operation.ZERO2)
    ]
    # The guard position of the alternation clause is itself a plain
    # separator, so the until must start one step later, as in
    # next_separator_formula; anchored at the guard it would be vacuously
    # false.
    alternation = And(
        Always(
            Implies(letter_set(nonzero_names), ClassicUntil(Not(dollar), plain))
        ),
        Always(
            And(
                Implies(
                    And(Atom(SEP0), Not(Next(pad))),
                    next_separator_formula(1),
                ),
                Implies(
                    And(Atom(SEP1), Not(Next(pad))),
                    next_separator_formula(0),
                ),
            )
        ),
    )

    return conj(
        [form, placement, chaining, zero1_empty, zero2_empty, zero_separator, alternation]
    )


def last_separator_formula(beta: int) -> Formula:
    """Holds exactly at the last occurrence of the given plain separator."""
    sep = Atom(SEP0 if beta == 0 else SEP1)
    return And(sep, Next(Always(Not(sep))))


def next_separator_formula(beta: int) -> Formula:
    """Holds where the next plain separator exists and is the given one."""
    sep = Atom(SEP0 if beta == 0 else SEP1)
    return Next(ClassicUntil(Not(letter_set((SEP0, SEP1))), sep))


def balance_formula(machine: MinskyMachine) -> Formula:
    """Half-frequency untils forcing the complementary class balances.

    At a separator whose next plain separator is ``$b``, each of the sixteen
    four-class disjunctions must cover at least half of the positions up to
    the last ``$b``; at every non-final transition, each of the eight
    three-class disjunctions must cover at least half of the positions up to
    the final transition.
    """
    _require_valid(machine)
    table = partition_table(machine)
    half = Fraction(1, 2)
    update_sets = {
        key: letter_set(val) for key, val in table.update_classes.items()
    }
    carryover_sets = {
        key: letter_set(val) for key, val in table.carryover_classes.items()
    }

    def update_guard(beta: int) -> Formula:
        body = conj(
            FreqUntil(
                half,
                disj(update_sets[key] for key in tup),
                last_separator_formula(beta),
            )
            for tup in table.update_tuples
        )
        return Next(body)

    carryover_guard = conj(
        FreqUntil(
            half,
            disj(carryover_sets[key] for key in tup),
            Atom(machine.t_final),
        )
        for tup in table.carryover_tuples
    )

    dollar = _dollar()
    trans = _transition_set(machine)
    return Always(
        conj(
            [
                Implies(And(dollar, next_separator_formula(0)), update_guard(0)),
                Implies(And(dollar, next_separator_formula(1)), update_guard(1)),
                Implies(
                    And(trans, Not(Atom(machine.t_final))), carryover_guard
                ),
            ]
        )
    )


def machine_to_formula(machine: MinskyMachine) -> Formula:
    """Satisfiable over the reduction alphabet iff the machine has a
    successful computation."""
    return And(encoding_shape_formula(machine), balance_formula(machine))


# --- encoding ---


@dataclass(frozen=True)
class Segment:
    kind: str  # "sep" | "white" | "trans" | "hat"
    index: int
    start: int
    stop: int


@dataclass(frozen=True)
class EncodedComputation:
    word: LassoWord
    segments: tuple[Segment, ...]

    def segment_at(self, pos: int) -> Segment:
        """Segment containing prefix position ``pos``; empty blocks are
        skipped in favor of the covering nonempty segment."""
        for seg in self.segments:
            if seg.start <= pos < seg.stop:
                return seg
        raise IndexError(f"position {pos} outside the encoded prefix")


def separator_sequence(machine: MinskyMachine, names: Sequence[str]) -> list[str]:
    """Separators around the k transition blocks: the zero separator after
    zero tests, strict alternation (starting at ``$1``) elsewhere."""
    seps = [SEP0]
    rank = 0
    for name in names:
        if machine.transition(name).op in (Operation.ZERO1, Operation.ZERO2):
            seps.append(SEPZ)
        else:
            rank += 1
            seps.append(SEP1 if rank % 2 == 1 else SEP0)
    return seps


def encode_computation(
    comp: Computation, machine: MinskyMachine
) -> EncodedComputation:
    """The canonical word of a successful computation (carryover blocks equal
    the gray blocks they copy; loop is a single ``#``)."""
    _require_valid(machine)
    if not comp.successful:
        raise ReductionError("only successful computations can be encoded")
    check = replay(machine, comp.transitions)
    if check.configs != comp.configs:
        raise ReductionError("computation does not replay on this machine")

    seps = separator_sequence(machine, comp.transitions)
    k = comp.steps
    tokens: list[str] = []
    segments: list[Segment] = []

    def emit(kind: str, index: int, items: Sequence[str]) -> None:
        start = len(tokens)
        tokens.extend(items)
        segments.append(Segment(kind, index, start, len(tokens)))

    emit("sep", 0, [seps[0]])
    emit("white", 0, [LETTER_A] * comp.configs[0][0] + [LETTER_B] * comp.configs[0][1])
    for i in range(1, k + 1):
        m, n = comp.configs[i]
        emit("trans", i, [comp.transitions[i - 1]])
        emit("hat", i, [LETTER_AH] * m + [LETTER_BH] * n)
        emit("sep", i, [seps[i]])
        if i < k:
            emit("white", i, [LETTER_A] * m + [LETTER_B] * n)
    word = LassoWord(tuple(tokens), (PAD,))
    return EncodedComputation(word, tuple(segments))


# --- independent membership check and decoding ---


@dataclass(frozen=True)
class _Parsed:
    seps: list[str]
    names: list[str]
    whites: list[tuple[int, int]]  # white blocks, index 0 .. k-1
    hats: list[tuple[int, int]]  # gray blocks, index 1 .. k


def _scan_encoding(word: LassoWord, machine: MinskyMachine) -> _Parsed | None:
    """Parse the block structure of a candidate encoding, or ``None``.

    Accepts any lasso denoting ``prefix . #^omega``: the loop must be all
    padding and the meaningful prefix must not contain padding.
    """
    if any(tok != PAD for tok in word.loop):
        return None
    tokens = list(word.prefix)
    while tokens and tokens[-1] == PAD:
        tokens.pop()
    if PAD in tokens:
        return None
    names = set(machine.transition_names)

    pos = 0

    def take_block(first: str, second: str) -> tuple[int, int]:
        nonlocal pos
        x = 0
        while pos < len(tokens) and tokens[pos] == first:
            x += 1
            pos += 1
        y = 0
        while pos < len(tokens) and tokens[pos] == second:
            y += 1
            pos += 1
        return x, y

    if not tokens or tokens[0] not in SEPARATORS:
        return None
    parsed = _Parsed([tokens[0]], [], [], [])
    pos = 1
    while pos < len(tokens):
        parsed.whites.append(take_block(LETTER_A, LETTER_B))
        if pos >= len(tokens) or tokens[pos] not in names:
            return None
        parsed.names.append(tokens[pos])
        pos += 1
        parsed.hats.append(take_block(LETTER_AH, LETTER_BH))
        if pos >= len(tokens) or tokens[pos] not in SEPARATORS:
            return None
        parsed.seps.append(tokens[pos])
        pos += 1
    if not parsed.names:
        return None
    return parsed


def is_well_formed_encoding(word: LassoWord, machine: MinskyMachine) -> bool:
    """Direct syntactic membership check, independent of the evaluator.

    Verifies the block shape plus: empty initial configuration with the
    initial transition first and the final transition last, location
    chaining, zero tests leaving an empty tested counter, and the separator
    discipline. Carryover blocks are *not* required to copy the gray blocks;
    that is the balance formula's job.
    """
    _require_valid(machine)
    parsed = _scan_encoding(word, machine)
    if parsed is None:
        return False
    k = len(parsed.names)
    if parsed.whites[0] != (0, 0):
        return False
    if parsed.names[0] != machine.t_init or parsed.names[-1] != machine.t_final:
        return False
    trans = [machine.transition(name) for name in parsed.names]
    for prev, cur in zip(trans, trans[1:]):
        if prev.trg != cur.src:
            return False
    for i in range(1, k + 1):
        m, n = parsed.hats[i - 1]
        if trans[i - 1].op == Operation.ZERO1 and m != 0:
            return False
        if trans[i - 1].op == Operation.ZERO2 and n != 0:
            return False
    if parsed.seps != separator_sequence(machine, parsed.names):
        return False
    return True


@dataclass(frozen=True)
class Violation:
    """First broken decoding condition, in word order; carryover compares a
    white copy block against the gray block before it, update compares a
    gray block against the stepped predecessor configuration."""

    kind: str  # "carryover" | "update"
    index: int
    expected: tuple[int, int] | None  # None: the operation was blocked
    actual: tuple[int, int]

    def __str__(self) -> str:
        def fmt(config: tuple[int, int] | None) -> str:
            if config is None:
                return "blocked"
            return f"({config[0]},{config[1]})"

        return (
            f"kind={self.kind} i={self.index} "
            f"expected={fmt(self.expected)} actual={fmt(self.actual)}"
        )


def decode_word(
    word: LassoWord, machine: MinskyMachine
) -> Computation | Violation:
    """Extract the computation spelled out by a well-formed encoding.

    Returns the successful :class:`Computation` when every carryover equals
    its gray block and every counter update matches the transition's
    operation; otherwise the first violation in left-to-right block order.
    """
    _require_valid(machine)
    parsed = _scan_encoding(word, machine)
    if parsed is None or not is_well_formed_encoding(word, machine):
        raise ReductionError("word is not a well-formed encoding")
    k = len(parsed.names)
    configs: list[tuple[int, int]] = [(0, 0)]
    for i in range(1, k + 1):
        op = machine.transition(parsed.names[i - 1]).op
        actual = parsed.hats[i - 1]
        expected = step(configs[-1], op)
        if expected != actual:
            return Violation("update", i, expected, actual)
        configs.append(actual)
        if i < k and parsed.whites[i] != actual:
            return Violation("carryover", i, actual, parsed.whites[i])
    return Computation(tuple(configs), tuple(parsed.names), successful=True)


# --- mutation generator ---


def prefix_mutations(
    prefix: Sequence[str], letters: Sequence[str]
) -> Iterator[tuple[tuple[str, ...], str, int]]:
    """All single-token substitutions, insertions and deletions.

    Yields ``(mutated_prefix, kind, position)``; substitutions that do not
    change the token are skipped.
    """
    prefix = tuple(prefix)
    for pos in range(len(prefix)):
        for letter in letters:
            if letter != prefix[pos]:
                yield prefix[:pos] + (letter,) + prefix[pos + 1 :], "substitute", pos
    for pos in range(len(prefix) + 1):
        for letter in letters:
            yield prefix[:pos] + (letter,) + prefix[pos:], "insert", pos
    for pos in range(len(prefix)):
        yield prefix[:pos] + prefix[pos + 1 :], "delete", pos


def random_mutation(
    prefix: Sequence[str], letters: Sequence[str], rng: Random
) -> tuple[tuple[str, ...], str, int]:
    """One uniformly chosen single-token mutation of the prefix."""
    prefix = tuple(prefix)
    kinds = ["insert"] if not prefix else ["substitute", "insert", "delete"]
    kind = rng.choice(kinds)
    if kind == "substitute":
        pos = rng.randrange(len(prefix))
        choices = [c for c in letters if c != prefix[pos]]
        return prefix[:pos] + (rng.choice(choices),) + prefix[pos + 1 :], kind, pos
    if kind == "insert":
        pos = rng.randrange(len(prefix) + 1)
        return prefix[:pos] + (rng.choice(list(letters)),) + prefix[pos:], kind, pos
    pos = rng.randrange(len(prefix))
    return prefix[:pos] + prefix[pos + 1 :], kind, pos
