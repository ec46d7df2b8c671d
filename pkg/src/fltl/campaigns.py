"""Verification campaigns shared by the test suite and ``fltl selftest``.

Each suite returns a :class:`SuiteResult` with the number of checks done and
the failures found (empty = pass). The suites pair an implementation with an
independent route to the same answer: table evaluator against brute-force
recursion, shape formula against the syntactic membership checker, balance
formula against the decoder, encoder against decoder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from random import Random
from typing import Callable, Sequence

import numpy as np

from .batch import (
    WordTemplate,
    batch_models,
    batch_models_template,
    compile_formula,
    make_template,
)
from .evaluator import (
    brute_force_models,
    brute_force_row,
    models,
    sat_table,
)
from .formulas import (
    TRUE,
    And,
    Atom,
    Eventually,
    Formula,
    FreqUntil,
    Next,
    Not,
)
from .minsky import (
    Computation,
    MinskyMachine,
    Operation,
    Transition,
    find_successful_computation,
    validate_machine,
)
from .reduction import (
    PAD,
    Violation,
    _scan_encoding,
    balance_check_carryover,
    balance_check_update,
    balance_formula,
    build_alphabet,
    decode_word,
    encode_computation,
    encoding_shape_formula,
    is_well_formed_encoding,
    machine_to_formula,
    partition_table,
    prefix_mutations,
    random_mutation,
    separator_sequence,
)
from .words import LassoWord, occ

DEFAULT_FREQS = (
    Fraction(0),
    Fraction(1, 3),
    Fraction(1, 2),
    Fraction(2, 3),
    Fraction(1),
)

_MAX_REPORTED = 10


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    failure_count: int = 0

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    def record(self, condition: bool, message: Callable[[], str] | str) -> None:
        self.checked += 1
        if not condition:
            self.failure_count += 1
            if len(self.failures) < _MAX_REPORTED:
                self.failures.append(message() if callable(message) else message)

    def summary(self) -> str:
        if self.ok:
            return f"suite {self.name}: ok ({self.checked} checks)"
        first = self.failures[0] if self.failures else "?"
        return (
            f"suite {self.name}: FAILED "
            f"({self.failure_count}/{self.checked} checks; first: {first})"
        )


# --- fixed machines ---


def demo_machine() -> MinskyMachine:
    """Six-transition chain: push counter 1 twice, test counter 2 for zero,
    then trade one unit of counter 1 for two of counter 2."""
    t = [
        Transition("t1", "l0", "l1", Operation.INC1),
        Transition("t2", "l1", "l2", Operation.INC1),
        Transition("t3", "l2", "l3", Operation.ZERO2),
        Transition("t4", "l3", "l4", Operation.INC2),
        Transition("t5", "l4", "l5", Operation.DEC1),
        Transition("t6", "l5", "l6", Operation.INC2),
    ]
    return MinskyMachine(
        tuple(f"l{i}" for i in range(7)), tuple(t), "t1", "t6"
    )


def two_step_machine() -> MinskyMachine:
    t = [
        Transition("t1", "l0", "l1", Operation.INC1),
        Transition("t2", "l1", "l2", Operation.DEC1),
    ]
    return MinskyMachine(("l0", "l1", "l2"), tuple(t), "t1", "t2")


def three_step_machine() -> MinskyMachine:
    t = [
        Transition("t1", "l0", "l1", Operation.INC1),
        Transition("t2", "l1", "l2", Operation.ZERO2),
        Transition("t3", "l2", "l3", Operation.DEC1),
    ]
    return MinskyMachine(("l0", "l1", "l2", "l3"), tuple(t), "t1", "t3")


# --- random generators ---


def random_lasso(
    rng: Random, letters: Sequence[str], max_prefix: int, max_loop: int
) -> LassoWord:
    prefix = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_prefix)))
    loop = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_loop)))
    return LassoWord(prefix, loop)


def random_core_formula(
    rng: Random,
    letters: Sequence[str],
    depth: int,
    freqs: Sequence[Fraction] = DEFAULT_FREQS,
) -> Formula:
    if depth <= 0 or rng.random() < 0.2:
        return Atom(rng.choice(letters))
    kind = rng.choice(("not", "and", "next", "until", "until"))
    if kind == "not":
        return Not(random_core_formula(rng, letters, depth - 1, freqs))
    if kind == "next":
        return Next(random_core_formula(rng, letters, depth - 1, freqs))
    if kind == "and":
        return And(
            random_core_formula(rng, letters, depth - 1, freqs),
            random_core_formula(rng, letters, depth - 1, freqs),
        )
    return FreqUntil(
        rng.choice(freqs),
        random_core_formula(rng, letters, depth - 1, freqs),
        random_core_formula(rng, letters, depth - 1, freqs),
    )


def random_machine(rng: Random, max_transitions: int = 6) -> MinskyMachine:
    """Random machine satisfying the structural conventions by construction:
    the final transition targets a fresh sink location."""
    n_trans = rng.randint(2, max_transitions)
    n_locs = rng.randint(2, 5)
    locs = [f"l{i}" for i in range(n_locs)]
    sink = f"l{n_locs}"
    nonzero = (Operation.INC1, Operation.INC2, Operation.DEC1, Operation.DEC2)
    all_ops = tuple(Operation)
    transitions = [
        Transition("t1", "l0", rng.choice(locs), rng.choice(nonzero))
    ]
    for i in range(2, n_trans):
        transitions.append(
            Transition(
                f"t{i}", rng.choice(locs), rng.choice(locs), rng.choice(all_ops)
            )
        )
    transitions.append(
        Transition(f"t{n_trans}", rng.choice(locs), sink, rng.choice(nonzero))
    )
    return MinskyMachine(
        tuple(locs) + (sink,), tuple(transitions), "t1", f"t{n_trans}"
    )


def machines_with_computations(
    rng: Random,
    count: int,
    max_transitions: int = 6,
    max_steps: int = 14,
    max_counter: int = 5,
) -> list[tuple[MinskyMachine, Computation]]:
    """Random validated machines whose bounded search finds a successful
    computation, paired with that computation."""
    pairs: list[tuple[MinskyMachine, Computation]] = []
    while len(pairs) < count:
        machine = random_machine(rng, max_transitions)
        if validate_machine(machine):
            continue
        comp = find_successful_computation(machine, max_steps, max_counter)
        if comp is not None:
            pairs.append((machine, comp))
    return pairs


# --- evaluator versus brute-force oracle ---


def _or_core(x: Formula, y: Formula) -> Formula:
    return Not(And(Not(x), Not(y)))


def _mask_formula(letters: Sequence[str], mask: int) -> Formula:
    """Core formula whose row, over a word with pairwise distinct letters,
    is exactly ``mask``."""
    picked = [letters[i] for i in range(len(letters)) if (mask >> i) & 1]
    if not picked:
        return Not(TRUE)
    out: Formula = Atom(picked[0])
    for name in picked[1:]:
        out = _or_core(out, Atom(name))
    return out


def mask_equivalence_suite(
    max_size: int = 5, freqs: Sequence[Fraction] = DEFAULT_FREQS
) -> SuiteResult:
    """Exhaustive engine agreement, quotiented by satisfaction rows.

    Both engines are extensional: the row of an operator application depends
    only on the child rows and the word geometry (prefix length, loop
    length). Over a word with pairwise distinct letters every row in
    ``{0,1}^N`` is realized by a disjunction of position letters, so checking
    every operator on every combination of rows, for every geometry up to
    ``max_size``, certifies agreement of the two engines on *all* core
    formulas (any depth, frequencies from ``freqs``) over *all* words of
    these geometries. Rows are compared at every table position.
    """
    result = SuiteResult("evaluator-vs-brute-force (exhaustive row product)")
    for size in range(1, max_size + 1):
        letters = tuple(f"p{i}" for i in range(size))
        for ulen in range(size):
            word = LassoWord(letters[:ulen], letters[ulen:])
            reps = [_mask_formula(letters, m) for m in range(1 << size)]

            def rows_of(phi: Formula) -> tuple[int, int]:
                table = sat_table(word, phi)
                table_mask = table.mask(phi)
                brute = brute_force_row(word, phi)
                brute_mask = sum(1 << i for i, bit in enumerate(brute) if bit)
                return table_mask, brute_mask

            for m, rep in enumerate(reps):
                tmask, bmask = rows_of(rep)
                result.record(
                    tmask == m and bmask == m,
                    f"size={size} ulen={ulen} rep {m}: table={tmask} brute={bmask}",
                )
                for build, tag in ((Not, "not"), (Next, "next")):
                    phi = build(rep)
                    tmask, bmask = rows_of(phi)
                    result.record(
                        tmask == bmask,
                        f"size={size} ulen={ulen} {tag}({m}): "
                        f"table={tmask} brute={bmask}",
                    )
            for mx, my in product(range(1 << size), repeat=2):
                tmask, bmask = rows_of(And(reps[mx], reps[my]))
                result.record(
                    tmask == bmask,
                    f"size={size} ulen={ulen} and({mx},{my}): "
                    f"table={tmask} brute={bmask}",
                )
                for freq in freqs:
                    phi = FreqUntil(freq, reps[mx], reps[my])
                    tmask, bmask = rows_of(phi)
                    result.record(
                        tmask == bmask,
                        f"size={size} ulen={ulen} "
                        f"until[{freq}]({mx},{my}): table={tmask} brute={bmask}",
                    )
    return result


def literal_equivalence_suite(
    max_total: int = 3,
    depth: int = 2,
    freqs: Sequence[Fraction] = (Fraction(0), Fraction(1, 2), Fraction(1)),
) -> SuiteResult:
    """Exhaustive engine agreement on literally enumerated formulas.

    Complements the row-product certification with structural enumeration:
    every distinct core formula up to the given depth over a two-letter
    alphabet, against every lasso word with at most ``max_total`` letters.
    One shared brute-force memo per word keeps the product tractable (the
    formulas share subterms).
    """
    from .evaluator import _brute_sat

    result = SuiteResult("evaluator-vs-brute-force (literal exhaustive)")
    letters = ("a", "b")

    def build(d: int) -> list[Formula]:
        if d == 0:
            return [Atom(l) for l in letters]
        prev = build(d - 1)
        out = list(prev)
        for x in prev:
            out.append(Not(x))
            out.append(Next(x))
        for x in prev:
            for y in prev:
                out.append(And(x, y))
                for freq in freqs:
                    out.append(FreqUntil(freq, x, y))
        return out

    formulas: list[Formula] = []
    seen: set[Formula] = set()
    for phi in build(depth):
        if phi not in seen:
            seen.add(phi)
            formulas.append(phi)

    words = []
    for total in range(1, max_total + 1):
        for ulen in range(total):
            for u in product(letters, repeat=ulen):
                for v in product(letters, repeat=total - ulen):
                    words.append(LassoWord(u, v))

    for word in words:
        sat = _brute_sat(word)
        for phi in formulas:
            got = sat_table(word, phi).holds(phi, 0)
            want = sat(phi, 0)
            result.record(
                got == want,
                lambda word=word, phi=phi: f"disagreement on {word} for {phi!r}",
            )
    return result


def random_equivalence_suite(
    rng: Random,
    count: int,
    max_prefix: int = 8,
    max_loop: int = 8,
    max_depth: int = 5,
    freqs: Sequence[Fraction] = DEFAULT_FREQS,
) -> SuiteResult:
    """Randomized engine agreement on literally constructed formulas."""
    result = SuiteResult("evaluator-vs-brute-force (randomized)")
    letters = ("a", "b", "c")
    for _ in range(count):
        word = random_lasso(
            rng, letters, rng.randint(0, max_prefix), rng.randint(1, max_loop)
        )
        phi = random_core_formula(rng, letters, rng.randint(1, max_depth), freqs)
        got = models(word, phi)
        want = brute_force_models(word, phi)
        result.record(
            got == want,
            lambda: f"word={word} phi={phi!r}: models={got} brute={want}",
        )
    return result


# --- semantic identities ---


def _classic_until_direct(
    word: LassoWord, left: Formula, right: Formula
) -> bool:
    """Third, direct implementation of the classical until: scan forward
    while the left argument holds; satisfaction of the arguments themselves
    comes from the brute-force oracle on suffixes."""
    horizon = word.prefix_len + 2 * word.loop_len
    for i in range(horizon + 1):
        tail = word.suffix(i)
        if brute_force_models(tail, right):
            return True
        if not brute_force_models(tail, left):
            return False
    return False


def identity_suite(rng: Random, count: int) -> SuiteResult:
    """Semantic identities of the frequency until."""
    result = SuiteResult("until identities")
    letters = ("a", "b")
    for _ in range(count):
        word = random_lasso(rng, letters, 6, 5)
        left = random_core_formula(rng, letters, 2)
        right = random_core_formula(rng, letters, 2)

        # zero frequency collapses to eventually
        got = models(word, FreqUntil(Fraction(0), left, right))
        want = models(word, Eventually(right))
        result.record(got == want, lambda: f"zero-freq: {word} {left!r} {right!r}")

        # full frequency is the classical until
        got = models(word, FreqUntil(Fraction(1), left, right))
        want = _classic_until_direct(word, left, right)
        result.record(got == want, lambda: f"classic: {word} {left!r} {right!r}")

        # satisfaction is antitone in the frequency bound
        lo, hi = sorted(rng.choice(DEFAULT_FREQS) for _ in range(2))
        if models(word, FreqUntil(hi, left, right)):
            result.record(
                models(word, FreqUntil(lo, left, right)),
                lambda: f"monotonicity: {word} {left!r} {right!r} {lo} {hi}",
            )
        else:
            result.checked += 1

        # suffixes repeat with the loop period
        i = rng.randint(word.prefix_len, word.prefix_len + 2 * word.loop_len)
        got = models(word.suffix(i), left)
        want = models(word.suffix(i + word.loop_len), left)
        result.record(got == want, lambda: f"suffix congruence: {word} i={i}")
    return result


# --- letter-balance implications (carryover/update class families) ---


def _letter_class_ids(
    alphabet_letters: Sequence[str], classes: dict[str, frozenset[str]]
) -> dict[str, np.ndarray]:
    index = {letter: i for i, letter in enumerate(alphabet_letters)}
    return {
        key: np.array(sorted(index[l] for l in letters), dtype=np.int64)
        for key, letters in classes.items()
    }


def _class_count_matrix(
    digits: np.ndarray, class_ids: dict[str, np.ndarray]
) -> dict[str, np.ndarray]:
    counts = {}
    for key, ids in class_ids.items():
        total = np.zeros(digits.shape[0], dtype=np.int64)
        for letter_id in ids:
            total += (digits == letter_id).sum(axis=1)
        counts[key] = total
    return counts


def _balance_holds(
    counts: dict[str, np.ndarray],
    tuples: Sequence[tuple[str, ...]],
    complements: dict[str, str],
    length: int,
    n_rows: int,
) -> tuple[np.ndarray, np.ndarray]:
    hyp = np.ones(n_rows, dtype=bool)
    for tup in tuples:
        total = sum(counts[key] for key in tup)
        hyp &= 2 * total >= length
    concl = np.ones(n_rows, dtype=bool)
    for key, other in complements.items():
        if key in counts and other in counts:
            concl &= counts[key] == counts[other]
    return hyp, concl


def balance_implication_suite(
    rng: Random,
    exhaustive_len: int = 6,
    n_random: int = 10_000,
    max_random_len: int = 40,
) -> SuiteResult:
    """Half-coverage hypotheses force complementary class balances.

    Exhaustive over all words up to ``exhaustive_len`` over the padding-free
    alphabet of a two-transition machine, then random longer words: whenever
    every class-tuple covers at least half of the word, every class matches
    its complement exactly. Counts are cross-checked against ``occ`` and the
    balance-check operations on a sample.
    """
    result = SuiteResult("letter-balance implications")
    machine = two_step_machine()
    table = partition_table(machine)
    alphabet = build_alphabet(machine)
    letters = tuple(l for l in alphabet.letters if l != PAD)
    upd_ids = _letter_class_ids(letters, table.update_classes)
    car_ids = _letter_class_ids(letters, table.carryover_classes)

    def check_matrix(digits: np.ndarray, length: int) -> tuple[int, int]:
        n_rows = digits.shape[0]
        upd_counts = _class_count_matrix(digits, upd_ids)
        hyp_a, concl_a = _balance_holds(
            upd_counts, table.update_tuples, table.complements, length, n_rows
        )
        car_counts = _class_count_matrix(digits, car_ids)
        hyp_b, concl_b = _balance_holds(
            car_counts, table.carryover_tuples, table.complements, length, n_rows
        )
        bad_a = int(np.sum(hyp_a & ~concl_a))
        bad_b = int(np.sum(hyp_b & ~concl_b))
        result.record(
            bad_a == 0, f"update implication broken for {bad_a} words of len {length}"
        )
        result.record(
            bad_b == 0,
            f"carryover implication broken for {bad_b} words of len {length}",
        )
        return int(hyp_a.sum()), int(hyp_b.sum())

    covered_a = covered_b = 0
    for length in range(exhaustive_len + 1):
        if length == 0:
            digits = np.zeros((1, 0), dtype=np.int8)
        else:
            idx = np.arange(len(letters) ** length, dtype=np.int64)
            powers = len(letters) ** np.arange(length - 1, -1, -1, dtype=np.int64)
            digits = ((idx[:, None] // powers) % len(letters)).astype(np.int8)
        got_a, got_b = check_matrix(digits, length)
        covered_a += got_a
        covered_b += got_b
    result.record(covered_a > 0, "no word satisfied the update hypothesis")
    result.record(covered_b > 0, "no word satisfied the carryover hypothesis")

    # random longer words, batched per length
    per_length: dict[int, int] = {}
    for _ in range(n_random):
        length = rng.randint(exhaustive_len + 1, max_random_len)
        per_length[length] = per_length.get(length, 0) + 1
    for length, rows in sorted(per_length.items()):
        digits = np.array(
            [[rng.randrange(len(letters)) for _ in range(length)] for _ in range(rows)],
            dtype=np.int8,
        )
        check_matrix(digits, length)

    # tie the vectorized counts to the library operations on a sample
    for _ in range(200):
        length = rng.randint(0, exhaustive_len)
        word = tuple(rng.choice(letters) for _ in range(length))
        ok_a, counts_a = balance_check_update(word, table)
        ok_b, counts_b = balance_check_carryover(word, table)
        for key, letter_group in table.update_classes.items():
            result.record(
                counts_a[key] == occ(word, letter_group),
                f"update count mismatch for class {key} on {word}",
            )
        for key, letter_group in table.carryover_classes.items():
            result.record(
                counts_b[key] == occ(word, letter_group),
                f"carryover count mismatch for class {key} on {word}",
            )
        if ok_a:
            for key, other in table.complements.items():
                result.record(
                    counts_a[key] == counts_a[other],
                    f"update balance broken on {word}",
                )
        if ok_b:
            for key, other in table.complements.items():
                if key in counts_b:
                    result.record(
                        counts_b[key] == counts_b[other],
                        f"carryover balance broken on {word}",
                    )
    return result


# --- shape formula versus membership checker ---


def shape_agreement_suite(
    pairs: Sequence[tuple[MinskyMachine, Computation]],
    rng: Random,
    n_mutations: int = 1000,
    n_random: int = 1000,
    max_random_prefix: int = 20,
    python_crosscheck_every: int = 50,
) -> SuiteResult:
    """Evaluator verdict on the shape formula against the syntactic checker,
    over encodings, single-token mutations of them, and random pad-loop
    words."""
    result = SuiteResult("shape formula vs membership checker")
    n_machines = len(pairs)
    per_machine_mut = max(1, -(-n_mutations // n_machines))
    per_machine_rand = max(1, -(-n_random // n_machines))
    crosscheck = 0
    for machine, comp in pairs:
        alphabet = build_alphabet(machine)
        shape = encoding_shape_formula(machine)
        compiled = compile_formula(shape, alphabet)
        encoded = encode_computation(comp, machine)
        words = [encoded.word]
        for _ in range(per_machine_mut):
            mutated, _, _ = random_mutation(
                encoded.word.prefix, alphabet.letters, rng
            )
            words.append(LassoWord(mutated, (PAD,)))
        for _ in range(per_machine_rand):
            length = rng.randint(0, max_random_prefix)
            prefix = tuple(rng.choice(alphabet.letters) for _ in range(length))
            words.append(LassoWord(prefix, (PAD,)))
        verdicts = batch_models(compiled, words)
        checker = [is_well_formed_encoding(w, machine) for w in words]
        result.record(
            bool(verdicts[0]) and checker[0],
            f"encoding of {machine.transition_names} rejected",
        )
        for w, got, want in zip(words, verdicts, checker):
            result.record(
                bool(got) == want,
                lambda w=w, got=got, want=want: (
                    f"shape disagreement on {w}: formula={bool(got)} checker={want}"
                ),
            )
            crosscheck += 1
            if crosscheck % python_crosscheck_every == 0:
                result.record(
                    models(w, shape, alphabet) == bool(got),
                    lambda w=w: f"compiled path diverges from reference on {w}",
                )
    return result


# --- encodings of found computations are models ---


def encoded_model_suite(
    pairs: Sequence[tuple[MinskyMachine, Computation]],
    python_crosscheck: int = 3,
) -> SuiteResult:
    """Every encoding of a found successful computation satisfies the full
    reduction formula."""
    result = SuiteResult("encodings satisfy the reduction formula")
    for idx, (machine, comp) in enumerate(pairs):
        alphabet = build_alphabet(machine)
        formula = machine_to_formula(machine)
        word = encode_computation(comp, machine).word
        compiled = compile_formula(formula, alphabet)
        got = bool(batch_models(compiled, [word])[0])
        result.record(
            got,
            f"encoding of {machine.transition_names} is not a model",
        )
        if idx < python_crosscheck:
            result.record(
                models(word, formula, alphabet),
                f"reference evaluator rejects encoding #{idx}",
            )
    return result


# --- exhaustive shape-language equivalence: balance formula vs decoder ---


def _chain_names(machine: MinskyMachine) -> list[str]:
    return list(machine.transition_names)


def encoding_template_for_chain(
    machine: MinskyMachine, names: Sequence[str]
) -> tuple[WordTemplate, dict[tuple[str, int], int]]:
    """Template of all well-formed encodings along a fixed transition chain.

    Free variables are the block lengths the shape language leaves open: the
    gray blocks (minus counters pinned to zero by zero tests) and the white
    carryover copies.
    """
    alphabet = build_alphabet(machine)
    seps = separator_sequence(machine, names)
    k = len(names)
    items: list[tuple[str, int | None]] = [(seps[0], None)]
    var_map: dict[tuple[str, int], int] = {}
    var = 0
    for i, name in enumerate(names, start=1):
        op = machine.transition(name).op
        items.append((name, None))
        if op != Operation.ZERO1:
            var_map[("hat_m", i)] = var
            items.append(("ah", var))
            var += 1
        if op != Operation.ZERO2:
            var_map[("hat_n", i)] = var
            items.append(("bh", var))
            var += 1
        items.append((seps[i], None))
        if i < k:
            var_map[("white_m", i)] = var
            items.append(("a", var))
            var += 1
            var_map[("white_n", i)] = var
            items.append(("b", var))
            var += 1
    return make_template(alphabet, items), var_map


def bounded_compositions(total: int, n_vars: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``n_vars`` with sum <= total."""
    memo: dict[tuple[int, int], np.ndarray] = {}

    def build(budget: int, size: int) -> np.ndarray:
        if size == 0:
            return np.zeros((1, 0), dtype=np.int16)
        key = (budget, size)
        hit = memo.get(key)
        if hit is not None:
            return hit
        parts = []
        for head in range(budget + 1):
            tail = build(budget - head, size - 1)
            block = np.empty((tail.shape[0], size), dtype=np.int16)
            block[:, 0] = head
            block[:, 1:] = tail
            parts.append(block)
        out = np.concatenate(parts, axis=0)
        memo[key] = out
        return out

    return build(total, n_vars)


def _vectorized_validity(
    machine: MinskyMachine,
    names: Sequence[str],
    blocks: np.ndarray,
    var_map: dict[tuple[str, int], int],
) -> np.ndarray:
    """Closed-form expected verdict per block vector: all counter updates
    feasible and exact, all carryover copies equal."""
    n_rows = blocks.shape[0]
    zeros = np.zeros(n_rows, dtype=np.int64)

    def col(key: tuple[str, int]) -> np.ndarray:
        if key in var_map:
            return blocks[:, var_map[key]].astype(np.int64)
        return zeros

    valid = np.ones(n_rows, dtype=bool)
    m_prev, n_prev = zeros, zeros
    k = len(names)
    for i, name in enumerate(names, start=1):
        op = machine.transition(name).op
        m_i = col(("hat_m", i))
        n_i = col(("hat_n", i))
        if op == Operation.INC1:
            feasible, em, en = np.ones(n_rows, dtype=bool), m_prev + 1, n_prev
        elif op == Operation.DEC1:
            feasible, em, en = m_prev >= 1, m_prev - 1, n_prev
        elif op == Operation.ZERO1:
            feasible, em, en = m_prev == 0, m_prev, n_prev
        elif op == Operation.INC2:
            feasible, em, en = np.ones(n_rows, dtype=bool), m_prev, n_prev + 1
        elif op == Operation.DEC2:
            feasible, em, en = n_prev >= 1, m_prev, n_prev - 1
        else:
            feasible, em, en = n_prev == 0, m_prev, n_prev
        valid &= feasible & (m_i == em) & (n_i == en)
        if i < k:
            valid &= (col(("white_m", i)) == m_i) & (col(("white_n", i)) == n_i)
        m_prev, n_prev = m_i, n_i
    return valid


def encoding_equivalence_suite(
    rng: Random,
    max_prefix: int = 24,
    decode_samples: int = 10_000,
    chunk: int = 250_000,
) -> SuiteResult:
    """Balance-formula verdict equals decodability, over the *whole* shape
    language up to the prefix bound, for a two- and a three-transition chain
    machine.

    The fast evaluator path runs the balance formula over every block-length
    assignment; the expected side is closed-form counter arithmetic. The real
    decoder is cross-checked on every valid word plus a random sample, and a
    reference-evaluator cross-check runs on a smaller sample.
    """
    result = SuiteResult("balance formula vs decoder (exhaustive)")
    for machine in (two_step_machine(), three_step_machine()):
        names = _chain_names(machine)
        template, var_map = encoding_template_for_chain(machine, names)
        fixed = int(np.sum(template.item_kind == 0))
        budget = max_prefix - fixed
        if budget < 0:
            raise ValueError("prefix bound is below the fixed token count")
        blocks = bounded_compositions(budget, template.n_vars)
        expected_count = comb(budget + template.n_vars, template.n_vars)
        result.record(
            blocks.shape[0] == expected_count,
            f"enumeration size {blocks.shape[0]} != {expected_count}",
        )
        compiled = compile_formula(balance_formula(machine), template.alphabet)
        verdicts = np.zeros(blocks.shape[0], dtype=bool)
        for start in range(0, blocks.shape[0], chunk):
            part = blocks[start : start + chunk]
            verdicts[start : start + chunk] = batch_models_template(
                compiled, template, part, budget
            )
        expected = _vectorized_validity(machine, names, blocks, var_map)
        disagreements = np.nonzero(verdicts != expected)[0]
        result.record(
            disagreements.size == 0,
            f"{disagreements.size} verdict mismatches on "
            f"{machine.transition_names} (first block row: "
            f"{blocks[disagreements[0]].tolist() if disagreements.size else []})",
        )
        result.checked += int(blocks.shape[0]) - 1

        # the valid words are exactly the canonical encoding of the one
        # successful computation these chains admit
        valid_rows = np.nonzero(expected)[0]
        comp = find_successful_computation(machine, 10, 4)
        result.record(comp is not None, "chain machine has no found computation")
        if comp is None:
            continue
        encoded = encode_computation(comp, machine)
        valid_words = {
            LassoWord(template.build_prefix(blocks[r]), (PAD,)) for r in valid_rows
        }
        result.record(
            valid_words == {encoded.word},
            f"valid-word set {sorted(map(str, valid_words))} is not the encoding",
        )

        # real decoder agrees on all valid words plus a random sample
        sample = set(map(int, valid_rows))
        sample.update(
            int(rng.randrange(blocks.shape[0])) for _ in range(decode_samples)
        )
        reference_every = max(1, len(sample) // 40)
        for seq, row in enumerate(sorted(sample)):
            word = LassoWord(template.build_prefix(blocks[row]), (PAD,))
            result.record(
                is_well_formed_encoding(word, machine),
                f"enumerated word not in the shape language: {word}",
            )
            decoded = decode_word(word, machine)
            decode_valid = isinstance(decoded, Computation)
            result.record(
                decode_valid == bool(expected[row]),
                lambda word=word: f"decoder disagrees with closed form on {word}",
            )
            result.record(
                decode_valid == bool(verdicts[row]),
                lambda word=word: f"decoder disagrees with evaluator on {word}",
            )
            if seq % reference_every == 0:
                result.record(
                    models(word, balance_formula(machine), template.alphabet)
                    == bool(verdicts[row]),
                    lambda word=word: f"compiled path diverges from reference on {word}",
                )
    return result


# --- mutation kill campaign ---


def mutation_kill_suite(
    pairs: Sequence[tuple[MinskyMachine, Computation]],
    max_machines: int = 4,
) -> SuiteResult:
    """Every shape-preserving single-token mutation touching a counter or
    carryover block is rejected by the balance formula, and the decoder
    blames the matching block."""
    result = SuiteResult("block mutations are killed and blamed")
    chosen = list(pairs[:max_machines])
    for machine, comp in chosen:
        alphabet = build_alphabet(machine)
        encoded = encode_computation(comp, machine)
        original = _scan_encoding(encoded.word, machine)
        compiled = compile_formula(balance_formula(machine), alphabet)
        mutants: list[tuple[LassoWord, str, int]] = []
        seen: set[tuple[str, ...]] = {encoded.word.prefix}
        for mutated, _, _ in prefix_mutations(encoded.word.prefix, alphabet.letters):
            if mutated in seen:
                continue
            seen.add(mutated)
            word = LassoWord(mutated, (PAD,))
            if not is_well_formed_encoding(word, machine):
                continue
            scan = _scan_encoding(word, machine)
            if scan.names != original.names:
                continue  # transition swap, not a block change
            hat_diffs = [
                i + 1
                for i, (x, y) in enumerate(zip(scan.hats, original.hats))
                if x != y
            ]
            white_diffs = [
                i
                for i, (x, y) in enumerate(zip(scan.whites, original.whites))
                if x != y
            ]
            if len(hat_diffs) + len(white_diffs) != 1:
                continue  # single-token edits touch exactly one block
            if hat_diffs:
                mutants.append((word, "update", hat_diffs[0]))
            else:
                mutants.append((word, "carryover", white_diffs[0]))
        result.record(
            any(kind == "update" for _, kind, _ in mutants)
            and any(kind == "carryover" for _, kind, _ in mutants),
            f"mutation generator lacks coverage on {machine.transition_names}",
        )
        verdicts = batch_models(compiled, [w for w, _, _ in mutants])
        for (word, kind, index), verdict in zip(mutants, verdicts):
            result.record(
                not bool(verdict),
                lambda word=word: f"balance formula accepts mutant {word}",
            )
            report = decode_word(word, machine)
            result.record(
                isinstance(report, Violation)
                and report.kind == kind
                and report.index == index,
                lambda word=word, report=report, kind=kind, index=index: (
                    f"decoder blames {report} instead of {kind}@{index} for {word}"
                ),
            )
    return result


# --- encoder/decoder round trip ---


def round_trip_suite(
    pairs: Sequence[tuple[MinskyMachine, Computation]]
) -> SuiteResult:
    """decode(encode(pi)) reproduces pi for found computations."""
    result = SuiteResult("encode/decode round trip")
    for machine, comp in pairs:
        encoded = encode_computation(comp, machine)
        result.record(
            is_well_formed_encoding(encoded.word, machine),
            f"encoding of {machine.transition_names} not well formed",
        )
        decoded = decode_word(encoded.word, machine)
        result.record(
            decoded == comp,
            lambda: f"round trip changed the computation: {decoded} != {comp}",
        )
    return result


def selftest_suites(seed: int, budget: str) -> list[SuiteResult]:
    """The property campaigns behind ``fltl selftest``."""
    rng = Random(seed)
    small = budget == "small"
    pairs = machines_with_computations(rng, 10 if small else 50)
    demo_comp = find_successful_computation(demo_machine(), 10, 4)
    assert demo_comp is not None
    pairs.insert(0, (demo_machine(), demo_comp))
    results = [
        balance_implication_suite(
            rng, exhaustive_len=4 if small else 6, n_random=1000 if small else 10_000
        ),
        mask_equivalence_suite(max_size=4 if small else 5),
        literal_equivalence_suite(max_total=2 if small else 3, depth=2),
        random_equivalence_suite(rng, 500 if small else 10_000),
        identity_suite(rng, 200 if small else 1000),
        shape_agreement_suite(
            pairs, rng, n_mutations=200 if small else 1000,
            n_random=200 if small else 1000,
        ),
        encoded_model_suite(pairs),
        round_trip_suite(pairs),
        mutation_kill_suite(pairs),
    ]
    if not small:
        results.append(encoding_equivalence_suite(rng))
    return results
