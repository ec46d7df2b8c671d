"""Acceptance suite: one test per exit criterion, exact arithmetic throughout.

Run with ``pytest -s tests/test_acceptance.py`` to see the one-line verdict
per criterion. Expected total runtime is a few minutes on a laptop; the two
heavyweight criteria (the exhaustive shape-language sweep and the exhaustive
engine product) run on the compiled evaluator path, which the suite itself
pins against the pure-Python reference.
"""

from contextlib import contextmanager
from fractions import Fraction
from random import Random

import pytest

from fltl.campaigns import (
    balance_implication_suite,
    demo_machine,
    encoded_model_suite,
    encoding_equivalence_suite,
    identity_suite,
    literal_equivalence_suite,
    machines_with_computations,
    mask_equivalence_suite,
    mutation_kill_suite,
    random_equivalence_suite,
    shape_agreement_suite,
)
from fltl.evaluator import frequency_before, models, until_witness
from fltl.formulas import Atom, FreqUntil
from fltl.minsky import find_successful_computation
from fltl.reduction import encode_computation
from fltl.words import parse_word


@contextmanager
def criterion(num, label):
    try:
        yield
    except BaseException:
        print(f"[criterion {num}] {label}: FAIL")
        raise
    print(f"[criterion {num}] {label}: PASS")


@pytest.fixture(scope="module")
def pairs():
    """The demo machine plus 50 random validated machines whose bounded
    search (14 steps, counters <= 5) finds a successful computation."""
    rng = Random(2024)
    found = machines_with_computations(
        rng, 50, max_transitions=6, max_steps=14, max_counter=5
    )
    demo = demo_machine()
    comp = find_successful_computation(demo, 10, 4)
    assert comp is not None
    return [(demo, comp)] + found


def _assert_suite(result):
    assert result.ok, result.summary() + "".join(
        f"\n  {f}" for f in result.failures
    )
    return result


def test_criterion_1_worked_example():
    with criterion(1, "half-frequency until on the worked lasso"):
        word = parse_word("c b a a b b ; c")
        phi = FreqUntil(Fraction(1, 2), Atom("a"), Atom("b"))
        assert models(word, phi) is True
        witness = until_witness(word, phi)
        assert witness is not None
        assert witness.position == 4
        assert witness.count == 2
        assert witness.threshold == Fraction(2)
        assert witness.count >= witness.threshold
        assert frequency_before(word, Atom("a"), 1) == Fraction(0)
        assert frequency_before(word, Atom("a"), 5) == Fraction(2, 5)


def test_criterion_2_encoding_layout():
    with criterion(2, "canonical encoding token layout"):
        machine = demo_machine()
        comp = find_successful_computation(machine, 10, 4)
        encoded = encode_computation(comp, machine)
        expected = (
            "$0 t1 ah $1 a t2 ah ah $0 a a t3 ah ah $z a a t4 ah ah bh "
            "$1 a a b t5 ah bh $0 a b t6 ah bh bh $1"
        ).split()
        assert list(encoded.word.prefix) == expected
        assert len(encoded.word.prefix) == 36
        assert encoded.word.loop == ("#",)
        separators = [
            i for i, tok in enumerate(encoded.word.prefix) if tok.startswith("$")
        ]
        transitions = [
            i
            for i, tok in enumerate(encoded.word.prefix)
            if tok in machine.transition_names
        ]
        assert separators == [0, 3, 8, 14, 21, 28, 35]
        assert transitions == [1, 5, 11, 17, 25, 31]


def test_criterion_3_encodings_are_models(pairs):
    with criterion(3, "encodings satisfy the reduction formula (51 machines)"):
        assert len(pairs) >= 51
        _assert_suite(encoded_model_suite(pairs))


def test_criterion_4_balance_implications():
    with criterion(4, "letter-balance implications (exhaustive <=6 + 10^4 random)"):
        result = balance_implication_suite(
            Random(4), exhaustive_len=6, n_random=10_000, max_random_len=40
        )
        _assert_suite(result)


def test_criterion_5_shape_oracle_agreement(pairs):
    with criterion(5, "shape formula vs membership checker (zero disagreements)"):
        result = shape_agreement_suite(
            pairs, Random(5), n_mutations=1000, n_random=1000, max_random_prefix=20
        )
        _assert_suite(result)
        # at least one encoding, 1000 mutations and 1000 random words compared
        assert result.checked >= 51 + 1000 + 1000


def test_criterion_6_balance_vs_decoder_exhaustive():
    with criterion(6, "balance formula vs decoder over the whole shape language"):
        result = encoding_equivalence_suite(
            Random(6), max_prefix=24, decode_samples=10_000
        )
        _assert_suite(result)
        # both enumerations ran in full
        assert result.checked >= 177_100 + 3_124_550


def test_criterion_7_mutation_kill(pairs):
    with criterion(7, "shape-preserving block mutations killed and blamed"):
        result = mutation_kill_suite(pairs, max_machines=6)
        _assert_suite(result)


def test_criterion_8_engine_equivalence():
    with criterion(8, "evaluator vs brute force (exhaustive product + 10^4 random)"):
        _assert_suite(mask_equivalence_suite(max_size=5))
        _assert_suite(literal_equivalence_suite(max_total=3, depth=2))
        _assert_suite(random_equivalence_suite(Random(8), 10_000))


def test_criterion_9_until_identities():
    with criterion(9, "frequency-until identities (10^3 randomized each)"):
        result = identity_suite(Random(9), 1000)
        _assert_suite(result)
        assert result.checked >= 4000
