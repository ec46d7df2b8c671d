from fractions import Fraction
from random import Random

import pytest

from fltl.campaigns import DEFAULT_FREQS, random_core_formula, random_lasso
from fltl.evaluator import (
    AlphabetMismatchError,
    FreqWitnessQuery,
    brute_force_models,
    brute_force_row,
    freq_until_decide,
    freq_until_mask,
    frequency_before,
    models,
    sat_table,
    until_witness,
)
from fltl.formulas import (
    TRUE,
    Alphabet,
    Always,
    And,
    Atom,
    Eventually,
    FreqUntil,
    Next,
    Not,
    desugar,
)
from fltl.words import LassoWord, parse_word

ABC = Alphabet(("a", "b", "c"))
A, B = Atom("a"), Atom("b")
WORKED = parse_word("c b a a b b ; c")


def table_row(word, phi, alphabet=None):
    core = desugar(phi, alphabet or ABC)
    return sat_table(word, core, alphabet).row(core)


def test_sat_table_rows():
    assert table_row(WORKED, B) == (False, True, False, False, True, True, False)
    row = table_row(WORKED, FreqUntil(Fraction(1, 2), A, B))
    assert row[0] is True
    assert table_row(LassoWord((), ("a", "b")), Next(A)) == (False, True)


def test_models_worked_example():
    assert models(WORKED, FreqUntil(Fraction(1, 2), A, B))
    # witness scan: b holds at 1, 4, 5 with a-counts 0, 2, 2 against
    # thresholds 3/4, 3, 15/4 -- and never again in the loop
    assert not models(WORKED, FreqUntil(Fraction(3, 4), A, B))
    assert models(WORKED, TRUE)


def test_zero_frequency_collapses_to_eventually():
    rng = Random(0)
    for _ in range(300):
        w = random_lasso(rng, ABC.letters, 5, 4)
        left = random_core_formula(rng, ABC.letters, 2)
        right = random_core_formula(rng, ABC.letters, 2)
        assert models(w, FreqUntil(Fraction(0), left, right)) == models(
            w, Eventually(right)
        )


def test_freq_until_decide_examples():
    # psi never true
    q = FreqWitnessQuery(0, (True, False), (False, False), Fraction(1, 2), 0)
    assert not freq_until_decide(q)
    # immediate witness: the threshold at j=0 is zero
    q = FreqWitnessQuery(0, (False,), (True,), Fraction(1), 0)
    assert freq_until_decide(q)
    # (ab)^w with half frequency: j=1 gives count 1 >= 1/2
    q = FreqWitnessQuery(0, (True, False), (False, True), Fraction(1, 2), 0)
    assert freq_until_decide(q)
    # (abb)^w: loop ratio 1/3 < 1/2, only j=0 works
    word = LassoWord((), ("a", "b", "b"))
    arow = table_row(word, A)
    assert freq_until_decide(FreqWitnessQuery(0, arow, arow, Fraction(1, 2), 0))
    assert not freq_until_decide(
        FreqWitnessQuery(1, arow, arow, Fraction(1, 2), 0)
    )


def test_freq_until_decide_matches_batched_rows():
    rng = Random(9)
    for _ in range(2000):
        size = rng.randint(1, 9)
        ulen = rng.randrange(size)
        phi_mask = rng.getrandbits(size)
        psi_mask = rng.getrandbits(size)
        freq = rng.choice(DEFAULT_FREQS + (Fraction(1, 4), Fraction(2, 5)))
        mask = freq_until_mask(
            phi_mask, psi_mask, ulen, size - ulen, freq.numerator, freq.denominator
        )
        phi_row = tuple(bool(phi_mask >> i & 1) for i in range(size))
        psi_row = tuple(bool(psi_mask >> i & 1) for i in range(size))
        for start in range(size):
            got = freq_until_decide(
                FreqWitnessQuery(start, phi_row, psi_row, freq, ulen)
            )
            assert got == bool(mask >> start & 1)


def test_brute_force_agrees_on_worked_example():
    assert brute_force_models(WORKED, FreqUntil(Fraction(1, 2), A, B))
    assert brute_force_models(WORKED, Always(TRUE))


def test_brute_force_agrees_on_random_pairs():
    rng = Random(12)
    for _ in range(200):
        w = random_lasso(rng, ABC.letters, 8, 8)
        phi = random_core_formula(rng, ABC.letters, 5)
        assert models(w, phi) == brute_force_models(w, phi)


def test_brute_force_row_matches_table():
    rng = Random(13)
    for _ in range(100):
        w = random_lasso(rng, ABC.letters, 4, 4)
        phi = random_core_formula(rng, ABC.letters, 3)
        assert brute_force_row(w, phi) == table_row(w, phi)


def test_suffix_congruence():
    rng = Random(14)
    for _ in range(200):
        w = random_lasso(rng, ABC.letters, 5, 4)
        phi = random_core_formula(rng, ABC.letters, 3)
        for i in range(w.prefix_len, w.prefix_len + w.loop_len + 1):
            assert models(w.suffix(i), phi) == models(
                w.suffix(i + w.loop_len), phi
            )


def test_frequency_monotonicity():
    rng = Random(15)
    checked = 0
    for _ in range(400):
        w = random_lasso(rng, ABC.letters, 5, 4)
        left = random_core_formula(rng, ABC.letters, 2)
        right = random_core_formula(rng, ABC.letters, 2)
        lo, hi = sorted(rng.choice(DEFAULT_FREQS) for _ in range(2))
        if models(w, FreqUntil(hi, left, right)):
            assert models(w, FreqUntil(lo, left, right))
            checked += 1
    assert checked > 50


def test_negation_and_de_morgan_rows():
    rng = Random(16)
    for _ in range(100):
        w = random_lasso(rng, ABC.letters, 5, 4)
        phi = random_core_formula(rng, ABC.letters, 3)
        psi = random_core_formula(rng, ABC.letters, 3)
        assert models(w, Not(phi)) == (not models(w, phi))
        both = table_row(w, And(phi, psi))
        neither = table_row(w, Not(And(Not(phi), Not(psi))))
        prow, qrow = table_row(w, phi), table_row(w, psi)
        assert both == tuple(p and q for p, q in zip(prow, qrow))
        assert neither == tuple(p or q for p, q in zip(prow, qrow))


def test_table_covers_all_absolute_positions():
    w = parse_word("a b ; c a")
    core = desugar(FreqUntil(Fraction(1, 2), A, Atom("c")), ABC)
    table = sat_table(w, core, ABC)
    for i in range(30):
        suffix_verdict = models(w.suffix(i), core, ABC)
        assert table.holds(core, i) == suffix_verdict


def test_alphabet_mismatch_error():
    with pytest.raises(AlphabetMismatchError):
        sat_table(parse_word("a ; z"), A, ABC)
    with pytest.raises(AlphabetMismatchError):
        models(parse_word("a ; b"), Atom("z"), ABC)


def test_until_witness_worked_example():
    witness = until_witness(WORKED, FreqUntil(Fraction(1, 2), A, B), ABC)
    assert witness is not None
    assert witness.position == 4
    assert witness.count == 2
    assert witness.threshold == Fraction(2)
    assert witness.count >= witness.threshold
    assert until_witness(WORKED, FreqUntil(Fraction(3, 4), A, B), ABC) is None


def test_witness_is_minimal():
    rng = Random(17)
    for _ in range(200):
        w = random_lasso(rng, ABC.letters, 5, 4)
        phi = FreqUntil(
            rng.choice(DEFAULT_FREQS),
            random_core_formula(rng, ABC.letters, 2),
            random_core_formula(rng, ABC.letters, 2),
        )
        witness = until_witness(w, phi)
        assert (witness is not None) == models(w, phi)
        if witness is None:
            continue
        num, den = phi.freq.numerator, phi.freq.denominator
        core_l, core_r = desugar(phi.left, ABC), desugar(phi.right, ABC)
        table = sat_table(w, And(core_l, core_r))
        count = 0
        for j in range(witness.position):
            assert not (
                table.holds(core_r, j) and den * count >= num * j
            ), "an earlier witness exists"
            if table.holds(core_l, j):
                count += 1
        assert table.holds(core_r, witness.position)
        assert count == witness.count


def test_frequency_before_worked_example():
    assert frequency_before(WORKED, A, 1) == Fraction(0)
    assert frequency_before(WORKED, A, 5) == Fraction(2, 5)
    with pytest.raises(ValueError):
        frequency_before(WORKED, A, 0)


def test_verdicts_are_representation_invariant():
    # unrolling loops or rotating them into the prefix never changes the
    # denoted word, hence never the verdict
    rng = Random(18)
    for _ in range(200):
        w = random_lasso(rng, ABC.letters, 4, 3)
        variants = [
            LassoWord(w.prefix + w.loop, w.loop),
            LassoWord(w.prefix, w.loop + w.loop),
            LassoWord(w.prefix + w.loop[:1], w.loop[1:] + w.loop[:1]),
        ]
        phi = random_core_formula(rng, ABC.letters, 3)
        want = models(w, phi)
        for variant in variants:
            assert models(variant, phi) == want, (w, variant, phi)


def test_exact_ties_satisfy_the_threshold():
    # on (ab)^w against a U{1/2} a every candidate meets the bound exactly;
    # a strict reading would reject all of them
    word = LassoWord((), ("a", "b"))
    phi = FreqUntil(Fraction(1, 2), A, A)
    assert models(word, phi)
    assert brute_force_models(word, phi)
    witness = until_witness(word, phi)
    assert witness.position == 0 and witness.count == witness.threshold == 0


def test_periodic_tail_slope_cases():
    # nine debt positions, then a loop with a-density 2/3: the verdict is
    # decided by the drift of the surplus per loop
    word = LassoWord(("c",) * 9, ("a", "a", "b"))
    until = lambda freq: FreqUntil(freq, A, B)
    for freq, want in (
        (Fraction(3, 5), True),  # positive drift recovers the debt (at j=80)
        (Fraction(2, 3), False),  # zero drift never recovers it
        (Fraction(3, 4), False),  # negative drift only loses ground
        (Fraction(0), True),
    ):
        assert models(word, until(freq)) is want
        assert brute_force_models(word, until(freq)) is want
    witness = until_witness(word, until(Fraction(3, 5)))
    assert witness.position == 80  # far beyond one loop unrolling
    # without the debt, the zero-drift case succeeds immediately
    clean = LassoWord((), ("a", "a", "b"))
    assert models(clean, until(Fraction(2, 3)))
    assert brute_force_models(clean, until(Fraction(2, 3)))


def test_freq_witness_query_validation():
    row = (True, False)
    with pytest.raises(ValueError, match="start"):
        freq_until_decide(FreqWitnessQuery(2, row, row, Fraction(1, 2), 0))
    with pytest.raises(ValueError, match="equal length"):
        freq_until_decide(FreqWitnessQuery(0, row, (True,), Fraction(1, 2), 0))
