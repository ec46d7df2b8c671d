from fractions import Fraction
from random import Random

import pytest

from fltl.campaigns import random_lasso
from fltl.evaluator import models
from fltl.formulas import (
    FALSE,
    TRUE,
    Alphabet,
    Always,
    And,
    Atom,
    ClassicUntil,
    Eventually,
    FreqUntil,
    Implies,
    LetterSet,
    Next,
    Not,
    Or,
    desugar,
    is_core,
    letter_set,
    subformulas,
)

AB = Alphabet(("a", "b"))
A, B = Atom("a"), Atom("b")


def test_alphabet_invariants():
    with pytest.raises(ValueError):
        Alphabet(())
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    assert "a" in AB and "z" not in AB


def test_frequency_range_is_enforced():
    FreqUntil(Fraction(1), A, B)
    FreqUntil(Fraction(0), A, B)
    with pytest.raises(ValueError):
        FreqUntil(Fraction(3, 2), A, B)
    with pytest.raises(ValueError):
        FreqUntil(Fraction(-1, 2), A, B)


def test_frequencies_are_normalized():
    assert FreqUntil(Fraction(2, 4), A, B) == FreqUntil(Fraction(1, 2), A, B)


def test_letter_set_must_be_nonempty():
    with pytest.raises(ValueError):
        LetterSet(frozenset())
    assert letter_set([]) == FALSE
    assert letter_set(["a"]) == A
    assert letter_set(["a", "b"]) == LetterSet(frozenset({"a", "b"}))


def test_desugar_classic_until():
    assert desugar(ClassicUntil(A, B), AB) == FreqUntil(Fraction(1), A, B)


def test_desugar_letter_set_is_the_disjunction_expansion():
    got = desugar(LetterSet(frozenset({"a", "b"})), AB)
    assert got == Not(And(Not(A), Not(B)))


def test_desugar_eventually_uses_primitive_true_by_default():
    got = desugar(Eventually(B), AB)
    assert got == FreqUntil(Fraction(1), TRUE, B)
    expanded = desugar(Eventually(B), AB, expand_true=True)
    top = Not(And(Not(A), Not(B)))
    assert expanded == FreqUntil(Fraction(1), top, B)


def test_desugar_output_is_core():
    rng = Random(3)
    for _ in range(200):
        phi = _random_sugared(rng, 4)
        core = desugar(phi, AB)
        assert is_core(core)
        fully = desugar(phi, AB, expand_true=True)
        assert is_core(fully, allow_true=False)


def test_desugar_preserves_semantics():
    rng = Random(4)
    for _ in range(300):
        phi = _random_sugared(rng, 4)
        word = random_lasso(rng, AB.letters, 5, 4)
        assert models(word, phi, AB) == models(word, desugar(phi, AB), AB)
        assert models(word, phi, AB) == models(
            word, desugar(phi, AB, expand_true=True), AB
        )


def test_subformulas_examples():
    assert subformulas(A) == [A]
    fu = FreqUntil(Fraction(1, 2), A, B)
    assert subformulas(fu) == [A, B, fu]
    phi = And(A, Not(A))
    assert subformulas(phi) == [A, Not(A), phi]


def test_subformulas_children_precede_parents():
    rng = Random(5)
    for _ in range(100):
        phi = _random_sugared(rng, 5)
        order = subformulas(phi)
        index = {node: i for i, node in enumerate(order)}
        assert len(index) == len(order)  # structurally distinct entries
        for node in order:
            from fltl.formulas import children

            for child in children(node):
                assert index[child] < index[node]
        assert order[-1] == phi


def _random_sugared(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(
            [A, B, TRUE, FALSE, LetterSet(frozenset({"a", "b"})), LetterSet(frozenset({"b"}))]
        )
    kind = rng.choice(["not", "and", "or", "implies", "next", "ev", "alw", "cu", "fu"])
    sub = lambda: _random_sugared(rng, depth - 1)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    if kind == "implies":
        return Implies(sub(), sub())
    if kind == "next":
        return Next(sub())
    if kind == "ev":
        return Eventually(sub())
    if kind == "alw":
        return Always(sub())
    if kind == "cu":
        return ClassicUntil(sub(), sub())
    return FreqUntil(Fraction(rng.randint(0, 3), 3), sub(), sub())
