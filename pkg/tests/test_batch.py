"""The compiled fast path must agree with the reference evaluator exactly."""

from random import Random

import numpy as np
import pytest

from fltl.batch import (
    batch_models,
    batch_models_template,
    compile_formula,
    make_template,
)
from fltl.campaigns import (
    demo_machine,
    encoding_template_for_chain,
    random_core_formula,
    random_lasso,
    three_step_machine,
)
from fltl.evaluator import models
from fltl.formulas import Alphabet
from fltl.minsky import find_successful_computation
from fltl.reduction import (
    balance_formula,
    build_alphabet,
    encode_computation,
    machine_to_formula,
)
from fltl.words import LassoWord

ABC = Alphabet(("a", "b", "c"))


def test_compiled_matches_reference_on_random_instances():
    rng = Random(41)
    for _ in range(300):
        word = random_lasso(rng, ABC.letters, 6, 5)
        phi = random_core_formula(rng, ABC.letters, 4)
        compiled = compile_formula(phi, ABC)
        assert bool(batch_models(compiled, [word])[0]) == models(word, phi, ABC)


def test_compiled_handles_empty_prefix_and_unit_loop():
    rng = Random(42)
    compiled = None
    for word in (
        LassoWord((), ("a",)),
        LassoWord((), ("a", "b", "c")),
        LassoWord(("a",), ("b",)),
    ):
        for _ in range(50):
            phi = random_core_formula(rng, ABC.letters, 4)
            compiled = compile_formula(phi, ABC)
            assert bool(batch_models(compiled, [word])[0]) == models(word, phi, ABC)


def test_batch_evaluates_many_words_at_once():
    rng = Random(43)
    machine = demo_machine()
    sigma = build_alphabet(machine)
    formula = machine_to_formula(machine)
    compiled = compile_formula(formula, sigma)
    words = [random_lasso(rng, sigma.letters, 20, 3) for _ in range(40)]
    comp = find_successful_computation(machine, 10, 4)
    words.append(encode_computation(comp, machine).word)
    verdicts = batch_models(compiled, words)
    assert verdicts[-1]
    for word, got in zip(words, verdicts):
        assert bool(got) == models(word, formula, sigma)


def test_template_prefix_construction_matches_manual():
    alphabet = Alphabet(("x", "y", "#"))
    template = make_template(
        alphabet, [("x", None), ("y", 0), ("x", 1), ("y", None)]
    )
    assert template.n_vars == 2
    assert template.build_prefix([2, 0]) == ("x", "y", "y", "y")
    assert template.build_prefix([0, 3]) == ("x", "x", "x", "x", "y")


def test_template_kernel_matches_word_path():
    machine = three_step_machine()
    names = list(machine.transition_names)
    template, _ = encoding_template_for_chain(machine, names)
    compiled = compile_formula(balance_formula(machine), template.alphabet)
    rng = Random(44)
    blocks = np.array(
        [[rng.randint(0, 2) for _ in range(template.n_vars)] for _ in range(60)],
        dtype=np.int16,
    )
    direct = batch_models_template(compiled, template, blocks, int(blocks.sum(1).max()))
    words = [LassoWord(template.build_prefix(row), ("#",)) for row in blocks]
    via_words = batch_models(compiled, words)
    assert np.array_equal(direct, via_words)
    for word, got in zip(words[:10], direct[:10]):
        assert bool(got) == models(word, balance_formula(machine), template.alphabet)


def test_template_alphabet_mismatch_is_rejected():
    machine = three_step_machine()
    template, _ = encoding_template_for_chain(machine, list(machine.transition_names))
    other = compile_formula(random_core_formula(Random(0), ABC.letters, 2), ABC)
    with pytest.raises(ValueError, match="alphabet"):
        batch_models_template(other, template, np.zeros((1, template.n_vars)), 4)
