"""Compiled fast path of the evaluator for bulk campaigns.

A core formula is flattened into a postorder instruction program over letter
ids; a numba kernel then fills the satisfaction table per word. The kernel
implements exactly the same row semantics as :mod:`fltl.evaluator` (integer
arithmetic only) and the test suite pins the two paths against each other.

Two entry points: :func:`batch_models` evaluates one program over a list of
lasso words, :func:`batch_models_template` fuses word construction from a
block-length template with evaluation, for enumerations too large to
materialize as words.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .formulas import (
    Alphabet,
    And,
    Atom,
    Formula,
    FreqUntil,
    Next,
    Not,
    TrueFormula,
    desugar,
    subformulas,
)
from .words import LassoWord

OP_ATOM = 0
OP_TRUE = 1
OP_NOT = 2
OP_AND = 3
OP_NEXT = 4
OP_FU = 5


@dataclass(frozen=True)
class CompiledFormula:
    alphabet: Alphabet
    opcode: np.ndarray
    arg1: np.ndarray
    arg2: np.ndarray
    num: np.ndarray
    den: np.ndarray

    @property
    def size(self) -> int:
        return int(self.opcode.shape[0])


def compile_formula(phi: Formula, alphabet: Alphabet) -> CompiledFormula:
    """Flatten a formula (sugar allowed) into an instruction program."""
    core = desugar(phi, alphabet)
    order = subformulas(core)
    index = {node: k for k, node in enumerate(order)}
    n = len(order)
    opcode = np.zeros(n, dtype=np.int64)
    arg1 = np.zeros(n, dtype=np.int64)
    arg2 = np.zeros(n, dtype=np.int64)
    num = np.zeros(n, dtype=np.int64)
    den = np.ones(n, dtype=np.int64)
    for k, node in enumerate(order):
        if isinstance(node, Atom):
            opcode[k] = OP_ATOM
            arg1[k] = alphabet.index(node.name)
        elif isinstance(node, TrueFormula):
            opcode[k] = OP_TRUE
        elif isinstance(node, Not):
            opcode[k] = OP_NOT
            arg1[k] = index[node.child]
        elif isinstance(node, And):
            opcode[k] = OP_AND
            arg1[k] = index[node.left]
            arg2[k] = index[node.right]
        elif isinstance(node, Next):
            opcode[k] = OP_NEXT
            arg1[k] = index[node.child]
        elif isinstance(node, FreqUntil):
            opcode[k] = OP_FU
            arg1[k] = index[node.left]
            arg2[k] = index[node.right]
            num[k] = node.freq.numerator
            den[k] = node.freq.denominator
        else:
            raise ValueError(f"unexpected node after desugaring: {node!r}")
    return CompiledFormula(alphabet, opcode, arg1, arg2, num, den)


def encode_words(
    words: Sequence[LassoWord], alphabet: Alphabet
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Letter-id matrix (padded), table sizes, and prefix lengths."""
    ids = {letter: i for i, letter in enumerate(alphabet.letters)}
    sizes = np.array([w.prefix_len + w.loop_len for w in words], dtype=np.int64)
    ulens = np.array([w.prefix_len for w in words], dtype=np.int64)
    matrix = np.zeros((len(words), int(sizes.max())), dtype=np.int64)
    for r, w in enumerate(words):
        for i, letter in enumerate((*w.prefix, *w.loop)):
            matrix[r, i] = ids[letter]
    return matrix, sizes, ulens


@njit(cache=True)
def _fu_row(rows, dst, left, right, ulen, vlen, num, den, counts, suffmax):
    size = ulen + vlen
    ext = ulen + 2 * vlen
    acc = 0
    counts[0] = 0
    for x in range(ext):
        t = x if x < size else x - vlen
        acc += rows[left, t]
        counts[x + 1] = acc
    loop_phi = counts[size] - counts[ulen]
    slope = den * loop_phi - num * vlen
    psi_loop = False
    for i in range(ulen, size):
        if rows[right, i] != 0:
            psi_loop = True
            break
    if slope > 0 and psi_loop:
        for i in range(size):
            rows[dst, i] = 1
        return
    sentinel = np.int64(-(1 << 60))
    best = sentinel
    for x in range(ext - 1, -1, -1):
        t = x if x < size else x - vlen
        if rows[right, t] != 0:
            hx = den * counts[x] - num * x
            if hx > best:
                best = hx
        suffmax[x] = best
    for i in range(size):
        if suffmax[i] != sentinel and suffmax[i] >= den * counts[i] - num * i:
            rows[dst, i] = 1
        else:
            rows[dst, i] = 0


@njit(cache=True)
def _eval_table(opcode, arg1, arg2, num, den, table, size, ulen, rows, counts, suffmax):
    vlen = size - ulen
    n_instr = opcode.shape[0]
    for k in range(n_instr):
        op = opcode[k]
        if op == OP_ATOM:
            want = arg1[k]
            for i in range(size):
                rows[k, i] = 1 if table[i] == want else 0
        elif op == OP_TRUE:
            for i in range(size):
                rows[k, i] = 1
        elif op == OP_NOT:
            child = arg1[k]
            for i in range(size):
                rows[k, i] = 1 - rows[child, i]
        elif op == OP_AND:
            lk = arg1[k]
            rk = arg2[k]
            for i in range(size):
                rows[k, i] = rows[lk, i] & rows[rk, i]
        elif op == OP_NEXT:
            child = arg1[k]
            for i in range(size - 1):
                rows[k, i] = rows[child, i + 1]
            rows[k, size - 1] = rows[child, ulen]
        else:
            _fu_row(
                rows, k, arg1[k], arg2[k], ulen, vlen, num[k], den[k], counts, suffmax
            )
    return rows[n_instr - 1, 0]


@njit(cache=True)
def _eval_words_kernel(opcode, arg1, arg2, num, den, words, sizes, ulens, out):
    max_size = words.shape[1]
    n_instr = opcode.shape[0]
    rows = np.empty((n_instr, max_size), dtype=np.int8)
    counts = np.empty(2 * max_size + 1, dtype=np.int64)
    suffmax = np.empty(2 * max_size, dtype=np.int64)
    for w in range(words.shape[0]):
        out[w] = _eval_table(
            opcode,
            arg1,
            arg2,
            num,
            den,
            words[w],
            sizes[w],
            ulens[w],
            rows,
            counts,
            suffmax,
        )


@njit(cache=True)
def _eval_template_kernel(
    opcode,
    arg1,
    arg2,
    num,
    den,
    item_kind,
    item_var,
    item_letter,
    blocks,
    pad_letter,
    max_size,
    out,
):
    n_instr = opcode.shape[0]
    rows = np.empty((n_instr, max_size), dtype=np.int8)
    counts = np.empty(2 * max_size + 1, dtype=np.int64)
    suffmax = np.empty(2 * max_size, dtype=np.int64)
    table = np.empty(max_size, dtype=np.int64)
    n_items = item_kind.shape[0]
    for w in range(blocks.shape[0]):
        pos = 0
        for it in range(n_items):
            if item_kind[it] == 0:
                table[pos] = item_letter[it]
                pos += 1
            else:
                reps = blocks[w, item_var[it]]
                for _ in range(reps):
                    table[pos] = item_letter[it]
                    pos += 1
        table[pos] = pad_letter
        size = pos + 1
        out[w] = _eval_table(
            opcode, arg1, arg2, num, den, table, size, pos, rows, counts, suffmax
        )


def batch_models(compiled: CompiledFormula, words: Sequence[LassoWord]) -> np.ndarray:
    """Verdict at position 0 for each word; equals ``models`` pointwise."""
    matrix, sizes, ulens = encode_words(words, compiled.alphabet)
    out = np.zeros(len(words), dtype=np.int8)
    _eval_words_kernel(
        compiled.opcode,
        compiled.arg1,
        compiled.arg2,
        compiled.num,
        compiled.den,
        matrix,
        sizes,
        ulens,
        out,
    )
    return out.astype(bool)


@dataclass(frozen=True)
class WordTemplate:
    """Word builder: fixed letters interleaved with variable-length blocks.

    ``item_kind`` 0 emits one fixed letter, 1 emits ``blocks[var]`` copies of
    a letter; the word always ends with a single-``#`` loop.
    """

    alphabet: Alphabet
    item_kind: np.ndarray
    item_var: np.ndarray
    item_letter: np.ndarray
    n_vars: int

    def build_prefix(self, blocks: Sequence[int]) -> tuple[str, ...]:
        letters = self.alphabet.letters
        tokens: list[str] = []
        for kind, var, letter in zip(self.item_kind, self.item_var, self.item_letter):
            if kind == 0:
                tokens.append(letters[letter])
            else:
                tokens.extend([letters[letter]] * int(blocks[var]))
        return tuple(tokens)


def make_template(
    alphabet: Alphabet, items: Sequence[tuple[str, int | None]]
) -> WordTemplate:
    """Items are ``(letter, None)`` for fixed letters or ``(letter, var)``
    for a block of ``var``-indexed repeats."""
    kinds = []
    variables = []
    letters = []
    n_vars = 0
    for letter, var in items:
        letters.append(alphabet.index(letter))
        if var is None:
            kinds.append(0)
            variables.append(0)
        else:
            kinds.append(1)
            variables.append(var)
            n_vars = max(n_vars, var + 1)
    return WordTemplate(
        alphabet,
        np.array(kinds, dtype=np.int64),
        np.array(variables, dtype=np.int64),
        np.array(letters, dtype=np.int64),
        n_vars,
    )


def batch_models_template(
    compiled: CompiledFormula,
    template: WordTemplate,
    blocks: np.ndarray,
    max_block_total: int,
) -> np.ndarray:
    """Evaluate the program over every block assignment (one word each)."""
    if compiled.alphabet != template.alphabet:
        raise ValueError("program and template use different alphabets")
    fixed = int(np.sum(template.item_kind == 0))
    max_size = fixed + max_block_total + 1
    out = np.zeros(blocks.shape[0], dtype=np.int8)
    _eval_template_kernel(
        compiled.opcode,
        compiled.arg1,
        compiled.arg2,
        compiled.num,
        compiled.den,
        template.item_kind,
        template.item_var,
        template.item_letter,
        np.ascontiguousarray(blocks, dtype=np.int64),
        template.alphabet.index("#"),
        max_size,
        out,
    )
    return out.astype(bool)
