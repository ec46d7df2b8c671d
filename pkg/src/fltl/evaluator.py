"""Exact satisfaction checking over lasso words.

Satisfaction of a formula at position ``i`` depends only on the suffix
``w[i:]``, and suffixes repeat with period ``|v|`` from ``|u|`` on. A
:class:`SatTable` therefore stores one boolean per subformula per table
position ``0 <= i < N`` with ``N = |u| + |v|``; position ``i >= |u|`` covers
every absolute position congruent to it modulo ``|v|``.

All arithmetic is exact: counts are integers and frequency bounds are
compared via cross multiplication. No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .formulas import (
    Alphabet,
    AlphabetMismatchError,
    And,
    Atom,
    ClassicUntil,
    Formula,
    FreqUntil,
    Next,
    Not,
    TrueFormula,
    desugar,
    formula_letters,
    subformulas,
)
from .words import LassoWord


def _norm(i: int, ulen: int, vlen: int) -> int:
    """Table position covering absolute position ``i``."""
    if i < ulen:
        return i
    return ulen + (i - ulen) % vlen


def not_mask(mask: int, size: int) -> int:
    return ((1 << size) - 1) ^ mask


def next_mask(mask: int, size: int, prefix_len: int) -> int:
    """Row of ``X phi`` from the row of ``phi``.

    The successor of the last table position wraps to the loop start.
    """
    return (mask >> 1) | (((mask >> prefix_len) & 1) << (size - 1))


def freq_until_mask(
    phi_mask: int, psi_mask: int, prefix_len: int, loop_len: int, num: int, den: int
) -> int:
    """Row of ``phi U{num/den} psi`` from the child rows.

    From start ``i``, a witness ``i + j`` works iff
    ``den * count_phi[i, i+j) >= num * j``, i.e. ``h(i+j) >= h(i)`` for
    ``h(x) = den * count_phi[0, x) - num * x``. Candidates are the
    psi-positions. Per full loop, ``h`` at a fixed loop offset changes by the
    constant ``s = den*c - num*p`` (``c`` = phi count per loop, ``p`` = loop
    length), so:

    * ``s > 0`` and psi occurs in the loop: every start eventually finds a
      witness;
    * otherwise the first occurrence of each candidate offset dominates all
      its repetitions, and from any table start those first occurrences lie
      within the window of prefix plus two loop copies.
    """
    size = prefix_len + loop_len
    ext = prefix_len + 2 * loop_len
    counts = [0] * (ext + 1)
    acc = 0
    for x in range(ext):
        t = x if x < size else x - loop_len
        acc += (phi_mask >> t) & 1
        counts[x + 1] = acc
    loop_phi = counts[size] - counts[prefix_len]
    slope = den * loop_phi - num * loop_len
    psi_loop = (psi_mask >> prefix_len) != 0
    if slope > 0 and psi_loop:
        return (1 << size) - 1
    best: int | None = None
    suffmax: list[int | None] = [None] * ext
    for x in range(ext - 1, -1, -1):
        t = x if x < size else x - loop_len
        if (psi_mask >> t) & 1:
            hx = den * counts[x] - num * x
            if best is None or hx > best:
                best = hx
        suffmax[x] = best
    mask = 0
    for i in range(size):
        cap = suffmax[i]
        if cap is not None and cap >= den * counts[i] - num * i:
            mask |= 1 << i
    return mask


@dataclass
class SatTable:
    """Per-position satisfaction of every subformula of a core formula."""

    word: LassoWord
    formula: Formula
    order: tuple[Formula, ...]
    masks: dict[Formula, int]

    @property
    def prefix_len(self) -> int:
        return self.word.prefix_len

    @property
    def size(self) -> int:
        return self.word.prefix_len + self.word.loop_len

    def mask(self, phi: Formula) -> int:
        return self.masks[phi]

    def row(self, phi: Formula) -> tuple[bool, ...]:
        mask = self.masks[phi]
        return tuple(bool((mask >> i) & 1) for i in range(self.size))

    def holds(self, phi: Formula, i: int) -> bool:
        """Satisfaction at any absolute position ``i >= 0``."""
        pos = _norm(i, self.prefix_len, self.word.loop_len)
        return bool((self.masks[phi] >> pos) & 1)


def sat_table(
    word: LassoWord, phi: Formula, alphabet: Alphabet | None = None
) -> SatTable:
    """Bottom-up satisfaction table; ``phi`` must be core (desugar first)."""
    if alphabet is not None:
        missing = (word.letters() | formula_letters(phi)) - set(alphabet.letters)
        if missing:
            raise AlphabetMismatchError(
                f"letters not in alphabet: {sorted(missing)}"
            )
    ulen = word.prefix_len
    vlen = word.loop_len
    size = ulen + vlen
    table_letters = list(word.prefix) + list(word.loop)
    full = (1 << size) - 1

    atom_masks: dict[str, int] = {}
    for i, letter in enumerate(table_letters):
        atom_masks[letter] = atom_masks.get(letter, 0) | (1 << i)

    order = tuple(subformulas(phi))
    masks: dict[Formula, int] = {}
    for node in order:
        if isinstance(node, Atom):
            mask = atom_masks.get(node.name, 0)
        elif isinstance(node, TrueFormula):
            mask = full
        elif isinstance(node, Not):
            mask = full ^ masks[node.child]
        elif isinstance(node, And):
            mask = masks[node.left] & masks[node.right]
        elif isinstance(node, Next):
            mask = next_mask(masks[node.child], size, ulen)
        elif isinstance(node, FreqUntil):
            mask = freq_until_mask(
                masks[node.left],
                masks[node.right],
                ulen,
                vlen,
                node.freq.numerator,
                node.freq.denominator,
            )
        else:
            raise ValueError(f"formula is not core, desugar first: {node!r}")
        masks[node] = mask
    return SatTable(word, phi, order, masks)


def _implicit_alphabet(word: LassoWord, phi: Formula) -> Alphabet:
    return Alphabet(tuple(sorted(word.letters() | formula_letters(phi))))


def _check_word_letters(word: LassoWord, alphabet: Alphabet | None) -> None:
    if alphabet is None:
        return
    missing = word.letters() - set(alphabet.letters)
    if missing:
        raise AlphabetMismatchError(f"letters not in alphabet: {sorted(missing)}")


def models(word: LassoWord, phi: Formula, alphabet: Alphabet | None = None) -> bool:
    """Whether the lasso word satisfies the formula (sugar allowed)."""
    alpha = alphabet if alphabet is not None else _implicit_alphabet(word, phi)
    core = desugar(phi, alpha)
    table = sat_table(word, core, alphabet)
    return table.holds(core, 0)


@dataclass(frozen=True)
class FreqWitnessQuery:
    """One frequency-until decision: does some witness ``j`` exist from
    ``start`` such that psi holds at ``start + j`` and phi held at least
    ``freq * j`` times in between?"""

    start: int
    phi_row: tuple[bool, ...]
    psi_row: tuple[bool, ...]
    freq: Fraction
    prefix_len: int


def freq_until_decide(query: FreqWitnessQuery) -> bool:
    """Single-start decision procedure.

    Scans ``j = 0 .. T`` exhaustively, where ``T`` spans the transient from
    ``start`` into the loop plus one full loop. For the periodic tail, the
    surplus at a fixed loop offset is affine in the number of extra loops
    with slope ``s = den*c - num*p``; a positive slope always recovers, a
    nonpositive slope never improves on the first occurrence.
    """
    size = len(query.phi_row)
    ulen = query.prefix_len
    vlen = size - ulen
    if not 0 <= query.start < size:
        raise ValueError("start must be a table position")
    if len(query.psi_row) != size:
        raise ValueError("phi and psi rows must have equal length")
    num = query.freq.numerator
    den = query.freq.denominator
    transient = ulen - query.start if query.start < ulen else 0
    horizon = transient + vlen

    count = 0
    for j in range(horizon + 1):
        pos = _norm(query.start + j, ulen, vlen)
        if query.psi_row[pos] and den * count >= num * j:
            return True
        if query.phi_row[pos]:
            count += 1

    loop_phi = sum(1 for i in range(ulen, size) if query.phi_row[i])
    slope = den * loop_phi - num * vlen
    for j in range(horizon + 1, horizon + vlen + 1):
        pos = _norm(query.start + j, ulen, vlen)
        if query.psi_row[pos]:
            surplus = den * count - num * j
            if slope > 0 or surplus >= 0:
                return True
        if query.phi_row[pos]:
            count += 1
    return False


def _witness_bound(start: int, ulen: int, vlen: int, den: int) -> int:
    """Sound completeness bound for witness search from ``start``.

    With ``T`` = transient plus one loop: any first candidate occurs by
    ``T``; when the tail slope is positive it is at least ``1/den`` per loop,
    so a deficit of at most ``T`` is recovered within ``den*T`` loops.
    """
    transient = ulen - start if start < ulen else 0
    horizon = transient + vlen
    return horizon + vlen * (den * horizon + 1)


def _brute_sat(word: LassoWord):
    """Recursive evaluator used by the brute-force oracle.

    Returns a ``sat(core_node, position)`` callable with a memo shared
    across positions (and formulas) of the same word.
    """
    ulen = word.prefix_len
    vlen = word.loop_len
    memo: dict[tuple[int, int], bool] = {}

    def sat(node: Formula, i: int) -> bool:
        key = (id(node), _norm(i, ulen, vlen))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Atom):
            out = word.letter_at(i) == node.name
        elif isinstance(node, TrueFormula):
            out = True
        elif isinstance(node, Not):
            out = not sat(node.child, i)
        elif isinstance(node, And):
            out = sat(node.left, i) and sat(node.right, i)
        elif isinstance(node, Next):
            out = sat(node.child, i + 1)
        elif isinstance(node, FreqUntil):
            num = node.freq.numerator
            den = node.freq.denominator
            bound = _witness_bound(_norm(i, ulen, vlen), ulen, vlen, den)
            count = 0
            out = False
            for j in range(bound + 1):
                if sat(node.right, i + j) and den * count >= num * j:
                    out = True
                    break
                if sat(node.left, i + j):
                    count += 1
        else:
            raise ValueError(f"formula is not core: {node!r}")
        memo[key] = out
        return out

    return sat


def brute_force_models(
    word: LassoWord, phi: Formula, alphabet: Alphabet | None = None
) -> bool:
    """Independent oracle: plain recursive evaluation.

    Each frequency until searches witnesses ``j = 0 .. B`` directly, with
    ``B`` the sound completeness bound above. Results are memoized per
    (subformula, table position); intended for desk-scale inputs.
    """
    _check_word_letters(word, alphabet)
    alpha = alphabet if alphabet is not None else _implicit_alphabet(word, phi)
    core = desugar(phi, alpha)
    return _brute_sat(word)(core, 0)


def brute_force_row(
    word: LassoWord, phi: Formula, alphabet: Alphabet | None = None
) -> tuple[bool, ...]:
    """Brute-force verdicts at every table position (same oracle as
    :func:`brute_force_models`, one shared memo)."""
    _check_word_letters(word, alphabet)
    alpha = alphabet if alphabet is not None else _implicit_alphabet(word, phi)
    core = desugar(phi, alpha)
    sat = _brute_sat(word)
    size = word.prefix_len + word.loop_len
    return tuple(sat(core, i) for i in range(size))


@dataclass(frozen=True)
class UntilWitness:
    """Minimal witness of a frequency until at position 0."""

    position: int
    count: int
    threshold: Fraction


def until_witness(
    word: LassoWord, phi: Formula, alphabet: Alphabet | None = None
) -> UntilWitness | None:
    """Minimal witness for a top-level (frequency or classic) until.

    Returns ``None`` when the word does not satisfy the formula.
    """
    if isinstance(phi, ClassicUntil):
        phi = FreqUntil(Fraction(1), phi.left, phi.right)
    if not isinstance(phi, FreqUntil):
        raise ValueError("witness extraction needs a top-level until operator")
    alpha = alphabet if alphabet is not None else _implicit_alphabet(word, phi)
    left = desugar(phi.left, alpha)
    right = desugar(phi.right, alpha)
    table = sat_table(word, And(left, right), alphabet)
    num = phi.freq.numerator
    den = phi.freq.denominator
    bound = _witness_bound(0, word.prefix_len, word.loop_len, den)
    count = 0
    for j in range(bound + 1):
        if table.holds(right, j) and den * count >= num * j:
            return UntilWitness(j, count, phi.freq * j)
        if table.holds(left, j):
            count += 1
    return None


def frequency_before(
    word: LassoWord, phi: Formula, j: int, alphabet: Alphabet | None = None
) -> Fraction:
    """Exact fraction of positions before ``j`` where ``phi`` holds."""
    if j <= 0:
        raise ValueError("position must be positive")
    alpha = alphabet if alphabet is not None else _implicit_alphabet(word, phi)
    core = desugar(phi, alpha)
    table = sat_table(word, core, alphabet)
    count = sum(1 for i in range(j) if table.holds(core, i))
    return Fraction(count, j)
