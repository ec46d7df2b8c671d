"""Finite words and ultimately periodic (lasso) words.

A lasso word ``u ; v`` denotes the infinite word ``u v v v ...``. The loop
``v`` must be nonempty. Letters are plain strings; a finite word is a tuple
of letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence

FiniteWord = tuple[str, ...]


class WordFormatError(ValueError):
    """Raised when a word literal does not match the ``tok .. ; tok ..`` format."""


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic word given by a finite prefix and a nonempty loop."""

    prefix: FiniteWord
    loop: FiniteWord

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")

    @property
    def prefix_len(self) -> int:
        return len(self.prefix)

    @property
    def loop_len(self) -> int:
        return len(self.loop)

    def letter_at(self, i: int) -> str:
        """Letter at position ``i`` of the denoted infinite word."""
        if i < 0:
            raise IndexError("position must be nonnegative")
        if i < len(self.prefix):
            return self.prefix[i]
        return self.loop[(i - len(self.prefix)) % len(self.loop)]

    def suffix(self, i: int) -> "LassoWord":
        """Lasso representation of the word starting at position ``i``."""
        if i < 0:
            raise IndexError("position must be nonnegative")
        if i <= len(self.prefix):
            return LassoWord(self.prefix[i:], self.loop)
        d = (i - len(self.prefix)) % len(self.loop)
        return LassoWord((), self.loop[d:] + self.loop[:d])

    def unroll(self, n: int) -> FiniteWord:
        """First ``n`` letters as a finite word."""
        return tuple(self.letter_at(i) for i in range(n))

    def letters(self) -> frozenset[str]:
        return frozenset(self.prefix) | frozenset(self.loop)

    def __str__(self) -> str:
        return format_word(self)


def occ(word: Sequence[str], letters: Iterable[str]) -> int:
    """Number of positions of ``word`` holding a letter from ``letters``."""
    group = frozenset(letters)
    return sum(1 for a in word if a in group)


def same_denotation(w1: LassoWord, w2: LassoWord) -> bool:
    """Whether two lassos denote the same infinite word.

    Two ultimately periodic words agree everywhere iff they agree on the
    first ``|u1| + |u2| + lcm(|v1|, |v2|)`` positions.
    """
    horizon = w1.prefix_len + w2.prefix_len + lcm(w1.loop_len, w2.loop_len)
    return all(w1.letter_at(i) == w2.letter_at(i) for i in range(horizon))


def parse_word(text: str) -> LassoWord:
    """Parse the ``tok tok .. ; tok tok ..`` word format.

    The segment after ``;`` is the loop and must be nonempty. The prefix may
    be empty.
    """
    tokens = text.split()
    if tokens.count(";") != 1:
        raise WordFormatError(
            f"word literal must contain exactly one ';' separator: {text!r}"
        )
    cut = tokens.index(";")
    prefix = tuple(tokens[:cut])
    loop = tuple(tokens[cut + 1 :])
    if not loop:
        raise WordFormatError(f"word loop (after ';') must be nonempty: {text!r}")
    return LassoWord(prefix, loop)


def format_word(word: LassoWord) -> str:
    return " ".join((*word.prefix, ";", *word.loop))
