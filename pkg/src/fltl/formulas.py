"""Formula ASTs for frequency LTL.

Core constructors are ``Atom``, ``Next``, ``FreqUntil``, ``Not`` and ``And``;
frequency annotations are exact ``fractions.Fraction`` values in [0, 1].
Everything else (``Or``, ``Implies``, ``Eventually``, ``Always``,
``ClassicUntil``, letter sets, the boolean constants) is sugar that
``desugar`` rewrites into the core.

``TrueFormula`` is semantically the disjunction of the whole alphabet but is
kept as a primitive by the evaluator to avoid alphabet-sized blowup;
``desugar(..., expand_true=True)`` produces the fully expanded form for
cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

RationalLike = Union[Fraction, int, str]


class AlphabetMismatchError(ValueError):
    """A formula or word mentions letters outside the declared alphabet."""


@dataclass(frozen=True)
class Alphabet:
    """Nonempty ordered set of letters (plain strings, no duplicates)."""

    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))
        if not self.letters:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("alphabet has duplicate letters")

    def __contains__(self, name: str) -> bool:
        return name in set(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def index(self, name: str) -> int:
        return self.letters.index(name)


class Formula:
    """Base class; all nodes are immutable and hashable."""

    __slots__ = ()


# --- core constructors ---


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class FreqUntil(Formula):
    """Until with a frequency bound: the left argument must hold at a
    fraction >= freq of the positions strictly before the witness."""

    freq: Fraction
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        f = self.freq if isinstance(self.freq, Fraction) else Fraction(self.freq)
        if not 0 <= f <= 1:
            raise ValueError(f"frequency must lie in [0, 1], got {f}")
        object.__setattr__(self, "freq", f)


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


# --- sugar ---


@dataclass(frozen=True)
class TrueFormula(Formula):
    pass


@dataclass(frozen=True)
class FalseFormula(Formula):
    pass


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    child: Formula


@dataclass(frozen=True)
class Always(Formula):
    child: Formula


@dataclass(frozen=True)
class ClassicUntil(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class LetterSet(Formula):
    """Shorthand for the disjunction of a nonempty set of letters."""

    names: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", frozenset(self.names))
        if not self.names:
            raise ValueError("letter set must be nonempty")


TRUE = TrueFormula()
FALSE = FalseFormula()

_CORE_TYPES = (Atom, Next, FreqUntil, Not, And)
_SUGAR_TYPES = (
    TrueFormula,
    FalseFormula,
    Or,
    Implies,
    Eventually,
    Always,
    ClassicUntil,
    LetterSet,
)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Atom, TrueFormula, FalseFormula, LetterSet)):
        return ()
    if isinstance(phi, (Next, Not, Eventually, Always)):
        return (phi.child,)
    if isinstance(phi, FreqUntil):
        return (phi.left, phi.right)
    if isinstance(phi, (And, Or, Implies, ClassicUntil)):
        return (phi.left, phi.right)
    raise TypeError(f"not a formula: {phi!r}")


def is_core(phi: Formula, allow_true: bool = True) -> bool:
    """Syntactic walk checking that no sugared constructor remains."""
    for node in subformulas(phi):
        if isinstance(node, _CORE_TYPES):
            continue
        if allow_true and isinstance(node, TrueFormula):
            continue
        return False
    return True


def formula_letters(phi: Formula) -> frozenset[str]:
    names: set[str] = set()
    for node in subformulas(phi):
        if isinstance(node, Atom):
            names.add(node.name)
        elif isinstance(node, LetterSet):
            names.update(node.names)
    return frozenset(names)


def check_letters(phi: Formula, alphabet: Alphabet) -> None:
    unknown = formula_letters(phi) - set(alphabet.letters)
    if unknown:
        raise AlphabetMismatchError(f"letters not in alphabet: {sorted(unknown)}")


def subformulas(phi: Formula) -> list[Formula]:
    """Distinct subformulas in bottom-up dependency order.

    Children precede their parents; structurally equal nodes appear once.
    """
    seen: set[Formula] = set()
    order: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen.add(node)
            order.append(node)
        else:
            stack.append((node, True))
            for child in reversed(children(node)):
                stack.append((child, False))
    return order


# --- convenience builders (used by the reduction; fold in a fixed order) ---


def conj(parts: Iterable[Formula]) -> Formula:
    items = list(parts)
    if not items:
        return TRUE
    out = items[0]
    for item in items[1:]:
        out = And(out, item)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    items = list(parts)
    if not items:
        return FALSE
    out = items[0]
    for item in items[1:]:
        out = Or(out, item)
    return out


def letter_set(names: Iterable[str]) -> Formula:
    """Disjunction of a letter group: FALSE when empty, Atom when singleton."""
    group = sorted(set(names))
    if not group:
        return FALSE
    if len(group) == 1:
        return Atom(group[0])
    return LetterSet(frozenset(group))


def desugar(
    phi: Formula, alphabet: Alphabet, *, expand_true: bool = False
) -> Formula:
    """Rewrite sugar into the five core constructors.

    ``TrueFormula`` stays primitive unless ``expand_true`` is set, in which
    case it becomes the disjunction of the alphabet (and the output contains
    no ``TrueFormula`` at all). Letter sets expand in alphabet order.
    """
    check_letters(phi, alphabet)
    memo: dict[Formula, Formula] = {}

    def or_core(x: Formula, y: Formula) -> Formula:
        return Not(And(Not(x), Not(y)))

    def any_of(names: Iterable[str]) -> Formula:
        ordered = sorted(names, key=alphabet.index)
        out: Formula = Atom(ordered[0])
        for name in ordered[1:]:
            out = or_core(out, Atom(name))
        return out

    def true_core() -> Formula:
        if expand_true:
            return any_of(alphabet.letters)
        return TRUE

    def walk(node: Formula) -> Formula:
        got = memo.get(node)
        if got is not None:
            return got
        if isinstance(node, Atom):
            out: Formula = node
        elif isinstance(node, TrueFormula):
            out = true_core()
        elif isinstance(node, FalseFormula):
            out = Not(true_core())
        elif isinstance(node, Next):
            out = Next(walk(node.child))
        elif isinstance(node, Not):
            out = Not(walk(node.child))
        elif isinstance(node, And):
            out = And(walk(node.left), walk(node.right))
        elif isinstance(node, FreqUntil):
            out = FreqUntil(node.freq, walk(node.left), walk(node.right))
        elif isinstance(node, Or):
            out = or_core(walk(node.left), walk(node.right))
        elif isinstance(node, Implies):
            out = or_core(Not(walk(node.left)), walk(node.right))
        elif isinstance(node, ClassicUntil):
            out = FreqUntil(Fraction(1), walk(node.left), walk(node.right))
        elif isinstance(node, Eventually):
            out = FreqUntil(Fraction(1), true_core(), walk(node.child))
        elif isinstance(node, Always):
            out = Not(FreqUntil(Fraction(1), true_core(), Not(walk(node.child))))
        elif isinstance(node, LetterSet):
            out = any_of(node.names)
        else:
            raise TypeError(f"not a formula: {node!r}")
        memo[node] = out
        return out

    return walk(phi)
