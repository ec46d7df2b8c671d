"""Two-counter Minsky machines: data model, replay, and bounded search."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

Config = tuple[int, int]


class Operation(str, Enum):
    INC1 = "inc1"
    INC2 = "inc2"
    DEC1 = "dec1"
    DEC2 = "dec2"
    ZERO1 = "zero1"
    ZERO2 = "zero2"


ZERO_TESTS = frozenset({Operation.ZERO1, Operation.ZERO2})


@dataclass(frozen=True)
class Transition:
    name: str
    src: str
    trg: str
    op: Operation


@dataclass(frozen=True)
class MinskyMachine:
    locations: tuple[str, ...]
    transitions: tuple[Transition, ...]
    t_init: str
    t_final: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "transitions", tuple(self.transitions))

    def transition(self, name: str) -> Transition:
        for t in self.transitions:
            if t.name == name:
                return t
        raise KeyError(f"no transition named {name!r}")

    @property
    def transition_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.transitions)

    def with_op(self, *ops: Operation) -> tuple[Transition, ...]:
        wanted = set(ops)
        return tuple(t for t in self.transitions if t.op in wanted)


@dataclass(frozen=True)
class Computation:
    """Replay of a transition sequence from (0, 0).

    ``configs`` has one more entry than ``transitions``; ``successful`` means
    the last transition is the machine's final one.
    """

    configs: tuple[Config, ...]
    transitions: tuple[str, ...]
    successful: bool

    @property
    def steps(self) -> int:
        return len(self.transitions)


def step(config: Config, op: Operation) -> Config | None:
    """Apply one counter operation; ``None`` when the operation is blocked
    (decrement of a zero counter, zero test of a nonzero counter)."""
    m, n = config
    if op == Operation.INC1:
        return (m + 1, n)
    if op == Operation.DEC1:
        return (m - 1, n) if m >= 1 else None
    if op == Operation.ZERO1:
        return (m, n) if m == 0 else None
    if op == Operation.INC2:
        return (m, n + 1)
    if op == Operation.DEC2:
        return (m, n - 1) if n >= 1 else None
    if op == Operation.ZERO2:
        return (m, n) if n == 0 else None
    raise ValueError(f"unknown operation {op!r}")


def validate_machine(machine: MinskyMachine) -> list[str]:
    """All convention and referential-integrity violations (empty = ok)."""
    problems: list[str] = []
    locations = set(machine.locations)
    names = [t.name for t in machine.transitions]
    for name in sorted({n for n in names if names.count(n) > 1}):
        problems.append(f"duplicate transition name {name!r}")
    by_name = {t.name: t for t in machine.transitions}
    for t in machine.transitions:
        if t.src not in locations:
            problems.append(f"transition {t.name!r}: unknown source {t.src!r}")
        if t.trg not in locations:
            problems.append(f"transition {t.name!r}: unknown target {t.trg!r}")
    for role, name in (("initial", machine.t_init), ("final", machine.t_final)):
        if name not in by_name:
            problems.append(f"{role} transition {name!r} does not exist")
    if machine.t_init == machine.t_final:
        problems.append("initial and final transitions must differ")
    t_init = by_name.get(machine.t_init)
    t_final = by_name.get(machine.t_final)
    if t_init is not None and t_init.op in ZERO_TESTS:
        problems.append("initial transition is a zero test")
    if t_final is not None and t_final.op in ZERO_TESTS:
        problems.append("final transition is a zero test")
    if t_final is not None:
        for t in machine.transitions:
            if t.src == t_final.trg:
                problems.append(
                    f"transition {t.name!r} leaves the final target location"
                )
    return problems


class ReplayError(ValueError):
    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (step {index})")
        self.index = index


def replay(machine: MinskyMachine, names: Sequence[str]) -> Computation:
    """Deterministic replay of a transition-name sequence from (0, 0).

    Checks that the sequence starts with the initial transition, chains
    source to target, and never blocks; the first violation raises
    :class:`ReplayError` with its 1-based step index.
    """
    if not names:
        raise ReplayError("transition sequence is empty", 0)
    by_name = {t.name: t for t in machine.transitions}
    configs: list[Config] = [(0, 0)]
    prev: Transition | None = None
    for i, name in enumerate(names, start=1):
        t = by_name.get(name)
        if t is None:
            raise ReplayError(f"unknown transition {name!r}", i)
        if prev is None:
            if name != machine.t_init:
                raise ReplayError(
                    f"first transition must be {machine.t_init!r}, got {name!r}", i
                )
        elif prev.trg != t.src:
            raise ReplayError(
                f"location mismatch: {prev.name!r} targets {prev.trg!r} "
                f"but {name!r} starts at {t.src!r}",
                i,
            )
        nxt = step(configs[-1], t.op)
        if nxt is None:
            raise ReplayError(f"operation {t.op.value} blocked at {configs[-1]}", i)
        configs.append(nxt)
        prev = t
    return Computation(
        tuple(configs), tuple(names), successful=names[-1] == machine.t_final
    )


def find_successful_computation(
    machine: MinskyMachine, max_steps: int, max_counter: int
) -> Computation | None:
    """Breadth-first search for a shortest successful computation.

    Counters are capped at ``max_counter`` and paths at ``max_steps``
    transitions; ties are broken by transition declaration order. Returns
    ``None`` when the bounded space is exhausted.
    """
    if max_steps < 1 or max_counter < 0:
        raise ValueError("bounds must be positive")
    t_init = machine.transition(machine.t_init)
    first = step((0, 0), t_init.op)
    if first is None or max(first) > max_counter:
        return None
    start = (t_init.trg, first)
    parents: dict[tuple[str, Config], tuple[tuple[str, Config] | None, str]] = {
        start: (None, t_init.name)
    }

    def path_to(state: tuple[str, Config]) -> list[str]:
        names: list[str] = []
        cursor: tuple[str, Config] | None = state
        while cursor is not None:
            cursor, name = parents[cursor]
            names.append(name)
        return names[::-1]

    queue: deque[tuple[tuple[str, Config], int]] = deque([(start, 1)])
    while queue:
        state, depth = queue.popleft()
        if depth >= max_steps:
            continue
        loc, config = state
        for t in machine.transitions:
            if t.src != loc:
                continue
            nxt = step(config, t.op)
            if nxt is None or max(nxt) > max_counter:
                continue
            if t.name == machine.t_final:
                return replay(machine, path_to(state) + [t.name])
            succ = (t.trg, nxt)
            if succ not in parents:
                parents[succ] = (state, t.name)
                queue.append((succ, depth + 1))
    return None


# --- machine text format ---


class MachineFormatError(ValueError):
    pass


def parse_machine(text: str) -> MinskyMachine:
    """Parse the line-oriented machine format.

    ``loc`` lines declare locations, ``trans <name> <src> <op> <trg>`` lines
    declare transitions in order, and ``init``/``final`` name the initial and
    final transitions. ``#`` starts a comment.
    """
    locations: list[str] = []
    transitions: list[Transition] = []
    t_init: str | None = None
    t_final: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind, args = fields[0], fields[1:]
        if kind == "loc":
            locations.extend(args)
        elif kind == "trans":
            if len(args) != 4:
                raise MachineFormatError(
                    f"line {lineno}: trans needs <name> <src> <op> <trg>"
                )
            name, src, opname, trg = args
            try:
                op = Operation(opname)
            except ValueError:
                raise MachineFormatError(
                    f"line {lineno}: unknown operation {opname!r}"
                ) from None
            transitions.append(Transition(name, src, trg, op))
        elif kind == "init":
            if len(args) != 1:
                raise MachineFormatError(f"line {lineno}: init needs one name")
            t_init = args[0]
        elif kind == "final":
            if len(args) != 1:
                raise MachineFormatError(f"line {lineno}: final needs one name")
            t_final = args[0]
        else:
            raise MachineFormatError(f"line {lineno}: unknown directive {kind!r}")
    if not transitions:
        raise MachineFormatError("machine has no transitions")
    if t_init is None or t_final is None:
        raise MachineFormatError("machine needs init and final lines")
    return MinskyMachine(tuple(locations), tuple(transitions), t_init, t_final)


def format_machine(machine: MinskyMachine) -> str:
    lines = ["loc " + " ".join(machine.locations)]
    for t in machine.transitions:
        lines.append(f"trans {t.name} {t.src} {t.op.value} {t.trg}")
    lines.append(f"init {machine.t_init}")
    lines.append(f"final {machine.t_final}")
    return "\n".join(lines) + "\n"
