"""Automata, configurations, random tapes and the exact step semantics.

A cellular automaton here is a bounded row of cells.  Every cell reads the
triple (left, self, right), where ``$`` stands in for the missing neighbour of
the two border cells.  A probabilistic automaton carries two local rules; on
every step each cell flips its own fair coin and applies ``rule0`` or
``rule1`` accordingly.  When both rules coincide the automaton is
deterministic.

Input symbols are single characters, so words can be written as plain
strings.  States of table-backed automata are strings; rule-backed automata
may use any hashable payload (typically tuples) and leave the state set
implicit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence, Union

BOUNDARY = "$"

State = Hashable
Config = tuple
Word = str


class PacaError(Exception):
    """Base class for errors raised by this package."""


class AlphabetError(PacaError, ValueError):
    pass


class StateError(PacaError, ValueError):
    pass


class NotDeterministicError(PacaError, ValueError):
    pass


class LengthMismatchError(PacaError, ValueError):
    pass


class BudgetExceeded(PacaError):
    """An exact computation would exceed its configured size budget."""


class FormatError(PacaError, ValueError):
    """A file or command-line value could not be parsed."""


# ---------------------------------------------------------------------------
# local rules


class TableRule:
    """A local rule given as an explicit map ``(l, c, r) -> q``."""

    kind = "table"

    def __init__(self, table: Mapping[tuple, State]):
        self.table = dict(table)

    def __call__(self, left, centre, right):
        try:
            return self.table[(left, centre, right)]
        except KeyError:
            raise StateError(f"no transition for {(left, centre, right)!r}") from None

    def __eq__(self, other):
        return isinstance(other, TableRule) and self.table == other.table

    def __hash__(self):
        return hash(frozenset(self.table.items()))

    def missing(self, states: Sequence[State], boundary: str = BOUNDARY) -> list[tuple]:
        padded = [boundary, *states]
        return [
            (l, c, r)
            for l in padded
            for c in states
            for r in padded
            if (l, c, r) not in self.table
        ]


class ProcRule:
    """A local rule computed by a pure function over structured states.

    ``cache=True`` memoises the function; only use it when the set of
    distinct triples stays small.
    """

    kind = "proc"

    def __init__(self, fn: Callable[[State, State, State], State], name: str = "", cache: bool = False):
        self.name = name or getattr(fn, "__name__", "rule")
        if cache:
            memo: dict = {}

            def cached(l, c, r, _fn=fn, _memo=memo):
                key = (l, c, r)
                try:
                    return _memo[key]
                except KeyError:
                    out = _memo[key] = _fn(l, c, r)
                    return out

            self._fn = cached
        else:
            self._fn = fn

    def __call__(self, left, centre, right):
        return self._fn(left, centre, right)

    def __repr__(self):
        return f"ProcRule({self.name})"


Rule = Union[TableRule, ProcRule]
Horizon = Union[int, Callable[[int], int], None]


# ---------------------------------------------------------------------------
# the automaton


class Paca:
    """A probabilistic acceptor cellular automaton.

    ``accepting`` is either a finite set of states or a predicate; the latter
    is what rule-backed constructions use.  ``states`` may be ``None`` for
    rule-backed automata, in which case the state set is the (lazy) closure
    of states reachable from the input alphabet.

    ``source`` records how a rule-backed automaton can be rebuilt (a builtin
    name plus parameters) and ``structure`` optionally describes a product
    construction so probabilities can be computed component-wise.
    """

    def __init__(
        self,
        input_alphabet: Iterable[str],
        rule0: Rule,
        rule1: Optional[Rule] = None,
        accepting: Union[Iterable[State], Callable[[State], bool]] = (),
        states: Optional[Iterable[State]] = None,
        horizon: Horizon = None,
        name: str = "",
        source: Optional[dict] = None,
        structure: object = None,
        boundary: str = BOUNDARY,
    ):
        self.input_alphabet = tuple(input_alphabet)
        self.rule0 = rule0
        self.rule1 = rule0 if rule1 is None else rule1
        self.boundary = boundary
        self.name = name
        self.source = source
        self.structure = structure
        self.horizon = horizon
        if callable(accepting) and not isinstance(accepting, (set, frozenset)):
            self.accepting_set = None
            self.is_accepting = accepting
        else:
            acc = frozenset(accepting)
            self.accepting_set = acc
            self.is_accepting = acc.__contains__
        self.states = None if states is None else tuple(dict.fromkeys(states))
        self.deterministic = self.rule0 is self.rule1 or (
            isinstance(self.rule0, TableRule) and self.rule0 == self.rule1
        )
        self._validate()

    def _validate(self) -> None:
        if not self.input_alphabet:
            raise AlphabetError("input alphabet is empty")
        for s in self.input_alphabet:
            if not isinstance(s, str) or len(s) != 1:
                raise AlphabetError(f"input symbols must be single characters, got {s!r}")
            if s == self.boundary:
                raise AlphabetError("the boundary symbol cannot be an input symbol")
        if len(set(self.input_alphabet)) != len(self.input_alphabet):
            raise AlphabetError("duplicate input symbols")
        if self.states is None:
            return
        if not self.states:
            raise StateError("state set is empty")
        known = set(self.states)
        if self.boundary in known:
            raise StateError("the boundary symbol cannot be a state")
        if not set(self.input_alphabet) <= known:
            raise StateError("input alphabet is not contained in the state set")
        if self.accepting_set is not None and not self.accepting_set <= known:
            raise StateError("accepting set is not contained in the state set")
        for rule in (self.rule0, self.rule1):
            if isinstance(rule, TableRule):
                gaps = rule.missing(self.states, self.boundary)
                if gaps:
                    raise StateError(f"table rule is not total, e.g. missing {gaps[0]!r}")
                bad = [q for q in rule.table.values() if q not in known]
                if bad:
                    raise StateError(f"table rule produces unknown state {bad[0]!r}")

    @classmethod
    def from_tables(
        cls,
        states: Sequence[str],
        input_alphabet: Iterable[str],
        accepting: Iterable[str],
        table0: Mapping[tuple, str],
        table1: Optional[Mapping[tuple, str]] = None,
        horizon: Horizon = None,
        name: str = "",
    ) -> "Paca":
        r0 = TableRule(table0)
        r1 = r0 if table1 is None else TableRule(table1)
        return cls(input_alphabet, r0, r1, accepting, states, horizon, name)

    @classmethod
    def from_function(
        cls,
        states: Sequence[str],
        input_alphabet: Iterable[str],
        accepting: Iterable[str],
        fn0: Callable,
        fn1: Optional[Callable] = None,
        horizon: Horizon = None,
        name: str = "",
        boundary: str = BOUNDARY,
    ) -> "Paca":
        """Tabulate one or two rule functions over a finite state set."""
        padded = [boundary, *states]
        t0 = {(l, c, r): fn0(l, c, r) for l in padded for c in states for r in padded}
        t1 = None
        if fn1 is not None:
            t1 = {(l, c, r): fn1(l, c, r) for l in padded for c in states for r in padded}
        return cls.from_tables(states, input_alphabet, accepting, t0, t1, horizon, name)

    def horizon_for(self, n: int) -> Optional[int]:
        if self.horizon is None or isinstance(self.horizon, int):
            return self.horizon
        return self.horizon(n)

    def with_horizon(self, horizon: Horizon) -> "Paca":
        return Paca(
            self.input_alphabet,
            self.rule0,
            self.rule1,
            self.accepting_set if self.accepting_set is not None else self.is_accepting,
            self.states,
            horizon,
            self.name,
            self.source,
            self.structure,
            self.boundary,
        )

    def rule(self, bit: int) -> Rule:
        return self.rule1 if bit else self.rule0

    def all_accepting(self, config: Sequence[State]) -> bool:
        acc = self.is_accepting
        for q in config:
            if not acc(q):
                return False
        return True

    def __repr__(self):
        kind = "DACA" if self.deterministic else "PACA"
        return f"<{kind} {self.name or 'anonymous'} over {''.join(self.input_alphabet)}>"


# ---------------------------------------------------------------------------
# tapes


@dataclass(frozen=True)
class RandomTape:
    """A matrix of coin tosses; row ``t`` drives the step from ``t`` to ``t+1``."""

    rows: tuple

    def __post_init__(self):
        width = None
        for row in self.rows:
            if any(b not in (0, 1) for b in row):
                raise FormatError("tape entries must be 0 or 1")
            if width is not None and len(row) != width:
                raise FormatError("tape rows have different lengths")
            width = len(row)

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @classmethod
    def parse(cls, text: str) -> "RandomTape":
        """Parse rows of bits separated by ``;``, e.g. ``"0101;1100"``."""
        rows = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk or set(chunk) - {"0", "1"}:
                raise FormatError(f"bad tape row {chunk!r}")
            rows.append(tuple(int(b) for b in chunk))
        return cls(tuple(rows))

    @classmethod
    def from_seed(cls, seed: int, height: int, width: int) -> "RandomTape":
        """Pseudorandom tape: ``random.Random(seed).getrandbits(1)`` row by row, left to right."""
        rng = random.Random(seed)
        return cls(tuple(tuple(rng.getrandbits(1) for _ in range(width)) for _ in range(height)))

    @classmethod
    def zeros(cls, height: int, width: int) -> "RandomTape":
        return cls(tuple((0,) * width for _ in range(height)))

    def __str__(self):
        return ";".join("".join(map(str, r)) for r in self.rows)


# ---------------------------------------------------------------------------
# stepping


def as_input(automaton: Paca, word: Union[str, Sequence[str]]) -> Config:
    """Validate a word over the input alphabet and return it as a configuration."""
    cells = tuple(word)
    if not cells:
        raise AlphabetError("the empty word is not a valid input")
    alpha = set(automaton.input_alphabet)
    for s in cells:
        if s not in alpha:
            raise AlphabetError(f"symbol {s!r} is not in the input alphabet")
    return cells


def _check_config(automaton: Paca, config: Sequence[State]) -> None:
    if not config:
        raise StateError("configurations must be nonempty")
    if automaton.states is not None:
        known = set(automaton.states)
        for q in config:
            if q not in known:
                raise StateError(f"state {q!r} is not in the state set")


def fast_rule(rule: Rule) -> Callable:
    """The bare callable behind a rule, skipping one wrapper call."""
    return getattr(rule, "_fn", rule)


def advance(automaton: Paca, config: Config, coins: Optional[Sequence[int]] = None) -> Config:
    """One global step without validation; ``coins=None`` uses rule0 everywhere."""
    b = automaton.boundary
    n = len(config)
    if coins is None:
        rule = fast_rule(automaton.rule0)
        if n == 1:
            return (rule(b, config[0], b),)
        out = [rule(b, config[0], config[1])]
        for i in range(1, n - 1):
            out.append(rule(config[i - 1], config[i], config[i + 1]))
        out.append(rule(config[n - 2], config[n - 1], b))
        return tuple(out)
    r0, r1 = fast_rule(automaton.rule0), fast_rule(automaton.rule1)
    padded = (b, *config, b)
    return tuple(
        (r1 if coins[i] else r0)(padded[i], padded[i + 1], padded[i + 2]) for i in range(n)
    )


def step_det(automaton: Paca, config: Sequence[State]) -> Config:
    """Apply the single rule of a deterministic automaton to every cell."""
    if not automaton.deterministic:
        raise NotDeterministicError("step_det needs rule0 and rule1 to coincide")
    config = tuple(config)
    _check_config(automaton, config)
    return advance(automaton, config)


def step_rand(automaton: Paca, config: Sequence[State], coin_row: Sequence[int]) -> Config:
    """Apply ``rule_{coin_row[i]}`` to cell ``i``."""
    config = tuple(config)
    if len(coin_row) != len(config):
        raise LengthMismatchError(f"{len(coin_row)} coins for {len(config)} cells")
    if any(b not in (0, 1) for b in coin_row):
        raise FormatError("coins must be 0 or 1")
    _check_config(automaton, config)
    return advance(automaton, config, coin_row)


@dataclass(frozen=True)
class RunResult:
    accepted_at: Optional[int]
    steps: int

    @property
    def accepted(self) -> bool:
        return self.accepted_at is not None


def run(automaton: Paca, word, tape: Optional[RandomTape] = None, steps: Optional[int] = None) -> RunResult:
    """Run on a fixed tape and report the first all-accepting step.

    With a tape of ``T`` rows the steps ``0 .. T-1`` are inspected, so the
    last row never influences the outcome.  Deterministic automata may omit
    the tape and pass ``steps`` (the largest step inspected) instead.
    """
    config = as_input(automaton, word)
    n = len(config)
    if tape is not None:
        if tape.height < 1:
            raise FormatError("tape needs at least one row")
        if tape.width != n:
            raise LengthMismatchError(f"tape has {tape.width} columns for {n} cells")
        last = tape.height - 1 if steps is None else min(steps, tape.height - 1)
    else:
        if not automaton.deterministic:
            raise NotDeterministicError("a tape is required for probabilistic automata")
        if steps is None:
            h = automaton.horizon_for(n)
            if h is None:
                raise FormatError("no tape, step count or horizon given")
            steps = h - 1
        last = steps
    if automaton.all_accepting(config):
        return RunResult(0, 0)
    for t in range(last):
        config = advance(automaton, config, None if tape is None else tape.rows[t])
        if automaton.all_accepting(config):
            return RunResult(t + 1, t + 1)
    return RunResult(None, last)


@dataclass(frozen=True)
class SpaceTimeDiagram:
    rows: tuple
    accept_step: Optional[int]
    accepting: tuple = ()

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0


def space_time(automaton: Paca, word, tape: Optional[RandomTape], steps: int) -> SpaceTimeDiagram:
    """Rows ``0 .. steps`` of the run, with per-cell acceptance flags."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    config = as_input(automaton, word)
    if tape is None and not automaton.deterministic:
        raise NotDeterministicError("a tape is required for probabilistic automata")
    if tape is not None:
        if tape.width != len(config):
            raise LengthMismatchError(f"tape has {tape.width} columns for {len(config)} cells")
        if tape.height < steps:
            raise LengthMismatchError(f"tape has {tape.height} rows, {steps} steps requested")
    rows = [config]
    for t in range(steps):
        config = advance(automaton, config, None if tape is None else tape.rows[t])
        rows.append(config)
    flags = tuple(tuple(bool(automaton.is_accepting(q)) for q in row) for row in rows)
    accept = next((t for t, f in enumerate(flags) if all(f)), None)
    return SpaceTimeDiagram(tuple(rows), accept, flags)


def lightcone_coords(cell: int, t: int, n: int) -> frozenset:
    """Coin positions ``(row, column)`` that can influence ``cell`` at step ``t``."""
    if not 0 <= cell < n:
        raise IndexError(f"cell {cell} outside 0..{n - 1}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    coords = set()
    for s in range(t):
        reach = t - 1 - s
        for col in range(max(0, cell - reach), min(n, cell + reach + 1)):
            coords.add((s, col))
    return frozenset(coords)
