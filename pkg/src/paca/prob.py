"""Exact acceptance probabilities and related local analyses.

Two independent oracles compute the probability that an automaton accepts a
word within ``T`` steps:

* ``acceptance_prob_enum`` walks the tree of coin outcomes path by path and
  never merges configurations;
* ``acceptance_prob_dp`` pushes a distribution over configurations forward,
  absorbing all-accepting configurations at every step.

Everything is exact.  Masses are tracked as integer tape counts over a
common power-of-two denominator and returned as :class:`Dyadic`.

The module also answers local questions: which states a cell can reach at a
step (by exhaustive lightcone enumeration, or by a set-valued simulation
that merges equal rows), which cells are critical, whether two acceptance
events are independent, and sound certificates that a word is rejected.
"""

from __future__ import annotations

import enum
import itertools
import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .core import (
    BudgetExceeded,
    FormatError,
    Paca,
    RandomTape,
    as_input,
    fast_rule,
    lightcone_coords,
    run,
)
from .dyadic import ONE, ZERO, Dyadic


# ---------------------------------------------------------------------------
# budgets


@dataclass(frozen=True)
class Budget:
    """Size limits for the exact computations."""

    enum_cells: int = 24          # T * n for tape enumeration
    dp_support: int = 2_000_000   # configurations held by the forward DP
    cone_leaves: int = 1 << 20    # coin assignments explored per lightcone
    set_size: int = 200_000       # first-hit and reachable sets

    @classmethod
    def from_env(cls, text: Optional[str] = None) -> "Budget":
        """Read ``PACA_BUDGET``: a bare integer (the enumeration limit) or
        ``key=value`` pairs with keys ``enum``, ``dp``, ``cone``, ``sets``."""
        text = os.environ.get("PACA_BUDGET", "") if text is None else text
        text = text.strip()
        if not text:
            return cls()
        if text.isdigit():
            return cls(enum_cells=int(text))
        names = {"enum": "enum_cells", "dp": "dp_support", "cone": "cone_leaves", "sets": "set_size"}
        kwargs = {}
        for part in text.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key not in names or not value.strip().isdigit():
                raise FormatError(f"bad PACA_BUDGET entry {part!r}")
            kwargs[names[key]] = int(value)
        return cls(**kwargs)


def _budget(budget: Optional[Budget]) -> Budget:
    return Budget.from_env() if budget is None else budget


def _horizon(automaton: Paca, n: int, horizon: Optional[int]) -> int:
    T = automaton.horizon_for(n) if horizon is None else horizon
    if T is None:
        raise FormatError(f"{automaton!r} has no declared horizon; pass one explicitly")
    if T < 1:
        raise ValueError("horizon must be positive")
    return T


def _images(automaton: Paca):
    """Per-call memo of ``(l, c, r) -> (image0, image1)``."""
    r0, r1 = fast_rule(automaton.rule0), fast_rule(automaton.rule1)
    det = automaton.deterministic
    memo: dict = {}

    def images(l, c, r):
        key = (l, c, r)
        try:
            return memo[key]
        except KeyError:
            a = r0(l, c, r)
            if det:
                out = (a,)
            else:
                b = r1(l, c, r)
                out = (a,) if a == b else (a, b)
            memo[key] = out
            return out

    return images


def _options(images, config: tuple, boundary: str) -> list:
    n = len(config)
    padded = (boundary, *config, boundary)
    return [images(padded[i], padded[i + 1], padded[i + 2]) for i in range(n)]


# ---------------------------------------------------------------------------
# the two oracles


def acceptance_prob_enum(
    automaton: Paca,
    word,
    horizon: Optional[int] = None,
    budget: Optional[Budget] = None,
    raw: bool = False,
) -> Dyadic:
    """Probability over all tapes that the run accepts at some step ``t < T``.

    The default walk branches only on cells whose two rule images differ,
    weighting each branch by one coin; this is the same sum as the literal
    enumeration of every tape, grouped by indistinguishable coin outcomes.
    ``raw=True`` performs the literal enumeration with :func:`run`.
    The budget bounds ``T*n`` for the literal enumeration and the number of
    visited paths (``2**enum_cells``) for the walk.
    """
    budget = _budget(budget)
    config = as_input(automaton, word)
    n = len(config)
    T = _horizon(automaton, n, horizon)
    if raw:
        if T * n > budget.enum_cells:
            raise BudgetExceeded(f"T*n = {T * n} exceeds the enumeration limit {budget.enum_cells}")
        hits = 0
        for bits in itertools.product((0, 1), repeat=T * n):
            rows = tuple(bits[k * n:(k + 1) * n] for k in range(T))
            if run(automaton, config, RandomTape(rows)).accepted:
                hits += 1
        return Dyadic(hits, T * n)

    images = _images(automaton)
    boundary = automaton.boundary
    full = n * (T - 1)
    total = 0
    visits = 0
    limit = 1 << budget.enum_cells

    def walk(cfg: tuple, t: int, spent: int) -> None:
        nonlocal total, visits
        visits += 1
        if visits > limit:
            raise BudgetExceeded(f"more than 2^{budget.enum_cells} coin paths")
        if automaton.all_accepting(cfg):
            total += 1 << (full - spent)
            return
        if t == T - 1:
            return
        opts = _options(images, cfg, boundary)
        branching = sum(1 for o in opts if len(o) == 2)
        for succ in itertools.product(*opts):
            walk(succ, t + 1, spent + branching)

    walk(config, 0, 0)
    return Dyadic(total, full)


@dataclass
class Distribution:
    """Unabsorbed mass over configurations after some number of steps."""

    support: dict
    absorbed: Dyadic
    step: int

    def total(self) -> Dyadic:
        out = self.absorbed
        for m in self.support.values():
            out = out + m
        return out


def _forward(automaton: Paca, config: tuple, T: int, budget: Budget, steps: Optional[int] = None):
    n = len(config)
    images = _images(automaton)
    boundary = automaton.boundary
    accepting = automaton.all_accepting
    dist = {config: 1}
    absorbed = ZERO
    last = T - 1 if steps is None else steps
    for t in range(last + 1):
        live = {}
        hit = 0
        for cfg, mass in dist.items():
            if accepting(cfg):
                hit += mass
            else:
                live[cfg] = mass
        if hit:
            absorbed = absorbed + Dyadic(hit, n * t)
        dist = live
        if t == last or not dist:
            return absorbed, dist, t
        nxt: dict = defaultdict(int)
        for cfg, mass in dist.items():
            opts = _options(images, cfg, boundary)
            shift = n - sum(1 for o in opts if len(o) == 2)
            weight = mass << shift
            for succ in itertools.product(*opts):
                nxt[succ] += weight
            if len(nxt) > budget.dp_support:
                raise BudgetExceeded(f"DP support exceeds {budget.dp_support} configurations")
        dist = nxt
    return absorbed, dist, last


def acceptance_prob_dp(
    automaton: Paca,
    word,
    horizon: Optional[int] = None,
    budget: Optional[Budget] = None,
) -> Dyadic:
    """Forward dynamic program on the configuration Markov chain."""
    budget = _budget(budget)
    config = as_input(automaton, word)
    T = _horizon(automaton, len(config), horizon)
    absorbed, _, _ = _forward(automaton, config, T, budget)
    return absorbed


def forward_distribution(
    automaton: Paca, word, steps: int, budget: Optional[Budget] = None
) -> Distribution:
    """Distribution of the not-yet-accepted configurations after ``steps`` steps."""
    budget = _budget(budget)
    config = as_input(automaton, word)
    n = len(config)
    absorbed, dist, t = _forward(automaton, config, steps + 1, budget, steps=steps)
    return Distribution({c: Dyadic(m, n * t) for c, m in dist.items()}, absorbed, t)


def acceptance_prob(
    automaton: Paca,
    word,
    horizon: Optional[int] = None,
    budget: Optional[Budget] = None,
) -> Dyadic:
    """Exact probability, using a product structure when the automaton has one.

    Product constructions know how their acceptance event decomposes into
    independent component events; they evaluate each component recursively
    and combine exactly.  Anything else goes through the forward DP.
    """
    config = as_input(automaton, word)
    T = _horizon(automaton, len(config), horizon)
    structure = automaton.structure
    if structure is not None:
        value = structure.acceptance_prob(config, T, budget)
        if value is not None:
            return value
    return acceptance_prob_dp(automaton, config, T, budget)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ErrorMode:
    sided: str
    p: Fraction

    def __post_init__(self):
        if self.sided not in ("one", "two"):
            raise ValueError("mode must be one- or two-sided")
        if self.sided == "one" and not 0 < self.p < 1:
            raise ValueError("one-sided error must lie in (0, 1)")
        if self.sided == "two" and not 0 < self.p < Fraction(1, 2):
            raise ValueError("two-sided error must lie in (0, 1/2)")

    @classmethod
    def parse(cls, text: str) -> "ErrorMode":
        """``one:7/8``, ``two:1/3`` (``classify:`` is an alias for ``one:``)."""
        kind, _, value = text.partition(":")
        kind = {"classify": "one", "classify2": "two", "one": "one", "two": "two"}.get(kind)
        if kind is None or not value:
            raise FormatError(f"bad mode {text!r}")
        try:
            p = Fraction(value)
        except ValueError:
            raise FormatError(f"bad error value {value!r}") from None
        return cls(kind, p)

    def __str__(self):
        return f"{self.sided}:{self.p}"


def one_sided(p) -> ErrorMode:
    return ErrorMode("one", Fraction(p))


def two_sided(p) -> ErrorMode:
    return ErrorMode("two", Fraction(p))


class Verdict(enum.Enum):
    IN = "in_language"
    NOT_IN = "not_in_language"
    CONTRACT_VIOLATION = "contract_violation"


def verdict_for(prob: Dyadic, mode: ErrorMode) -> Verdict:
    q = prob.to_fraction()
    if q >= 1 - mode.p:
        return Verdict.IN
    if mode.sided == "one":
        return Verdict.NOT_IN if q == 0 else Verdict.CONTRACT_VIOLATION
    return Verdict.NOT_IN if q <= mode.p else Verdict.CONTRACT_VIOLATION


def classify(
    automaton: Paca,
    word,
    horizon: Optional[int] = None,
    mode: Union[ErrorMode, str] = "two:1/3",
    budget: Optional[Budget] = None,
) -> Verdict:
    if isinstance(mode, str):
        mode = ErrorMode.parse(mode)
    return verdict_for(acceptance_prob(automaton, word, horizon, budget), mode)


# ---------------------------------------------------------------------------
# horizon validation


@dataclass(frozen=True)
class HorizonCheck:
    ok: bool
    violated_at: Optional[int] = None
    steps_examined: int = 0


def validate_horizon(
    automaton: Paca, word, claimed_T: int, budget: Optional[Budget] = None
) -> HorizonCheck:
    """Check that every first visit to an all-accepting row happens before ``claimed_T``.

    The first-hit sets ``S_0 = {x}``, ``S_{t+1} = succ(S_t minus accepting)`` are
    computed until they repeat; a repetition means the sequence is periodic
    from then on, so every future first hit is a repetition of one already seen.
    """
    budget = _budget(budget)
    config = as_input(automaton, word)
    images = _images(automaton)
    boundary = automaton.boundary
    current = frozenset([config])
    seen: dict = {}
    hit_times: list[int] = []
    t = 0
    while True:
        live = frozenset(c for c in current if not automaton.all_accepting(c))
        if len(live) != len(current):
            if t >= claimed_T:
                return HorizonCheck(False, t, t)
            hit_times.append(t)
        if not live:
            return HorizonCheck(True, None, t)
        if current in seen:
            start = seen[current]
            period = t - start
            cyclic = [u for u in hit_times if start <= u < t]
            if not cyclic:
                return HorizonCheck(True, None, t)
            first = min(
                u + period * max(0, -(-(claimed_T - u) // period)) for u in cyclic
            )
            return HorizonCheck(False, first, t)
        seen[current] = t
        nxt = set()
        for cfg in live:
            nxt.update(itertools.product(*_options(images, cfg, boundary)))
            if len(nxt) > budget.set_size:
                raise BudgetExceeded(f"first-hit set exceeds {budget.set_size} configurations")
        current = frozenset(nxt)
        t += 1


# ---------------------------------------------------------------------------
# local views: windows around a cell


def padded_window(word: Sequence, centre: int, radius: int, boundary: str = "$") -> tuple:
    """Input symbols at ``centre - radius .. centre + radius`` with ``$`` outside."""
    n = len(word)
    return tuple(
        word[k] if 0 <= k < n else boundary for k in range(centre - radius, centre + radius + 1)
    )


def _shrink(images, rows, boundary: str, coins=None, merge: bool = True):
    """Advance a set (or list) of windows by one step, dropping both ends."""
    out = set() if merge else []
    for row in rows:
        opts = []
        for k in range(1, len(row) - 1):
            if row[k] == boundary:
                opts.append((boundary,))
            else:
                opts.append(images(row[k - 1], row[k], row[k + 1]))
        if merge:
            out.update(itertools.product(*opts))
        else:
            out.extend(itertools.product(*opts))
    return out


class LocalAnalyzer:
    """Memoised local questions about one automaton.

    Windows are tuples of input symbols padded with the boundary symbol; a
    window of radius ``t`` determines everything about its centre cell up to
    step ``t`` once the coins are fixed.
    """

    def __init__(self, automaton: Paca, budget: Optional[Budget] = None):
        self.automaton = automaton
        self.budget = _budget(budget)
        self.images = _images(automaton)
        self._reach: dict = {}
        self._enum: dict = {}
        self._marg: dict = {}

    # set-valued simulation

    def reachable_rows(self, window: tuple, t: int) -> set:
        """All rows reachable from ``window`` after ``t`` steps (rows shrink by 2 per step)."""
        rows = {tuple(window)}
        b = self.automaton.boundary
        for _ in range(t):
            rows = _shrink(self.images, rows, b)
            if len(rows) > self.budget.set_size:
                raise BudgetExceeded(f"reachable set exceeds {self.budget.set_size} rows")
        return rows

    def reachable_states(self, window: tuple, t: int) -> frozenset:
        """States the centre of a radius-``t`` window can be in at step ``t``."""
        key = (window, t)
        got = self._reach.get(key)
        if got is None:
            got = frozenset(row[0] for row in self.reachable_rows(window, t))
            self._reach[key] = got
        return got

    # explicit lightcone enumeration

    def enumerated_states(self, window: tuple, t: int) -> frozenset:
        """Same answer as :meth:`reachable_states`, by walking every coin assignment
        of the lightcone one path at a time, without merging rows."""
        key = (window, t)
        got = self._enum.get(key)
        if got is not None:
            return got
        found = set()
        leaves = 0
        b = self.automaton.boundary
        images = self.images

        def walk(row, s):
            nonlocal leaves
            if s == t:
                found.add(row[0])
                leaves += 1
                if leaves > self.budget.cone_leaves:
                    raise BudgetExceeded("lightcone enumeration exceeds its budget")
                return
            opts = [
                (b,) if row[k] == b else images(row[k - 1], row[k], row[k + 1])
                for k in range(1, len(row) - 1)
            ]
            for nxt in itertools.product(*opts):
                walk(nxt, s + 1)

        walk(tuple(window), 0)
        got = frozenset(found)
        self._enum[key] = got
        return got

    def accept_prob_local(self, window: tuple, t: int, cells: Sequence[int]) -> Dyadic:
        """Probability that all window positions in ``cells`` are accepting at step ``t``.

        ``window`` is wide enough that the listed positions are determined:
        every listed position ``k`` satisfies ``t <= k <= len(window)-1-t``.
        """
        key = (window, t, tuple(cells))
        got = self._marg.get(key)
        if got is not None:
            return got
        b = self.automaton.boundary
        images = self.images
        acc = self.automaton.is_accepting
        dist = {tuple(window): 1}
        exponent = 0
        for s in range(t):
            nxt: dict = defaultdict(int)
            for row, mass in dist.items():
                opts = [
                    (b,) if row[k] == b else images(row[k - 1], row[k], row[k + 1])
                    for k in range(1, len(row) - 1)
                ]
                shift = len(opts) - sum(1 for o in opts if len(o) == 2)
                for succ in itertools.product(*opts):
                    nxt[succ] += mass << shift
            exponent += len(window) - 2 - 2 * s
            if len(nxt) > self.budget.dp_support:
                raise BudgetExceeded("local distribution exceeds its budget")
            dist = nxt
        good = sum(m for row, m in dist.items() if all(acc(row[k - t]) for k in cells))
        got = Dyadic(good, exponent)
        self._marg[key] = got
        return got

    # per-cell classification

    def cell_states(self, word: Sequence, i: int, t: int, method: str = "set") -> frozenset:
        window = padded_window(word, i, t, self.automaton.boundary)
        if method == "enum":
            return self.enumerated_states(window, t)
        return self.reachable_states(window, t)

    def is_critical(self, states: frozenset) -> bool:
        acc = self.automaton.is_accepting
        return any(acc(q) for q in states) and not all(acc(q) for q in states)

    def surely_rejecting(self, window: tuple, t: int) -> bool:
        acc = self.automaton.is_accepting
        return not any(acc(q) for q in self.reachable_states(window, t))

    def possible_accept_steps(self, word: Sequence, T: int) -> list[int]:
        """Steps ``t < T`` at which some tape puts every cell in an accepting state."""
        out = []
        acc = self.automaton.is_accepting
        b = self.automaton.boundary
        for t in range(T):
            if any(self.surely_rejecting(padded_window(word, i, t, b), t) for i in range(len(word))):
                continue
            window = (b,) * t + tuple(word) + (b,) * t
            rows = self.reachable_rows(window, t)
            if any(all(acc(q) for q in row) for row in rows):
                out.append(t)
        return out


# ---------------------------------------------------------------------------
# critical cells and independence


@dataclass(frozen=True)
class CriticalReport:
    step: int
    critical: frozenset
    reachable_states: tuple


def critical_cells(
    automaton: Paca,
    word,
    t: int,
    budget: Optional[Budget] = None,
    analyzer: Optional[LocalAnalyzer] = None,
    method: str = "enum",
) -> CriticalReport:
    """Cells whose acceptance at step ``t`` depends on the coins.

    ``method="enum"`` enumerates the coin assignments of each cell's
    lightcone; ``method="set"`` uses the merging simulation.  Both give the
    same sets; tests hold them to that.
    """
    config = as_input(automaton, word)
    if t < 0:
        raise ValueError("t must be nonnegative")
    an = analyzer or LocalAnalyzer(automaton, budget)
    reach = tuple(an.cell_states(config, i, t, method) for i in range(len(config)))
    crit = frozenset(i for i, states in enumerate(reach) if an.is_critical(states))
    return CriticalReport(t, crit, reach)


@dataclass(frozen=True)
class IndependenceReport:
    p_i: Dyadic
    p_j: Dyadic
    p_ij: Dyadic
    guaranteed: bool

    @property
    def independent(self) -> bool:
        return self.p_ij == self.p_i * self.p_j


def independence_check(
    automaton: Paca,
    word,
    i: int,
    j: int,
    t: int,
    horizon_T: Optional[int] = None,
    budget: Optional[Budget] = None,
) -> IndependenceReport:
    """Exact marginals and joint probability of "cell accepts at step t" for two cells.

    Coins outside the union of the two lightcones are held at 0; the walk
    branches only on cone positions whose two rule images differ.
    """
    budget = _budget(budget)
    config = as_input(automaton, word)
    n = len(config)
    for c in (i, j):
        if not 0 <= c < n:
            raise IndexError(f"cell {c} outside 0..{n - 1}")
    T = horizon_T if horizon_T is not None else automaton.horizon_for(n)
    cone = lightcone_coords(i, t, n) | lightcone_coords(j, t, n)
    images = _images(automaton)
    acc = automaton.is_accepting
    b = automaton.boundary
    counts = [0, 0, 0]
    full = len(cone)
    leaves = 0

    def walk(cfg, s, spent):
        nonlocal leaves
        if s == t:
            ai, aj = acc(cfg[i]), acc(cfg[j])
            w = 1 << (full - spent)
            counts[0] += w * ai
            counts[1] += w * aj
            counts[2] += w * (ai and aj)
            leaves += 1
            if leaves > budget.cone_leaves:
                raise BudgetExceeded("independence enumeration exceeds its budget")
            return
        padded = (b, *cfg, b)
        opts = []
        spent_here = 0
        for k in range(n):
            im = images(padded[k], padded[k + 1], padded[k + 2])
            if len(im) == 2 and (s, k) in cone:
                spent_here += 1
                opts.append(im)
            else:
                opts.append(im[:1])
        for succ in itertools.product(*opts):
            walk(succ, s + 1, spent + spent_here)

    walk(config, 0, 0)
    pi, pj, pij = (Dyadic(c, full) for c in counts)
    guaranteed = T is not None and abs(i - j) > 2 * (T - 1)
    return IndependenceReport(pi, pj, pij, guaranteed)


# ---------------------------------------------------------------------------
# certificates and language enumeration


def rejection_certificate(an: LocalAnalyzer, word: Sequence, T: int) -> Optional[dict]:
    """Sound proof of probability 0: for every step ``t < T`` some cell can
    never be accepting at ``t``.  Returns ``{t: cell}`` or ``None``."""
    b = an.automaton.boundary
    proof = {}
    for t in range(T):
        for i in range(len(word)):
            if an.surely_rejecting(padded_window(word, i, t, b), t):
                proof[t] = i
                break
        else:
            return None
    return proof


def acceptance_upper_bound(an: LocalAnalyzer, word: Sequence, T: int, pairs: int = 4) -> Dyadic:
    """Sound upper bound on the acceptance probability.

    Uses ``P(accept) <= sum_t P(all cells accept at t)`` and bounds each term
    by the exact probability that one cell, or a pair of coin-dependent
    cells, is accepting at ``t``.
    """
    b = an.automaton.boundary
    n = len(word)
    total = ZERO
    for t in range(T):
        best = ONE
        uncertain = []
        for i in range(n):
            p = an.accept_prob_local(padded_window(word, i, t, b), t, [t])
            if p < best:
                best = p
            if ZERO < p < ONE:
                uncertain.append(i)
            if not best:
                break
        if best and len(uncertain) >= 2:
            for i, j in list(itertools.combinations(uncertain, 2))[: pairs * pairs]:
                lo, hi = i - t, j + t
                window = tuple(word[k] if 0 <= k < n else b for k in range(lo, hi + 1))
                p = an.accept_prob_local(window, t, [t, t + (j - i)])
                if p < best:
                    best = p
        total = total + best
        if total >= ONE:
            return ONE
    return total


def words(alphabet: Sequence[str], max_len: int, min_len: int = 1) -> Iterator[str]:
    """All words of length ``min_len .. max_len`` in length-lexicographic order."""
    symbols = sorted(alphabet)
    for n in range(min_len, max_len + 1):
        for tup in itertools.product(symbols, repeat=n):
            yield "".join(tup)


@dataclass
class MembershipOracle:
    """Decides membership for a valid error-bounded automaton, exactly.

    With ``positive`` a word is a member iff its acceptance probability is
    nonzero, whatever the error mode says.

    Words are first tested against cheap sound certificates (probability 0,
    or an upper bound below the acceptance threshold); only the rest are
    evaluated exactly.
    """

    automaton: Paca
    mode: ErrorMode
    horizon: Optional[int] = None
    budget: Optional[Budget] = None
    use_bounds: bool = True
    positive: bool = False
    analyzer: LocalAnalyzer = field(init=False)
    exact_calls: int = field(default=0, init=False)

    def __post_init__(self):
        self.analyzer = LocalAnalyzer(self.automaton, self.budget)

    def horizon_for(self, n: int) -> int:
        return _horizon(self.automaton, n, self.horizon)

    def verdict(self, word: str) -> Verdict:
        T = self.horizon_for(len(word))
        if self.use_bounds and self.automaton.structure is None and not self.automaton.deterministic:
            if rejection_certificate(self.analyzer, word, T) is not None:
                return Verdict.NOT_IN
            if self.mode.sided == "two":
                if acceptance_upper_bound(self.analyzer, word, T).to_fraction() < 1 - self.mode.p:
                    return Verdict.NOT_IN
        self.exact_calls += 1
        if self.positive:
            prob = acceptance_prob(self.automaton, word, T, self.budget)
            return Verdict.IN if prob > 0 else Verdict.NOT_IN
        return verdict_for(acceptance_prob(self.automaton, word, T, self.budget), self.mode)

    def __call__(self, word: str) -> bool:
        v = self.verdict(word)
        if v is Verdict.CONTRACT_VIOLATION:
            raise ValueError(f"{self.automaton!r} violates {self.mode} on {word!r}")
        return v is Verdict.IN

    def prefix_dead(self, prefix: str) -> bool:
        """True when every proper extension of ``prefix`` has probability 0.

        Cells whose radius-``t`` window lies inside the prefix keep that
        window in every extension.  Only meaningful for a fixed horizon.
        """
        T = self.horizon_for(len(prefix) + 1)
        an = self.analyzer
        b = self.automaton.boundary
        L = len(prefix)
        for t in range(T):
            for i in range(0, L - t):
                if an.surely_rejecting(padded_window(prefix, i, t, b), t):
                    break
            else:
                return False
        return True


def enumerate_members(oracle: MembershipOracle, alphabet: Sequence[str], max_len: int, min_len: int = 1) -> list[str]:
    """Members up to ``max_len``; subtrees with a rejection certificate are skipped.

    Requires a constant horizon (windows of dead prefixes must stay dead).
    """
    symbols = sorted(alphabet)
    out: list[str] = []

    def visit(prefix: str):
        if len(prefix) >= min_len and oracle(prefix):
            out.append(prefix)
        if len(prefix) == max_len:
            return
        if prefix and oracle.use_bounds and oracle.automaton.structure is None and oracle.prefix_dead(prefix):
            return
        for s in symbols:
            visit(prefix + s)

    for s in symbols:
        visit(s)
    out.sort(key=lambda w: (len(w), w))
    return out


def max_critical_on_members(
    automaton: Paca, members: Sequence[str], horizon: Optional[int] = None,
    analyzer: Optional[LocalAnalyzer] = None,
) -> dict:
    """For each member length, the largest number of critical cells at a step
    where acceptance is possible."""
    an = analyzer or LocalAnalyzer(automaton)
    best: dict = {}
    for w in members:
        T = _horizon(automaton, len(w), horizon)
        count = 0
        for t in an.possible_accept_steps(w, T):
            rep = critical_cells(automaton, w, t, analyzer=an, method="set")
            count = max(count, len(rep.critical))
        best[len(w)] = max(best.get(len(w), 0), count)
    return best
