"""Automaton constructions.

* :func:`reduce_error_one_sided` runs ``m`` copies in round-robin fashion and
  accepts as soon as one copy does.
* :func:`reduce_error_two_sided` first stores a matrix of coins, then replays
  every combination of copy step counts with a counter and accepts when a
  majority of copies is simultaneously accepting.
* :func:`union_paca` / :func:`intersect_paca` are the same two products over
  two different automata.
* :func:`derandomize_one_sided` turns a constant-time one-sided automaton
  into a deterministic one that gathers a neighbourhood and decides locally.
* :func:`paca_from_llin` compiles a weighted-window spec into an automaton
  whose cells accept with probability ``2**-weight`` of their window.
* :func:`expand_rules` simulates ``2**k`` rules with two.

Every construction returns a :class:`TransformReport`.  Product outputs carry
a ``structure`` object so exact probabilities can be computed from the
components without exploring the (astronomically large) product state space;
tests cross-check this against the generic forward DP on small cases.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import BOUNDARY, BudgetExceeded, Paca, ProcRule, fast_rule
from .dyadic import ONE, ZERO, Dyadic
from .langs import (
    LLinSpec,
    LogWeight,
    Normalization,
    _power_extremes,
    lang_from_json,
    lang_to_json,
    normalize_llin,
)
from .prob import (
    Budget,
    LocalAnalyzer,
    MembershipOracle,
    acceptance_prob,
    enumerate_members,
    max_critical_on_members,
    one_sided,
)
from .registry import register


@dataclass
class TransformReport:
    output: Paca
    derived_horizon: int
    parameters: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        def plain(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, Dyadic):
                return v.to_json()
            if isinstance(v, (list, tuple)):
                return [plain(x) for x in v]
            if isinstance(v, dict):
                return {k: plain(x) for k, x in v.items()}
            return v

        return {
            "derived_horizon": self.derived_horizon,
            "parameters": plain(self.parameters),
            "notes": list(self.notes),
        }


def _const_horizon(C: Paca, T: Optional[int] = None) -> int:
    T = C.horizon if T is None else T
    if not isinstance(T, int) or T < 1:
        raise ValueError(f"{C!r} needs a constant positive horizon")
    return T


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _saved(automata) -> Optional[list]:
    """JSON forms of ``automata``, or ``None`` if one of them cannot be saved."""
    from .core import FormatError
    from .serialize import automaton_to_json  # local: serialize imports this module

    try:
        return [automaton_to_json(a) for a in automata]
    except FormatError:
        return None


def _neighbour(q, index, part):
    return BOUNDARY if q == BOUNDARY else q[index][part]


# ---------------------------------------------------------------------------
# round-robin product


@dataclass(frozen=True)
class RoundRobinStructure:
    """Copy ``j`` at its step ``t`` is inspected at real step ``m*t + j + 1``."""

    components: tuple

    def copy_horizon(self, j: int, H: int) -> int:
        m = len(self.components)
        if H - j - 2 < 0:
            return 0
        return (H - j - 2) // m + 1

    def acceptance_prob(self, config, H, budget=None) -> Dyadic:
        fail = ONE
        memo = {}
        for j, comp in enumerate(self.components):
            Tj = self.copy_horizon(j, H)
            if Tj == 0:
                continue
            key = (id(comp), Tj)
            if key not in memo:
                memo[key] = acceptance_prob(comp, config, Tj, budget)
            fail = fail * (ONE - memo[key])
        return ONE - fail


def round_robin(components: Sequence[Paca], name: str = "") -> Paca:
    comps = tuple(components)
    m = len(comps)
    alphabet = comps[0].input_alphabet
    for c in comps[1:]:
        if set(c.input_alphabet) != set(alphabet):
            raise ValueError("components must share the input alphabet")

    def make(bit):
        rules = [fast_rule(c.rule(bit)) for c in comps]

        def rule(l, c, r):
            if c.__class__ is str:
                return ("rr", (c,) * m, 0)
            states, j = c[1], c[2]
            new = rules[j](_neighbour(l, 1, j), states[j], _neighbour(r, 1, j))
            return ("rr", states[:j] + (new,) + states[j + 1:], (j + 1) % m)

        return ProcRule(rule, f"round_robin{bit}")

    accepts = [c.is_accepting for c in comps]

    def accepting(q):
        return q.__class__ is tuple and accepts[q[2]](q[1][q[2]])

    horizons = [c.horizon for c in comps]
    H = None
    if all(isinstance(h, int) for h in horizons):
        H = m * max(horizons) + m
    saved = _saved(comps)
    source = None if saved is None else {"builtin": "round_robin", "params": {"components": saved}}
    return Paca(
        alphabet, make(0), make(1), accepting, None, H,
        name or f"round_robin({', '.join(c.name for c in comps)})",
        source, RoundRobinStructure(comps),
    )


@register("round_robin")
def _rr_factory(params: dict) -> Paca:
    from .serialize import automaton_from_json

    return round_robin([automaton_from_json(c) for c in params["components"]])


def copies_one_sided(p, p_target) -> int:
    """Smallest ``m`` with ``p**m <= p_target``."""
    p, p_target = _frac(p), _frac(p_target)
    m = 1
    while p**m > p_target:
        m += 1
    return m


def reduce_error_one_sided(C: Paca, p, p_target, T_in: Optional[int] = None) -> TransformReport:
    p, p_target = _frac(p), _frac(p_target)
    if not (0 < p < 1 and 0 < p_target < 1):
        raise ValueError("error values must lie in (0, 1)")
    if p_target > p:
        raise ValueError("target error must not exceed the input error")
    T = _const_horizon(C, T_in)
    m = copies_one_sided(p, p_target)
    out = round_robin([C] * m, name=f"{C.name}_x{m}")
    derived = m * T + m
    out = out.with_horizon(derived)
    printed = math.ceil(math.log2(float(1 / p_target - 1 / p)))
    notes = [
        f"m = {m} is the least m with p^m <= p_target ({p}^{m} = {p**m})",
        f"the closed-form count ceil(log2(1/p_target - 1/p)) would give {printed}",
        "copy j at its step t is inspected at step m*t + j + 1; step 0 never accepts",
    ]
    return TransformReport(out, derived, {"m": m, "p": p, "p_target": p_target, "T_in": T}, notes)


# ---------------------------------------------------------------------------
# coin-matrix / counter product


class Subsets:
    """Either an explicit list of index tuples or all ``size``-subsets of ``range(m)``."""

    def __init__(self, m: int, size: Optional[int] = None, explicit: Optional[Sequence] = None):
        self.m = m
        self.size = size
        self.explicit = None if explicit is None else tuple(tuple(sorted(s)) for s in explicit)
        if (size is None) == (explicit is None):
            raise ValueError("give either a size or an explicit list")

    def __len__(self):
        return len(self.explicit) if self.explicit is not None else math.comb(self.m, self.size)

    def __getitem__(self, idx: int) -> tuple:
        if self.explicit is not None:
            return self.explicit[idx]
        out = []
        start, left = 0, self.size
        while left:
            for c in range(start, self.m):
                cnt = math.comb(self.m - c - 1, left - 1)
                if idx < cnt:
                    out.append(c)
                    start, left = c + 1, left - 1
                    break
                idx -= cnt
        return tuple(out)

    def to_json(self):
        if self.explicit is not None:
            return {"explicit": [list(s) for s in self.explicit]}
        return {"size": self.size}


@dataclass(frozen=True)
class CounterStructure:
    components: tuple
    subsets: Subsets
    T: int
    fill_steps: int

    @property
    def loop_steps(self) -> int:
        return len(self.subsets) * self.T ** len(self.components)

    def acceptance_prob(self, config, H, budget=None) -> Optional[Dyadic]:
        if H < self.fill_steps + self.loop_steps:
            return None
        memo = {}
        probs = []
        for comp in self.components:
            if id(comp) not in memo:
                memo[id(comp)] = acceptance_prob(comp, config, self.T, budget)
            probs.append(memo[id(comp)])
        m = len(probs)
        if self.subsets.size is not None:
            # P(at least `size` of the independent copies accept)
            dist = [ONE] + [ZERO] * m
            for p in probs:
                q = ONE - p
                new = [ZERO] * (m + 1)
                for k, mass in enumerate(dist):
                    if mass:
                        new[k] = new[k] + mass * q
                        new[k + 1] = new[k + 1] + mass * p
                dist = new
            total = ZERO
            for k in range(self.subsets.size, m + 1):
                total = total + dist[k]
            return total
        total = ZERO
        fams = [set(s) for s in self.subsets.explicit]
        for outcome in itertools.product((0, 1), repeat=m):
            acc = {j for j in range(m) if outcome[j]}
            if any(s <= acc for s in fams):
                w = ONE
                for j in range(m):
                    w = w * (probs[j] if outcome[j] else ONE - probs[j])
                total = total + w
        return total


def counter_product(components: Sequence[Paca], subsets: Subsets, T: int, name: str = "") -> Paca:
    """Fill a ``(T-1) x m`` coin matrix, then run a base-``T`` counter over copy step counts.

    Row ``T-1`` of the usual ``T x m`` matrix is never read (a copy's step
    ``T-1`` is reached with rows ``0 .. T-2``), so it is not stored.
    """
    comps = tuple(components)
    m = len(comps)
    alphabet = comps[0].input_alphabet
    E = (T - 1) * m
    F = max(E, 1)
    M = len(subsets)
    last = (T - 1,) * m
    r0 = [fast_rule(c.rule0) for c in comps]
    r1 = [fast_rule(c.rule1) for c in comps]
    accepts = [c.is_accepting for c in comps]

    def start(x, bits):
        return ("loop", x, bits, (x,) * m, (0,) * m, 0)

    def make(bit):
        def rule(l, c, r):
            if c.__class__ is str:
                if E <= 1:
                    return start(c, (bit,) * E)
                return ("fill", c, (bit,))
            if c[0] == "fill":
                bits = c[2] + (bit,)
                return start(c[1], bits) if len(bits) == E else ("fill", c[1], bits)
            _, x, bits, states, counter, sub = c
            if counter == last:
                if sub == M - 1:
                    return c
                return ("loop", x, bits, (x,) * m, (0,) * m, sub + 1)
            j = 0
            while counter[j] == T - 1:
                j += 1
            d = counter[j]
            rule_j = r1[j] if bits[j * (T - 1) + d] else r0[j]
            new = rule_j(_neighbour(l, 3, j), states[j], _neighbour(r, 3, j))
            return (
                "loop", x, bits,
                (x,) * j + (new,) + states[j + 1:],
                (0,) * j + (d + 1,) + counter[j + 1:],
                sub,
            )

        return ProcRule(rule, f"counter{bit}")

    def accepting(q):
        if q.__class__ is not tuple or q[0] != "loop":
            return False
        states = q[3]
        return all(accepts[j](states[j]) for j in subsets[q[5]])

    saved = _saved(comps)
    source = None if saved is None else {
        "builtin": "counter_product",
        "params": {"components": saved, "subsets": subsets.to_json(), "T": T},
    }
    H = F + M * T**m
    return Paca(
        alphabet, make(0), make(1), accepting, None, H,
        name or f"counter({', '.join(c.name for c in comps)})",
        source, CounterStructure(comps, subsets, T, F),
    )


@register("counter_product")
def _counter_factory(params: dict) -> Paca:
    from .serialize import automaton_from_json

    comps = [automaton_from_json(c) for c in params["components"]]
    sub = params["subsets"]
    subsets = Subsets(len(comps), explicit=sub["explicit"]) if "explicit" in sub else Subsets(len(comps), size=sub["size"])
    return counter_product(comps, subsets, int(params["T"]))


def binomial_tail(m: int, p: Fraction, s: int) -> Fraction:
    """``P[Binomial(m, p) >= s]``, exactly."""
    p = _frac(p)
    return sum(
        (math.comb(m, i) * p**i * (1 - p) ** (m - i) for i in range(s, m + 1)),
        Fraction(0),
    )


def majority_copies(p, p_target, strict: bool = False, limit: int = 100_001) -> int:
    """Smallest odd ``m`` whose majority vote errs with probability at most
    (or, with ``strict``, below) ``p_target``."""
    p, p_target = _frac(p), _frac(p_target)
    for m in range(1, limit, 2):
        tail = binomial_tail(m, p, (m + 1) // 2)
        if tail < p_target or (not strict and tail == p_target):
            return m
    raise ValueError("no copy count found below the search limit")


def reduce_error_two_sided(
    C: Paca,
    p,
    p_target,
    T_in: Optional[int] = None,
    horizon_budget: Optional[int] = None,
    strict: bool = False,
) -> TransformReport:
    p, p_target = _frac(p), _frac(p_target)
    if not 0 < p < Fraction(1, 2) or not 0 < p_target < 1:
        raise ValueError("need 0 < p < 1/2 and 0 < p_target < 1")
    T = _const_horizon(C, T_in)
    m = majority_copies(p, p_target, strict) if p_target < p or (strict and p_target == p) else 1
    s = (m + 1) // 2
    subsets = Subsets(m, size=s)
    E = (T - 1) * m
    derived = max(E, 1) + len(subsets) * T**m
    if horizon_budget is not None and derived > horizon_budget:
        raise BudgetExceeded(f"derived horizon {derived} exceeds {horizon_budget}")
    out = counter_product([C] * m, subsets, T, name=f"{C.name}_maj{m}")
    tail = binomial_tail(m, p, s)
    notes = [
        f"m = {m}: least odd m with P[Bin(m, {p}) >= {s}] = {tail} {'<' if strict else '<='} {p_target}",
        f"{len(subsets)} majority subsets, counter base {T}, {E} coins stored per cell",
        "the matrix omits the last coin row, which no copy ever reads",
    ]
    params = {"m": m, "p": p, "p_target": p_target, "T_in": T, "majority": s,
              "subsets": len(subsets), "achieved_error": tail}
    return TransformReport(out, derived, params, notes)


# ---------------------------------------------------------------------------
# union and intersection


def union_paca(C1: Paca, C2: Paca, errors: Optional[tuple] = None) -> TransformReport:
    """Accept when either component accepts (round-robin over the two).

    With ``errors=(e1, e2)`` (two-sided error bounds of the inputs) each
    component with error at least 1/6 is first amplified below 1/6.
    """
    notes = []
    comps = [C1, C2]
    errs = None
    if errors is not None:
        errs = []
        for i, (C, e) in enumerate(zip(comps, errors)):
            e = _frac(e)
            if e >= Fraction(1, 6):
                rep = reduce_error_two_sided(C, e, Fraction(1, 6), strict=True)
                comps[i] = rep.output
                e = rep.parameters["achieved_error"]
                notes.append(f"component {i + 1} amplified with m = {rep.parameters['m']}")
            errs.append(e)
    out = round_robin(comps, name=f"union({C1.name}, {C2.name})")
    derived = out.horizon
    params = {"components": 2}
    if errs is not None:
        params["component_errors"] = errs
        params["error"] = 1 - (1 - errs[0]) * (1 - errs[1])
    return TransformReport(out, derived, params, notes)


def intersect_paca(C1: Paca, C2: Paca, errors: Optional[tuple] = None) -> TransformReport:
    """Accept when both components accept at the counter's current step pair.

    With ``errors=(e1, e2)`` each component with error above 1/10 is first
    amplified to at most 1/10.
    """
    notes = []
    comps = [C1, C2]
    errs = None
    if errors is not None:
        errs = []
        for i, (C, e) in enumerate(zip(comps, errors)):
            e = _frac(e)
            if e > Fraction(1, 10):
                rep = reduce_error_two_sided(C, e, Fraction(1, 10))
                comps[i] = rep.output
                e = rep.parameters["achieved_error"]
                notes.append(f"component {i + 1} amplified with m = {rep.parameters['m']}")
            errs.append(e)
    T = max(_const_horizon(comps[0]), _const_horizon(comps[1]))
    out = counter_product(comps, Subsets(2, explicit=[(0, 1)]), T, name=f"inter({C1.name}, {C2.name})")
    params = {"components": 2, "T": T}
    if errs is not None:
        params["component_errors"] = errs
        params["error"] = max(errs[0] + errs[1] - errs[0] * errs[1], max(errs))
    return TransformReport(out, out.horizon, params, notes)


# ---------------------------------------------------------------------------
# derandomization


class Derandomizer:
    """Decision procedure of the deterministic automaton built from ``C``.

    After gathering its radius-``r`` neighbourhood a cell decides, for each
    step ``t < T`` of the original automaton, whether its original
    counterpart would be accepting in some run that makes all of its
    coin-dependent neighbours accept too.
    """

    def __init__(self, C: Paca, T: int, M: int, r: int):
        self.C = C
        self.T = T
        self.M = M
        self.r = r
        self.an = LocalAnalyzer(C)
        self.acc = C.is_accepting
        self._decisions: dict = {}
        self._crit: dict = {}
        self._joint: dict = {}

    def window(self, w: str, j: int, t: int) -> Optional[str]:
        """Radius-``t`` window around relative position ``j``, if visible."""
        r = self.r
        lo, hi = r + j - t, r + j + t
        size = len(w)
        if lo < 0:
            if w[0] != BOUNDARY:
                return None
            left = BOUNDARY * (-lo)
            lo = 0
        else:
            left = ""
        if hi >= size:
            if w[-1] != BOUNDARY:
                return None
            right = BOUNDARY * (hi - size + 1)
            hi = size - 1
        else:
            right = ""
        return left + w[lo:hi + 1] + right

    def status(self, window: str, t: int) -> int:
        """0 never accepting, 1 always accepting, 2 critical."""
        key = (window, t)
        got = self._crit.get(key)
        if got is None:
            states = self.an.reachable_states(window, t)
            yes = any(self.acc(q) for q in states)
            no = not all(self.acc(q) for q in states)
            got = 2 if yes and no else (1 if yes else 0)
            self._crit[key] = got
        return got

    def decide(self, w: str, t: int) -> bool:
        key = (w, t)
        got = self._decisions.get(key)
        if got is None:
            got = self._decide(w, t)
            if len(self._decisions) > 500_000:
                self._decisions.clear()
            self._decisions[key] = got
        return got

    def _decide(self, w: str, t: int) -> bool:
        r = self.r
        own = self.status(self.window(w, 0, t), t)
        if own == 0:
            return False
        critical = []
        for j in range(-r, r + 1):
            if w[r + j] == BOUNDARY:
                continue
            win = self.window(w, j, t)
            if win is not None and self.status(win, t) == 2:
                critical.append(j)
        if len(critical) > self.M:
            return False
        if own == 1:
            return True
        block = {0}
        grew = True
        while grew:
            grew = False
            for k in critical:
                if k not in block and any(abs(k - j) <= 2 * (self.T - 1) for j in block):
                    block.add(k)
                    grew = True
        lo, hi = min(block), max(block)
        segment = self.window_span(w, lo - t, hi + t)
        key = (segment, t, tuple(sorted(k - lo for k in block)))
        got = self._joint.get(key)
        if got is None:
            rows = self.an.reachable_rows(segment, t)
            offsets = key[2]
            got = any(all(self.acc(row[k]) for k in offsets) for row in rows)
            self._joint[key] = got
        return got

    def window_span(self, w: str, a: int, b: int) -> str:
        r = self.r
        return "".join(w[r + j] if 0 <= r + j < len(w) else BOUNDARY for j in range(a, b + 1))


def derandomized(C: Paca, T: int, M: int) -> Paca:
    """Deterministic automaton: gather for ``r = (2M-1)(T-1)`` steps, then
    decide for ``T`` steps, then stay rejecting."""
    r = max(1, (2 * M - 1) * (T - 1))
    dec = Derandomizer(C, T, M, r)
    B = BOUNDARY

    def rule(l, c, rr):
        if c.__class__ is str:
            if c == "X":
                return "X"
            win = l + c + rr
            return ("d", win, 0) if r == 1 else ("g", win)
        tag = c[0]
        if tag == "g":
            win = (B if l == B else l[1][0]) + c[1] + (B if rr == B else rr[1][-1])
            return ("d", win, 0) if len(win) == 2 * r + 1 else ("g", win)
        t = c[2] + 1
        return ("d", c[1], t) if t < T else "X"

    def accepting(q):
        return q.__class__ is tuple and q[0] == "d" and dec.decide(q[1], q[2])

    saved = _saved([C])
    source = None if saved is None else {"builtin": "derandomized", "params": {"inner": saved[0], "T": T, "M": M}}
    rule_obj = ProcRule(rule, "derandomized")
    out = Paca(C.input_alphabet, rule_obj, rule_obj, accepting, None, r + T,
               f"{C.name}_det", source)
    out.decider = dec
    return out


@register("derandomized")
def _derand_factory(params: dict) -> Paca:
    from .serialize import automaton_from_json

    return derandomized(automaton_from_json(params["inner"]), int(params["T"]), int(params["M"]))


def calibrate_budget(C: Paca, T: int, n_cal: int) -> tuple[int, dict]:
    """Largest number of critical cells at a possible accepting step, over
    members of length up to ``n_cal``; also returns the per-length maxima."""
    oracle = MembershipOracle(C, one_sided(Fraction(1, 2)), T, positive=True)
    members = enumerate_members(oracle, C.input_alphabet, n_cal)
    per_len = max_critical_on_members(C, members, T, oracle.analyzer)
    return max(per_len.values(), default=0), per_len


def derandomize_one_sided(
    C: Paca, T: Optional[int] = None, budget_M: Optional[int] = None, n_cal: Optional[int] = 10
) -> TransformReport:
    T = _const_horizon(C, T)
    notes = []
    params = {"T": T}
    if budget_M is None:
        if not n_cal:
            raise ValueError("either a budget M or a calibration length is required")
        M_found, per_len = calibrate_budget(C, T, n_cal)
        M = max(1, M_found)
        params["calibration"] = {"n_cal": n_cal, "max_critical": M_found, "per_length": per_len}
        notes.append(
            f"M = {M} calibrated on members up to length {n_cal}; beyond that length "
            "correctness relies on the critical-cell count staying bounded"
        )
    else:
        M = budget_M
    r = max(1, (2 * M - 1) * (T - 1))
    out = derandomized(C, T, M)
    params.update({"M": M, "r": r})
    notes.append(f"r = (2M-1)(T-1) = {r}; gathering ends at step {r}, decisions at steps {r}..{r + T - 1}")
    return TransformReport(out, r + T, params, notes)


# ---------------------------------------------------------------------------
# weighted windows to automata


def _log_weights(spec: LLinSpec) -> dict:
    if spec.log_form:
        return dict(spec.weights)
    out = {}
    for m, v in spec.weights.items():
        if isinstance(v, LogWeight):
            out[m] = v
        elif v.denominator != 1:
            raise ValueError("the core construction needs integer or log-form weights; normalise first")
    if out:
        raise ValueError("mixed weight forms are not supported")
    K = max(1, max(int(v) for v in spec.weights.values()))
    return {m: LogWeight(K, (1 << (K - int(v))) - 1) for m, v in spec.weights.items()}


def llin_core_paca(spec: LLinSpec) -> Paca:
    """Cells gather a radius-``k`` window while tossing ``k`` coins; at step
    ``k`` the cell owning a full window ``m`` accepts iff its coins, read as a
    binary number, are at most ``n_m``, so it accepts with probability
    ``(n_m + 1) / 2**k``.  Cells that see a border also check the prefix or
    suffix.  Accepting happens only at step ``k``; the threshold plays no role."""
    weights = _log_weights(spec)
    ell = spec.ell
    K = max(w.k for w in weights.values())
    k = max(K, (ell - 1 + 1) // 2, 1)
    limits = {m: ((w.n + 1) << (k - w.k)) - 1 for m, w in weights.items()}
    h = (ell - 1) // 2
    size = 2 * k + 1
    pre, suf = spec.prefixes, spec.suffixes
    B = BOUNDARY

    def affix_ok(win: str) -> bool:
        left = win[:k]
        if B in left:
            start = left.rindex(B) + 1
            seg = win[start:]
            if B in seg:
                p = seg[:seg.index(B)][: ell - 1]
            elif len(seg) >= ell - 1:
                p = seg[: ell - 1]
            else:
                p = None
            if p is not None and p not in pre:
                return False
        right = win[k + 1:]
        if B in right:
            end = k + 1 + right.index(B)
            seg = win[:end]
            if B in seg:
                s = seg[seg.rindex(B) + 1:]
                s = s[len(s) - (ell - 1):] if ell > 1 else ""
            elif len(seg) >= ell - 1:
                s = seg[len(seg) - (ell - 1):] if ell > 1 else ""
            else:
                s = None
            if s is not None and s not in suf:
                return False
        return True

    def decide(win: str, bits: str) -> bool:
        m = win[k - h: k - h + ell]
        if B not in m and int(bits, 2) > limits[m]:
            return False
        return affix_ok(win)

    def make(bit):
        b = "1" if bit else "0"

        def rule(l, c, r):
            if c.__class__ is str:
                if len(c) > 1:
                    return "END"
                win, bits = l + c + r, b
            else:
                win = (B if l == B else l[1][0]) + c[1] + (B if r == B else r[1][-1])
                bits = c[2] + b
            if len(win) == size:
                return "ACC" if decide(win, bits) else "REJ"
            return ("g", win, bits)

        return ProcRule(rule, f"llin_core{bit}")

    source = {"builtin": "llin_core", "params": {"spec": lang_to_json(spec)}}
    out = Paca(spec.alphabet, make(0), make(1), lambda q: q == "ACC", None, k + 1,
               "llin_core", source)
    out.core_k = k
    out.core_limits = limits
    return out


@register("llin_core")
def _core_factory(params: dict) -> Paca:
    return llin_core_paca(lang_from_json(params["spec"]))


def threshold_vote(a, b, target) -> tuple[int, int]:
    """Smallest ``m`` (then smallest ``s``) such that "at least ``s`` of ``m``
    copies accept" accepts a copy-probability ``>= a`` event with failure at
    most ``target`` and a ``<= b`` event with probability at most ``target``."""
    a, b, target = _frac(a), _frac(b), _frac(target)
    if not b < a:
        raise ValueError("need b < a")
    m = 1
    while True:
        for s in range(0, m + 1):
            if 1 - binomial_tail(m, a, s) <= target and binomial_tail(m, b, s) <= target:
                return m, s
        m += 1


def _integer_weights(spec: LLinSpec) -> bool:
    return not spec.log_form and all(v.denominator == 1 for v in spec.weights.values())


def paca_from_llin(spec: LLinSpec, target_error=Fraction(1, 3)) -> TransformReport:
    """Build the coin-threshold automaton, then amplify by voting.

    Integer weights already give dyadic probabilities ``2**-f(w)``; the core
    is built from them directly and members (``f <= theta``) are separated
    from non-members by a factor of two, which an "at least s of m" vote
    turns into the target error.  Other weights are first normalised to
    log form with threshold 1, and a majority vote is used.
    """
    target = _frac(target_error)
    norm: Normalization = normalize_llin(spec)
    params = {"k": norm.k, "k_bound": norm.k_bound, "scale": norm.scale, "epsilon": norm.epsilon}
    if _integer_weights(spec):
        core = llin_core_paca(spec)
        powers = {m: Fraction(1, 2 ** int(v)) for m, v in spec.weights.items()}
        lo, hi = _power_extremes(spec.weights, spec.theta, powers)
        m, s = threshold_vote(lo, hi, target)
        T = core.horizon
        subsets = Subsets(m, size=s)
        derived = max((T - 1) * m, 1) + len(subsets) * T**m
        out = counter_product([core] * m, subsets, T, name=f"llin_vote{m}")
        achieved = max(1 - binomial_tail(m, lo, s), binomial_tail(m, hi, s))
        params.update({
            "route": "integer", "m": m, "votes_needed": s, "subsets": len(subsets),
            "member_prob_min": lo, "nonmember_prob_max": hi,
            "pre_amplification_error": max(1 - lo, hi), "achieved_error": achieved,
            "core_k": core.core_k,
        })
        notes = [
            "integer weights: the core accepts with probability exactly 2^-f(w), no rounding needed",
            f"members accept w.p. >= {lo}, non-members w.p. <= {hi}",
            f"accept when at least {s} of {m} copies accept (error {achieved} <= {target})",
        ]
    else:
        core = llin_core_paca(norm.spec)
        p = norm.error
        rep = reduce_error_two_sided(core, p, target)
        out, derived = rep.output, rep.derived_horizon
        params.update(rep.parameters)
        params.update({"route": "normalized", "core_k": core.core_k, "pre_amplification_error": p,
                       "member_prob_min": norm.min_member_prob,
                       "nonmember_prob_max": norm.max_nonmember_prob})
        notes = [
            f"normalised with k = {norm.k} (the rounding inequality alone would use k = {norm.k_bound})",
            f"single-trial error {p}: members accept w.p. >= {norm.min_member_prob}, "
            f"non-members w.p. <= {norm.max_nonmember_prob}",
            *rep.notes,
        ]
    out.pre_amplification = core
    out.normalization = norm
    return TransformReport(out, derived, params, notes)


# ---------------------------------------------------------------------------
# many rules from two


@dataclass
class MultiRulePaca:
    """An automaton with ``2**k`` local rules, one chosen uniformly per cell and step."""

    input_alphabet: tuple
    rules: tuple
    accepting: Callable
    horizon: Optional[int]
    name: str = ""

    @property
    def k(self) -> int:
        k = len(self.rules).bit_length() - 1
        if len(self.rules) != 1 << k or k < 1:
            raise ValueError("need 2**k rules with k >= 1")
        return k


def _virtual(q):
    return q if q.__class__ is str else q[1]


def expand_rules(C: MultiRulePaca, source: Optional[dict] = None) -> Paca:
    """Each virtual step takes ``k`` real steps: ``k-1`` steps store coins,
    the ``k``-th applies rule number ``(stored bits, current bit)`` read in
    binary.  Virtual step ``t`` is real step ``k*t``."""
    k = C.k
    rules = [fast_rule(r) for r in C.rules]
    acc = C.accepting

    def make(bit):
        def rule(l, c, r):
            bits = () if c.__class__ is str else c[2]
            v = _virtual(c)
            bits = bits + (bit,)
            if len(bits) < k:
                return ("x", v, bits)
            idx = int("".join(map(str, bits)), 2)
            lv = BOUNDARY if l == BOUNDARY else _virtual(l)
            rv = BOUNDARY if r == BOUNDARY else _virtual(r)
            return ("x", rules[idx](lv, v, rv), ())

        return ProcRule(rule, f"expanded{bit}")

    def accepting(q):
        return acc(_virtual(q))

    H = None if C.horizon is None else k * C.horizon
    return Paca(C.input_alphabet, make(0), make(1), accepting, None, H,
                f"{C.name}_expanded", source)


@register("expanded")
def _expanded_factory(params: dict) -> Paca:
    from .serialize import multi_rule_from_json

    source = {"builtin": "expanded", "params": params}
    return expand_rules(multi_rule_from_json(params["virtual"]), source)
