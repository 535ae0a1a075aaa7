"""Subregular languages: strictly local, threshold and weighted-window tests.

Words are nonempty strings over a declared alphabet of single characters.
``|w|_m`` counts overlapping occurrences of the infix ``m``; ``p_k(w)`` is the
prefix of length ``k`` (or ``w`` itself when shorter) and ``s_k(w)`` the
matching suffix.

A locally linear spec (:class:`LLinSpec`) accepts ``w`` when its short prefix
and suffix lie in the allowed sets and the weighted infix count
``f(w) = sum_m alpha(m) * |w|_m`` stays at or below the threshold.  Weights are
exact rationals, or, after normalisation, pairs ``(k, n)`` standing for
``k - log2(n + 1)`` so that ``2**-weight`` is a dyadic rational.  All
comparisons of such sums are done with integer powers.
"""

from __future__ import annotations

import itertools
import math
import warnings
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .core import AlphabetError, FormatError
from .dyadic import Dyadic


# ---------------------------------------------------------------------------
# words


def check_word(alphabet: Sequence[str], w: str) -> None:
    if not w:
        raise AlphabetError("the empty word is excluded")
    bad = set(w) - set(alphabet)
    if bad:
        raise AlphabetError(f"symbols {sorted(bad)} not in alphabet {''.join(alphabet)}")


def prefix(w: str, k: int) -> str:
    return w[:k]


def suffix(w: str, k: int) -> str:
    return w[len(w) - k:] if k < len(w) else w


def infixes(w: str, ell: int) -> list[str]:
    """All length-``ell`` infixes, overlapping, in order."""
    return [w[i:i + ell] for i in range(len(w) - ell + 1)]


def count_infix(w: str, m: str) -> int:
    """Overlapping occurrences of ``m`` in ``w``."""
    return sum(1 for i in range(len(w) - len(m) + 1) if w.startswith(m, i))


def short_words(alphabet: Sequence[str], max_len: int) -> list[str]:
    """Every word of length ``0 .. max_len`` (the empty word included)."""
    out = [""]
    for k in range(1, max_len + 1):
        out.extend("".join(t) for t in itertools.product(sorted(alphabet), repeat=k))
    return out


def all_words(alphabet: Sequence[str], length: int) -> list[str]:
    return ["".join(t) for t in itertools.product(sorted(alphabet), repeat=length)]


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, Mapping):
        return Fraction(int(value["num"]), int(value.get("den", 1)))
    raise FormatError(f"cannot read {value!r} as a rational")


def _clean_affixes(alphabet, ell, given, what) -> frozenset:
    if given is None:
        return frozenset(short_words(alphabet, ell - 1))
    out = set()
    for u in given:
        if len(u) > ell - 1:
            warnings.warn(f"dropping {what} entry {u!r}: longer than {ell - 1}", stacklevel=3)
            continue
        if set(u) - set(alphabet):
            raise AlphabetError(f"{what} entry {u!r} uses symbols outside the alphabet")
        out.add(u)
    return frozenset(out)


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class LogWeight:
    """The weight ``k - log2(n + 1)``; its power ``2**-weight`` is ``(n+1)/2**k``."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 0 or self.n < 0 or self.n + 1 > (1 << self.k):
            raise ValueError(f"invalid log weight k={self.k}, n={self.n}")

    def power(self) -> Dyadic:
        return Dyadic(self.n + 1, self.k)

    def __float__(self):
        return self.k - math.log2(self.n + 1)


Weight = Union[Fraction, LogWeight]


@dataclass(frozen=True)
class WeightSum:
    """An exact value ``rational + K - log2(P)``."""

    rational: Fraction = Fraction(0)
    K: int = 0
    P: int = 1

    def add(self, weight: Weight, count: int = 1) -> "WeightSum":
        if isinstance(weight, LogWeight):
            return WeightSum(self.rational, self.K + weight.k * count, self.P * (weight.n + 1) ** count)
        return WeightSum(self.rational + weight * count, self.K, self.P)

    def compare(self, q) -> int:
        """Sign of ``self - q`` (``-1``, ``0`` or ``1``), computed exactly."""
        d = self.rational + self.K - _fraction(q)
        # self - q = d - log2(P): compare 2**d with P
        if self.P == 1:
            return (d > 0) - (d < 0)
        lhs = Fraction(2) ** d.numerator
        rhs = Fraction(self.P) ** d.denominator
        return (lhs > rhs) - (lhs < rhs)

    def __le__(self, q):
        return self.compare(q) <= 0

    def __float__(self):
        return float(self.rational) + self.K - math.log2(self.P)


# ---------------------------------------------------------------------------
# atoms


class Atom:
    alphabet: tuple

    def contains(self, w: str) -> bool:
        raise NotImplementedError

    def __call__(self, w: str) -> bool:
        check_word(self.alphabet, w)
        return self.contains(w)


@dataclass(frozen=True)
class LLinSpec(Atom):
    """Prefix set, suffix set, window weights and a threshold."""

    alphabet: tuple
    ell: int
    prefixes: frozenset
    suffixes: frozenset
    weights: Mapping
    theta: Fraction
    gap: Optional[Fraction] = None

    @classmethod
    def build(
        cls,
        alphabet: Iterable[str],
        ell: int,
        weights: Mapping[str, object],
        theta,
        prefixes: Optional[Iterable[str]] = None,
        suffixes: Optional[Iterable[str]] = None,
        gap=None,
    ) -> "LLinSpec":
        """Missing windows get weight 0; missing affix sets mean "everything"."""
        alphabet = tuple(sorted(alphabet))
        if ell < 1:
            raise ValueError("window length must be at least 1")
        full = {}
        for m in all_words(alphabet, ell):
            full[m] = Fraction(0)
        for m, v in weights.items():
            if len(m) != ell or set(m) - set(alphabet):
                raise AlphabetError(f"weight key {m!r} is not a window of length {ell}")
            full[m] = v if isinstance(v, LogWeight) else _fraction(v)
            if not isinstance(full[m], LogWeight) and full[m] < 0:
                raise ValueError("weights must be nonnegative")
        theta = _fraction(theta)
        if theta < 0:
            raise ValueError("threshold must be nonnegative")
        return cls(
            alphabet,
            ell,
            _clean_affixes(alphabet, ell, prefixes, "prefix"),
            _clean_affixes(alphabet, ell, suffixes, "suffix"),
            dict(sorted(full.items())),
            theta,
            None if gap is None else _fraction(gap),
        )

    @property
    def log_form(self) -> bool:
        return all(isinstance(v, LogWeight) for v in self.weights.values())

    def affixes_ok(self, w: str) -> bool:
        k = self.ell - 1
        return prefix(w, k) in self.prefixes and suffix(w, k) in self.suffixes

    def value(self, w: str) -> WeightSum:
        total = WeightSum()
        for m, c in Counter(infixes(w, self.ell)).items():
            total = total.add(self.weights[m], c)
        return total

    def contains(self, w: str) -> bool:
        return self.affixes_ok(w) and self.value(w) <= self.theta

    def with_weights(self, weights: Mapping, theta=None, gap=None) -> "LLinSpec":
        return LLinSpec(
            self.alphabet, self.ell, self.prefixes, self.suffixes, dict(weights),
            self.theta if theta is None else _fraction(theta), gap,
        )


@dataclass(frozen=True)
class SltSpec(Atom):
    alphabet: tuple
    ell: int
    prefixes: frozenset
    suffixes: frozenset
    allowed: frozenset

    @classmethod
    def build(cls, alphabet, ell, allowed, prefixes=None, suffixes=None) -> "SltSpec":
        alphabet = tuple(sorted(alphabet))
        allowed = frozenset(allowed)
        for m in allowed:
            if len(m) != ell or set(m) - set(alphabet):
                raise AlphabetError(f"allowed infix {m!r} is not a window of length {ell}")
        return cls(
            alphabet, ell,
            _clean_affixes(alphabet, ell, prefixes, "prefix"),
            _clean_affixes(alphabet, ell, suffixes, "suffix"),
            allowed,
        )

    def contains(self, w: str) -> bool:
        k = self.ell - 1
        if prefix(w, k) not in self.prefixes or suffix(w, k) not in self.suffixes:
            return False
        return all(m in self.allowed for m in infixes(w, self.ell))

    def as_llin(self) -> LLinSpec:
        """The same language as a weighted spec: forbidden windows weigh 1, threshold 1/2."""
        weights = {m: Fraction(0 if m in self.allowed else 1) for m in all_words(self.alphabet, self.ell)}
        return LLinSpec(self.alphabet, self.ell, self.prefixes, self.suffixes, weights, Fraction(1, 2))


@dataclass(frozen=True)
class Threshold(Atom):
    """Words with at most ``theta`` occurrences of ``m``."""

    alphabet: tuple
    m: str
    theta: Fraction

    def contains(self, w: str) -> bool:
        return count_infix(w, self.m) <= self.theta


@dataclass(frozen=True)
class PrefixSet(Atom):
    """Words whose prefix of length ``k`` (or the word, if shorter) is in ``allowed``."""

    alphabet: tuple
    k: int
    allowed: frozenset

    def contains(self, w: str) -> bool:
        return prefix(w, self.k) in self.allowed


@dataclass(frozen=True)
class SuffixSet(Atom):
    alphabet: tuple
    k: int
    allowed: frozenset

    def contains(self, w: str) -> bool:
        return suffix(w, self.k) in self.allowed


# ---------------------------------------------------------------------------
# boolean expressions


@dataclass(frozen=True)
class Union_(Atom):
    args: tuple

    @property
    def alphabet(self):
        return self.args[0].alphabet

    def contains(self, w):
        return any(a.contains(w) for a in self.args)


@dataclass(frozen=True)
class Inter(Atom):
    args: tuple

    @property
    def alphabet(self):
        return self.args[0].alphabet

    def contains(self, w):
        return all(a.contains(w) for a in self.args)


@dataclass(frozen=True)
class Not(Atom):
    """Complement with respect to the nonempty words over the alphabet."""

    arg: Atom

    @property
    def alphabet(self):
        return self.arg.alphabet

    def contains(self, w):
        return not self.arg.contains(w)


LangExpr = Atom


def union(*args: Atom) -> Atom:
    _same_alphabet(args)
    return Union_(tuple(args))


def inter(*args: Atom) -> Atom:
    _same_alphabet(args)
    return Inter(tuple(args))


def complement(arg: Atom) -> Atom:
    return Not(arg)


def _same_alphabet(args) -> None:
    if not args:
        raise ValueError("need at least one operand")
    first = tuple(args[0].alphabet)
    for a in args[1:]:
        if tuple(a.alphabet) != first:
            raise AlphabetError("operands use different alphabets")


def eval_expr(expr: Atom, w: str) -> bool:
    check_word(expr.alphabet, w)
    return expr.contains(w)


def llin_membership(spec: LLinSpec, w: str) -> bool:
    check_word(spec.alphabet, w)
    return spec.contains(w)


def slt_membership(spec: SltSpec, w: str) -> bool:
    check_word(spec.alphabet, w)
    return spec.contains(w)


# ---------------------------------------------------------------------------
# scanner


class LLinScanner:
    """Single pass over the word with a sliding window and one saturating counter.

    The counter stops growing once it exceeds the threshold, so its value
    never needs more than "at most theta" or "over".
    """

    def __init__(self, spec: LLinSpec):
        self.spec = spec
        self.window: deque = deque(maxlen=spec.ell)
        self.tail: deque = deque(maxlen=max(spec.ell - 1, 0))
        self.head: list[str] = []
        self.counter = WeightSum()
        self.saturated = False
        self.length = 0

    def feed(self, symbol: str) -> None:
        if symbol not in self.spec.alphabet:
            raise AlphabetError(f"symbol {symbol!r} not in alphabet")
        self.length += 1
        if len(self.head) < self.spec.ell - 1:
            self.head.append(symbol)
        if self.spec.ell > 1:
            self.tail.append(symbol)
        self.window.append(symbol)
        if not self.saturated and len(self.window) == self.spec.ell:
            self.counter = self.counter.add(self.spec.weights["".join(self.window)])
            if self.counter.compare(self.spec.theta) > 0:
                self.saturated = True

    def result(self) -> bool:
        if self.length == 0:
            raise AlphabetError("the empty word is excluded")
        s = self.spec
        if "".join(self.head) not in s.prefixes or "".join(self.tail) not in s.suffixes:
            return False
        return not self.saturated


def scanner_llin(spec: LLinSpec) -> Callable[[str], bool]:
    """A recognizer that reads the word once, left to right."""

    def recognize(w: str) -> bool:
        sc = LLinScanner(spec)
        for ch in w:
            sc.feed(ch)
        return sc.result()

    return recognize


# ---------------------------------------------------------------------------
# decomposition into thresholds and affix sets


def llin_to_ltt(spec: LLinSpec) -> Atom:
    """Rewrite a rational-weight spec as a Boolean combination of thresholds
    and affix sets, peeling off one positive-weight window at a time:
    ``L = union_i (Th(mu, i) and L_i) minus Th(mu, i-1)`` where ``L_i`` zeroes
    the weight of ``mu`` and lowers the threshold by ``i * alpha(mu)``."""
    if spec.log_form or any(isinstance(v, LogWeight) for v in spec.weights.values()):
        raise ValueError("decomposition needs rational weights")
    positive = [m for m, v in spec.weights.items() if v > 0]
    if not positive:
        k = spec.ell - 1
        return inter(
            PrefixSet(spec.alphabet, k, spec.prefixes),
            SuffixSet(spec.alphabet, k, spec.suffixes),
        )
    mu = positive[0]
    a = spec.weights[mu]
    top = math.floor(spec.theta / a)
    parts = []
    for i in range(top + 1):
        rest = dict(spec.weights)
        rest[mu] = Fraction(0)
        sub = llin_to_ltt(spec.with_weights(rest, spec.theta - i * a))
        piece = [Threshold(spec.alphabet, mu, Fraction(i)), sub]
        if i > 0:
            piece.append(complement(Threshold(spec.alphabet, mu, Fraction(i - 1))))
        parts.append(inter(*piece))
    return union(*parts)


# ---------------------------------------------------------------------------
# normalisation


def _iroot_floor(N: int, b: int) -> int:
    """Largest ``x >= 0`` with ``x**b <= N``."""
    if N < 1:
        return 0
    if b == 1:
        return N
    x = 1 << -(-N.bit_length() // b)
    while True:
        y = ((b - 1) * x + N // x ** (b - 1)) // b
        if y >= x:
            break
        x = y
    while x ** b > N:
        x -= 1
    while (x + 1) ** b <= N:
        x += 1
    return x


def round_to_log(alpha: Fraction, k: int) -> LogWeight:
    """Smallest weight ``k - log2(n+1) >= alpha``, i.e. the largest ``n`` with
    ``(n+1)/2**k <= 2**-alpha``."""
    a, b = alpha.numerator, alpha.denominator
    e = k * b - a
    if e < 0:
        raise ValueError(f"weight {alpha} exceeds k={k}")
    x = _iroot_floor(1 << e, b)
    return LogWeight(k, x - 1)


def _member_values(weights: Mapping[str, Fraction], theta: Fraction) -> set:
    """Every value ``f`` of a count vector with ``f <= theta``."""
    steps = sorted({v for v in weights.values() if v > 0})
    seen = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for f in frontier:
            for a in steps:
                g = f + a
                if g <= theta and g not in seen:
                    seen.add(g)
                    nxt.append(g)
        frontier = nxt
    return seen


def _power_extremes(weights, theta, powers):
    """For member count vectors, the smallest product of ``powers``; for
    minimal non-member vectors, the largest.  Products are over windows with
    positive weight (zero weights contribute factor ``powers[m]`` too, but
    any number of them may occur, so only their supremum 1 or infimum 0
    matters; callers guarantee zero-weight windows have power 1)."""
    positive = [(weights[m], powers[m]) for m in weights if weights[m] > 0]
    lo = {Fraction(0): Fraction(1)}
    hi = {Fraction(0): Fraction(1)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for f in frontier:
            for a, q in positive:
                g = f + a
                if g > theta:
                    continue
                new_lo, new_hi = lo[f] * q, hi[f] * q
                changed = False
                if g not in lo:
                    lo[g], hi[g] = new_lo, new_hi
                    changed = True
                else:
                    if new_lo < lo[g]:
                        lo[g] = new_lo
                        changed = True
                    if new_hi > hi[g]:
                        hi[g] = new_hi
                        changed = True
                if changed:
                    nxt.append(g)
        frontier = nxt
    min_member = min(lo.values())
    max_non = Fraction(0)
    for f, q in hi.items():
        for a, p in positive:
            if f + a > theta:
                max_non = max(max_non, q * p)
    return min_member, max_non


@dataclass(frozen=True)
class Normalization:
    spec: LLinSpec            # log-form weights, threshold 1, certified gap
    epsilon: Fraction         # f' < 1 - eps on members, f' > 1 + eps otherwise
    scale: Fraction           # the divisor r
    k: int                    # chosen exponent
    k_bound: int              # exponent the textbook inequality would pick
    min_member_prob: Fraction  # smallest 2**-f' over member count vectors
    max_nonmember_prob: Fraction

    @property
    def error(self) -> Fraction:
        """Worst-case error of one "accept with probability 2**-f'" trial."""
        return max(1 - self.min_member_prob, self.max_nonmember_prob)


def _k_bound(max_alpha: Fraction, min_alpha: Fraction, eps: Fraction, sigma: int, ell: int) -> int:
    k = max(1, math.floor(2 * max_alpha) + 1)
    limit = float(min_alpha * eps) / (2 * sigma**ell)
    while math.log2(2 ** (k / 2) + 1) - k / 2 > limit:
        k += 1
    return k


def normalize_llin(spec: LLinSpec) -> Normalization:
    """Rescale to threshold 1 and round the weights to the form ``k - log2(n+1)``.

    The rescaling divisor is the midpoint between the largest attainable
    value at or below the threshold and the smallest attainable value above
    it (values range over all count vectors, a superset of the values of
    actual words).  The exponent ``k`` is the smallest one for which the
    rounded weights still keep every member strictly below ``1 - eps``; the
    textbook choice is reported alongside as ``k_bound``.
    """
    if spec.log_form:
        if spec.theta == 1 and spec.gap is not None:
            ks = {v.k for v in spec.weights.values()}
            k = max(ks)
            powers = {m: v.power().to_fraction() for m, v in spec.weights.items()}
            return Normalization(spec, spec.gap, Fraction(1), k, k, *_log_extremes(spec, powers))
        raise ValueError("normalisation needs rational weights")
    weights = spec.weights
    positive = {m: v for m, v in weights.items() if v > 0}
    if not positive:
        logw = {m: LogWeight(1, 1) for m in weights}
        out = spec.with_weights(logw, 1, Fraction(1))
        return Normalization(out, Fraction(1), Fraction(1), 1, 1, Fraction(1), Fraction(0))
    values = _member_values(weights, spec.theta)
    top = max(values)
    above = min(f + a for f in values for a in positive.values() if f + a > spec.theta)
    r = (top + above) / 2
    scaled = {m: v / r for m, v in weights.items()}
    g = (above - top) / (2 * r)
    eps = g / 2
    max_a = max(scaled.values())
    min_a = min(v for v in scaled.values() if v > 0)
    k_bound = _k_bound(max_a, min_a, eps, len(spec.alphabet), spec.ell)
    k = max(1, math.ceil(max_a))
    limit = 1 - eps
    while True:
        logw = {m: round_to_log(v, k) for m, v in scaled.items()}
        powers = {m: w.power().to_fraction() for m, w in logw.items()}
        lo, hi = _power_extremes(scaled, Fraction(1), powers)
        # members need f' < 1 - eps, i.e. lo > 2**-(1-eps)
        u, v = limit.numerator, limit.denominator
        if lo ** v * Fraction(2) ** u > 1:
            break
        k += 1
        if k > k_bound + 64:
            raise ValueError("rounding search did not terminate")
    out = spec.with_weights(logw, 1, eps)
    return Normalization(out, eps, r, k, k_bound, lo, hi)


def _log_extremes(spec: LLinSpec, powers) -> tuple[Fraction, Fraction]:
    """Extreme member/non-member probabilities for an already normalised spec."""
    # weights k - log2(n+1) are irrational in general; enumerate by products.
    positive = [(m, powers[m]) for m in spec.weights if powers[m] < 1]
    bound = Fraction(1, 2) ** 1  # members satisfy product >= 2**-1
    lo = Fraction(1)
    hi = Fraction(0)
    seen = {Fraction(1)}
    frontier = [Fraction(1)]
    while frontier:
        nxt = []
        for q in frontier:
            lo = min(lo, q)
            for _, p in positive:
                g = q * p
                if g >= bound:
                    if g not in seen:
                        seen.add(g)
                        nxt.append(g)
                else:
                    hi = max(hi, g)
        frontier = nxt
    return lo, hi


# ---------------------------------------------------------------------------
# bounded equivalence


@dataclass(frozen=True)
class Equivalence:
    equal: bool
    counterexample: Optional[str] = None
    checked: int = 0


def bounded_equivalence(
    a: Callable[[str], bool], b: Callable[[str], bool], alphabet: Sequence[str], n_max: int
) -> Equivalence:
    """Compare two membership oracles on every word of length ``1 .. n_max``;
    the first disagreement in length-lexicographic order is returned."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    checked = 0
    for n in range(1, n_max + 1):
        for tup in itertools.product(sorted(alphabet), repeat=n):
            w = "".join(tup)
            checked += 1
            if bool(a(w)) != bool(b(w)):
                return Equivalence(False, w, checked)
    return Equivalence(True, None, checked)


# ---------------------------------------------------------------------------
# JSON


def _frac_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def lang_to_json(x: Atom) -> dict:
    if isinstance(x, LLinSpec):
        ws = []
        for m, v in x.weights.items():
            if isinstance(v, LogWeight):
                ws.append({"m": m, "k": v.k, "n": v.n})
            else:
                ws.append({"m": m, **_frac_json(v)})
        out = {
            "kind": "llin",
            "alphabet": list(x.alphabet),
            "ell": x.ell,
            "prefixes": sorted(x.prefixes),
            "suffixes": sorted(x.suffixes),
            "weights": ws,
            "theta": _frac_json(x.theta),
        }
        if x.gap is not None:
            out["gap"] = _frac_json(x.gap)
        return out
    if isinstance(x, SltSpec):
        return {
            "kind": "slt", "alphabet": list(x.alphabet), "ell": x.ell,
            "prefixes": sorted(x.prefixes), "suffixes": sorted(x.suffixes),
            "allowed": sorted(x.allowed),
        }
    if isinstance(x, Threshold):
        return {"kind": "th", "alphabet": list(x.alphabet), "m": x.m, "theta": _frac_json(x.theta)}
    if isinstance(x, PrefixSet):
        return {"kind": "prefix", "alphabet": list(x.alphabet), "k": x.k, "allowed": sorted(x.allowed)}
    if isinstance(x, SuffixSet):
        return {"kind": "suffix", "alphabet": list(x.alphabet), "k": x.k, "allowed": sorted(x.allowed)}
    if isinstance(x, Union_):
        return {"kind": "expr", "op": "union", "args": [lang_to_json(a) for a in x.args]}
    if isinstance(x, Inter):
        return {"kind": "expr", "op": "inter", "args": [lang_to_json(a) for a in x.args]}
    if isinstance(x, Not):
        return {"kind": "expr", "op": "not", "args": [lang_to_json(x.arg)]}
    raise TypeError(f"cannot serialise {type(x).__name__}")


def lang_from_json(data: Mapping) -> Atom:
    try:
        kind = data["kind"]
        if kind == "expr":
            args = [lang_from_json(a) for a in data["args"]]
            op = data["op"]
            if op == "union":
                return union(*args)
            if op == "inter":
                return inter(*args)
            if op == "not":
                if len(args) != 1:
                    raise FormatError("complement takes one operand")
                return complement(args[0])
            raise FormatError(f"unknown operator {op!r}")
        alphabet = tuple(sorted(data["alphabet"]))
        if kind == "llin":
            weights = {}
            for entry in data.get("weights", []):
                if "k" in entry:
                    weights[entry["m"]] = LogWeight(int(entry["k"]), int(entry["n"]))
                else:
                    weights[entry["m"]] = Fraction(int(entry["num"]), int(entry.get("den", 1)))
            return LLinSpec.build(
                alphabet, int(data["ell"]), weights, _fraction(data["theta"]),
                data.get("prefixes"), data.get("suffixes"), data.get("gap") and _fraction(data["gap"]),
            )
        if kind == "slt":
            return SltSpec.build(alphabet, int(data["ell"]), data["allowed"], data.get("prefixes"), data.get("suffixes"))
        if kind == "th":
            return Threshold(alphabet, data["m"], _fraction(data["theta"]))
        if kind == "prefix":
            return PrefixSet(alphabet, int(data["k"]), frozenset(data["allowed"]))
        if kind == "suffix":
            return SuffixSet(alphabet, int(data["k"]), frozenset(data["allowed"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (FormatError, AlphabetError)):
            raise
        raise FormatError(f"malformed language spec: {exc}") from exc
    raise FormatError(f"unknown language kind {data.get('kind')!r}")
