"""Named fixtures: concrete automata and language specs with known exact values.

Each :class:`Fixture` carries an ``expected`` table of ``(input, value)``
pairs; values are exact probabilities for automata and booleans for
languages.  Automaton fixtures also record their error contract, the
language they recognise and the largest number of critical cells seen at
an accepting step of a member (``critical_constant``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .core import BOUNDARY, FormatError, Paca, ProcRule
from .dyadic import Dyadic
from .langs import (
    Atom,
    LLinSpec,
    SltSpec,
    Threshold,
    complement,
    infixes,
    prefix,
    suffix,
    union,
)
from .prob import ErrorMode, one_sided, two_sided
from .registry import register
from .transforms import MultiRulePaca, expand_rules


@dataclass
class Fixture:
    name: str
    artifact: object
    expected: list = field(default_factory=list)
    description: str = ""
    mode: Optional[ErrorMode] = None
    language: Optional[Callable[[str], bool]] = None
    critical_constant: Optional[int] = None
    horizon: Optional[int] = None
    members: Optional[Callable[[int], list]] = None   # all members of one length


def _at_most_one_one(n: int) -> list:
    return ["0" * n] + ["0" * i + "1" + "0" * (n - 1 - i) for i in range(n)]


def _no_11(n: int) -> list:
    out = [""]
    for _ in range(n):
        out = [w + s for w in out for s in "01" if not (s == "1" and w.endswith("1"))]
    return out


def _leading_one(n: int) -> list:
    return ["0" * n, "1" + "0" * (n - 1)]


def _four_block_words(n: int) -> list:
    out = []
    for l in range(2, n + 1):
        for m in range(2, n - l + 1):
            if l < 3 and m < 3:
                continue
            for k in range(0, n - l - m + 1):
                out.append("0" * k + "1" * l + "2" * m + "3" * (n - k - l - m))
    return sorted(out)


D = Dyadic.from_fraction


# ---------------------------------------------------------------------------
# at most one 1, two-sided


def _two_coin_rule(bit):
    def rule(l, c, r):
        if c == "1":
            return f"h{bit}"
        if c in ("h0", "h1"):
            return f"d{2 * int(c[1]) + bit + 1}"
        if c == "d1":
            return "A"
        if c[0] == "d":
            return f"d{int(c[1]) - 1}"
        if c == "A":
            return "N"
        return c

    return rule


AT_MOST_ONE_ONE_STATES = ["0", "1", "h0", "h1", "d1", "d2", "d3", "d4", "A", "N"]


def at_most_one_one() -> Paca:
    """0-cells accept forever.  A 1-cell stores two coins, reads them as
    ``t`` in 1..4 and is accepting exactly at step ``2 + t``.  All 1-cells
    must pick the same ``t``, so ``j >= 1`` ones are accepted with
    probability ``4**(1-j)``."""
    return Paca.from_function(
        AT_MOST_ONE_ONE_STATES, "01", {"0", "A"}, _two_coin_rule(0), _two_coin_rule(1),
        horizon=7, name="thm31_at_most_one_one",
    )


def _virtual_rule(i):
    def rule(l, c, r):
        if c == "1":
            return f"d{i + 1}"
        if c == "d1":
            return "A"
        if c[0] == "d":
            return f"d{int(c[1]) - 1}"
        if c == "A":
            return "N"
        return c

    return rule


def at_most_one_one_virtual() -> MultiRulePaca:
    """Four rules; rule ``i`` sends a 1-cell to countdown ``i + 1``."""
    return MultiRulePaca(
        ("0", "1"), tuple(ProcRule(_virtual_rule(i), f"virtual{i}") for i in range(4)),
        lambda q: q in ("0", "A"), 6, "thm31_virtual",
    )


def at_most_one_one_expanded() -> Paca:
    return expand_rules(at_most_one_one_virtual(), {"builtin": "thm31_expanded", "params": {}})


# ---------------------------------------------------------------------------
# 0^k 1^l 2^m 3^n with (l >= 2, m >= 3) or (l >= 3, m >= 2), one-sided


FOUR_BLOCK_PATTERN = re.compile(r"0*(1{2}2{3,}|1{3,}2{2,})3*")


def four_block_member(w: str) -> bool:
    return FOUR_BLOCK_PATTERN.fullmatch(w) is not None


def _shape_windows() -> frozenset:
    """Padded radius-2 windows of words 0^k 1^l 2^m 3^n with l, m >= 2."""
    out = set()
    for k, l, m, n in itertools.product(range(6), range(2, 7), range(2, 7), range(6)):
        w = BOUNDARY * 2 + "0" * k + "1" * l + "2" * m + "3" * n + BOUNDARY * 2
        for i in range(2, len(w) - 2):
            out.add(w[i - 2:i + 3])
    return frozenset(out)


SHAPE_WINDOWS = _shape_windows()


def _coin_owner(win: str) -> bool:
    """Cells whose coin is read by c1 (right), c2 (left, right), c3 (left),
    or by the last 2 when no 3 follows."""
    return (
        (win[1] == "1" and win[0] != "1")
        or (win[2] == "1" and win[3] == "2")
        or (win[1] == "2" and win[0] == "1")
        or (win[2] == "2" and win[3] in ("3", BOUNDARY))
    )


def _four_block_rule(bit):
    B = BOUNDARY

    def rule(l, c, r):
        if c.__class__ is str:
            if c in ("ACC", "REJ"):
                return "REJ"
            return ("w1", (l if l.__class__ is str else B) + c + (r if r.__class__ is str else B))
        if c[0] == "w1":
            win = (B if l == B else l[1][0]) + c[1] + (B if r == B else r[1][-1])
            return ("w2", win, bit if _coin_owner(win) else None)
        win, own = c[1], c[2]
        if win not in SHAPE_WINDOWS:
            return "REJ"
        left = None if l == B else l[2]
        right = None if r == B else r[2]
        centre, before, after = win[2], win[1], win[3]
        ok = True
        if centre == "1" and before != "1":
            ok = right == 1
        elif centre == "2" and before == "1":
            ok = left + right < 2
        elif centre == "3" and before == "2":
            ok = left == 1
        elif centre == "2" and after == B:
            ok = own == 1
        return "ACC" if ok else "REJ"

    return ProcRule(rule, f"appendixA{bit}", cache=True)


def four_block_paca() -> Paca:
    """Step 1 reads a radius-1 window, step 2 a radius-2 window and records
    the coin of the cells whose coin is checked; at step 3 every cell checks
    its window against the 0*1*2*3* shape (with at least two 1s and two 2s)
    and the leftmost 1, 2 and 3 check their neighbours' recorded coins."""
    return Paca(
        "0123", _four_block_rule(0), _four_block_rule(1), lambda q: q == "ACC", None, 4,
        "appendixA", {"builtin": "appendixA", "params": {}},
    )


def four_block_shape() -> SltSpec:
    """The 0*1*2*3* shape with at least two 1s and two 2s, via length-5 windows."""
    words = [
        "0" * k + "1" * l + "2" * m + "3" * n
        for k, l, m, n in itertools.product(range(6), range(2, 7), range(2, 7), range(6))
    ]
    allowed = {x for w in words for x in infixes(w, 5)}
    prefixes = {prefix(w, 4) for w in words}
    suffixes = {suffix(w, 4) for w in words}
    return SltSpec.build("0123", 5, allowed, prefixes, suffixes)


WORD_TRIPLE = {"x": "0" * 5 + "111" + "22" + "3" * 5, "y": "0" * 5 + "11" + "222" + "3" * 5,
        "z": "0" * 5 + "11" + "22" + "3" * 5}


# ---------------------------------------------------------------------------
# small automata


def _no_11_det(l, c, r):
    if c == "1":
        return "bad" if "1" in (l, r) else "ok"
    if c == "0":
        return "ok"
    return c


def degenerate_no_11() -> Paca:
    """Deterministic: a 1 next to a 1 rejects forever; everything else accepts from step 1."""
    return Paca.from_function(["0", "1", "ok", "bad"], "01", {"ok"}, _no_11_det,
                              horizon=2, name="degenerate_no_11")


def _single_one(bit):
    def rule(l, c, r):
        if c == "1":
            if l == BOUNDARY:
                return "Y" if bit else "w"
            return "N"
        if c == "w":
            return "Y" if bit else "N"
        if c == "Y":
            return "N"
        return c

    return rule


def one_sided_single_one() -> Paca:
    """Accepts 0^n and 1 0^(n-1): a leading 1 accepts at step 1 or 2, each with
    a fresh coin, so with probability 3/4; any other 1 rejects."""
    return Paca.from_function(["0", "1", "w", "Y", "N"], "01", {"0", "Y"},
                              _single_one(0), _single_one(1), horizon=3,
                              name="one_sided_single_one")


def _no_11_random(bit):
    def rule(l, c, r):
        if c == "1" and "1" in (l, r):
            return "A" if bit else "R"
        if c in ("0", "1"):
            return "A"
        return c

    return rule


def no_11_two_sided() -> Paca:
    """A 1 next to a 1 accepts with probability 1/2; words with a 11 have
    at least two such cells and are accepted with probability at most 1/4."""
    return Paca.from_function(["0", "1", "A", "R"], "01", {"A"},
                              _no_11_random(0), _no_11_random(1), horizon=2,
                              name="no_11_two_sided")


# ---------------------------------------------------------------------------
# languages


def th(alphabet: str, m: str, theta: int) -> LLinSpec:
    """Words with at most ``theta`` occurrences of the symbol ``m``."""
    return LLinSpec.build(alphabet, 1, {m: 1}, theta)


def _lang_fixtures() -> dict:
    th11 = th("01", "1", 1)
    th11_3 = th("012", "1", 1)
    th21_3 = th("012", "2", 1)
    return {
        "th11": Fixture("th11", th11, [("010", True), ("0110", False), ("0", True), ("1", True)],
                        "at most one 1, as a weighted spec"),
        "th11_ternary": Fixture("th11_ternary", th11_3, [("0120", True), ("1021", False)],
                                "at most one 1 over 0, 1, 2"),
        "th21_ternary": Fixture("th21_ternary", th21_3, [("0120", True), ("2012", False)],
                                "at most one 2 over 0, 1, 2"),
        "th11_or_th21": Fixture(
            "th11_or_th21",
            union(Threshold(("0", "1", "2"), "1", Fraction(1)), Threshold(("0", "1", "2"), "2", Fraction(1))),
            [("1122", False), ("112", True), ("122", True), ("0", True)],
            "at most one 1 or at most one 2",
        ),
        "not_all_zero": Fixture(
            "not_all_zero",
            complement(SltSpec.build("01", 1, {"0"})),
            [("000", False), ("010", True), ("1", True)],
            "words that are not all zeros",
        ),
        "appendixA_shape": Fixture(
            "appendixA_shape", four_block_shape(),
            [(WORD_TRIPLE["x"], True), (WORD_TRIPLE["y"], True), (WORD_TRIPLE["z"], True),
             ("0112233", True), ("0121", False), ("1122", True)],
            "0*1*2*3* with at least two 1s and two 2s",
        ),
        "fig4_words": Fixture(
            "fig4_words", dict(WORD_TRIPLE),
            [("z_infixes_outside_x", ["00112", "01122"]), ("z_infixes_outside_x_and_y", [])],
            "three words with equal short-window statistics up to two windows",
        ),
    }


def _paca_fixtures() -> dict:
    quarter = Fraction(1, 4)
    return {
        "thm31_at_most_one_one": Fixture(
            "thm31_at_most_one_one", at_most_one_one(),
            [("000", D(1)), ("0101", D(Fraction(1, 4))), ("11", D(Fraction(1, 4))),
             ("111", D(Fraction(1, 16))), ("1", D(1)), ("0010", D(1))],
            "at most one 1; ones pick a random acceptance step",
            two_sided(quarter), lambda w: w.count("1") <= 1, 1, 7, _at_most_one_one,
        ),
        "thm31_expanded": Fixture(
            "thm31_expanded", at_most_one_one_expanded(),
            [("000", D(1)), ("0101", D(Fraction(1, 4))), ("111", D(Fraction(1, 16)))],
            "the same language built from four rules via coin buffering",
            two_sided(quarter), lambda w: w.count("1") <= 1, 1, 12, _at_most_one_one,
        ),
        "appendixA": Fixture(
            "appendixA", four_block_paca(),
            [
                ("0" * 5 + "11" + "22" + "3" * 5, D(0)),
                ("0" * 5 + "111" + "22" + "3" * 5, D(Fraction(1, 8))),
                ("0" * 5 + "11" + "222" + "3" * 5, D(Fraction(1, 8))),
                ("0" * 5 + "111" + "222" + "3" * 5, D(Fraction(3, 16))),
            ],
            "0^k 1^l 2^m 3^n with l, m >= 2 and one of them >= 3",
            one_sided(Fraction(7, 8)), four_block_member, 3, 4, _four_block_words,
        ),
        "degenerate_no_11": Fixture(
            "degenerate_no_11", degenerate_no_11(),
            [("0101", D(1)), ("0110", D(0)), ("1", D(1))],
            "no two adjacent 1s, deterministic",
            one_sided(Fraction(1, 2)), lambda w: "11" not in w, 0, 2, _no_11,
        ),
        "one_sided_single_one": Fixture(
            "one_sided_single_one", one_sided_single_one(),
            [("1000", D(Fraction(3, 4))), ("000", D(1)), ("0100", D(0)), ("1", D(Fraction(3, 4)))],
            "0^n or 1 0^(n-1), one critical cell",
            one_sided(Fraction(1, 4)), lambda w: "1" not in w[1:], 1, 3, _leading_one,
        ),
        "no_11_two_sided": Fixture(
            "no_11_two_sided", no_11_two_sided(),
            [("0101", D(1)), ("0110", D(Fraction(1, 4))), ("111", D(Fraction(1, 8)))],
            "no two adjacent 1s, two-sided",
            two_sided(quarter), lambda w: "11" not in w, 0, 2, _no_11,
        ),
    }


_CACHE: dict = {}


def _all() -> dict:
    if not _CACHE:
        _CACHE.update(_paca_fixtures())
        _CACHE.update(_lang_fixtures())
    return _CACHE


def fixture(name: str) -> Fixture:
    try:
        return _all()[name]
    except KeyError:
        raise FormatError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}") from None


def fixture_names() -> list[str]:
    return sorted(_all())


def paca_fixture_names() -> list[str]:
    return [n for n, f in sorted(_all().items()) if isinstance(f.artifact, Paca)]


def cover_report(words: dict = WORD_TRIPLE, ell: int = 5) -> dict:
    """Windows of ``z`` missing from ``x``, and from both ``x`` and ``y``.

    Windows include the padded border prefix and suffix of length ``ell - 1``.
    """
    def windows(w):
        return set(infixes(w, ell)) | {"^" + prefix(w, ell - 1), suffix(w, ell - 1) + "^"}

    wx, wy, wz = windows(words["x"]), windows(words["y"]), windows(words["z"])
    return {
        "z_infixes_outside_x": sorted(wz - wx),
        "z_infixes_outside_x_and_y": sorted(wz - wx - wy),
    }


@register("appendixA")
def _four_block_factory(params: dict) -> Paca:
    return four_block_paca()


@register("thm31_expanded")
def _expanded_factory(params: dict) -> Paca:
    return at_most_one_one_expanded()


def export_corpus(directory) -> list[str]:
    """Write every automaton and language fixture as JSON; returns the paths."""
    from pathlib import Path

    from .langs import lang_to_json
    from .serialize import automaton_to_json, dump

    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in fixture_names():
        art = fixture(name).artifact
        if isinstance(art, Paca):
            doc = automaton_to_json(art)
        elif isinstance(art, Atom):
            doc = lang_to_json(art)
        else:
            continue
        path = out_dir / f"{name}.json"
        dump(doc, path)
        written.append(str(path))
    return written
