import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from paca.core import BudgetExceeded, Paca, RandomTape, space_time
from paca.corpus import fixture, paca_fixture_names
from paca.dyadic import Dyadic
from paca.prob import (
    Budget,
    ErrorMode,
    LocalAnalyzer,
    MembershipOracle,
    Verdict,
    acceptance_prob,
    acceptance_prob_dp,
    acceptance_prob_enum,
    acceptance_upper_bound,
    classify,
    critical_cells,
    enumerate_members,
    forward_distribution,
    independence_check,
    padded_window,
    rejection_certificate,
    two_sided,
    validate_horizon,
    words,
)


def _tapes(T, n):
    for bits in itertools.product((0, 1), repeat=T * n):
        yield RandomTape(tuple(tuple(bits[s * n:(s + 1) * n]) for s in range(T)))


def _brute_prob(a, w, T):
    hits = 0
    total = 0
    for tape in _tapes(max(T - 1, 1), len(w)):
        total += 1
        d = space_time(a, w, tape, T - 1)
        hits += d.accept_step is not None
    return Fraction(hits, total)


@pytest.mark.parametrize("name", ["thm31_at_most_one_one", "no_11_two_sided", "one_sided_single_one"])
def test_dp_matches_brute_force_tapes(name):
    a = fixture(name).artifact
    for w in words(a.input_alphabet, 3):
        for T in (1, 2, 3, 4):
            assert acceptance_prob_dp(a, w, T) == _brute_prob(a, w, T)


@pytest.mark.parametrize("name", paca_fixture_names())
def test_monotone_in_horizon_and_denominator_bound(name):
    a = fixture(name).artifact
    for w in words(a.input_alphabet, 4):
        prev = Dyadic(0)
        for T in range(1, 6):
            p = acceptance_prob_dp(a, w, T)
            assert prev <= p <= 1
            assert p.exponent <= T * len(w)
            prev = p


def test_forward_distribution_mass():
    a = fixture("thm31_at_most_one_one").artifact
    d = forward_distribution(a, "0110", 3)
    assert d.total() == 1
    assert len({len(c) for c in d.support}) <= 1


def test_enum_budget():
    a = fixture("thm31_expanded").artifact
    with pytest.raises(BudgetExceeded):
        acceptance_prob_enum(a, "0101010101", 12, Budget(enum_cells=8))
    assert Budget.from_env("30").enum_cells == 30
    assert Budget.from_env("enum=5,dp=9").dp_support == 9


def test_classify_examples():
    a = fixture("thm31_at_most_one_one").artifact
    assert classify(a, "0010", mode=two_sided(Fraction(1, 4))) is Verdict.IN
    assert classify(a, "0101", mode=two_sided(Fraction(1, 4))) is Verdict.NOT_IN
    # 1/4 does not fit a tighter contract: neither near 0 nor near 1
    assert classify(a, "0101", mode=two_sided(Fraction(1, 8))) is Verdict.CONTRACT_VIOLATION
    c = fixture("appendixA").artifact
    assert classify(c, "0" * 5 + "111" + "222" + "3" * 5, mode="one:7/8") is Verdict.IN
    assert classify(c, "0" * 5 + "11" + "22" + "3" * 5, mode="one:7/8") is Verdict.NOT_IN
    assert ErrorMode.parse("two:1/3") == two_sided(Fraction(1, 3))
    with pytest.raises(ValueError):
        two_sided(Fraction(1, 2))


def test_validate_horizon():
    a = fixture("thm31_at_most_one_one").artifact
    for w in ["0", "1", "0100", "0110", "1111"]:
        assert validate_horizon(a, w, 7).ok
    check = validate_horizon(a, "0100", 3)
    assert not check.ok and check.violated_at >= 3


def test_critical_cells_methods_agree_with_full_tape_enumeration():
    for name in ["thm31_at_most_one_one", "no_11_two_sided", "one_sided_single_one", "appendixA"]:
        a = fixture(name).artifact
        ws = ["0" * 2 + "11" + "222" + "3"] if name == "appendixA" else list(words(a.input_alphabet, 4))
        for w in ws:
            n = len(w)
            for t in range(0, 3):
                if t * n > 16:
                    continue
                seen = [set() for _ in range(n)]
                for tape in _tapes(max(t, 1), n):
                    row = space_time(a, w, tape, t).rows[t]
                    for i, q in enumerate(row):
                        seen[i].add(bool(a.is_accepting(q)))
                brute = {i for i in range(n) if len(seen[i]) == 2}
                assert critical_cells(a, w, t, method="enum").critical == brute
                assert critical_cells(a, w, t, method="set").critical == brute


def test_local_analyzer_set_and_enum_agree():
    a = fixture("appendixA").artifact
    an = LocalAnalyzer(a)
    w = "0" * 3 + "111" + "222" + "3" * 3
    for i in range(len(w)):
        for t in range(4):
            win = padded_window(w, i, t)
            assert an.reachable_states(win, t) == an.enumerated_states(win, t)


def test_sound_certificates():
    a = fixture("thm31_at_most_one_one").artifact
    an = LocalAnalyzer(a)
    for w in words("01", 6):
        p = acceptance_prob_dp(a, w, 7)
        if rejection_certificate(an, w, 7) is not None:
            assert p == 0
        assert p <= acceptance_upper_bound(an, w, 7)


def test_independence_examples():
    a = fixture("appendixA").artifact
    w = "0" * 5 + "11" + "222" + "3" * 5
    dep = independence_check(a, w, 5, 7, 3, 4)
    assert (dep.p_i, dep.p_j, dep.p_ij) == (Dyadic(1, 1), Dyadic(3, 2), Dyadic(1, 2))
    far = independence_check(a, w, 0, 14, 3, 4)
    assert far.independent and far.guaranteed


def test_membership_oracle_and_member_enumeration():
    f = fixture("appendixA")
    oracle = MembershipOracle(f.artifact, f.mode)
    got = enumerate_members(oracle, "0123", 7)
    want = [w for w in words("0123", 7) if f.language(w)]
    assert got == want
    pos = MembershipOracle(f.artifact, f.mode, positive=True)
    assert pos("0011122") and not pos("001122")


def _random_paca(rng):
    states = ["a", "b", "c"]
    pad = ["$", *states]
    tabs = [{(l, c, r): rng.choice(states) for l in pad for c in states for r in pad} for _ in range(2)]
    return Paca.from_tables(states, ["a", "b"], rng.sample(states, 2), *tabs)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 4))
def test_oracles_agree_on_random_automata(seed, n, T):
    rng = random.Random(seed)
    a = _random_paca(rng)
    w = "".join(rng.choice("ab") for _ in range(n))
    assert acceptance_prob_enum(a, w, T, raw=True) == acceptance_prob_dp(a, w, T) == acceptance_prob(a, w, T)
