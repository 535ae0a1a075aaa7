import json
from fractions import Fraction

import pytest

from paca.core import BudgetExceeded, run
from paca.corpus import at_most_one_one_virtual, fixture
from paca.dyadic import Dyadic
from paca.langs import LLinSpec, llin_membership
from paca.prob import (
    MembershipOracle,
    Verdict,
    acceptance_prob,
    acceptance_prob_dp,
    classify,
    two_sided,
    words,
)
from paca.transforms import (
    Subsets,
    binomial_tail,
    copies_one_sided,
    derandomize_one_sided,
    expand_rules,
    intersect_paca,
    majority_copies,
    paca_from_llin,
    reduce_error_one_sided,
    reduce_error_two_sided,
    threshold_vote,
    union_paca,
)


def test_copy_count_is_the_least_sufficient_one():
    assert copies_one_sided(Fraction(1, 2), Fraction(1, 4)) == 2
    assert copies_one_sided(Fraction(7, 8), Fraction(1, 2)) == 6
    rep = reduce_error_one_sided(fixture("appendixA").artifact, Fraction(1, 2), Fraction(1, 4))
    assert rep.parameters["m"] == 2 and any("would give 1" in n for n in rep.notes)


def test_one_sided_structure_matches_dp_and_keeps_zeros():
    f = fixture("one_sided_single_one")
    rep = reduce_error_one_sided(f.artifact, Fraction(1, 4), Fraction(1, 16))
    out = rep.output
    assert rep.derived_horizon == 2 * 3 + 2 == out.horizon
    for w in words("01", 4):
        p = acceptance_prob(out, w)
        assert p == acceptance_prob_dp(out, w)
        q = acceptance_prob_dp(f.artifact, w)
        assert p == 1 - (1 - q) ** 2
        assert (p == 0) == (q == 0)


def test_subset_unranking():
    s = Subsets(5, size=3)
    assert len(s) == 10 and s[0] == (0, 1, 2) and s[9] == (2, 3, 4)
    assert list(Subsets(3, explicit=[(0, 2)])) == [(0, 2)]


def test_majority_copies_and_tail():
    assert binomial_tail(3, Fraction(1, 4), 2) == Fraction(5, 32)
    assert majority_copies(Fraction(1, 4), Fraction(5, 32)) == 3
    assert majority_copies(Fraction(1, 4), Fraction(1, 8)) == 5
    m, s = threshold_vote(Fraction(1, 2), Fraction(1, 4), Fraction(1, 3))
    assert 1 - binomial_tail(m, Fraction(1, 2), s) <= Fraction(1, 3)
    assert binomial_tail(m, Fraction(1, 4), s) <= Fraction(1, 3)


def test_two_sided_reduction_on_no_11():
    C = fixture("no_11_two_sided").artifact
    rep = reduce_error_two_sided(C, Fraction(1, 4), Fraction(5, 32))
    out = rep.output
    assert rep.parameters["m"] == 3 and rep.derived_horizon == 3 + 3 * 2**3 == out.horizon
    for w in words("01", 3):
        assert acceptance_prob(out, w) == acceptance_prob_dp(out, w)
    mode = two_sided(rep.parameters["achieved_error"])
    for w in words("01", 7):
        assert (classify(out, w, mode=mode) is Verdict.IN) == ("11" not in w)


def test_horizon_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        reduce_error_two_sided(fixture("no_11_two_sided").artifact, Fraction(1, 4), Fraction(1, 100),
                               horizon_budget=50)


def test_union_and_intersection_small():
    a = fixture("no_11_two_sided").artifact
    b = fixture("thm31_at_most_one_one").artifact
    u = union_paca(a, b)
    i = intersect_paca(a, b)
    for w in words("01", 3):
        pa, pb = acceptance_prob_dp(a, w), acceptance_prob_dp(b, w)
        assert acceptance_prob(u.output, w) == 1 - (1 - pa) * (1 - pb)
        assert acceptance_prob(i.output, w) == pa * pb
    assert acceptance_prob_dp(u.output, "011") == acceptance_prob(u.output, "011")


def test_rule_expansion_preserves_probabilities():
    virt = at_most_one_one_virtual()
    assert virt.k == 2
    out = expand_rules(virt)
    base = fixture("thm31_at_most_one_one").artifact
    for w in words("01", 4):
        assert acceptance_prob_dp(out, w, 12) == acceptance_prob_dp(base, w, 7)


def test_derandomized_output_is_deterministic_and_equivalent():
    f = fixture("one_sided_single_one")
    rep = derandomize_one_sided(f.artifact, n_cal=8)
    D = rep.output
    assert D.deterministic and D.rule0 is D.rule1
    assert rep.parameters["M"] == 1 and rep.derived_horizon == D.horizon
    oracle = MembershipOracle(f.artifact, f.mode)
    for w in words("01", 9):
        assert run(D, w).accepted == oracle(w)
    with pytest.raises(ValueError):
        derandomize_one_sided(f.artifact, n_cal=0)


def test_llin_core_gives_exact_powers():
    spec = LLinSpec.build("01", 2, {"11": 1, "10": 2}, 2, prefixes=["0"])
    rep = paca_from_llin(spec)
    core = rep.output.pre_amplification
    for w in words("01", 6):
        f = w.count("10") * 2 + sum(w[i:i + 2] == "11" for i in range(len(w) - 1))
        want = Dyadic(1, f) if w[0] == "0" else Dyadic(0)
        assert acceptance_prob_dp(core, w) == want
    mode = two_sided(rep.parameters["achieved_error"])
    for w in words("01", 6):
        assert (classify(rep.output, w, mode=mode) is Verdict.IN) == llin_membership(spec, w)


def test_llin_rational_weights_go_through_normalisation():
    spec = LLinSpec.build("01", 1, {"1": Fraction(3, 2)}, Fraction(3, 2))
    rep = paca_from_llin(spec)
    assert rep.parameters["route"] == "normalized"
    core = rep.output.pre_amplification
    norm = rep.output.normalization
    for w in words("01", 5):
        p = acceptance_prob_dp(core, w).to_fraction()
        if llin_membership(spec, w):
            assert p >= norm.min_member_prob
        else:
            assert p <= norm.max_nonmember_prob


def test_report_json_is_plain():
    rep = reduce_error_two_sided(fixture("no_11_two_sided").artifact, Fraction(1, 4), Fraction(5, 32))
    text = json.dumps(rep.to_json())
    assert "achieved_error" in text
