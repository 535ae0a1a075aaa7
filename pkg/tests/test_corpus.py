import json
import random

import pytest

from paca.core import Paca, advance
from paca.corpus import (
    WORD_TRIPLE,
    four_block_member,
    cover_report,
    export_corpus,
    fixture,
    fixture_names,
    paca_fixture_names,
)
from paca.langs import eval_expr
from paca.prob import acceptance_prob_dp, words
from paca.serialize import automaton_from_json, load_json


@pytest.mark.parametrize("name", fixture_names())
def test_expected_tables(name):
    f = fixture(name)
    assert f.expected
    for key, want in f.expected:
        if isinstance(f.artifact, Paca):
            assert acceptance_prob_dp(f.artifact, key, f.horizon) == want, key
        elif name == "fig4_words":
            assert cover_report(f.artifact)[key] == want
        else:
            assert eval_expr(f.artifact, key) == want, key


@pytest.mark.parametrize("name", paca_fixture_names())
def test_member_generators_match_language(name):
    f = fixture(name)
    sigma = f.artifact.input_alphabet
    for n in range(1, 6):
        want = [w for w in words(sigma, n, n) if f.language(w)]
        assert sorted(f.members(n)) == want


def test_four_block_language():
    assert four_block_member("0011222333") and four_block_member("111223")
    assert not four_block_member("1122") and not four_block_member("0112233")
    assert [four_block_member(WORD_TRIPLE[k]) for k in "xyz"] == [True, True, False]


def test_word_triple_cover():
    rep = cover_report()
    assert rep["z_infixes_outside_x"] == ["00112", "01122"]
    assert rep["z_infixes_outside_x_and_y"] == []


def _all_accepting_at(a, w, t):
    c = tuple(w)
    for _ in range(t):
        c = advance(a, c)
    return all(a.is_accepting(q) for q in c)


def test_sampled_dacas_accepting_x_and_y_together_accept_z():
    """Sampled (not exhaustive) family: 4-state table DACAs with horizon 3.

    Every radius-2 window of z occurs in x or y, so whenever a DACA accepts x
    and y at the same step t <= 2 it also accepts z at step t.
    """
    rng = random.Random(11)
    states = "0123"
    pad = "$" + states
    fired = 0
    for _ in range(4000):
        acc = set(rng.sample(states, 3))
        table = {(l, c, r): rng.choice(states) for l in pad for c in states for r in pad}
        a = Paca.from_tables(list(states), list(states), acc, table)
        for t in range(3):
            if _all_accepting_at(a, WORD_TRIPLE["x"], t) and _all_accepting_at(a, WORD_TRIPLE["y"], t):
                fired += 1
                assert _all_accepting_at(a, WORD_TRIPLE["z"], t)
    assert fired > 0


def test_export_round_trip(tmp_path):
    written = export_corpus(tmp_path)
    assert len(written) == len(fixture_names()) - 1   # the word triple is not a language
    for name in paca_fixture_names():
        a = automaton_from_json(load_json(tmp_path / f"{name}.json"))
        f = fixture(name)
        for key, want in f.expected[:2]:
            assert acceptance_prob_dp(a, key, f.horizon) == want
    assert json.loads((tmp_path / "th11.json").read_text())["kind"] == "llin"
