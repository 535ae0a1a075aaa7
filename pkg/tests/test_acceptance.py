"""The ten acceptance criteria, one test each.

Each test records a PASS/FAIL line (printed in the pytest terminal summary)
before asserting, so a failing criterion is reported rather than hidden.
Runtime limits are part of each criterion.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from paca.core import Paca, RandomTape, run, space_time
from paca.corpus import (
    SHAPE_WINDOWS,
    four_block_member,
    fixture,
    paca_fixture_names,
)
from paca.dyadic import Dyadic
from paca.langs import (
    LLinSpec,
    SltSpec,
    Threshold,
    all_words,
    complement,
    eval_expr,
    inter,
    llin_membership,
    normalize_llin,
    scanner_llin,
    short_words,
    slt_membership,
    union,
)
from paca.prob import (
    LocalAnalyzer,
    MembershipOracle,
    Verdict,
    acceptance_prob,
    acceptance_prob_dp,
    acceptance_prob_enum,
    classify,
    critical_cells,
    independence_check,
    two_sided,
    words,
)
from paca.transforms import (
    derandomize_one_sided,
    intersect_paca,
    paca_from_llin,
    reduce_error_one_sided,
    union_paca,
)


def check(record, n, limit, body):
    """Run ``body() -> (ok, detail)``, record the outcome, then assert it."""
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # recorded, then re-raised below
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    in_time = elapsed < limit
    record(n, ok and in_time, f"{detail} [{elapsed:.1f}s, limit {limit}s]")
    assert ok, detail
    assert in_time, f"took {elapsed:.1f}s, limit {limit}s"


def test_criterion_01_four_block_exact_values(record):
    def body():
        f = fixture("appendixA")
        got = {}
        want = {
            "0" * 5 + "11" + "22" + "3" * 5: Dyadic(0),
            "0" * 5 + "111" + "22" + "3" * 5: Dyadic(1, 3),
            "0" * 5 + "11" + "222" + "3" * 5: Dyadic(1, 3),
            "0" * 5 + "111" + "222" + "3" * 5: Dyadic(3, 4),
        }
        for w in want:
            got[w] = acceptance_prob_dp(f.artifact, w, 4)
        ok = got == want
        return ok, ", ".join(str(v) for v in got.values())

    check(record, 1, 5, body)


def test_criterion_02_oracle_agreement(record):
    def body():
        cases = 0
        bad = []
        for name in paca_fixture_names():
            a = fixture(name).artifact
            for w in words(a.input_alphabet, 5):
                for T in range(1, 5):
                    cases += 1
                    if acceptance_prob_enum(a, w, T) != acceptance_prob_dp(a, w, T):
                        bad.append((name, w, T))
        return not bad, f"{cases} cases, {len(bad)} disagreements {bad[:3]}"

    check(record, 2, 60, body)


def test_criterion_03_at_most_one_one(record):
    def body():
        a = fixture("thm31_at_most_one_one").artifact
        bad = []
        count = 0
        for w in words("01", 8):
            p = acceptance_prob(a, w, 7)
            j = w.count("1")
            count += 1
            if j <= 1:
                ok = p == 1
            else:
                ok = p <= Fraction(1, 4) and p == Dyadic(1, 2 * (j - 1))
            if not ok:
                bad.append((w, str(p)))
        return not bad, f"{count} words, violations {bad[:3]}"

    check(record, 3, 60, body)


def _window_closed_words(alphabet, allowed, radius, max_len):
    """All words up to ``max_len`` whose padded windows all lie in ``allowed``."""
    B = "$"
    out = []

    def ok_upto(w, final):
        padded = B * radius + w + B * radius if final else B * radius + w
        last = len(w) if final else len(w) - radius
        return all(padded[i:i + 2 * radius + 1] in allowed for i in range(max(0, last - 1), last))

    def visit(w):
        if ok_upto(w, True):
            out.append(w)
        if len(w) == max_len:
            return
        for s in alphabet:
            v = w + s
            if len(v) <= radius or ok_upto(v, False):
                visit(v)

    for s in alphabet:
        visit(s)
    return out


def _padded_windows(alphabet, radius):
    B = "$"
    size = 2 * radius + 1
    for a in range(radius + 1):
        for b in range(radius + 1):
            for mid in itertools.product(alphabet, repeat=size - a - b):
                yield B * a + "".join(mid) + B * b


def test_criterion_04_one_sided_reduction(record):
    def body():
        C = fixture("appendixA").artifact
        rep = reduce_error_one_sided(C, Fraction(7, 8), Fraction(1, 2))
        out, m = rep.output, rep.parameters["m"]
        details = [f"m={m}"]

        # members up to length 12: exact probability above 1/2
        members = [w for n in range(1, 13) for w in fixture("appendixA").members(n)]
        low = [w for w in members if not acceptance_prob(out, w) > Fraction(1, 2)]
        details.append(f"{len(members)} members, {len(low)} at or below 1/2")

        # non-members, part 1: a cell whose radius-2 window breaks the shape
        # never accepts, at any step below the horizon
        an = LocalAnalyzer(C)
        leaks = []
        for t in range(4):
            for win in _padded_windows("0123", t):
                if t < 3 or win[1:6] not in SHAPE_WINDOWS:
                    if not an.surely_rejecting(tuple(win), t):
                        leaks.append((t, win))
        details.append(f"local rejection proof leaks {len(leaks)}")

        # part 2: words with no such cell, checked exactly
        closed = _window_closed_words("0123", SHAPE_WINDOWS, 2, 12)
        nonmembers = [w for w in closed if not four_block_member(w)]
        nonzero = [w for w in nonmembers if acceptance_prob(out, w) != 0]
        details.append(f"{len(nonmembers)} shape-consistent non-members, {len(nonzero)} with nonzero probability")

        # plain exhaustive check on short words
        short_bad = [
            w for w in words("0123", 6)
            if (acceptance_prob(out, w) > Fraction(1, 2)) != four_block_member(w)
            or (not four_block_member(w) and acceptance_prob(out, w) != 0)
        ]
        details.append(f"short-word mismatches {len(short_bad)}")

        # step mapping: the product is all-accepting at step s exactly when
        # copy (s-1) mod m is all-accepting at its step (s-1) div m
        mapping_bad = 0
        H = rep.derived_horizon
        for w in members[:12]:
            for seed in range(4):
                tape = RandomTape.from_seed(seed, H, len(w))
                d = space_time(out, w, tape, H - 1)
                for s in range(H):
                    whole = all(d.accepting[s])
                    if s == 0:
                        mapping_bad += whole
                        continue
                    j, t = (s - 1) % m, (s - 1) // m
                    if t >= 4:
                        continue
                    rows = tuple(tape.rows[m * u + j + 1] for u in range(t)) or ((0,) * len(w),)
                    dc = space_time(C, w, RandomTape(rows), t)
                    if whole != all(dc.accepting[t]):
                        mapping_bad += 1
        details.append(f"step-mapping mismatches {mapping_bad}")
        ok = m == 6 and not low and not leaks and not nonzero and not short_bad and not mapping_bad
        return ok, "; ".join(details)

    check(record, 4, 120, body)


def test_criterion_05_union_and_intersection(record):
    def body():
        a = paca_from_llin(fixture("th11_ternary").artifact)
        b = paca_from_llin(fixture("th21_ternary").artifact)
        errs = (a.parameters["achieved_error"], b.parameters["achieved_error"])
        u = union_paca(a.output, b.output, errors=errs)
        expr = fixture("th11_or_th21").artifact
        bad_u = [
            w for w in words("012", 6)
            if (classify(u.output, w, mode=two_sided(Fraction(1, 3))) is Verdict.IN) != eval_expr(expr, w)
        ]
        # product law, computed on the product automaton by the generic DP
        c1 = fixture("no_11_two_sided").artifact
        c2 = paca_from_llin(fixture("th11").artifact).output.pre_amplification
        i = intersect_paca(c1, c2)
        bad_i = []
        count = 0
        for w in words("01", 6):
            count += 1
            p = acceptance_prob_dp(i.output, w)
            q = acceptance_prob_dp(c1, w) * acceptance_prob_dp(c2, w)
            if p != q:
                bad_i.append(w)
        ok = not bad_u and not bad_i
        return ok, (f"union: {len(bad_u)} mismatches over 1092 words; "
                    f"intersection: {len(bad_i)} product-law failures over {count} words")

    check(record, 5, 300, body)


def test_criterion_06_derandomization(record):
    def body():
        details = []
        ok = True
        for name in ("degenerate_no_11", "one_sided_single_one", "appendixA"):
            f = fixture(name)
            rep = derandomize_one_sided(f.artifact)
            D = rep.output
            oracle = MembershipOracle(f.artifact, f.mode)
            det_ok = D.deterministic
            H = D.horizon
            bad = None
            count = 0
            for w in words(f.artifact.input_alphabet, 10):
                count += 1
                if run(D, w, steps=H - 1).accepted != oracle(w):
                    bad = w
                    break
            ok = ok and det_ok and bad is None
            details.append(f"{name}: M={rep.parameters['M']} r={rep.parameters['r']} "
                           f"{count} words {'equal' if bad is None else 'differ at ' + repr(bad)}")
        return ok, "; ".join(details)

    check(record, 6, 600, body)


def test_criterion_07_llin_compiler(record):
    def body():
        spec = fixture("th11").artifact
        rep = paca_from_llin(spec)
        core = rep.output.pre_amplification
        bad_core = [w for w in words("01", 8) if acceptance_prob_dp(core, w) != Dyadic(1, w.count("1"))]
        bad_cls = [
            w for w in words("01", 8)
            if (classify(rep.output, w, mode=two_sided(Fraction(1, 3))) is Verdict.IN) != llin_membership(spec, w)
        ]
        ok = not bad_core and not bad_cls
        return ok, (f"core 2^-|w|_1 failures {len(bad_core)}, classification mismatches {len(bad_cls)} "
                    f"(vote {rep.parameters['votes_needed']} of {rep.parameters['m']})")

    check(record, 7, 300, body)


def _random_paca(rng: random.Random) -> Paca:
    q = rng.choice([2, 3])
    states = ["a", "b", "c"][:q]
    sigma = states[: rng.choice([1, 2])]
    accepting = set(rng.sample(states, rng.randint(1, q)))
    padded = ["$", *states]
    tables = [
        {(l, c, r): rng.choice(states) for l in padded for c in states for r in padded}
        for _ in range(2)
    ]
    return Paca.from_tables(states, sigma, accepting, tables[0], tables[1])


def test_criterion_08_local_independence(record):
    def body():
        rng = random.Random(20240)
        pairs = 0
        bad = []
        for _ in range(50):
            a = _random_paca(rng)
            T = rng.choice([2, 3])
            n = rng.randint(2 * (T - 1) + 2, 8)
            w = "".join(rng.choice(a.input_alphabet) for _ in range(n))
            for i, j in itertools.combinations(range(n), 2):
                if j - i <= 2 * (T - 1):
                    continue
                for t in range(T):
                    rep = independence_check(a, w, i, j, t, T)
                    pairs += 1
                    if not rep.independent:
                        bad.append((w, i, j, t))
        f = fixture("appendixA").artifact
        w = "0" * 5 + "11" + "222" + "3" * 5
        dep = independence_check(f, w, 5, 7, 3, 4)
        ok = not bad and not dep.independent
        return ok, (f"{pairs} distant (pair, step) cases, {len(bad)} dependent; "
                    f"appendixA c1/c2 sharing a coin: joint {dep.p_ij} vs product {dep.p_i * dep.p_j}")

    check(record, 8, 120, body)


def test_criterion_09_critical_cells_bounded(record):
    def body():
        details = []
        ok = True
        for name in paca_fixture_names():
            f = fixture(name)
            a = f.artifact
            an = LocalAnalyzer(a)
            oracle = MembershipOracle(a, f.mode)
            per_len = {}
            for n in range(4, 13):
                members = f.members(n)
                if not members:
                    continue
                best = 0
                for w in members:
                    if n <= 8 and not oracle(w):
                        ok = False
                        details.append(f"{name}: {w} is not a member")
                    for t in an.possible_accept_steps(w, f.horizon):
                        best = max(best, len(critical_cells(a, w, t, analyzer=an, method="set").critical))
                per_len[n] = best
            same = set(per_len.values()) == {f.critical_constant}
            ok = ok and same
            details.append(f"{name}: {f.critical_constant} at lengths {min(per_len)}..{max(per_len)}"
                           + ("" if same else f" but saw {per_len}"))
        return ok, "; ".join(details)

    check(record, 9, 300, body)


def _random_llin(rng, sigma, ell, rational=True):
    choices = [Fraction(0), Fraction(1), Fraction(2)] + ([Fraction(1, 2), Fraction(3, 2)] if rational else [])
    weights = {m: rng.choice(choices) for m in all_words(sigma, ell)}
    theta = rng.choice([Fraction(0), Fraction(1), Fraction(2), Fraction(5, 2)])
    affixes = short_words(sigma, ell - 1)
    pre = [x for x in affixes if rng.random() < 0.8] if ell > 1 else None
    suf = [x for x in affixes if rng.random() < 0.8] if ell > 1 else None
    return LLinSpec.build(sigma, ell, weights, theta, pre, suf)


def test_criterion_10_subregular_suite(record):
    def body():
        rng = random.Random(7)
        details = []
        ok = True

        # scanner against direct evaluation
        mism = 0
        for _ in range(10):
            sigma = rng.choice(["01", "012"])
            spec = _random_llin(rng, sigma, rng.choice([1, 2]))
            scan = scanner_llin(spec)
            mism += sum(scan(w) != llin_membership(spec, w) for w in words(sigma, 8 if sigma == "01" else 7))
        ok &= mism == 0
        details.append(f"scanner mismatches {mism}")

        # normalisation keeps membership and certifies its gap
        specs = [fixture("th11").artifact, fixture("th11_ternary").artifact]
        specs += [_random_llin(rng, "01", rng.choice([1, 2])) for _ in range(6)]
        moved = gapless = 0
        for spec in specs:
            norm = normalize_llin(spec)
            eps = norm.epsilon
            n_max = 10 if len(spec.alphabet) == 2 else 8
            for w in words(spec.alphabet, n_max):
                if llin_membership(spec, w) != llin_membership(norm.spec, w):
                    moved += 1
                v = norm.spec.value(w)
                if not (v.compare(1 - eps) < 0 or v.compare(1 + eps) > 0):
                    gapless += 1
        ok &= moved == 0 and gapless == 0
        details.append(f"normalisation: {moved} membership changes, {gapless} words inside the gap")

        # strictly local specs as weighted specs
        slt_bad = 0
        for _ in range(8):
            ell = rng.choice([2, 3])
            allowed = [m for m in all_words("01", ell) if rng.random() < 0.7]
            affixes = short_words("01", ell - 1)
            spec = SltSpec.build("01", ell, allowed, [x for x in affixes if rng.random() < 0.8],
                                 [x for x in affixes if rng.random() < 0.8])
            emb = spec.as_llin()
            slt_bad += sum(slt_membership(spec, w) != llin_membership(emb, w) for w in words("01", 8))
        ok &= slt_bad == 0
        details.append(f"embedding mismatches {slt_bad}")

        # De Morgan and involution
        sig = ("0", "1", "2")
        A = Threshold(sig, "1", Fraction(1))
        B = Threshold(sig, "2", Fraction(1))
        C = complement(SltSpec.build("012", 2, {"00", "01", "12", "22", "11", "02"}))
        laws = 0
        for w in words("012", 6):
            laws += eval_expr(complement(union(A, B)), w) != eval_expr(inter(complement(A), complement(B)), w)
            laws += eval_expr(complement(inter(A, C)), w) != eval_expr(union(complement(A), complement(C)), w)
            laws += eval_expr(complement(complement(C)), w) != eval_expr(C, w)
        ok &= laws == 0
        details.append(f"lattice-law violations {laws}")
        return ok, "; ".join(details)

    check(record, 10, 120, body)


if __name__ == "__main__":
    import sys

    raise SystemExit(pytest.main([__file__, "-v", *sys.argv[1:]]))
