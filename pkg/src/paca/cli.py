"""Command-line front end: ``paca <verb> [options]``.

Exit codes: 0 success or true, 1 false or counterexample, 2 contract
violation, 3 usage or format error, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .core import BudgetExceeded, Paca, PacaError, RandomTape, run, space_time
from .dyadic import Dyadic
from .langs import (
    Atom,
    bounded_equivalence,
    check_word,
    eval_expr,
    lang_from_json,
    lang_to_json,
    normalize_llin,
    scanner_llin,
    LLinSpec,
)
from .prob import (
    Budget,
    ErrorMode,
    MembershipOracle,
    Verdict,
    acceptance_prob,
    acceptance_prob_dp,
    acceptance_prob_enum,
    critical_cells,
    independence_check,
    validate_horizon,
)
from .render import render
from .serialize import automaton_from_json, automaton_to_json, dump, load_json

OK, FALSE, VIOLATION, USAGE, BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a fraction: {text!r}") from None


def _prob_text(p: Dyadic) -> str:
    return f"{p} (decimal approx. {float(p):.6g})"


def _emit(args, data: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# loading


def _load_any(ref: str):
    """An automaton or language from a file path or a fixture name."""
    p = Path(ref)
    if p.exists():
        data = load_json(p)
        if "kind" in data:
            return lang_from_json(data)
        return automaton_from_json(data)
    from .corpus import fixture, fixture_names

    if ref in fixture_names():
        art = fixture(ref).artifact
        if isinstance(art, (Paca, Atom)):
            return art
    raise PacaError(f"no file or fixture named {ref!r}")


def _automaton(ref: str) -> Paca:
    a = _load_any(ref)
    if not isinstance(a, Paca):
        raise PacaError(f"{ref} is a language, not an automaton")
    return a


def _language(ref: str) -> Atom:
    a = _load_any(ref)
    if not isinstance(a, Atom):
        raise PacaError(f"{ref} is an automaton, not a language")
    return a


def _tape(args, n: int, height: int) -> Optional[RandomTape]:
    if args.tape and args.seed is not None:
        raise UsageError("give either --tape or --seed")
    if args.tape:
        return RandomTape.parse(args.tape)
    if args.seed is not None:
        return RandomTape.from_seed(args.seed, height, n)
    return None


# ---------------------------------------------------------------------------
# verbs


def cmd_run(args) -> int:
    a = _automaton(args.automaton)
    T = args.horizon or a.horizon_for(len(args.input))
    if T is None and args.steps is None:
        raise UsageError("no horizon: pass --horizon or --steps")
    height = T if T is not None else args.steps + 1
    tape = _tape(args, len(args.input), height)
    if tape is None and not a.deterministic:
        raise UsageError("a probabilistic automaton needs --tape or --seed")
    steps = args.steps if args.steps is not None else (None if tape is not None else T - 1)
    res = run(a, args.input, tape, steps)
    _emit(args, {"accepted": res.accepted, "accepted_at": res.accepted_at, "steps": res.steps},
          f"accepted at step {res.accepted_at}" if res.accepted else f"rejected within {res.steps} steps")
    return OK if res.accepted else FALSE


def cmd_prob(args) -> int:
    a = _automaton(args.automaton)
    budget = Budget.from_env()
    if args.method == "enum":
        p = acceptance_prob_enum(a, args.input, args.horizon, budget)
    elif args.method == "dp":
        p = acceptance_prob_dp(a, args.input, args.horizon, budget)
    else:
        p = acceptance_prob(a, args.input, args.horizon, budget)
    _emit(args, {"probability": str(p), "exact": p.to_json(), "approx": float(p)},
          f"acceptance probability {_prob_text(p)}")
    return OK


def cmd_classify(args) -> int:
    a = _automaton(args.automaton)
    mode = ErrorMode.parse(args.mode)
    p = acceptance_prob(a, args.input, args.horizon, Budget.from_env())
    from .prob import verdict_for

    v = verdict_for(p, mode)
    _emit(args, {"verdict": v.value, "probability": str(p)}, f"{v.value} (probability {_prob_text(p)})")
    return {Verdict.IN: OK, Verdict.NOT_IN: FALSE, Verdict.CONTRACT_VIOLATION: VIOLATION}[v]


def cmd_critical(args) -> int:
    a = _automaton(args.automaton)
    rep = critical_cells(a, args.input, args.step, Budget.from_env(), method=args.method)
    cells = sorted(rep.critical)
    _emit(args, {"step": args.step, "critical": cells},
          f"critical cells at step {args.step}: {', '.join(map(str, cells)) or 'none'}")
    return OK


def cmd_independence(args) -> int:
    a = _automaton(args.automaton)
    rep = independence_check(a, args.input, args.i, args.j, args.step, args.horizon, Budget.from_env())
    data = {"independent": rep.independent, "p_i": str(rep.p_i), "p_j": str(rep.p_j),
            "p_ij": str(rep.p_ij), "guaranteed_by_distance": rep.guaranteed}
    text = (f"P[cell {args.i}] = {rep.p_i}, P[cell {args.j}] = {rep.p_j}, joint = {rep.p_ij}: "
            + ("independent" if rep.independent else "dependent"))
    _emit(args, data, text)
    return OK if rep.independent else FALSE


def cmd_horizon(args) -> int:
    a = _automaton(args.automaton)
    chk = validate_horizon(a, args.input, args.claimed, Budget.from_env())
    _emit(args, {"ok": chk.ok, "violated_at": chk.violated_at},
          "ok" if chk.ok else f"violated at step {chk.violated_at}")
    return OK if chk.ok else FALSE


def cmd_transform(args) -> int:
    from . import transforms as tr

    name = args.name
    if name == "from-llin":
        spec = _language(args.inp)
        if not isinstance(spec, LLinSpec):
            raise PacaError("from-llin needs a weighted window spec")
        rep = tr.paca_from_llin(spec, args.p_target or Fraction(1, 3))
    elif name == "expand":
        data = load_json(args.inp)
        from .serialize import multi_rule_from_json

        out = tr.expand_rules(multi_rule_from_json(data), {"builtin": "expanded", "params": {"virtual": data}})
        rep = tr.TransformReport(out, out.horizon, {"k": len(data["rules"]).bit_length() - 1}, [])
    else:
        C = _automaton(args.inp)
        if name == "reduce-one":
            _need(args, "p", "p_target")
            rep = tr.reduce_error_one_sided(C, args.p, args.p_target)
        elif name == "reduce-two":
            _need(args, "p", "p_target")
            rep = tr.reduce_error_two_sided(C, args.p, args.p_target, horizon_budget=args.budget)
        elif name in ("union", "intersect"):
            if not args.in2:
                raise UsageError(f"{name} needs --in2")
            C2 = _automaton(args.in2)
            errors = None
            if args.p is not None:
                errors = (args.p, args.p2 if args.p2 is not None else args.p)
            fn = tr.union_paca if name == "union" else tr.intersect_paca
            rep = fn(C, C2, errors)
        elif name == "derandomize":
            M = int(args.budget) if args.budget is not None else None
            rep = tr.derandomize_one_sided(C, None, M, args.calibrate_len)
        else:
            raise UsageError(f"unknown transform {name!r}")
    provenance = {"transform": name, "inputs": [x for x in (args.inp, args.in2) if x], **rep.to_json()}
    doc = automaton_to_json(rep.output, provenance)
    if args.out:
        dump(doc, args.out)
    _emit(args, provenance,
          "\n".join([f"{name}: derived horizon {rep.derived_horizon}", *rep.notes]
                    + ([f"written to {args.out}"] if args.out else [])))
    return OK


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required")


def cmd_lang(args) -> int:
    spec = _language(args.spec)
    if args.normalize:
        if not isinstance(spec, LLinSpec):
            raise PacaError("only weighted window specs can be normalised")
        norm = normalize_llin(spec)
        data = {"spec": lang_to_json(norm.spec), "epsilon": str(norm.epsilon), "scale": str(norm.scale),
                "k": norm.k, "error": str(norm.error)}
        _emit(args, data, f"k = {norm.k}, scale = {norm.scale}, gap = {norm.epsilon}, "
                          f"single-trial error = {norm.error}")
        if args.out:
            dump(lang_to_json(norm.spec), args.out)
        return OK
    if args.input is None:
        raise UsageError("--input or --normalize is required")
    check_word(spec.alphabet, args.input)
    if args.scanner:
        if not isinstance(spec, LLinSpec):
            raise PacaError("the scanner works on weighted window specs")
        member = scanner_llin(spec)(args.input)
    else:
        member = eval_expr(spec, args.input)
    _emit(args, {"member": member}, "member" if member else "not a member")
    return OK if member else FALSE


def _oracle(ref: str, mode: Optional[ErrorMode]):
    x = _load_any(ref)
    if isinstance(x, Atom):
        return x, x.alphabet
    if mode is None:
        raise UsageError(f"{ref} is an automaton; pass --mode")
    return MembershipOracle(x, mode, budget=Budget.from_env()), x.input_alphabet


def cmd_equiv(args) -> int:
    mode_a = ErrorMode.parse(args.mode_a or args.mode) if (args.mode_a or args.mode) else None
    mode_b = ErrorMode.parse(args.mode_b or args.mode) if (args.mode_b or args.mode) else None
    a, sa = _oracle(args.a, mode_a)
    b, sb = _oracle(args.b, mode_b)
    if set(sa) != set(sb):
        raise PacaError("the two sides have different alphabets")
    try:
        res = bounded_equivalence(a, b, sa, args.max_len)
    except ValueError as exc:
        if "violates" in str(exc):
            _emit(args, {"contract_violation": str(exc)}, str(exc))
            return VIOLATION
        raise
    _emit(args, {"equal": res.equal, "counterexample": res.counterexample, "checked": res.checked},
          f"equal on all {res.checked} words up to length {args.max_len}" if res.equal
          else f"counterexample: {res.counterexample!r}")
    return OK if res.equal else FALSE


def cmd_diagram(args) -> int:
    a = _automaton(args.automaton)
    steps = args.steps
    if steps is None:
        T = a.horizon_for(len(args.input))
        if T is None:
            raise UsageError("pass --steps")
        steps = T - 1
    tape = _tape(args, len(args.input), max(steps, 1))
    if tape is None and not a.deterministic and steps > 0:
        raise UsageError("a probabilistic automaton needs --tape or --seed")
    d = space_time(a, args.input, tape, steps)
    doc = render(d, args.format)
    if args.out:
        Path(args.out).write_text(doc)
    else:
        sys.stdout.write(doc)
    return OK


def cmd_fixtures(args) -> int:
    from .corpus import export_corpus, fixture, fixture_names

    if args.export:
        written = export_corpus(args.export)
        _emit(args, {"written": written}, "\n".join(written))
        return OK
    if args.show:
        f = fixture(args.show)
        rows = [f"{w}: {v}" for w, v in f.expected]
        _emit(args, {"name": f.name, "description": f.description,
                     "expected": [[w, str(v) if not isinstance(v, (bool, list)) else v] for w, v in f.expected]},
              "\n".join([f"{f.name}: {f.description}", *rows]))
        return OK
    names = fixture_names()
    _emit(args, {"fixtures": names}, "\n".join(f"{n}: {fixture(n).description}" for n in names))
    return OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="paca", description="Exact analysis of probabilistic acceptor cellular automata.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, automaton=True):
        if automaton:
            sp.add_argument("--automaton", required=True, help="automaton JSON file or fixture name")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("run", help="simulate on a fixed tape")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--tape", help="coin rows separated by ';'")
    sp.add_argument("--seed", type=int, help="derive the tape from a seed (demo only)")
    sp.add_argument("--steps", type=int)
    sp.add_argument("--horizon", type=int)
    sp.set_defaults(fn=cmd_run)

    sp = sub.add_parser("prob", help="exact acceptance probability")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--method", choices=["auto", "dp", "enum"], default="auto")
    sp.set_defaults(fn=cmd_prob)

    sp = sub.add_parser("classify", help="membership under an error contract")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--mode", required=True, help="one:P or two:P")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("critical", help="cells whose acceptance depends on coins")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--step", type=int, required=True)
    sp.add_argument("--method", choices=["enum", "set"], default="enum")
    sp.set_defaults(fn=cmd_critical)

    sp = sub.add_parser("independence", help="compare joint and product acceptance of two cells")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--step", type=int, required=True)
    sp.add_argument("--horizon", type=int)
    sp.set_defaults(fn=cmd_independence)

    sp = sub.add_parser("horizon", help="check a claimed horizon on one input")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--claimed", type=int, required=True)
    sp.set_defaults(fn=cmd_horizon)

    sp = sub.add_parser("transform", help="build a new automaton")
    sp.add_argument("name", choices=["reduce-one", "reduce-two", "union", "intersect",
                                     "derandomize", "from-llin", "expand"])
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--in2")
    sp.add_argument("--out")
    sp.add_argument("--p", type=_fraction)
    sp.add_argument("--p2", type=_fraction)
    sp.add_argument("--p-target", type=_fraction)
    sp.add_argument("--budget", type=int, help="horizon budget (reduce-two) or M (derandomize)")
    sp.add_argument("--calibrate-len", type=int, default=10)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_transform)

    sp = sub.add_parser("lang", help="language membership and normalisation")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--input")
    sp.add_argument("--scanner", action="store_true")
    sp.add_argument("--normalize", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_lang)

    sp = sub.add_parser("equiv", help="bounded-length language equivalence")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--mode", help="error contract for automaton sides")
    sp.add_argument("--mode-a")
    sp.add_argument("--mode-b")
    sp.add_argument("--max-len", type=int, default=8)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_equiv)

    sp = sub.add_parser("diagram", help="render a space-time diagram")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--tape")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", choices=["text", "svg"], default="text")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_diagram)

    sp = sub.add_parser("fixtures", help="list, show or export the corpus")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--show")
    sp.add_argument("--export", metavar="DIR")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_fixtures)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (PacaError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
