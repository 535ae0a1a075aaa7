"""JSON files for automata.

Table-backed automata are stored state by state::

    {"states": [...], "boundary": "$", "input_alphabet": [...], "accepting": [...],
     "rule0": {"l,c,r": "q", ...}, "rule1": {...}, "horizon": {"kind": "const", "value": 4}}

Rule-backed automata store ``{"builtin": name, "params": {...}}`` as both
rules; the builtin rebuilds the whole automaton.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .core import BOUNDARY, FormatError, Paca, TableRule


def _horizon_to_json(h):
    if h is None:
        return None
    if isinstance(h, int):
        return {"kind": "const", "value": h}
    raise FormatError("only constant horizons can be saved")


def _horizon_from_json(h):
    if h is None:
        return None
    if not isinstance(h, dict) or h.get("kind") != "const" or not isinstance(h.get("value"), int):
        raise FormatError(f"bad horizon {h!r}")
    return h["value"]


def _table_to_json(rule: TableRule) -> dict:
    out = {}
    for (l, c, r), q in rule.table.items():
        for s in (l, c, r):
            if "," in s:
                raise FormatError(f"state {s!r} contains a comma")
        out[f"{l},{c},{r}"] = q
    return dict(sorted(out.items()))


def _table_from_json(data: dict) -> TableRule:
    table = {}
    for key, q in data.items():
        parts = key.split(",")
        if len(parts) != 3:
            raise FormatError(f"bad rule key {key!r}")
        table[tuple(parts)] = q
    return TableRule(table)


def automaton_to_json(a: Paca, provenance: Union[dict, None] = None) -> dict:
    out: dict = {"name": a.name}
    if isinstance(a.rule0, TableRule) and isinstance(a.rule1, TableRule):
        if a.states is None or a.accepting_set is None:
            raise FormatError("table automata need explicit states and accepting set")
        out.update({
            "states": list(a.states),
            "boundary": a.boundary,
            "input_alphabet": list(a.input_alphabet),
            "accepting": sorted(a.accepting_set),
            "rule0": _table_to_json(a.rule0),
            "rule1": _table_to_json(a.rule1),
        })
    elif a.source is not None:
        out.update({
            "boundary": a.boundary,
            "input_alphabet": list(a.input_alphabet),
            "rule0": a.source,
            "rule1": a.source,
        })
    else:
        raise FormatError(f"{a!r} has no saved form")
    out["horizon"] = _horizon_to_json(a.horizon)
    if provenance is not None:
        out["provenance"] = provenance
    return out


def automaton_from_json(data: dict) -> Paca:
    from .registry import build

    try:
        r0, r1 = data["rule0"], data.get("rule1", data["rule0"])
        boundary = data.get("boundary", BOUNDARY)
        if isinstance(r0, dict) and "builtin" in r0:
            if r1 != r0:
                raise FormatError("builtin automata store the same source in both rules")
            a = build(r0["builtin"], r0.get("params", {}))
            if "horizon" in data:
                a = a.with_horizon(_horizon_from_json(data["horizon"]))
            if "name" in data:
                a.name = data["name"]
            return a
        a = Paca(
            data["input_alphabet"],
            _table_from_json(r0),
            _table_from_json(r1),
            data["accepting"],
            data["states"],
            _horizon_from_json(data.get("horizon")),
            data.get("name", ""),
            boundary=boundary,
        )
        if a.rule0 == a.rule1:
            a.rule1 = a.rule0
            a.deterministic = True
        return a
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r}") from None


def dump(obj: dict, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def load_json(path: Union[str, Path]) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None


def load_automaton(path_or_name: str) -> Paca:
    """A file path, or the name of a corpus fixture."""
    p = Path(path_or_name)
    if p.exists():
        return automaton_from_json(load_json(p))
    from .corpus import fixture, fixture_names

    if path_or_name in fixture_names():
        art = fixture(path_or_name).artifact
        if isinstance(art, Paca):
            return art
    raise FormatError(f"no automaton file or fixture named {path_or_name!r}")


def multi_rule_from_json(data: dict):
    """An automaton with ``2**k`` table rules: like the table format, with a
    ``"rules"`` list in place of ``rule0``/``rule1``."""
    from .transforms import MultiRulePaca

    try:
        rules = tuple(_table_from_json(r) for r in data["rules"])
        states = list(data["states"])
        accepting = frozenset(data["accepting"])
        for r in rules:
            gaps = r.missing(states, data.get("boundary", BOUNDARY))
            if gaps:
                raise FormatError(f"table rule is not total, e.g. missing {gaps[0]!r}")
        return MultiRulePaca(
            tuple(data["input_alphabet"]), rules, accepting.__contains__,
            _horizon_from_json(data.get("horizon")), data.get("name", ""),
        )
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r}") from None
