"""Named factories for rule-backed automata, so they can be saved and reloaded.

A rule-backed automaton is stored as ``{"builtin": name, "params": {...}}``;
loading calls the factory registered under ``name`` with those parameters.
"""

from __future__ import annotations

from typing import Callable

from .core import FormatError, Paca

_FACTORIES: dict[str, Callable[[dict], Paca]] = {}


def register(name: str):
    def deco(fn: Callable[[dict], Paca]):
        _FACTORIES[name] = fn
        return fn

    return deco


def _ensure_loaded() -> None:
    # the modules register their factories on import
    from . import corpus, transforms  # noqa: F401


def build(name: str, params: dict) -> Paca:
    _ensure_loaded()
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise FormatError(f"unknown builtin automaton {name!r}") from None
    return factory(params)


def builtin_names() -> list[str]:
    _ensure_loaded()
    return sorted(_FACTORIES)
