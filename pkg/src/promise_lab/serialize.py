"""JSON forms of automata, problems and reports.

Rationals are written as ``"num/den"`` strings (integers as ``"5"``).
``dumps`` is canonical: sorted keys, fixed indentation, trailing newline,
so load -> dump -> load -> dump is byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .automata import OrthogonalMatrix, StochasticMatrix, UnaryDFA, UnaryMCQFA, UnaryPFA
from .constructions import BlockRotationQFA
from .numtheory import format_rational, parse_rational

Automaton = Union[UnaryDFA, UnaryPFA, UnaryMCQFA, BlockRotationQFA]


def automaton_to_dict(automaton: Automaton) -> dict:
    if isinstance(automaton, UnaryDFA):
        return {
            "kind": "dfa",
            "states": list(automaton.states),
            "start": automaton.start,
            "next": list(automaton.next),
            "accepting": sorted(automaton.accepting),
        }
    if isinstance(automaton, UnaryPFA):
        out = {
            "kind": "pfa",
            "states": list(automaton.states),
            "initial": [format_rational(x) for x in automaton.initial],
            "transition": [
                [format_rational(x) for x in row] for row in automaton.transition.to_dense()
            ],
            "accepting": sorted(automaton.accepting),
        }
        if automaton.neutral:
            out["neutral"] = sorted(automaton.neutral)
        return out
    if isinstance(automaton, UnaryMCQFA):
        return {
            "kind": "mcqfa",
            "states": list(automaton.states),
            "initial": [format_rational(x) for x in automaton.initial],
            "transition": [
                [format_rational(x) for x in row] for row in automaton.transition.rows
            ],
            "accepting": sorted(automaton.accepting),
        }
    if isinstance(automaton, BlockRotationQFA):
        # irrational entries: stored by construction parameters
        return {
            "kind": "lkn-mcqfa",
            "k": automaton.k,
            "n": automaton.n,
            "states": list(automaton.states),
            "accepting": sorted(automaton.accepting),
        }
    raise TypeError(f"cannot serialize {type(automaton).__name__}")


def automaton_from_dict(data: dict) -> Automaton:
    kind = data.get("kind")
    if kind == "dfa":
        return UnaryDFA.build(data["next"], data["start"], data["accepting"], states=data["states"])
    if kind == "pfa":
        rows = [[parse_rational(x) for x in row] for row in data["transition"]]
        return UnaryPFA.build(
            StochasticMatrix.from_dense(rows),
            [parse_rational(x) for x in data["initial"]],
            data["accepting"],
            data.get("neutral", ()),
            states=data["states"],
        )
    if kind == "mcqfa":
        rows = [[parse_rational(x) for x in row] for row in data["transition"]]
        return UnaryMCQFA.build(
            OrthogonalMatrix.from_dense(rows),
            [parse_rational(x) for x in data["initial"]],
            data["accepting"],
            states=data["states"],
        )
    if kind == "lkn-mcqfa":
        return BlockRotationQFA(int(data["k"]), int(data["n"]))
    raise ValueError(f"unknown automaton kind {kind!r}")


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def dumps_automaton(automaton: Automaton) -> str:
    return dumps(automaton_to_dict(automaton))


def loads_automaton(text: str) -> Automaton:
    return automaton_from_dict(json.loads(text))


def load_automaton(path: str | Path) -> Automaton:
    return loads_automaton(Path(path).read_text())


def save_automaton(automaton: Automaton, path: str | Path) -> None:
    Path(path).write_text(dumps_automaton(automaton))
