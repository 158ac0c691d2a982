"""Interchange formats: diagram JSON, substitution JSON, tower JSON, elements, DOT.

One self-describing text format for diagrams, with stationary descriptors as
first-class citizens: {"kind": "explicit", "levels": [...], "edges": [...]} or
{"kind": "stationary", "alphabet": [...], "top": [...], "incoming": {...}}.
Parsing errors carry line/column for syntax problems and name the violated
invariant for semantic ones.
"""
from __future__ import annotations

import json
from typing import Union

from .diagram import BratteliDiagram, Edge, OrderedDiagram
from .dimension import GroupElement
from .stationary import StationaryOrderedDiagram, Substitution
from .towers import KRLevel, NestedKRSequence

Diagram = Union[BratteliDiagram, OrderedDiagram, StationaryOrderedDiagram]


class ParseError(ValueError):
    pass


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_diagram(text: str) -> Diagram:
    data = _load_json(text)
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError("top-level object with a 'kind' field expected")
    kind = data["kind"]
    if kind == "stationary":
        try:
            alphabet = tuple(data["alphabet"])
            incoming = data["incoming"]
            return StationaryOrderedDiagram(
                alphabet,
                tuple(data["top"]),
                tuple(tuple(incoming[a]) for a in alphabet),
            )
        except KeyError as exc:
            raise ParseError(f"stationary diagram needs field {exc}") from None
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    if kind != "explicit":
        raise ParseError(f"unknown diagram kind {kind!r}")
    try:
        levels = [list(lv) for lv in data["levels"]]
        raw_edges = data["edges"]
    except KeyError as exc:
        raise ParseError(f"explicit diagram needs field {exc}") from None
    if len(raw_edges) != len(levels) - 1:
        raise ParseError("need one edge list between consecutive levels")
    for n, lv in enumerate(levels):
        if len(set(lv)) != len(lv):
            raise ParseError(f"duplicate vertex labels at level {n}")
    edge_levels = []
    orders_seen: set[bool] = set()
    for n, lv in enumerate(raw_edges, start=1):
        out = []
        for rec in lv:
            try:
                s, r, order = rec["s"], rec["r"], rec.get("ord")
            except (KeyError, TypeError):
                raise ParseError(
                    f"edge records need 's' and 'r' labels (level {n})"
                ) from None
            if s not in levels[n - 1]:
                raise ParseError(f"unknown source label {s!r} at level {n}")
            if r not in levels[n]:
                raise ParseError(f"unknown range label {r!r} at level {n}")
            orders_seen.add(order is not None)
            out.append(Edge(levels[n - 1].index(s), levels[n].index(r), order))
        edge_levels.append(tuple(out))
    if orders_seen == {True, False}:
        raise ParseError("either every edge carries 'ord' or none does")
    ordered = orders_seen == {True}
    cls = OrderedDiagram if ordered else BratteliDiagram
    try:
        return cls(tuple(tuple(lv) for lv in levels), tuple(edge_levels))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_diagram(d: Diagram) -> str:
    if isinstance(d, StationaryOrderedDiagram):
        data = {
            "kind": "stationary",
            "alphabet": list(d.alphabet),
            "top": list(d.top_word),
            "incoming": {a: list(w) for a, w in zip(d.alphabet, d.words)},
        }
    else:
        data = {
            "kind": "explicit",
            "levels": [list(lv) for lv in d.levels],
            "edges": [
                [
                    {"s": d.label(n - 1, e.src), "r": d.label(n, e.dst), "ord": e.order}
                    for e in d.edges[n - 1]
                ]
                for n in range(1, d.depth + 1)
            ],
        }
    return json.dumps(data, sort_keys=True)


def parse_substitution(text: str) -> Substitution:
    data = _load_json(text)
    try:
        alphabet = tuple(data["alphabet"])
        rules = data["rules"]
    except (KeyError, TypeError):
        raise ParseError("substitution needs 'alphabet' and 'rules'") from None
    words = []
    for a in alphabet:
        if a not in rules:
            raise ParseError(f"missing rule for symbol {a!r}")
        w = rules[a]
        words.append(tuple(w) if not isinstance(w, str) else tuple(w))
    try:
        return Substitution(alphabet, tuple(words))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_substitution(sigma: Substitution) -> str:
    single = all(len(s) == 1 for s in sigma.alphabet)
    rules = {
        a: "".join(w) if single else list(w) for a, w in zip(sigma.alphabet, sigma.words)
    }
    return json.dumps({"alphabet": list(sigma.alphabet), "rules": rules}, sort_keys=True)


def parse_kr(text: str) -> NestedKRSequence:
    data = _load_json(text)
    try:
        levels = []
        for n, rec in enumerate(data["levels"]):
            words = rec.get("words")
            if n == 0 and words in (None, []):
                levels.append(KRLevel(tuple(rec["heights"]), None))
            else:
                levels.append(
                    KRLevel(tuple(rec["heights"]), tuple(tuple(w) for w in words))
                )
        return NestedKRSequence(tuple(levels))
    except (KeyError, TypeError):
        raise ParseError("tower data needs levels with 'heights' and 'words'") from None
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_kr(seq: NestedKRSequence) -> str:
    return json.dumps(
        {
            "levels": [
                {
                    "heights": list(lv.heights),
                    "words": None if lv.words is None else [list(w) for w in lv.words],
                }
                for lv in seq.levels
            ]
        },
        sort_keys=True,
    )


def parse_finite_change(text: str, root_label: str = "v0"):
    """Change spec: {"kind": "prefix", "levels": [...], "edges": [...]} where the
    levels start at level 1 and edge sources at level 1 name the root."""
    from .equivalence import FiniteChange

    data = _load_json(text)
    if not isinstance(data, dict) or data.get("kind") != "prefix":
        raise ParseError("change spec must have kind 'prefix'")
    try:
        levels = [list(lv) for lv in data["levels"]]
        raw_edges = data["edges"]
    except KeyError as exc:
        raise ParseError(f"change spec needs field {exc}") from None
    if len(raw_edges) != len(levels):
        raise ParseError("a change carries one edge list per replaced level")
    sources = [[root_label]] + levels[:-1]
    edge_levels = []
    for n, lv in enumerate(raw_edges, start=1):
        out = []
        for rec in lv:
            try:
                s, r, order = rec["s"], rec["r"], rec.get("ord")
            except (KeyError, TypeError):
                raise ParseError(f"edge records need 's' and 'r' labels (level {n})") from None
            if s not in sources[n - 1]:
                raise ParseError(f"unknown source label {s!r} at level {n}")
            if r not in levels[n - 1]:
                raise ParseError(f"unknown range label {r!r} at level {n}")
            out.append(Edge(sources[n - 1].index(s), levels[n - 1].index(r), order))
        edge_levels.append(tuple(out))
    return FiniteChange(tuple(tuple(lv) for lv in levels), tuple(edge_levels))


def parse_element(text: str) -> GroupElement:
    """Element syntax: 'stage:[v1,v2,...]', e.g. 2:[3,-1]."""
    stage_part, sep, vec_part = text.partition(":")
    if not sep:
        raise ParseError("element syntax is stage:[v1,v2,...]")
    try:
        stage = int(stage_part)
        vec = json.loads(vec_part)
    except (ValueError, json.JSONDecodeError):
        raise ParseError(f"malformed element {text!r}") from None
    if not isinstance(vec, list) or not all(isinstance(x, int) for x in vec):
        raise ParseError("element vector must be a list of integers")
    if stage < 0:
        raise ParseError("element stage must be nonnegative")
    return GroupElement(stage, tuple(vec))


def format_element(g: GroupElement) -> str:
    return f"{g.stage}:[{','.join(str(x) for x in g.vector)}]"


def export_dot(d: BratteliDiagram, depth: int | None = None) -> str:
    """Layered DOT rendering: one rank per level, edges downward, deterministic.

    Ordered diagrams label every edge with its order index; parallel edges are
    drawn individually so edge counts match the incidence entries.
    """
    if isinstance(d, StationaryOrderedDiagram):
        d = d.truncate(depth if depth is not None else 3)
    elif depth is not None:
        d = d.truncate(depth)
    lines = ["digraph bratteli {", "  rankdir=TB;"]
    for n, lv in enumerate(d.levels):
        decls = " ".join(f'"v{n}_{i}" [label="{label}"];' for i, label in enumerate(lv))
        lines.append(f"  {{ rank=same; {decls} }}")
    for n in range(1, d.depth + 1):
        ranked = sorted(
            enumerate(d.edges[n - 1]),
            key=lambda pair: (pair[1].dst, pair[1].order if pair[1].order is not None else pair[0]),
        )
        for eid, e in ranked:
            attr = f' [label="{e.order}"]' if e.order is not None else ""
            lines.append(f'  "v{n - 1}_{e.src}" -> "v{n}_{e.dst}"{attr};')
    lines.append("}")
    return "\n".join(lines) + "\n"
