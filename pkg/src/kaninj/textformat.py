"""Plain-text declarations of posets and maps.

::

    # comments run to the end of the line
    poset V { elements: a b t ; order: a<t b<t }
    map emb : A -> V { a->a b->b }

Whitespace between tokens is free; a declaration may span lines.  Order
entries may be chained (``a<b<c``).  Element and declaration names match
``[A-Za-z0-9_]+``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import KanError, ParseError, ValidationError
from .poset import FinPoset, MonotoneMap, validate_poset

_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<tok>->|[A-Za-z0-9_]+|[{}:;<])|(?P<bad>.)")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class Declaration:
    kind: str  # "poset" or "map"
    name: str
    line: int
    # poset: elements, pairs; map: source, target, pairs
    elements: tuple = ()
    pairs: tuple = ()
    source: str = ""
    target: str = ""


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    for m in _TOKEN.finditer(text):
        if m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r}", line, m.start() - start + 1)
        if m.group("tok"):
            out.append(Token(m.group("tok"), line, m.start() - start + 1))
        chunk = m.group(0)
        if "\n" in chunk:
            line += chunk.count("\n")
            start = m.start() + chunk.rindex("\n") + 1
    return out


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, what: str) -> Token:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else Token("", 1, 0)
            raise ParseError(f"unexpected end of input, expected {what}", last.line, last.column + len(last.text))
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next(repr(text))
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.column)
        return t

    def name(self, what: str) -> Token:
        t = self.next(what)
        if not t.text[0].isalnum() and t.text[0] != "_":
            raise ParseError(f"expected {what}, found {t.text!r}", t.line, t.column)
        return t


def _is_name(t: Token | None) -> bool:
    return t is not None and (t.text[0].isalnum() or t.text[0] == "_")


def _poset(s: _Stream, head: Token) -> Declaration:
    name = s.name("poset name").text
    s.expect("{")
    s.expect("elements")
    s.expect(":")
    elements = []
    while _is_name(s.peek()):
        elements.append(s.next("element").text)
    pairs = []
    t = s.next("';' or '}'")
    if t.text == ";":
        s.expect("order")
        s.expect(":")
        while _is_name(s.peek()):
            prev = s.next("element").text
            if s.peek() is None or s.peek().text != "<":
                t = s.peek() or s.next("'<'")
                raise ParseError(f"expected '<' after {prev!r}", t.line, t.column)
            while s.peek() is not None and s.peek().text == "<":
                s.next("'<'")
                nxt = s.name("element").text
                pairs.append((prev, nxt))
                prev = nxt
        t = s.next("'}'")
    if t.text != "}":
        raise ParseError(f"expected '}}', found {t.text!r}", t.line, t.column)
    return Declaration("poset", name, head.line, tuple(elements), tuple(pairs))


def _map(s: _Stream, head: Token) -> Declaration:
    name = s.name("map name").text
    s.expect(":")
    src = s.name("domain name").text
    s.expect("->")
    tgt = s.name("codomain name").text
    s.expect("{")
    pairs = []
    while _is_name(s.peek()):
        a = s.next("element").text
        s.expect("->")
        pairs.append((a, s.name("element").text))
    s.expect("}")
    return Declaration("map", name, head.line, pairs=tuple(pairs), source=src, target=tgt)


def parse_declarations(text: str) -> list[Declaration]:
    s = _Stream(tokenize(text))
    out = []
    while s.peek() is not None:
        head = s.next("declaration")
        if head.text == "poset":
            out.append(_poset(s, head))
        elif head.text == "map":
            out.append(_map(s, head))
        else:
            raise ParseError(f"expected 'poset' or 'map', found {head.text!r}", head.line, head.column)
    return out


class Workspace(dict):
    """Name -> poset or map, remembering the declared ends of every map."""

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        self.ends: dict[str, tuple[str, str]] = {}

    def update(self, other=(), **kw):
        super().update(other, **kw)
        self.ends.update(getattr(other, "ends", {}))


def build(decls, env: Mapping[str, object] | None = None, source: str = "<text>") -> Workspace:
    """Validate declarations into posets and maps; maps may refer to posets in ``env``."""
    known = dict(env or {})
    out = Workspace()

    def add(d, obj):
        if d.name in known or d.name in out:
            raise ValidationError(f"{source}:{d.line}: name {d.name!r} is already declared")
        out[d.name] = obj

    for d in decls:
        if d.kind != "poset":
            continue
        try:
            add(d, validate_poset(d.elements, d.pairs))
        except ValidationError:
            raise
        except KanError as exc:
            raise ValidationError(f"{source}:{d.line}: poset {d.name}: {type(exc).__name__}: {exc}") from None
    for d in decls:
        if d.kind != "map":
            continue
        ends = []
        for which in (d.source, d.target):
            P = out.get(which, known.get(which))
            if not isinstance(P, FinPoset):
                raise ValidationError(f"{source}:{d.line}: map {d.name}: no poset named {which!r}")
            ends.append(P)
        assignment = {}
        for a, b in d.pairs:
            if a in assignment:
                raise ValidationError(f"{source}:{d.line}: map {d.name}: {a} is assigned twice")
            assignment[a] = b
        try:
            add(d, MonotoneMap(ends[0], ends[1], assignment))
            out.ends[d.name] = (d.source, d.target)
        except ValidationError:
            raise
        except (KanError, KeyError, ValueError) as exc:
            raise ValidationError(f"{source}:{d.line}: map {d.name}: {type(exc).__name__}: {exc}") from None
    return out


def parse(text: str, env: Mapping[str, object] | None = None, source: str = "<text>") -> Workspace:
    return build(parse_declarations(text), env, source)


# writing -------------------------------------------------------------------------------


def format_poset(name: str, P: FinPoset) -> str:
    order = " ".join(f"{a}<{b}" for a, b in P.covers())
    return f"poset {name} {{ elements: {' '.join(P.elements)} ; order: {order} }}".replace(":  }", ": }")


def format_map(name: str, f: MonotoneMap, dom: str, cod: str) -> str:
    body = " ".join(f"{a}->{b}" for a, b in f.mapping.items())
    return f"map {name} : {dom} -> {cod} {{ {body} }}"


def serialize(env: Mapping[str, object]) -> str:
    """Posets first, then maps; a map's ends must be posets of ``env``.

    Declared end names are reused when ``env`` is a :class:`Workspace`.
    """
    lines = []
    names = {}
    declared = getattr(env, "ends", {})
    for name, obj in env.items():
        if isinstance(obj, FinPoset):
            lines.append(format_poset(name, obj))
            names.setdefault(obj, name)
    for name, obj in env.items():
        if isinstance(obj, MonotoneMap):
            try:
                dom, cod = declared.get(name) or (names[obj.dom], names[obj.cod])
                lines.append(format_map(name, obj, dom, cod))
            except KeyError:
                raise ValueError(f"map {name} has an end that is not in the environment") from None
    return "\n".join(lines) + "\n"


def format_trace(trace) -> str:
    """Stages as ``X0, X1, ...`` followed by ``connect i i+1`` lines."""
    lines = [format_poset(f"X{i}", X) for i, X in enumerate(trace.stages)]
    for i, step in enumerate(trace.steps):
        body = " ".join(f"{a}->{b}" for a, b in step.mapping.items())
        lines.append(f"connect {i} {i + 1} : {body}")
    return "\n".join(lines) + "\n"


def to_dot(P: FinPoset, name: str = "P") -> str:
    """Hasse diagram in DOT, edges drawn upwards."""
    out = [f"digraph {name} {{", "  rankdir=BT;"]
    out += [f'  "{x}";' for x in P.elements]
    out += [f'  "{a}" -> "{b}";' for a, b in P.covers()]
    out.append("}")
    return "\n".join(out) + "\n"
