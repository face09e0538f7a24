"""Parsing of scalar literals and algebra expressions.

Grammar for Leavitt path algebra elements::

    element := ['-'] term (('+' | '-') term)*
    term    := scalar '*' mono | scalar | mono
    mono    := '[' path ';' path ']'
    path    := NAME ('.' NAME)*          # a single vertex name is a trivial path
    scalar  := INT ['/' INT]

A bare scalar stands for that multiple of the identity.  Groupoid elements use
the same shape with a morphism NAME in place of ``mono``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .graph import Graph, GraphError, Path
from .groupoid import AlgebraElement, FiniteGroupoid
from .lpa import LpaElement, LpaError, Monomial, normalize, vertex_monomial
from .scalars import Raw, RingError, RingSpec

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/\[\];.]))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.position = position
        self.text = text

    def __str__(self):
        out = f"{self.message} at position {self.position}"
        if self.text is not None:
            out += f"\n  {self.text}\n  {' ' * self.position}^"
        return out


@dataclass
class Token:
    kind: str  # "num", "name", "op" or "end"
    value: str
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[at]!r}", at, text)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: RingSpec):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.pos, self.text)

    def describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "end" else repr(tok.value)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.value == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> Token:
        tok = self.tok
        if not self.accept(op):
            raise self.error(f"expected {op!r}, found {self.describe(tok)}")
        return tok

    def scalar(self) -> Raw:
        tok = self.tok
        num = int(tok.value)
        self.i += 1
        value = Fraction(num)
        if self.accept("/"):
            den_tok = self.tok
            if den_tok.kind != "num":
                raise self.error(f"expected a denominator, found {self.describe(den_tok)}")
            self.i += 1
            if int(den_tok.value) == 0:
                raise self.error("division by zero", den_tok)
            value = Fraction(num, int(den_tok.value))
        try:
            return self.ring.coerce(value)
        except RingError as exc:
            raise self.error(str(exc), tok) from None

    def name(self) -> Token:
        tok = self.tok
        if tok.kind != "name":
            raise self.error(f"expected a name, found {self.describe(tok)}")
        self.i += 1
        return tok

    def signed_terms(self, atom) -> List[Tuple[Raw, object]]:
        """``['-'] term (('+'|'-') term)*`` where ``atom`` parses the non-scalar part."""
        ring = self.ring
        out = []
        sign = ring.neg(ring.one) if self.accept("-") else ring.one
        while True:
            coeff = ring.one
            obj = None
            if self.tok.kind == "num":
                coeff = self.scalar()
                if self.accept("*"):
                    obj = atom()
            else:
                obj = atom()
            out.append((ring.mul(sign, coeff), obj))
            if self.accept("+"):
                sign = ring.one
            elif self.accept("-"):
                sign = ring.neg(ring.one)
            elif self.tok.kind == "end":
                return out
            else:
                raise self.error(f"expected '+', '-' or end of input, found {self.describe(self.tok)}")


class _LpaParser(_Parser):
    def __init__(self, text: str, graph: Graph, ring: RingSpec):
        super().__init__(text, ring)
        self.graph = graph

    def path(self) -> Path:
        first = self.name()
        names = [first]
        while self.accept("."):
            names.append(self.name())
        words = [t.value for t in names]
        if len(words) == 1 and self.graph.is_vertex(words[0]):
            return self.graph.vertex_path(words[0])
        for t in names:
            if self.graph.is_vertex(t.value):
                raise self.error(f"vertex {t.value!r} cannot appear inside an edge path", t)
            if not self.graph.is_edge(t.value):
                raise self.error(f"unknown edge or vertex {t.value!r}", t)
        try:
            return self.graph.path(*words)
        except GraphError as exc:
            raise self.error(str(exc), first) from None

    def mono(self) -> Monomial:
        start = self.expect("[")
        alpha = self.path()
        self.expect(";")
        beta = self.path()
        self.expect("]")
        try:
            return Monomial(alpha, beta)
        except LpaError as exc:
            raise self.error(str(exc), start) from None


def parse_scalar(text: str, ring: RingSpec) -> Raw:
    p = _Parser(text.strip(), ring)
    neg = p.accept("-")
    if p.tok.kind != "num":
        raise p.error(f"expected a number, found {p.describe(p.tok)}")
    value = p.scalar()
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.describe(p.tok)}")
    return ring.neg(value) if neg else value


def parse_element(text: str, graph: Graph, ring: RingSpec) -> LpaElement:
    """Parse an expression such as ``2*[c.c;v] - 1/3*[v;c]`` into normal form."""
    p = _LpaParser(text, graph, ring)
    raw = []
    for coeff, mono in p.signed_terms(p.mono):
        if mono is None:
            raw.extend((coeff, vertex_monomial(graph, v)) for v in graph.vertices)
        else:
            raw.append((coeff, mono))
    return normalize(raw, graph, ring)


def parse_groupoid_element(text: str, groupoid: FiniteGroupoid, ring: RingSpec) -> AlgebraElement:
    """Parse ``2*g12 - u1`` style combinations of morphism indicators."""
    p = _Parser(text, ring)

    def morphism():
        tok = p.name()
        if tok.value not in groupoid.index:
            raise p.error(f"unknown morphism {tok.value!r}", tok)
        return groupoid.index[tok.value]

    coeffs = [ring.zero] * len(groupoid)
    for coeff, x in p.signed_terms(morphism):
        targets = groupoid.sorted_units if x is None else [x]
        for t in targets:
            coeffs[t] = ring.add(coeffs[t], coeff)
    return AlgebraElement(groupoid, ring, coeffs)
