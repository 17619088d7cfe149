"""Boolean query language: lexer, recursive-descent parser, canonical printer.

Grammar (AND binds tighter than OR; adjacency of atoms means AND):

    query  := or
    or     := and ( "OR" and )*
    and    := atom ( ["AND"] atom )*
    atom   := "(" query ")" | FIELD ":" value | "theme:" value
            | quoted phrase | bare word

Keywords AND / OR are case-sensitive uppercase. Values may be double-quoted
to include spaces. Bare words are run through the search tokenizer; a word
that yields several tokens becomes a phrase (bag-of-terms semantics).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyQuery, QuerySyntaxError
from .text import tokenize

FIELD_NAMES = ("unit", "site", "status", "type", "title", "name", "year", "id")


@dataclass(frozen=True)
class Term:
    token: str


@dataclass(frozen=True)
class Phrase:
    tokens: tuple


@dataclass(frozen=True)
class Field:
    name: str
    value: str


@dataclass(frozen=True)
class ThemeRef:
    path_or_id: str


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class _Token:
    kind: str  # lparen rparen and or field theme quoted word
    value: str
    position: int


def _lex(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "(":
            tokens.append(_Token("lparen", c, i))
            i += 1
        elif c == ")":
            tokens.append(_Token("rparen", c, i))
            i += 1
        elif c == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise QuerySyntaxError("unterminated quote", i)
            tokens.append(_Token("quoted", text[i + 1:end], i))
            i = end + 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in '()"':
                i += 1
            word = text[start:i]
            if word == "AND":
                tokens.append(_Token("and", word, start))
                continue
            if word == "OR":
                tokens.append(_Token("or", word, start))
                continue
            prefix, sep, value = word.partition(":")
            lowered = prefix.lower()
            if sep and (lowered == "theme" or lowered in FIELD_NAMES):
                # a quote right after the colon carries the value to the closing quote
                if not value and i < n and text[i] == '"':
                    end = text.find('"', i + 1)
                    if end < 0:
                        raise QuerySyntaxError("unterminated quote", i)
                    value = text[i + 1:end]
                    i = end + 1
                if lowered == "theme":
                    tokens.append(_Token("theme", value, start))
                else:
                    tokens.append(_Token("field", f"{lowered}\x00{value}", start))
            else:
                tokens.append(_Token("word", word, start))
    return tokens


class _Parser:
    def __init__(self, tokens, length):
        self.tokens = tokens
        self.pos = 0
        self.length = length

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _position(self):
        token = self.peek()
        return token.position if token else self.length

    def parse_or(self):
        children = [self.parse_and()]
        while self.peek() and self.peek().kind == "or":
            self.pos += 1
            children.append(self.parse_and())
        return children[0] if len(children) == 1 else Or(tuple(_flatten(children, Or)))

    def parse_and(self):
        children = [self.parse_atom()]
        while True:
            token = self.peek()
            if token is None or token.kind in ("or", "rparen"):
                break
            if token.kind == "and":
                self.pos += 1
                children.append(self.parse_atom())
            else:  # adjacency means AND
                children.append(self.parse_atom())
        return children[0] if len(children) == 1 else And(tuple(_flatten(children, And)))

    def parse_atom(self):
        token = self.peek()
        if token is None:
            raise QuerySyntaxError("expected atom", self._position())
        if token.kind == "lparen":
            self.pos += 1
            node = self.parse_or()
            closing = self.peek()
            if closing is None or closing.kind != "rparen":
                raise QuerySyntaxError("expected ')'", self._position())
            self.pos += 1
            return node
        if token.kind == "theme":
            self.pos += 1
            if not token.value:
                raise QuerySyntaxError("empty theme reference", token.position)
            return ThemeRef(token.value)
        if token.kind == "field":
            self.pos += 1
            name, value = token.value.split("\x00", 1)
            if not value:
                raise QuerySyntaxError(f"empty value for field {name!r}", token.position)
            return Field(name, value)
        if token.kind == "quoted":
            self.pos += 1
            tokens = tuple(tokenize(token.value))
            if not tokens:
                raise QuerySyntaxError("phrase has no searchable tokens", token.position)
            return Phrase(tokens)
        if token.kind == "word":
            self.pos += 1
            tokens = tuple(tokenize(token.value))
            if not tokens:
                raise QuerySyntaxError(f"term {token.value!r} has no searchable tokens", token.position)
            return Term(tokens[0]) if len(tokens) == 1 else Phrase(tokens)
        raise QuerySyntaxError(f"expected atom, found {token.value!r}", token.position)


def _flatten(children, node_class):
    flat = []
    for child in children:
        if isinstance(child, node_class):
            flat.extend(child.children)
        else:
            flat.append(child)
    return flat


def parse_query(text):
    if not text or not text.strip():
        raise EmptyQuery("query is empty")
    tokens = _lex(text)
    if not tokens:
        raise EmptyQuery("query has no tokens")
    parser = _Parser(tokens, len(text))
    ast = parser.parse_or()
    trailing = parser.peek()
    if trailing is not None:
        raise QuerySyntaxError(f"unexpected {trailing.value!r}", trailing.position)
    return ast


def print_query(ast):
    """Canonical fully-parenthesized form; parse_query(print_query(a)) == a."""
    if isinstance(ast, Term):
        return ast.token
    if isinstance(ast, Phrase):
        return '"' + " ".join(ast.tokens) + '"'
    if isinstance(ast, Field):
        return f'{ast.name}:"{ast.value}"'
    if isinstance(ast, ThemeRef):
        return f'theme:"{ast.path_or_id}"'
    if isinstance(ast, And):
        return "(" + " AND ".join(print_query(c) for c in ast.children) + ")"
    if isinstance(ast, Or):
        return "(" + " OR ".join(print_query(c) for c in ast.children) + ")"
    raise TypeError(f"not a query node: {ast!r}")
