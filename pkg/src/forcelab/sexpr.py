"""A small s-expression reader that keeps source positions for error messages."""
from __future__ import annotations

from typing import Optional

from .errors import ParseError


class Atom(str):
    """A symbol or integer token together with its position."""

    line: int
    column: int

    def __new__(cls, text: str, line: int = 0, column: int = 0):
        obj = super().__new__(cls, text)
        obj.line = line
        obj.column = column
        return obj

    @property
    def is_int(self) -> bool:
        return self.lstrip("-").isdigit()


class SList(list):
    """A parenthesized list together with the position of its opening parenthesis."""

    def __init__(self, items=(), line: int = 0, column: int = 0):
        super().__init__(items)
        self.line = line
        self.column = column

    @property
    def head(self) -> Optional[str]:
        return str(self[0]) if self and isinstance(self[0], Atom) else None


def tokenize(text: str, source: str = "<input>"):
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield ch, line, col
            i += 1
            col += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0 or "\n" in text[i:j]:
                raise ParseError("unterminated string", line, col, source)
            yield text[i:j + 1], line, col
            col += j + 1 - i
            i = j + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in '();"':
            j += 1
        yield text[i:j], line, col
        col += j - i
        i = j


def parse(text: str, source: str = "<input>") -> list:
    """Parse every top-level form in ``text``."""
    stack: list[SList] = [SList()]
    for tok, line, col in tokenize(text, source):
        if tok == "(":
            stack.append(SList(line=line, column=col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unexpected ')'", line, col, source)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(Atom(tok, line, col))
    if len(stack) > 1:
        open_ = stack[-1]
        raise ParseError("unclosed '('", open_.line, open_.column, source)
    return list(stack[0])


def parse_one(text: str, source: str = "<input>"):
    forms = parse(text, source)
    if len(forms) != 1:
        raise ParseError(f"expected one expression, found {len(forms)}", 1, 1, source)
    return forms[0]


def position(x) -> tuple[int, int]:
    return getattr(x, "line", 0), getattr(x, "column", 0)


def unparse(x) -> str:
    if isinstance(x, list):
        return "(" + " ".join(unparse(y) for y in x) + ")"
    return str(x)
