"""Tokenizer shared by the ``.eqt`` declaration parser and the ``.lib`` parser.

Identifiers may contain ``-`` (as in ``pres-e``), so a dash continues an
identifier only when followed by another identifier character; at token start
``--`` opens a comment running to end of line and ``->`` is the ASCII arrow.
The Unicode arrow ``→`` is accepted everywhere ``->`` is.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import RESERVED_WORDS


class LexError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# Token kinds
NAME = "NAME"
KEYWORD = "KEYWORD"
LPAREN = "LPAREN"
RPAREN = "RPAREN"
LBRACE = "LBRACE"
RBRACE = "RBRACE"
COLON = "COLON"
ARROW = "ARROW"
EQEQ = "EQEQ"
EQ = "EQ"
COMMA = "COMMA"
EOF = "EOF"

_SINGLES = {
    "(": LPAREN,
    ")": RPAREN,
    "{": LBRACE,
    "}": RBRACE,
    ":": COLON,
    ",": COMMA,
    "→": ARROW,
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.col})"


def _is_name_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_name_char(c: str) -> bool:
    return c.isalnum() or c in "_'"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    while i < n:
        c = source[i]

        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue

        if c == "-":
            if i + 1 < n and source[i + 1] == "-":
                while i < n and source[i] != "\n":
                    i += 1
                continue
            if i + 1 < n and source[i + 1] == ">":
                tokens.append(Token(ARROW, "→", line, col))
                i += 2
                col += 2
                continue
            raise LexError("unexpected '-'", line, col)

        if c == "=":
            if i + 1 < n and source[i + 1] == "=":
                tokens.append(Token(EQEQ, "==", line, col))
                i += 2
                col += 2
            else:
                tokens.append(Token(EQ, "=", line, col))
                i += 1
                col += 1
            continue

        if c in _SINGLES:
            tokens.append(Token(_SINGLES[c], c, line, col))
            i += 1
            col += 1
            continue

        if _is_name_start(c):
            start = i
            start_col = col
            i += 1
            col += 1
            while i < n:
                ch = source[i]
                if _is_name_char(ch):
                    i += 1
                    col += 1
                elif ch == "-" and i + 1 < n and _is_name_char(source[i + 1]):
                    # dash inside a name, e.g. pres-op
                    i += 2
                    col += 2
                else:
                    break
            text = source[start:i]
            kind = KEYWORD if text in RESERVED_WORDS else NAME
            tokens.append(Token(kind, text, line, start_col))
            continue

        raise LexError(f"unexpected character {c!r}", line, col)

    tokens.append(Token(EOF, "", line, col))
    return tokens


__all__ = [
    "ARROW",
    "COLON",
    "COMMA",
    "EOF",
    "EQ",
    "EQEQ",
    "KEYWORD",
    "LBRACE",
    "LPAREN",
    "LexError",
    "NAME",
    "RBRACE",
    "RPAREN",
    "Token",
    "tokenize",
]
