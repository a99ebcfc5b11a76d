"""Tokenizer shared by the model, glossary and requirement parsers."""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = {
    "model", "type", "enum", "variant", "record", "int", "func",
    "component", "sub", "in", "out", "init", "causality", "weak", "strong",
    "automaton", "states", "var", "transition", "when", "with", "then",
    "table", "channel", "delegate",
    "if", "else", "match", "true", "false", "and", "or", "not", "div", "mod",
}

_SYMBOLS = [
    "->", ":=", "==", "!=", "<=", ">=", "..",
    "{", "}", "(", ")", ",", ":", ";", ".", "?", "=", "<", ">",
    "+", "-", "*", "|", "@",
]


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'int' | 'string' | 'kw' | symbol text | 'eof'
    text: str
    line: int
    col: int


class LexError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
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
        if c == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and source[j] not in '"\n':
                j += 1
            if j >= n or source[j] != '"':
                raise LexError("unterminated string", line, col)
            tokens.append(Token("string", source[i + 1 : j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            tokens.append(Token("kw" if word in KEYWORDS else "ident", word, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token(sym, sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise LexError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens
