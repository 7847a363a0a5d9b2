"""Tokenizer for the analyzed mini-language.

Comments (// and /* */) and whitespace are skipped entirely, so two sources
differing only in formatting produce identical token streams.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = {
    "class", "extends",
    "public", "private", "protected", "static", "final", "synchronized",
    "void", "if", "else", "while", "do", "for", "switch", "case", "default",
    "break", "return", "new", "this", "true", "false", "null",
    "byte", "short", "int", "long", "float", "double", "char", "boolean",
}

PRIMITIVE_TYPES = {"byte", "short", "int", "long", "float", "double", "char", "boolean"}

# Longest first so that e.g. ">=" wins over ">".
SYMBOLS = [
    "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=", "-=", "*=", "/=", "%=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", ":", "?",
]


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "keyword" | "int" | "long" | "float" | "double" | "char" | "string" | "symbol" | "eof"
    text: str
    value: object
    line: int
    column: int


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f",
            "0": "\0", "'": "'", '"': '"', "\\": "\\"}


def tokenize(text: str, path: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def err(msg: str, l: int | None = None, c: int | None = None):
        raise ParseError(msg, l if l is not None else line, c if c is not None else col, path)

    def advance(k: int = 1):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance()
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                advance()
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "*":
            start_l, start_c = line, col
            advance(2)
            while i < n and not (text[i] == "*" and i + 1 < n and text[i + 1] == "/"):
                advance()
            if i >= n:
                err("unterminated block comment", start_l, start_c)
            advance(2)
            continue

        start_l, start_c = line, col

        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "keyword" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, word, start_l, start_c))
            advance(j - i)
            continue

        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            is_float = False
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            suffix = text[j].lower() if j < n and text[j] in "lLfFdD" else ""
            lit = text[i:j]
            if suffix == "l":
                if is_float:
                    err("long suffix on a floating literal", start_l, start_c)
                tokens.append(Token("long", lit + text[j], int(lit), start_l, start_c))
                j += 1
            elif suffix == "f":
                tokens.append(Token("float", lit + text[j], float(lit), start_l, start_c))
                j += 1
            elif suffix == "d":
                tokens.append(Token("double", lit + text[j], float(lit), start_l, start_c))
                j += 1
            elif is_float:
                tokens.append(Token("double", lit, float(lit), start_l, start_c))
            else:
                tokens.append(Token("int", lit, int(lit), start_l, start_c))
            advance(j - i)
            continue

        if ch == "'":
            j = i + 1
            if j >= n:
                err("unterminated character literal")
            if text[j] == "\\":
                if j + 1 >= n or text[j + 1] not in _ESCAPES:
                    err("unknown escape in character literal", start_l, start_c)
                value = _ESCAPES[text[j + 1]]
                j += 2
            else:
                value = text[j]
                j += 1
            if j >= n or text[j] != "'":
                err("unterminated character literal", start_l, start_c)
            j += 1
            tokens.append(Token("char", text[i:j], value, start_l, start_c))
            advance(j - i)
            continue

        if ch == '"':
            j = i + 1
            out: list[str] = []
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    err("unterminated string literal", start_l, start_c)
                if text[j] == "\\":
                    if j + 1 >= n or text[j + 1] not in _ESCAPES:
                        err("unknown escape in string literal", start_l, start_c)
                    out.append(_ESCAPES[text[j + 1]])
                    j += 2
                else:
                    out.append(text[j])
                    j += 1
            if j >= n:
                err("unterminated string literal", start_l, start_c)
            j += 1
            tokens.append(Token("string", text[i:j], "".join(out), start_l, start_c))
            advance(j - i)
            continue

        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("symbol", sym, sym, start_l, start_c))
                advance(len(sym))
                break
        else:
            err(f"unexpected character {ch!r}")

    tokens.append(Token("eof", "", None, line, col))
    return tokens
