"""
MIT License

Copyright (c) 2024-present stylomorph contributors

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""

# Lossless MiniC tokenizer, whitespace and comments are kept as tokens.

import re
from dataclasses import dataclass
from enum import Enum
from typing import List

from .errors import LexError

__all__ = (
    "TokenKind",
    "Token",
    "KEYWORDS",
    "TYPE_KEYWORDS",
    "tokenize",
    "significant",
)


class TokenKind(str, Enum):
    keyword = "keyword"
    identifier = "identifier"
    literal_int = "literal-int"
    literal_float = "literal-float"
    literal_string = "literal-string"
    literal_char = "literal-char"
    punctuator = "punctuator"
    comment = "comment"
    whitespace = "whitespace"


TYPE_KEYWORDS = (
    "bool",
    "char",
    "short",
    "int",
    "long",
    "longlong",
    "float",
    "double",
    "string",
    "void",
    "vec",
)
KEYWORDS = frozenset(
    TYPE_KEYWORDS
    + (
        "if",
        "else",
        "for",
        "while",
        "return",
        "true",
        "false",
        "typedef",
        "include",
        "input",
        "output",
        "endl",
        "fixed",
        "setprec",
        "syncio",
    )
)

# Longest punctuators first, the alternation is ordered.
_PUNCTUATORS = [
    "<<",
    ">>",
    "<=",
    ">=",
    "==",
    "!=",
    "&&",
    "||",
    "++",
    "--",
    "+=",
    "-=",
    "*=",
    "/=",
    "%=",
    "+",
    "-",
    "*",
    "/",
    "%",
    "<",
    ">",
    "=",
    "!",
    "&",
    "(",
    ")",
    "{",
    "}",
    "[",
    "]",
    ";",
    ",",
    ".",
    "#",
]

_TOKEN_SPEC = [
    (TokenKind.whitespace, r"[ \t\r\n\f\v]+"),
    (TokenKind.comment, r"//[^\n]*|/\*.*?\*/"),
    (TokenKind.literal_float, r"\d+\.\d*(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\.\d+(?:[eE][+-]?\d+)?"),
    (TokenKind.literal_int, r"\d+"),
    (TokenKind.literal_string, r'"(?:[^"\\\n]|\\.)*"'),
    (TokenKind.literal_char, r"'(?:[^'\\\n]|\\.)'"),
    (TokenKind.identifier, r"[A-Za-z_][A-Za-z0-9_]*"),
    (TokenKind.punctuator, "|".join(re.escape(p) for p in _PUNCTUATORS)),
]
_MASTER_RE = re.compile(
    "|".join(f"(?P<T{idx}>{pattern})" for idx, (_, pattern) in enumerate(_TOKEN_SPEC)),
    re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int

    @property
    def is_trivia(self) -> bool:
        return self.kind in (TokenKind.whitespace, TokenKind.comment)


def tokenize(source: str) -> List[Token]:
    """Split ``source`` into tokens.

    Joining the text of every returned token gives back ``source`` exactly.

    Raises
    ------
    LexError
        When a character does not start any token.
    """
    tokens: List[Token] = []
    pos = 0
    line = 1
    line_start = 0
    length = len(source)
    while pos < length:
        match = _MASTER_RE.match(source, pos)
        if match is None:
            raise LexError(line, pos - line_start + 1, source[pos])
        kind, _ = _TOKEN_SPEC[int(match.lastgroup[1:])]
        text = match.group(0)
        if kind is TokenKind.identifier and text in KEYWORDS:
            kind = TokenKind.keyword
        tokens.append(Token(kind, text, line, pos - line_start + 1))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = match.end()
    return tokens


def significant(tokens: List[Token]) -> List[Token]:
    return [token for token in tokens if not token.is_trivia]
