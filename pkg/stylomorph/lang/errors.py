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

from typing import Optional

__all__ = (
    "LangError",
    "LexError",
    "MiniCSyntaxError",
    "ScopeError",
    "UnresolvedReference",
    "Redeclaration",
    "MiniCRuntimeError",
    "FuelExhausted",
)


class LangError(Exception):
    pass


class LexError(LangError):
    def __init__(self, line: int, col: int, char: str) -> None:
        self.line = line
        self.col = col
        self.char = char
        super().__init__(f"Illegal character {char!r} at {line}:{col}")


class MiniCSyntaxError(LangError):
    def __init__(self, line: int, col: int, expected: str, found: Optional[str] = None) -> None:
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        message = f"Expected {expected} at {line}:{col}"
        if found is not None:
            message += f", found {found!r}"
        super().__init__(message)


class ScopeError(LangError):
    pass


class UnresolvedReference(ScopeError):
    def __init__(self, name: str, node_id: int) -> None:
        self.name = name
        self.node_id = node_id
        super().__init__(f"Reference to undeclared variable `{name}` (node {node_id})")


class Redeclaration(ScopeError):
    def __init__(self, name: str, node_id: int) -> None:
        self.name = name
        self.node_id = node_id
        super().__init__(f"Variable `{name}` declared twice in the same scope (node {node_id})")


class MiniCRuntimeError(LangError):
    def __init__(self, message: str, node_id: Optional[int] = None) -> None:
        self.node_id = node_id
        super().__init__(message)


class FuelExhausted(LangError):
    def __init__(self, fuel: int) -> None:
        self.fuel = fuel
        super().__init__(f"Program ran out of fuel after {fuel} steps")
