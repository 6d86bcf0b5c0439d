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

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .ast import Program, clone, renumber
from .errors import MiniCSyntaxError
from .parser import parse_ast
from .printer import pretty_print
from .scope import ScopeInfo, resolve_scopes
from .types import TypeChecker

__all__ = (
    "SourceProgram",
    "parse",
    "from_ast",
    "copy_ast",
)


@dataclass
class SourceProgram:
    source_text: str
    ast: Program
    author: Optional[str] = None
    task: Optional[str] = None
    _scope: Optional[ScopeInfo] = field(default=None, repr=False, compare=False)

    @property
    def scope(self) -> ScopeInfo:
        if self._scope is None:
            self._scope = resolve_scopes(self.ast)
        return self._scope

    @cached_property
    def types(self) -> TypeChecker:
        return TypeChecker(self.scope)

    @cached_property
    def canonical_text(self) -> str:
        return pretty_print(self.ast)

    def with_ast(self, ast: Program) -> "SourceProgram":
        return from_ast(ast, self.author, self.task)


def parse(source: str, author: Optional[str] = None, task: Optional[str] = None) -> SourceProgram:
    """Parse and scope-check a MiniC compilation unit.

    Raises
    ------
    LexError, MiniCSyntaxError
        On malformed input.
    ScopeError
        When a reference does not resolve or a name is declared twice.
    """
    ast = parse_ast(source)
    return SourceProgram(source, ast, author, task, resolve_scopes(ast))


def from_ast(ast: Program, author: Optional[str] = None, task: Optional[str] = None) -> SourceProgram:
    """Print ``ast`` canonically and re-parse it.

    The re-parsed tree must be structurally identical to ``ast``, which
    guarantees that the returned program is valid MiniC.
    """
    text = pretty_print(ast)
    program = parse(text, author, task)
    if program.ast != ast:
        raise MiniCSyntaxError(1, 1, "a tree that survives printing")
    return program


def copy_ast(program: SourceProgram) -> Program:
    return renumber(clone(program.ast))
