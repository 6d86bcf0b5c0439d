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

from typing import Dict, FrozenSet, Set

from ..lang.ast import (
    Call,
    Include,
    Literal,
    PrecisionStmt,
    Program,
    StreamIn,
    StreamOut,
    SyncIoStmt,
    TypeRef,
    walk,
)

__all__ = (
    "HEADER_MANIFEST",
    "used_library_names",
    "header_needed",
    "ensure_include",
)

# Names each header makes available to a MiniC program.
HEADER_MANIFEST: Dict[str, FrozenSet[str]] = {
    "iostream": frozenset(("input", "output", "endl", "syncio")),
    "iomanip": frozenset(("fixed", "setprec")),
    "cstdio": frozenset(("scan", "print", "fopenin", "fopenout")),
    "string": frozenset(("string",)),
    "vector": frozenset(("vec",)),
    "cstring": frozenset(("strlen",)),
    "cmath": frozenset(("sqrt", "abs")),
    "cstdlib": frozenset(("abs",)),
    "algorithm": frozenset(("max", "min")),
}


def used_library_names(ast: Program) -> Set[str]:
    used: Set[str] = set()
    for node in walk(ast):
        if isinstance(node, StreamIn):
            used.add("input")
        elif isinstance(node, StreamOut):
            used.add("output")
        elif isinstance(node, Literal) and node.category == "endl":
            used.add("endl")
        elif isinstance(node, PrecisionStmt):
            used.add(node.op)
        elif isinstance(node, SyncIoStmt):
            used.add("syncio")
        elif isinstance(node, Call):
            used.add(node.name)
        elif isinstance(node, TypeRef):
            used.add(node.name)
    return used


def header_needed(header: str, used: Set[str]) -> bool:
    """Unknown headers are always treated as needed."""
    provided = HEADER_MANIFEST.get(header)
    if provided is None:
        return True
    return bool(provided & used)


def ensure_include(ast: Program, header: str) -> None:
    """Add ``#include <header>`` after the existing includes unless present."""
    position = 0
    for idx, item in enumerate(ast.items):
        if isinstance(item, Include):
            if item.header == header:
                return
            position = idx + 1
    ast.items.insert(position, Include(header))
