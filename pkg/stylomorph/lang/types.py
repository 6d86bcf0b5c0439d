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

from dataclasses import dataclass
from typing import Dict, Optional

from .ast import Assign, BinOp, Call, Index, Literal, Node, Param, TypeRef, UnaryOp, VarDecl, VarRef
from .scope import Declaration, ScopeInfo

__all__ = (
    "INTEGRAL_WIDTHS",
    "MiniType",
    "BOOL",
    "CHAR",
    "INT",
    "LONGLONG",
    "DOUBLE",
    "STRING",
    "VOID",
    "resolve_typeref",
    "declared_type",
    "TypeChecker",
    "wrap_integer",
    "coerce",
)

INTEGRAL_WIDTHS: Dict[str, int] = {"bool": 1, "char": 8, "short": 16, "int": 32, "long": 64, "longlong": 64}
FLOATING = ("float", "double")


@dataclass(frozen=True)
class MiniType:
    name: str
    elem: Optional["MiniType"] = None

    @property
    def is_integral(self) -> bool:
        return self.name in INTEGRAL_WIDTHS

    @property
    def is_floating(self) -> bool:
        return self.name in FLOATING

    @property
    def is_numeric(self) -> bool:
        return self.is_integral or self.is_floating

    @property
    def is_array(self) -> bool:
        return self.name == "array"

    @property
    def is_vec(self) -> bool:
        return self.name == "vec"

    @property
    def is_char_array(self) -> bool:
        return self.is_array and self.elem is not None and self.elem.name == "char"

    @property
    def width(self) -> int:
        return INTEGRAL_WIDTHS.get(self.name, 0)

    def __str__(self) -> str:
        if self.elem is not None:
            return f"{self.name}<{self.elem}>"
        return self.name


BOOL = MiniType("bool")
CHAR = MiniType("char")
INT = MiniType("int")
LONGLONG = MiniType("longlong")
DOUBLE = MiniType("double")
STRING = MiniType("string")
VOID = MiniType("void")


def resolve_typeref(tref: TypeRef, typedefs: Dict[str, TypeRef]) -> MiniType:
    seen = set()
    while tref.name in typedefs:
        if tref.name in seen:
            break
        seen.add(tref.name)
        tref = typedefs[tref.name]
    if tref.is_vec and tref.elem is not None:
        return MiniType("vec", resolve_typeref(tref.elem, typedefs))
    return MiniType(tref.name)


def declared_type(decl: Declaration, typedefs: Dict[str, TypeRef]) -> MiniType:
    base = resolve_typeref(decl.type, typedefs)
    if (isinstance(decl, VarDecl) and decl.is_array) or (isinstance(decl, Param) and decl.is_array):
        return MiniType("array", base)
    return base


def wrap_integer(value: int, mtype: MiniType) -> int:
    if mtype.name == "bool":
        return 1 if value else 0
    bits = mtype.width
    value &= (1 << bits) - 1
    if value >= 1 << (bits - 1):
        value -= 1 << bits
    return value


def coerce(value, mtype: MiniType):
    """Convert a runtime value into the representation of ``mtype``."""
    if mtype.is_integral:
        if isinstance(value, float):
            value = int(value)
        return wrap_integer(int(value), mtype)
    if mtype.is_floating:
        return float(value)
    return value


def _arithmetic(left: MiniType, right: MiniType) -> MiniType:
    if left == STRING or right == STRING:
        return STRING
    if left.is_floating or right.is_floating:
        return DOUBLE
    width = max(32, left.width, right.width)
    if width == 32:
        return INT
    for candidate in (left, right):
        if candidate.width == 64:
            return candidate
    return LONGLONG


class TypeChecker:
    """Static expression types over a resolved program."""

    def __init__(self, scope: ScopeInfo):
        self.scope = scope
        self._cache: Dict[int, MiniType] = {}

    def of_declaration(self, decl: Declaration) -> MiniType:
        return declared_type(decl, self.scope.typedefs)

    def of(self, node: Node) -> MiniType:
        cached = self._cache.get(node.nid)
        if cached is None:
            cached = self._compute(node)
            if node.nid >= 0:
                self._cache[node.nid] = cached
        return cached

    def _compute(self, node: Node) -> MiniType:
        if isinstance(node, Literal):
            if node.category == "int":
                return INT if int(node.text) < 2**31 else LONGLONG
            return {"float": DOUBLE, "string": STRING, "char": CHAR, "bool": BOOL}.get(node.category, VOID)
        if isinstance(node, VarRef):
            return self.of_declaration(self.scope.declaration(node))
        if isinstance(node, Index):
            base = self.of(node.base)
            if base == STRING:
                return CHAR
            return base.elem or VOID
        if isinstance(node, Assign):
            return self.of(node.target)
        if isinstance(node, UnaryOp):
            operand = self.of(node.operand)
            if node.op == "!":
                return BOOL
            if node.op == "-":
                return _arithmetic(operand, INT) if operand.is_integral else operand
            return operand
        if isinstance(node, BinOp):
            if node.op in ("||", "&&", "==", "!=", "<", "<=", ">", ">="):
                return BOOL
            return _arithmetic(self.of(node.left), self.of(node.right))
        if isinstance(node, Call):
            return self._call(node)
        return VOID

    def _call(self, node: Call) -> MiniType:
        if node.method:
            return INT if node.name == "size" else VOID
        func = self.scope.functions.get(node.name)
        if func is not None:
            return resolve_typeref(func.ret, self.scope.typedefs)
        if node.name in ("scan", "print", "strlen"):
            return INT
        if node.name == "sqrt":
            return DOUBLE
        if node.name == "abs":
            return _arithmetic(self.of(node.args[0]), INT) if node.args else INT
        if node.name in ("max", "min") and len(node.args) == 2:
            left, right = (self.of(arg) for arg in node.args)
            if left == right:
                return left
            return _arithmetic(left, right)
        return VOID
