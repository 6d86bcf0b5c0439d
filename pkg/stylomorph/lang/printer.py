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
from typing import List, Optional

from .ast import (
    Assign,
    BinOp,
    Call,
    CompoundStmt,
    DeclStmt,
    ExprStmt,
    ForStmt,
    FuncDecl,
    GlobalDecl,
    IfStmt,
    Include,
    Index,
    Literal,
    Node,
    Param,
    PrecisionStmt,
    Program,
    ReturnStmt,
    StreamIn,
    StreamOut,
    SyncIoStmt,
    TypeRef,
    Typedef,
    UnaryOp,
    VarDecl,
    VarRef,
    WhileStmt,
)
from .parser import BINARY_LEVELS

__all__ = (
    "Layout",
    "CANONICAL_LAYOUT",
    "pretty_print",
    "print_expression",
    "print_statement",
    "print_type",
)

ASSIGN_PREC = 0
UNARY_PREC = len(BINARY_LEVELS) + 1
POSTFIX_PREC = UNARY_PREC + 1
_BINARY_PREC = {op: level + 1 for level, ops in enumerate(BINARY_LEVELS) for op in ops}


@dataclass(frozen=True)
class Layout:
    """Purely cosmetic printing choices, none of them changes the tree."""

    indent: str = "    "
    brace_newline: bool = False
    operator_spacing: bool = True
    blank_between_functions: bool = True
    blank_after_includes: bool = False


CANONICAL_LAYOUT = Layout()


def print_type(tref: TypeRef) -> str:
    if tref.is_vec and tref.elem is not None:
        return f"vec<{print_type(tref.elem)}>"
    return tref.name


def _precedence(node: Node) -> int:
    if isinstance(node, Assign):
        return ASSIGN_PREC
    if isinstance(node, BinOp):
        return _BINARY_PREC[node.op]
    if isinstance(node, UnaryOp):
        return POSTFIX_PREC if node.op.startswith("p") else UNARY_PREC
    return POSTFIX_PREC + 1


class _Printer:
    def __init__(self, layout: Layout):
        self.layout = layout
        self.lines: List[str] = []

    # --- expressions

    def expr(self, node: Node, min_prec: int = ASSIGN_PREC) -> str:
        text = self._expr(node)
        if _precedence(node) < min_prec:
            return f"({text})"
        return text

    def _binary_glue(self, op: str, left: str, right: str) -> str:
        if self.layout.operator_spacing:
            return f"{left} {op} {right}"
        if op[-1] in "+-" and right[:1] == op[-1]:
            return f"{left}{op} {right}"
        return f"{left}{op}{right}"

    def _expr(self, node: Node) -> str:
        if isinstance(node, Literal):
            return node.text
        if isinstance(node, VarRef):
            return node.name
        if isinstance(node, Assign):
            target = self.expr(node.target, POSTFIX_PREC)
            value = self.expr(node.value, ASSIGN_PREC)
            return self._binary_glue(node.op, target, value)
        if isinstance(node, BinOp):
            prec = _BINARY_PREC[node.op]
            left = self.expr(node.left, prec)
            right = self.expr(node.right, prec + 1)
            return self._binary_glue(node.op, left, right)
        if isinstance(node, UnaryOp):
            if node.op.startswith("p"):
                return self.expr(node.operand, POSTFIX_PREC) + node.op[1:]
            operand = self._expr(node.operand)
            if isinstance(node.operand, (UnaryOp, BinOp, Assign)):
                operand = f"({operand})"
            return node.op + operand
        if isinstance(node, Index):
            return f"{self.expr(node.base, POSTFIX_PREC)}[{self.expr(node.index)}]"
        if isinstance(node, Call):
            if node.method:
                receiver = self.expr(node.args[0], POSTFIX_PREC)
                args = ", ".join(self.expr(arg) for arg in node.args[1:])
                return f"{receiver}.{node.name}({args})"
            return f"{node.name}({', '.join(self.expr(arg) for arg in node.args)})"
        raise TypeError(f"Cannot print {node.kind} as an expression")

    # --- statements

    def emit(self, depth: int, text: str) -> None:
        self.lines.append(self.layout.indent * depth + text)

    def comments(self, depth: int, comments: List[str]) -> None:
        for comment in comments:
            self.emit(depth, comment)

    def decl_text(self, decl: VarDecl) -> str:
        text = f"{print_type(decl.type)} {decl.name}"
        if decl.array_size is not None:
            text += f"[{self.expr(decl.array_size)}]"
        if decl.ctor_size is not None:
            text += f"({self.expr(decl.ctor_size)})"
        if decl.init is not None:
            text += f" = {self.expr(decl.init)}"
        return text

    def simple_text(self, node: Node) -> str:
        if isinstance(node, DeclStmt):
            return self.decl_text(node)
        if isinstance(node, ExprStmt):
            return self.expr(node.expr)
        raise TypeError(f"{node.kind} is not a simple statement")

    def open_block(self, depth: int, header: str) -> None:
        if not header:
            self.emit(depth, "{")
        elif self.layout.brace_newline:
            self.emit(depth, header)
            self.emit(depth, "{")
        else:
            self.emit(depth, f"{header} {{")

    def block_items(self, depth: int, block: CompoundStmt) -> None:
        for stmt in block.stmts:
            self.statement(depth, stmt)
        self.comments(depth, block.trailing_comments)

    def body(self, depth: int, header: str, body: Node) -> bool:
        """Print ``header`` followed by ``body``; returns True when a ``}`` line ends it."""
        if isinstance(body, CompoundStmt):
            self.open_block(depth, header)
            self.block_items(depth + 1, body)
            self.emit(depth, "}")
            return True
        self.emit(depth, header)
        self.statement(depth + 1, body)
        return False

    def statement(self, depth: int, node: Node) -> None:
        self.comments(depth, getattr(node, "comments", []))
        if isinstance(node, CompoundStmt):
            self.open_block(depth, "")
            self.block_items(depth + 1, node)
            self.emit(depth, "}")
        elif isinstance(node, (DeclStmt, ExprStmt)):
            self.emit(depth, self.simple_text(node) + ";")
        elif isinstance(node, ReturnStmt):
            self.emit(depth, "return;" if node.value is None else f"return {self.expr(node.value)};")
        elif isinstance(node, IfStmt):
            self.if_chain(depth, node, "")
        elif isinstance(node, WhileStmt):
            self.body(depth, f"while ({self.expr(node.cond)})", node.body)
        elif isinstance(node, ForStmt):
            init = "" if node.init is None else self.simple_text(node.init)
            cond = "" if node.cond is None else " " + self.expr(node.cond)
            step = "" if node.step is None else " " + self.expr(node.step)
            self.body(depth, f"for ({init};{cond};{step})", node.body)
        elif isinstance(node, StreamIn):
            targets = "".join(f" >> {self.expr(target, POSTFIX_PREC)}" for target in node.targets)
            self.emit(depth, f"input{targets};")
        elif isinstance(node, StreamOut):
            items = "".join(f" << {self.expr(item, _BINARY_PREC['+'])}" for item in node.items)
            self.emit(depth, f"output{items};")
        elif isinstance(node, PrecisionStmt):
            self.emit(depth, "fixed;" if node.op == "fixed" else f"setprec({node.digits});")
        elif isinstance(node, SyncIoStmt):
            self.emit(depth, f"syncio({'true' if node.enabled else 'false'});")
        else:
            raise TypeError(f"Cannot print {node.kind} as a statement")

    def if_chain(self, depth: int, node: IfStmt, prefix: str) -> None:
        closed = self.body(depth, f"{prefix}if ({self.expr(node.cond)})", node.then)
        els = node.els
        if els is None:
            return
        if closed and not self.layout.brace_newline:
            # glue "else" onto the closing brace line
            last = self.lines.pop()
            else_prefix = last.strip() + " else"
        else:
            else_prefix = "else"
        if isinstance(els, IfStmt) and not els.comments:
            self.if_chain(depth, els, else_prefix + " ")
        elif isinstance(els, CompoundStmt):
            self.open_block(depth, else_prefix)
            self.block_items(depth + 1, els)
            self.emit(depth, "}")
        else:
            self.emit(depth, else_prefix)
            self.statement(depth + 1, els)

    # --- top level

    def param(self, param: Param) -> str:
        if param.by_ref:
            return f"{print_type(param.type)} &{param.name}"
        if param.is_array:
            return f"{print_type(param.type)} {param.name}[]"
        return f"{print_type(param.type)} {param.name}"

    def program(self, program: Program) -> str:
        previous: Optional[Node] = None
        for item in program.items:
            if previous is not None:
                if self.layout.blank_between_functions and (
                    isinstance(item, FuncDecl) or isinstance(previous, FuncDecl)
                ):
                    self.lines.append("")
                elif self.layout.blank_after_includes and isinstance(previous, Include) and not isinstance(
                    item, Include
                ):
                    self.lines.append("")
            self.comments(0, item.comments)
            if isinstance(item, Include):
                self.emit(0, f"#include <{item.header}>")
            elif isinstance(item, Typedef):
                self.emit(0, f"typedef {print_type(item.base)} {item.alias};")
            elif isinstance(item, GlobalDecl):
                self.emit(0, self.decl_text(item) + ";")
            elif isinstance(item, FuncDecl):
                params = ", ".join(self.param(param) for param in item.params)
                self.open_block(0, f"{print_type(item.ret)} {item.name}({params})")
                self.block_items(1, item.body)
                self.emit(0, "}")
            else:
                raise TypeError(f"Cannot print {item.kind} at top level")
            previous = item
        self.comments(0, program.trailing_comments)
        return "\n".join(self.lines) + "\n" if self.lines else ""


def pretty_print(program: Program, layout: Optional[Layout] = None) -> str:
    """Render ``program`` as MiniC source.

    The default layout is the canonical one: four-space indentation, opening
    braces on the header line and ``} else {`` on a single line.
    """
    return _Printer(layout or CANONICAL_LAYOUT).program(program)


def print_expression(node: Node) -> str:
    return _Printer(CANONICAL_LAYOUT).expr(node)


def print_statement(node: Node, layout: Optional[Layout] = None) -> str:
    printer = _Printer(layout or CANONICAL_LAYOUT)
    printer.statement(0, node)
    return "\n".join(printer.lines)
