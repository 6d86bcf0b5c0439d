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

# Tree-walking interpreter for MiniC.
#
# It is the semantics oracle of the whole toolkit: two programs are considered
# equivalent when they print the same text and exit with the same code on every
# test input.

import math
import re
from copy import deepcopy
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional

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
    Index,
    Literal,
    Node,
    PrecisionStmt,
    ReturnStmt,
    StreamIn,
    StreamOut,
    SyncIoStmt,
    UnaryOp,
    VarDecl,
    VarRef,
    WhileStmt,
)
from .errors import FuelExhausted, LangError, MiniCRuntimeError
from .program import SourceProgram
from .types import DOUBLE, STRING, MiniType, coerce, resolve_typeref, wrap_integer

__all__ = (
    "DEFAULT_FUEL",
    "ProgramOutput",
    "InputStream",
    "Interpreter",
    "interpret",
    "semantically_equivalent",
    "unescape",
    "FORMAT_RE",
)

DEFAULT_FUEL = 10_000_000
DEFAULT_PRECISION = 6

_INT_RE = re.compile(r"[+-]?\d+")
_FLOAT_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_TOKEN_RE = re.compile(r"\S+")
FORMAT_RE = re.compile(r"%([-+ #0]*\d*(?:\.\d+)?)(hh|h|ll|l|L)?([diouxXeEfgGcs%])")
_ESCAPES = {"n": "\n", "t": "\t", "0": "\0", "\\": "\\", "'": "'", '"': '"', "r": "\r"}


@dataclass(frozen=True)
class ProgramOutput:
    stdout_text: str
    exit_code: int
    steps_used: int


def unescape(body: str) -> str:
    out = []
    idx = 0
    while idx < len(body):
        char = body[idx]
        if char == "\\" and idx + 1 < len(body):
            out.append(_ESCAPES.get(body[idx + 1], body[idx + 1]))
            idx += 2
        else:
            out.append(char)
            idx += 1
    return "".join(out)


class InputStream:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_whitespace(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _match(self, pattern: "re.Pattern[str]") -> Optional[str]:
        self.skip_whitespace()
        match = pattern.match(self.text, self.pos)
        if match is None:
            return None
        self.pos = match.end()
        return match.group(0)

    def read_int(self) -> Optional[int]:
        token = self._match(_INT_RE)
        return None if token is None else int(token)

    def read_float(self) -> Optional[float]:
        token = self._match(_FLOAT_RE)
        return None if token is None else float(token)

    def read_token(self) -> Optional[str]:
        return self._match(_TOKEN_RE)

    def read_char(self, skip: bool = False) -> Optional[str]:
        if skip:
            self.skip_whitespace()
        if self.pos >= len(self.text):
            return None
        char = self.text[self.pos]
        self.pos += 1
        return char

    def match_literal(self, char: str) -> bool:
        if self.pos < len(self.text) and self.text[self.pos] == char:
            self.pos += 1
            return True
        return False


class Cell:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


class _ListSlot:
    __slots__ = ("items", "index")

    def __init__(self, items: list, index: int):
        self.items = items
        self.index = index

    @property
    def value(self):
        return self.items[self.index]

    @value.setter
    def value(self, new) -> None:
        self.items[self.index] = new


class _StringSlot:
    __slots__ = ("owner", "index")

    def __init__(self, owner, index: int):
        self.owner = owner
        self.index = index

    @property
    def value(self) -> int:
        return wrap_integer(ord(self.owner.value[self.index]), MiniType("char"))

    @value.setter
    def value(self, new: int) -> None:
        text = self.owner.value
        self.owner.value = text[: self.index] + chr(new & 0xFF) + text[self.index + 1 :]


class _Return(Exception):
    def __init__(self, value):
        self.value = value


def _truthy(value) -> bool:
    return bool(value)


def _char_array_text(items: List[int]) -> str:
    chars = []
    for code in items:
        if code == 0:
            break
        chars.append(chr(code & 0xFF))
    return "".join(chars)


def _c_divide(left: int, right: int) -> int:
    quotient = abs(left) // abs(right)
    return quotient if (left < 0) == (right < 0) else -quotient


class Interpreter:
    def __init__(self, program: SourceProgram, stdin_text: str, fuel: int = DEFAULT_FUEL):
        self.program = program
        self.scope = program.scope
        self.types = program.types
        self.stdin_text = stdin_text
        self.input = InputStream(stdin_text)
        self.fuel = fuel
        self.steps = 0
        self.output: List[str] = []
        self.precision = DEFAULT_PRECISION
        self.fixed = False
        self.globals: Dict[int, Cell] = {}
        self._literals: Dict[int, object] = {}
        self._statements: Dict[type, Callable[[Node, dict], None]] = {
            CompoundStmt: self._exec_compound,
            DeclStmt: self._exec_decl,
            IfStmt: self._exec_if,
            WhileStmt: self._exec_while,
            ForStmt: self._exec_for,
            ReturnStmt: self._exec_return,
            ExprStmt: self._exec_expr,
            StreamIn: self._exec_stream_in,
            StreamOut: self._exec_stream_out,
            PrecisionStmt: self._exec_precision,
            SyncIoStmt: self._exec_syncio,
        }

    # --- entry point

    def run(self) -> ProgramOutput:
        main = self.scope.functions.get("main")
        if main is None:
            raise MiniCRuntimeError("program has no main function")
        try:
            for item in self.program.ast.items:
                if isinstance(item, GlobalDecl):
                    self.globals[item.nid] = Cell(self._initial_value(item, {}))
            result = self._invoke(main, [], {})
        except RecursionError:
            raise MiniCRuntimeError("call stack exhausted")
        exit_code = 0 if result is None else int(result) & 0xFF
        return ProgramOutput("".join(self.output), exit_code, self.steps)

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.fuel:
            raise FuelExhausted(self.fuel)

    # --- values

    def _zero(self, mtype: MiniType):
        if mtype.is_integral:
            return 0
        if mtype.is_floating:
            return 0.0
        if mtype == STRING:
            return ""
        if mtype.is_vec:
            return []
        raise MiniCRuntimeError(f"no default value for {mtype}")

    def _initial_value(self, decl: VarDecl, frame: dict):
        mtype = self.types.of_declaration(decl)
        if decl.is_array:
            length = self._eval(decl.array_size, frame)
            if length < 0:
                raise MiniCRuntimeError(f"negative array size for `{decl.name}`", decl.nid)
            return [self._zero(mtype.elem) for _ in range(length)]
        if mtype.is_vec:
            value = []
            if decl.ctor_size is not None:
                length = self._eval(decl.ctor_size, frame)
                if length < 0:
                    raise MiniCRuntimeError(f"negative vector size for `{decl.name}`", decl.nid)
                value = [self._zero(mtype.elem) for _ in range(length)]
            if decl.init is not None:
                value = deepcopy(self._eval(decl.init, frame))
            return value
        if decl.init is not None:
            return coerce(self._eval(decl.init, frame), mtype)
        return self._zero(mtype)

    def _cell(self, ref: VarRef, frame: dict):
        decl = self.scope.decl_of[ref.nid]
        if isinstance(decl, GlobalDecl):
            return self.globals[decl.nid]
        try:
            return frame[decl.nid]
        except KeyError:
            raise MiniCRuntimeError(f"`{ref.name}` used before its declaration", ref.nid)

    def _lvalue(self, node: Node, frame: dict):
        if isinstance(node, VarRef):
            return self._cell(node, frame)
        if isinstance(node, Index):
            index = self._eval(node.index, frame)
            if self.types.of(node.base) == STRING:
                owner = self._lvalue(node.base, frame)
                if not 0 <= index < len(owner.value):
                    raise MiniCRuntimeError(f"string index {index} out of range", node.nid)
                return _StringSlot(owner, index)
            items = self._eval(node.base, frame)
            if not 0 <= index < len(items):
                raise MiniCRuntimeError(f"index {index} out of range for length {len(items)}", node.nid)
            return _ListSlot(items, index)
        raise MiniCRuntimeError(f"{node.kind} is not assignable", node.nid)

    # --- statements

    def _exec(self, node: Node, frame: dict) -> None:
        self._tick()
        self._statements[type(node)](node, frame)

    def _exec_compound(self, node: CompoundStmt, frame: dict) -> None:
        for stmt in node.stmts:
            self._exec(stmt, frame)

    def _exec_decl(self, node: DeclStmt, frame: dict) -> None:
        frame[node.nid] = Cell(self._initial_value(node, frame))

    def _exec_if(self, node: IfStmt, frame: dict) -> None:
        if _truthy(self._eval(node.cond, frame)):
            self._exec(node.then, frame)
        elif node.els is not None:
            self._exec(node.els, frame)

    def _exec_while(self, node: WhileStmt, frame: dict) -> None:
        while True:
            self._tick()
            if not _truthy(self._eval(node.cond, frame)):
                return
            self._exec(node.body, frame)

    def _exec_for(self, node: ForStmt, frame: dict) -> None:
        if node.init is not None:
            self._exec(node.init, frame)
        while True:
            self._tick()
            if node.cond is not None and not _truthy(self._eval(node.cond, frame)):
                return
            self._exec(node.body, frame)
            if node.step is not None:
                self._eval(node.step, frame)

    def _exec_return(self, node: ReturnStmt, frame: dict) -> None:
        raise _Return(None if node.value is None else self._eval(node.value, frame))

    def _exec_expr(self, node: ExprStmt, frame: dict) -> None:
        self._eval(node.expr, frame)

    def _read_into(self, target: Node, frame: dict, mtype: MiniType, conversion: Optional[str] = None) -> bool:
        if mtype.is_char_array:
            token = self.input.read_token()
            if token is None:
                return False
            items = self._eval(target, frame)
            if len(token) >= len(items):
                raise MiniCRuntimeError("input token does not fit the character array", target.nid)
            for idx, char in enumerate(token):
                items[idx] = wrap_integer(ord(char), mtype.elem)
            items[len(token)] = 0
            return True
        if mtype == STRING:
            value = self.input.read_token()
        elif mtype.name == "char":
            char = self.input.read_char(skip=conversion != "c")
            value = None if char is None else ord(char)
        elif mtype.is_floating:
            value = self.input.read_float()
        elif mtype.is_integral:
            value = self.input.read_int()
        else:
            raise MiniCRuntimeError(f"cannot read a value of type {mtype}", target.nid)
        if value is None:
            return False
        self._lvalue(target, frame).value = coerce(value, mtype)
        return True

    def _exec_stream_in(self, node: StreamIn, frame: dict) -> None:
        for target in node.targets:
            if not self._read_into(target, frame, self.types.of(target)):
                return

    def _format_stream(self, value, mtype: MiniType) -> str:
        if mtype.name == "char":
            return chr(value & 0xFF)
        if mtype.is_integral:
            return str(int(value))
        if mtype.is_floating:
            code = "f" if self.fixed else "g"
            return f"%.{self.precision}{code}" % value
        if mtype == STRING:
            return value
        if mtype.is_char_array:
            return _char_array_text(value)
        raise MiniCRuntimeError(f"cannot print a value of type {mtype}")

    def _exec_stream_out(self, node: StreamOut, frame: dict) -> None:
        for item in node.items:
            if isinstance(item, Literal) and item.category == "endl":
                self.output.append("\n")
            else:
                self.output.append(self._format_stream(self._eval(item, frame), self.types.of(item)))

    def _exec_precision(self, node: PrecisionStmt, frame: dict) -> None:
        if node.op == "fixed":
            self.fixed = True
        else:
            self.precision = node.digits

    def _exec_syncio(self, node: SyncIoStmt, frame: dict) -> None:
        # stylistic only
        return None

    # --- expressions

    def _eval(self, node: Node, frame: dict):
        if isinstance(node, Literal):
            return self._literal(node)
        if isinstance(node, VarRef):
            return self._cell(node, frame).value
        if isinstance(node, BinOp):
            return self._eval_binop(node, frame)
        if isinstance(node, Assign):
            return self._eval_assign(node, frame)
        if isinstance(node, UnaryOp):
            return self._eval_unary(node, frame)
        if isinstance(node, Index):
            return self._lvalue(node, frame).value
        if isinstance(node, Call):
            return self._eval_call(node, frame)
        raise MiniCRuntimeError(f"cannot evaluate {node.kind}", node.nid)

    def _literal(self, node: Literal):
        if node.nid in self._literals:
            return self._literals[node.nid]
        if node.category == "int":
            value = int(node.text)
        elif node.category == "float":
            value = float(node.text)
        elif node.category == "string":
            value = unescape(node.text[1:-1])
        elif node.category == "char":
            value = wrap_integer(ord(unescape(node.text[1:-1])), MiniType("char"))
        elif node.category == "bool":
            value = 1 if node.text == "true" else 0
        else:
            value = "\n"
        self._literals[node.nid] = value
        return value

    def _arith(self, op: str, left, right, result: MiniType, node: Node):
        if result == STRING:
            if op != "+":
                raise MiniCRuntimeError(f"operator {op} is not defined on strings", node.nid)
            as_text = [chr(part & 0xFF) if isinstance(part, int) else part for part in (left, right)]
            return as_text[0] + as_text[1]
        if result.is_floating:
            left, right = float(left), float(right)
            if op == "+":
                return left + right
            if op == "-":
                return left - right
            if op == "*":
                return left * right
            if op == "/":
                if right == 0.0:
                    raise MiniCRuntimeError("floating division by zero", node.nid)
                return left / right
            raise MiniCRuntimeError(f"operator {op} is not defined on floating values", node.nid)
        left, right = int(left), int(right)
        if op == "+":
            value = left + right
        elif op == "-":
            value = left - right
        elif op == "*":
            value = left * right
        else:
            if right == 0:
                raise MiniCRuntimeError("integer division by zero", node.nid)
            quotient = _c_divide(left, right)
            value = quotient if op == "/" else left - right * quotient
        return wrap_integer(value, result)

    def _eval_binop(self, node: BinOp, frame: dict):
        op = node.op
        if op == "&&":
            return 1 if _truthy(self._eval(node.left, frame)) and _truthy(self._eval(node.right, frame)) else 0
        if op == "||":
            return 1 if _truthy(self._eval(node.left, frame)) or _truthy(self._eval(node.right, frame)) else 0
        left = self._eval(node.left, frame)
        right = self._eval(node.right, frame)
        if op in ("==", "!=", "<", "<=", ">", ">="):
            if isinstance(left, str) != isinstance(right, str):
                raise MiniCRuntimeError("cannot compare a string with a number", node.nid)
            outcome = {
                "==": left == right,
                "!=": left != right,
                "<": left < right,
                "<=": left <= right,
                ">": left > right,
                ">=": left >= right,
            }[op]
            return 1 if outcome else 0
        return self._arith(op, left, right, self.types.of(node), node)

    def _eval_assign(self, node: Assign, frame: dict):
        target_type = self.types.of(node.target)
        if target_type.is_array:
            raise MiniCRuntimeError("arrays cannot be assigned", node.nid)
        slot = self._lvalue(node.target, frame)
        value = self._eval(node.value, frame)
        if node.op != "=":
            value_type = self.types.of(node.value)
            if target_type.is_floating or value_type.is_floating:
                combined = DOUBLE
            elif target_type == STRING:
                combined = STRING
            else:
                combined = MiniType("longlong")
            value = self._arith(node.op[0], slot.value, value, combined, node)
        if isinstance(value, list):
            value = deepcopy(value)
        value = coerce(value, target_type)
        slot.value = value
        return value

    def _eval_unary(self, node: UnaryOp, frame: dict):
        if node.op == "!":
            return 0 if _truthy(self._eval(node.operand, frame)) else 1
        if node.op == "-":
            value = self._eval(node.operand, frame)
            result = self.types.of(node)
            return -value if result.is_floating else wrap_integer(-value, result)
        slot = self._lvalue(node.operand, frame)
        mtype = self.types.of(node.operand)
        old = slot.value
        delta = 1 if node.op in ("++", "p++") else -1
        new = coerce(old + delta, mtype)
        slot.value = new
        return old if node.op.startswith("p") else new

    # --- calls

    def _eval_call(self, node: Call, frame: dict):
        if node.method:
            return self._eval_method(node, frame)
        func = self.scope.functions.get(node.name)
        if func is not None:
            return self._invoke(func, node.args, frame)
        handler = getattr(self, f"_builtin_{node.name}")
        return handler(node, frame)

    def _invoke(self, func: FuncDecl, args: List[Node], frame: dict):
        self._tick()
        if len(args) != len(func.params):
            raise MiniCRuntimeError(f"`{func.name}` expects {len(func.params)} arguments", func.nid)
        callee: dict = {}
        for param, arg in zip(func.params, args):
            if param.by_ref:
                callee[param.nid] = self._lvalue(arg, frame)
            elif param.is_array:
                callee[param.nid] = Cell(self._eval(arg, frame))
            else:
                value = self._eval(arg, frame)
                if isinstance(value, list):
                    value = deepcopy(value)
                callee[param.nid] = Cell(coerce(value, self.types.of_declaration(param)))
        ret_type = resolve_typeref(func.ret, self.scope.typedefs)
        try:
            for stmt in func.body.stmts:
                self._exec(stmt, callee)
        except _Return as ret:
            if ret.value is None or ret_type.name == "void":
                return None
            value = ret.value
            if isinstance(value, list):
                value = deepcopy(value)
            return coerce(value, ret_type)
        if ret_type.name == "void":
            return None
        return self._zero(ret_type)

    def _eval_method(self, node: Call, frame: dict):
        receiver_type = self.types.of(node.args[0])
        if node.name == "size":
            return len(self._eval(node.args[0], frame))
        value = self._eval(node.args[1], frame)
        if receiver_type == STRING:
            slot = self._lvalue(node.args[0], frame)
            slot.value = slot.value + (chr(value & 0xFF) if isinstance(value, int) else value)
            return None
        if not receiver_type.is_vec:
            raise MiniCRuntimeError(f"push is not defined on {receiver_type}", node.nid)
        if isinstance(value, list):
            value = deepcopy(value)
        self._eval(node.args[0], frame).append(coerce(value, receiver_type.elem))
        return None

    def _builtin_scan(self, node: Call, frame: dict) -> int:
        fmt = self._eval(node.args[0], frame)
        targets = iter(node.args[1:])
        assigned = 0
        pos = 0
        while pos < len(fmt):
            char = fmt[pos]
            if char.isspace():
                self.input.skip_whitespace()
                pos += 1
                continue
            if char != "%":
                if not self.input.match_literal(char):
                    break
                pos += 1
                continue
            match = FORMAT_RE.match(fmt, pos)
            if match is None:
                raise MiniCRuntimeError(f"bad scan format {fmt!r}", node.nid)
            pos = match.end()
            conversion = match.group(3)
            if conversion == "%":
                if not self.input.match_literal("%"):
                    break
                continue
            target = next(targets, None)
            if target is None:
                raise MiniCRuntimeError("scan has fewer targets than conversions", node.nid)
            mtype = self.types.of(target)
            if conversion == "c" and mtype.name != "char":
                raise MiniCRuntimeError("%c needs a char target", node.nid)
            if not self._read_into(target, frame, mtype, conversion):
                return assigned if assigned else -1
            assigned += 1
        return assigned

    def _builtin_print(self, node: Call, frame: dict) -> int:
        fmt = self._eval(node.args[0], frame)
        args = iter(node.args[1:])
        pieces = []
        last = 0
        for match in FORMAT_RE.finditer(fmt):
            pieces.append(fmt[last : match.start()])
            last = match.end()
            flags, conversion = match.group(1), match.group(3)
            if conversion == "%":
                pieces.append("%")
                continue
            arg = next(args, None)
            if arg is None:
                raise MiniCRuntimeError("print has fewer arguments than conversions", node.nid)
            value = self._eval(arg, frame)
            if conversion == "s":
                value = _char_array_text(value) if isinstance(value, list) else value
            elif conversion == "c":
                value = chr(int(value) & 0xFF)
            elif conversion in "diouxX":
                value = int(value)
            else:
                value = float(value)
            pieces.append(f"%{flags}{conversion}" % value)
        pieces.append(fmt[last:])
        text = "".join(pieces)
        self.output.append(text)
        return len(text)

    def _builtin_fopenin(self, node: Call, frame: dict) -> None:
        # redirected input files hold the task input
        self.input = InputStream(self.stdin_text)

    def _builtin_fopenout(self, node: Call, frame: dict) -> None:
        # the redirected output file is judged like standard output
        return None

    def _builtin_strlen(self, node: Call, frame: dict) -> int:
        value = self._eval(node.args[0], frame)
        return len(_char_array_text(value)) if isinstance(value, list) else len(value)

    def _builtin_sqrt(self, node: Call, frame: dict) -> float:
        value = float(self._eval(node.args[0], frame))
        if value < 0:
            raise MiniCRuntimeError("sqrt of a negative value", node.nid)
        return math.sqrt(value)

    def _builtin_abs(self, node: Call, frame: dict):
        value = self._eval(node.args[0], frame)
        result = self.types.of(node)
        return abs(value) if result.is_floating else wrap_integer(abs(value), result)

    def _builtin_max(self, node: Call, frame: dict):
        left, right = (self._eval(arg, frame) for arg in node.args)
        return coerce(left if left >= right else right, self.types.of(node))

    def _builtin_min(self, node: Call, frame: dict):
        left, right = (self._eval(arg, frame) for arg in node.args)
        return coerce(left if left <= right else right, self.types.of(node))


def interpret(program: SourceProgram, stdin_text: str, fuel: int = DEFAULT_FUEL) -> ProgramOutput:
    """Run ``program`` on ``stdin_text``.

    Raises
    ------
    MiniCRuntimeError
        On division by zero, an out of bounds index or a missing ``main``.
    FuelExhausted
        When more than ``fuel`` steps are executed.
    """
    return Interpreter(program, stdin_text, fuel).run()


def semantically_equivalent(
    a: SourceProgram, b: SourceProgram, inputs: Iterable[str], fuel: int = DEFAULT_FUEL
) -> bool:
    """Whether ``a`` and ``b`` print the same text and exit alike on every input.

    Any error on either side makes the pair non-equivalent.
    """
    for stdin_text in inputs:
        try:
            left = interpret(a, stdin_text, fuel)
            right = interpret(b, stdin_text, fuel)
        except (LangError, RecursionError):
            return False
        if left.stdout_text != right.stdout_text or left.exit_code != right.exit_code:
            return False
    return True
