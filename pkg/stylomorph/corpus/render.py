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

# Renders a task solution the way a given synthetic author would write it.
#
# A renderer drives a :class:`_Writer` through the solution once; the writer
# realizes every habit of the profile (loop kind, I/O dialect, naming,
# declaration placement, braces, layout) and a few seeded per-file variations.

import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from ..lang.errors import LangError
from ..lang.interpreter import interpret
from ..lang.program import SourceProgram, parse
from ..utils import SplitMix64, derive_seed
from .profiles import (
    BraceHabit,
    CommentStyle,
    ContainerPref,
    DeclPlacement,
    IoPref,
    LoopPref,
    Naming,
    ReturnHabit,
    StyleProfile,
)
from .tasks import TaskSpec

__all__ = (
    "RenderError",
    "NAME_TABLE",
    "render",
    "render_source",
)

ARRAY_CAPACITY = 1005
TEXT_CAPACITY = 105

# logical name -> candidate spellings per naming scheme
NAME_TABLE: Dict[Naming, Dict[str, Tuple[str, ...]]] = {
    Naming.short: {
        "size": ("n", "N"),
        "arr": ("a", "arr"),
        "idx": ("i",),
        "jdx": ("j",),
        "val": ("x", "v"),
        "val2": ("y", "w"),
        "total": ("sum", "tot"),
        "best": ("mx", "bst"),
        "cur": ("cur", "c"),
        "text": ("s", "str"),
        "length": ("len", "sz"),
        "counter": ("cnt", "k"),
        "result": ("res", "ans"),
        "tmp": ("t", "tmp"),
        "digit": ("d", "ds"),
        "code": ("ret", "rc"),
        "gcd_fn": ("gcd", "g"),
        "first": ("a", "p"),
        "second": ("b", "q"),
    },
    Naming.descriptive: {
        "size": ("count", "amount"),
        "arr": ("values", "numbers"),
        "idx": ("index", "pos"),
        "jdx": ("inner", "other_index"),
        "val": ("value", "number"),
        "val2": ("second_value", "other"),
        "total": ("total", "running_sum"),
        "best": ("best", "maximum"),
        "cur": ("current", "running"),
        "text": ("word", "line"),
        "length": ("length", "word_length"),
        "counter": ("counter", "occurrences"),
        "result": ("result", "answer"),
        "tmp": ("temp", "swap_value"),
        "digit": ("digit_sum", "digits"),
        "code": ("status", "exit_code"),
        "gcd_fn": ("greatest_common_divisor", "common_divisor"),
        "first": ("first", "left"),
        "second": ("second", "right"),
    },
    Naming.hungarian: {
        "size": ("nSize", "nCount"),
        "arr": ("aValues", "arrNums"),
        "idx": ("iIdx", "nI"),
        "jdx": ("iJdx", "nJ"),
        "val": ("nValue", "nVal"),
        "val2": ("nValue2", "nOther"),
        "total": ("nTotal", "nSum"),
        "best": ("nBest", "nMax"),
        "cur": ("nCur", "nRun"),
        "text": ("szWord", "szText"),
        "length": ("nLen", "nLength"),
        "counter": ("nCounter", "nCnt"),
        "result": ("dResult", "dAnswer"),
        "tmp": ("nTmp", "nSwap"),
        "digit": ("nDigits", "nDigitSum"),
        "code": ("nRet", "nStatus"),
        "gcd_fn": ("GetGcd", "CalcGcd"),
        "first": ("nA", "nFirst"),
        "second": ("nB", "nSecond"),
    },
}

_SPACED_OP_RE = re.compile(r" (<<|>>|<=|>=|==|!=|&&|\|\||[-+*/%]=|=|[-+*/%<>]) ")
_LITERAL_RE = re.compile(r"(\"(?:\\.|[^\"\\])*\"|'(?:\\.|[^'\\])*')")
_SCAN_CONVERSION = {"int": "%d", "longlong": "%lld", "double": "%lf", "text": "%s"}
_PRINT_CONVERSION = {"int": "%d", "longlong": "%lld", "char": "%c", "text": "%s"}


class RenderError(Exception):
    def __init__(self, task: str, reason: str) -> None:
        self.task = task
        self.reason = reason
        super().__init__(f"Cannot render task `{task}`: {reason}")


@dataclass
class _Stmt:
    text: str
    is_decl: bool = False


@dataclass
class _Comment:
    text: str


@dataclass
class _Blank:
    pass


@dataclass
class _Block:
    header: str
    body: List["_Item"] = field(default_factory=list)
    braced: bool = False


_Item = Union[_Stmt, _Comment, _Blank, _Block]
Value = Tuple[str, str]
OutputItem = Union[str, Value]


class _Formatter:
    def __init__(self, profile: StyleProfile) -> None:
        self.profile = profile
        self.layout = profile.layout

    def spaced(self, text: str) -> str:
        if self.layout.op_spacing:
            return text
        pieces = _LITERAL_RE.split(text)
        # odd pieces are literals
        return "".join(piece if idx % 2 else _SPACED_OP_RE.sub(r"\1", piece) for idx, piece in enumerate(pieces))

    def _needs_braces(self, block: _Block) -> bool:
        if block.braced or self.profile.brace_habit == BraceHabit.always:
            return True
        code = [item for item in block.body if not isinstance(item, (_Comment, _Blank))]
        return len(code) != 1 or not isinstance(code[0], _Stmt) or code[0].is_decl

    def comment(self, text: str) -> Optional[str]:
        style = self.layout.comment_style
        if style == CommentStyle.line:
            return f"// {text}"
        if style == CommentStyle.block:
            return f"/* {text} */"
        return None

    def lines(self, items: Sequence[_Item], depth: int) -> List[str]:
        indent = self.layout.indent * depth
        out: List[str] = []
        for item in items:
            if isinstance(item, _Stmt):
                out.append(indent + self.spaced(item.text))
            elif isinstance(item, _Comment):
                text = self.comment(item.text)
                if text is not None:
                    out.append(indent + text)
            elif isinstance(item, _Blank):
                if self.layout.blank_lines and out and out[-1] != "":
                    out.append("")
            elif self._needs_braces(item):
                header = indent + self.spaced(item.header)
                if self.layout.brace_newline:
                    out.extend((header, indent + "{"))
                else:
                    out.append(header + " {")
                body = self.lines(item.body, depth + 1)
                while body and body[-1] == "":
                    body.pop()
                out.extend(body)
                out.append(indent + "}")
            else:
                out.append(indent + self.spaced(item.header))
                out.extend(line for line in self.lines(item.body, depth + 1) if line != "")
        return out


class _Writer:
    def __init__(self, profile: StyleProfile, rng: SplitMix64) -> None:
        self.profile = profile
        self.rng = rng
        self.stream = profile.io_pref == IoPref.stream_style
        self.names: Dict[str, str] = {}
        self.headers: Set[str] = set()
        self.functions: List[_Block] = []
        self.precision: Optional[int] = None
        self._top: List[_Stmt] = []
        self._hoisted: Set[str] = set()
        self._stack: List[List[_Item]] = []
        self._scopes: List[Set[str]] = []

    # --- names and types

    def name(self, logical: str) -> str:
        if logical not in self.names:
            spelling = self.rng.choice(NAME_TABLE[self.profile.naming][logical])
            taken = set(self.names.values())
            candidate, suffix = spelling, 2
            while candidate in taken:
                candidate, suffix = f"{spelling}{suffix}", suffix + 1
            self.names[logical] = candidate
        return self.names[logical]

    def type_text(self, ctype: str) -> str:
        if ctype == "text":
            self.headers.add("string")
            return "string"
        return self.profile.alias_of(ctype)

    # --- structure

    def emit(self, item: _Item) -> None:
        self._stack[-1].append(item)

    def stmt(self, text: str) -> None:
        self.emit(_Stmt(text))

    def comment(self, text: str) -> None:
        self.emit(_Comment(text))

    def blank(self) -> None:
        self.emit(_Blank())

    def _declared(self, name: str) -> bool:
        return name in self._hoisted or any(name in scope for scope in self._scopes)

    @contextmanager
    def block(self, header: str, braced: bool = False, names: Sequence[str] = ()) -> Iterator[_Block]:
        block = _Block(header, braced=braced)
        self.emit(block)
        self._stack.append(block.body)
        self._scopes.append(set(names))
        try:
            yield block
        finally:
            self._stack.pop()
            self._scopes.pop()

    @contextmanager
    def function(self, ret: str, logical: str, params: Sequence[Tuple[str, str]]) -> Iterator[List[str]]:
        name = self.name(logical)
        param_names = [self.name(param) for _, param in params]
        signature = ", ".join(f"{self.type_text(ptype)} {pname}" for (ptype, _), pname in zip(params, param_names))
        block = _Block(f"{self.type_text(ret)} {name}({signature})", braced=True)
        self._start(block, param_names)
        yield param_names
        self._finish(block)

    def _start(self, block: _Block, params: Sequence[str]) -> None:
        self._top, self._hoisted = [], set()
        self._stack = [block.body]
        self._scopes = [set(params)]

    def _finish(self, block: _Block) -> None:
        if self._top:
            top = list(self._top)
            # independent declarations, their order is free
            self.rng.shuffle(top)
            block.body[:0] = top + [_Blank()]
        self.functions.append(block)

    def declare(self, ctype: str, logical: str, init: Optional[str] = None, size: Optional[int] = None) -> str:
        name = self.name(logical)
        if ctype == "text" and not self.stream:
            ctype, size = "char", TEXT_CAPACITY
        type_text = self.type_text(ctype)
        declaration = f"{type_text} {name}" + (f"[{size}]" if size is not None else "")
        hoist = self.profile.decl_placement == DeclPlacement.at_top
        if self._declared(name):
            if init is not None:
                self.stmt(f"{name} = {init};")
        elif hoist:
            self._hoisted.add(name)
            self._top.append(_Stmt(f"{declaration};", is_decl=True))
            if init is not None:
                self.stmt(f"{name} = {init};")
        else:
            self._scopes[-1].add(name)
            text = f"{declaration} = {init};" if init is not None else f"{declaration};"
            self.emit(_Stmt(text, is_decl=True))
        return name

    def vec_type(self, elem: str) -> str:
        self.headers.add("vector")
        return f"vec<{self.type_text(elem)}>"

    # --- control flow

    @contextmanager
    def loop(self, logical: str, start: str, bound: str, cmp: str = "<", step: str = "++") -> Iterator[str]:
        var = self.name(logical)
        if self.profile.loop_pref == LoopPref.for_loop:
            if self.profile.decl_placement == DeclPlacement.at_top or self._declared(var):
                self.declare("int", logical)
                header = f"for ({var} = {start}; {var} {cmp} {bound}; {var}{step})"
                scoped: Sequence[str] = ()
            else:
                header = f"for (int {var} = {start}; {var} {cmp} {bound}; {var}{step})"
                scoped = (var,)
            with self.block(header, names=scoped):
                yield var
        else:
            self.declare("int", logical, init=start)
            with self.block(f"while ({var} {cmp} {bound})", braced=True):
                yield var
                self.stmt(f"{var}{step};")

    @contextmanager
    def while_(self, cond: str) -> Iterator[None]:
        with self.block(f"while ({cond})"):
            yield

    @contextmanager
    def if_(self, cond: str) -> Iterator[None]:
        with self.block(f"if ({cond})"):
            yield

    # --- input and output

    def text(self, logical: str) -> str:
        return self.declare("text", logical)

    def length(self, name: str) -> str:
        if self.stream:
            return f"{name}.size()"
        self.headers.add("cstring")
        return f"strlen({name})"

    def read(self, targets: Sequence[Value]) -> None:
        if self.stream:
            self.stmt("input" + "".join(f" >> {expr}" for expr, _ in targets) + ";")
            return
        fmt = " ".join(_SCAN_CONVERSION[ctype] for _, ctype in targets)
        self.stmt(f'scan("{fmt}", ' + ", ".join(expr for expr, _ in targets) + ");")

    def numbers(self, logical: str, count: str, ctype: str) -> str:
        """Declare a container of ``count`` numbers and fill it from the input."""
        if self.profile.container_pref == ContainerPref.array:
            name = self.declare(ctype, logical, size=ARRAY_CAPACITY)
            with self.loop("idx", "0", count) as idx:
                self.read([(f"{name}[{idx}]", ctype)])
            return name
        name = self.name(logical)
        if self.profile.decl_placement == DeclPlacement.at_top:
            self._hoisted.add(name)
            self._top.append(_Stmt(f"{self.vec_type(ctype)} {name};", is_decl=True))
        else:
            self._scopes[-1].add(name)
            self.emit(_Stmt(f"{self.vec_type(ctype)} {name};", is_decl=True))
        with self.loop("idx", "0", count):
            item = self.declare(ctype, "val")
            self.read([(item, ctype)])
            self.stmt(f"{name}.push({item});")
        return name

    def _float_format(self, digits: int) -> str:
        length = "l" if self.profile.precision_habit is not None else ""
        return f"%.{digits}{length}f"

    def write(self, items: Sequence[OutputItem], newline: bool = True, digits: int = 0) -> None:
        """Print ``items``: plain strings are literal text, pairs are typed values."""
        if self.stream:
            if any(not isinstance(item, str) and item[1] == "double" for item in items):
                if self.precision is None:
                    self.stmt("fixed;")
                if self.precision != digits:
                    self.stmt(f"setprec({digits});")
                    self.precision = digits
                self.headers.add("iomanip")
            parts = [f'"{item}"' if isinstance(item, str) else item[0] for item in items]
            if newline:
                parts.append("endl")
            self.stmt("output" + "".join(f" << {part}" for part in parts) + ";")
            return
        fmt = []
        args = []
        for item in items:
            if isinstance(item, str):
                fmt.append(item)
            else:
                expr, ctype = item
                fmt.append(self._float_format(digits) if ctype == "double" else _PRINT_CONVERSION[ctype])
                args.append(expr)
        if newline:
            fmt.append("\\n")
        self.stmt(f'print("{"".join(fmt)}"' + "".join(f", {arg}" for arg in args) + ");")

    # --- program

    def main(self, body: Callable[["_Writer"], None]) -> None:
        block = _Block("int main()", braced=True)
        self._start(block, ())
        if self.stream and self.profile.fast_io:
            self.stmt("syncio(false);")
        if self.stream and self.profile.precision_habit is not None:
            self.stmt("fixed;")
            self.stmt(f"setprec({self.profile.precision_habit});")
            self.precision = self.profile.precision_habit
            self.headers.add("iomanip")
        code = None
        if self.profile.return_habit == ReturnHabit.variable:
            code = self.declare("int", "code", init="0")
        self.blank()
        body(self)
        self.blank()
        if self.profile.return_habit == ReturnHabit.explicit_zero:
            self.stmt("return 0;")
        elif code is not None:
            self.stmt(f"return {code};")
        self._finish(block)

    def source(self) -> str:
        formatter = _Formatter(self.profile)
        self.headers.add("iostream" if self.stream else "cstdio")
        headers = sorted(self.headers | set(self.profile.include_set))
        lines = [f"#include <{header}>" for header in headers]
        if self.profile.typedef_habit:
            lines.append("")
            lines.extend(f"typedef {base} {alias};" for alias, base in self.profile.typedef_aliases)
        for function in self.functions:
            lines.append("")
            lines.extend(formatter.lines([function], 0))
        return "\n".join(lines) + "\n"


# --- task solutions


def _read_size(w: _Writer) -> str:
    w.comment("read input")
    size = w.declare("int", "size")
    w.read([(size, "int")])
    return size


def _sum_pairs(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    with w.loop("idx", "0", size):
        first = w.declare("longlong", "val")
        second = w.declare("longlong", "val2")
        w.read([(first, "longlong"), (second, "longlong")])
        w.write([(f"{first} + {second}", "longlong")])


def _max_subarray(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    values = w.numbers("arr", size, "longlong")
    w.blank()
    best = w.declare("longlong", "best", init=f"{values}[0]")
    current = w.declare("longlong", "cur", init="0")
    with w.loop("idx", "0", size) as idx:
        w.stmt(f"{current} = {current} + {values}[{idx}];")
        with w.if_(f"{current} < {values}[{idx}]"):
            w.stmt(f"{current} = {values}[{idx}];")
        with w.if_(f"{current} > {best}"):
            w.stmt(f"{best} = {current};")
    w.comment("print answer")
    w.write([(best, "longlong")])


def _string_reverse(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    with w.loop("idx", "0", size):
        word = w.text("text")
        w.read([(word, "text")])
        length = w.declare("int", "length", init=w.length(word))
        with w.loop("jdx", f"{length} - 1", "0", cmp=">=", step="--") as jdx:
            w.write([(f"{word}[{jdx}]", "char")], newline=False)
        w.write([])


def _gcd_helper(w: _Writer) -> None:
    with w.function("int", "gcd_fn", (("int", "first"), ("int", "second"))) as (first, second):
        if w.profile.loop_pref == LoopPref.while_loop:
            with w.while_(f"{second} != 0"):
                rest = w.declare("int", "tmp", init=f"{first} % {second}")
                w.stmt(f"{first} = {second};")
                w.stmt(f"{second} = {rest};")
            w.stmt(f"return {first};")
        else:
            with w.if_(f"{second} == 0"):
                w.stmt(f"return {first};")
            w.stmt(f"return {w.name('gcd_fn')}({second}, {first} % {second});")


def _gcd_pairs(w: _Writer, task: TaskSpec) -> None:
    gcd = w.name("gcd_fn")
    size = _read_size(w)
    values = w.numbers("arr", size, "int")
    w.blank()
    with w.loop("idx", "1", size) as idx:
        w.write([(f"{gcd}({values}[{idx} - 1], {values}[{idx}])", "int")])


def _sorting(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    values = w.numbers("arr", size, "int")
    w.blank()
    w.comment("bubble sort")
    with w.loop("idx", "0", size) as idx:
        with w.loop("jdx", "0", f"{size} - 1 - {idx}") as jdx:
            with w.if_(f"{values}[{jdx}] > {values}[{jdx} + 1]"):
                tmp = w.declare("int", "tmp", init=f"{values}[{jdx}]")
                w.stmt(f"{values}[{jdx}] = {values}[{jdx} + 1];")
                w.stmt(f"{values}[{jdx} + 1] = {tmp};")
    w.blank()
    with w.loop("idx", "0", size) as idx:
        with w.if_(f"{idx} > 0"):
            w.write([" "], newline=False)
        w.write([(f"{values}[{idx}]", "int")], newline=False)
    w.write([])


def _even_digit_sums(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    with w.loop("idx", "0", size):
        limit = w.declare("int", "val")
        w.read([(limit, "int")])
        counter = w.declare("int", "counter", init="0")
        with w.loop("jdx", "1", limit, cmp="<=") as jdx:
            current = w.declare("int", "cur", init=jdx)
            digits = w.declare("int", "digit", init="0")
            with w.while_(f"{current} > 0"):
                w.stmt(f"{digits} = {digits} + {current} % 10;")
                w.stmt(f"{current} = {current} / 10;")
            with w.if_(f"{digits} % 2 == 0"):
                w.stmt(f"{counter}++;")
        w.write([(counter, "int")])


def _matrix_trace(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    total = w.declare("longlong", "total", init="0")
    with w.loop("idx", "0", size) as idx:
        with w.loop("jdx", "0", size) as jdx:
            cell = w.declare("int", "val")
            w.read([(cell, "int")])
            with w.if_(f"{idx} == {jdx}"):
                w.stmt(f"{total} = {total} + {cell};")
    w.blank()
    mean = w.declare("double", "result", init=total)
    w.stmt(f"{mean} = {mean} / {size};")
    w.comment("print answer")
    w.write([(total, "longlong"), " ", (mean, "double")], digits=task.float_digits)


def _run_length(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    with w.loop("idx", "0", size):
        word = w.text("text")
        w.read([(word, "text")])
        length = w.declare("int", "length", init=w.length(word))
        start = w.declare("int", "cur", init="0")
        with w.while_(f"{start} < {length}"):
            end = w.declare("int", "tmp", init=start)
            with w.while_(f"{end} < {length} && {word}[{end}] == {word}[{start}]"):
                w.stmt(f"{end}++;")
            w.write([(f"{word}[{start}]", "char"), (f"{end} - {start}", "int")], newline=False)
            w.stmt(f"{start} = {end};")
        w.write([])


def _max_value(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    values = w.numbers("arr", size, "int")
    best = w.declare("int", "best", init=f"{values}[0]")
    with w.loop("idx", "1", size) as idx:
        if "algorithm" in w.profile.include_set:
            w.stmt(f"{best} = max({best}, {values}[{idx}]);")
        else:
            with w.if_(f"{values}[{idx}] > {best}"):
                w.stmt(f"{best} = {values}[{idx}];")
    w.write([(best, "int")])


def _count_even(w: _Writer, task: TaskSpec) -> None:
    size = _read_size(w)
    counter = w.declare("int", "counter", init="0")
    with w.loop("idx", "0", size):
        value = w.declare("int", "val")
        w.read([(value, "int")])
        with w.if_(f"{value} % 2 == 0"):
            w.stmt(f"{counter}++;")
    w.write([(counter, "int")])


_Solution = Callable[[_Writer, TaskSpec], None]
_RENDERERS: Dict[str, _Solution] = {
    "sum_pairs": _sum_pairs,
    "max_subarray": _max_subarray,
    "string_reverse": _string_reverse,
    "gcd_pairs": _gcd_pairs,
    "sorting": _sorting,
    "even_digit_sums": _even_digit_sums,
    "matrix_trace": _matrix_trace,
    "run_length": _run_length,
    "t1": _max_value,
    "t2": _count_even,
}
# functions written above main
_HELPERS: Dict[str, Callable[[_Writer], None]] = {"gcd_pairs": _gcd_helper}


def render_source(task: TaskSpec, profile: StyleProfile, seed: int) -> str:
    """Source text of ``task`` in the style of ``profile``, without checking it."""
    try:
        solution = _RENDERERS[task.id]
    except KeyError:
        raise RenderError(task.id, "no solution is known for this task")
    writer = _Writer(profile, SplitMix64(derive_seed(seed, task.id)))
    helper = _HELPERS.get(task.id)
    if helper is not None:
        helper(writer)
    writer.main(lambda w: solution(w, task))
    return writer.source()


def render(task: TaskSpec, profile: StyleProfile, seed: int, author: Optional[str] = None) -> SourceProgram:
    """Render ``task`` and check that the result solves it.

    Raises
    ------
    RenderError
        When the rendered file does not parse or prints the wrong output.
    """
    source = render_source(task, profile, seed)
    try:
        program = parse(source, author, task.id)
        output = interpret(program, task.test_input)
    except LangError as exc:
        raise RenderError(task.id, str(exc))
    if output.stdout_text != task.expected_output:
        raise RenderError(task.id, f"printed {output.stdout_text!r}, expected {task.expected_output!r}")
    return program
