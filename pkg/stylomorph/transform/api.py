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

# API transformations: switch between the C and the stream dialect for input
# and output, redirect the standard streams and toggle stream synchronisation.

from typing import Dict, List, Optional, Tuple

from ..lang.ast import (
    Call,
    ExprStmt,
    FuncDecl,
    Literal,
    Node,
    PrecisionStmt,
    Program,
    StreamIn,
    StreamOut,
    SyncIoStmt,
    find_all,
    replace_node,
    walk,
)
from ..lang.interpreter import FORMAT_RE
from ..lang.types import MiniType
from .base import (
    Representation,
    TransformContext,
    TransformFamily,
    Transformer,
    register,
    remove_statement,
    statement_list,
)
from .formats import escape_format, format_text, print_conversion, scan_conversion
from .headers import ensure_include

__all__ = (
    "INPUT_FILE",
    "OUTPUT_FILE",
    "InputToStdin",
    "InputToFile",
    "OutputToStdout",
    "OutputToFile",
    "InputToCppStyle",
    "InputToCStyle",
    "OutputToCppStyle",
    "OutputToCStyle",
    "SyncIoToggle",
)

_NEEDS = frozenset((Representation.ast, Representation.cfg, Representation.drm))
INPUT_FILE = "input.txt"
OUTPUT_FILE = "output.txt"
_WHITESPACE_UNITS = (" ", "\\n", "\\t")


def _call_statement(stmt: Node, name: str) -> bool:
    return isinstance(stmt, ExprStmt) and isinstance(stmt.expr, Call) and stmt.expr.name == name


def _reads_input(node: Node) -> bool:
    return any(
        isinstance(child, StreamIn) or (isinstance(child, Call) and child.name == "scan") for child in walk(node)
    )


def _calls_user_function(ctx: TransformContext, node: Node) -> bool:
    functions = ctx.program.scope.functions
    return any(isinstance(child, Call) and not child.method and child.name in functions for child in walk(node))


def _main(ast: Program) -> Optional[FuncDecl]:
    return ast.function("main")


def _string_literal(raw: str) -> Literal:
    return Literal("string", f'"{raw}"')


@register
class InputToStdin(Transformer):
    ID = "api.input_to_stdin"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = "Read from standard input instead of a redirected input file."

    def sites(self, ctx: TransformContext) -> List[Node]:
        main = _main(ctx.ast)
        if main is None:
            return []
        found = []
        for position, stmt in enumerate(main.body.stmts):
            if not _call_statement(stmt, "fopenin"):
                continue
            before = main.body.stmts[:position]
            if not any(_reads_input(prev) or _calls_user_function(ctx, prev) for prev in before):
                found.append(stmt)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        remove_statement(ctx.parent_in(nodes, site), site)


@register
class InputToFile(Transformer):
    ID = "api.input_to_file"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = f"Redirect the input to the file {INPUT_FILE}."

    def sites(self, ctx: TransformContext) -> List[Node]:
        main = _main(ctx.ast)
        if main is None or not _reads_input(ctx.ast):
            return []
        if any(call.name == "fopenin" for call in find_all(ctx.ast, Call)):
            return []
        return [main]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        site.body.stmts.insert(0, ExprStmt(Call("fopenin", [_string_literal(INPUT_FILE)])))
        ensure_include(ast, "cstdio")


@register
class OutputToStdout(Transformer):
    ID = "api.output_to_stdout"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = "Write to standard output instead of a redirected output file."

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [
            stmt
            for stmt in find_all(ctx.ast, ExprStmt)
            if _call_statement(stmt, "fopenout") and statement_list(ctx.parents.get(stmt.nid)) is not None
        ]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        remove_statement(ctx.parent_in(nodes, site), site)


@register
class OutputToFile(Transformer):
    ID = "api.output_to_file"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = f"Redirect the output to the file {OUTPUT_FILE}."

    def sites(self, ctx: TransformContext) -> List[Node]:
        main = _main(ctx.ast)
        if main is None or any(call.name == "fopenout" for call in find_all(ctx.ast, Call)):
            return []
        return [main]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        stmts = site.body.stmts
        position = 0
        while position < len(stmts) and _call_statement(stmts[position], "fopenin"):
            position += 1
        stmts.insert(position, ExprStmt(Call("fopenout", [_string_literal(OUTPUT_FILE)])))
        ensure_include(ast, "cstdio")


def _format_units(raw: str) -> Optional[List[Tuple[str, object]]]:
    """Split a format body into ``("text", unit)`` and ``("conv", match)`` pieces.

    Escape sequences stay together as one text unit.
    """
    units: List[Tuple[str, object]] = []
    pos = 0
    while pos < len(raw):
        char = raw[pos]
        if char == "%":
            match = FORMAT_RE.match(raw, pos)
            if match is None:
                return None
            if match.group(3) == "%":
                units.append(("text", "%"))
            else:
                units.append(("conv", match))
            pos = match.end()
        elif char == "\\" and pos + 1 < len(raw):
            units.append(("text", raw[pos : pos + 2]))
            pos += 2
        else:
            units.append(("text", char))
            pos += 1
    return units


def _scan_target_matches(conversion: str, mtype: MiniType) -> bool:
    if conversion in "di":
        return mtype.is_integral and mtype.name not in ("char", "bool")
    if conversion in "feg":
        return mtype.is_floating
    if conversion == "s":
        return mtype.name == "string" or mtype.is_char_array
    if conversion == "c":
        return mtype.name == "char"
    return False


@register
class InputToCppStyle(Transformer):
    ID = "api.input_to_cppstyle"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = "Replace a scan call by stream input."

    def _applicable(self, ctx: TransformContext, stmt: ExprStmt) -> bool:
        call = stmt.expr
        raw = format_text(call)
        units = None if raw is None else _format_units(raw)
        if units is None:
            return False
        targets = iter(call.args[1:])
        after_space = False
        converted = 0
        for kind, unit in units:
            if kind == "text":
                if unit not in _WHITESPACE_UNITS:
                    return False
                after_space = True
                continue
            target = next(targets, None)
            if target is None or unit.group(1):
                return False
            conversion = unit.group(3)
            if conversion == "c" and not after_space:
                return False
            if not _scan_target_matches(conversion, ctx.program.types.of(target)):
                return False
            after_space = False
            converted += 1
        return converted > 0 and converted == len(call.args) - 1

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [
            stmt
            for stmt in find_all(ctx.ast, ExprStmt)
            if _call_statement(stmt, "scan") and self._applicable(ctx, stmt)
        ]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        replacement = StreamIn(site.expr.args[1:], comments=site.comments)
        replace_node(ctx.parent_in(nodes, site), site, replacement)
        ensure_include(ast, "iostream")


@register
class InputToCStyle(Transformer):
    ID = "api.input_to_cstyle"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = "Replace stream input by a scan call with an inferred format."

    def _format(self, ctx: TransformContext, stmt: StreamIn) -> Optional[str]:
        pieces = []
        for target in stmt.targets:
            conversion = scan_conversion(ctx.program.types.of(target))
            if conversion is None:
                return None
            pieces.append(conversion)
        return " ".join(pieces)

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [stmt for stmt in find_all(ctx.ast, StreamIn) if self._format(ctx, stmt) is not None]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        fmt = self._format(ctx, ctx.nodes[site.nid])
        call = Call("scan", [_string_literal(fmt)] + site.targets)
        replace_node(ctx.parent_in(nodes, site), site, ExprStmt(call, comments=site.comments))
        ensure_include(ast, "cstdio")


def _stream_state(ctx: TransformContext, stmt: Node) -> Optional[Tuple[bool, int]]:
    """The single (fixed, precision) state reaching ``stmt``, if there is exactly one."""
    owner = ctx.function_of(stmt)
    if owner is None or owner.name != "main":
        if find_all(ctx.ast, PrecisionStmt):
            return None
        return (False, 6)
    block = ctx.cfg.block_of(stmt.nid)
    if block is None:
        return None
    reaching = ctx.format_states.get(block.id, set())
    if len(reaching) != 1:
        return None
    return next(iter(reaching))


def _float_matches(match, state: Optional[Tuple[bool, int]]) -> bool:
    if state is None:
        return False
    flags, conversion = match.group(1), match.group(3)
    if flags and not (flags.startswith(".") and flags[1:].isdigit()):
        return False
    precision = int(flags[1:]) if flags else 6
    fixed, digits = state
    if conversion == "f":
        return fixed and digits == precision
    if conversion == "g":
        return not fixed and digits == precision
    return False


@register
class OutputToCppStyle(Transformer):
    ID = "api.output_to_cppstyle"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = "Replace a print call by stream output."

    def _items(self, ctx: TransformContext, stmt: ExprStmt) -> Optional[List[Node]]:
        call = stmt.expr
        raw = format_text(call)
        units = None if raw is None else _format_units(raw)
        if units is None:
            return None
        args = iter(call.args[1:])
        items: List[Node] = []
        text: List[str] = []
        state = None

        def flush() -> None:
            if text:
                items.append(_string_literal("".join(text)))
                text.clear()

        for kind, unit in units:
            if kind == "text":
                if unit == "\\n":
                    flush()
                    items.append(Literal("endl", "endl"))
                else:
                    text.append(unit)
                continue
            arg = next(args, None)
            if arg is None:
                return None
            mtype = ctx.program.types.of(arg)
            conversion = unit.group(3)
            if conversion in "feg":
                if state is None:
                    state = _stream_state(ctx, stmt)
                if not mtype.is_floating or not _float_matches(unit, state):
                    return None
            elif unit.group(1):
                return None
            elif conversion in "di":
                if not mtype.is_integral or mtype.name == "char":
                    return None
            elif conversion == "c":
                if mtype.name != "char":
                    return None
            elif conversion == "s":
                if mtype.name != "string" and not mtype.is_char_array:
                    return None
            else:
                return None
            flush()
            items.append(arg)
        if next(args, None) is not None:
            return None
        flush()
        return items or None

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [
            stmt
            for stmt in find_all(ctx.ast, ExprStmt)
            if _call_statement(stmt, "print") and self._items(ctx, stmt) is not None
        ]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        original = self._items(ctx, ctx.nodes[site.nid])
        items = [nodes.get(item.nid, item) for item in original]
        replace_node(ctx.parent_in(nodes, site), site, StreamOut(items, comments=site.comments))
        ensure_include(ast, "iostream")


def _char_literal_text(text: str) -> str:
    body = text[1:-1]
    if body == '"':
        return '\\"'
    if body == "\\'":
        return "'"
    return body


@register
class OutputToCStyle(Transformer):
    ID = "api.output_to_cstyle"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = "Replace stream output by a print call with a format inferred from the item types."

    def _format(self, ctx: TransformContext, stmt: StreamOut) -> Optional[Tuple[str, List[Node]]]:
        pieces = []
        args = []
        state = None
        for item in stmt.items:
            if isinstance(item, Literal) and item.category == "endl":
                pieces.append("\\n")
                continue
            if isinstance(item, Literal) and item.category == "string":
                pieces.append(escape_format(item.text[1:-1]))
                continue
            if isinstance(item, Literal) and item.category == "char":
                pieces.append(escape_format(_char_literal_text(item.text)))
                continue
            mtype = ctx.program.types.of(item)
            if mtype.is_floating:
                if state is None:
                    state = _stream_state(ctx, stmt)
                if state is None:
                    return None
                conversion = print_conversion(mtype, *state)
            else:
                conversion = print_conversion(mtype)
            if conversion is None:
                return None
            pieces.append(conversion)
            args.append(item)
        return "".join(pieces), args

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [stmt for stmt in find_all(ctx.ast, StreamOut) if self._format(ctx, stmt) is not None]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        fmt, args = self._format(ctx, ctx.nodes[site.nid])
        call = Call("print", [_string_literal(fmt)] + [nodes[arg.nid] for arg in args])
        replace_node(ctx.parent_in(nodes, site), site, ExprStmt(call, comments=site.comments))
        ensure_include(ast, "cstdio")


def _mixes_dialects(ast: Program) -> bool:
    c_style = stream = False
    for node in walk(ast):
        if isinstance(node, (StreamIn, StreamOut)):
            stream = True
        elif isinstance(node, Call) and node.name in ("scan", "print"):
            c_style = True
    return c_style and stream


@register
class SyncIoToggle(Transformer):
    ID = "api.syncio_toggle"
    FAMILY = TransformFamily.api
    NEEDS = _NEEDS
    DESCRIPTION = "Remove a stream synchronisation statement, or turn synchronisation off at the start of main."

    def sites(self, ctx: TransformContext) -> List[Node]:
        existing = find_all(ctx.ast, SyncIoStmt)
        if existing:
            return [stmt for stmt in existing if statement_list(ctx.parents.get(stmt.nid)) is not None]
        main = _main(ctx.ast)
        if main is None or _mixes_dialects(ctx.ast):
            return []
        return [main]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        if isinstance(site, SyncIoStmt):
            remove_statement(ctx.parent_in(nodes, site), site)
            return
        site.body.stmts.insert(0, SyncIoStmt(False))
        ensure_include(ast, "iostream")
