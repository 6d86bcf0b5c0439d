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

# Declaration transformations: change, add or remove declarations and adapt
# every use through the declaration-reference mapping.

from typing import Dict, List, Optional

from ..lang.ast import (
    Assign,
    BinOp,
    Call,
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
    Program,
    StreamIn,
    StreamOut,
    TypeRef,
    Typedef,
    UnaryOp,
    VarDecl,
    VarRef,
    WhileStmt,
    clone,
    find_all,
    replace_node,
    walk,
)
from ..lang.printer import print_type
from ..lang.tokens import TYPE_KEYWORDS
from .base import (
    Representation,
    TransformContext,
    TransformFamily,
    Transformer,
    can_declare_before,
    fresh_name,
    register,
    statement_list,
    subtree_ids,
)
from .formats import LENGTH_OF, conversion_for, format_text, with_length
from .headers import header_needed, used_library_names

__all__ = (
    "STRING_CAPACITY",
    "WIDENING",
    "ArrayToVec",
    "StringToCharArray",
    "CharArrayToString",
    "IntegralWidening",
    "FloatToDouble",
    "BoolToInt",
    "IntToBool",
    "TypedefConvert",
    "TypedefDelete",
    "IncludeRemove",
    "UnusedFunctionRemove",
    "UnusedVariableRemove",
    "InitDeclMoveIn",
    "InitDeclMoveOut",
    "declared_types",
    "introduce_typedef",
    "preamble_end",
    "remove_item",
)

_NEEDS = frozenset((Representation.ast, Representation.drm))
# Fixed capacity of the character arrays created from strings; inputs with
# longer tokens make the interpreter fail, which verification rejects.
STRING_CAPACITY = 4096
WIDENING = {"short": "int", "int": "long", "long": "longlong"}
_VALUE_TYPES = tuple(name for name in TYPE_KEYWORDS if name not in ("void", "vec"))


def _variables(ast: Program) -> List[VarDecl]:
    return [node for node in walk(ast) if isinstance(node, (DeclStmt, GlobalDecl))]


def _call_position(call: Call, node: Node) -> int:
    return next(idx for idx, arg in enumerate(call.args) if arg is node)


def _is_written(ctx: TransformContext, node: Node) -> bool:
    """Whether ``node`` is stored into by its parent."""
    parent = ctx.parents.get(node.nid)
    if isinstance(parent, Assign):
        return parent.target is node
    if isinstance(parent, UnaryOp):
        return parent.is_increment
    if isinstance(parent, StreamIn):
        return True
    if isinstance(parent, Call) and not parent.method:
        if parent.name == "scan":
            return _call_position(parent, node) > 0
        func = ctx.program.scope.functions.get(parent.name)
        if func is not None:
            param = func.params[_call_position(parent, node)]
            return param.by_ref or param.is_array
    return False


def _string_io_use(ctx: TransformContext, ref: VarRef) -> bool:
    parent = ctx.parents.get(ref.nid)
    if isinstance(parent, (StreamIn, StreamOut)):
        return True
    if isinstance(parent, Call) and not parent.method and parent.name in ("scan", "print"):
        position = _call_position(parent, ref)
        raw = format_text(parent)
        match = None if raw is None else conversion_for(raw, position)
        return position > 0 and match is not None and match.group(3) == "s"
    return False


def _refs_in_sizes(ctx: TransformContext) -> set:
    found = set()
    for decl in _variables(ctx.ast):
        for part in (decl.array_size, decl.ctor_size):
            if part is not None:
                found |= subtree_ids(part)
    return found


def _adapt_format(ctx: TransformContext, nodes: Dict[int, Node], ref: VarRef, old: str, new: str) -> None:
    parent = ctx.parents.get(ref.nid)
    if not isinstance(parent, Call) or parent.method or parent.name not in ("scan", "print"):
        return
    position = _call_position(parent, ref)
    raw = format_text(parent)
    if raw is None or position == 0:
        return
    match = conversion_for(raw, position)
    if match is None or (match.group(2) or "") != old:
        return
    fmt = nodes[parent.args[0].nid]
    fmt.text = '"' + with_length(raw, position, new) + '"'


def preamble_end(items: List[Node]) -> int:
    """Index right after the leading includes and typedefs."""
    position = 0
    while position < len(items) and isinstance(items[position], (Include, Typedef)):
        position += 1
    return position


def remove_item(ast: Program, item: Node) -> None:
    """Drop a top level item, handing its comments to whatever follows."""
    position = next(idx for idx, current in enumerate(ast.items) if current is item)
    del ast.items[position]
    if item.comments:
        if position < len(ast.items):
            ast.items[position].comments = item.comments + ast.items[position].comments
        else:
            ast.trailing_comments = item.comments + ast.trailing_comments


@register
class ArrayToVec(Transformer):
    ID = "declaration.array_to_vec"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Convert a fixed-size array into a vec object."

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for decl in _variables(ctx.ast):
            if not decl.is_array or decl.init is not None:
                continue
            mtype = ctx.program.types.of_declaration(decl)
            if not mtype.elem.is_numeric or mtype.elem.name == "char":
                continue
            refs = ctx.program.scope.references(decl)
            if all(isinstance(ctx.parents.get(ref.nid), Index) and ctx.parents[ref.nid].base is ref for ref in refs):
                found.append(decl)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        site.type = TypeRef("vec", site.type)
        site.ctor_size = site.array_size
        site.array_size = None


@register
class StringToCharArray(Transformer):
    ID = "declaration.string_to_char_array"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = f"Convert a string object into a char array of {STRING_CAPACITY} characters."

    def _allowed(self, ctx: TransformContext, ref: VarRef) -> bool:
        parent = ctx.parents.get(ref.nid)
        if _string_io_use(ctx, ref):
            return True
        if isinstance(parent, Index) and parent.base is ref:
            return True
        return isinstance(parent, Call) and parent.method and parent.name == "size"

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for decl in _variables(ctx.ast):
            if decl.type.name != "string" or decl.is_array or decl.init is not None:
                continue
            if all(self._allowed(ctx, ref) for ref in ctx.program.scope.references(decl)):
                found.append(decl)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        site.type = TypeRef("char")
        site.array_size = Literal("int", str(STRING_CAPACITY))
        for ref in ctx.program.scope.references(ctx.nodes[site.nid]):
            parent = ctx.parents[ref.nid]
            if isinstance(parent, Call) and parent.method:
                copy = nodes[parent.nid]
                replace_node(ctx.parent_in(nodes, parent), copy, Call("strlen", [nodes[ref.nid]]))


@register
class CharArrayToString(Transformer):
    ID = "declaration.char_array_to_string"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Convert a char array into a string object, replacing strlen by size."

    def _allowed(self, ctx: TransformContext, ref: VarRef) -> bool:
        parent = ctx.parents.get(ref.nid)
        if _string_io_use(ctx, ref):
            return True
        if isinstance(parent, Index) and parent.base is ref:
            return not _is_written(ctx, parent)
        return isinstance(parent, Call) and not parent.method and parent.name == "strlen"

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for decl in _variables(ctx.ast):
            if decl.type.name != "char" or not decl.is_array or decl.init is not None:
                continue
            if all(self._allowed(ctx, ref) for ref in ctx.program.scope.references(decl)):
                found.append(decl)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        site.type = TypeRef("string")
        site.array_size = None
        for ref in ctx.program.scope.references(ctx.nodes[site.nid]):
            parent = ctx.parents[ref.nid]
            if isinstance(parent, Call) and parent.name == "strlen":
                copy = nodes[parent.nid]
                replace_node(ctx.parent_in(nodes, parent), copy, Call("size", [nodes[ref.nid]], method=True))


def _passed_by_reference(ctx: TransformContext, ref: VarRef) -> bool:
    parent = ctx.parents.get(ref.nid)
    if not isinstance(parent, Call) or parent.method:
        return False
    func = ctx.program.scope.functions.get(parent.name)
    if func is None:
        return False
    param = func.params[_call_position(parent, ref)]
    return param.by_ref or param.is_array


def _retypable(ctx: TransformContext, decl: Node) -> bool:
    if isinstance(decl, Param) and (decl.by_ref or decl.is_array):
        return False
    return not any(_passed_by_reference(ctx, ref) for ref in ctx.program.scope.references(decl))


@register
class IntegralWidening(Transformer):
    ID = "declaration.integral_widening"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Promote an integral variable to the next wider integral type."

    def sites(self, ctx: TransformContext) -> List[Node]:
        in_sizes = _refs_in_sizes(ctx)
        found = []
        for decl in ctx.program.scope.declarations:
            if decl.type.name not in WIDENING or decl.is_array:
                continue
            refs = ctx.program.scope.references(decl)
            if any(ref.nid in in_sizes for ref in refs) or not _retypable(ctx, decl):
                continue
            found.append(decl)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        old = site.type.name
        site.type.name = WIDENING[old]
        for ref in ctx.program.scope.references(ctx.nodes[site.nid]):
            _adapt_format(ctx, nodes, ref, LENGTH_OF[old], LENGTH_OF[site.type.name])


@register
class FloatToDouble(Transformer):
    ID = "declaration.float_to_double"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Convert a float variable to double."

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [
            decl
            for decl in ctx.program.scope.declarations
            if decl.type.name == "float" and _retypable(ctx, decl)
        ]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        site.type.name = "double"
        for ref in ctx.program.scope.references(ctx.nodes[site.nid]):
            parent = ctx.parents.get(ref.nid)
            if isinstance(parent, Call) and parent.name == "scan":
                _adapt_format(ctx, nodes, ref, "", "l")


@register
class BoolToInt(Transformer):
    ID = "declaration.bool_to_int"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Replace a true or false literal by its integer value."

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [node for node in find_all(ctx.ast, Literal) if node.category == "bool"]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        site.category = "int"
        site.text = "1" if site.text == "true" else "0"


def _is_flag_literal(node: Optional[Node]) -> bool:
    if not isinstance(node, Literal):
        return False
    return node.category == "bool" or (node.category == "int" and node.text in ("0", "1"))


@register
class IntToBool(Transformer):
    ID = "declaration.int_to_bool"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Turn an int variable used only as a truth value into a bool."

    def _boolean_use(self, ctx: TransformContext, ref: VarRef) -> bool:
        parent = ctx.parents.get(ref.nid)
        if isinstance(parent, Assign):
            holder = ctx.parents.get(parent.nid)
            return parent.op == "=" and parent.target is ref and _is_flag_literal(parent.value) and isinstance(
                holder, ExprStmt
            )
        if isinstance(parent, (IfStmt, WhileStmt, ForStmt)):
            return parent.cond is ref
        if isinstance(parent, UnaryOp):
            return parent.op == "!"
        if isinstance(parent, BinOp):
            return parent.op in ("&&", "||")
        return False

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for decl in _variables(ctx.ast):
            if decl.type.name != "int" or decl.is_array:
                continue
            if decl.init is not None and not _is_flag_literal(decl.init):
                continue
            refs = ctx.program.scope.references(decl)
            if refs and all(self._boolean_use(ctx, ref) for ref in refs):
                found.append(decl)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        site.type.name = "bool"


def declared_types(ast: Program) -> List[TypeRef]:
    """Top level type references of declarations, parameters and return types."""
    found = []
    for node in walk(ast):
        if isinstance(node, (VarDecl, Param)):
            found.append(node.type)
        elif isinstance(node, FuncDecl):
            found.append(node.ret)
    return found


def _alias_candidates(key: str):
    base = key.replace("<", "_").replace(">", "") + "_t"
    yield base
    for suffix in range(2, 100):
        yield f"{base}{suffix}"


def introduce_typedef(ast: Program, base: TypeRef, alias: str) -> None:
    """Insert ``typedef base alias;`` and use it wherever ``base`` is spelled as a declared type."""
    key = print_type(base)
    for tref in declared_types(ast):
        if print_type(tref) == key:
            tref.name = alias
            tref.elem = None
    ast.items.insert(preamble_end(ast.items), Typedef(clone(base), alias))


@register
class TypedefConvert(Transformer):
    ID = "declaration.typedef_convert"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Introduce a typedef for a type used in the program and adapt its uses."

    def sites(self, ctx: TransformContext) -> List[Node]:
        aliased = {print_type(item.base) for item in ctx.ast.items if isinstance(item, Typedef)}
        found: Dict[str, TypeRef] = {}
        for tref in declared_types(ctx.ast):
            if tref.name not in _VALUE_TYPES and not tref.is_vec:
                continue
            if tref.is_vec and tref.elem.name not in _VALUE_TYPES:
                continue
            key = print_type(tref)
            if key not in aliased and key not in found:
                found[key] = tref
        return list(found.values())

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        base = clone(site)
        alias = fresh_name(_alias_candidates(print_type(base)), ctx.names)
        introduce_typedef(ast, base, alias)


@register
class TypedefDelete(Transformer):
    ID = "declaration.typedef_delete"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Delete a typedef and spell out the original type at every use."

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [item for item in ctx.ast.items if isinstance(item, Typedef)]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        remove_item(ast, site)
        for node in walk(ast):
            if isinstance(node, TypeRef) and node.name == site.alias:
                node.name = site.base.name
                node.elem = clone(site.base.elem)


@register
class IncludeRemove(Transformer):
    ID = "declaration.include_remove"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Remove an include none of whose names is used."

    def sites(self, ctx: TransformContext) -> List[Node]:
        used = used_library_names(ctx.ast)
        return [item for item in ctx.ast.items if isinstance(item, Include) and not header_needed(item.header, used)]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        remove_item(ast, site)


@register
class UnusedFunctionRemove(Transformer):
    ID = "declaration.unused_function_remove"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Remove a function that is never called."

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for func in ctx.ast.functions():
            if func.name == "main":
                continue
            inside = subtree_ids(func)
            if all(call.nid in inside for call in ctx.program.scope.calls.get(func.name, [])):
                found.append(func)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        remove_item(ast, site)


def _side_effect_free(node: Optional[Node]) -> bool:
    if node is None:
        return True
    for child in walk(node):
        if isinstance(child, (Call, Assign)) or (isinstance(child, UnaryOp) and child.is_increment):
            return False
    return True


@register
class UnusedVariableRemove(Transformer):
    ID = "declaration.unused_variable_remove"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Remove a global variable that is never used."

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [
            item
            for item in ctx.ast.items
            if isinstance(item, GlobalDecl)
            and not ctx.program.scope.references(item)
            and all(_side_effect_free(part) for part in (item.init, item.array_size, item.ctor_size))
        ]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        remove_item(ast, site)


def _is_scalar(decl: VarDecl) -> bool:
    return not decl.is_array and decl.ctor_size is None and not decl.type.is_vec


@register
class InitDeclMoveIn(Transformer):
    ID = "declaration.init_decl_move_in"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Move the declaration of a loop variable into the for-statement initialisation."

    def _declaration(self, ctx: TransformContext, loop: ForStmt) -> Optional[DeclStmt]:
        init = loop.init
        if not isinstance(init, ExprStmt) or not isinstance(init.expr, Assign):
            return None
        assign = init.expr
        if assign.op != "=" or not isinstance(assign.target, VarRef):
            return None
        decl = ctx.program.scope.declaration(assign.target)
        if not isinstance(decl, DeclStmt) or not _is_scalar(decl):
            return None
        if decl.init is not None and not isinstance(decl.init, Literal):
            return None
        parent = ctx.parents.get(loop.nid)
        if ctx.parents.get(decl.nid) is not parent or statement_list(parent) is None:
            return None
        inside = subtree_ids(loop)
        if not all(ref.nid in inside for ref in ctx.program.scope.references(decl)):
            return None
        if any(isinstance(node, VarRef) and node.name == decl.name for node in walk(assign.value)):
            return None
        return decl

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [loop for loop in find_all(ctx.ast, ForStmt) if self._declaration(ctx, loop) is not None]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        decl = nodes[self._declaration(ctx, ctx.nodes[site.nid]).nid]
        replace_node(ctx.parent_in(nodes, site), decl, None)
        site.init = DeclStmt(decl.type, decl.name, init=site.init.expr.value)
        site.comments = decl.comments + site.comments


@register
class InitDeclMoveOut(Transformer):
    ID = "declaration.init_decl_move_out"
    FAMILY = TransformFamily.declaration
    NEEDS = _NEEDS
    DESCRIPTION = "Move the declaration of a for-statement variable in front of the loop."

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for loop in find_all(ctx.ast, ForStmt):
            decl = loop.init
            if not isinstance(decl, DeclStmt) or decl.init is None or not _is_scalar(decl):
                continue
            if can_declare_before(ctx, ctx.parents.get(loop.nid), loop, decl.name):
                found.append(loop)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        decl = site.init
        stmts = statement_list(ctx.parent_in(nodes, site))
        position = next(idx for idx, stmt in enumerate(stmts) if stmt is site)
        stmts.insert(position, DeclStmt(decl.type, decl.name))
        site.init = ExprStmt(Assign("=", VarRef(decl.name), decl.init))
