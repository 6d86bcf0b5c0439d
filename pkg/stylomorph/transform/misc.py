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

# Miscellaneous transformations: braces around control bodies and the shape of
# return statements.

from typing import Dict, List

from ..lang.ast import (
    CompoundStmt,
    DeclStmt,
    ForStmt,
    FuncDecl,
    IfStmt,
    Literal,
    Node,
    Program,
    ReturnStmt,
    TypeRef,
    VarRef,
    WhileStmt,
    clone,
    find_all,
    replace_node,
)
from ..lang.types import resolve_typeref
from .base import (
    Representation,
    TransformContext,
    TransformFamily,
    Transformer,
    dangles,
    fresh_name,
    register,
    statement_list,
)
from .control import FLAG_NAMES

__all__ = (
    "CompoundInsert",
    "CompoundDelete",
    "ReturnAdd",
    "LiteralReturnToVariable",
)

_NEEDS = frozenset((Representation.ast,))
_CONTROL = (IfStmt, ForStmt, WhileStmt)


def _control_bodies(node: Node) -> List[Node]:
    if isinstance(node, IfStmt):
        return [body for body in (node.then, node.els) if body is not None]
    return [node.body]


@register
class CompoundInsert(Transformer):
    ID = "misc.compound_insert"
    FAMILY = TransformFamily.misc
    NEEDS = _NEEDS
    DESCRIPTION = "Wrap the body of a control statement in a compound statement."

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for node in ctx.ast.functions():
            for control in find_all(node.body, _CONTROL):
                found.extend(body for body in _control_bodies(control) if not isinstance(body, CompoundStmt))
        return sorted(found, key=lambda node: node.nid)

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        replace_node(ctx.parent_in(nodes, site), site, CompoundStmt([site]))


@register
class CompoundDelete(Transformer):
    ID = "misc.compound_delete"
    FAMILY = TransformFamily.misc
    NEEDS = _NEEDS
    DESCRIPTION = "Remove a compound statement that holds a single statement."

    def _would_dangle(self, ctx: TransformContext, block: CompoundStmt) -> bool:
        if not dangles(block.stmts[0]):
            return False
        child: Node = block
        parent = ctx.parents.get(block.nid)
        while isinstance(parent, _CONTROL):
            if isinstance(parent, IfStmt) and parent.then is child and parent.els is not None:
                return True
            child, parent = parent, ctx.parents.get(parent.nid)
        return False

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for block in find_all(ctx.ast, CompoundStmt):
            parent = ctx.parents.get(block.nid)
            if isinstance(parent, FuncDecl) or len(block.stmts) != 1:
                continue
            if isinstance(block.stmts[0], DeclStmt) or block.trailing_comments or block.comments:
                continue
            if not self._would_dangle(ctx, block):
                found.append(block)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        replace_node(ctx.parent_in(nodes, site), site, site.stmts[0])


@register
class ReturnAdd(Transformer):
    ID = "misc.return_add"
    FAMILY = TransformFamily.misc
    NEEDS = _NEEDS
    DESCRIPTION = "Make the implicit return at the end of main or of a void function explicit."

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for func in ctx.ast.functions():
            if func.name != "main" and func.ret.name != "void":
                continue
            stmts = func.body.stmts
            if not stmts or not isinstance(stmts[-1], ReturnStmt):
                found.append(func)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        value = Literal("int", "0") if site.name == "main" else None
        site.body.stmts.append(ReturnStmt(value, comments=site.body.trailing_comments))
        site.body.trailing_comments = []


@register
class LiteralReturnToVariable(Transformer):
    ID = "misc.literal_return_to_variable"
    FAMILY = TransformFamily.misc
    NEEDS = _NEEDS
    DESCRIPTION = "Return a literal through a freshly declared variable."

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for func in ctx.ast.functions():
            if not resolve_typeref(func.ret, ctx.program.scope.typedefs).is_numeric:
                continue
            for ret in find_all(func.body, ReturnStmt):
                if isinstance(ret.value, Literal) and ret.value.category == "int":
                    found.append(ret)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        owner = ctx.function_of(ctx.nodes[site.nid])
        name = fresh_name(FLAG_NAMES + tuple(f"ret{idx}" for idx in range(2, 100)), ctx.names)
        decl = DeclStmt(TypeRef(owner.ret.name, clone(owner.ret.elem)), name, init=site.value, comments=site.comments)
        replacement = [decl, ReturnStmt(VarRef(name))]
        parent = ctx.parent_in(nodes, site)
        stmts = statement_list(parent)
        if stmts is not None:
            position = next(idx for idx, stmt in enumerate(stmts) if stmt is site)
            stmts[position : position + 1] = replacement
        else:
            replace_node(parent, site, CompoundStmt(replacement))
