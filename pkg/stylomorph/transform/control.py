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

# Control transformations: loop interchange, condition splitting and moving
# blocks of code into freshly created functions.

from itertools import count
from typing import Dict, Iterator, List, Optional, Set

from ..lang.ast import (
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
    Literal,
    Node,
    Param,
    Program,
    ReturnStmt,
    TypeRef,
    UnaryOp,
    VarRef,
    WhileStmt,
    clone,
    find_all,
    replace_node,
    walk,
    walk_with_parent,
)
from .base import (
    Representation,
    TransformContext,
    TransformFamily,
    Transformer,
    can_declare_before,
    dangles,
    fresh_name,
    register,
    statement_list,
    subtree_ids,
)

__all__ = (
    "ForToWhile",
    "WhileToFor",
    "FunctionCreator",
    "DeepestBlock",
    "IfSplit",
)

_NEEDS = frozenset((Representation.ast, Representation.cfg, Representation.udc))
FUNCTION_NAMES = ("solve", "process", "work", "calc", "run", "helper")
FLAG_NAMES = ("ret", "res", "result", "value", "out")


def _function_names() -> Iterator[str]:
    yield from FUNCTION_NAMES
    for suffix in count(2):
        for base in FUNCTION_NAMES:
            yield f"{base}{suffix}"


@register
class ForToWhile(Transformer):
    ID = "control.for_to_while"
    FAMILY = TransformFamily.control
    NEEDS = _NEEDS
    DESCRIPTION = "Replace a for-statement by an equivalent while-statement."

    def sites(self, ctx: TransformContext) -> List[Node]:
        return find_all(ctx.ast, ForStmt)

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        parent = ctx.parent_in(nodes, site)
        body = site.body
        if site.step is not None:
            step = ExprStmt(site.step)
            if isinstance(body, CompoundStmt):
                body.stmts.append(step)
            else:
                body = CompoundStmt([body, step])
        cond = site.cond if site.cond is not None else Literal("bool", "true")
        loop = WhileStmt(cond, body)
        if site.init is None:
            loop.comments = site.comments
            replacement: List[Node] = [loop]
        else:
            init = site.init
            init.comments = site.comments + init.comments
            replacement = [init, loop]
        stmts = statement_list(parent)
        hoist = stmts is not None and (
            not isinstance(site.init, DeclStmt) or can_declare_before(ctx, parent, site, site.init.name)
        )
        if hoist:
            position = next(idx for idx, stmt in enumerate(stmts) if stmt is site)
            stmts[position : position + 1] = replacement
        elif len(replacement) == 1:
            replace_node(parent, site, loop)
        else:
            replace_node(parent, site, CompoundStmt(replacement))


def _step_target(stmt: Node) -> Optional[str]:
    if not isinstance(stmt, ExprStmt) or stmt.comments:
        return None
    expr = stmt.expr
    if isinstance(expr, UnaryOp) and expr.is_increment and isinstance(expr.operand, VarRef):
        return expr.operand.name
    if isinstance(expr, Assign) and isinstance(expr.target, VarRef):
        return expr.target.name
    return None


@register
class WhileToFor(Transformer):
    ID = "control.while_to_for"
    FAMILY = TransformFamily.control
    NEEDS = _NEEDS
    DESCRIPTION = "Replace a while-statement by an equivalent for-statement."

    def sites(self, ctx: TransformContext) -> List[Node]:
        return find_all(ctx.ast, WhileStmt)

    def _loop_variables(self, site: WhileStmt) -> Set[str]:
        return {node.name for node in walk(site.cond) if isinstance(node, VarRef)}

    def _movable_init(self, ctx: TransformContext, site: WhileStmt) -> Optional[Node]:
        parent = ctx.parents.get(site.nid)
        stmts = statement_list(parent)
        if stmts is None:
            return None
        position = next(idx for idx, stmt in enumerate(stmts) if stmt is site)
        if position == 0:
            return None
        previous = stmts[position - 1]
        names = self._loop_variables(site)
        if isinstance(previous, DeclStmt):
            if previous.name not in names or previous.init is None or previous.is_array or previous.type.is_vec:
                return None
            inside = subtree_ids(site)
            if all(ref.nid in inside for ref in ctx.program.scope.references(previous)):
                return previous
            return None
        if isinstance(previous, ExprStmt) and isinstance(previous.expr, Assign):
            target = previous.expr.target
            if previous.expr.op == "=" and isinstance(target, VarRef) and target.name in names:
                return previous
        return None

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        names = self._loop_variables(site)
        step = None
        body = site.body
        if isinstance(body, CompoundStmt) and body.stmts and _step_target(body.stmts[-1]) in names:
            step = body.stmts.pop().expr
        loop = ForStmt(None, site.cond, step, body, comments=site.comments)
        parent = ctx.parent_in(nodes, site)
        init = self._movable_init(ctx, ctx.nodes[site.nid])
        if init is not None:
            moved = nodes[init.nid]
            replace_node(parent, moved, None)
            loop.comments = moved.comments + loop.comments
            moved.comments = []
            loop.init = moved
        replace_node(parent, site, loop)


@register
class IfSplit(Transformer):
    ID = "control.if_split"
    FAMILY = TransformFamily.control
    NEEDS = _NEEDS
    DESCRIPTION = "Split the condition of an if-statement at a logical operator into a cascade of ifs."

    def sites(self, ctx: TransformContext) -> List[Node]:
        found = []
        for node in find_all(ctx.ast, IfStmt):
            cond = node.cond
            if not isinstance(cond, BinOp):
                continue
            if cond.op == "&&" and node.els is None:
                found.append(node)
            elif cond.op == "||" and not dangles(node.then):
                found.append(node)
        return found

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        cond = site.cond
        if cond.op == "&&":
            split = IfStmt(cond.left, IfStmt(cond.right, site.then), None, comments=site.comments)
        else:
            second = IfStmt(cond.right, clone(site.then), site.els)
            split = IfStmt(cond.left, site.then, second, comments=site.comments)
        replace_node(ctx.parent_in(nodes, site), site, split)


class _BlockExtractor:
    """Moves a block into a new function, passing captured locals as parameters.

    Locals whose definitions inside the block reach any use are passed by
    reference, arrays as array parameters and everything else by value. A
    ``return`` inside the block sets a by-reference result slot and makes the
    new function return 1, which the caller turns back into its own return.
    """

    def candidates(self, ctx: TransformContext) -> List[CompoundStmt]:
        found = []
        for func in ctx.ast.functions():
            for node in walk(func.body):
                if node is func.body or not isinstance(node, CompoundStmt) or not node.stmts:
                    continue
                if self.captured(ctx, node) is not None:
                    found.append(node)
        return found

    def captured(self, ctx: TransformContext, block: CompoundStmt) -> Optional[List[Node]]:
        scope = ctx.program.scope
        inside = subtree_ids(block)
        seen: List[Node] = []
        for node in walk(block):
            if not isinstance(node, VarRef):
                continue
            decl = scope.declaration(node)
            if isinstance(decl, GlobalDecl) or decl.nid in inside or any(known is decl for known in seen):
                continue
            seen.append(decl)
        top_level = {stmt.name for stmt in block.stmts if isinstance(stmt, DeclStmt)}
        if any(decl.name in top_level for decl in seen):
            return None
        return seen

    def by_reference(self, ctx: TransformContext, block: CompoundStmt, decl: Node) -> bool:
        inside = subtree_ids(block)
        chains = ctx.chains
        for ref in ctx.program.scope.references(decl):
            if any(definition in inside for definition in chains.defs_of(ref.nid)):
                return True
        return False

    def extract(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], block: CompoundStmt) -> None:
        original = ctx.nodes[block.nid]
        decls = self.captured(ctx, original)
        taken = set(ctx.names)
        name = fresh_name(_function_names(), taken)
        taken.add(name)
        params: List[Param] = []
        args: List[Node] = []
        for decl in decls:
            mtype = ctx.program.types.of_declaration(decl)
            if mtype.is_array:
                params.append(Param(clone(decl.type), decl.name, is_array=True))
            else:
                by_ref = self.by_reference(ctx, original, decl)
                params.append(Param(clone(decl.type), decl.name, by_ref=by_ref))
            args.append(VarRef(decl.name))

        owner = ctx.function_of(original)
        ret_type: TypeRef = nodes[owner.nid].ret
        returns = find_all(block, ReturnStmt)
        body = CompoundStmt(block.stmts, block.trailing_comments)
        call_site: List[Node]
        if returns:
            slot = None
            if ret_type.name != "void":
                slot = fresh_name(FLAG_NAMES + tuple(f"ret{idx}" for idx in range(2, 100)), taken)
                params.append(Param(clone(ret_type), slot, by_ref=True))
            for ret in returns:
                done = ReturnStmt(Literal("int", "1"))
                if slot is not None and ret.value is not None:
                    store = ExprStmt(Assign("=", VarRef(slot), ret.value), comments=ret.comments)
                    _replace_statement(body, ret, CompoundStmt([store, done]))
                else:
                    done.comments = ret.comments
                    _replace_statement(body, ret, done)
            body.stmts.append(ReturnStmt(Literal("int", "0")))
            func = FuncDecl(TypeRef("int"), name, params, body)
            if slot is None:
                call_site = [IfStmt(Call(name, args), ReturnStmt())]
            else:
                call = Call(name, args + [VarRef(slot)])
                call_site = [DeclStmt(clone(ret_type), slot), IfStmt(call, ReturnStmt(VarRef(slot)))]
        else:
            func = FuncDecl(TypeRef("void"), name, params, body)
            call_site = [ExprStmt(Call(name, args))]
        block.stmts = call_site
        block.trailing_comments = []
        position = next(idx for idx, item in enumerate(ast.items) if item is nodes[owner.nid])
        ast.items.insert(position, func)


def _replace_statement(root: Node, old: Node, new: Node) -> None:
    for node, parent in walk_with_parent(root):
        if node is old:
            replace_node(parent, old, new)
            return
    raise KeyError(old.nid)


_EXTRACTOR = _BlockExtractor()


@register
class FunctionCreator(Transformer):
    ID = "control.function_creator"
    FAMILY = TransformFamily.control
    NEEDS = _NEEDS
    DESCRIPTION = "Move a block into a new function and call it at the original position."

    def sites(self, ctx: TransformContext) -> List[Node]:
        # the analysis must be computable for every candidate
        ctx.chains
        return _EXTRACTOR.candidates(ctx)

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        _EXTRACTOR.extract(ctx, ast, nodes, site)


@register
class DeepestBlock(Transformer):
    ID = "control.deepest_block"
    FAMILY = TransformFamily.control
    NEEDS = _NEEDS
    DESCRIPTION = "Move the deepest block of the program into a new function."

    def sites(self, ctx: TransformContext) -> List[Node]:
        ctx.chains
        candidates = _EXTRACTOR.candidates(ctx)
        if not candidates:
            return []

        def depth(node: Node) -> int:
            level = 0
            current = ctx.parents.get(node.nid)
            while current is not None:
                level += 1
                current = ctx.parents.get(current.nid)
            return level

        deepest = max(depth(node) for node in candidates)
        # candidates come in source order, so the first one wins ties
        return [next(node for node in candidates if depth(node) == deepest)]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        _EXTRACTOR.extract(ctx, ast, nodes, site)
