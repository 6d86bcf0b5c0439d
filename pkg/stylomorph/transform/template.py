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

# Template transformations: carry identifiers, includes, global declarations and
# typedefs of the target author's template profile into a program.
#
# Without a template the general patterns of :func:`~.profile.default_profile`
# are used instead.

from typing import Dict, List, Optional, Tuple

from ..lang.ast import FuncDecl, GlobalDecl, Include, Node, Program, TypeRef, Typedef, walk
from ..lang.errors import LangError
from ..lang.printer import print_type
from ..lang.program import parse
from ..lang.tokens import TYPE_KEYWORDS
from .base import RESERVED_NAMES, Representation, TransformContext, TransformFamily, Transformer, fresh_name, register
from .declaration import declared_types, introduce_typedef, preamble_end

__all__ = (
    "IdentifierRename",
    "IncludeAdd",
    "GlobalDeclAdd",
    "IncludeTypedef",
)

_NEEDS = frozenset((Representation.ast, Representation.drm))


def _fresh(ctx: TransformContext, name: str) -> bool:
    return name not in ctx.names and name not in RESERVED_NAMES


@register
class IdentifierRename(Transformer):
    ID = "template.identifier_rename"
    FAMILY = TransformFamily.template
    NEEDS = _NEEDS
    REQUIRES_TEMPLATE = True
    DESCRIPTION = "Rename a variable or function after the identifiers of the template."

    def sites(self, ctx: TransformContext) -> List[Node]:
        if fresh_name(ctx.profile.identifiers, ctx.names) is None:
            return []
        found: List[Node] = list(ctx.program.scope.declarations)
        found.extend(func for func in ctx.ast.functions() if func.name != "main")
        return sorted(found, key=lambda node: node.nid)

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        name = fresh_name(ctx.profile.identifiers, ctx.names)
        original = ctx.nodes[site.nid]
        if isinstance(site, FuncDecl):
            for call in ctx.program.scope.calls.get(site.name, []):
                if not call.method:
                    nodes[call.nid].name = name
        else:
            for ref in ctx.program.scope.references(original):
                nodes[ref.nid].name = name
        site.name = name


@register
class IncludeAdd(Transformer):
    ID = "template.include_add"
    FAMILY = TransformFamily.template
    NEEDS = _NEEDS
    REQUIRES_TEMPLATE = True
    DESCRIPTION = "Add an include of the template that the program lacks."

    def _header(self, ctx: TransformContext) -> Optional[str]:
        present = {item.header for item in ctx.ast.items if isinstance(item, Include)}
        return next((header for header in ctx.profile.includes if header not in present), None)

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [] if self._header(ctx) is None else [ctx.ast]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        position = 0
        for idx, item in enumerate(ast.items):
            if isinstance(item, Include):
                position = idx + 1
        ast.items.insert(position, Include(self._header(ctx)))


def _preamble_aliases(ast: Program) -> set:
    return {item.alias for item in ast.items[: preamble_end(ast.items)] if isinstance(item, Typedef)}


def _resolvable(tref: TypeRef, aliases: set) -> bool:
    return all(node.name in TYPE_KEYWORDS or node.name in aliases for node in walk(tref))


@register
class GlobalDeclAdd(Transformer):
    ID = "template.global_decl_add"
    FAMILY = TransformFamily.template
    NEEDS = _NEEDS
    REQUIRES_TEMPLATE = True
    DESCRIPTION = "Add a global declaration of the template."

    def _declaration(self, ctx: TransformContext) -> Optional[GlobalDecl]:
        aliases = _preamble_aliases(ctx.ast)
        prefix = "".join(
            f"typedef {print_type(item.base)} {item.alias};\n"
            for item in ctx.ast.items[: preamble_end(ctx.ast.items)]
            if isinstance(item, Typedef)
        )
        for text in ctx.profile.global_decls:
            try:
                items = parse(prefix + text).ast.items
            except LangError:
                continue
            if len(items) != len(aliases) + 1 or not isinstance(items[-1], GlobalDecl):
                continue
            decl = items[-1]
            if _fresh(ctx, decl.name) and _resolvable(decl.type, aliases):
                decl.comments = []
                return decl
        return None

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [] if self._declaration(ctx) is None else [ctx.ast]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        ast.items.insert(preamble_end(ast.items), self._declaration(ctx))


@register
class IncludeTypedef(Transformer):
    ID = "template.include_typedef"
    FAMILY = TransformFamily.template
    NEEDS = _NEEDS
    REQUIRES_TEMPLATE = True
    DESCRIPTION = "Introduce a typedef of the template for a type the program uses."

    def _typedef(self, ctx: TransformContext) -> Optional[Tuple[TypeRef, str]]:
        used = {print_type(tref) for tref in declared_types(ctx.ast)}
        for alias, base_text in ctx.profile.typedefs:
            if base_text not in used or not _fresh(ctx, alias):
                continue
            try:
                items = parse(f"typedef {base_text} {alias};").ast.items
            except LangError:
                continue
            return items[0].base, alias
        return None

    def sites(self, ctx: TransformContext) -> List[Node]:
        return [] if self._typedef(ctx) is None else [ctx.ast]

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        base, alias = self._typedef(ctx)
        introduce_typedef(ast, base, alias)
