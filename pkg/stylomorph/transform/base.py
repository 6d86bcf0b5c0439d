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

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import TYPE_CHECKING, ClassVar, Dict, FrozenSet, List, Optional, Set, Tuple, Type

from ..analysis import (
    Cfg,
    DeclRefMap,
    UndefinedVariable,
    UseDefChains,
    build_cfg,
    build_decl_ref_map,
    compute_use_def_chains,
    stream_format_states,
)
from ..lang.ast import (
    CompoundStmt,
    DeclStmt,
    ForStmt,
    FuncDecl,
    IfStmt,
    Node,
    Param,
    Program,
    Typedef,
    VarDecl,
    VarRef,
    WhileStmt,
    node_index,
    walk,
    walk_with_parent,
)
from ..lang.errors import LangError
from ..lang.program import SourceProgram, copy_ast
from ..lang.scope import BUILTIN_FUNCTIONS, BUILTIN_METHODS
from ..lang.tokens import KEYWORDS
from ..term import get_console
from ..utils import pick_index

if TYPE_CHECKING:
    from .profile import TemplateProfile

__all__ = (
    "Representation",
    "TransformFamily",
    "TransformError",
    "NoApplicableSite",
    "TemplateMissing",
    "UnknownTransformer",
    "TransformContext",
    "TransformResult",
    "Transformer",
    "register",
    "get_transformer",
    "all_transformers",
    "RESERVED_NAMES",
    "program_names",
    "fresh_name",
    "parent_index",
    "dangles",
    "statement_list",
    "declared_in_list",
    "mentions",
    "subtree_ids",
    "can_declare_before",
    "remove_statement",
)

console = get_console()
RESERVED_NAMES: FrozenSet[str] = frozenset(KEYWORDS | BUILTIN_FUNCTIONS | BUILTIN_METHODS | {"main"})


class Representation(str, Enum):
    ast = "AST"
    cfg = "CFG"
    udc = "UDC"
    drm = "DRM"


class TransformFamily(str, Enum):
    control = "control"
    declaration = "declaration"
    api = "api"
    template = "template"
    misc = "misc"


class TransformError(Exception):
    pass


class NoApplicableSite(TransformError):
    def __init__(self, transformer: str) -> None:
        self.transformer = transformer
        super().__init__(f"Transformer `{transformer}` has no applicable site")


class TemplateMissing(TransformError):
    def __init__(self, transformer: str) -> None:
        self.transformer = transformer
        super().__init__(f"Transformer `{transformer}` needs a template profile")


class UnknownTransformer(TransformError):
    def __init__(self, transformer: str) -> None:
        self.transformer = transformer
        super().__init__(f"Unknown transformer `{transformer}`")


@dataclass
class TransformContext:
    """A program plus the representations transformers query, built on demand."""

    program: SourceProgram
    template: Optional["TemplateProfile"] = None

    @property
    def ast(self) -> Program:
        return self.program.ast

    @cached_property
    def cfg(self) -> Cfg:
        return build_cfg(self.program)

    @cached_property
    def chains(self) -> UseDefChains:
        return compute_use_def_chains(self.program, self.cfg)

    @cached_property
    def drm(self) -> DeclRefMap:
        return build_decl_ref_map(self.program)

    @cached_property
    def nodes(self) -> Dict[int, Node]:
        return node_index(self.program.ast)

    @cached_property
    def parents(self) -> Dict[int, Node]:
        return parent_index(self.program.ast)

    @cached_property
    def names(self) -> Set[str]:
        return program_names(self.program.ast)

    @cached_property
    def format_states(self) -> Dict[int, Set[Tuple[bool, int]]]:
        return stream_format_states(self.program, self.cfg)

    @property
    def profile(self) -> "TemplateProfile":
        from .profile import default_profile

        return self.template if self.template is not None else default_profile()

    def parent_in(self, nodes: Dict[int, Node], node: Node) -> Optional[Node]:
        """Parent of ``node`` inside the copy indexed by ``nodes``."""
        parent = self.parents.get(node.nid)
        return None if parent is None else nodes[parent.nid]

    def function_of(self, node: Node) -> Optional[FuncDecl]:
        current: Optional[Node] = node
        while current is not None and not isinstance(current, FuncDecl):
            current = self.parents.get(current.nid)
        return current


@dataclass(frozen=True)
class TransformResult:
    program: SourceProgram
    applied_site: int
    transformer: str


class Transformer:
    """A targeted, semantics-preserving source rewrite.

    Subclasses declare their catalog entry through the class attributes and
    implement :meth:`sites`, which lists every node the rewrite can start from,
    and :meth:`rewrite`, which edits a private copy of the tree in place.
    """

    ID: ClassVar[str]
    FAMILY: ClassVar[TransformFamily]
    NEEDS: ClassVar[FrozenSet[Representation]]
    REQUIRES_TEMPLATE: ClassVar[bool] = False
    DESCRIPTION: ClassVar[str] = ""

    def __init__(self):
        if self.__class__ == Transformer:
            raise TypeError("Cannot instantiate Transformer directly.")

    def sites(self, ctx: TransformContext) -> List[Node]:
        raise NotImplementedError

    def rewrite(self, ctx: TransformContext, ast: Program, nodes: Dict[int, Node], site: Node) -> None:
        raise NotImplementedError

    def describe(self) -> Dict[str, object]:
        return {
            "id": self.ID,
            "family": self.FAMILY.value,
            "needs": sorted(rep.value for rep in self.NEEDS),
            "requires_template": self.REQUIRES_TEMPLATE,
            "description": self.DESCRIPTION,
        }

    def list_applicable(self, program: SourceProgram, template: Optional["TemplateProfile"] = None) -> List[int]:
        try:
            return [node.nid for node in self.sites(TransformContext(program, template))]
        except (LangError, UndefinedVariable) as exc:
            console.log(f"{self.ID}: analysis failed ({exc}), no sites")
            return []

    def apply(
        self,
        program: SourceProgram,
        site_seed: int,
        template: Optional["TemplateProfile"] = None,
        defaults: bool = True,
    ) -> TransformResult:
        """Rewrite the site picked by ``site_seed`` among the applicable ones.

        Raises
        ------
        TemplateMissing
            Template transformer without a profile while defaults are disabled.
        NoApplicableSite
            When :meth:`list_applicable` would be empty.
        TransformError
            When the rewritten tree does not survive printing.
        """
        if self.REQUIRES_TEMPLATE and template is None and not defaults:
            raise TemplateMissing(self.ID)
        ctx = TransformContext(program, template)
        try:
            sites = self.sites(ctx)
        except (LangError, UndefinedVariable):
            sites = []
        if not sites:
            raise NoApplicableSite(self.ID)
        chosen = sites[pick_index(site_seed, len(sites))]
        ast = copy_ast(program)
        nodes = node_index(ast)
        self.rewrite(ctx, ast, nodes, nodes[chosen.nid])
        try:
            result = program.with_ast(ast)
        except LangError as exc:
            raise TransformError(f"Transformer `{self.ID}` produced an invalid program: {exc}") from exc
        console.log(f"{self.ID} applied at node {chosen.nid}")
        return TransformResult(result, chosen.nid, self.ID)


_REGISTRY: Dict[str, Transformer] = {}


def register(cls: Type[Transformer]) -> Type[Transformer]:
    if cls.ID in _REGISTRY:
        raise ValueError(f"Transformer `{cls.ID}` registered twice")
    _REGISTRY[cls.ID] = cls()
    return cls


def get_transformer(transformer_id: str) -> Transformer:
    try:
        return _REGISTRY[transformer_id]
    except KeyError:
        raise UnknownTransformer(transformer_id)


def all_transformers() -> List[Transformer]:
    return list(_REGISTRY.values())


# --- helpers shared by the families


def program_names(ast: Program) -> Set[str]:
    """Every identifier spelled anywhere in ``ast``."""
    names: Set[str] = set()
    for node in walk(ast):
        if isinstance(node, (VarDecl, Param, VarRef, FuncDecl)):
            names.add(node.name)
        elif isinstance(node, Typedef):
            names.add(node.alias)
    return names


def fresh_name(candidates, taken: Set[str]) -> Optional[str]:
    for name in candidates:
        if name not in taken and name not in RESERVED_NAMES:
            return name
    return None


def parent_index(root: Node) -> Dict[int, Node]:
    return {node.nid: parent for node, parent in walk_with_parent(root) if parent is not None}


def dangles(stmt: Optional[Node]) -> bool:
    """Whether ``stmt`` printed without braces ends in an ``if`` lacking ``else``."""
    if isinstance(stmt, IfStmt):
        return stmt.els is None or dangles(stmt.els)
    if isinstance(stmt, (WhileStmt, ForStmt)):
        return dangles(stmt.body)
    return False


def statement_list(parent: Optional[Node]) -> Optional[List[Node]]:
    """The statement list of ``parent`` when it is a block."""
    if isinstance(parent, CompoundStmt):
        return parent.stmts
    return None


def declared_in_list(stmts: List[Node], name: str) -> bool:
    return any(isinstance(stmt, DeclStmt) and stmt.name == name for stmt in stmts)


def mentions(nodes: List[Node], name: str) -> bool:
    return any(isinstance(node, (VarRef, VarDecl)) and node.name == name for stmt in nodes for node in walk(stmt))


def subtree_ids(node: Node) -> Set[int]:
    return {child.nid for child in walk(node)}


def can_declare_before(ctx: TransformContext, parent: Optional[Node], site: Node, name: str) -> bool:
    """Whether ``name`` can be declared in ``parent`` right before ``site`` without changing any binding."""
    stmts = statement_list(parent)
    if stmts is None or declared_in_list(stmts, name):
        return False
    owner = ctx.parents.get(parent.nid)
    if isinstance(owner, FuncDecl) and any(param.name == name for param in owner.params):
        return False
    position = next(idx for idx, stmt in enumerate(stmts) if stmt is site)
    return not mentions(stmts[position + 1 :], name)


def remove_statement(parent: Node, stmt: Node) -> None:
    """Drop ``stmt`` from the block ``parent``, keeping its comments in place."""
    stmts = statement_list(parent)
    position = next(idx for idx, current in enumerate(stmts) if current is stmt)
    del stmts[position]
    comments = getattr(stmt, "comments", [])
    if not comments:
        return
    if position < len(stmts):
        stmts[position].comments = comments + stmts[position].comments
    else:
        parent.trailing_comments = comments + parent.trailing_comments
