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

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from .ast import (
    Call,
    CompoundStmt,
    DeclStmt,
    ForStmt,
    FuncDecl,
    GlobalDecl,
    IfStmt,
    Node,
    Param,
    Program,
    TypeRef,
    Typedef,
    VarRef,
    WhileStmt,
    iter_children,
)
from .errors import Redeclaration, UnresolvedReference

__all__ = (
    "BUILTIN_FUNCTIONS",
    "BUILTIN_METHODS",
    "Declaration",
    "ScopeInfo",
    "resolve_scopes",
)

BUILTIN_FUNCTIONS = frozenset(("scan", "print", "fopenin", "fopenout", "strlen", "sqrt", "abs", "max", "min"))
BUILTIN_METHODS = frozenset(("size", "push"))
Declaration = Union[GlobalDecl, DeclStmt, Param]


@dataclass
class ScopeInfo:
    """Result of lexical scope resolution.

    ``decl_of`` maps the ``nid`` of every :class:`VarRef` to its declaration,
    ``refs_of`` maps the ``nid`` of every declaration to its references in
    source order.
    """

    decl_of: Dict[int, Declaration] = field(default_factory=dict)
    refs_of: Dict[int, List[VarRef]] = field(default_factory=dict)
    declarations: List[Declaration] = field(default_factory=list)
    owner_of: Dict[int, Optional[FuncDecl]] = field(default_factory=dict)
    functions: Dict[str, FuncDecl] = field(default_factory=dict)
    typedefs: Dict[str, TypeRef] = field(default_factory=dict)
    calls: Dict[str, List[Call]] = field(default_factory=dict)

    def declaration(self, ref: VarRef) -> Declaration:
        return self.decl_of[ref.nid]

    def references(self, decl: Node) -> List[VarRef]:
        return self.refs_of.get(decl.nid, [])

    def function_of(self, decl: Declaration) -> Optional[FuncDecl]:
        """The function owning ``decl``, ``None`` for globals."""
        return self.owner_of.get(decl.nid)


class _Resolver:
    def __init__(self, program: Program):
        self.program = program
        self.info = ScopeInfo()
        self.scopes: List[Dict[str, Declaration]] = []
        self.current: Optional[FuncDecl] = None

    def declare(self, decl: Declaration) -> None:
        scope = self.scopes[-1]
        if decl.name in scope or (len(self.scopes) == 1 and decl.name in self.info.functions):
            raise Redeclaration(decl.name, decl.nid)
        scope[decl.name] = decl
        self.info.declarations.append(decl)
        self.info.refs_of[decl.nid] = []
        self.info.owner_of[decl.nid] = self.current

    def lookup(self, ref: VarRef) -> Declaration:
        for scope in reversed(self.scopes):
            if ref.name in scope:
                return scope[ref.name]
        raise UnresolvedReference(ref.name, ref.nid)

    def run(self) -> ScopeInfo:
        for item in self.program.items:
            if isinstance(item, FuncDecl):
                if item.name in self.info.functions or item.name in BUILTIN_FUNCTIONS:
                    raise Redeclaration(item.name, item.nid)
                self.info.functions[item.name] = item
            elif isinstance(item, Typedef):
                self.info.typedefs[item.alias] = item.base
        self.scopes.append({})
        for item in self.program.items:
            if isinstance(item, GlobalDecl):
                self.expressions(item)
                self.declare(item)
            elif isinstance(item, FuncDecl):
                self.current = item
                self.scopes.append({})
                for param in item.params:
                    self.declare(param)
                for stmt in item.body.stmts:
                    self.statement(stmt)
                self.scopes.pop()
                self.current = None
        return self.info

    def scoped(self, node: Optional[Node]) -> None:
        if node is None:
            return
        self.scopes.append({})
        self.statement(node)
        self.scopes.pop()

    def statement(self, node: Node) -> None:
        if isinstance(node, CompoundStmt):
            self.scopes.append({})
            for stmt in node.stmts:
                self.statement(stmt)
            self.scopes.pop()
        elif isinstance(node, DeclStmt):
            self.expressions(node)
            self.declare(node)
        elif isinstance(node, ForStmt):
            self.scopes.append({})
            if node.init is not None:
                self.statement(node.init)
            for part in (node.cond, node.step):
                if part is not None:
                    self.expression(part)
            self.scoped(node.body)
            self.scopes.pop()
        elif isinstance(node, IfStmt):
            self.expression(node.cond)
            self.scoped(node.then)
            self.scoped(node.els)
        elif isinstance(node, WhileStmt):
            self.expression(node.cond)
            self.scoped(node.body)
        else:
            self.expressions(node)

    def expressions(self, node: Node) -> None:
        for child in iter_children(node):
            self.expression(child)

    def expression(self, node: Node) -> None:
        if isinstance(node, VarRef):
            decl = self.lookup(node)
            self.info.decl_of[node.nid] = decl
            self.info.refs_of[decl.nid].append(node)
            return
        if isinstance(node, Call):
            known = BUILTIN_METHODS if node.method else BUILTIN_FUNCTIONS
            if node.name not in known and (node.method or node.name not in self.info.functions):
                raise UnresolvedReference(node.name, node.nid)
            self.info.calls.setdefault(node.name, []).append(node)
        if isinstance(node, TypeRef):
            return
        self.expressions(node)


def resolve_scopes(program: Program) -> ScopeInfo:
    """Bind every variable reference of ``program`` to its declaration.

    Raises
    ------
    UnresolvedReference
        When a variable or function name is not visible at its use.
    Redeclaration
        When a name is declared twice in the same scope.
    """
    return _Resolver(program).run()
