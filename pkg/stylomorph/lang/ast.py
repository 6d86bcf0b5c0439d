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

from copy import deepcopy
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple, Type, TypeVar

__all__ = (
    "Node",
    "Program",
    "Include",
    "Typedef",
    "VarDecl",
    "GlobalDecl",
    "FuncDecl",
    "Param",
    "CompoundStmt",
    "DeclStmt",
    "IfStmt",
    "ForStmt",
    "WhileStmt",
    "ReturnStmt",
    "ExprStmt",
    "Assign",
    "BinOp",
    "UnaryOp",
    "Call",
    "Index",
    "StreamIn",
    "StreamOut",
    "PrecisionStmt",
    "SyncIoStmt",
    "VarRef",
    "Literal",
    "TypeRef",
    "STATEMENT_KINDS",
    "EXPRESSION_KINDS",
    "iter_children",
    "walk",
    "walk_with_parent",
    "find_all",
    "renumber",
    "clone",
    "node_index",
    "replace_node",
    "is_statement",
    "is_expression",
)

NodeT = TypeVar("NodeT", bound="Node")


class Node:
    """Base of every MiniC syntax node.

    ``nid`` is assigned by :func:`renumber` in preorder and does not take part in
    equality, so ``a == b`` compares two trees structurally.
    """

    nid: int = -1
    _fields: Tuple[str, ...] = ()

    @property
    def kind(self) -> str:
        return type(self).__name__


@dataclass
class TypeRef(Node):
    name: str
    elem: Optional["TypeRef"] = None

    _fields = ("elem",)

    @property
    def is_vec(self) -> bool:
        return self.name == "vec"


@dataclass
class Include(Node):
    header: str
    comments: List[str] = field(default_factory=list)


@dataclass
class Typedef(Node):
    base: TypeRef
    alias: str
    comments: List[str] = field(default_factory=list)

    _fields = ("base",)


@dataclass
class VarDecl(Node):
    type: TypeRef
    name: str
    array_size: Optional[Node] = None
    init: Optional[Node] = None
    # ``vec<T> v(n)`` constructor argument
    ctor_size: Optional[Node] = None
    comments: List[str] = field(default_factory=list)

    _fields = ("type", "array_size", "ctor_size", "init")

    @property
    def is_array(self) -> bool:
        return self.array_size is not None


@dataclass
class GlobalDecl(VarDecl):
    pass


@dataclass
class DeclStmt(VarDecl):
    pass


@dataclass
class Param(Node):
    type: TypeRef
    name: str
    by_ref: bool = False
    is_array: bool = False

    _fields = ("type",)


@dataclass
class CompoundStmt(Node):
    stmts: List[Node] = field(default_factory=list)
    trailing_comments: List[str] = field(default_factory=list)
    comments: List[str] = field(default_factory=list)

    _fields = ("stmts",)


@dataclass
class FuncDecl(Node):
    ret: TypeRef
    name: str
    params: List[Param]
    body: CompoundStmt
    comments: List[str] = field(default_factory=list)

    _fields = ("ret", "params", "body")


@dataclass
class Program(Node):
    items: List[Node] = field(default_factory=list)
    trailing_comments: List[str] = field(default_factory=list)

    _fields = ("items",)

    def functions(self) -> List[FuncDecl]:
        return [item for item in self.items if isinstance(item, FuncDecl)]

    def function(self, name: str) -> Optional[FuncDecl]:
        for item in self.items:
            if isinstance(item, FuncDecl) and item.name == name:
                return item
        return None


@dataclass
class IfStmt(Node):
    cond: Node
    then: Node
    els: Optional[Node] = None
    comments: List[str] = field(default_factory=list)

    _fields = ("cond", "then", "els")


@dataclass
class ForStmt(Node):
    init: Optional[Node]
    cond: Optional[Node]
    step: Optional[Node]
    body: Node
    comments: List[str] = field(default_factory=list)

    _fields = ("init", "cond", "step", "body")


@dataclass
class WhileStmt(Node):
    cond: Node
    body: Node
    comments: List[str] = field(default_factory=list)

    _fields = ("cond", "body")


@dataclass
class ReturnStmt(Node):
    value: Optional[Node] = None
    comments: List[str] = field(default_factory=list)

    _fields = ("value",)


@dataclass
class ExprStmt(Node):
    expr: Node
    comments: List[str] = field(default_factory=list)

    _fields = ("expr",)


@dataclass
class StreamIn(Node):
    targets: List[Node]
    comments: List[str] = field(default_factory=list)

    _fields = ("targets",)


@dataclass
class StreamOut(Node):
    items: List[Node]
    comments: List[str] = field(default_factory=list)

    _fields = ("items",)


@dataclass
class PrecisionStmt(Node):
    op: str  # "fixed" or "setprec"
    digits: Optional[int] = None
    comments: List[str] = field(default_factory=list)


@dataclass
class SyncIoStmt(Node):
    enabled: bool
    comments: List[str] = field(default_factory=list)


@dataclass
class Assign(Node):
    op: str
    target: Node
    value: Node

    _fields = ("target", "value")


@dataclass
class BinOp(Node):
    op: str
    left: Node
    right: Node

    _fields = ("left", "right")


@dataclass
class UnaryOp(Node):
    # prefix: "-", "!", "++", "--"; postfix: "p++", "p--"
    op: str
    operand: Node

    _fields = ("operand",)

    @property
    def is_increment(self) -> bool:
        return self.op in ("++", "--", "p++", "p--")


@dataclass
class Call(Node):
    name: str
    args: List[Node] = field(default_factory=list)
    # method calls keep the receiver as ``args[0]``
    method: bool = False

    _fields = ("args",)


@dataclass
class Index(Node):
    base: Node
    index: Node

    _fields = ("base", "index")


@dataclass
class VarRef(Node):
    name: str


@dataclass
class Literal(Node):
    # int, float, string, char, bool, endl
    category: str
    text: str


STATEMENT_KINDS: Tuple[Type[Node], ...] = (
    CompoundStmt,
    DeclStmt,
    IfStmt,
    ForStmt,
    WhileStmt,
    ReturnStmt,
    ExprStmt,
    StreamIn,
    StreamOut,
    PrecisionStmt,
    SyncIoStmt,
)
EXPRESSION_KINDS: Tuple[Type[Node], ...] = (Assign, BinOp, UnaryOp, Call, Index, VarRef, Literal)


def is_statement(node: Node) -> bool:
    return isinstance(node, STATEMENT_KINDS)


def is_expression(node: Node) -> bool:
    return isinstance(node, EXPRESSION_KINDS)


def iter_children(node: Node) -> Iterator[Node]:
    for name in node._fields:
        value = getattr(node, name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, Node):
                    yield item


def walk(node: Node) -> Iterator[Node]:
    """Preorder traversal, children in source order."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(list(iter_children(current))))


def walk_with_parent(node: Node, parent: Optional[Node] = None) -> Iterator[Tuple[Node, Optional[Node]]]:
    stack: List[Tuple[Node, Optional[Node]]] = [(node, parent)]
    while stack:
        current, owner = stack.pop()
        yield current, owner
        stack.extend((child, current) for child in reversed(list(iter_children(current))))


def find_all(node: Node, node_type: Type[NodeT]) -> List[NodeT]:
    return [child for child in walk(node) if isinstance(child, node_type)]


def renumber(root: NodeT) -> NodeT:
    for idx, node in enumerate(walk(root)):
        node.nid = idx
    return root


def clone(root: NodeT) -> NodeT:
    return deepcopy(root)


def node_index(root: Node) -> dict:
    """Map every ``nid`` in ``root`` to its node."""
    return {node.nid: node for node in walk(root)}


def replace_node(parent: Node, old: Node, new: Optional[Node]) -> None:
    """Swap ``old`` for ``new`` inside ``parent``.

    In list slots ``new=None`` removes the child.
    """
    for name in parent._fields:
        value = getattr(parent, name)
        if value is old:
            setattr(parent, name, new)
            return
        if isinstance(value, list):
            for idx, item in enumerate(value):
                if item is old:
                    if new is None:
                        del value[idx]
                    else:
                        value[idx] = new
                    return
    raise ValueError(f"{old.kind} is not a child of {parent.kind}")
