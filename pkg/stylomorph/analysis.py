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

# Auxiliary program representations used by the transformers.
#
# * :func:`build_cfg` lowers every function into a statement-level control-flow
#   graph; the graph of a program is the union of its functions.
# * :func:`compute_use_def_chains` runs reaching definitions over that graph.
# * :func:`build_decl_ref_map` links declarations to their references.

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .lang.ast import (
    Assign,
    Call,
    CompoundStmt,
    DeclStmt,
    ForStmt,
    FuncDecl,
    GlobalDecl,
    IfStmt,
    Index,
    Node,
    Param,
    PrecisionStmt,
    ReturnStmt,
    StreamIn,
    UnaryOp,
    VarRef,
    WhileStmt,
    is_expression,
    is_statement,
    iter_children,
    walk,
)
from .lang.printer import print_expression, print_statement
from .lang.program import SourceProgram
from .lang.types import MiniType
from .term import get_console

__all__ = (
    "EDGE_KINDS",
    "BasicBlock",
    "Edge",
    "Cfg",
    "UseDefChains",
    "DeclRefMap",
    "UndefinedVariable",
    "build_cfg",
    "compute_use_def_chains",
    "build_decl_ref_map",
    "defined_declarations",
    "stream_format_states",
    "to_dot",
)

console = get_console()
EDGE_KINDS = ("fallthrough", "true-branch", "false-branch", "loop-back")
DEFAULT_STREAM_FORMAT = (False, 6)


class UndefinedVariable(Exception):
    def __init__(self, name: str, use: int) -> None:
        self.name = name
        self.use = use
        super().__init__(f"Use of `{name}` (node {use}) has no reaching definition")


@dataclass
class BasicBlock:
    id: int
    statements: List[int] = field(default_factory=list)
    function: Optional[str] = None
    # node whose expressions run in this block
    node: Optional[Node] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    kind: str


@dataclass
class Cfg:
    blocks: List[BasicBlock] = field(default_factory=list)
    edges: List[Edge] = field(default_factory=list)
    entry: int = 0
    exit: int = 1
    functions: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    def successors(self, block: int) -> List[Edge]:
        return [edge for edge in self.edges if edge.src == block]

    def predecessors(self, block: int) -> List[int]:
        return [edge.src for edge in self.edges if edge.dst == block]

    def block_of(self, nid: int) -> Optional[BasicBlock]:
        for block in self.blocks:
            if nid in block.statements:
                return block
        return None


@dataclass
class UseDefChains:
    links: Set[Tuple[int, int]] = field(default_factory=set)

    def defs_of(self, use: int) -> Set[int]:
        return {definition for source, definition in self.links if source == use}

    def uses_of(self, definition: int) -> Set[int]:
        return {use for use, target in self.links if target == definition}


@dataclass
class DeclRefMap:
    map: Dict[int, Set[int]] = field(default_factory=dict)
    inverse: Dict[int, int] = field(default_factory=dict)

    def references(self, decl: int) -> Set[int]:
        return self.map.get(decl, set())

    def declaration(self, ref: int) -> int:
        return self.inverse[ref]


# --- control flow


class _CfgBuilder:
    def __init__(self):
        self.cfg = Cfg()
        self.function: Optional[str] = None
        self.exit = -1

    def new_block(self, node: Optional[Node] = None) -> int:
        block = BasicBlock(len(self.cfg.blocks), [], self.function, node)
        if node is not None:
            block.statements.append(node.nid)
        self.cfg.blocks.append(block)
        return block.id

    def link(self, preds: Iterable[Tuple[int, str]], target: int) -> None:
        for src, kind in preds:
            self.cfg.edges.append(Edge(src, target, kind))

    def function_graph(self, func: FuncDecl) -> Tuple[int, int]:
        self.function = func.name
        entry = self.new_block()
        self.exit = self.new_block()
        out = self.statement(func.body, [(entry, "fallthrough")])
        self.link(out, self.exit)
        return entry, self.exit

    def statement(self, node: Node, preds: List[Tuple[int, str]]) -> List[Tuple[int, str]]:
        if isinstance(node, CompoundStmt):
            for stmt in node.stmts:
                preds = self.statement(stmt, preds)
            return preds
        if isinstance(node, IfStmt):
            cond = self.new_block(node)
            self.link(preds, cond)
            out = self.statement(node.then, [(cond, "true-branch")])
            if node.els is not None:
                return out + self.statement(node.els, [(cond, "false-branch")])
            return out + [(cond, "false-branch")]
        if isinstance(node, WhileStmt):
            cond = self.new_block(node)
            self.link(preds, cond)
            body_out = self.statement(node.body, [(cond, "true-branch")])
            self.link(((src, "loop-back") for src, _ in body_out), cond)
            return [(cond, "false-branch")]
        if isinstance(node, ForStmt):
            if node.init is not None:
                preds = self.statement(node.init, preds)
            cond = self.new_block(node)
            self.link(preds, cond)
            body_out = self.statement(node.body, [(cond, "true-branch")])
            if node.step is not None:
                step = self.new_block(node.step)
                self.link(body_out, step)
                body_out = [(step, "fallthrough")]
            self.link(((src, "loop-back") for src, _ in body_out), cond)
            return [(cond, "false-branch")] if node.cond is not None else []
        block = self.new_block(node)
        self.link(preds, block)
        if isinstance(node, ReturnStmt):
            self.link([(block, "fallthrough")], self.exit)
            return []
        return [(block, "fallthrough")]


def build_cfg(program: SourceProgram) -> Cfg:
    """Lower every function of ``program`` into one control-flow graph.

    ``entry`` and ``exit`` are those of ``main`` (or of the first function when
    there is no ``main``); ``functions`` maps every function to its pair.
    """
    builder = _CfgBuilder()
    for func in program.ast.functions():
        builder.cfg.functions[func.name] = builder.function_graph(func)
    cfg = builder.cfg
    if cfg.functions:
        cfg.entry, cfg.exit = cfg.functions.get("main", next(iter(cfg.functions.values())))
    else:
        builder.function = None
        cfg.entry = builder.new_block()
        cfg.exit = builder.new_block()
        builder.link([(cfg.entry, "fallthrough")], cfg.exit)
    console.log(f"CFG with {len(cfg.blocks)} blocks and {len(cfg.edges)} edges")
    return cfg


# --- reaching definitions

# (kind, decl nid, node) where kind is "use", "soft-use", "def" or "weak-def"
_Event = Tuple[str, int, Node]


def _root_ref(node: Node) -> Optional[VarRef]:
    while isinstance(node, Index):
        node = node.base
    return node if isinstance(node, VarRef) else None


class _EventCollector:
    def __init__(self, program: SourceProgram):
        self.scope = program.scope
        self.types = program.types

    def decl(self, ref: VarRef) -> Node:
        return self.scope.declaration(ref)

    def is_aggregate(self, decl: Node) -> bool:
        mtype: MiniType = self.types.of_declaration(decl)
        return mtype.is_array or mtype.is_vec or mtype.name == "string"

    def target(self, node: Node, definer: Node, out: List[_Event], reads: bool) -> None:
        if isinstance(node, VarRef):
            decl = self.decl(node)
            if reads:
                out.append(("use", decl.nid, node))
            out.append(("def", decl.nid, definer))
            return
        if isinstance(node, Index):
            self.expression(node.index, out)
            base = node.base
            while isinstance(base, Index):
                self.expression(base.index, out)
                base = base.base
            root = _root_ref(node)
            if root is not None:
                decl = self.decl(root)
                out.append(("soft-use", decl.nid, root))
                out.append(("weak-def", decl.nid, definer))
            return
        self.expression(node, out)

    def expression(self, node: Optional[Node], out: List[_Event]) -> None:
        if node is None:
            return
        if isinstance(node, VarRef):
            out.append(("use", self.decl(node).nid, node))
        elif isinstance(node, Assign):
            self.expression(node.value, out)
            self.target(node.target, node, out, reads=node.op != "=")
        elif isinstance(node, UnaryOp) and node.is_increment:
            self.target(node.operand, node, out, reads=True)
        elif isinstance(node, Call):
            self.call(node, out)
        else:
            for child in iter_children(node):
                self.expression(child, out)

    def call(self, node: Call, out: List[_Event]) -> None:
        if node.method:
            receiver = node.args[0]
            for arg in node.args[1:]:
                self.expression(arg, out)
            if node.name == "push":
                self.target(receiver, node, out, reads=True)
                # pushing never replaces earlier contents
                if out and out[-1][0] == "def":
                    kind, decl, definer = out.pop()
                    out.append(("weak-def", decl, definer))
            else:
                self.expression(receiver, out)
            return
        if node.name == "scan":
            self.expression(node.args[0], out)
            for arg in node.args[1:]:
                self.target(arg, node, out, reads=False)
            return
        func = self.scope.functions.get(node.name)
        if func is None:
            for arg in node.args:
                self.expression(arg, out)
            return
        for param, arg in zip(func.params, node.args):
            root = _root_ref(arg) if (param.by_ref or param.is_array) else None
            if root is None:
                self.expression(arg, out)
                continue
            if isinstance(arg, Index):
                self.expression(arg.index, out)
            decl = self.decl(root)
            out.append(("soft-use", decl.nid, root))
            out.append(("weak-def", decl.nid, node))

    def block_events(self, node: Optional[Node]) -> List[_Event]:
        out: List[_Event] = []
        if node is None:
            return out
        if isinstance(node, DeclStmt):
            for part in (node.array_size, node.ctor_size, node.init):
                self.expression(part, out)
            if node.init is not None or self.is_aggregate(node):
                out.append(("def", node.nid, node))
        elif isinstance(node, (IfStmt, WhileStmt)):
            self.expression(node.cond, out)
        elif isinstance(node, ForStmt):
            self.expression(node.cond, out)
        elif isinstance(node, StreamIn):
            for target in node.targets:
                self.target(target, node, out, reads=False)
        elif is_expression(node):
            self.expression(node, out)
        else:
            for child in iter_children(node):
                self.expression(child, out)
        return out


def _transfer(state: FrozenSet[Tuple[int, int]], events: List[_Event]) -> FrozenSet[Tuple[int, int]]:
    current = set(state)
    for kind, decl, node in events:
        if kind == "def":
            current = {pair for pair in current if pair[0] != decl}
            current.add((decl, node.nid))
        elif kind == "weak-def":
            current.add((decl, node.nid))
    return frozenset(current)


def compute_use_def_chains(program: SourceProgram, cfg: Cfg) -> UseDefChains:
    """All-reaching-definitions use-define chains.

    A use with several reaching definitions gets one link per definition.
    Globals are defined at every function entry and never killed.

    Raises
    ------
    UndefinedVariable
        When a use has no reaching definition.
    """
    collector = _EventCollector(program)
    events = {block.id: collector.block_events(block.node) for block in cfg.blocks}
    entry_defs: Dict[int, FrozenSet[Tuple[int, int]]] = {}
    for name, (entry, _) in cfg.functions.items():
        func = program.scope.functions[name]
        entry_defs[entry] = frozenset((param.nid, param.nid) for param in func.params)
    globals_ = {decl.nid for decl in program.scope.declarations if isinstance(decl, GlobalDecl)}

    preds: Dict[int, List[int]] = {block.id: [] for block in cfg.blocks}
    succs: Dict[int, List[int]] = {block.id: [] for block in cfg.blocks}
    for edge in cfg.edges:
        preds[edge.dst].append(edge.src)
        succs[edge.src].append(edge.dst)

    in_sets: Dict[int, FrozenSet[Tuple[int, int]]] = {block.id: frozenset() for block in cfg.blocks}
    out_sets: Dict[int, FrozenSet[Tuple[int, int]]] = {block.id: frozenset() for block in cfg.blocks}
    worklist = deque(block.id for block in cfg.blocks)
    queued = set(worklist)
    while worklist:
        block = worklist.popleft()
        queued.discard(block)
        merged = set(entry_defs.get(block, frozenset()))
        for pred in preds[block]:
            merged |= out_sets[pred]
        in_sets[block] = frozenset(merged)
        new_out = _transfer(in_sets[block], events[block])
        if new_out != out_sets[block]:
            out_sets[block] = new_out
            for succ in succs[block]:
                if succ not in queued:
                    worklist.append(succ)
                    queued.add(succ)

    chains = UseDefChains()
    for block in cfg.blocks:
        current = set(in_sets[block.id])
        for kind, decl, node in events[block.id]:
            if kind in ("use", "soft-use"):
                reaching = {definition for owner, definition in current if owner == decl}
                if decl in globals_:
                    reaching.add(decl)
                if not reaching and kind == "use":
                    raise UndefinedVariable(getattr(node, "name", "?"), node.nid)
                chains.links.update((node.nid, definition) for definition in reaching)
            elif kind == "def":
                current = {pair for pair in current if pair[0] != decl}
                current.add((decl, node.nid))
            else:
                current.add((decl, node.nid))
    console.log(f"{len(chains.links)} use-define links")
    return chains


def defined_declarations(program: SourceProgram, node: Node) -> Set[int]:
    """Declarations (by nid) that receive a definition anywhere inside ``node``."""
    collector = _EventCollector(program)
    found: Set[int] = set()
    for current in walk(node):
        if isinstance(current, CompoundStmt) or not is_statement(current):
            continue
        events = collector.block_events(current)
        if isinstance(current, ForStmt) and current.step is not None:
            events += collector.block_events(current.step)
        found.update(decl for kind, decl, _ in events if kind in ("def", "weak-def"))
    return found


def build_decl_ref_map(program: SourceProgram) -> DeclRefMap:
    """Declaration-reference mapping from lexical scoping.

    Raises
    ------
    UnresolvedReference
        When a reference has no visible declaration.
    """
    scope = program.scope
    drm = DeclRefMap()
    for decl in scope.declarations:
        drm.map[decl.nid] = {ref.nid for ref in scope.references(decl)}
    for ref_nid, decl in scope.decl_of.items():
        drm.inverse[ref_nid] = decl.nid
    return drm


# --- stream formatting state


def stream_format_states(program: SourceProgram, cfg: Cfg) -> Dict[int, Set[Tuple[bool, int]]]:
    """For every block of ``main``, the (fixed, precision) states reaching it."""
    if "main" not in cfg.functions:
        return {}
    entry, _ = cfg.functions["main"]
    succs: Dict[int, List[int]] = {}
    for edge in cfg.edges:
        succs.setdefault(edge.src, []).append(edge.dst)
    states: Dict[int, Set[Tuple[bool, int]]] = {entry: {DEFAULT_STREAM_FORMAT}}
    worklist = deque([entry])
    while worklist:
        block_id = worklist.popleft()
        node = cfg.blocks[block_id].node
        outgoing = set()
        for fixed, digits in states[block_id]:
            if isinstance(node, PrecisionStmt):
                if node.op == "fixed":
                    fixed = True
                else:
                    digits = node.digits
            outgoing.add((fixed, digits))
        for succ in succs.get(block_id, []):
            known = states.setdefault(succ, set())
            if not outgoing <= known:
                known |= outgoing
                worklist.append(succ)
    return states


# --- debug export


def to_dot(
    program: SourceProgram,
    cfg: Cfg,
    chains: Optional[UseDefChains] = None,
    drm: Optional[DeclRefMap] = None,
) -> str:
    """Render the CFG (black), use-define chains (blue) and declaration references (green) as DOT."""
    lines = ["digraph program {", "    node [shape=box, fontname=monospace];"]
    for block in cfg.blocks:
        if block.node is None:
            label = "entry" if any(block.id == pair[0] for pair in cfg.functions.values()) else "exit"
            label = f"{block.function}:{label}"
        elif isinstance(block.node, (IfStmt, WhileStmt)):
            label = f"{block.node.kind.lower()[:-4]} ({print_expression(block.node.cond)})"
        elif isinstance(block.node, ForStmt):
            cond = "" if block.node.cond is None else print_expression(block.node.cond)
            label = f"for ({cond})"
        elif is_expression(block.node):
            label = print_expression(block.node)
        else:
            label = print_statement(block.node)
        label = label.replace('"', '\\"')
        lines.append(f'    b{block.id} [label="{label}"];')
    for edge in cfg.edges:
        lines.append(f'    b{edge.src} -> b{edge.dst} [label="{edge.kind}"];')
    owner = {}
    for block in cfg.blocks:
        if block.node is not None:
            for node in _subtree(block.node):
                owner.setdefault(node.nid, block.id)
    for decl in program.scope.declarations:
        if isinstance(decl, (Param, GlobalDecl)) and decl.nid not in owner:
            lines.append(f'    d{decl.nid} [label="{decl.name}", shape=ellipse];')
            owner[decl.nid] = f"d{decl.nid}"
    if chains is not None:
        for use, definition in sorted(chains.links):
            if use in owner and definition in owner:
                lines.append(f"    {_dot_id(owner[definition])} -> {_dot_id(owner[use])} [color=blue, style=dashed];")
    if drm is not None:
        for decl, refs in sorted(drm.map.items()):
            for ref in sorted(refs):
                if decl in owner and ref in owner:
                    lines.append(f"    {_dot_id(owner[decl])} -> {_dot_id(owner[ref])} [color=green, style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(owner) -> str:
    return owner if isinstance(owner, str) else f"b{owner}"


def _subtree(node: Node) -> Iterable[Node]:
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        if isinstance(current, (IfStmt, WhileStmt, ForStmt, CompoundStmt)):
            # nested statements live in their own blocks
            if isinstance(current, (IfStmt, WhileStmt)):
                stack.append(current.cond)
            elif isinstance(current, ForStmt) and current.cond is not None:
                stack.append(current.cond)
            continue
        stack.extend(iter_children(current))
