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

import pytest

from stylomorph.analysis import (
    DEFAULT_STREAM_FORMAT,
    UndefinedVariable,
    build_cfg,
    build_decl_ref_map,
    compute_use_def_chains,
    defined_declarations,
    stream_format_states,
    to_dot,
)
from stylomorph.lang import Assign, DeclStmt, Param, ReturnStmt, StreamOut, VarRef, parse, walk


def _refs(program, name):
    return [node for node in walk(program.ast) if isinstance(node, VarRef) and node.name == name]


def _only(program, kind):
    (node,) = [node for node in walk(program.ast) if isinstance(node, kind)]
    return node


class TestControlFlowGraph:
    def test_snippet_shape(self, recursive_snippet):
        cfg = build_cfg(recursive_snippet)
        assert list(cfg.functions) == ["foo"]
        assert (cfg.entry, cfg.exit) == cfg.functions["foo"]
        # entry, exit, declaration, condition, two returns and the assignment
        assert len(cfg.blocks) == 7
        assert len(cfg.edges) == 7
        kinds = sorted(edge.kind for edge in cfg.edges)
        assert kinds.count("true-branch") == 1
        assert kinds.count("false-branch") == 1

    def test_returns_reach_exit(self, recursive_snippet):
        cfg = build_cfg(recursive_snippet)
        returns = [block.id for block in cfg.blocks if isinstance(block.node, ReturnStmt)]
        assert len(returns) == 2
        assert sorted(cfg.predecessors(cfg.exit)) == sorted(returns)

    def test_main_is_entry(self, recursive_program):
        cfg = build_cfg(recursive_program)
        assert set(cfg.functions) == {"foo", "main"}
        assert (cfg.entry, cfg.exit) == cfg.functions["main"]

    def test_loops_link_back(self):
        program = parse("int main() { int s = 0; for (int i = 0; i < 3; i++) s += i; output << s << endl; return 0; }")
        cfg = build_cfg(program)
        assert any(edge.kind == "loop-back" for edge in cfg.edges)

    def test_no_function(self):
        cfg = build_cfg(parse("int g = 1;"))
        assert cfg.successors(cfg.entry)[0].dst == cfg.exit


class TestUseDefChains:
    def test_snippet(self, recursive_snippet):
        chains = compute_use_def_chains(recursive_snippet, build_cfg(recursive_snippet))
        param = _only(recursive_snippet, Param)
        assignment = _only(recursive_snippet, Assign)
        for ref in _refs(recursive_snippet, "a"):
            assert chains.defs_of(ref.nid) == {param.nid}
        returned_b = [ref for ref in _refs(recursive_snippet, "b") if ref is not assignment.target]
        assert len(returned_b) == 1
        assert chains.defs_of(returned_b[0].nid) == {assignment.nid}
        assert returned_b[0].nid in chains.uses_of(assignment.nid)

    def test_every_reaching_definition(self):
        program = parse(
            "int main() { int x = 1; int c; input >> c; if (c > 0) x = 2; output << x << endl; return 0; }"
        )
        chains = compute_use_def_chains(program, build_cfg(program))
        printed = _refs(program, "x")[-1]
        declaration = next(node for node in walk(program.ast) if isinstance(node, DeclStmt) and node.name == "x")
        assignment = _only(program, Assign)
        assert chains.defs_of(printed.nid) == {declaration.nid, assignment.nid}

    def test_use_before_definition(self):
        program = parse("int main() { int x; output << x << endl; return 0; }")
        with pytest.raises(UndefinedVariable) as exc:
            compute_use_def_chains(program, build_cfg(program))
        assert exc.value.name == "x"

    def test_globals_always_reach(self):
        program = parse("int g = 4; int main() { output << g << endl; return 0; }")
        chains = compute_use_def_chains(program, build_cfg(program))
        (ref,) = _refs(program, "g")
        assert chains.defs_of(ref.nid)

    def test_defined_declarations(self, recursive_snippet):
        b = next(node for node in walk(recursive_snippet.ast) if isinstance(node, DeclStmt))
        (func,) = recursive_snippet.ast.functions()
        assert b.nid in defined_declarations(recursive_snippet, func.body)


class TestDeclRefMap:
    def test_snippet(self, recursive_snippet):
        drm = build_decl_ref_map(recursive_snippet)
        param = _only(recursive_snippet, Param)
        b = next(node for node in walk(recursive_snippet.ast) if isinstance(node, DeclStmt))
        assert drm.references(param.nid) == {ref.nid for ref in _refs(recursive_snippet, "a")}
        assert len(drm.references(param.nid)) == 3
        assert len(drm.references(b.nid)) == 2
        for ref in _refs(recursive_snippet, "b"):
            assert drm.declaration(ref.nid) == b.nid

    def test_shadowed_names(self):
        program = parse("int main() { int a = 1; { int a = 2; output << a << endl; } output << a << endl; return 0; }")
        drm = build_decl_ref_map(program)
        outer, inner = [node for node in walk(program.ast) if isinstance(node, DeclStmt)]
        printed = _refs(program, "a")
        assert drm.declaration(printed[0].nid) == inner.nid
        assert drm.declaration(printed[1].nid) == outer.nid


class TestStreamFormat:
    def _state_at_output(self, source):
        program = parse(source)
        cfg = build_cfg(program)
        states = stream_format_states(program, cfg)
        (block,) = [block for block in cfg.blocks if isinstance(block.node, StreamOut)]
        return states[block.id]

    def test_default(self):
        assert self._state_at_output("int main() { output << 1 << endl; return 0; }") == {DEFAULT_STREAM_FORMAT}

    def test_fixed_precision(self):
        state = self._state_at_output("int main() { fixed; setprec(3); output << 1.5 << endl; return 0; }")
        assert state == {(True, 3)}

    def test_branches_merge(self):
        source = "int main() { int c; input >> c; if (c > 0) setprec(2); output << 1.5 << endl; return 0; }"
        assert self._state_at_output(source) == {(False, 2), (False, 6)}


class TestDot:
    def test_layers(self, recursive_snippet):
        cfg = build_cfg(recursive_snippet)
        chains = compute_use_def_chains(recursive_snippet, cfg)
        drm = build_decl_ref_map(recursive_snippet)
        dot = to_dot(recursive_snippet, cfg, chains, drm)
        assert dot.startswith("digraph program {")
        assert dot.rstrip().endswith("}")
        assert "color=blue" in dot
        assert "color=green" in dot
        assert "if (a < 2)" in dot
