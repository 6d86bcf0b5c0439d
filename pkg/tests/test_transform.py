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

from stylomorph.common import task_of
from stylomorph.lang import ForStmt, IfStmt, Include, Literal, ReturnStmt, Typedef, WhileStmt, parse, walk
from stylomorph.transform import (
    NoApplicableSite,
    TemplateMissing,
    TemplateProfile,
    TransformationSequence,
    TransformFamily,
    UnknownTransformer,
    all_transformers,
    apply_sequence,
    extract_template,
    get_transformer,
    run_sequence,
    transformers_by_family,
    verify,
)
from stylomorph.transform.base import program_names
from stylomorph.utils import derive_seed

from .programs import random_program

LOOPS = """#include <iostream>
#include <cmath>
#include <bits>

int unused = 3;

int twice(int x) {
    return x * 2;
}

void greet() {
    output << "hi" << endl;
}

int main() {
    int n;
    input >> n;
    int total = 0;
    for (int i = 0; i < n; i++)
        total += i;
    int k = 3;
    while (k > 0) {
        total = total + k;
        k--;
    }
    if (total > 2 && n > 1)
        output << total << endl;
    greet();
}
"""
LOOPS_INPUTS = ["0\n", "1\n", "5\n"]

EXPECTED_IDS = {
    "api.input_to_stdin",
    "api.input_to_file",
    "api.output_to_stdout",
    "api.output_to_file",
    "api.input_to_cppstyle",
    "api.input_to_cstyle",
    "api.output_to_cppstyle",
    "api.output_to_cstyle",
    "api.syncio_toggle",
    "control.for_to_while",
    "control.while_to_for",
    "control.if_split",
    "control.function_creator",
    "control.deepest_block",
    "declaration.array_to_vec",
    "declaration.string_to_char_array",
    "declaration.char_array_to_string",
    "declaration.integral_widening",
    "declaration.float_to_double",
    "declaration.bool_to_int",
    "declaration.int_to_bool",
    "declaration.typedef_convert",
    "declaration.typedef_delete",
    "declaration.include_remove",
    "declaration.unused_function_remove",
    "declaration.unused_variable_remove",
    "declaration.init_decl_move_in",
    "declaration.init_decl_move_out",
    "misc.compound_insert",
    "misc.compound_delete",
    "misc.return_add",
    "misc.literal_return_to_variable",
    "template.identifier_rename",
    "template.include_add",
    "template.global_decl_add",
    "template.include_typedef",
}


def _count(program, kind):
    return sum(1 for node in walk(program.ast) if isinstance(node, kind))


def _apply(transformer_id, program, seed=0, template=None):
    result = get_transformer(transformer_id).apply(program, seed, template)
    assert result.transformer == transformer_id
    return result.program


class TestCatalog:
    def test_every_transformer_registered(self):
        assert {transformer.ID for transformer in all_transformers()} == EXPECTED_IDS

    def test_describe(self):
        for transformer in all_transformers():
            info = transformer.describe()
            assert info["id"] == transformer.ID
            assert info["id"].split(".")[0] == info["family"]
            assert info["description"]
            assert isinstance(info["needs"], list)
            assert info["requires_template"] == (info["family"] == "template")

    def test_by_family(self):
        assert len(transformers_by_family(TransformFamily.api)) == 9
        assert len(transformers_by_family(TransformFamily.control)) == 5
        assert len(transformers_by_family(TransformFamily.declaration)) == 14
        assert len(transformers_by_family(TransformFamily.misc)) == 4
        assert len(transformers_by_family(TransformFamily.template)) == 4

    def test_unknown(self):
        with pytest.raises(UnknownTransformer):
            get_transformer("control.nothing")


class TestApply:
    def test_for_to_while(self):
        program = parse(LOOPS)
        result = _apply("control.for_to_while", program)
        assert _count(result, ForStmt) == 0
        assert _count(result, WhileStmt) == 2
        assert verify(program, result, LOOPS_INPUTS)

    def test_while_to_for(self):
        program = parse(LOOPS)
        result = _apply("control.while_to_for", program)
        assert _count(result, WhileStmt) == 0
        assert _count(result, ForStmt) == 2
        assert verify(program, result, LOOPS_INPUTS)

    def test_if_split(self):
        program = parse(LOOPS)
        result = _apply("control.if_split", program)
        assert _count(result, IfStmt) == 2
        assert verify(program, result, LOOPS_INPUTS)

    def test_include_remove_keeps_used_and_unknown_headers(self):
        program = parse(LOOPS)
        assert len(get_transformer("declaration.include_remove").list_applicable(program)) == 1
        result = _apply("declaration.include_remove", program)
        headers = [item.header for item in result.ast.items if isinstance(item, Include)]
        assert headers == ["iostream", "bits"]

    def test_include_add_with_type_keyword_header(self):
        program = parse(LOOPS)
        result = _apply("template.include_add", program, template=TemplateProfile(includes=["string"]))
        headers = [item.header for item in result.ast.items if isinstance(item, Include)]
        assert headers == ["iostream", "cmath", "bits", "string"]
        assert parse(result.source_text).source_text == result.source_text

    def test_unused_global_and_function(self):
        program = parse(LOOPS)
        result = _apply("declaration.unused_variable_remove", program)
        assert "unused" not in program_names(result.ast)
        result = _apply("declaration.unused_function_remove", result)
        assert "twice" not in [func.name for func in result.ast.functions()]
        assert "greet" in [func.name for func in result.ast.functions()]
        assert verify(program, result, LOOPS_INPUTS)

    def test_return_add(self):
        program = parse(LOOPS)
        sites = get_transformer("misc.return_add").list_applicable(program)
        # main and the void function both end without a return
        assert len(sites) == 2
        result = program
        for _ in sites:
            result = _apply("misc.return_add", result)
        for func in result.ast.functions():
            assert isinstance(func.body.stmts[-1], ReturnStmt)
        assert verify(program, result, LOOPS_INPUTS)

    def test_bool_to_int(self):
        program = parse("int main() { bool f = true; if (f) output << 1 << endl; return 0; }")
        result = _apply("declaration.bool_to_int", program)
        literals = [node for node in walk(result.ast) if isinstance(node, Literal)]
        assert all(node.category != "bool" for node in literals)
        assert verify(program, result, [""])

    def test_typedef_delete(self):
        program = parse("typedef longlong ll;\nint main() { ll x = 5; output << x << endl; return 0; }")
        result = _apply("declaration.typedef_delete", program)
        assert not any(isinstance(item, Typedef) for item in result.ast.items)
        assert "ll" not in result.canonical_text
        assert verify(program, result, [""])

    def test_typedef_convert(self):
        program = parse("int main() { longlong x = 5; output << x << endl; return 0; }")
        result = _apply("declaration.typedef_convert", program)
        assert any(isinstance(item, Typedef) for item in result.ast.items)
        assert verify(program, result, [""])

    def test_seed_picks_the_same_site(self):
        program = parse(LOOPS)
        first = _apply("misc.compound_insert", program, seed=11)
        second = _apply("misc.compound_insert", program, seed=11)
        assert first.canonical_text == second.canonical_text

    def test_no_applicable_site(self):
        program = parse("int main() { return 0; }")
        with pytest.raises(NoApplicableSite):
            _apply("control.for_to_while", program)

    def test_input_is_not_modified(self):
        program = parse(LOOPS)
        before = program.canonical_text
        _apply("control.for_to_while", program)
        assert parse(LOOPS).ast == program.ast
        assert program.canonical_text == before


class TestTemplates:
    _PROFILE = TemplateProfile(
        identifiers=["zz"],
        includes=["algorithm"],
        typedefs=[("LL", "longlong")],
        global_decls=["int cases;"],
    )

    def test_identifier_rename(self):
        program = parse(LOOPS)
        result = _apply("template.identifier_rename", program, template=self._PROFILE)
        assert "zz" in program_names(result.ast)
        assert verify(program, result, LOOPS_INPUTS)

    def test_rename_needs_a_fresh_name(self):
        program = parse("int main() { int zz = 1; output << zz << endl; return 0; }")
        assert get_transformer("template.identifier_rename").list_applicable(program, self._PROFILE) == []

    def test_include_add(self):
        result = _apply("template.include_add", parse(LOOPS), template=self._PROFILE)
        assert "algorithm" in [item.header for item in result.ast.items if isinstance(item, Include)]

    def test_global_decl_add(self):
        result = _apply("template.global_decl_add", parse(LOOPS), template=self._PROFILE)
        assert "cases" in program_names(result.ast)

    def test_include_typedef(self):
        program = parse("int main() { longlong x = 5; output << x << endl; return 0; }")
        result = _apply("template.include_typedef", program, template=self._PROFILE)
        typedefs = [(item.alias, item.base.name) for item in result.ast.items if isinstance(item, Typedef)]
        assert ("LL", "longlong") in typedefs
        assert verify(program, result, [""])

    def test_missing_template(self):
        with pytest.raises(TemplateMissing):
            get_transformer("template.include_add").apply(parse(LOOPS), 0, None, defaults=False)

    def test_default_profile(self):
        result = get_transformer("template.include_add").apply(parse(LOOPS), 0).program
        assert len([item for item in result.ast.items if isinstance(item, Include)]) == 4

    def test_extract_template(self, small_corpus):
        profile = small_corpus.template_profile("author00")
        assert not profile.is_empty()
        assert "iostream" in profile.includes or "cstdio" in profile.includes
        assert extract_template([]).is_empty()


class TestSequence:
    def test_list_round_trip(self):
        sequence = TransformationSequence().then("control.for_to_while", 3).then("misc.return_add", 0)
        assert sequence.ids() == ["control.for_to_while", "misc.return_add"]
        assert TransformationSequence.from_list(sequence.to_list()) == sequence

    def test_skips_inapplicable_steps(self):
        program = parse(LOOPS)
        sequence = TransformationSequence(
            [("control.for_to_while", 0), ("control.for_to_while", 0), ("misc.return_add", 1)]
        )
        run = run_sequence(sequence, program)
        assert run.executed.steps == [("control.for_to_while", 0), ("misc.return_add", 1)]
        assert run.skipped == [("control.for_to_while", 0)]
        assert verify(program, run.program, LOOPS_INPUTS)

    def test_unknown_step(self):
        with pytest.raises(UnknownTransformer):
            apply_sequence(TransformationSequence([("misc.nothing", 0)]), parse(LOOPS))

    def test_empty_sequence(self):
        program = parse(LOOPS)
        assert apply_sequence(TransformationSequence(), program) is program


def _check_catalog(program, inputs, seeds):
    for transformer in all_transformers():
        if not transformer.list_applicable(program):
            continue
        for seed in seeds:
            result = transformer.apply(program, seed).program
            assert verify(program, result, inputs), f"{transformer.ID}:{seed} changed {program.task or 'program'}"


class TestPreservation:
    def test_corpus_files(self, small_corpus):
        for item in small_corpus.files:
            if item.author != "author00":
                continue
            program = small_corpus.program(item)
            _check_catalog(program, small_corpus.inputs(item.task), seeds=(derive_seed(item.path),))

    def test_random_programs(self):
        for seed in range(50):
            _check_catalog(parse(random_program(seed)), ["0\n", "9\n"], seeds=(seed,))

    def test_chained_on_random_programs(self):
        ids = sorted(EXPECTED_IDS)
        for seed in range(100):
            program = parse(random_program(seed))
            steps = [(ids[derive_seed(seed, step) % len(ids)], derive_seed(step, seed) % 256) for step in range(6)]
            run = run_sequence(TransformationSequence(steps), program)
            assert verify(program, run.program, ["3\n", "-2\n"]), f"seed {seed}: {run.executed.ids()}"

    @pytest.mark.slow
    def test_whole_corpus(self, small_corpus):
        for item in small_corpus.files + small_corpus.templates:
            program = small_corpus.program(item)
            _check_catalog(program, [task_of(small_corpus, item.task).test_input], seeds=(0, 1))

    @pytest.mark.slow
    def test_many_random_programs(self):
        for seed in range(1000):
            _check_catalog(parse(random_program(seed)), ["0\n", "9\n"], seeds=(seed,))
