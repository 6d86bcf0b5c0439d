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

import numpy as np
import pytest

from stylomorph.features import (
    ATTACKABLE_KINDS,
    EmptyCorpus,
    FeatureKind,
    FeatureSpace,
    SpaceMismatch,
    changed_feature_ratio,
    extract_features,
    extract_layout,
    extract_lexical,
    extract_syntactic,
    fit_space,
    loc_diff,
    normalize_layout,
    vectorize,
    vectorize_many,
)
from stylomorph.lang import parse, walk

from .programs import RECURSIVE_SNIPPET, random_program

PROPERTY_CASES = 1000


class TestExtract:
    def test_lexical_counts(self, recursive_snippet):
        bag = extract_lexical(recursive_snippet)
        assert bag["lexical.int"] == 3
        assert bag["lexical.foo"] == 2
        assert bag["lexical.a"] == 4
        assert bag["lexical.return"] == 2
        # comments and literals are not lexical features
        assert not any("base" in name for name in bag)
        assert "lexical.2" not in bag

    def test_syntactic(self, recursive_snippet):
        bag = extract_syntactic(recursive_snippet)
        assert bag["syntactic.node.FuncDecl"] == 1
        assert bag["syntactic.node.ReturnStmt"] == 2
        assert bag["syntactic.edge.FuncDecl>Param"] == 1
        assert bag["syntactic.max_depth"] > bag["syntactic.mean_leaf_depth"] > 1

    def test_one_edge_per_child(self):
        for seed in range(PROPERTY_CASES):
            program = parse(random_program(seed))
            bag = extract_syntactic(program)
            edges = sum(value for name, value in bag.items() if name.startswith("syntactic.edge."))
            nodes = sum(value for name, value in bag.items() if name.startswith("syntactic.node."))
            assert nodes == sum(1 for _ in walk(program.ast))
            assert edges == nodes - 1, f"seed {seed}"

    def test_layout(self):
        bag = extract_layout(RECURSIVE_SNIPPET)
        assert bag["layout.tab_ratio"] == 1.0
        assert bag["layout.brace_same_line"] == 1.0
        assert bag["layout.line_comment_ratio"] == 1.0
        assert bag["layout.blank_line_density"] == 0.0
        assert bag["layout.operator_spacing"] == 1.0

    def test_layout_ratios(self):
        source = "int f(int a){\n\n  a+=1;\n  return a;\n}\n\nint main() {\n  return f(1) == 2;\n}\n"
        bag = extract_layout(source)
        # the blank line between the functions does not count
        assert bag["layout.blank_line_density"] == pytest.approx(1 / 9)
        assert bag["layout.operator_spacing"] == 0.5
        assert bag["layout.indent_width"] == 2.0

    def test_layout_ignores_names(self):
        short = extract_layout("int main() {\n    int a = 1;\n    return a;\n}\n")
        long = extract_layout("int main() {\n    int answer_value = 1;\n    return answer_value;\n}\n")
        assert short == long

    def test_layout_of_empty_text(self):
        assert set(extract_layout("").values()) == {0.0}

    def test_kinds(self, recursive_snippet):
        bag = extract_features(recursive_snippet, (FeatureKind.lexical,))
        assert all(name.startswith("lexical.") for name in bag)
        assert not any(name.startswith("layout.") for name in extract_features(recursive_snippet))
        assert FeatureKind.layout not in ATTACKABLE_KINDS

    def test_normalized_layout(self):
        a = parse("int main(){\n\tint x=1;\n\toutput<<x<<endl;\n\treturn 0;\n}\n")
        b = parse("int main()\n{\n    int x = 1;\n\n    output << x << endl;\n    return 0;\n}\n")
        assert extract_layout(a.source_text) != extract_layout(b.source_text)
        assert normalize_layout(a.source_text) == normalize_layout(b.source_text)
        assert parse(normalize_layout(a.source_text)).ast == a.ast

    def test_normalized_comments(self):
        block = parse("int main() {\n\t/* read */\n\tint x;\n\treturn 0;\n}\n")
        line = parse("int main() {\n  // read\n  int x;\n  return 0;\n}\n")
        assert extract_layout(block.source_text)["layout.line_comment_ratio"] == 0.0
        assert normalize_layout(block.source_text) == normalize_layout(line.source_text)
        assert extract_layout(normalize_layout(block.source_text)) == extract_layout(normalize_layout(line.source_text))
        assert parse(normalize_layout(block.source_text)).ast == block.ast
        assert normalize_layout(normalize_layout(block.source_text)) == normalize_layout(block.source_text)


class TestFeatureSpace:
    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            fit_space([])

    def test_selection_cap(self, small_corpus):
        programs = [program for program, _ in small_corpus.dataset()]
        space = fit_space(programs, selection_cap=25)
        assert len(space) == 25
        assert space.names == sorted(space.names)
        assert space.corpus_size == len(programs)

    def test_drops_singletons(self, small_corpus):
        programs = [program for program, _ in small_corpus.dataset()]
        space = fit_space(programs, selection_cap=100_000)
        counts = {}
        for program in programs:
            for name, value in extract_features(program).items():
                counts[name] = counts.get(name, 0) + value
        assert all(counts[name] != 1 for name in space.names)

    def test_smoothed_idf(self):
        first = parse("int main() {\n    int a = 1;\n    a = a + 1;\n    a = a + 2;\n    return a;\n}\n", "x", "t")
        second = parse("int main() {\n    int b = 0;\n    return b;\n}\n", "y", "t")
        space = fit_space([first, second], kinds=(FeatureKind.lexical,))
        weights = dict(zip(space.names, space.weights))
        assert weights["lexical.+"] == pytest.approx(np.log(3 / 2) + 1)
        assert weights["lexical.+"] == pytest.approx(1.405, abs=1e-3)
        assert weights["lexical.int"] == pytest.approx(1.0)
        values = vectorize(first, space).as_dict()
        # two `+` against two `int` in the first file
        assert values["lexical.+"] / values["lexical.int"] == pytest.approx(np.log(3 / 2) + 1)
        assert np.linalg.norm(vectorize(first, space).values) == pytest.approx(1.0)

    def test_mutual_information_mask(self, small_corpus, monkeypatch):
        import stylomorph.features as features

        seen = {}
        original = features.mutual_info_classif

        def recording(matrix, labels, discrete_features, random_state):
            seen["mask"] = discrete_features
            return original(matrix, labels, discrete_features=discrete_features, random_state=random_state)

        monkeypatch.setattr(features, "mutual_info_classif", recording)
        programs = [program for program, _ in small_corpus.dataset()]
        space = fit_space(programs, selection_cap=100_000, kinds=tuple(FeatureKind))
        assert len(seen["mask"]) == len(space)
        flags = dict(zip(space.names, seen["mask"]))
        assert not flags["syntactic.mean_leaf_depth"] and not flags["syntactic.max_depth"]
        assert not any(flag for name, flag in flags.items() if name.startswith("layout."))
        assert all(flag for name, flag in flags.items() if name.startswith("lexical."))

    def test_unit_norm(self, small_corpus):
        programs = [program for program, _ in small_corpus.dataset()]
        space = fit_space(programs, selection_cap=200)
        matrix = vectorize_many(programs, space)
        assert matrix.shape == (len(programs), len(space))
        norms = np.linalg.norm(matrix, axis=1)
        assert np.allclose(norms[norms > 0], 1.0)
        assert (matrix >= 0).all()

    def test_unknown_features_are_ignored(self, small_corpus, recursive_snippet):
        programs = [program for program, _ in small_corpus.dataset()]
        space = fit_space(programs, selection_cap=200)
        vector = vectorize(recursive_snippet, space)
        assert len(vector) == len(space)
        assert set(vector.as_dict()) <= set(space.names)

    def test_dict_round_trip(self, small_corpus):
        programs = [program for program, _ in small_corpus.dataset()]
        space = fit_space(programs, selection_cap=50)
        restored = FeatureSpace.from_dict(space.to_dict())
        assert restored.same_as(space)
        assert np.array_equal(vectorize_many(programs[:3], restored), vectorize_many(programs[:3], space))


class TestDifferences:
    def test_changed_feature_ratio(self, small_corpus):
        programs = [program for program, _ in small_corpus.dataset()]
        space = fit_space(programs, selection_cap=200)
        first = vectorize(programs[0], space)
        assert changed_feature_ratio(first, first) == 0.0
        ratio = changed_feature_ratio(first, vectorize(programs[1], space))
        assert 0.0 < ratio <= 1.0

    def test_space_mismatch(self, small_corpus):
        programs = [program for program, _ in small_corpus.dataset()]
        narrow = vectorize(programs[0], fit_space(programs, selection_cap=10))
        wide = vectorize(programs[0], fit_space(programs, selection_cap=20))
        with pytest.raises(SpaceMismatch):
            changed_feature_ratio(narrow, wide)

    def test_loc_diff(self):
        assert loc_diff("a\nb\nc\n", "a\nx\nc\nd\n") == (1, 0, 1)
        assert loc_diff("a\nb\n", "a\nb\n") == (0, 0, 0)
        assert loc_diff("a\nb\nc\n", "a\n") == (0, 2, 0)
        assert loc_diff("", "a\nb\n") == (2, 0, 0)
