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

import json

import pytest

from stylomorph.corpus import (
    GRID_TASKS,
    TEMPLATE_TASKS,
    CommentStyle,
    CorpusIoError,
    FormatError,
    TooManyAuthors,
    author_name,
    generate_corpus,
    generate_profiles,
    get_task,
    load_manifest,
    profile_distance,
    render,
    render_source,
    save_manifest,
)
from stylomorph.corpus.profiles import MIN_PROFILE_DISTANCE
from stylomorph.lang import interpret

from .conftest import CORPUS_AUTHORS, CORPUS_SEED


class TestTasks:
    def test_grid(self):
        assert len(GRID_TASKS) == 8
        assert TEMPLATE_TASKS == ("t1", "t2")
        assert get_task("matrix_trace").float_digits == 2

    def test_reference_outputs(self):
        assert get_task("sum_pairs").expected_output == "3\n1000000000007\n0\n1111111110\n"
        assert get_task("max_subarray").expected_output == "6\n"
        assert get_task("t1").expected_output == "9\n"
        assert get_task("t2").expected_output == "4\n"

    def test_unknown_task(self):
        with pytest.raises(KeyError):
            get_task("nothing")


class TestProfiles:
    def test_pairwise_distinct(self):
        profiles = generate_profiles(12, 1337)
        for idx, first in enumerate(profiles):
            for second in profiles[idx + 1 :]:
                assert profile_distance(first, second) >= MIN_PROFILE_DISTANCE

    def test_every_author_comments(self):
        styles = {profile.layout.comment_style for profile in generate_profiles(12, 1337)}
        assert CommentStyle.none not in styles

    def test_too_many_authors(self):
        with pytest.raises(TooManyAuthors):
            generate_profiles(5, 1, max_draws=1)


class TestGenerate:
    def test_grid_shape(self, small_corpus):
        assert len(small_corpus.files) == CORPUS_AUTHORS * len(GRID_TASKS)
        assert len(small_corpus.templates) == CORPUS_AUTHORS * len(TEMPLATE_TASKS)
        assert [label.name for label in small_corpus.labels] == [author_name(idx) for idx in range(CORPUS_AUTHORS)]
        assert small_corpus.file("author01", "sorting").path == "corpus/author01/sorting.mc"

    def test_every_file_solves_its_task(self, small_corpus):
        for item in small_corpus.files + small_corpus.templates:
            task = get_task(item.task)
            output = interpret(small_corpus.program(item), task.test_input)
            assert output.stdout_text == task.expected_output, item.path

    def test_deterministic(self, small_corpus):
        again = generate_corpus(CORPUS_AUTHORS, seed=CORPUS_SEED)
        assert [item.source for item in again.files] == [item.source for item in small_corpus.files]

    def test_seed_changes_the_corpus(self, small_corpus):
        other = generate_corpus(CORPUS_AUTHORS, seed=CORPUS_SEED + 1)
        assert [item.source for item in other.files] != [item.source for item in small_corpus.files]

    def test_default_corpus(self):
        manifest = generate_corpus(12, seed=1337)
        assert len(manifest.files) == 12 * len(GRID_TASKS)
        assert len(manifest.templates) == 12 * len(TEMPLATE_TASKS)
        assert any("#include <string>" in item.source for item in manifest.files if item.task == "string_reverse")

    def test_needs_two_authors(self):
        with pytest.raises(ValueError):
            generate_corpus(1)

    def test_subset(self, small_corpus):
        subset = small_corpus.subset(2)
        assert [label.id for label in subset.labels] == [0, 1]
        assert {item.author for item in subset.files} == {"author00", "author01"}
        assert len(subset.dataset()) == 2 * len(GRID_TASKS)

    def test_lookups(self, small_corpus):
        assert small_corpus.label("author03").id == 3
        assert small_corpus.inputs("gcd_pairs") == [get_task("gcd_pairs").test_input]
        with pytest.raises(KeyError):
            small_corpus.label("author99")
        with pytest.raises(KeyError):
            small_corpus.task("t1")


class TestManifest:
    def test_round_trip(self, small_corpus, small_corpus_dir):
        loaded = load_manifest(small_corpus_dir)
        assert loaded.labels == small_corpus.labels
        assert [task.id for task in loaded.tasks] == [task.id for task in small_corpus.tasks]
        assert [item.source for item in loaded.files] == [item.source for item in small_corpus.files]
        assert loaded.seed == CORPUS_SEED
        assert loaded.foreign == []
        assert (small_corpus_dir / "tasks" / "sorting.out").read_text() == get_task("sorting").expected_output

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(CorpusIoError):
            load_manifest(tmp_path)

    def test_not_json(self, tmp_path):
        (tmp_path / "manifest.json").write_text("{ nope", encoding="utf-8")
        with pytest.raises(FormatError):
            load_manifest(tmp_path)

    def test_wrong_version(self, tmp_path):
        (tmp_path / "manifest.json").write_text(json.dumps({"version": 99}), encoding="utf-8")
        with pytest.raises(FormatError):
            load_manifest(tmp_path)

    def test_missing_file(self, small_corpus, tmp_path):
        save_manifest(small_corpus, tmp_path)
        (tmp_path / "corpus" / "author02" / "run_length.mc").unlink()
        with pytest.raises(FormatError) as exc:
            load_manifest(tmp_path)
        assert "run_length" in str(exc.value)

    def test_grid_gap(self, small_corpus, tmp_path):
        save_manifest(small_corpus, tmp_path)
        data = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
        data["files"] = [entry for entry in data["files"] if entry["path"] != "corpus/author00/sorting.mc"]
        (tmp_path / "manifest.json").write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(FormatError):
            load_manifest(tmp_path)

    def test_foreign_files(self, small_corpus, tmp_path):
        save_manifest(small_corpus, tmp_path)
        (tmp_path / "corpus" / "author00" / "notes.mc").write_text("int main() { return 0; }", encoding="utf-8")
        loaded = load_manifest(tmp_path)
        assert loaded.foreign == ["corpus/author00/notes.mc"]
        assert len(loaded.files) == len(small_corpus.files)

    def test_unparseable_file(self, small_corpus, tmp_path):
        save_manifest(small_corpus, tmp_path)
        (tmp_path / "corpus" / "author01" / "sorting.mc").write_text("int main( {", encoding="utf-8")
        loaded = load_manifest(tmp_path)
        with pytest.raises(FormatError):
            loaded.program(loaded.file("author01", "sorting"))


class TestRender:
    def test_render(self):
        (profile,) = generate_profiles(1, 11)
        task = get_task("string_reverse")
        program = render(task, profile, seed=4, author="author00")
        assert program.author == "author00"
        assert program.task == "string_reverse"
        assert interpret(program, task.test_input).stdout_text == task.expected_output
        assert render_source(task, profile, 4) == program.source_text

    def test_profiles_change_the_text(self):
        first, second = generate_profiles(2, 11)
        task = get_task("sorting")
        assert render_source(task, first, 0) != render_source(task, second, 0)
