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
from click.testing import CliRunner

from stylomorph.attribution import TrainedModel
from stylomorph.cmd import main
from stylomorph.config import get_config_handler
from stylomorph.lang import WhileStmt, parse, walk

SOURCE = """#include <iostream>

int main() {
    int n;
    input >> n;
    int s = 0;
    for (int i = 0; i < n; i++) {
        s += i;
    }
    output << s << endl;
    return 0;
}
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def source_file(tmp_path):
    path = tmp_path / "summing.mc"
    path.write_text(SOURCE, encoding="utf-8")
    return path


class TestTransformers:
    def test_list(self, runner):
        result = runner.invoke(main, ["transformers", "list"])
        assert result.exit_code == 0
        catalog = json.loads(result.output)
        assert len(catalog) == 36
        assert {"id", "family", "description", "needs", "requires_template"} <= set(catalog[0])


class TestCorpus:
    def test_generate_once(self, runner, tmp_path):
        target = tmp_path / "corpus"
        result = runner.invoke(main, ["corpus", str(target), "-n", "2", "-s", "3"])
        assert result.exit_code == 0, result.output
        assert (target / "manifest.json").exists()
        assert (target / "corpus" / "author01" / "run_length.mc").exists()

        again = runner.invoke(main, ["corpus", str(target), "-n", "2", "-s", "3"])
        assert again.exit_code == 3

    def test_verify(self, runner, small_corpus_dir):
        result = runner.invoke(main, ["verify", str(small_corpus_dir)])
        assert result.exit_code == 0, result.output

    def test_verify_missing_manifest(self, runner, tmp_path):
        result = runner.invoke(main, ["verify", str(tmp_path)])
        assert result.exit_code == 3


class TestTransform:
    def test_steps(self, runner, source_file, tmp_path):
        stdin = tmp_path / "case.in"
        stdin.write_text("5\n", encoding="utf-8")
        output = tmp_path / "out.mc"
        result = runner.invoke(
            main,
            ["transform", str(source_file), "-t", "control.for_to_while:0", "-i", str(stdin), "-o", str(output)],
        )
        assert result.exit_code == 0, result.output
        transformed = parse(output.read_text(encoding="utf-8"))
        assert any(isinstance(node, WhileStmt) for node in walk(transformed.ast))

    def test_sequence_file(self, runner, source_file, tmp_path):
        sequence = tmp_path / "sequence.json"
        sequence.write_text(json.dumps({"sequence": [["control.for_to_while", 0]]}), encoding="utf-8")
        output = tmp_path / "out.mc"
        result = runner.invoke(main, ["transform", str(source_file), "-sq", str(sequence), "-o", str(output)])
        assert result.exit_code == 0, result.output
        assert "while" in output.read_text(encoding="utf-8")

    def test_unknown_transformer(self, runner, source_file):
        result = runner.invoke(main, ["transform", str(source_file), "-t", "control.nothing:0"])
        assert result.exit_code == 2

    def test_nothing_to_apply(self, runner, source_file):
        result = runner.invoke(main, ["transform", str(source_file)])
        assert result.exit_code == 2

    def test_syntax_error(self, runner, tmp_path):
        broken = tmp_path / "broken.mc"
        broken.write_text("int main( {", encoding="utf-8")
        result = runner.invoke(main, ["transform", str(broken), "-t", "misc.return_add:0"])
        assert result.exit_code == 3


class TestTrain:
    def test_unknown_task(self, runner, small_corpus_dir, tmp_path):
        result = runner.invoke(main, ["train", str(small_corpus_dir), "-o", str(tmp_path / "m.json"), "-t", "nothing"])
        assert result.exit_code == 3

    def test_train_and_attribute(self, runner, small_corpus_dir, tmp_path):
        model_path = tmp_path / "model.json"
        result = runner.invoke(
            main, ["train", str(small_corpus_dir), "-o", str(model_path), "-k", "linear_softmax", "-sc", "100"]
        )
        assert result.exit_code == 0, result.output
        model = TrainedModel.load(model_path)
        assert model.authors == ["author00", "author01", "author02", "author03"]

        sample = small_corpus_dir / "corpus" / "author02" / "sorting.mc"
        result = runner.invoke(main, ["attribute", str(model_path), str(sample), "-n", "2"])
        assert result.exit_code == 0, result.output

    def test_attribute_bad_model(self, runner, source_file, tmp_path):
        model_path = tmp_path / "model.json"
        model_path.write_text("[]", encoding="utf-8")
        result = runner.invoke(main, ["attribute", str(model_path), str(source_file)])
        assert result.exit_code == 3


class TestConfigCommand:
    def test_show(self, runner):
        result = runner.invoke(main, ["config"])
        assert result.exit_code == 0

    def test_set(self, runner):
        handler = get_config_handler()
        before = handler.config.attack.patience
        try:
            result = runner.invoke(main, ["config", "--set", "attack.patience=5"])
            assert result.exit_code == 0, result.output
            assert handler.config.attack.patience == 5
            stored = json.loads(handler.config_file.read_text(encoding="utf-8"))
            assert stored["attack"]["patience"] == 5
        finally:
            runner.invoke(main, ["config", "--set", f"attack.patience={before}"])

    @pytest.mark.parametrize("setting", ["attack.nothing=1", "patience=5", "attack.patience=many"])
    def test_bad_setting(self, runner, setting):
        result = runner.invoke(main, ["config", "--set", setting])
        assert result.exit_code == 2

    def test_invalid_value(self, runner):
        handler = get_config_handler()
        result = runner.invoke(main, ["config", "--set", "corpus.n_authors=1"])
        assert result.exit_code == 3
        assert handler.config.corpus.n_authors >= 2


@pytest.fixture
def model_file(softmax_model, tmp_path):
    path = tmp_path / "model.json"
    softmax_model.save(path)
    return path


class TestAttackCommand:
    def test_impersonate_needs_a_target(self, runner, small_corpus_dir, model_file):
        sample = small_corpus_dir / "corpus" / "author00" / "sorting.mc"
        result = runner.invoke(
            main, ["attack", str(small_corpus_dir), str(model_file), str(sample), "-m", "impersonate"]
        )
        assert result.exit_code == 2

    def test_target_is_the_source(self, runner, small_corpus_dir, model_file):
        sample = small_corpus_dir / "corpus" / "author00" / "sorting.mc"
        result = runner.invoke(
            main,
            ["attack", str(small_corpus_dir), str(model_file), str(sample), "-m", "impersonate", "-t", "author00"],
        )
        assert result.exit_code == 2

    def test_unknown_mode(self, runner, small_corpus_dir, model_file):
        sample = small_corpus_dir / "corpus" / "author00" / "sorting.mc"
        result = runner.invoke(main, ["attack", str(small_corpus_dir), str(model_file), str(sample), "-m", "hide"])
        assert result.exit_code == 2

    def test_file_outside_the_corpus(self, runner, small_corpus_dir, model_file, source_file):
        result = runner.invoke(main, ["attack", str(small_corpus_dir), str(model_file), str(source_file)])
        assert result.exit_code == 3

    @pytest.mark.slow
    def test_dodge_with_report(self, runner, small_corpus_dir, model_file, tmp_path):
        sample = small_corpus_dir / "corpus" / "author01" / "gcd_pairs.mc"
        report_dir = tmp_path / "report"
        result = runner.invoke(
            main, ["attack", str(small_corpus_dir), str(model_file), str(sample), "-mm", "1", "-r", str(report_dir)]
        )
        assert result.exit_code == 0, result.output
        assert (report_dir / "report.json").exists()
        assert (report_dir / "gcd_pairs.attacked.mc").exists()
