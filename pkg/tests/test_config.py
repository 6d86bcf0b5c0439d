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
from dataclasses import replace

import pytest

from stylomorph.config import Config, ConfigError, ConfigHandler


def _write(path, data):
    path.mkdir(parents=True, exist_ok=True)
    (path / "config.json").write_text(json.dumps(data), encoding="utf-8")


class TestConfigHandler:
    def test_first_run_writes_defaults(self, tmp_path):
        handler = ConfigHandler(tmp_path)
        assert handler.is_first_time()
        assert handler.config == Config()
        stored = json.loads(handler.config_file.read_text(encoding="utf-8"))
        assert stored["_is_first_time"] is True
        assert stored["attack"]["max_seq_len"] == 5
        assert stored["interpreter"]["fuel"] == 10_000_000

    def test_reads_back_saved_config(self, tmp_path):
        handler = ConfigHandler(tmp_path)
        changed = replace(handler.config, features=replace(handler.config.features, selection_cap=200))
        handler.save_config(changed)
        again = ConfigHandler(tmp_path)
        assert not again.is_first_time()
        assert again.config.features.selection_cap == 200

    def test_missing_keys_take_defaults(self, tmp_path):
        _write(tmp_path, {"attack": {"patience": 3}})
        config = ConfigHandler(tmp_path).config
        assert config.attack.patience == 3
        assert config.attack.inner_iters == 50
        assert config.attack.substitute_candidates == 5
        assert config.corpus.seed == 1337

    @pytest.mark.parametrize(
        "data",
        [
            {"attack": {"patience": "3"}},
            {"attack": {"patience": True}},
            {"attack": {"patience": 0}},
            {"attack": {"substitute_candidates": 0}},
            {"corpus": {"n_authors": 1}},
            {"corpus": {"seed": -1}},
            {"features": []},
        ],
    )
    def test_rejects_bad_values(self, tmp_path, data):
        _write(tmp_path, data)
        with pytest.raises(ConfigError):
            ConfigHandler(tmp_path)

    def test_zero_seeds_are_allowed(self, tmp_path):
        _write(tmp_path, {"corpus": {"seed": 0}, "training": {"seed": 0}})
        config = ConfigHandler(tmp_path).config
        assert config.corpus.seed == 0

    def test_validate(self, tmp_path):
        handler = ConfigHandler(tmp_path)
        good = replace(handler.config, training=replace(handler.config.training, seed=4))
        assert handler.validate(good).training.seed == 4
        bad = replace(handler.config, interpreter=replace(handler.config.interpreter, fuel=0))
        with pytest.raises(ConfigError):
            handler.validate(bad)

    def test_config_error_is_a_type_error(self):
        assert issubclass(ConfigError, TypeError)
