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

# The config handler, holding the experiment parameters every run starts from.
# Each report embeds the effective config so a run can be replayed exactly.

import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ._ntypes import ConfigT, _ConfigAttackT, _ConfigCorpusT, _ConfigFeaturesT, _ConfigInterpreterT, _ConfigTrainingT

__all__ = (
    "CONFIG_DIR",
    "get_config",
    "get_config_handler",
    "ConfigHandler",
    "ConfigError",
    "Config",
)

if os.environ.get("STYLOMORPH_CONFIG_DIR"):
    CONFIG_DIR = Path(os.environ["STYLOMORPH_CONFIG_DIR"])
elif sys.platform == "win32":
    CONFIG_DIR = Path(os.path.expandvars(r"%APPDATA%\stylomorph"))
else:
    CONFIG_DIR = Path.expanduser(Path("~/.config/stylomorph"))


@dataclass
class _ConfigInterpreter:
    fuel: int = field(default=10_000_000)

    def to_dict(self) -> _ConfigInterpreterT:
        return {"fuel": self.fuel}


@dataclass
class _ConfigFeatures:
    selection_cap: int = field(default=1500)

    def to_dict(self) -> _ConfigFeaturesT:
        return {"selection_cap": self.selection_cap}


@dataclass
class _ConfigAttack:
    max_seq_len: int = field(default=5)
    sims_per_iter: int = field(default=25)
    inner_iters: int = field(default=50)
    max_outer_moves: int = field(default=60)
    patience: int = field(default=10)
    substitute_candidates: int = field(default=5)

    def to_dict(self) -> _ConfigAttackT:
        return {
            "max_seq_len": self.max_seq_len,
            "sims_per_iter": self.sims_per_iter,
            "inner_iters": self.inner_iters,
            "max_outer_moves": self.max_outer_moves,
            "patience": self.patience,
            "substitute_candidates": self.substitute_candidates,
        }


@dataclass
class _ConfigCorpus:
    n_authors: int = field(default=12)
    seed: int = field(default=1337)

    def to_dict(self) -> _ConfigCorpusT:
        return {"n_authors": self.n_authors, "seed": self.seed}


@dataclass
class _ConfigTraining:
    seed: int = field(default=0)

    def to_dict(self) -> _ConfigTrainingT:
        return {"seed": self.seed}


@dataclass
class Config:
    interpreter: _ConfigInterpreter = field(default_factory=_ConfigInterpreter)
    features: _ConfigFeatures = field(default_factory=_ConfigFeatures)
    attack: _ConfigAttack = field(default_factory=_ConfigAttack)
    corpus: _ConfigCorpus = field(default_factory=_ConfigCorpus)
    training: _ConfigTraining = field(default_factory=_ConfigTraining)

    def to_dict(self) -> ConfigT:
        return {
            "interpreter": self.interpreter.to_dict(),
            "features": self.features.to_dict(),
            "attack": self.attack.to_dict(),
            "corpus": self.corpus.to_dict(),
            "training": self.training.to_dict(),
        }


class ConfigError(TypeError):
    pass


def _positive_int(section: dict, section_name: str, key: str, default: int, minimum: int = 1) -> int:
    value = section.get(key, default)
    # bool is an int subclass, reject it explicitly
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"`{section_name}.{key}` must be an integer")
    if value < minimum:
        raise ConfigError(f"`{section_name}.{key}` must be at least {minimum}")
    return value


class ConfigHandler:
    def __init__(self, config_dir: Optional[Path] = None) -> None:
        config_dir = config_dir or CONFIG_DIR
        config_dir.mkdir(parents=True, exist_ok=True)

        self.__config_file = config_dir / "config.json"
        self.__config = Config()
        self._is_first_time_warn = False

        self.read_and_parse()

    def _parse_config(self, json_data: ConfigT) -> Config:
        sections = {}
        for name in ("interpreter", "features", "attack", "corpus", "training"):
            section = json_data.get(name, {})
            if not isinstance(section, dict):
                raise ConfigError(f"`{name}` must be a dict")
            sections[name] = section

        defaults = Config()
        config = Config()
        config.interpreter = _ConfigInterpreter(
            fuel=_positive_int(sections["interpreter"], "interpreter", "fuel", defaults.interpreter.fuel),
        )
        config.features = _ConfigFeatures(
            selection_cap=_positive_int(
                sections["features"], "features", "selection_cap", defaults.features.selection_cap
            ),
        )
        attack = sections["attack"]
        config.attack = _ConfigAttack(
            max_seq_len=_positive_int(attack, "attack", "max_seq_len", defaults.attack.max_seq_len),
            sims_per_iter=_positive_int(attack, "attack", "sims_per_iter", defaults.attack.sims_per_iter),
            inner_iters=_positive_int(attack, "attack", "inner_iters", defaults.attack.inner_iters),
            max_outer_moves=_positive_int(attack, "attack", "max_outer_moves", defaults.attack.max_outer_moves),
            patience=_positive_int(attack, "attack", "patience", defaults.attack.patience),
            substitute_candidates=_positive_int(
                attack, "attack", "substitute_candidates", defaults.attack.substitute_candidates
            ),
        )
        config.corpus = _ConfigCorpus(
            n_authors=_positive_int(sections["corpus"], "corpus", "n_authors", defaults.corpus.n_authors, 2),
            seed=_positive_int(sections["corpus"], "corpus", "seed", defaults.corpus.seed, 0),
        )
        config.training = _ConfigTraining(
            seed=_positive_int(sections["training"], "training", "seed", defaults.training.seed, 0),
        )

        return config

    def validate(self, config: Config) -> Config:
        """Run ``config`` through the checks a config file goes through."""
        return self._parse_config(config.to_dict())

    def read_and_parse(self) -> None:
        if self.__config_file.exists():
            with self.__config_file.open("r") as f:
                parsed_config = json.load(f)

            self.__config = self._parse_config(parsed_config)
            self._is_first_time_warn = bool(parsed_config.get("_is_first_time", False))
        else:
            self.save_config(self.__config, True)
            self._is_first_time_warn = True

    def save_config(self, config: Config, mark_first_time: bool = False) -> None:
        as_dict = config.to_dict()
        self.__config = config

        as_dict["_is_first_time"] = mark_first_time
        self._is_first_time_warn = mark_first_time

        with self.__config_file.open("w") as f:
            json.dump(as_dict, f, indent=4, ensure_ascii=False)

    @property
    def config(self) -> Config:
        return self.__config

    @property
    def config_file(self) -> Path:
        return self.__config_file

    def is_first_time(self) -> bool:
        return self._is_first_time_warn


_config_handler: Optional[ConfigHandler] = None


def get_config_handler() -> ConfigHandler:
    global _config_handler

    if _config_handler is None:
        _config_handler = ConfigHandler()

    return _config_handler


def get_config() -> Config:
    return get_config_handler().config
