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

from pathlib import Path
from typing import Optional

import click

from ..attribution import ModelKind
from ..config import get_config
from ..constants import ATTACK_FLAGS
from ..transform import UnknownTransformer, get_transformer

config = get_config()


def _existing_dir(name: str, metavar: str):
    return click.argument(
        name,
        metavar=metavar,
        required=True,
        type=click.Path(exists=True, resolve_path=True, file_okay=False, dir_okay=True, path_type=Path),
    )


def _existing_file(name: str, metavar: str):
    return click.argument(
        name,
        metavar=metavar,
        required=True,
        type=click.Path(exists=True, resolve_path=True, file_okay=True, dir_okay=False, path_type=Path),
    )


class StepParamType(click.ParamType):
    """A transformation step written as ``transformer_id:site_seed``."""

    name = "step"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        if not isinstance(value, str) or ":" not in value:
            self.fail(f"{value!r} is not a step, expected `transformer:seed`", param, ctx)

        transformer_id, _, seed = value.rpartition(":")
        try:
            get_transformer(transformer_id)
        except UnknownTransformer:
            self.fail(f"{transformer_id!r} is not a known transformer", param, ctx)
        try:
            site_seed = int(seed)
        except ValueError:
            self.fail(f"{seed!r} is not a valid site seed", param, ctx)
        if site_seed < 0:
            self.fail(f"{seed!r} is not a valid site seed (must not be negative)", param, ctx)
        return (transformer_id, site_seed)


class AttackFlagParamType(click.ParamType):
    name = "attack_mode"

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            self.fail(f"{value!r} is not a valid string", param, ctx)

        flag = ATTACK_FLAGS.get(value)
        flag_keys = "`" + "`, `".join(ATTACK_FLAGS.keys()) + "`"
        if flag is None:
            self.fail(f"{value!r} is not a valid attack mode (must be either: {flag_keys})", param, ctx)
        return value

    def get_metavar(self, param: "click.core.Parameter") -> Optional[str]:
        choices_str = "|".join(list(ATTACK_FLAGS.keys()))

        if param.required and param.param_type_name == "argument":
            return f"{{{choices_str}}}"
        return f"[{choices_str}]"


STEP = StepParamType()
ATTACK_FLAG = AttackFlagParamType()

corpus_dir = _existing_dir("corpus_dir", "CORPUS_DIR")
source_file = _existing_file("source_file", "SOURCE_FILE")
model_file = _existing_file("model_file", "MODEL_FILE")
output_dir = click.argument(
    "output_dir",
    metavar="OUTPUT_DIR",
    required=True,
    type=click.Path(resolve_path=True, file_okay=False, dir_okay=True, path_type=Path),
)
model_kind = click.option(
    "-k",
    "--kind",
    "model_kind",
    type=click.Choice([kind.value for kind in ModelKind]),
    help="The classifier to train",
    default=ModelKind.random_forest.value,
    show_default=True,
)
training_seed = click.option(
    "-s",
    "--seed",
    "seed",
    type=click.IntRange(min=0),
    help="Seed of the training and attack randomness",
    default=config.training.seed,
    show_default=True,
)
corpus_seed = click.option(
    "-s",
    "--seed",
    "seed",
    type=click.IntRange(min=0),
    help="Seed of the corpus generator",
    default=config.corpus.seed,
    show_default=True,
)
n_authors = click.option(
    "-n",
    "--authors",
    "n_authors",
    type=click.IntRange(min=2),
    help="Number of synthetic authors",
    default=config.corpus.n_authors,
    show_default=True,
)
selection_cap = click.option(
    "-sc",
    "--selection-cap",
    "selection_cap",
    type=click.IntRange(min=1),
    help="Number of features kept by the feature selection",
    default=config.features.selection_cap,
    show_default=True,
)
fuel = click.option(
    "-f",
    "--fuel",
    "fuel",
    type=click.IntRange(min=1),
    help="Interpreter step budget per program run",
    default=config.interpreter.fuel,
    show_default=True,
)
max_moves = click.option(
    "-mm",
    "--max-moves",
    "max_moves",
    type=click.IntRange(min=1),
    help="Maximum outer moves of the attack",
    default=config.attack.max_outer_moves,
    show_default=True,
)
report_dir = click.option(
    "-r",
    "--report",
    "report_dir",
    type=click.Path(resolve_path=True, file_okay=False, dir_okay=True, path_type=Path),
    help="Directory the report files are written to",
    default=None,
)
template_dir = click.option(
    "-td",
    "--template-dir",
    "template_dir",
    type=click.Path(exists=True, resolve_path=True, file_okay=False, dir_okay=True, path_type=Path),
    help="Directory with files of the target author, used to fill the template transformers",
    default=None,
)
