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

# Train an attribution model on a corpus.

from pathlib import Path
from typing import Tuple

import click

from .. import term
from ..attribution import ModelKind, train
from ..constants import ExitCode
from ..corpus import load_manifest
from . import options
from ._deco import time_program
from .base import StylomorphCommandHandler

__all__ = ("train_model",)
console = term.get_console()


@click.command(
    "train",
    help="Train an attribution model on a corpus and save it as JSON",
    cls=StylomorphCommandHandler,
)
@options.corpus_dir
@click.option(
    "-o",
    "--output",
    "output_file",
    required=True,
    type=click.Path(resolve_path=True, file_okay=True, dir_okay=False, path_type=Path),
    help="Where to write the model",
)
@click.option(
    "-t",
    "--task",
    "tasks",
    multiple=True,
    help="Only train on these tasks, can be repeated",
)
@options.model_kind
@options.training_seed
@options.selection_cap
@time_program
def train_model(
    corpus_dir: Path, output_file: Path, tasks: Tuple[str, ...], model_kind: str, seed: int, selection_cap: int
):
    manifest = load_manifest(corpus_dir)
    known = {task.id for task in manifest.tasks}
    unknown = [task for task in tasks if task not in known]
    if unknown:
        console.error(f"Unknown task(s): {', '.join(unknown)}")
        return ExitCode.data_error

    dataset = manifest.dataset(list(tasks) or None)
    console.status(f"Training {model_kind} on {len(dataset)} files...")
    model = train(ModelKind(model_kind), dataset, seed=seed, selection_cap=selection_cap)
    console.stop_status(f"Trained {model_kind} with {len(model.space)} features")
    model.save(output_file)
    console.info(f"[+] Model written to {output_file}")
