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

# Attribute a source file to its most likely authors.

from pathlib import Path

import click
import numpy as np
from rich.table import Table

from .. import term
from ..attribution import TrainedModel
from ..common import read_program
from . import options
from ._deco import time_program
from .base import StylomorphCommandHandler

__all__ = ("attribute_file",)
console = term.get_console()


@click.command(
    "attribute",
    help="Print the most likely authors of a source file",
    cls=StylomorphCommandHandler,
)
@options.model_file
@options.source_file
@click.option(
    "-n",
    "--top",
    "top",
    type=click.IntRange(min=1),
    default=3,
    show_default=True,
    help="How many authors to show",
)
@time_program
def attribute_file(model_file: Path, source_file: Path, top: int):
    model = TrainedModel.load(model_file)
    program = read_program(source_file)
    scores = model.predict_scores(program)
    # stable sort so ties keep the lowest id first
    ranking = np.argsort(-scores, kind="stable")[:top]

    table = Table(title=source_file.name)
    table.add_column("Rank", justify="right")
    table.add_column("Author")
    table.add_column("Score", justify="right")
    for rank, author_id in enumerate(ranking, 1):
        table.add_row(str(rank), model.label(int(author_id)).name, f"{scores[author_id]:.4f}")
    console.table(table)
