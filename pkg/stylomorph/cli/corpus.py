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

# Generate the synthetic authorship corpus.

from pathlib import Path

import click

from .. import term
from ..constants import ExitCode
from ..corpus import generate_corpus, save_manifest
from . import options
from ._deco import check_config_first, time_program
from .base import StylomorphCommandHandler

__all__ = ("corpus_generate",)
console = term.get_console()


@click.command(
    "corpus",
    help="Generate a synthetic corpus with one file per author and task",
    cls=StylomorphCommandHandler,
)
@options.output_dir
@options.n_authors
@options.corpus_seed
@check_config_first
@time_program
def corpus_generate(output_dir: Path, n_authors: int, seed: int):
    if (output_dir / "manifest.json").exists():
        console.error(f"{output_dir} already holds a corpus!")
        return ExitCode.data_error

    manifest = generate_corpus(n_authors, seed=seed)
    console.info(f"[+] Writing corpus to {output_dir}")
    save_manifest(manifest, output_dir)
    console.info(
        f"[+] {len(manifest.authors)} authors, {len(manifest.tasks)} tasks, "
        f"{len(manifest.files)} files and {len(manifest.templates)} templates"
    )
