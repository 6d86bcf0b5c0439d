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

# Check that every corpus file solves its task, optionally under every transformer.

from pathlib import Path
from typing import Tuple

import click
from rich.table import Table

from .. import term
from ..common import task_of
from ..constants import ExitCode
from ..corpus import CorpusFile, CorpusManifest, load_manifest
from ..lang.errors import LangError
from ..lang.interpreter import interpret
from ..transform import TransformError, all_transformers, verify
from ..utils import derive_seed
from . import options
from ._deco import time_program
from .base import StylomorphCommandHandler

__all__ = ("verify_corpus",)
console = term.get_console()


def _check_file(manifest: CorpusManifest, item: CorpusFile, fuel: int) -> bool:
    task = task_of(manifest, item.task)
    try:
        output = interpret(manifest.program(item), task.test_input, fuel)
    except LangError as exc:
        console.log(f"{item.path}: {exc}")
        return False
    return output.exit_code == 0 and output.stdout_text == task.expected_output


def _check_catalog(manifest: CorpusManifest, item: CorpusFile, fuel: int) -> Tuple[int, int]:
    """Apply every applicable transformer once and count the applications that keep the output."""
    program = manifest.program(item)
    inputs = [task_of(manifest, item.task).test_input]
    passed = applied = 0
    for transformer in all_transformers():
        if not transformer.list_applicable(program):
            continue
        site_seed = derive_seed(item.path, transformer.ID)
        try:
            transformed = transformer.apply(program, site_seed).program
        except TransformError as exc:
            console.log(f"{transformer.ID} failed on {item.path}: {exc}")
            applied += 1
            continue
        applied += 1
        if verify(program, transformed, inputs, fuel):
            passed += 1
        else:
            console.warning(f"{transformer.ID} changed the output of {item.path}")
    return passed, applied


@click.command(
    "verify",
    help="Run every corpus file on its task input and compare with the expected output",
    cls=StylomorphCommandHandler,
)
@options.corpus_dir
@click.option(
    "-c",
    "--catalog",
    "catalog",
    is_flag=True,
    default=False,
    help="Also apply every transformer to every file and check the output is unchanged",
)
@options.fuel
@time_program
def verify_corpus(corpus_dir: Path, catalog: bool, fuel: int):
    manifest = load_manifest(corpus_dir)
    items = manifest.files + manifest.templates

    passed = 0
    catalog_passed = catalog_applied = 0
    for idx, item in enumerate(items, 1):
        console.status(f"Verifying {item.path} ({idx}/{len(items)})...")
        if _check_file(manifest, item, fuel):
            passed += 1
        else:
            console.warning(f"{item.path} does not solve `{item.task}`")
        if catalog:
            ok, applied = _check_catalog(manifest, item, fuel)
            catalog_passed += ok
            catalog_applied += applied
    console.stop_status(f"Verified {len(items)} files")

    table = Table(title=corpus_dir.name)
    table.add_column("Check")
    table.add_column("Passed", justify="right")
    table.add_column("Total", justify="right")
    table.add_column("Rate", justify="right")
    table.add_row("files", str(passed), str(len(items)), f"{passed / len(items):.1%}" if items else "-")
    if catalog:
        rate = f"{catalog_passed / catalog_applied:.1%}" if catalog_applied else "-"
        table.add_row("transformers", str(catalog_passed), str(catalog_applied), rate)
    console.table(table)

    if passed != len(items) or catalog_passed != catalog_applied:
        return ExitCode.experiment_failure
