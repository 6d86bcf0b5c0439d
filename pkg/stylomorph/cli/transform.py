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

# Apply a transformation sequence to a source file.

from pathlib import Path
from typing import List, Optional, Tuple

import click

from .. import term
from ..common import load_template, read_program, read_source
from ..constants import ExitCode
from ..transform import TransformationSequence, run_sequence, verify
from ..utils import read_json
from . import options
from .base import StylomorphCommandHandler

__all__ = ("transform_file",)
console = term.get_console()


def _read_sequence(path: Path) -> TransformationSequence:
    try:
        data = read_json(path)
        if isinstance(data, dict):
            data = data["sequence"]
        return TransformationSequence.from_list(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise click.BadParameter(f"{path.name} does not hold a sequence: {exc}", param_hint="--sequence")


@click.command(
    "transform",
    help="Apply transformation steps to a source file and print or save the result",
    cls=StylomorphCommandHandler,
)
@options.source_file
@click.option(
    "-t",
    "--step",
    "steps",
    type=options.STEP,
    multiple=True,
    help="A step as `transformer:seed`, can be repeated",
)
@click.option(
    "-sq",
    "--sequence",
    "sequence_file",
    type=click.Path(exists=True, resolve_path=True, file_okay=True, dir_okay=False, path_type=Path),
    default=None,
    help="JSON file with a list of steps, or an attack record holding one",
)
@options.template_dir
@click.option(
    "--no-defaults",
    "no_defaults",
    is_flag=True,
    default=False,
    help="Skip template transformers instead of falling back to default values",
)
@click.option(
    "-i",
    "--input",
    "input_files",
    type=click.Path(exists=True, resolve_path=True, file_okay=True, dir_okay=False, path_type=Path),
    multiple=True,
    help="Check the output is unchanged on this input, can be repeated",
)
@click.option(
    "-o",
    "--output",
    "output_file",
    type=click.Path(resolve_path=True, file_okay=True, dir_okay=False, path_type=Path),
    default=None,
    help="Write the result here instead of printing it",
)
@options.fuel
def transform_file(
    source_file: Path,
    steps: Tuple[Tuple[str, int], ...],
    sequence_file: Optional[Path],
    template_dir: Optional[Path],
    no_defaults: bool,
    input_files: Tuple[Path, ...],
    output_file: Optional[Path],
    fuel: int,
):
    sequence = _read_sequence(sequence_file) if sequence_file is not None else TransformationSequence()
    for transformer_id, site_seed in steps:
        sequence = sequence.then(transformer_id, site_seed)
    if not len(sequence):
        console.error("Nothing to apply, give at least one --step or a --sequence")
        return ExitCode.usage

    program = read_program(source_file)
    template = load_template(template_dir) if template_dir is not None else None
    run = run_sequence(sequence, program, template, defaults=not no_defaults)
    for transformer_id, site_seed in run.skipped:
        console.log(f"Skipped {transformer_id}:{site_seed}, no applicable site")
    console.log(f"Applied {len(run.executed)} of {len(sequence)} steps")

    inputs: List[str] = [read_source(path) for path in input_files]
    if inputs and not verify(program, run.program, inputs, fuel):
        console.error("The transformed program changes the output!")
        return ExitCode.experiment_failure

    if output_file is None:
        click.echo(run.program.source_text, nl=False)
    else:
        output_file.parent.mkdir(parents=True, exist_ok=True)
        output_file.write_text(run.program.source_text, encoding="utf-8")
        console.info(f"[+] Written to {output_file}")
