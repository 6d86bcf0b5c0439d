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

# Run the full evaluation on a corpus and write the experiment report.

from dataclasses import replace
from pathlib import Path
from typing import Optional, Tuple

import click
from rich.table import Table

from .. import term
from ..attribution import ModelKind
from ..config import get_config
from ..corpus import load_manifest
from ..experiment import EvaluationPlan, evaluate
from . import options
from ._deco import check_config_first, time_program
from .base import StylomorphCommandHandler

__all__ = ("evaluate_corpus",)
console = term.get_console()
STAGES = ("untargeted", "targeted", "layout", "substitute")


@click.command(
    "evaluate",
    help="Cross-validate, attack and write the experiment report for a corpus",
    cls=StylomorphCommandHandler,
)
@options.corpus_dir
@click.option(
    "-r",
    "--report",
    "report_dir",
    required=True,
    type=click.Path(resolve_path=True, file_okay=False, dir_okay=True, path_type=Path),
    help="Directory the report files are written to",
)
@click.option(
    "-k",
    "--kind",
    "kinds",
    type=click.Choice([kind.value for kind in ModelKind]),
    multiple=True,
    help="Only evaluate these classifiers, can be repeated",
)
@click.option(
    "-ta",
    "--targeted-authors",
    "targeted_authors",
    type=click.IntRange(min=2),
    default=6,
    show_default=True,
    help="Size of the sub-corpus used for the targeted and substitute experiments",
)
@click.option(
    "-mf",
    "--max-files",
    "max_files",
    type=click.IntRange(min=1),
    default=None,
    help="Attack at most this many files per classifier in the untargeted experiment",
)
@click.option(
    "--skip",
    "skipped",
    type=click.Choice(STAGES),
    multiple=True,
    help="Skip an experiment stage, can be repeated",
)
@options.training_seed
@options.max_moves
@check_config_first
@time_program
def evaluate_corpus(
    corpus_dir: Path,
    report_dir: Path,
    kinds: Tuple[str, ...],
    targeted_authors: int,
    max_files: Optional[int],
    skipped: Tuple[str, ...],
    seed: int,
    max_moves: int,
):
    manifest = load_manifest(corpus_dir)
    config = get_config()
    config = replace(
        config,
        attack=replace(config.attack, max_outer_moves=max_moves),
        training=replace(config.training, seed=seed),
    )
    plan = EvaluationPlan(
        kinds=tuple(ModelKind(kind) for kind in kinds) or EvaluationPlan().kinds,
        targeted_authors=targeted_authors,
        max_files=max_files,
        **{stage: stage not in skipped for stage in STAGES},
    )
    report = evaluate(manifest, config, plan)
    written = report.write(report_dir)

    table = Table(title="Success rates")
    table.add_column("Setting")
    table.add_column("Rate", justify="right")
    for setting, rate in report.success_rates().items():
        table.add_row(setting, "-" if rate is None else f"{rate:.1%}")
    console.table(table)
    for cv in report.cv:
        console.info(f"[+] {cv['kind']} cross-validation accuracy: {cv['mean']:.3f} (std {cv['std']:.3f})")
    if report.layout:
        console.info(
            f"[+] Layout-only accuracy: {report.layout['before']:.3f} before, "
            f"{report.layout['after']:.3f} after normalisation"
        )
    if report.substitute:
        console.info(f"[+] Substitute transfer rate: {report.substitute['transfer_rate']:.3f}")
    console.info(f"[+] Wrote {len(written)} report files to {report_dir}")
