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

# Attack an attribution model with a single corpus file.

from dataclasses import replace
from pathlib import Path
from typing import Optional

import click
import numpy as np

from .. import term
from ..attack import AttackConfig, AttackMode, AttackObjective, InvalidObjective, NoCandidate, attack, substitute_attack
from ..attribution import TrainedModel
from ..common import load_template, locate_corpus_file, task_of
from ..config import get_config
from ..constants import ATTACK_FLAGS, ExitCode
from ..corpus import load_manifest
from ..report import ExperimentReport, attack_record
from ..transform import verify
from . import options
from ._deco import time_program
from .base import StylomorphCommandHandler

__all__ = ("attack_corpus_file",)
console = term.get_console()


@click.command(
    "attack",
    help="Transform a corpus file until the model attributes it to another author",
    cls=StylomorphCommandHandler,
)
@options.corpus_dir
@options.model_file
@options.source_file
@click.option(
    "-m",
    "--mode",
    "mode",
    type=options.ATTACK_FLAG,
    default="dodge",
    show_default=True,
    help="; ".join(f"{name}: {flag.description}" for name, flag in ATTACK_FLAGS.items()),
)
@click.option(
    "-t",
    "--target",
    "target",
    default=None,
    help="The author to impersonate",
)
@options.template_dir
@click.option(
    "-sub",
    "--substitute",
    "substitute_file",
    type=click.Path(exists=True, resolve_path=True, file_okay=True, dir_okay=False, path_type=Path),
    default=None,
    help="Attack this substitute model and check the result against MODEL_FILE",
)
@options.training_seed
@options.max_moves
@options.fuel
@options.report_dir
@time_program
def attack_corpus_file(
    corpus_dir: Path,
    model_file: Path,
    source_file: Path,
    mode: str,
    target: Optional[str],
    template_dir: Optional[Path],
    substitute_file: Optional[Path],
    seed: int,
    max_moves: int,
    fuel: int,
    report_dir: Optional[Path],
):
    manifest = load_manifest(corpus_dir)
    model = TrainedModel.load(model_file)
    item, program = locate_corpus_file(manifest, corpus_dir, source_file)

    try:
        source = model.label_of(item.author)
    except KeyError:
        console.error(f"The model does not know the author `{item.author}`")
        return ExitCode.data_error
    attack_mode = AttackMode(ATTACK_FLAGS[mode].mode)
    target_label = None
    if attack_mode == AttackMode.targeted:
        if target is None:
            raise click.UsageError("--target is required with --mode impersonate")
        try:
            target_label = model.label_of(target)
        except KeyError:
            raise click.BadParameter(f"{target!r} is not an author of the model", param_hint="--target")
    try:
        objective = AttackObjective(attack_mode, source, target_label)
    except InvalidObjective as exc:
        raise click.BadParameter(str(exc), param_hint="--target")

    config = get_config()
    attack_config = replace(AttackConfig.from_section(config.attack, seed), max_outer_moves=max_moves)
    template = load_template(template_dir) if template_dir is not None else None
    inputs = [task_of(manifest, item.task).test_input]

    if substitute_file is not None:
        substitute = TrainedModel.load(substitute_file)
        try:
            transferred, result = substitute_attack(
                program, objective, attack_config, substitute, model, inputs, template, fuel
            )
        except NoCandidate as exc:
            console.error(str(exc))
            return ExitCode.experiment_failure
        console.info(f"[+] Substitute candidate transfers to the original model: {transferred}")
        result.success = transferred
    else:
        result = attack(program, objective, attack_config, model, inputs, template, fuel)

    predicted = model.label(int(np.argmax(model.predict_scores(result.final_program))))
    status = "Success" if result.success else "Failed"
    console.info(f"[+] {status}: {item.path} is now attributed to {predicted.name}")
    console.info(
        f"[+] {len(result.sequence)} step(s), {result.queries} queries, {result.outer_moves} outer move(s), "
        f"best score {result.best_score:.4f}"
    )
    for transformer_id, site_seed in result.sequence:
        console.log(f"  {transformer_id}:{site_seed}")

    if report_dir is not None:
        snapshot = dict(config.to_dict(), attack=attack_config.to_dict())
        snapshot["interpreter"] = {"fuel": fuel}
        report = ExperimentReport(config=snapshot, authors=list(model.authors))
        report.add(
            attack_record(
                file=item.path,
                source=source.name,
                target=target_label.name if target_label is not None else None,
                mode=attack_mode.value,
                model=model.kind.value if substitute_file is None else f"substitute/{model.kind.value}",
                template=template is not None,
                original=program,
                result=result,
                space=model.space,
                verified=verify(program, result.final_program, inputs, fuel),
            )
        )
        report.write(report_dir)
        attacked = report_dir / f"{Path(item.path).stem}.attacked.mc"
        attacked.write_text(result.final_program.source_text, encoding="utf-8")
        console.info(f"[+] Report written to {report_dir}")
