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

# The evaluation pipeline behind ``stylomorph evaluate``.
#
# Files are always attacked with the cross-validation model of the fold that
# held their task out, so the classifier never saw the task it is fooled on.

from dataclasses import dataclass, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .attack import AttackConfig, AttackMode, AttackObjective, NoCandidate, attack, substitute_attack
from .attribution import CvReport, Example, ModelKind, TrainedModel, cross_validate, train
from .config import Config
from .corpus import CorpusFile, CorpusManifest
from .features import FeatureKind, fit_space, normalize_layout
from .lang.program import parse
from .report import ExperimentReport, attack_record
from .term import get_console
from .transform import TemplateProfile, verify
from .utils import derive_seed, pick_index

__all__ = (
    "ExperimentFailure",
    "EvaluationPlan",
    "FoldModels",
    "fold_models",
    "attack_file",
    "untargeted_attacks",
    "targeted_attacks",
    "layout_experiment",
    "substitute_experiment",
    "evaluate",
)

console = get_console()
FoldModels = Dict[str, TrainedModel]


class ExperimentFailure(Exception):
    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Experiment failed: {reason}")


@dataclass(frozen=True)
class EvaluationPlan:
    kinds: Tuple[ModelKind, ...] = (ModelKind.random_forest, ModelKind.linear_softmax)
    targeted_authors: int = 6
    max_files: Optional[int] = None
    untargeted: bool = True
    targeted: bool = True
    layout: bool = True
    substitute: bool = True

    def to_dict(self) -> dict:
        return {
            "kinds": [kind.value for kind in self.kinds],
            "targeted_authors": self.targeted_authors,
            "max_files": self.max_files,
            "untargeted": self.untargeted,
            "targeted": self.targeted,
            "layout": self.layout,
            "substitute": self.substitute,
        }


def fold_models(
    kind: ModelKind, dataset: Sequence[Example], seed: int, selection_cap: int
) -> Tuple[CvReport, FoldModels]:
    """Cross-validate ``kind`` and keep every fold model, keyed by its held out task."""
    tasks = {program.task for program, _ in dataset}
    models: FoldModels = {}

    def trainer(examples: Sequence[Example]) -> TrainedModel:
        model = train(kind, examples, seed=seed, selection_cap=selection_cap)
        (held_out,) = tasks - {program.task for program, _ in examples}
        models[held_out] = model
        return model

    report = cross_validate(kind, dataset, seed, selection_cap, trainer=trainer)
    return report, models


def _correct(model: TrainedModel, manifest: CorpusManifest, item: CorpusFile) -> bool:
    scores = model.predict_scores(manifest.program(item))
    return int(np.argmax(scores)) == manifest.label(item.author).id


def attack_file(
    report: ExperimentReport,
    manifest: CorpusManifest,
    item: CorpusFile,
    model: TrainedModel,
    model_name: str,
    objective: AttackObjective,
    config: AttackConfig,
    fuel: int,
    template: Optional[TemplateProfile] = None,
) -> None:
    program = manifest.program(item)
    inputs = manifest.inputs(item.task)
    target = objective.target.name if objective.target is not None else None
    seeded = replace(config, seed=derive_seed(config.seed, item.path, target or ""))
    result = attack(program, objective, seeded, model, inputs, template, fuel)
    verified = verify(program, result.final_program, inputs, fuel)
    report.add(
        attack_record(
            file=item.path,
            source=item.author,
            target=target,
            mode=objective.mode.value,
            model=model_name,
            template=template is not None,
            original=program,
            result=result,
            space=model.space,
            verified=verified,
        )
    )


def untargeted_attacks(
    report: ExperimentReport,
    manifest: CorpusManifest,
    kind: ModelKind,
    models: FoldModels,
    config: AttackConfig,
    fuel: int,
    max_files: Optional[int] = None,
) -> int:
    """Dodge attacks on every correctly classified file, returns how many ran."""
    attacked = 0
    for item in manifest.files:
        if max_files is not None and attacked >= max_files:
            break
        model = models[item.task]
        if not _correct(model, manifest, item):
            console.log(f"Skipping misclassified {item.path}")
            continue
        console.info(f"[+] Dodging {kind.value} with {item.path}")
        objective = AttackObjective(AttackMode.untargeted, manifest.label(item.author))
        attack_file(report, manifest, item, model, kind.value, objective, config, fuel)
        attacked += 1
    return attacked


def _pair_file(
    manifest: CorpusManifest, models: FoldModels, source: str, target: str, seed: int
) -> Optional[CorpusFile]:
    task_ids = [task.id for task in manifest.tasks]
    start = pick_index(derive_seed(seed, source, target), len(task_ids))
    for offset in range(len(task_ids)):
        item = manifest.file(source, task_ids[(start + offset) % len(task_ids)])
        if _correct(models[item.task], manifest, item):
            return item
    return None


def targeted_attacks(
    report: ExperimentReport,
    manifest: CorpusManifest,
    kind: ModelKind,
    models: FoldModels,
    config: AttackConfig,
    fuel: int,
    with_template: bool,
) -> int:
    """Impersonation attacks over every ordered author pair, one file per pair."""
    attacked = 0
    for source in manifest.labels:
        for target in manifest.labels:
            if source.id == target.id:
                continue
            item = _pair_file(manifest, models, source.name, target.name, config.seed)
            if item is None:
                console.warning(f"No correctly classified file of {source.name}, skipping pair")
                continue
            template = manifest.template_profile(target.name) if with_template else None
            tag = "with" if with_template else "without"
            console.info(f"[+] {source.name} -> {target.name} ({kind.value}, {tag} template)")
            objective = AttackObjective(AttackMode.targeted, source, target)
            attack_file(report, manifest, item, models[item.task], kind.value, objective, config, fuel, template)
            attacked += 1
    return attacked


def _layout_trainer(seed: int, selection_cap: int):
    def trainer(examples: Sequence[Example]) -> TrainedModel:
        programs = [program for program, _ in examples]
        labels = [label.id for _, label in examples]
        space = fit_space(programs, selection_cap, labels=labels, kinds=(FeatureKind.layout,))
        return train(ModelKind.random_forest, examples, space=space, seed=seed)

    return trainer


def layout_experiment(manifest: CorpusManifest, seed: int, selection_cap: int) -> Dict[str, float]:
    """Accuracy of a layout-only forest before and after normalising the layout of every file."""
    dataset = manifest.dataset()
    trainer = _layout_trainer(seed, selection_cap)
    before = cross_validate(ModelKind.random_forest, dataset, seed, selection_cap, trainer=trainer)
    normalized = [
        (parse(normalize_layout(program.source_text), program.author, program.task), label)
        for program, label in dataset
    ]
    after = cross_validate(ModelKind.random_forest, normalized, seed, selection_cap, trainer=trainer)
    return {"before": before.mean, "after": after.mean, "chance": 1.0 / len(manifest.authors)}


def substitute_experiment(
    report: ExperimentReport,
    manifest: CorpusManifest,
    kind: ModelKind,
    config: AttackConfig,
    seed: int,
    selection_cap: int,
    fuel: int,
) -> Dict[str, float]:
    """Attack a substitute model and count how often the result fools the original.

    The last two tasks are attacked; the remaining tasks are split in turn
    between the original and the substitute, so both see disjoint files of
    every author.
    """
    task_ids = [task.id for task in manifest.tasks]
    if len(task_ids) < 4:
        raise ExperimentFailure("the substitute experiment needs at least four tasks")
    attacked_tasks, rest = task_ids[-2:], task_ids[:-2]
    original = train(kind, manifest.dataset(rest[0::2]), seed=seed, selection_cap=selection_cap)
    substitute = train(kind, manifest.dataset(rest[1::2]), seed=seed, selection_cap=selection_cap)

    attempts = candidates = transferred = 0
    for item in manifest.files:
        if item.task not in attacked_tasks or not _correct(original, manifest, item):
            continue
        attempts += 1
        program = manifest.program(item)
        inputs = manifest.inputs(item.task)
        objective = AttackObjective(AttackMode.untargeted, manifest.label(item.author))
        seeded = replace(config, seed=derive_seed(config.seed, item.path, "substitute"))
        console.info(f"[+] Substitute attack on {item.path}")
        try:
            moved, result = substitute_attack(program, objective, seeded, substitute, original, inputs, fuel=fuel)
        except NoCandidate:
            console.log(f"No substitute candidate for {item.path}")
            continue
        candidates += 1
        transferred += moved
        result.success = moved
        report.add(
            attack_record(
                file=item.path,
                source=item.author,
                target=None,
                mode="untargeted",
                model=f"substitute/{kind.value}",
                template=False,
                original=program,
                result=result,
                space=original.space,
                verified=verify(program, result.final_program, inputs, fuel),
            )
        )
    return {
        "attempts": attempts,
        "candidates": candidates,
        "transferred": transferred,
        "transfer_rate": transferred / candidates if candidates else 0.0,
        "end_to_end_rate": transferred / attempts if attempts else 0.0,
        "baseline": 1.0 / len(manifest.authors),
    }


def evaluate(manifest: CorpusManifest, config: Config, plan: EvaluationPlan = EvaluationPlan()) -> ExperimentReport:
    """Run the full evaluation on ``manifest``.

    Raises
    ------
    ExperimentFailure
        When no file could be attacked or a returned success does not verify.
    """
    seed = config.training.seed
    cap = config.features.selection_cap
    fuel = config.interpreter.fuel
    attack_config = AttackConfig.from_section(config.attack, seed)
    snapshot = dict(config.to_dict(), plan=plan.to_dict(), corpus_seed=manifest.seed)
    report = ExperimentReport(config=snapshot, authors=[label.name for label in manifest.labels])

    small = manifest.subset(min(plan.targeted_authors, len(manifest.authors)))
    for kind in plan.kinds:
        cv, models = fold_models(kind, manifest.dataset(), seed, cap)
        report.cv.append(cv.to_dict())
        console.info(f"[+] {kind.value}: {cv.mean:.3f} mean accuracy over {len(cv.per_fold)} folds")
        if plan.untargeted:
            untargeted_attacks(report, manifest, kind, models, attack_config, fuel, plan.max_files)
        if plan.targeted:
            small_models = fold_models(kind, small.dataset(), seed, cap)[1]
            for with_template in (True, False):
                targeted_attacks(report, small, kind, small_models, attack_config, fuel, with_template)

    if plan.layout:
        console.info("[+] Running the layout experiment")
        report.layout = layout_experiment(manifest, seed, cap)
    if plan.substitute:
        console.info("[+] Running the substitute experiment")
        report.substitute = substitute_experiment(report, small, plan.kinds[0], attack_config, seed, cap, fuel)

    if (plan.untargeted or plan.targeted or plan.substitute) and not report.records:
        raise ExperimentFailure("no correctly classified file to attack")
    unverified = [record["file"] for record in report.records if record["success"] and not record["verified"]]
    if unverified:
        raise ExperimentFailure(f"{len(unverified)} successful attack(s) changed the program output")
    return report
