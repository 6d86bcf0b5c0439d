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

from dataclasses import replace

import numpy as np
import pytest

from stylomorph.attack import AttackConfig
from stylomorph.attribution import ModelKind
from stylomorph.config import Config
from stylomorph.corpus import generate_corpus, get_task
from stylomorph.experiment import (
    EvaluationPlan,
    ExperimentFailure,
    evaluate,
    fold_models,
    layout_experiment,
    substitute_experiment,
)
from stylomorph.report import ExperimentReport


def _tiny_config() -> Config:
    config = Config()
    return replace(
        config,
        features=replace(config.features, selection_cap=100),
        attack=replace(config.attack, max_seq_len=2, sims_per_iter=3, inner_iters=2, max_outer_moves=2, patience=1),
    )


class TestFoldModels:
    def test_one_model_per_held_out_task(self, small_corpus):
        cv, models = fold_models(ModelKind.linear_softmax, small_corpus.dataset(), seed=0, selection_cap=100)
        assert set(models) == {task.id for task in small_corpus.tasks}
        assert len(cv.per_fold) == len(models)


class TestSubstitute:
    def test_needs_four_tasks(self):
        manifest = generate_corpus(2, tasks=[get_task(task) for task in ("sum_pairs", "sorting", "gcd_pairs")], seed=1)
        report = ExperimentReport(config={}, authors=[label.name for label in manifest.labels])
        with pytest.raises(ExperimentFailure):
            substitute_experiment(report, manifest, ModelKind.linear_softmax, AttackConfig(), 0, 100, 10_000)


class TestPlan:
    def test_to_dict(self):
        plan = EvaluationPlan(kinds=(ModelKind.linear_softmax,), max_files=3, layout=False)
        data = plan.to_dict()
        assert data["kinds"] == ["linear_softmax"]
        assert data["max_files"] == 3
        assert data["layout"] is False
        assert data["targeted_authors"] == 6


@pytest.mark.slow
class TestEvaluate:
    def test_layout_experiment(self, small_corpus):
        result = layout_experiment(small_corpus, seed=0, selection_cap=100)
        assert result["chance"] == pytest.approx(0.25)
        assert result["after"] <= 2 * result["chance"]
        assert result["after"] < result["before"]

    def test_small_run(self, small_corpus, tmp_path):
        plan = EvaluationPlan(
            kinds=(ModelKind.linear_softmax,), targeted_authors=2, max_files=2, layout=False, substitute=False
        )
        report = evaluate(small_corpus, _tiny_config(), plan)
        assert len(report.cv) == 1
        assert report.records
        assert all(record["verified"] for record in report.records if record["success"])
        assert report.config["plan"]["max_files"] == 2
        assert len(report.select("untargeted")) <= 2
        report.write(tmp_path)
        assert ExperimentReport.read(tmp_path).aggregates() == report.aggregates()


@pytest.fixture(scope="module")
def default_report():
    config = Config()
    manifest = generate_corpus(config.corpus.n_authors, seed=config.corpus.seed)
    return evaluate(manifest, config)


def _loc_totals(report, model):
    return [sum(record["loc_diff"].values()) for record in report.select("untargeted", model, success=True)]


@pytest.mark.slow
class TestDefaultCorpus:
    def test_attribution(self, default_report):
        accuracy = {cv["kind"]: cv["mean"] for cv in default_report.cv}
        assert accuracy["random_forest"] >= 0.80
        assert accuracy["linear_softmax"] >= 0.70
        assert min(accuracy.values()) >= 5 / 12

    def test_untargeted(self, default_report):
        rates = default_report.success_rates()
        for kind in ModelKind:
            assert rates[f"untargeted/{kind.value}"] >= 0.90

    def test_targeted(self, default_report):
        rates = default_report.success_rates()
        for kind in ModelKind:
            assert rates[f"targeted+template/{kind.value}"] >= 0.50
            assert rates[f"targeted-template/{kind.value}"] >= 0.35

    def test_small_diffs(self, default_report):
        assert default_report.aggregates()["median_loc_diff"] <= 10
        for kind in ModelKind:
            assert np.median(_loc_totals(default_report, kind.value)) <= 10

    def test_every_success_verifies(self, default_report):
        assert all(record["verified"] for record in default_report.select(success=True))

    def test_layout(self, default_report):
        layout = default_report.layout
        assert layout["chance"] == pytest.approx(1 / 12)
        assert layout["after"] <= 2 * layout["chance"]
        assert layout["after"] <= layout["before"] / 3

    def test_substitute(self, default_report):
        substitute = default_report.substitute
        assert substitute["candidates"] > 0
        assert substitute["transfer_rate"] > substitute["baseline"]
