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

import json

import numpy as np
import pytest

from stylomorph.attribution import (
    FEATURE_KINDS,
    AuthorLabel,
    DegenerateDataset,
    InsufficientTasks,
    ModelFormatError,
    ModelKind,
    TrainedModel,
    attribute,
    author_labels,
    cross_validate,
    train,
)
from stylomorph.features import FeatureKind, FeatureSpace

PROPERTY_CASES = 1000


def _accuracy(model, dataset):
    hits = sum(int(np.argmax(model.predict_scores(program))) == label.id for program, label in dataset)
    return hits / len(dataset)


class TestTrain:
    def test_forest_scores_are_votes(self, forest_model, small_corpus):
        program, _ = small_corpus.dataset()[0]
        scores = forest_model.predict_scores(program)
        assert scores.shape == (4,)
        assert np.isclose(scores.sum(), 1.0)
        assert forest_model.trees
        # hard votes of every tree
        assert np.allclose(scores * len(forest_model.trees), np.round(scores * len(forest_model.trees)))

    def test_softmax_scores(self, softmax_model, small_corpus):
        program, _ = small_corpus.dataset()[0]
        scores = softmax_model.predict_scores(program)
        assert np.isclose(scores.sum(), 1.0)
        assert (scores > 0).all()
        assert softmax_model.weights.shape == (4, len(softmax_model.space))

    def test_feature_kinds(self, forest_model, softmax_model):
        assert softmax_model.space.kinds == FEATURE_KINDS[ModelKind.linear_softmax]
        assert all(name.startswith("lexical.") for name in softmax_model.space.names)
        assert FeatureKind.syntactic in forest_model.space.kinds

    def test_fits_training_data(self, forest_model, softmax_model, small_corpus):
        dataset = small_corpus.dataset()
        assert _accuracy(forest_model, dataset) >= 0.75
        assert _accuracy(softmax_model, dataset) >= 0.5

    def test_deterministic(self, small_corpus, forest_model):
        again = train(ModelKind.random_forest, small_corpus.dataset(), seed=0, selection_cap=300)
        programs = [program for program, _ in small_corpus.dataset()]
        assert np.array_equal(again.predict_many(programs), forest_model.predict_many(programs))

    def test_single_author(self, small_corpus):
        dataset = [example for example in small_corpus.dataset() if example[1].id == 0]
        with pytest.raises(DegenerateDataset):
            train(ModelKind.random_forest, dataset)

    def test_labels(self, forest_model):
        assert forest_model.authors == ["author00", "author01", "author02", "author03"]
        assert forest_model.label_of("author02") == AuthorLabel(2, "author02")
        with pytest.raises(KeyError):
            forest_model.label_of("nobody")

    def test_attribute(self, forest_model, small_corpus):
        program, _ = small_corpus.dataset()[0]
        label = attribute(forest_model, program)
        assert label.id == int(np.argmax(forest_model.predict_scores(program)))

    def test_author_labels(self):
        assert author_labels(["b", "a", "b"]) == [AuthorLabel(0, "a"), AuthorLabel(1, "b")]


def _linear(weights, bias):
    space = FeatureSpace([f"lexical.t{idx}" for idx in range(weights.shape[1])], [1] * weights.shape[1], 2)
    model = TrainedModel(ModelKind.linear_softmax, space, [f"author{idx:02d}" for idx in range(len(bias))], 0)
    model.weights, model.bias = weights, np.asarray(bias, dtype=float)
    return model


class TestScores:
    @pytest.mark.parametrize("fixture", ["forest_model", "softmax_model"])
    def test_every_prediction_is_a_distribution(self, fixture, request):
        model = request.getfixturevalue(fixture)
        rng = np.random.default_rng(7)
        matrix = rng.random((PROPERTY_CASES, len(model.space)))
        matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
        scores = model.scores_of_matrix(matrix)
        assert scores.shape == (PROPERTY_CASES, model.n_authors)
        assert np.allclose(scores.sum(axis=1), 1.0)
        assert ((scores >= 0) & (scores <= 1)).all()

    def test_zero_logits_are_uniform(self, small_corpus):
        model = _linear(np.zeros((4, 3)), [0.0, 0.0, 0.0, 0.0])
        program, _ = small_corpus.dataset()[0]
        assert np.allclose(model.predict_scores(program), 0.25)

    def test_ties_go_to_the_lowest_id(self, small_corpus):
        model = _linear(np.zeros((2, 3)), [0.0, 0.0])
        program, _ = small_corpus.dataset()[0]
        assert np.allclose(model.predict_scores(program), [0.5, 0.5])
        assert attribute(model, program).id == 0

    def test_argmax_survives_scaling(self):
        rng = np.random.default_rng(3)
        weights = rng.normal(size=(5, 8))
        bias = rng.normal(size=5)
        matrix = rng.random((PROPERTY_CASES, 8))
        base = _linear(weights, bias).scores_of_matrix(matrix).argmax(axis=1)
        for factor in (0.5, 3.0, 40.0):
            scaled = _linear(weights * factor, bias * factor).scores_of_matrix(matrix)
            assert np.array_equal(scaled.argmax(axis=1), base)


class TestPersistence:
    @pytest.mark.parametrize("fixture", ["forest_model", "softmax_model"])
    def test_save_and_load(self, fixture, request, small_corpus, tmp_path):
        model = request.getfixturevalue(fixture)
        path = tmp_path / "model.json"
        model.save(path)
        restored = TrainedModel.load(path)
        assert restored.kind == model.kind
        assert restored.authors == model.authors
        programs = [program for program, _ in small_corpus.dataset()]
        assert np.allclose(restored.predict_many(programs), model.predict_many(programs))

    def test_not_json(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("this is not a model", encoding="utf-8")
        with pytest.raises(ModelFormatError):
            TrainedModel.load(path)

    def test_missing_fields(self, forest_model, tmp_path):
        data = forest_model.to_dict()
        del data["space"]
        path = tmp_path / "model.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(ModelFormatError):
            TrainedModel.load(path)

    def test_broken_tree(self, forest_model):
        data = forest_model.to_dict()
        data["trees"][0] = {"feature": 0, "threshold": 0.5, "left": {"leaf": 0}}
        with pytest.raises(ModelFormatError):
            TrainedModel.from_dict(data)


class TestCrossValidation:
    def test_one_fold_per_task(self, small_corpus):
        report = cross_validate(ModelKind.linear_softmax, small_corpus.dataset(), seed=0, selection_cap=300)
        assert [task for task, _ in report.per_fold] == sorted(task.id for task in small_corpus.tasks)
        assert 0.0 <= report.mean <= 1.0
        data = report.to_dict()
        assert data["kind"] == "linear_softmax"
        assert len(data["per_fold"]) == len(small_corpus.tasks)

    def test_held_out_task_is_unseen(self, small_corpus):
        seen = []

        def trainer(examples):
            seen.append({program.task for program, _ in examples})
            return train(ModelKind.linear_softmax, examples, selection_cap=100)

        cross_validate(ModelKind.linear_softmax, small_corpus.dataset(), trainer=trainer)
        all_tasks = {task.id for task in small_corpus.tasks}
        assert len(seen) == len(all_tasks)
        assert all(len(all_tasks - tasks) == 1 for tasks in seen)

    def test_single_task(self, small_corpus):
        task = small_corpus.tasks[0].id
        with pytest.raises(InsufficientTasks):
            cross_validate(ModelKind.linear_softmax, small_corpus.dataset([task]))
