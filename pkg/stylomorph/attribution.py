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

# Authorship attribution: the black-box classifiers the attack runs against.
#
# Two learners are provided, a random forest over lexical and syntactic
# features and a linear softmax over lexical features only. Both are fitted
# with scikit-learn and then frozen into plain arrays, so a model loaded from
# JSON predicts exactly like the freshly trained one.

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from scipy.special import softmax
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import LogisticRegression
from sklearn.model_selection import LeaveOneGroupOut

from ._ntypes import CvReportT
from .features import FeatureKind, FeatureSpace, fit_space, vectorize_many
from .lang.program import SourceProgram
from .term import get_console
from .utils import read_json, write_json

__all__ = (
    "ModelKind",
    "AuthorLabel",
    "DegenerateDataset",
    "InsufficientTasks",
    "ModelFormatError",
    "Classifier",
    "TrainedModel",
    "CvReport",
    "N_TREES",
    "author_labels",
    "train",
    "predict_scores",
    "attribute",
    "cross_validate",
)

console = get_console()
N_TREES = 100
# inverse L2 strength for unit-length rows
SOFTMAX_C = 50.0
Example = Tuple[SourceProgram, "AuthorLabel"]


class ModelKind(str, Enum):
    random_forest = "random_forest"
    linear_softmax = "linear_softmax"


# linear softmax only sees lexical features
FEATURE_KINDS: Dict[ModelKind, Tuple[FeatureKind, ...]] = {
    ModelKind.random_forest: (FeatureKind.lexical, FeatureKind.syntactic),
    ModelKind.linear_softmax: (FeatureKind.lexical,),
}


@dataclass(frozen=True)
class AuthorLabel:
    id: int
    name: str


class DegenerateDataset(ValueError):
    def __init__(self, n_authors: int) -> None:
        self.n_authors = n_authors
        super().__init__(f"Training needs at least two authors, got {n_authors}")


class InsufficientTasks(ValueError):
    def __init__(self, n_tasks: int) -> None:
        self.n_tasks = n_tasks
        super().__init__(f"Cross-validation needs at least two tasks, got {n_tasks}")


class ModelFormatError(ValueError):
    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Invalid model file: {reason}")


class Classifier(Protocol):
    """Anything that maps a program to one score per author."""

    @property
    def n_authors(self) -> int:
        ...

    def predict_scores(self, program: SourceProgram) -> np.ndarray:
        ...


def author_labels(names: Sequence[str]) -> List[AuthorLabel]:
    """Dense labels for the distinct ``names``, numbered in sorted order."""
    return [AuthorLabel(idx, name) for idx, name in enumerate(sorted(set(names)))]


@dataclass
class _Tree:
    """A fitted decision tree as flat arrays, ``leaf`` is -1 on split nodes."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf: np.ndarray

    def predict(self, matrix: np.ndarray) -> np.ndarray:
        rows = np.arange(matrix.shape[0])
        node = np.zeros(matrix.shape[0], dtype=np.int64)
        active = self.leaf[node] < 0
        while active.any():
            current = node[active]
            go_left = matrix[rows[active], self.feature[current]] <= self.threshold[current]
            node[active] = np.where(go_left, self.left[current], self.right[current])
            active = self.leaf[node] < 0
        return self.leaf[node]

    def to_record(self, node: int = 0) -> dict:
        if self.leaf[node] >= 0:
            return {"leaf": int(self.leaf[node])}
        return {
            "feature": int(self.feature[node]),
            "threshold": float(self.threshold[node]),
            "left": self.to_record(int(self.left[node])),
            "right": self.to_record(int(self.right[node])),
        }

    @classmethod
    def from_record(cls, record: dict) -> "_Tree":
        feature: List[int] = []
        threshold: List[float] = []
        left: List[int] = []
        right: List[int] = []
        leaf: List[int] = []

        def visit(item: dict) -> int:
            idx = len(leaf)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            leaf.append(-1)
            if "leaf" in item:
                leaf[idx] = int(item["leaf"])
                return idx
            try:
                feature[idx] = int(item["feature"])
                threshold[idx] = float(item["threshold"])
                left[idx] = visit(item["left"])
                right[idx] = visit(item["right"])
            except KeyError as exc:
                raise ModelFormatError(f"split record without {exc}")
            return idx

        visit(record)
        return cls(
            np.asarray(feature, dtype=np.int64),
            np.asarray(threshold, dtype=float),
            np.asarray(left, dtype=np.int64),
            np.asarray(right, dtype=np.int64),
            np.asarray(leaf, dtype=np.int64),
        )

    @classmethod
    def from_estimator(cls, estimator, classes: np.ndarray) -> "_Tree":
        tree = estimator.tree_
        is_leaf = tree.children_left < 0
        leaf = np.where(is_leaf, classes[np.argmax(tree.value[:, 0, :], axis=1)], -1)
        return cls(
            tree.feature.astype(np.int64),
            tree.threshold.astype(float),
            tree.children_left.astype(np.int64),
            tree.children_right.astype(np.int64),
            leaf.astype(np.int64),
        )


@dataclass
class TrainedModel:
    kind: ModelKind
    space: FeatureSpace
    authors: List[str]
    train_seed: int
    trees: List[_Tree] = field(default_factory=list, repr=False)
    weights: Optional[np.ndarray] = field(default=None, repr=False)
    bias: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n_authors(self) -> int:
        return len(self.authors)

    def label(self, author_id: int) -> AuthorLabel:
        return AuthorLabel(author_id, self.authors[author_id])

    def label_of(self, name: str) -> AuthorLabel:
        try:
            return self.label(self.authors.index(name))
        except ValueError:
            raise KeyError(f"Unknown author `{name}`")

    def scores_of_matrix(self, matrix: np.ndarray) -> np.ndarray:
        if self.kind == ModelKind.random_forest:
            votes = np.zeros((matrix.shape[0], self.n_authors))
            rows = np.arange(matrix.shape[0])
            for tree in self.trees:
                np.add.at(votes, (rows, tree.predict(matrix)), 1.0)
            return votes / len(self.trees)
        logits = matrix @ self.weights.T + self.bias
        return softmax(logits, axis=1)

    def predict_many(self, programs: Sequence[SourceProgram]) -> np.ndarray:
        return self.scores_of_matrix(vectorize_many(programs, self.space))

    def predict_scores(self, program: SourceProgram) -> np.ndarray:
        return self.predict_many([program])[0]

    def to_dict(self) -> dict:
        data = {
            "kind": self.kind.value,
            "authors": list(self.authors),
            "train_seed": self.train_seed,
            "space": self.space.to_dict(),
        }
        if self.kind == ModelKind.random_forest:
            data["trees"] = [tree.to_record() for tree in self.trees]
        else:
            data["weights"] = self.weights.tolist()
            data["bias"] = self.bias.tolist()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TrainedModel":
        try:
            kind = ModelKind(data["kind"])
            model = cls(
                kind=kind,
                space=FeatureSpace.from_dict(data["space"]),
                authors=list(data["authors"]),
                train_seed=int(data["train_seed"]),
            )
            if kind == ModelKind.random_forest:
                model.trees = [_Tree.from_record(record) for record in data["trees"]]
            else:
                model.weights = np.asarray(data["weights"], dtype=float)
                model.bias = np.asarray(data["bias"], dtype=float)
        except (KeyError, ValueError, TypeError) as exc:
            if isinstance(exc, ModelFormatError):
                raise
            raise ModelFormatError(str(exc))
        return model

    def save(self, path: Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: Path) -> "TrainedModel":
        try:
            data = read_json(path)
        except ValueError as exc:
            raise ModelFormatError(f"{path.name} is not JSON: {exc}")
        return cls.from_dict(data)


def _authors_of(dataset: Sequence[Example]) -> List[str]:
    known: Dict[int, str] = {}
    for _, label in dataset:
        known[label.id] = label.name
    size = max(known) + 1
    return [known.get(idx, f"author{idx}") for idx in range(size)]


def train(
    kind: ModelKind,
    dataset: Sequence[Example],
    space: Optional[FeatureSpace] = None,
    seed: int = 0,
    selection_cap: int = 1500,
) -> TrainedModel:
    """Train a classifier, fitting a feature space on ``dataset`` when none is given.

    Raises
    ------
    DegenerateDataset
        With fewer than two distinct authors.
    """
    kind = ModelKind(kind)
    distinct = {label.id for _, label in dataset}
    if len(distinct) < 2:
        raise DegenerateDataset(len(distinct))
    programs = [program for program, _ in dataset]
    targets = np.asarray([label.id for _, label in dataset])
    if space is None:
        space = fit_space(programs, selection_cap, labels=list(targets), kinds=FEATURE_KINDS[kind])
    matrix = vectorize_many(programs, space)
    model = TrainedModel(kind, space, _authors_of(dataset), seed)
    console.log(f"Training {kind.value} on {len(programs)} files, {len(space)} features")
    if kind == ModelKind.random_forest:
        forest = RandomForestClassifier(
            n_estimators=N_TREES,
            criterion="gini",
            max_features="sqrt",
            bootstrap=True,
            random_state=seed,
        )
        forest.fit(matrix, targets)
        model.trees = [_Tree.from_estimator(tree, forest.classes_) for tree in forest.estimators_]
    else:
        linear = LogisticRegression(C=SOFTMAX_C, solver="lbfgs", tol=1e-6, max_iter=5000)
        linear.fit(matrix, targets)
        weights = np.zeros((model.n_authors, len(space)))
        bias = np.zeros(model.n_authors)
        if len(linear.classes_) == 2:
            # binary fits hold a single row, the logit of the second class
            weights[linear.classes_[1]] = linear.coef_[0]
            bias[linear.classes_[1]] = linear.intercept_[0]
        else:
            weights[linear.classes_] = linear.coef_
            bias[linear.classes_] = linear.intercept_
        # authors missing from the training data never win
        missing = np.setdiff1d(np.arange(model.n_authors), linear.classes_)
        bias[missing] = -np.inf
        model.weights, model.bias = weights, bias
    return model


def predict_scores(model: Classifier, program: SourceProgram) -> np.ndarray:
    return model.predict_scores(program)


def attribute(model: TrainedModel, program: SourceProgram) -> AuthorLabel:
    """Most likely author, ties going to the lowest id."""
    return model.label(int(np.argmax(model.predict_scores(program))))


@dataclass
class CvReport:
    kind: ModelKind
    per_fold: List[Tuple[str, float]]

    @property
    def mean(self) -> float:
        return float(np.mean([accuracy for _, accuracy in self.per_fold]))

    @property
    def std(self) -> float:
        return float(np.std([accuracy for _, accuracy in self.per_fold]))

    def to_dict(self) -> CvReportT:
        return {
            "kind": self.kind.value,
            "per_fold": [{"task": task, "accuracy": accuracy} for task, accuracy in self.per_fold],
            "mean": self.mean,
            "std": self.std,
        }


Trainer = Callable[[Sequence[Example]], TrainedModel]


def cross_validate(
    kind: ModelKind,
    dataset: Sequence[Example],
    seed: int = 0,
    selection_cap: int = 1500,
    trainer: Optional[Trainer] = None,
) -> CvReport:
    """Grouped cross-validation with one fold per task.

    Each fold fits its own feature space on the training tasks and tests on
    the files of the held out task. ``trainer`` replaces the default training
    routine.

    Raises
    ------
    InsufficientTasks
        When the dataset spans fewer than two tasks.
    """
    kind = ModelKind(kind)
    groups = np.asarray([program.task for program, _ in dataset])
    tasks = np.unique(groups)
    if len(tasks) < 2:
        raise InsufficientTasks(len(tasks))
    if trainer is None:

        def trainer(examples: Sequence[Example]) -> TrainedModel:
            return train(kind, examples, seed=seed, selection_cap=selection_cap)

    per_fold: List[Tuple[str, float]] = []
    splitter = LeaveOneGroupOut()
    indices = np.arange(len(dataset))
    for fold, (train_idx, test_idx) in enumerate(splitter.split(indices, groups=groups), 1):
        task = str(groups[test_idx[0]])
        console.status(f"Cross-validating {kind.value}: fold {fold}/{len(tasks)} (task {task})...")
        model = trainer([dataset[idx] for idx in train_idx])
        hits = 0
        for idx in test_idx:
            program, label = dataset[idx]
            hits += int(np.argmax(model.predict_scores(program))) == label.id
        per_fold.append((task, hits / len(test_idx)))
    console.stop_status(f"Cross-validated {kind.value} over {len(tasks)} tasks")
    return CvReport(kind, per_fold)
