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

# Stylometric features of MiniC programs.
#
# Three kinds of features are extracted: layout features from the raw text,
# lexical features from the lexems and syntactic features from the syntax tree.
# A :class:`FeatureSpace` fixes the dimensions after fitting on a corpus and
# maps programs to TF-IDF weighted, L2 normalised vectors.

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.feature_extraction import DictVectorizer
from sklearn.feature_selection import mutual_info_classif
from sklearn.preprocessing import normalize

from .lang.ast import iter_children, walk
from .lang.printer import pretty_print
from .lang.program import SourceProgram, parse
from .lang.tokens import TokenKind, tokenize
from .term import get_console
from .utils import read_json, write_json

__all__ = (
    "FeatureKind",
    "EmptyCorpus",
    "SpaceMismatch",
    "FeatureSpace",
    "FeatureVector",
    "CHANGE_TOLERANCE",
    "ATTACKABLE_KINDS",
    "extract_layout",
    "extract_lexical",
    "extract_syntactic",
    "extract_features",
    "fit_space",
    "vectorize",
    "vectorize_many",
    "normalize_layout",
    "changed_feature_ratio",
    "loc_diff",
)

console = get_console()
CHANGE_TOLERANCE = 1e-12
_LEXICAL_KINDS = (TokenKind.keyword, TokenKind.identifier, TokenKind.punctuator)
_STRING_RE = re.compile(r'"(?:\\.|[^"\\\n])*"|\'(?:\\.|[^\'\\\n])*\'')
_TAB_COLUMNS = 4
_SPACED_OPERATORS = frozenset(("=", "+=", "-=", "*=", "/=", "%=", "==", "!=", "<=", ">=", "&&", "||", "<<"))
_DEPTH_FEATURES = frozenset(("syntactic.max_depth", "syntactic.mean_leaf_depth"))


class FeatureKind(str, Enum):
    layout = "layout"
    lexical = "lexical"
    syntactic = "syntactic"


# layout stays out of the attacked space, it is only used by the layout experiment
ATTACKABLE_KINDS: Tuple[FeatureKind, ...] = (FeatureKind.lexical, FeatureKind.syntactic)


class EmptyCorpus(ValueError):
    def __init__(self) -> None:
        super().__init__("Cannot fit a feature space on an empty corpus")


class SpaceMismatch(ValueError):
    def __init__(self) -> None:
        super().__init__("Feature vectors belong to different feature spaces")


def _indent_columns(line: str) -> int:
    columns = 0
    for char in line:
        if char == " ":
            columns += 1
        elif char == "\t":
            columns += _TAB_COLUMNS
        else:
            break
    return columns


def _next_content(lines: List[str]) -> List[str]:
    following = [""] * len(lines)
    upcoming = ""
    for idx in range(len(lines) - 1, -1, -1):
        following[idx] = upcoming
        if lines[idx].strip():
            upcoming = lines[idx]
    return following


def _operator_spacing(source: str) -> float:
    """Share of assignment, comparison, logical and stream operators with blanks on both sides."""
    tokens = tokenize(source)
    spaced = total = 0
    for idx, token in enumerate(tokens):
        if token.kind is not TokenKind.punctuator or token.text not in _SPACED_OPERATORS:
            continue
        total += 1
        before = tokens[idx - 1] if idx else None
        after = tokens[idx + 1] if idx + 1 < len(tokens) else None
        if all(other is not None and other.kind is TokenKind.whitespace for other in (before, after)):
            spaced += 1
    return spaced / total if total else 0.0


def extract_layout(source: str) -> Dict[str, float]:
    """Indentation, brace, comment, blank line and spacing habits of the raw text.

    Every value is a ratio or a width, none of them grows with the names or the
    amount of code in the file.
    """
    bag = {
        "layout.tab_ratio": 0.0,
        "layout.indent_width": 0.0,
        "layout.brace_same_line": 0.0,
        "layout.line_comment_ratio": 0.0,
        "layout.blank_line_density": 0.0,
        "layout.operator_spacing": 0.0,
    }
    lines = source.splitlines()
    if not lines:
        return bag
    content = [line for line in lines if line.strip()]
    indented = [line for line in content if line[0] in " \t"]
    if indented:
        bag["layout.tab_ratio"] = sum("\t" in line[: len(line) - len(line.lstrip())] for line in indented) / len(
            indented
        )
    steps = []
    previous = 0
    for line in content:
        current = _indent_columns(line)
        if current > previous:
            steps.append(current - previous)
        previous = current
    if steps:
        bag["layout.indent_width"] = float(np.mean(steps))
    braces = [line for line in content if "{" in _STRING_RE.sub('""', line)]
    if braces:
        bag["layout.brace_same_line"] = sum(line.strip() != "{" for line in braces) / len(braces)
    stripped = _STRING_RE.sub('""', source)
    line_comments = stripped.count("//")
    block_comments = stripped.count("/*")
    if line_comments + block_comments:
        bag["layout.line_comment_ratio"] = line_comments / (line_comments + block_comments)
    # only blank lines inside a body, the ones between top-level items are fixed
    interior = sum(
        not line.strip() and following[:1] in (" ", "\t") for line, following in zip(lines, _next_content(lines))
    )
    bag["layout.blank_line_density"] = interior / len(lines)
    bag["layout.operator_spacing"] = _operator_spacing(source)
    return bag


def extract_lexical(program: SourceProgram) -> Dict[str, float]:
    counts = Counter(
        f"lexical.{token.text}" for token in tokenize(program.source_text) if token.kind in _LEXICAL_KINDS
    )
    return dict(counts)


def extract_syntactic(program: SourceProgram) -> Dict[str, float]:
    """Node kind unigrams, parent to child bigrams and the depth profile of the tree."""
    counts: Counter = Counter()
    depths: Dict[int, int] = {program.ast.nid: 1}
    leaf_depths: List[int] = []
    for node in walk(program.ast):
        counts[f"syntactic.node.{node.kind}"] += 1
        children = list(iter_children(node))
        if not children:
            leaf_depths.append(depths[node.nid])
        for child in children:
            counts[f"syntactic.edge.{node.kind}>{child.kind}"] += 1
            depths[child.nid] = depths[node.nid] + 1
    bag: Dict[str, float] = dict(counts)
    bag["syntactic.max_depth"] = float(max(depths.values()))
    bag["syntactic.mean_leaf_depth"] = float(np.mean(leaf_depths))
    return bag


_EXTRACTORS = {
    FeatureKind.lexical: extract_lexical,
    FeatureKind.syntactic: extract_syntactic,
}


def extract_features(program: SourceProgram, kinds: Iterable[FeatureKind] = ATTACKABLE_KINDS) -> Dict[str, float]:
    """Merged feature bag of ``program``, zero entries dropped."""
    bag: Dict[str, float] = {}
    for kind in kinds:
        if kind == FeatureKind.layout:
            bag.update(extract_layout(program.source_text))
        else:
            bag.update(_EXTRACTORS[kind](program))
    return {name: value for name, value in bag.items() if value != 0}


def _is_discrete(name: str) -> bool:
    return _kind_of(name) != FeatureKind.layout and name not in _DEPTH_FEATURES


def _kind_of(name: str) -> FeatureKind:
    return FeatureKind(name.split(".", 1)[0])


@dataclass
class FeatureSpace:
    names: List[str]
    dfs: List[int]
    corpus_size: int
    kinds: Tuple[FeatureKind, ...] = ATTACKABLE_KINDS

    def __len__(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {name: idx for idx, name in enumerate(self.names)}

    @cached_property
    def weights(self) -> np.ndarray:
        """Smoothed idf for counted features, 1 for layout ratios."""
        dfs = np.asarray(self.dfs, dtype=float)
        idf = np.log((1.0 + self.corpus_size) / (1.0 + dfs)) + 1.0
        layout = np.array([_kind_of(name) == FeatureKind.layout for name in self.names], dtype=bool)
        idf[layout] = 1.0
        return idf

    def kind_of(self, name: str) -> FeatureKind:
        return _kind_of(name)

    def same_as(self, other: "FeatureSpace") -> bool:
        return self is other or (self.names == other.names and self.dfs == other.dfs)

    def to_dict(self) -> dict:
        return {
            "dims": [[name, _kind_of(name).value, df] for name, df in zip(self.names, self.dfs)],
            "corpus_size": self.corpus_size,
            "kinds": [kind.value for kind in self.kinds],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureSpace":
        dims = data["dims"]
        return cls(
            names=[name for name, _, _ in dims],
            dfs=[int(df) for _, _, df in dims],
            corpus_size=int(data["corpus_size"]),
            kinds=tuple(FeatureKind(kind) for kind in data.get("kinds", [k.value for k in ATTACKABLE_KINDS])),
        )

    def save(self, path: Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: Path) -> "FeatureSpace":
        return cls.from_dict(read_json(path))


@dataclass
class FeatureVector:
    values: np.ndarray
    space: FeatureSpace = field(repr=False)

    def __len__(self) -> int:
        return len(self.values)

    def as_dict(self) -> Dict[str, float]:
        return {self.space.names[idx]: float(self.values[idx]) for idx in np.flatnonzero(self.values)}


def fit_space(
    corpus: Sequence[SourceProgram],
    selection_cap: int = 1500,
    labels: Optional[Sequence[object]] = None,
    kinds: Iterable[FeatureKind] = ATTACKABLE_KINDS,
) -> FeatureSpace:
    """Fit the dimensions of a feature space on ``corpus``.

    Features seen only once in the whole corpus are dropped, the rest is
    ranked by mutual information with the author label and the best
    ``selection_cap`` are kept, ordered by name.

    Raises
    ------
    EmptyCorpus
        When ``corpus`` holds no program.
    """
    if not corpus:
        raise EmptyCorpus()
    kinds = tuple(kinds)
    if labels is None:
        labels = [program.author for program in corpus]
    bags = [extract_features(program, kinds) for program in corpus]
    vectorizer = DictVectorizer(sparse=False, sort=True)
    matrix = vectorizer.fit_transform(bags)
    names = list(vectorizer.get_feature_names_out())
    if not names:
        return FeatureSpace([], [], len(corpus), kinds)

    counted = np.array([_kind_of(name) != FeatureKind.layout for name in names], dtype=bool)
    keep = ~(counted & (matrix.sum(axis=0) == 1))
    if not keep.any():
        keep[:] = True
    kept = np.flatnonzero(keep)

    if len(set(labels)) > 1:
        discrete = np.array([_is_discrete(names[idx]) for idx in kept], dtype=bool)
        scores = mutual_info_classif(matrix[:, kept], list(labels), discrete_features=discrete, random_state=0)
    else:
        scores = np.zeros(len(kept))
    ranked = sorted(range(len(kept)), key=lambda pos: (-scores[pos], names[kept[pos]]))
    chosen = sorted(kept[pos] for pos in ranked[:selection_cap])

    dfs = (matrix > 0).sum(axis=0)
    console.log(f"Feature space: {len(chosen)} of {len(names)} features kept on {len(corpus)} files")
    return FeatureSpace(
        names=[names[idx] for idx in chosen],
        dfs=[int(dfs[idx]) for idx in chosen],
        corpus_size=len(corpus),
        kinds=kinds,
    )


def _raw_row(bag: Dict[str, float], space: FeatureSpace) -> np.ndarray:
    row = np.zeros(len(space), dtype=float)
    for name, value in bag.items():
        idx = space.index.get(name)
        if idx is not None:
            row[idx] = value
    return row


def vectorize_many(programs: Sequence[SourceProgram], space: FeatureSpace) -> np.ndarray:
    """TF-IDF weighted, L2 normalised matrix with one row per program."""
    if not len(space):
        return np.zeros((len(programs), 0))
    matrix = np.vstack([_raw_row(extract_features(program, space.kinds), space) for program in programs])
    return normalize(matrix * space.weights, norm="l2")


def vectorize(program: SourceProgram, space: FeatureSpace) -> FeatureVector:
    return FeatureVector(vectorize_many([program], space)[0], space)


def normalize_layout(source: str) -> str:
    """Canonical layout of ``source``, the syntax tree is untouched."""
    return pretty_print(parse(source).ast)


def changed_feature_ratio(a: FeatureVector, b: FeatureVector) -> float:
    if not a.space.same_as(b.space):
        raise SpaceMismatch()
    if not len(a):
        return 0.0
    return float(np.mean(np.abs(a.values - b.values) > CHANGE_TOLERANCE))


def _lcs_table(old: List[str], new: List[str]) -> np.ndarray:
    table = np.zeros((len(old) + 1, len(new) + 1), dtype=np.int32)
    for i in range(len(old) - 1, -1, -1):
        for j in range(len(new) - 1, -1, -1):
            if old[i] == new[j]:
                table[i, j] = table[i + 1, j + 1] + 1
            else:
                table[i, j] = max(table[i + 1, j], table[i, j + 1])
    return table


def loc_diff(a: str, b: str) -> Tuple[int, int, int]:
    """Lines ``(added, removed, changed)`` between ``a`` and ``b``.

    Runs of removed and added lines between two common lines pair up as
    changed lines, the surplus counts as added or removed.
    """
    old, new = a.splitlines(), b.splitlines()
    table = _lcs_table(old, new)
    added = removed = changed = 0
    run_removed = run_added = 0

    def close_run() -> None:
        nonlocal added, removed, changed, run_removed, run_added
        paired = min(run_removed, run_added)
        changed += paired
        removed += run_removed - paired
        added += run_added - paired
        run_removed = run_added = 0

    i = j = 0
    while i < len(old) and j < len(new):
        if old[i] == new[j]:
            close_run()
            i += 1
            j += 1
        elif table[i + 1, j] >= table[i, j + 1]:
            run_removed += 1
            i += 1
        else:
            run_added += 1
            j += 1
    run_removed += len(old) - i
    run_added += len(new) - j
    close_run()
    return added, removed, changed
