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

# Black-box attack against an attribution classifier.
#
# A Monte-Carlo tree search walks the space of transformation sequences: every
# edge of the search tree is one transformer application, every node a code
# state. Each inner iteration selects a node, plays a batch of random
# sequences from it, and records the classifier's verdict on the end states in
# every node along the way. After a batch of inner iterations the root moves
# to its best child, and the loop repeats until the classifier is fooled or the
# budget runs out.

from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from .attribution import AuthorLabel, Classifier
from .lang.interpreter import DEFAULT_FUEL
from .lang.program import SourceProgram
from .term import get_console
from .transform import TemplateProfile, TransformationSequence, all_transformers, get_transformer, run_sequence, verify
from .transform.sequence import Step
from .utils import SplitMix64, derive_seed

__all__ = (
    "AttackMode",
    "AttackObjective",
    "AttackConfig",
    "SearchNode",
    "Simulation",
    "AttackResult",
    "InvalidObjective",
    "VerificationFailed",
    "NoCandidate",
    "SITE_SEEDS",
    "ScoreOracle",
    "objective_score",
    "selection",
    "simulate",
    "expand",
    "backpropagate",
    "attack",
    "substitute_attack",
)

console = get_console()
# site seeds are drawn from a small range so sequences can share prefixes
SITE_SEEDS = 256


class AttackMode(str, Enum):
    untargeted = "untargeted"
    targeted = "targeted"


class InvalidObjective(ValueError):
    pass


class VerificationFailed(Exception):
    def __init__(self, sequence: TransformationSequence) -> None:
        self.sequence = sequence
        super().__init__(f"Candidate {sequence.ids()} changes the program output")


class NoCandidate(Exception):
    def __init__(self) -> None:
        super().__init__("No successful candidate against the substitute model")


def _winner(scores: np.ndarray) -> int:
    # np.argmax returns the first maximum, the lowest author id
    return int(np.argmax(scores))


@dataclass(frozen=True)
class AttackObjective:
    mode: AttackMode
    source: AuthorLabel
    target: Optional[AuthorLabel] = None

    def __post_init__(self) -> None:
        if self.mode == AttackMode.targeted:
            if self.target is None:
                raise InvalidObjective("A targeted attack needs a target author")
            if self.target.id == self.source.id:
                raise InvalidObjective(f"Target `{self.target.name}` is the source author")

    def score(self, scores: np.ndarray) -> float:
        if self.mode == AttackMode.targeted:
            return float(scores[self.target.id])
        return 1.0 - float(scores[self.source.id])

    def satisfied(self, scores: np.ndarray) -> bool:
        if self.mode == AttackMode.targeted:
            return _winner(scores) == self.target.id
        return _winner(scores) != self.source.id


def objective_score(objective: AttackObjective, scores: np.ndarray) -> float:
    """Higher is better: the target's score, or one minus the source's score."""
    return objective.score(scores)


@dataclass(frozen=True)
class AttackConfig:
    max_seq_len: int = 5
    sims_per_iter: int = 25
    inner_iters: int = 50
    max_outer_moves: int = 60
    patience: int = 10
    substitute_candidates: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        for name in (item.name for item in fields(self) if item.name != "seed"):
            if getattr(self, name) < 1:
                raise ValueError(f"`{name}` must be at least 1")

    @classmethod
    def from_section(cls, section, seed: int = 0) -> "AttackConfig":
        return cls(
            max_seq_len=section.max_seq_len,
            sims_per_iter=section.sims_per_iter,
            inner_iters=section.inner_iters,
            max_outer_moves=section.max_outer_moves,
            patience=section.patience,
            substitute_candidates=section.substitute_candidates,
            seed=seed,
        )

    def to_dict(self) -> Dict[str, int]:
        return {
            "max_seq_len": self.max_seq_len,
            "sims_per_iter": self.sims_per_iter,
            "inner_iters": self.inner_iters,
            "max_outer_moves": self.max_outer_moves,
            "patience": self.patience,
            "substitute_candidates": self.substitute_candidates,
            "seed": self.seed,
        }


class SearchNode:
    """A code state in the search tree, reached from its parent through ``edge``.

    The code state is materialized on first access by applying the edge to the
    parent's state; a step that does not apply leaves the state unchanged.
    """

    def __init__(
        self,
        edge: Optional[Step] = None,
        parent: Optional["SearchNode"] = None,
        program: Optional[SourceProgram] = None,
    ) -> None:
        self.edge = edge
        self.parent = parent
        # nodes ever created in this tree, shared by every node of it
        self.created: List[int] = parent.created if parent is not None else [1]
        self.children: Dict[Step, "SearchNode"] = {}
        self.visit_count = 0
        self.scores: List[float] = []
        self._program = program
        self._applicable: Optional[List[str]] = None

    def __repr__(self) -> str:
        return f"<SearchNode edge={self.edge} visits={self.visit_count} children={len(self.children)}>"

    @property
    def average(self) -> float:
        return float(np.mean(self.scores)) if self.scores else float("-inf")

    @property
    def spread(self) -> float:
        return float(np.std(self.scores)) if self.scores else float("inf")

    def program(self, template: Optional[TemplateProfile] = None) -> SourceProgram:
        if self._program is None:
            base = self.parent.program(template)
            run = run_sequence(TransformationSequence([self.edge]), base, template)
            self._program = run.program
        return self._program

    def child(self, edge: Step) -> "SearchNode":
        node = self.children.get(edge)
        if node is None:
            node = SearchNode(edge, self)
            self.children[edge] = node
            self.created[0] += 1
        return node

    @property
    def tree_size(self) -> int:
        return self.created[0]

    def path(self) -> List[Step]:
        steps: List[Step] = []
        node = self
        while node.parent is not None:
            steps.append(node.edge)
            node = node.parent
        return steps[::-1]

    def walk(self) -> Iterator["SearchNode"]:
        yield self
        for child in self.children.values():
            yield from child.walk()

    def detach(self) -> None:
        """Make this node a root, keeping its state and statistics."""
        if self._program is None:
            raise ValueError("Cannot detach a node whose code state was never materialized")
        self.parent = None


class ScoreOracle:
    """Black-box access to a classifier, memoized by program text."""

    def __init__(self, classifier: Classifier) -> None:
        self.classifier = classifier
        self.queries = 0
        self._memo: Dict[str, np.ndarray] = {}

    def __call__(self, program: SourceProgram) -> np.ndarray:
        key = program.canonical_text
        scores = self._memo.get(key)
        if scores is None:
            scores = np.asarray(self.classifier.predict_scores(program), dtype=float)
            self.queries += 1
            self._memo[key] = scores
        return scores


@dataclass
class Simulation:
    drawn: TransformationSequence
    executed: TransformationSequence
    program: SourceProgram
    scores: np.ndarray
    score: float


def _applicable(node: SearchNode, alphabet: Sequence[str], template: Optional[TemplateProfile]) -> List[str]:
    if node._applicable is None:
        program = node.program(template)
        node._applicable = [tid for tid in alphabet if get_transformer(tid).list_applicable(program, template)]
    return node._applicable


def selection(root: SearchNode, iteration: int, visited: Optional[Set[int]] = None) -> SearchNode:
    """Descend from ``root`` with the policy picked by ``iteration``.

    The policies cycle through highest average score, lowest visit count and
    highest score deviation. The first node on the way down that is not yet in
    ``visited`` is marked and returned; a leaf is returned when every node on
    the path was already marked.
    """
    visited = set() if visited is None else visited
    policy = iteration % 3
    node = root
    while node.children:
        children = list(node.children.values())
        if policy == 0:
            child = max(children, key=lambda item: item.average)
        elif policy == 1:
            child = min(children, key=lambda item: item.visit_count)
        else:
            child = max(children, key=lambda item: item.spread if item.visit_count else float("inf"))
        if id(child) not in visited:
            visited.add(id(child))
            return child
        node = child
    return node


def simulate(
    node: SearchNode,
    config: AttackConfig,
    oracle: ScoreOracle,
    objective: AttackObjective,
    template: Optional[TemplateProfile] = None,
    alphabet: Optional[Sequence[str]] = None,
    salt: Tuple[int, ...] = (),
) -> List[Simulation]:
    """Play ``config.sims_per_iter`` unique random sequences from ``node``.

    Every sequence draws one to ``max_seq_len`` steps among the transformers
    applicable at ``node`` and is scored once, on its end state. ``salt``
    (outer move, inner iteration) keeps the draws of different calls apart.
    """
    alphabet = [t.ID for t in all_transformers()] if alphabet is None else list(alphabet)
    ids = _applicable(node, alphabet, template)
    if not ids:
        return []
    start = node.program(template)
    seen: Set[Tuple[Step, ...]] = set()
    sims: List[Simulation] = []
    draw = 0
    while len(sims) < config.sims_per_iter and draw < config.sims_per_iter * 4:
        rng = SplitMix64(derive_seed(config.seed, *salt, draw))
        length = 1 + rng.below(config.max_seq_len)
        steps = tuple(
            (rng.choice(ids), derive_seed(config.seed, *salt, draw, step) % SITE_SEEDS) for step in range(length)
        )
        draw += 1
        if steps in seen:
            continue
        seen.add(steps)
        drawn = TransformationSequence(list(steps))
        run = run_sequence(drawn, start, template)
        scores = oracle(run.program)
        sims.append(Simulation(drawn, run.executed, run.program, scores, objective.score(scores)))
    return sims


def expand(node: SearchNode, sims: Sequence[Simulation]) -> List[SearchNode]:
    """Insert the executed steps of ``sims`` as paths below ``node``.

    Returns the node each simulation ends at; paths with a common prefix share
    their nodes.
    """
    leaves = []
    for sim in sims:
        current = node
        for step in sim.executed:
            current = current.child(step)
        # the end state of the whole sequence is already known
        if current is not node and current._program is None:
            current._program = sim.program
        leaves.append(current)
    return leaves


def backpropagate(leaves: Sequence[SearchNode], sims: Sequence[Simulation]) -> None:
    """Count every simulation in each node from its leaf up to the root."""
    for leaf, sim in zip(leaves, sims):
        node: Optional[SearchNode] = leaf
        while node is not None:
            node.visit_count += 1
            node.scores.append(sim.score)
            node = node.parent


@dataclass
class AttackResult:
    success: bool
    sequence: TransformationSequence
    final_program: SourceProgram
    final_scores: np.ndarray
    outer_moves: int
    queries: int
    best_score: float = 0.0
    trace: List[float] = field(default_factory=list)
    discarded: int = 0
    tree_size: int = 1

    def family_usage(self) -> Dict[str, int]:
        usage: Dict[str, int] = {}
        for transformer_id in self.sequence.ids():
            family = get_transformer(transformer_id).FAMILY.value
            usage[family] = usage.get(family, 0) + 1
        return usage


@dataclass
class _Candidate:
    sequence: TransformationSequence
    program: SourceProgram
    scores: np.ndarray
    score: float


class _Search:
    def __init__(
        self,
        program: SourceProgram,
        objective: AttackObjective,
        config: AttackConfig,
        classifier: Classifier,
        template: Optional[TemplateProfile],
        inputs: Sequence[str],
        fuel: int,
        alphabet: Optional[Sequence[str]],
        collect: bool,
    ) -> None:
        self.original = program
        self.objective = objective
        self.config = config
        self.oracle = ScoreOracle(classifier)
        self.template = template
        self.inputs = list(inputs)
        self.fuel = fuel
        self.alphabet = [t.ID for t in all_transformers()] if alphabet is None else list(alphabet)
        self.collect = collect
        self.root = SearchNode(program=program)
        self.discarded = 0
        self.best = objective.score(self.oracle(program))
        self.best_state: Tuple[List[Step], SourceProgram] = ([], program)
        self.candidates: List[_Candidate] = []
        self._seen_candidates: Set[str] = {program.canonical_text}
        self._prefix: List[Step] = []

    def _observe(self, steps: List[Step], program: SourceProgram, score: float) -> None:
        if score > self.best:
            self.best = score
            self.best_state = (steps, program)

    def _accept(self, steps: List[Step], program: SourceProgram) -> _Candidate:
        """Check a candidate that fools the classifier against the semantics oracle.

        Raises
        ------
        VerificationFailed
            When the candidate changes the program output on a task input.
        """
        sequence = TransformationSequence(list(steps))
        if not verify(self.original, program, self.inputs, self.fuel):
            raise VerificationFailed(sequence)
        scores = self.oracle(program)
        return _Candidate(sequence, program, scores, self.objective.score(scores))

    def _consider(self, steps: List[Step], program: SourceProgram) -> Optional[_Candidate]:
        scores = self.oracle(program)
        if not self.objective.satisfied(scores):
            return None
        key = program.canonical_text
        if key in self._seen_candidates:
            return None
        self._seen_candidates.add(key)
        try:
            candidate = self._accept(steps, program)
        except VerificationFailed as exc:
            console.log(f"Discarded candidate: {exc}")
            self.discarded += 1
            return None
        if self.collect:
            self.candidates.append(candidate)
            if len(self.candidates) < self.config.substitute_candidates:
                return None
        return candidate

    def mcts(self, move: int) -> Optional[_Candidate]:
        visited: Set[int] = set()
        for inner in range(self.config.inner_iters):
            node = selection(self.root, inner, visited)
            sims = simulate(
                node,
                self.config,
                self.oracle,
                self.objective,
                self.template,
                self.alphabet,
                salt=(move, inner),
            )
            if not sims:
                continue
            backpropagate(expand(node, sims), sims)
            base = self._prefix + node.path()
            for sim in sims:
                steps = base + sim.executed.steps
                self._observe(steps, sim.program, sim.score)
                found = self._consider(steps, sim.program)
                if found is not None:
                    return found
        return None

    def _shrink(self, found: _Candidate) -> _Candidate:
        """Drop steps from a success, last first, while it still fools the classifier."""
        if self.collect:
            return found
        steps = list(found.sequence.steps)
        idx = len(steps) - 1
        while idx >= 0:
            trial = run_sequence(TransformationSequence(steps[:idx] + steps[idx + 1 :]), self.original, self.template)
            scores = self.oracle(trial.program)
            if self.objective.satisfied(scores) and verify(self.original, trial.program, self.inputs, self.fuel):
                steps = list(trial.executed.steps)
                found = _Candidate(trial.executed, trial.program, scores, self.objective.score(scores))
            idx = min(idx, len(steps)) - 1
        return found

    def _finish(self, success: bool, steps: List[Step], program: SourceProgram, move: int, trace: List[float]):
        scores = self.oracle(program)
        return AttackResult(
            success=success,
            sequence=TransformationSequence(list(steps)),
            final_program=program,
            final_scores=scores,
            outer_moves=move,
            queries=self.oracle.queries,
            best_score=self.best,
            trace=trace,
            discarded=self.discarded,
            tree_size=self.root.tree_size,
        )

    def run(self) -> AttackResult:
        trace: List[float] = []
        if not self.collect and self.objective.satisfied(self.oracle(self.original)):
            return self._finish(True, [], self.original, 0, trace)
        stale = 0
        move = 0
        while move < self.config.max_outer_moves:
            move += 1
            console.status(f"Attacking: move {move}/{self.config.max_outer_moves}, best {self.best:.3f}...")
            previous = self.best
            found = self.mcts(move)
            if found is not None:
                trace.append(self.best)
                found = self._shrink(found)
                return self._finish(True, found.sequence.steps, found.program, move, trace)
            if not self.root.children:
                trace.append(self.best)
                break
            best_child = max(self.root.children.values(), key=lambda child: child.average)
            self._prefix = self._prefix + [best_child.edge]
            program = best_child.program(self.template)
            best_child.detach()
            self.root = best_child
            self._observe(list(self._prefix), program, self.objective.score(self.oracle(program)))
            found = self._consider(list(self._prefix), program)
            trace.append(self.best)
            if found is not None:
                found = self._shrink(found)
                return self._finish(True, found.sequence.steps, found.program, move, trace)
            stale = 0 if self.best > previous else stale + 1
            if not self.collect and stale >= self.config.patience:
                console.log(f"No improvement for {stale} moves, stopping")
                break
        steps, program = self.best_state
        if program is not self.original and not verify(self.original, program, self.inputs, self.fuel):
            self.discarded += 1
            steps, program = [], self.original
        return self._finish(False, steps, program, move, trace)


def attack(
    program: SourceProgram,
    objective: AttackObjective,
    config: AttackConfig,
    classifier: Classifier,
    inputs: Sequence[str],
    template: Optional[TemplateProfile] = None,
    fuel: int = DEFAULT_FUEL,
    alphabet: Optional[Sequence[str]] = None,
) -> AttackResult:
    """Search for a transformation sequence that satisfies ``objective``.

    ``inputs`` are the task inputs every candidate is verified on before it
    can count as a success. On failure the best scoring verified state is
    returned, falling back to ``program`` itself.
    """
    search = _Search(program, objective, config, classifier, template, inputs, fuel, alphabet, collect=False)
    try:
        result = search.run()
    finally:
        console.stop_status()
    console.log(f"Attack finished: success={result.success}, queries={result.queries}")
    return result


def substitute_attack(
    program: SourceProgram,
    objective: AttackObjective,
    config: AttackConfig,
    substitute: Classifier,
    original: Classifier,
    inputs: Sequence[str],
    template: Optional[TemplateProfile] = None,
    fuel: int = DEFAULT_FUEL,
    alphabet: Optional[Sequence[str]] = None,
) -> Tuple[bool, AttackResult]:
    """Attack ``substitute`` and check whether the result fools ``original``.

    Verified successes against the substitute are collected until
    ``config.substitute_candidates`` are found or ``config.max_outer_moves``
    moves are spent; the one scoring highest on the substitute is tried on
    the original classifier.

    Raises
    ------
    NoCandidate
        When the search finds no success against the substitute.
    """
    search = _Search(program, objective, config, substitute, template, inputs, fuel, alphabet, collect=True)
    if objective.satisfied(search.oracle(program)):
        search.candidates.append(_Candidate(TransformationSequence(), program, search.oracle(program), search.best))
    try:
        result = search.run()
    finally:
        console.stop_status()
    if not search.candidates:
        raise NoCandidate()
    chosen = max(search.candidates, key=lambda candidate: candidate.score)
    transferred = objective.satisfied(np.asarray(original.predict_scores(chosen.program), dtype=float))
    result.success = True
    result.sequence = chosen.sequence
    result.final_program = chosen.program
    result.final_scores = chosen.scores
    console.log(f"Substitute candidates: {len(search.candidates)}, transferred={transferred}")
    return transferred, result
