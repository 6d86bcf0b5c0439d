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

from stylomorph.attack import (
    SITE_SEEDS,
    AttackConfig,
    AttackMode,
    AttackObjective,
    AttackResult,
    InvalidObjective,
    NoCandidate,
    ScoreOracle,
    SearchNode,
    Simulation,
    attack,
    backpropagate,
    expand,
    objective_score,
    selection,
    simulate,
    substitute_attack,
)
from stylomorph.attribution import AuthorLabel
from stylomorph.config import get_config
from stylomorph.lang import WhileStmt, parse, walk
from stylomorph.transform import TransformationSequence, TransformError, get_transformer, verify
from stylomorph.utils import pick_index

SUMMING = """#include <iostream>

int main() {
    int n;
    input >> n;
    int s = 0;
    for (int i = 0; i < n; i++) {
        s += i;
    }
    output << s << endl;
    return 0;
}
"""
BRANCHY = """#include <iostream>

int main() {
    int n;
    input >> n;
    int s = 0;
    for (int i = 0; i < n; i++)
        if (i % 2 == 0)
            s += i;
    output << s << endl;
    return 0;
}
"""
INPUTS = ["4\n", "0\n"]
SMALL = AttackConfig(max_seq_len=2, sims_per_iter=4, inner_iters=2, max_outer_moves=3, patience=2, seed=5)

AUTHOR_A = AuthorLabel(0, "author00")
AUTHOR_B = AuthorLabel(1, "author01")
AUTHOR_C = AuthorLabel(2, "author02")


class WhileVoter:
    """Votes for ``winner`` as soon as a program holds a while-loop, else for author 0."""

    def __init__(self, n_authors: int = 2, winner: int = 1) -> None:
        self.n_authors = n_authors
        self.winner = winner
        self.calls = 0

    def predict_scores(self, program):
        self.calls += 1
        scores = np.full(self.n_authors, 0.1)
        has_while = any(isinstance(node, WhileStmt) for node in walk(program.ast))
        scores[self.winner if has_while else 0] = 1.0
        return scores / scores.sum()


class ConstantVoter:
    def __init__(self, n_authors: int = 2, winner: int = 0) -> None:
        self.n_authors = n_authors
        self.winner = winner
        self.calls = 0

    def predict_scores(self, program):
        self.calls += 1
        scores = np.zeros(self.n_authors)
        scores[self.winner] = 1.0
        return scores


class NodeKindVoter:
    """Leans towards author 1 with every while-loop and block, never far enough to win."""

    WEIGHTS = {"WhileStmt": 4.0, "CompoundStmt": 1.0}

    def __init__(self) -> None:
        self.n_authors = 2
        self.calls = 0

    def predict_scores(self, program):
        self.calls += 1
        value = sum(self.WEIGHTS.get(node.kind, 0.0) for node in walk(program.ast))
        share = 0.45 * value / (value + 10.0)
        return np.array([1.0 - share, share])


def _reachable(program, alphabet, depth):
    """Every distinct program at most ``depth`` steps away, over all site seeds."""
    seen = {program.canonical_text: program}
    frontier = dict(seen)
    for _ in range(depth):
        reached = {}
        for state in frontier.values():
            for transformer_id in alphabet:
                transformer = get_transformer(transformer_id)
                count = len(transformer.list_applicable(state))
                if not count:
                    continue
                seeds = {pick_index(seed, count): seed for seed in range(SITE_SEEDS)}
                for seed in seeds.values():
                    try:
                        result = transformer.apply(state, seed).program
                    except TransformError:
                        continue
                    reached.setdefault(result.canonical_text, result)
        frontier = {key: value for key, value in reached.items() if key not in seen}
        seen.update(frontier)
    return list(seen.values())


@pytest.fixture
def summing():
    return parse(SUMMING)


@pytest.fixture
def branchy():
    return parse(BRANCHY)


class TestObjective:
    def test_untargeted(self):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        scores = np.array([0.7, 0.3])
        assert objective_score(objective, scores) == pytest.approx(0.3)
        assert not objective.satisfied(scores)
        assert objective.satisfied(np.array([0.2, 0.8]))

    def test_ties_go_to_the_lowest_id(self):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        assert not objective.satisfied(np.array([0.5, 0.5]))
        targeted = AttackObjective(AttackMode.targeted, AUTHOR_A, AUTHOR_C)
        assert not targeted.satisfied(np.array([0.1, 0.45, 0.45]))

    def test_targeted(self):
        objective = AttackObjective(AttackMode.targeted, AUTHOR_A, AUTHOR_C)
        scores = np.array([0.2, 0.3, 0.5])
        assert objective_score(objective, scores) == pytest.approx(0.5)
        assert objective.satisfied(scores)

    def test_invalid(self):
        with pytest.raises(InvalidObjective):
            AttackObjective(AttackMode.targeted, AUTHOR_A)
        with pytest.raises(InvalidObjective):
            AttackObjective(AttackMode.targeted, AUTHOR_A, AUTHOR_A)


class TestConfig:
    def test_from_section(self):
        section = get_config().attack
        config = AttackConfig.from_section(section, seed=9)
        assert config.max_seq_len == section.max_seq_len
        assert config.seed == 9
        assert set(config.to_dict()) == {
            "max_seq_len",
            "sims_per_iter",
            "inner_iters",
            "max_outer_moves",
            "patience",
            "substitute_candidates",
            "seed",
        }

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            AttackConfig(sims_per_iter=0)
        with pytest.raises(ValueError):
            AttackConfig(substitute_candidates=0)


class TestSearchTree:
    def _sims(self, program):
        def sim(steps, score):
            sequence = TransformationSequence(steps)
            return Simulation(sequence, sequence, program, np.zeros(2), score)

        return [
            sim([("a", 1)], 0.5),
            sim([("a", 1), ("b", 2)], 0.7),
            sim([("c", 3)], 0.1),
        ]

    def test_expand_shares_prefixes(self, summing):
        root = SearchNode(program=summing)
        leaves = expand(root, self._sims(summing))
        assert root.tree_size == 4
        assert leaves[0] is root.children[("a", 1)]
        assert leaves[1].parent is leaves[0]
        assert leaves[1].path() == [("a", 1), ("b", 2)]

    def test_backpropagate(self, summing):
        root = SearchNode(program=summing)
        sims = self._sims(summing)
        backpropagate(expand(root, sims), sims)
        assert root.visit_count == 3
        first = root.children[("a", 1)]
        assert first.visit_count == 2
        assert first.average == pytest.approx(0.6)
        assert root.children[("c", 3)].scores == [0.1]

    def test_selection_policies(self, summing):
        root = SearchNode(program=summing)
        sims = self._sims(summing)
        backpropagate(expand(root, sims), sims)
        visited = set()
        # best average first, then fewest visits, then descend past marked nodes
        assert selection(root, 0, visited) is root.children[("a", 1)]
        assert selection(root, 1, visited) is root.children[("c", 3)]
        assert selection(root, 0, visited) is root.children[("a", 1)].children[("b", 2)]

    def test_detach(self, summing):
        root = SearchNode(program=summing)
        with pytest.raises(ValueError):
            root.child(("x", 0)).detach()
        sims = self._sims(summing)
        leaves = expand(root, sims)
        leaves[1].detach()
        assert leaves[1].parent is None
        assert leaves[1].path() == []

    def test_statistics_stay_consistent(self, branchy):
        oracle = ScoreOracle(NodeKindVoter())
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        alphabet = ["control.for_to_while", "control.while_to_for", "misc.compound_insert"]
        config = AttackConfig(max_seq_len=3, sims_per_iter=5, inner_iters=12, seed=11)
        root = SearchNode(program=branchy)
        ends = {}
        visited = set()
        scored = 0
        for inner in range(config.inner_iters):
            node = selection(root, inner, visited)
            sims = simulate(node, config, oracle, objective, alphabet=alphabet, salt=(0, inner))
            leaves = expand(node, sims)
            backpropagate(leaves, sims)
            scored += len(sims)
            for leaf in leaves:
                ends[id(leaf)] = ends.get(id(leaf), 0) + 1
        assert root.visit_count == scored > 0
        assert root.tree_size == sum(1 for _ in root.walk())
        for node in root.walk():
            assert len(node.scores) == node.visit_count
            below = sum(child.visit_count for child in node.children.values())
            assert node.visit_count == below + ends.get(id(node), 0)
        # one query per distinct program
        assert oracle.queries == oracle.classifier.calls <= scored + 1

    def test_oracle_memo(self, summing):
        voter = WhileVoter()
        oracle = ScoreOracle(voter)
        first = oracle(summing)
        assert np.array_equal(oracle(parse(SUMMING)), first)
        assert oracle.queries == voter.calls == 1

    def test_simulate(self, summing):
        oracle = ScoreOracle(WhileVoter())
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        alphabet = ["control.for_to_while", "misc.compound_delete"]
        sims = simulate(SearchNode(program=summing), SMALL, oracle, objective, alphabet=alphabet, salt=(1, 0))
        assert 0 < len(sims) <= SMALL.sims_per_iter
        assert len({tuple(sim.drawn.steps) for sim in sims}) == len(sims)
        for sim in sims:
            assert 1 <= len(sim.drawn) <= SMALL.max_seq_len
            assert set(sim.drawn.ids()) <= set(alphabet)
            assert sim.score == objective_score(objective, sim.scores)
        assert oracle.queries <= len(sims)

    def test_simulate_without_applicable_transformers(self):
        program = parse("int main() { return 0; }")
        oracle = ScoreOracle(WhileVoter())
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        sims = simulate(SearchNode(program=program), SMALL, oracle, objective, alphabet=["control.for_to_while"])
        assert sims == []
        assert oracle.queries == 0


class TestAttack:
    def test_already_fooled(self, summing):
        voter = ConstantVoter(winner=1)
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        result = attack(summing, objective, SMALL, voter, INPUTS)
        assert result.success
        assert len(result.sequence) == 0
        assert result.outer_moves == 0
        assert result.queries == 1
        assert result.final_program is summing

    def test_dodge(self, summing):
        voter = WhileVoter()
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        result = attack(summing, objective, SMALL, voter, INPUTS, alphabet=["control.for_to_while"])
        assert result.success
        assert result.sequence.ids() == ["control.for_to_while"]
        assert any(isinstance(node, WhileStmt) for node in walk(result.final_program.ast))
        assert verify(summing, result.final_program, INPUTS)
        assert result.queries == voter.calls
        assert result.family_usage() == {"control": 1}

    def test_impersonate(self, summing):
        voter = WhileVoter(n_authors=3, winner=2)
        objective = AttackObjective(AttackMode.targeted, AUTHOR_A, AUTHOR_C)
        result = attack(summing, objective, SMALL, voter, INPUTS, alphabet=["control.for_to_while"])
        assert result.success
        assert int(np.argmax(result.final_scores)) == AUTHOR_C.id

    def test_success_keeps_only_needed_steps(self, branchy):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        alphabet = ["misc.compound_insert", "control.for_to_while"]
        for seed in range(5):
            voter = WhileVoter()
            config = replace(SMALL, max_seq_len=3, seed=seed)
            result = attack(branchy, objective, config, voter, INPUTS, alphabet=alphabet)
            assert result.success
            assert result.sequence.ids() == ["control.for_to_while"]
            assert verify(branchy, result.final_program, INPUTS)
            assert result.queries == voter.calls

    def test_same_seed_same_result(self, summing):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        alphabet = ["control.for_to_while", "misc.compound_delete", "misc.return_add"]
        first = attack(summing, objective, SMALL, WhileVoter(), INPUTS, alphabet=alphabet)
        second = attack(summing, objective, SMALL, WhileVoter(), INPUTS, alphabet=alphabet)
        assert first.sequence == second.sequence
        assert first.queries == second.queries

    def test_gives_up_without_progress(self, summing):
        voter = ConstantVoter()
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        config = AttackConfig(max_seq_len=2, sims_per_iter=3, inner_iters=2, max_outer_moves=10, patience=2, seed=1)
        alphabet = ["misc.compound_insert", "misc.compound_delete", "control.for_to_while"]
        result = attack(summing, objective, config, voter, INPUTS, alphabet=alphabet)
        assert not result.success
        assert result.outer_moves == 2
        assert len(result.trace) == result.outer_moves
        assert len(result.sequence) == 0
        assert result.final_program is summing
        assert result.queries == voter.calls

    def test_family_usage(self, summing):
        result = AttackResult(
            success=True,
            sequence=TransformationSequence(
                [("control.for_to_while", 0), ("misc.return_add", 1), ("control.if_split", 2)]
            ),
            final_program=summing,
            final_scores=np.zeros(2),
            outer_moves=1,
            queries=1,
        )
        assert result.family_usage() == {"control": 2, "misc": 1}


class TestSubstituteAttack:
    def test_transfers(self, summing):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        transferred, result = substitute_attack(
            summing, objective, SMALL, WhileVoter(), WhileVoter(), INPUTS, alphabet=["control.for_to_while"]
        )
        assert transferred
        assert result.success
        assert result.sequence.ids() == ["control.for_to_while"]

    def test_does_not_transfer(self, summing):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        original = ConstantVoter()
        transferred, result = substitute_attack(
            summing, objective, SMALL, WhileVoter(), original, INPUTS, alphabet=["control.for_to_while"]
        )
        assert not transferred
        # the original model is queried once, on the chosen candidate
        assert original.calls == 1

    def test_collection_stops_at_the_cap(self, branchy):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        config = replace(SMALL, max_outer_moves=20, substitute_candidates=1)
        alphabet = ["control.for_to_while", "misc.compound_insert"]
        transferred, result = substitute_attack(
            branchy, objective, config, WhileVoter(), WhileVoter(), INPUTS, alphabet=alphabet
        )
        assert transferred
        assert result.outer_moves == 1
        assert "control.for_to_while" in result.sequence.ids()

    def test_no_candidate(self, summing):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        with pytest.raises(NoCandidate):
            substitute_attack(
                summing, objective, SMALL, ConstantVoter(), WhileVoter(), INPUTS, alphabet=["control.for_to_while"]
            )


@pytest.mark.slow
class TestAgainstTrainedModels:
    def test_dodge_forest(self, small_corpus, forest_model):
        item = next(item for item in small_corpus.files if item.author == "author01")
        program = small_corpus.program(item)
        objective = AttackObjective(AttackMode.untargeted, small_corpus.label(item.author))
        config = AttackConfig(max_seq_len=3, sims_per_iter=6, inner_iters=4, max_outer_moves=4, patience=4, seed=3)
        result = attack(program, objective, config, forest_model, small_corpus.inputs(item.task))
        assert result.queries > 0
        assert verify(program, result.final_program, small_corpus.inputs(item.task))
        if result.success:
            assert objective.satisfied(forest_model.predict_scores(result.final_program))


@pytest.mark.slow
class TestSearchQuality:
    ALPHABET = ["control.for_to_while", "control.while_to_for", "misc.compound_insert"]
    BUDGET = AttackConfig(max_seq_len=2, sims_per_iter=6, inner_iters=6, max_outer_moves=1, patience=1)

    def test_matches_exhaustive_search(self, branchy):
        objective = AttackObjective(AttackMode.untargeted, AUTHOR_A)
        voter = NodeKindVoter()
        optimum = max(objective.score(voter.predict_scores(state)) for state in _reachable(branchy, self.ALPHABET, 2))
        assert optimum > objective.score(voter.predict_scores(branchy))
        matched = 0
        for seed in range(100):
            config = replace(self.BUDGET, seed=seed)
            result = attack(branchy, objective, config, NodeKindVoter(), INPUTS, alphabet=self.ALPHABET)
            assert not result.success
            matched += result.best_score >= optimum - 1e-12
        assert matched >= 95
