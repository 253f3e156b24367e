from fractions import Fraction
from itertools import product

import pytest

from pentagram.game import (
    ClassicalStrategy,
    PentagramGame,
    best_classical_strategy,
    classical_value,
    evaluate_classical,
    parity_assignments,
)


@pytest.fixture(scope="module")
def game():
    return PentagramGame()


class TestStructure:
    def test_questions(self, game):
        qs = game.questions()
        assert len(qs) == 20
        assert len(set(qs)) == 20
        assert [q for q in qs if q[1] == 10] == [("C", 10), ("D", 10)]

    def test_double_counting(self, game):
        assert sum(len(game.contexts[j]) for j in game.context_names) == 20
        assert len(game.vertices) == 10

    def test_every_vertex_in_two_contexts(self, game):
        for v in game.vertices:
            assert len(game.contexts_of(v)) == 2

    def test_labels(self, game):
        assert [game.labels[j] for j in "CDEFG"] == [1, 1, 1, 1, -1]

    def test_adjacency_examples(self, game):
        assert not game.adjacent(7, 3)
        assert game.adjacent(1, 2)

    def test_neighbor_counts(self, game):
        for v in game.vertices:
            assert len(game.neighbors(v)) == 6
            assert len(game.non_neighbors(v)) == 3

    def test_adjacency_same_vertex_rejected(self, game):
        with pytest.raises(ValueError):
            game.adjacent(4, 4)

    def test_contexts_pairwise_intersect_once(self, game):
        names = game.context_names
        for i, j in product(names, names):
            if i < j:
                shared = set(game.contexts[i]) & set(game.contexts[j])
                assert len(shared) == 1

    def test_invalid_incidence_rejected(self):
        contexts = dict(PentagramGame().contexts)
        contexts["C"] = (1, 2, 3, 4)  # reuses G's vertices
        with pytest.raises(ValueError):
            PentagramGame(contexts=contexts, labels=dict(PentagramGame().labels))

    def test_relabeled_game_is_isomorphic(self):
        # shifting every vertex id leaves all game quantities unchanged
        base = PentagramGame()
        contexts = {j: tuple(v + 10 for v in vs) for j, vs in base.contexts.items()}
        shifted = PentagramGame(contexts=contexts, labels=dict(base.labels))
        assert classical_value(shifted) == Fraction(19, 20)
        assert not shifted.adjacent(17, 13)


class TestParity:
    def test_eight_valid_assignments(self, game):
        for j in game.context_names:
            ts = parity_assignments(game, j)
            assert len(ts) == 8
            want = 0 if game.labels[j] == 1 else 1
            assert all(sum(t) % 2 == want for t in ts)

    def test_obstruction_over_all_bob_tables(self, game):
        # any global sign table violates an odd number of context labels
        for signs in product((1, -1), repeat=10):
            bob = dict(zip(game.vertices, signs))
            mismatched = 0
            for j in game.context_names:
                prod_signs = 1
                for v in game.contexts[j]:
                    prod_signs *= bob[v]
                if prod_signs != game.labels[j]:
                    mismatched += 1
            assert mismatched % 2 == 1
            assert mismatched >= 1


class TestClassical:
    def test_value_is_exact(self, game):
        value = classical_value(game)
        assert value == Fraction(19, 20)
        assert value < 1
        assert value.denominator == 20

    def test_witness_achieves_value(self, game):
        witness, value = best_classical_strategy(game)
        assert value == Fraction(19, 20)
        assert evaluate_classical(game, witness) == Fraction(19, 20)

    def test_all_plus_bob_best_response(self, game):
        # Bob all +1: four contexts copied perfectly, G loses one vertex
        bob = {v: 1 for v in game.vertices}
        alice = {}
        for j in game.context_names:
            table = {v: 1 for v in game.contexts[j]}
            if game.labels[j] == -1:
                table[game.contexts[j][0]] = -1
            alice[j] = table
        value = evaluate_classical(game, ClassicalStrategy(alice, bob))
        assert value == Fraction(19, 20)

    def test_score_counts_agreements_only(self, game):
        witness, _ = best_classical_strategy(game)
        flipped_bob = {v: -witness.bob[v] for v in game.vertices}
        mirrored = ClassicalStrategy(witness.alice, flipped_bob)
        # the witness agrees on 19 questions, so the mirror agrees on 1
        assert evaluate_classical(game, mirrored) == Fraction(1, 20)

    def test_no_valid_strategy_disagrees_everywhere(self, game):
        # full enumeration of the adversarial minimum: the parity obstruction
        # forces at least one agreement, and the floor 1/20 mirrors the 19/20 cap
        worst = Fraction(1)
        for signs in product((1, -1), repeat=10):
            bob = dict(zip(game.vertices, signs))
            agree = 0
            for j in game.context_names:
                vs = game.contexts[j]
                agree += min(
                    sum(1 for bit, v in zip(t, vs) if (1 - 2 * bit) == bob[v])
                    for t in parity_assignments(game, j)
                )
            worst = min(worst, Fraction(agree, 20))
        assert worst == Fraction(1, 20)

    def test_parity_violation_rejected(self, game):
        alice = {j: {v: 1 for v in game.contexts[j]} for j in game.context_names}
        bob = {v: 1 for v in game.vertices}
        with pytest.raises(ValueError):
            evaluate_classical(game, ClassicalStrategy(alice, bob))


class TestSerialization:
    def test_export_format(self, game):
        obj = game.to_json()
        assert obj["contexts"]["C"] == [2, 5, 7, 10]
        assert obj["labels"] == {"C": 1, "D": 1, "E": 1, "F": 1, "G": -1}
        assert all(vs == sorted(vs) for vs in obj["contexts"].values())

    def test_round_trip(self, game):
        assert PentagramGame.from_json(game.to_json()) == game
