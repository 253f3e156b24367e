"""Walk through the pentagram game and its classical ceiling.

Ten vertices, five four-vertex contexts, every vertex on exactly two
contexts.  Four contexts demand that Alice's four signs multiply to +1, the
fifth demands -1.  Multiplying all five constraints together squares every
vertex away, so the product of the labels would have to be +1; it is -1, and
that single sign is why no deterministic strategy answers all 20 questions
correctly.  Enumerating all 1024 Bob tables (Alice's best reply decouples
per context) shows the ceiling is exactly 19/20.
"""

from fractions import Fraction

from pentagram import PentagramGame, best_classical_strategy, evaluate_classical


def main():
    game = PentagramGame()

    print("Contexts and labels:")
    for j in game.context_names:
        print(f"  {j}: vertices {game.contexts[j]}, required product {game.labels[j]:+d}")

    print()
    print(f"Questions: {len(game.questions())} equally weighted (context, vertex) pairs")
    print(f"Vertex 7 lies on {game.contexts_of(7)}; its non-neighbors are {game.non_neighbors(7)}")

    print()
    print("Parity obstruction: for every global sign table, the number of")
    print("violated contexts is odd.  Sample tables:")
    for signs in ((1,) * 10, (1, -1) * 5, (-1,) * 10):
        bob = dict(zip(game.vertices, signs))
        bad = sum(
            1
            for j in game.context_names
            if _product(bob[v] for v in game.contexts[j]) != game.labels[j]
        )
        print(f"  table {signs} violates {bad} context(s)")

    print()
    witness, value = best_classical_strategy(game)
    assert value == Fraction(19, 20)
    print(f"Classical value by full enumeration: {value} = {float(value)}")
    print(f"Witness Bob table: {witness.bob}")
    print(f"Witness re-scored: {evaluate_classical(game, witness)}")


def _product(signs):
    out = 1
    for s in signs:
        out *= s
    return out


if __name__ == "__main__":
    main()
