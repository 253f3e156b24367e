"""The magic pentagram hypergraph and classical analysis of the game.

Ten vertices sit on five four-vertex hyperedges (the contexts).  Every vertex
lies on exactly two contexts and every pair of contexts meets in exactly one
vertex.  A referee draws a context j for Alice and a vertex v in j for Bob,
uniformly over the 20 such pairs.  Alice answers with a sign for each vertex
of j whose product must equal the context label; the round is won when her
sign for v matches Bob's.

The labels make the constraint system classically unsatisfiable: the product
of all five labels is -1, yet each vertex appears twice, so any global sign
assignment violates an odd number of contexts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

CONTEXT_ORDER = ("C", "D", "E", "F", "G")

# Vertex incidence of the pentagram.  Relabelings give isomorphic games; pass
# custom tables to PentagramGame to override.
STANDARD_CONTEXTS = {
    "C": (2, 5, 7, 10),
    "D": (1, 8, 9, 10),
    "E": (3, 5, 6, 8),
    "F": (4, 6, 7, 9),
    "G": (1, 2, 3, 4),
}
STANDARD_LABELS = {"C": 1, "D": 1, "E": 1, "F": 1, "G": -1}


@dataclass(frozen=True)
class PentagramGame:
    """Hypergraph of the game: context sets plus their parity labels."""

    contexts: dict[str, tuple[int, ...]] = field(
        default_factory=lambda: dict(STANDARD_CONTEXTS)
    )
    labels: dict[str, int] = field(default_factory=lambda: dict(STANDARD_LABELS))

    def __post_init__(self):
        if set(self.contexts) != set(self.labels):
            raise ValueError("contexts and labels must use the same context names")
        if len(self.contexts) != 5:
            raise ValueError(f"expected 5 contexts, got {len(self.contexts)}")
        norm = {j: tuple(sorted(int(v) for v in vs)) for j, vs in self.contexts.items()}
        object.__setattr__(self, "contexts", norm)
        for j, vs in norm.items():
            if len(set(vs)) != 4:
                raise ValueError(f"context {j} must contain 4 distinct vertices")
        counts: dict[int, int] = {}
        for vs in norm.values():
            for v in vs:
                counts[v] = counts.get(v, 0) + 1
        if any(c != 2 for c in counts.values()):
            raise ValueError("every vertex must appear in exactly 2 contexts")
        if any(l not in (-1, 1) for l in self.labels.values()):
            raise ValueError("labels must be +1 or -1")

    @property
    def context_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.contexts))

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for vs in self.contexts.values() for v in vs}))

    def contexts_of(self, v: int) -> tuple[str, ...]:
        """The two contexts containing vertex v, in name order."""
        out = tuple(j for j in self.context_names if v in self.contexts[j])
        if not out:
            raise ValueError(f"unknown vertex {v}")
        return out

    def questions(self) -> list[tuple[str, int]]:
        """All 20 (context, vertex) question pairs, each of weight 1/20."""
        return [(j, v) for j in self.context_names for v in self.contexts[j]]

    def adjacent(self, v: int, w: int) -> bool:
        """True when some context contains both vertices."""
        if v == w:
            raise ValueError("adjacency is only defined for distinct vertices")
        return any(v in vs and w in vs for vs in self.contexts.values())

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(w for w in self.vertices if w != v and self.adjacent(v, w))

    def non_neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(w for w in self.vertices if w != v and not self.adjacent(v, w))

    def to_json(self) -> dict:
        return {
            "contexts": {j: list(self.contexts[j]) for j in self.context_names},
            "labels": {j: int(self.labels[j]) for j in self.context_names},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PentagramGame":
        return cls(
            contexts={j: tuple(vs) for j, vs in obj["contexts"].items()},
            labels={j: int(l) for j, l in obj["labels"].items()},
        )


def parity_assignments(game: PentagramGame, j: str) -> list[tuple[int, ...]]:
    """Valid Alice answers for context j as bit tuples over the sorted vertices.

    Bit b stands for the sign (-1)**b; a tuple is valid when the product of
    its signs equals the context label.  Each context has 8 valid tuples.
    """
    label = game.labels[j]
    want = 0 if label == 1 else 1
    return [t for t in product((0, 1), repeat=4) if sum(t) % 2 == want]


@dataclass
class ClassicalStrategy:
    """Deterministic strategy: one sign table per context for Alice, one for Bob.

    alice[j][v] and bob[v] are signs in {+1, -1}; each Alice table must
    multiply to the context label.
    """

    alice: dict[str, dict[int, int]]
    bob: dict[int, int]


def evaluate_classical(game: PentagramGame, strategy: ClassicalStrategy) -> Fraction:
    """Exact winning probability of a deterministic strategy.

    Raises ValueError if any Alice table violates its parity constraint
    (such strategies lose their context automatically and are excluded by
    definition of the answer format).
    """
    agree = 0
    for j in game.context_names:
        table = strategy.alice[j]
        prod = 1
        for v in game.contexts[j]:
            if table[v] not in (-1, 1):
                raise ValueError(f"alice[{j}][{v}] must be +1 or -1")
            prod *= table[v]
        if prod != game.labels[j]:
            raise ValueError(f"alice table for context {j} violates its parity constraint")
        agree += sum(1 for v in game.contexts[j] if table[v] == strategy.bob[v])
    return Fraction(agree, 20)


def _best_context_table(game: PentagramGame, j: str, bob: dict[int, int]):
    """Best parity-valid Alice table for one context against a Bob table."""
    vs = game.contexts[j]
    best_t, best_agree = None, -1
    for t in parity_assignments(game, j):
        agree = sum(1 for bit, v in zip(t, vs) if (1 - 2 * bit) == bob[v])
        if agree > best_agree:
            best_t, best_agree = t, agree
    table = {v: 1 - 2 * bit for bit, v in zip(best_t, vs)}
    return table, best_agree


def best_classical_strategy(game: PentagramGame) -> tuple[ClassicalStrategy, Fraction]:
    """Optimal deterministic strategy by full enumeration.

    Enumerates Bob's 2^10 sign tables; for each, Alice's contexts decouple and
    the best of the 8 parity-valid tables is selected independently.  Mixed
    strategies cannot beat this (the value is linear over the strategy
    polytope, so the maximum sits at a deterministic vertex).
    """
    verts = game.vertices
    best_strategy, best_agree = None, -1
    for signs in product((1, -1), repeat=len(verts)):
        bob = dict(zip(verts, signs))
        alice: dict[str, dict[int, int]] = {}
        agree = 0
        for j in game.context_names:
            table, a = _best_context_table(game, j, bob)
            alice[j] = table
            agree += a
        if agree > best_agree:
            best_strategy, best_agree = ClassicalStrategy(alice, bob), agree
    return best_strategy, Fraction(best_agree, 20)


def classical_value(game: PentagramGame) -> Fraction:
    """Exact classical value of the game (19/20 for the standard pentagram)."""
    _, value = best_classical_strategy(game)
    return value
