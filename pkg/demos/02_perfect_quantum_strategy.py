"""Score the perfect quantum strategy and inspect its operator algebra.

Alice and Bob share three EPR pairs and measure real Pauli words: single
Paulis on six of the vertices, three-letter words on the vertices of the odd
context.  Observables inside a context commute and multiply to the context
label, while observables of non-adjacent vertices anticommute; that
anticommutation is what the self-test later leans on.
"""

import numpy as np

from pentagram import ideal_strategy, losing_terms, score, select_distinguished, validate
from pentagram.strategies import IDEAL_OBSERVABLES


def main():
    r = ideal_strategy()

    print("Per-vertex Pauli words:")
    for v in r.game.vertices:
        print(f"  vertex {v:2d}: {IDEAL_OBSERVABLES[v]}")

    report = validate(r, 1e-12)
    print()
    print(f"Validation at 1e-12: {'PASS' if report.passed else 'FAIL'}")
    for name, dev in report.deviations().items():
        print(f"  {name:16s} {dev:.3e}")

    print()
    print(f"score = {score(r):.12f}")
    worst = max(losing_terms(r).values())
    print(f"largest losing term = {worst:.3e}")

    obs = {v: r.bob[v] for v in r.game.vertices}
    print()
    print("Sample anticommutators of non-adjacent observables (all vanish):")
    for v, w in ((1, 7), (3, 7), (2, 8)):
        acomm = obs[v] @ obs[w] + obs[w] @ obs[v]
        print(f"  {{O{v}, O{w}}} has norm {np.linalg.norm(acomm):.1e}")

    dist = select_distinguished(r)
    print()
    print("Simulated Pauli assignment (register, X-type vertex word, Z-type):")
    for i in (1, 2, 3):
        x_word = _word(dist.x_prime[i])
        z_word = _word(dist.z_prime[i])
        print(f"  register {i}: X' = {x_word}, Z' = {z_word}")


def _word(op):
    from pentagram.linalg import ID2, PAULI_X, PAULI_Z, kron_all

    letters = {"I": ID2, "X": PAULI_X, "Z": PAULI_Z}
    for a in "IXZ":
        for b in "IXZ":
            for c in "IXZ":
                if np.allclose(op, kron_all([letters[a], letters[b], letters[c]])):
                    return a + b + c
    return "?"


if __name__ == "__main__":
    main()
