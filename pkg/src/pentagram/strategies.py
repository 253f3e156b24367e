"""Quantum strategies for the pentagram game in two equivalent forms.

A *reflection strategy* is the algebraic form used everywhere downstream: a
coefficient matrix L (the shared state written as a map from Bob's space to
Alice's, with unit Frobenius norm), one reflection R[j][v] per context j and
vertex v in j on Alice's side, and one reflection S[v] per vertex on Bob's
side.  Within a context Alice's reflections commute and multiply to the
context label times identity.  Alice operators act on L by left
multiplication and Bob operators by right multiplication; consequently the
physical observable measured by Bob is the transpose of S[v].  For the ideal
strategy every operator is real symmetric, so the distinction vanishes.

A *projective strategy* is the operational form: a shared unit vector psi,
an 8-outcome projective measurement per context for Alice (outcomes are the
parity-valid sign assignments) and a binary projective measurement per vertex
for Bob.  The two forms convert into each other exactly.

Scoring uses the projector form of the losing probability,

    p_lose = (1/20) * sum over (j, v in j) of
             || P+(R) L P-(S) ||^2 + || P-(R) L P+(S) ||^2

with P+-(A) = (I +- A)/2.  Each bracketed term equals
(1/4) * || R L - L S ||^2, so p_lose = (1/80) * sum || R L - L S ||^2; the
projector form is the operational disagreement probability and is treated as
the ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import PentagramGame, ClassicalStrategy, parity_assignments
from .linalg import (
    ID2,
    PAULI_X,
    PAULI_Z,
    as_matrix,
    frobenius_norm,
    kron_all,
    matrix_from_json,
    matrix_to_json,
)

# Context hosting the distinguished reflection of each vertex (each vertex
# lies on two contexts; one is singled out so that statements about "the"
# reflection of a vertex are unambiguous).
DISTINGUISHED_CONTEXT = {
    1: "G", 2: "G", 3: "E", 4: "F", 5: "E",
    6: "E", 7: "F", 8: "D", 9: "D", 10: "C",
}

# Vertex assignments of the simulated Pauli pairs.  Indices 1..3 are Alice's
# registers (operators drawn from the distinguished reflections), 4..6 Bob's
# (operators drawn from S).  For each register the X/Z pair sits on
# non-adjacent vertices, every cross pair on adjacent ones, which is exactly
# the (anti)commutation pattern of the Paulis they emulate.
X_PRIME_VERTEX = {1: 6, 2: 5, 3: 7, 4: 6, 5: 5, 6: 7}
Z_PRIME_VERTEX = {1: 10, 2: 9, 3: 8, 4: 10, 5: 9, 6: 8}

# Per-vertex observables of the ideal strategy on three qubits.  Single-qubit
# Paulis sit on vertices 5..10; the vertices of the odd context G carry the
# three-fold products forced by the context product constraints.
_P = {"I": ID2, "X": PAULI_X, "Z": PAULI_Z}


def _pauli_string(s: str) -> np.ndarray:
    return kron_all([_P[c] for c in s])


IDEAL_OBSERVABLES = {
    1: "ZZZ", 2: "ZXX", 3: "XXZ", 4: "XZX", 5: "IXI",
    6: "XII", 7: "IIX", 8: "IIZ", 9: "IZI", 10: "ZII",
}


@dataclass
class ReflectionStrategy:
    """Shared-state matrix L plus reflection families (treated as immutable)."""

    L: np.ndarray
    alice: dict[str, dict[int, np.ndarray]]
    bob: dict[int, np.ndarray]
    game: PentagramGame = field(default_factory=PentagramGame)

    @property
    def dim_a(self) -> int:
        return self.L.shape[0]

    @property
    def dim_b(self) -> int:
        return self.L.shape[1]


@dataclass
class ProjectiveStrategy:
    """Shared vector psi plus projective measurements (treated as immutable).

    alice[j] maps each parity-valid outcome (a bit tuple over the sorted
    vertices of j, bit b meaning sign (-1)**b) to its projector; bob[v] is
    the pair (N0, N1) for outcomes +1 and -1.
    """

    psi: np.ndarray
    dim_a: int
    dim_b: int
    alice: dict[str, dict[tuple[int, ...], np.ndarray]]
    bob: dict[int, tuple[np.ndarray, np.ndarray]]
    game: PentagramGame = field(default_factory=PentagramGame)


@dataclass
class ValidationReport:
    """Worst-case Frobenius deviations from the reflection-strategy axioms.

    context_product is reported on the per-entry scale (Frobenius deviation
    divided by sqrt(dim)); all other fields are plain Frobenius norms, and
    state_norm is | ||L|| - 1 |.
    """

    hermiticity: float
    involution: float
    commutation: float
    context_product: float
    state_norm: float
    tol: float
    passed: bool

    def deviations(self) -> dict[str, float]:
        return {
            "hermiticity": self.hermiticity,
            "involution": self.involution,
            "commutation": self.commutation,
            "context_product": self.context_product,
            "state_norm": self.state_norm,
        }


@dataclass
class DistinguishedReflections:
    """One reflection per vertex plus the twelve simulated Pauli operators."""

    r: dict[int, np.ndarray]
    x_prime: dict[int, np.ndarray]
    z_prime: dict[int, np.ndarray]


def ideal_strategy() -> ReflectionStrategy:
    """The perfect strategy: three shared EPR pairs, real Pauli observables.

    L is I/sqrt(8); both players measure the same per-vertex observable (the
    same matrix is used in every context containing the vertex).
    """
    game = PentagramGame()
    obs = {v: _pauli_string(s) for v, s in IDEAL_OBSERVABLES.items()}
    alice = {j: {v: obs[v].copy() for v in game.contexts[j]} for j in game.context_names}
    bob = {v: obs[v].copy() for v in game.vertices}
    L = np.eye(8, dtype=complex) / np.sqrt(8.0)
    return ReflectionStrategy(L=L, alice=alice, bob=bob, game=game)


def losing_terms(r: ReflectionStrategy) -> dict[tuple[str, int], float]:
    """Disagreement probability of each of the 20 questions.

    One minus the score equals the mean of this table.
    """
    out: dict[tuple[str, int], float] = {}
    for j in r.game.context_names:
        for v in r.game.contexts[j]:
            R = r.alice[j][v]
            S = r.bob[v]
            Ia = np.eye(r.dim_a)
            Ib = np.eye(r.dim_b)
            up = ((Ia + R) / 2) @ r.L @ ((Ib - S) / 2)
            dn = ((Ia - R) / 2) @ r.L @ ((Ib + S) / 2)
            out[(j, v)] = float(np.linalg.norm(up) ** 2 + np.linalg.norm(dn) ** 2)
    return out


def score(r: ReflectionStrategy) -> float:
    """Winning probability of a valid reflection strategy."""
    terms = losing_terms(r)
    return 1.0 - sum(terms.values()) / 20.0


def validate(r: ReflectionStrategy, tol: float) -> ValidationReport:
    """Measure the worst deviation from each reflection-strategy axiom."""
    herm = 0.0
    invol = 0.0
    comm = 0.0
    prod = 0.0
    ops = [r.bob[v] for v in r.game.vertices]
    for j in r.game.context_names:
        ops.extend(r.alice[j][v] for v in r.game.contexts[j])
    for A in ops:
        A = as_matrix(A)
        n = A.shape[0]
        herm = max(herm, frobenius_norm(A - A.conj().T))
        invol = max(invol, frobenius_norm(A @ A - np.eye(n)))
    for j in r.game.context_names:
        vs = r.game.contexts[j]
        mats = [r.alice[j][v] for v in vs]
        for a in range(4):
            for b in range(a + 1, 4):
                comm = max(comm, frobenius_norm(mats[a] @ mats[b] - mats[b] @ mats[a]))
        P = np.eye(r.dim_a, dtype=complex)
        for m in mats:
            P = P @ m
        dev = frobenius_norm(P - r.game.labels[j] * np.eye(r.dim_a))
        prod = max(prod, dev / np.sqrt(r.dim_a))
    state = abs(frobenius_norm(r.L) - 1.0)
    passed = all(d <= tol for d in (herm, invol, comm, prod, state))
    return ValidationReport(herm, invol, comm, prod, state, tol, passed)


def to_projective(r: ReflectionStrategy, tol: float = 1e-8) -> ProjectiveStrategy:
    """Convert a reflection strategy to its projective form.

    Alice's projector for outcome t is the product over the context's
    vertices of (I + (-1)**t(v) R[j][v])/2; the product is well defined
    because the factors commute, and it vanishes unless the parity of t
    matches the context label.  Bob's projectors split S[v] into its +-1
    eigenspaces, and psi flattens L.
    """
    report = validate(r, tol)
    if not report.passed:
        raise ValueError(f"invalid reflection strategy: {report.deviations()}")
    da, db = r.dim_a, r.dim_b
    alice: dict[str, dict[tuple[int, ...], np.ndarray]] = {}
    for j in r.game.context_names:
        vs = r.game.contexts[j]
        outcomes: dict[tuple[int, ...], np.ndarray] = {}
        for t in parity_assignments(r.game, j):
            M = np.eye(da, dtype=complex)
            for bit, v in zip(t, vs):
                sign = 1.0 if bit == 0 else -1.0
                M = M @ ((np.eye(da) + sign * r.alice[j][v]) / 2)
            outcomes[t] = M
        alice[j] = outcomes
    bob = {
        v: (
            (np.eye(db) + r.bob[v]) / 2,
            (np.eye(db) - r.bob[v]) / 2,
        )
        for v in r.game.vertices
    }
    psi = np.asarray(r.L, dtype=complex).ravel().copy()
    return ProjectiveStrategy(psi=psi, dim_a=da, dim_b=db, alice=alice, bob=bob, game=r.game)


def _check_projective(p: ProjectiveStrategy, tol: float) -> None:
    dev = 0.0
    for j in p.game.context_names:
        total = np.zeros((p.dim_a, p.dim_a), dtype=complex)
        for M in p.alice[j].values():
            M = as_matrix(M)
            dev = max(dev, frobenius_norm(M - M.conj().T), frobenius_norm(M @ M - M))
            total += M
        dev = max(dev, frobenius_norm(total - np.eye(p.dim_a)))
    for N0, N1 in p.bob.values():
        for N in (N0, N1):
            N = as_matrix(N)
            dev = max(dev, frobenius_norm(N - N.conj().T), frobenius_norm(N @ N - N))
        dev = max(dev, frobenius_norm(N0 + N1 - np.eye(p.dim_b)))
    dev = max(dev, abs(float(np.linalg.norm(p.psi)) - 1.0))
    if dev > tol:
        raise ValueError(f"invalid projective strategy (max deviation {dev:.3e})")


def to_reflection(p: ProjectiveStrategy, tol: float = 1e-8) -> ReflectionStrategy:
    """Convert a projective strategy to its reflection form.

    R[j][v] sums the projectors of outcomes assigning +1 to v minus those
    assigning -1; S[v] = N0 - N1; L is psi reshaped into a dim_a x dim_b
    coefficient matrix (row index on Alice's space).
    """
    _check_projective(p, tol)
    alice: dict[str, dict[int, np.ndarray]] = {}
    for j in p.game.context_names:
        vs = p.game.contexts[j]
        refl: dict[int, np.ndarray] = {}
        for i, v in enumerate(vs):
            R = np.zeros((p.dim_a, p.dim_a), dtype=complex)
            for t, M in p.alice[j].items():
                R += M if t[i] == 0 else -M
            refl[v] = R
        alice[j] = refl
    bob = {v: p.bob[v][0] - p.bob[v][1] for v in p.game.vertices}
    L = np.asarray(p.psi, dtype=complex).reshape(p.dim_a, p.dim_b).copy()
    return ReflectionStrategy(L=L, alice=alice, bob=bob, game=p.game)


def score_projective(p: ProjectiveStrategy) -> float:
    """Winning probability computed directly from projective outcome weights."""
    L = np.asarray(p.psi, dtype=complex).reshape(p.dim_a, p.dim_b)
    win = 0.0
    for j in p.game.context_names:
        vs = p.game.contexts[j]
        for i, v in enumerate(vs):
            for t, M in p.alice[j].items():
                N = p.bob[v][t[i]]
                win += float(np.linalg.norm(M @ L @ N) ** 2)
    return win / 20.0


def select_distinguished(r: ReflectionStrategy) -> DistinguishedReflections:
    """Pick the fixed per-vertex reflections and the simulated Pauli table."""
    dist = {v: r.alice[DISTINGUISHED_CONTEXT[v]][v] for v in r.game.vertices}
    x_prime: dict[int, np.ndarray] = {}
    z_prime: dict[int, np.ndarray] = {}
    for i in (1, 2, 3):
        x_prime[i] = dist[X_PRIME_VERTEX[i]]
        z_prime[i] = dist[Z_PRIME_VERTEX[i]]
    for i in (4, 5, 6):
        x_prime[i] = r.bob[X_PRIME_VERTEX[i]]
        z_prime[i] = r.bob[Z_PRIME_VERTEX[i]]
    return DistinguishedReflections(r=dist, x_prime=x_prime, z_prime=z_prime)


def classical_embedding(
    strategy: ClassicalStrategy, game: PentagramGame | None = None
) -> ReflectionStrategy:
    """Embed a deterministic strategy as a 1x1 reflection strategy.

    Signs become 1x1 reflections and L = [[1]]; the quantum score then equals
    the classical winning probability exactly.
    """
    game = game or PentagramGame()
    alice = {
        j: {v: np.array([[strategy.alice[j][v]]], dtype=complex) for v in game.contexts[j]}
        for j in game.context_names
    }
    bob = {v: np.array([[strategy.bob[v]]], dtype=complex) for v in game.vertices}
    return ReflectionStrategy(L=np.eye(1, dtype=complex), alice=alice, bob=bob, game=game)


def reflection_to_json(r: ReflectionStrategy) -> dict:
    return {
        "dim_a": r.dim_a,
        "dim_b": r.dim_b,
        "L": matrix_to_json(r.L),
        "R": {
            j: {str(v): matrix_to_json(r.alice[j][v]) for v in r.game.contexts[j]}
            for j in r.game.context_names
        },
        "S": {str(v): matrix_to_json(r.bob[v]) for v in r.game.vertices},
    }


def projective_to_json(p: ProjectiveStrategy) -> dict:
    psi_col = np.asarray(p.psi, dtype=complex).reshape(-1, 1)
    return {
        "dim_a": p.dim_a,
        "dim_b": p.dim_b,
        "psi": matrix_to_json(psi_col),
        "M": {
            j: {
                "".join(str(b) for b in t): matrix_to_json(M)
                for t, M in p.alice[j].items()
            }
            for j in p.game.context_names
        },
        "N": {
            str(v): {"0": matrix_to_json(p.bob[v][0]), "1": matrix_to_json(p.bob[v][1])}
            for v in p.game.vertices
        },
    }


def strategy_from_json(obj: dict, game: PentagramGame | None = None):
    """Decode either strategy format, detected by its keys."""
    game = game or PentagramGame()
    if "L" in obj and "R" in obj:
        alice = {
            j: {int(v): matrix_from_json(m) for v, m in ctx.items()}
            for j, ctx in obj["R"].items()
        }
        bob = {int(v): matrix_from_json(m) for v, m in obj["S"].items()}
        return ReflectionStrategy(L=matrix_from_json(obj["L"]), alice=alice, bob=bob, game=game)
    if "psi" in obj and "M" in obj:
        dim_a, dim_b = int(obj["dim_a"]), int(obj["dim_b"])
        alice = {
            j: {
                tuple(int(c) for c in key): matrix_from_json(m)
                for key, m in ctx.items()
            }
            for j, ctx in obj["M"].items()
        }
        bob = {
            int(v): (matrix_from_json(pair["0"]), matrix_from_json(pair["1"]))
            for v, pair in obj["N"].items()
        }
        psi = matrix_from_json(obj["psi"]).ravel()
        return ProjectiveStrategy(
            psi=psi, dim_a=dim_a, dim_b=dim_b, alice=alice, bob=bob, game=game
        )
    raise ValueError("unrecognized strategy format (expected L/R/S or psi/M/N keys)")


def load_reflection(obj: dict, game: PentagramGame | None = None) -> ReflectionStrategy:
    """Decode a strategy file and convert to reflection form if needed."""
    s = strategy_from_json(obj, game)
    if isinstance(s, ProjectiveStrategy):
        return to_reflection(s)
    return s
