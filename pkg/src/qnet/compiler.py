"""Links between circuit elements and ordinary gates.

* Pauli expansion of the elementary matrix ``|m><n|``.
* Exchange-form networks built from generalized exchange gates.
* A small gate library (phase, single-qubit, controlled-U, Toffoli,
  diagonal) written with the same factorizations as the element algebra.
"""

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .elements import Rotator, Transitor, exchange_gate, exchange_target
from .exceptions import RejectedInputError
from .network import Network, compose_sum, q_of, tensor_lift
from .utils.validation import check_index, check_operator, check_vector, is_power_of_two

__all__ = [
    "PAULI",
    "PauliTerm",
    "exchange_decomposition",
    "exchange_form",
    "exchange_reconstruct",
    "gate_controlled",
    "gate_diagonal",
    "gate_phase",
    "gate_single_qubit",
    "gate_toffoli",
    "pauli_decompose",
    "pauli_expand",
]

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])

# Y is the real matrix with i*Y = sigma_y.
PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": (-1j * _SIGMA_Y).astype(np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _resolve_offdiagonal_sign():
    """Sign ``s`` such that ``(X + s Y)/2 = |0><1|`` and ``(X - s Y)/2 = |1><0|``."""
    up = np.array([[0, 1], [0, 0]])
    down = np.array([[0, 0], [1, 0]])
    X, Y = PAULI["X"], PAULI["Y"]
    for s in (1, -1):
        if np.array_equal((X + s * Y) / 2, up) and np.array_equal((X - s * Y) / 2, down):
            return s
    raise RuntimeError("no X +- Y assignment reproduces |0><1|")  # pragma: no cover


OFFDIAGONAL_SIGN = _resolve_offdiagonal_sign()


@dataclass(frozen=True)
class PauliTerm:
    coefficient: complex
    letters: tuple

    def matrix(self):
        return self.coefficient * reduce(np.kron, (PAULI[c] for c in self.letters))


def _qubit_factor(alpha, beta):
    if alpha == beta:
        return [(1, "I"), (1 if alpha == 0 else -1, "Z")]
    s = OFFDIAGONAL_SIGN if alpha == 0 else -OFFDIAGONAL_SIGN
    return [(1, "X"), (s, "Y")]


def pauli_decompose(m, n, k):
    """Expand ``|m><n|`` on ``k`` qubits into ``2**k`` Pauli strings.

    Each qubit contributes ``(I +- Z)/2`` on the diagonal and ``(X +- Y)/2``
    off it, chosen by the bit pair (row bit, column bit).
    """
    if k < 1:
        raise RejectedInputError("k must be >= 1")
    m = check_index(m, 2**k, "m")
    n = check_index(n, 2**k, "n")
    factors = []
    for i in range(k):
        shift = k - 1 - i
        factors.append(_qubit_factor((m >> shift) & 1, (n >> shift) & 1))
    scale = 1.0 / 2**k
    terms = []
    for combo in itertools.product(*factors):
        sign = 1
        for s, _ in combo:
            sign *= s
        terms.append(PauliTerm(complex(sign * scale), tuple(c for _, c in combo)))
    return terms


def pauli_expand(terms):
    """Dense sum of a list of :class:`PauliTerm`."""
    if not terms:
        raise RejectedInputError("no terms to expand")
    return sum(t.matrix() for t in terms)


def exchange_decomposition(U):
    """Nonzero ``(m, n, U_mn)`` triples of ``U = sum U_mn E(m,n)|n><n|``."""
    U = check_operator(U, square=True, name="U")
    rows, cols = np.nonzero(U)
    return [(int(m), int(n), complex(U[m, n])) for m, n in zip(rows, cols)]


def exchange_reconstruct(U):
    """Rebuild ``U`` densely as ``sum_mn U_mn E(m, n) |n><n|``."""
    U = check_operator(U, square=True, name="U")
    d = U.shape[0]
    out = np.zeros_like(U)
    for m, n, u in exchange_decomposition(U):
        # E(m,n)|n><n| has a single nonzero column: column n of E(m,n).
        out[:, n] += u * exchange_gate(m, n, d)[:, n]
    return out


def exchange_form(U, label="Q_E(U)"):
    """Network for ``U`` from exchange-gate-times-projector factors.

    ``E(m,n)|n><n|`` equals ``|m><n|`` exactly, so each factor is emitted as
    the equivalent rotator/transitor; the row comes from tracing ``|n>``
    through the adjacent exchanges of ``E(m, n)``.
    """
    U = check_operator(U, square=True, name="U")
    if not is_power_of_two(U.shape[0]):
        raise RejectedInputError(f"exchange form needs a 2**k dimension, got {U.shape[0]}")
    elements = []
    for m, n, u in exchange_decomposition(U):
        row = exchange_target(m, n)
        elements.append(Rotator(n, u) if row == n else Transitor(row, n, u))
    return Network(U.shape[0], tuple(elements), label)


def gate_phase(n, alpha, dim):
    """``|n> -> e^{i alpha}|n>``, identity elsewhere: ``Q(I)`` plus one rotator."""
    n = check_index(n, dim, "n")
    shift = Network(dim, (Rotator(n, np.exp(1j * alpha) - 1),), f"R_{n}")
    return compose_sum([q_of(np.eye(dim), label="Q(I)"), shift], label=f"S({alpha:g})@{n}")


def gate_single_qubit(U1, i, k):
    U1 = check_operator(U1, square=True, name="U1", dim=2)
    i = check_index(i, k, "qubit position")
    return tensor_lift(U1, i, [2] * k, label=f"U({i})")


def gate_controlled(U):
    """``|0><0| (x) I + |1><1| (x) U`` as the sum of its two projector branches."""
    U = check_operator(U, square=True, name="U")
    d = U.shape[0]
    P0 = np.diag([1.0, 0.0])
    P1 = np.diag([0.0, 1.0])
    return compose_sum(
        [q_of(np.kron(P0, np.eye(d)), label="|0><0|(x)I"), q_of(np.kron(P1, U), label="|1><1|(x)U")],
        label="controlled-U",
    )


def gate_toffoli():
    """Three factors: ``Q(I)``, ``Q(-P11 (x) I)``, ``Q(P11 (x) N)``."""
    P11 = np.kron(np.diag([0.0, 1.0]), np.diag([0.0, 1.0]))
    N = np.array([[0.0, 1.0], [1.0, 0.0]])
    return compose_sum(
        [
            q_of(np.eye(8), label="Q(I)"),
            q_of(-np.kron(P11, np.eye(2)), label="-|11><11|(x)I"),
            q_of(np.kron(P11, N), label="|11><11|(x)N"),
        ],
        label="Toffoli",
    )


def gate_diagonal(entries):
    entries = check_vector(entries, name="entries")
    return q_of(np.diag(entries), label="diag")
