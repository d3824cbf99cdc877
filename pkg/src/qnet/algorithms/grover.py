"""Grover search as one connector-chained network.

Per iteration the chain applies ``R2 = I - 2|j><j|`` first, then ``F``,
``R0 = 2|0><0| - I`` and ``F^{-1}``; ``F^{-1} R0 F`` is the usual inversion
about the mean. The whole run is::

    C_dag C Q(F^-1) C Q(R0) C Q(F) C Q(R2) ... C Q~(H) C C_dag
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..elements import Rotator
from ..exceptions import RejectedInputError
from ..network import Network, compose_product, compose_sum, embed_external, evaluate_trace, interior, q_of
from ..registers import RegisterLayout, make_augmented
from ..compiler import gate_single_qubit
from ..utils.validation import check_index
from .qft import HADAMARD, hadamard_all, qft_inverse_network, qft_matrix, qft_network

__all__ = [
    "GroverReport",
    "auto_iterations",
    "grover_network",
    "grover_oracle_probabilities",
    "grover_run",
    "hadamard_prep",
    "reflection_r0",
    "reflection_r2",
]

SUBNETWORKS = ("qft", "hprep")


@dataclass
class GroverReport:
    qubits_k: int
    target_j: int
    iterations: int
    success_probability: float
    per_iteration_probs: list = field(default_factory=list)


def auto_iterations(k):
    return int(math.floor(math.pi * math.sqrt(2**k) / 4))


def reflection_r0(dim):
    """``Q(R0) = exp{2|0><0| C_dag} exp{-C_dag}``."""
    return compose_sum(
        [Network(dim, (Rotator(0, 2.0),), "2|0><0|"), q_of(-np.eye(dim), label="Q(-I)")],
        label="Q(R0)",
    )


def reflection_r2(dim, j):
    """``Q(R2) = exp{C_dag} exp{-2|j><j| C_dag}``."""
    j = check_index(j, dim, "target_j")
    return compose_sum(
        [q_of(np.eye(dim), label="Q(I)"), Network(dim, (Rotator(j, -2.0),), f"-2|{j}><{j}|")],
        label="Q(R2)",
    )


def hadamard_prep(k, external=False):
    """``Q~(H)``: per-qubit Hadamards chained by connectors."""
    if external:
        return embed_external(hadamard_all(k), label="Q~(H)")
    lifts = [gate_single_qubit(HADAMARD, i, k) for i in range(k)]
    return interior(compose_product(lifts, label="Q~(H)"))


def grover_network(k, target_j, iterations, external=()):
    """Nilpotent interior of the entire Grover network on the output register.

    ``external`` names native subnetworks (``"qft"``, ``"hprep"``) to swap
    for dense embedded operators.
    """
    unknown = set(external) - set(SUBNETWORKS)
    if unknown:
        raise RejectedInputError(f"unknown subnetworks {sorted(unknown)}; choose from {SUBNETWORKS}")
    dim = 2**k
    check_index(target_j, dim, "target_j")
    if "qft" in external:
        F = qft_matrix(k)
        qf = embed_external(F, label="Q(F)")
        qfi = embed_external(F.conj().T, label="Q(F^-1)")
    else:
        qf, qfi = qft_network(k), qft_inverse_network(k)
    r0, r2 = reflection_r0(dim), reflection_r2(dim, target_j)
    factors = [qfi, r0, qf, r2] * iterations + [hadamard_prep(k, "hprep" in external)]
    return interior(compose_product(factors, label="Q(Grover)"))


def grover_oracle_probabilities(k, target_j, iterations):
    """Dense reference: success probability after each of ``0..iterations`` steps."""
    N = 2**k
    s = np.full(N, 1 / np.sqrt(N), dtype=np.complex128)
    R2 = np.eye(N)
    R2[target_j, target_j] = -1
    diffusion = 2 * np.outer(s, s.conj()) - np.eye(N)
    psi = s.copy()
    probs = [abs(psi[target_j]) ** 2]
    for _ in range(iterations):
        psi = diffusion @ (R2 @ psi)
        probs.append(abs(psi[target_j]) ** 2 / np.vdot(psi, psi).real)
    return probs


def grover_run(k, target_j, iterations="auto", external=()):
    if k < 1:
        raise RejectedInputError("k must be >= 1")
    dim = 2**k
    target_j = check_index(target_j, dim, "target_j")
    T = auto_iterations(k) if iterations in (None, "auto") else int(iterations)
    if T < 0:
        raise RejectedInputError("iterations must be >= 0")
    net = grover_network(k, target_j, T, external)
    start = np.zeros(dim, dtype=np.complex128)
    start[0] = 1.0
    trace = evaluate_trace(net, make_augmented(start, RegisterLayout((dim,))))

    def prob(v):
        return float(abs(v[target_j]) ** 2 / np.vdot(v, v).real)

    # After the Hadamard slot (stage 3) and after each 4-factor iteration.
    per_iter = [prob(trace[3 + 8 * t].branch(0)) for t in range(T + 1)]
    final = trace[-1].branch(1)
    return GroverReport(k, target_j, T, prob(final), per_iter)
