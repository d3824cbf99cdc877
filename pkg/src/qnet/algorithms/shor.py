"""Shor factoring as a connector-chained network plus classical post-processing.

Layout: first register ``2**k`` (the counting register), second register
``2**ceil(log2 N)`` holding ``a**n mod N``, plus the aux qubit. The chain is::

    C_dag [C (Q(F (x) I2) M)] [C Q(G)] [C Q~(H)] C C_dag

where ``M`` projects the second register onto the measured value. Only the
output register is evaluated; the untouched input register of the
two-register form is an identity factor.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..elements import ElementBatch, Measure
from ..exceptions import RejectedInputError
from ..network import Network, compose_product, embed_external, evaluate, interior, tensor_lift
from ..registers import RegisterLayout, make_augmented
from ..utils.validation import check_capacity
from .measurement import measure_register, register_probabilities
from .qft import HADAMARD, hadamard_all, qft_matrix

__all__ = [
    "ShorReport",
    "continued_fraction",
    "default_qubits",
    "modexp_network",
    "period_from_convergents",
    "shor_network",
    "shor_run",
    "split_factors",
]

SUBNETWORKS = ("qft", "hprep")
PROB_FLOOR = 1e-12


@dataclass
class ShorReport:
    n_to_factor: int
    base_a: int
    qubits_k: int
    measured_y: int = None
    cf_convergents: list = field(default_factory=list)
    period_r: int = None
    factors: tuple = None
    peak_distribution: list = field(default_factory=list)
    mode: str = "sample"
    second_register_outcome: int = None
    note: str = ""


def continued_fraction(y, Q):
    """Convergents ``(p, q)`` of ``y / Q`` in lowest terms, ascending ``q``."""
    if Q == 0:
        raise RejectedInputError("Q must be nonzero")
    if not 0 <= y < Q:
        raise RejectedInputError(f"need 0 <= y < Q, got y={y}, Q={Q}")
    convergents = []
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    num, den = y, Q
    while True:
        a, rem = divmod(num, den)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        convergents.append((h, k))
        if rem == 0:
            break
        num, den = den, rem
    return convergents


def period_from_convergents(convergents, a, N):
    """First convergent denominator ``q < N`` with ``a**q = 1 (mod N)``."""
    for _, q in convergents:
        if 0 < q < N and pow(a, q, N) == 1:
            return q
    return None


def split_factors(a, r, N):
    """Nontrivial factor pair from an even period, or ``None``."""
    if r is None or r % 2:
        return None
    half = pow(a, r // 2, N)
    if half == N - 1:
        return None
    for f in (math.gcd(half - 1, N), math.gcd(half + 1, N)):
        if 1 < f < N:
            return tuple(sorted((f, N // f)))
    return None


def default_qubits(N):
    return max(1, math.ceil(math.log2(N * N)))


def _second_dim(N):
    return 1 << (N - 1).bit_length()


def modexp_network(N, a, k):
    """``Q(G)`` for ``G = sum_n |n>|a^n mod N><n|<0|`` (non-unitary as written)."""
    D2 = _second_dim(N)
    n = np.arange(2**k)
    values = np.array([pow(a, int(x), N) for x in n])
    batch = ElementBatch(n * D2 + values, n * D2, np.ones(n.size), _sorted=True)
    return Network(2**k * D2, (batch,), "Q(G)")


def _hadamard_prep(k, D2, external):
    if external:
        return embed_external(hadamard_all(k), register_dims=(2**k, D2), target=0, label="Q~(H)")
    dims = [2] * k + [D2]
    lifts = [tensor_lift(HADAMARD, j, dims, label=f"H_{j}(x)I2") for j in range(k)]
    return interior(compose_product(lifts, label="Q~(H)"))


def _qft_stage(k, D2, external):
    F = qft_matrix(k)
    if external:
        return embed_external(F, register_dims=(2**k, D2), target=0, label="Q(F(x)I2)")
    return tensor_lift(F, 0, [2**k, D2], label="Q(F(x)I2)")


def shor_network(N, a, k, outcome=None, external=()):
    """Interior of the entire Shor network.

    With ``outcome=None`` only the preparation part (``G H``) is chained;
    otherwise the measurement stage onto ``outcome`` and the QFT follow.
    """
    unknown = set(external) - set(SUBNETWORKS)
    if unknown:
        raise RejectedInputError(f"unknown subnetworks {sorted(unknown)}; choose from {SUBNETWORKS}")
    D2 = _second_dim(N)
    prep = [modexp_network(N, a, k), _hadamard_prep(k, D2, "hprep" in external)]
    if outcome is None:
        return interior(compose_product(prep, label="Q(GH)"))
    dim = 2**k * D2
    slot = Network(dim, (Measure((2**k, D2), 1, outcome), _qft_stage(k, D2, "qft" in external)),
                   "Q(F(x)I2)M")
    return interior(compose_product([slot] + prep, label="Q(Shor)"))


def _first_register_distribution(state):
    return register_probabilities(state, 0)


def _postprocess(y, k, a, N):
    cf = continued_fraction(y, 2**k)
    r = period_from_convergents(cf, a, N)
    return cf, r, split_factors(a, r, N)


def shor_run(N, a, k=None, mode="sample", *, seed=0, fixed_m=None, external=()):
    """Run the full pipeline and classical post-processing.

    ``mode`` is ``"sample"`` (seeded), ``"fixed"`` (second register forced to
    ``a**fixed_m mod N``; the first register is still sampled with ``seed``)
    or ``"distribution"`` (exact first-register probabilities, averaged over
    every second-register outcome).
    """
    N, a = int(N), int(a)
    if N < 3:
        raise RejectedInputError("N must be >= 3")
    if not 1 < a < N:
        raise RejectedInputError(f"need 1 < a < N, got a={a}")
    k = default_qubits(N) if k is None else int(k)
    if 2**k < N:
        raise RejectedInputError(f"need 2**k >= N, got k={k}")
    D2 = _second_dim(N)
    check_capacity(2**k * D2, what="Shor register dimension")
    report = ShorReport(N, a, k, mode=mode)

    g = math.gcd(a, N)
    if g != 1:
        report.factors = tuple(sorted((g, N // g)))
        report.note = "gcd(a, N) != 1: trivial factor found classically; pipeline skipped"
        return report

    layout = RegisterLayout((2**k, D2))
    start = np.zeros(layout.register_dim, dtype=np.complex128)
    start[0] = 1.0
    s0 = make_augmented(start, layout)
    rng = np.random.default_rng(seed)

    prepared = evaluate(shor_network(N, a, k, external=external), s0)
    if mode == "distribution":
        outcomes, _ = measure_register(prepared, 1, "distribution")
    elif mode == "sample":
        u, _ = measure_register(prepared, 1, "sample", rng=rng)
        outcomes = [(u, 1.0)]
    elif mode == "fixed":
        if fixed_m is None:
            raise RejectedInputError("fixed mode needs fixed_m")
        u, _ = measure_register(prepared, 1, "fixed", outcome=pow(a, int(fixed_m), N))
        outcomes = [(u, 1.0)]
    else:
        raise RejectedInputError(f"unknown mode {mode!r}")

    dist = np.zeros(2**k)
    for u, p in outcomes:
        if p <= 0.0:
            continue
        out = evaluate(shor_network(N, a, k, outcome=u, external=external), s0)
        dist += p * _first_register_distribution(out)
    dist /= dist.sum()
    if mode != "distribution":
        report.second_register_outcome = outcomes[0][0]
    report.peak_distribution = [(int(y), float(p)) for y, p in enumerate(dist) if p > PROB_FLOOR]

    if mode == "distribution":
        # Post-process each peak in turn; keep the first that yields factors.
        chosen = None
        for y, _ in report.peak_distribution:
            cf, r, factors = _postprocess(y, k, a, N)
            if factors is not None:
                chosen = (y, cf, r, factors)
                break
        if chosen is None:
            y = max(report.peak_distribution, key=lambda t: t[1])[0]
            chosen = (y, *_postprocess(y, k, a, N))
    else:
        y = int(rng.choice(2**k, p=dist))
        chosen = (y, *_postprocess(y, k, a, N))
    report.measured_y, report.cf_convergents, report.period_r, report.factors = chosen
    if report.factors is None:
        report.note = "no usable period from this outcome; rerun with another seed"
    return report
