import numpy as np

from ..exceptions import RejectedInputError
from ..elements import ElementBatch
from ..network import Network, compose_sum, q_of
from ..utils.validation import check_capacity

__all__ = ["hadamard_all", "qft_inverse_network", "qft_matrix", "qft_network", "roots_of_unity"]

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


def roots_of_unity(N):
    """``exp(2 pi i j / N)`` for ``j < N`` with quarter turns snapped to exact values."""
    j = np.arange(N)
    w = np.exp(2j * np.pi * j / N)
    quarter = (4 * j) % N == 0
    w[quarter] = np.array([1, 1j, -1, -1j])[(4 * j[quarter]) // N]
    return w


def qft_matrix(k):
    """``F[m, n] = exp(2 pi i m n / 2**k) / sqrt(2**k)``."""
    if k < 1:
        raise RejectedInputError("qft needs k >= 1 qubits")
    N = check_capacity(2**k, what="QFT dimension")
    idx = np.arange(N)
    w = roots_of_unity(N)
    return w[np.outer(idx, idx) % N] / np.sqrt(N)


def qft_network(k):
    """Entire network ``Q(F)`` as a sum of rank-one column subnetworks.

    Column ``n`` carries the transitors/rotator for ``F[:, n] |n>``; the
    sum law joins the ``2**k`` columns into one network.
    """
    F = qft_matrix(k)
    N = F.shape[0]
    rows = np.arange(N)
    columns = [
        Network(N, (ElementBatch(rows, np.full(N, n), F[:, n], _sorted=True),), f"B({n})H M_0{n}")
        for n in range(N)
    ]
    net = compose_sum(columns, label="Q(F)")
    return net


def qft_inverse_network(k):
    return q_of(qft_matrix(k).conj().T, label="Q(F^-1)")


def hadamard_all(k):
    """Dense ``H^{(x)k}``."""
    H = np.ones((1, 1), dtype=np.complex128)
    for _ in range(k):
        H = np.kron(H, HADAMARD)
    return H
