"""Dense complex linear algebra and the exact-propagator oracle.

Operators are plain ``complex128`` numpy arrays; this module adds validated
entry points plus the JSON matrix format used by the CLI.
"""

import json
import math

import numpy as np

from ._config import DEFAULT_EXPM_CAP, cap_dim
from .exceptions import CapacityError, RejectedInputError
from .utils.validation import check_operator, check_vector

__all__ = [
    "expm_oracle",
    "identity",
    "kron",
    "load_operator",
    "mat_apply",
    "operator_from_json",
    "operator_to_json",
    "save_operator",
    "zeros",
]


def identity(dim):
    return np.eye(dim, dtype=np.complex128)


def zeros(rows, cols=None):
    return np.zeros((rows, rows if cols is None else cols), dtype=np.complex128)


def mat_apply(A, v):
    """Return ``A @ v`` after checking ``A.cols == v.dim``."""
    A = check_operator(A, name="A")
    v = check_vector(v, name="v")
    if A.shape[1] != v.shape[0]:
        raise RejectedInputError(
            f"dimension mismatch: operator has {A.shape[1]} columns, vector has {v.shape[0]} entries"
        )
    return A @ v


def kron(A, B, cap=None):
    """Kronecker product with the first factor most significant.

    ``kron(A, B)[i*B.rows + k, j*B.cols + l] == A[i, j] * B[k, l]``.
    """
    A = check_operator(A, name="A")
    B = check_operator(B, name="B")
    cap = cap_dim() if cap is None else cap
    rows = A.shape[0] * B.shape[0]
    cols = A.shape[1] * B.shape[1]
    if max(rows, cols) > cap:
        raise CapacityError(f"kron result {rows}x{cols} exceeds dimension cap {cap}")
    return np.kron(A, B)


# Pade(13) coefficients for scaling and squaring (Higham 2005).
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def expm_oracle(A, cap=DEFAULT_EXPM_CAP):
    """Matrix exponential by scaling and squaring with a degree-13 Pade approximant.

    Slow but reliable; used only as the reference propagator in checks.
    """
    A = check_operator(A, square=True, name="A")
    n = A.shape[0]
    if n > cap:
        raise CapacityError(f"expm_oracle dimension {n} exceeds cap {cap}")
    norm = np.linalg.norm(A, 1)
    if norm == 0.0:
        return identity(n)
    s = max(0, int(math.ceil(math.log2(norm / _THETA13)))) if norm > _THETA13 else 0
    X = A / (2.0**s)

    b = _PADE13
    ident = identity(n)
    X2 = X @ X
    X4 = X2 @ X2
    X6 = X2 @ X4
    U = X @ (
        X6 @ (b[13] * X6 + b[11] * X4 + b[9] * X2)
        + b[7] * X6
        + b[5] * X4
        + b[3] * X2
        + b[1] * ident
    )
    V = (
        X6 @ (b[12] * X6 + b[10] * X4 + b[8] * X2)
        + b[6] * X6
        + b[4] * X4
        + b[2] * X2
        + b[0] * ident
    )
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R


def operator_to_json(A):
    A = check_operator(A)
    rows, cols = A.shape
    entries = [[float(z.real), float(z.imag)] for z in A.reshape(-1)]
    return {"rows": rows, "cols": cols, "entries": entries}


def operator_from_json(obj):
    """Parse ``{"rows": R, "cols": C, "entries": [[re, im], ...]}`` (row-major)."""
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise RejectedInputError("matrix JSON needs integer 'rows', 'cols' and an 'entries' list") from exc
    if rows < 1 or cols < 1:
        raise RejectedInputError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if len(entries) != rows * cols:
        raise RejectedInputError(
            f"matrix JSON has {len(entries)} entries, expected rows*cols = {rows * cols}"
        )
    try:
        flat = np.array([complex(float(re), float(im)) for re, im in entries], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise RejectedInputError("matrix entries must be [re, im] pairs") from exc
    return check_operator(flat.reshape(rows, cols))


def load_operator(path):
    with open(path) as fh:
        return operator_from_json(json.load(fh))


def save_operator(A, path):
    with open(path, "w") as fh:
        json.dump(operator_to_json(A), fh)
