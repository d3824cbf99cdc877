"""Input validation helpers.

scikit-learn's ``check_array`` rejects complex data, so operators and state
vectors get their own checks here. All helpers return a fresh complex128
array (or a plain int) and raise :class:`~qnet.exceptions.RejectedInputError`
on failure.
"""

import numbers

import numpy as np

from .._config import cap_dim
from ..exceptions import CapacityError, RejectedInputError

__all__ = [
    "as_complex",
    "check_capacity",
    "check_index",
    "check_operator",
    "check_vector",
    "is_power_of_two",
]


def as_complex(value, name="amplitude"):
    """Coerce a scalar (or ``[re, im]`` pair) to a finite Python complex."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        value = complex(float(value[0]), float(value[1]))
    try:
        c = complex(value)
    except (TypeError, ValueError) as exc:
        raise RejectedInputError(f"{name} is not a number: {value!r}") from exc
    if not (np.isfinite(c.real) and np.isfinite(c.imag)):
        raise RejectedInputError(f"{name} must be finite, got {c!r}")
    return c


def check_operator(A, *, square=False, name="operator", dim=None):
    """Validate a 2-D complex matrix.

    Parameters
    ----------
    A : array_like
        Candidate matrix.
    square : bool, default=False
        Require ``rows == cols``.
    name : str
        Used in error messages.
    dim : int, optional
        Required number of rows (and columns when ``square``).
    """
    try:
        arr = np.array(A, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise RejectedInputError(f"{name} is not a numeric matrix") from exc
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise RejectedInputError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise RejectedInputError(f"{name} must be square, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise RejectedInputError(f"{name} must have {dim} rows, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise RejectedInputError(f"{name} contains non-finite entries")
    return arr


def check_vector(v, *, dim=None, name="vector"):
    try:
        arr = np.array(v, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise RejectedInputError(f"{name} is not a numeric vector") from exc
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise RejectedInputError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise RejectedInputError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise RejectedInputError(f"{name} contains non-finite entries")
    return arr


def check_index(i, bound, name="index"):
    """Return ``int(i)`` if ``0 <= i < bound``."""
    if isinstance(i, bool) or not isinstance(i, numbers.Integral):
        raise RejectedInputError(f"{name} must be an integer, got {i!r}")
    i = int(i)
    if not 0 <= i < bound:
        raise RejectedInputError(f"{name}={i} out of range [0, {bound})")
    return i


def check_capacity(dim, cap=None, what="dimension"):
    cap = cap_dim() if cap is None else cap
    if dim > cap:
        raise CapacityError(f"{what} {dim} exceeds cap {cap}")
    return dim


def is_power_of_two(n):
    return isinstance(n, numbers.Integral) and n > 0 and (n & (n - 1)) == 0
