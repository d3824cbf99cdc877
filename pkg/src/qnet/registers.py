"""Register layouts, basis-index encoding and augmented states.

Conventions used across the package:

* Qubits are big-endian: the first listed qubit is the most significant bit.
* Registers are ordered the same way: the first register is the most
  significant factor of the register index.
* The auxiliary qubit is the outermost (slowest-varying) factor, so the
  augmented index of register index ``m`` with aux value ``b`` is
  ``b * register_dim + m``.
"""

import json
from dataclasses import dataclass
from functools import reduce
from operator import mul

import numpy as np

from .exceptions import DegenerateBranchError, RejectedInputError
from .utils.validation import check_capacity, check_vector

__all__ = [
    "AugmentedState",
    "RegisterLayout",
    "decode_index",
    "encode_index",
    "load_state",
    "make_augmented",
    "project_aux",
    "save_state",
    "state_from_json",
    "state_to_json",
]


@dataclass(frozen=True)
class RegisterLayout:
    register_dims: tuple
    has_aux: bool = True

    def __post_init__(self):
        dims = tuple(int(d) for d in self.register_dims)
        if not dims or any(d < 1 for d in dims):
            raise RejectedInputError(f"register_dims must be positive integers, got {self.register_dims!r}")
        object.__setattr__(self, "register_dims", dims)
        object.__setattr__(self, "has_aux", bool(self.has_aux))
        check_capacity(self.register_dim, what="register dimension")

    @classmethod
    def single(cls, dim, has_aux=True):
        return cls((dim,), has_aux)

    @property
    def register_dim(self):
        return reduce(mul, self.register_dims, 1)

    @property
    def total_dim(self):
        return self.register_dim * (2 if self.has_aux else 1)


@dataclass(frozen=True, eq=False)
class AugmentedState:
    """Amplitudes over (register space) x (aux qubit), aux outermost.

    Not required to be normalized: network evaluation produces a preserved
    input branch plus an unnormalized result branch.
    """

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = check_vector(self.amplitudes, dim=self.layout.total_dim, name="amplitudes")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self):
        return self.layout.register_dim

    def branch(self, b):
        if not self.layout.has_aux:
            raise RejectedInputError("layout has no auxiliary qubit")
        if b not in (0, 1):
            raise RejectedInputError(f"branch must be 0 or 1, got {b!r}")
        d = self.dim
        return self.amplitudes[b * d:(b + 1) * d].copy()

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def with_amplitudes(self, amplitudes):
        return AugmentedState(self.layout, amplitudes)

    def __eq__(self, other):
        if not isinstance(other, AugmentedState):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None


def encode_index(bits):
    """Big-endian bit string to basis index: ``[1, 0] -> 2``."""
    m = 0
    for i, b in enumerate(bits):
        if isinstance(b, bool) or b not in (0, 1):
            raise RejectedInputError(f"digit {i} is not binary: {b!r}")
        m = 2 * m + int(b)
    return m


def decode_index(m, k):
    """Inverse of :func:`encode_index` for ``k`` qubits."""
    if not 0 <= m < 2**k:
        raise RejectedInputError(f"index {m} out of range for {k} qubits")
    return [(m >> (k - 1 - i)) & 1 for i in range(k)]


def make_augmented(psi, layout):
    """Attach an aux qubit in ``|0>``: ``psi`` becomes branch 0, branch 1 is zero."""
    if not isinstance(layout, RegisterLayout):
        layout = RegisterLayout(tuple(layout))
    if not layout.has_aux:
        raise RejectedInputError("make_augmented needs a layout with an auxiliary qubit")
    psi = check_vector(psi, dim=layout.register_dim, name="psi")
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    amps[: layout.register_dim] = psi
    return AugmentedState(layout, amps)


def project_aux(s, branch, renormalize=False):
    """Register-space vector of one aux branch.

    Branch 1 holds the computed result, branch 0 the preserved input.
    """
    if not s.layout.has_aux:
        raise RejectedInputError("state has no auxiliary qubit")
    v = s.branch(branch)
    if renormalize:
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise DegenerateBranchError(f"branch {branch} has zero norm; cannot renormalize")
        v = v / nrm
    return v


def state_to_json(s):
    return {
        "register_dims": list(s.layout.register_dims),
        "has_aux": s.layout.has_aux,
        "amplitudes": [[float(z.real), float(z.imag)] for z in s.amplitudes],
    }


def state_from_json(obj):
    try:
        layout = RegisterLayout(tuple(obj["register_dims"]), bool(obj.get("has_aux", True)))
        pairs = obj["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise RejectedInputError("state JSON needs 'register_dims' and 'amplitudes'") from exc
    if len(pairs) != layout.total_dim:
        raise RejectedInputError(f"state JSON has {len(pairs)} amplitudes, expected {layout.total_dim}")
    amps = np.array([complex(float(re), float(im)) for re, im in pairs], dtype=np.complex128)
    return AugmentedState(layout, amps)


def load_state(path):
    with open(path) as fh:
        return state_from_json(json.load(fh))


def save_state(s, path):
    with open(path, "w") as fh:
        json.dump(state_to_json(s), fh)
