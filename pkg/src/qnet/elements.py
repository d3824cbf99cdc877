"""Circuit elements acting on (register) x (aux qubit) states.

Every rotator and transitor has the form ``I + (M (x) I_A) . C_dag`` where
``C_dag = I_R (x) |1><0|`` is the jointer. Since ``C_dag**2 == 0`` the
exponential stops after the linear term, so applying an element only ever
*adds* a multiple of one branch-0 amplitude into branch 1. Elements are
therefore stored symbolically and applied as O(1) amplitude updates; dense
matrices are built only by :func:`materialize_element` for checking.

Internally states are handled as arrays of shape ``(2, R, d)``: aux branch,
replica (identity factor of an enclosing register) and register index.
"""

from dataclasses import dataclass, field
from functools import reduce
from operator import mul

import numpy as np

from .exceptions import RejectedInputError
from .registers import AugmentedState
from .utils.validation import as_complex, check_index, check_operator

__all__ = [
    "Connector",
    "ElementBatch",
    "EXCHANGE_ORDERING",
    "External",
    "Jointer",
    "Measure",
    "OpCounter",
    "ProjectorD",
    "ProjectorP",
    "Rotator",
    "Transitor",
    "apply_element",
    "build_rotator",
    "build_transitor",
    "element_from_json",
    "element_to_json",
    "exchange_factors",
    "exchange_gate",
    "exchange_target",
    "materialize_element",
]


class OpCounter:
    """Tally of elementary amplitude updates performed during evaluation."""

    def __init__(self):
        self.count = 0

    def add(self, n):
        self.count += int(n)

    def __repr__(self):
        return f"OpCounter(count={self.count})"


@dataclass(frozen=True)
class Rotator:
    m: int
    amp: complex

    def __post_init__(self):
        object.__setattr__(self, "amp", as_complex(self.amp))

    def max_index(self):
        return self.m


@dataclass(frozen=True)
class Transitor:
    m: int
    n: int
    amp: complex

    def __post_init__(self):
        if self.m == self.n:
            raise RejectedInputError("transitor needs m != n; use a rotator for diagonal entries")
        object.__setattr__(self, "amp", as_complex(self.amp))

    def max_index(self):
        return max(self.m, self.n)


@dataclass(frozen=True)
class Jointer:
    """``C_dag``: moves branch 0 into branch 1."""


@dataclass(frozen=True)
class Connector:
    """``C``: moves branch 1 back into branch 0."""


@dataclass(frozen=True)
class ProjectorD:
    """``D = C_dag C``: keeps the result branch."""


@dataclass(frozen=True)
class ProjectorP:
    """``P = C C_dag``: keeps the input branch."""


@dataclass(frozen=True, eq=False)
class External:
    """A dense operator built elsewhere and plugged into a network.

    With ``register_only=True`` the operator acts as ``op (x) I_A`` on both
    branches. Otherwise it behaves like a native ``Q(op)``: branch 1 gains
    ``op`` applied to branch 0. When ``target`` is given, ``op`` acts on that
    register of ``register_dims`` only (identity elsewhere).
    """

    op: np.ndarray
    register_only: bool = True
    register_dims: tuple = None
    target: int = None

    def __post_init__(self):
        op = check_operator(self.op, square=True, name="external op")
        op.flags.writeable = False
        object.__setattr__(self, "op", op)
        if (self.register_dims is None) != (self.target is None):
            raise RejectedInputError("external: give both register_dims and target, or neither")
        if self.register_dims is not None:
            dims = tuple(int(d) for d in self.register_dims)
            check_index(self.target, len(dims), "target")
            if dims[self.target] != op.shape[0]:
                raise RejectedInputError(
                    f"external op dim {op.shape[0]} != register {self.target} dim {dims[self.target]}"
                )
            object.__setattr__(self, "register_dims", dims)

    @property
    def dim(self):
        if self.register_dims is None:
            return self.op.shape[0]
        return reduce(mul, self.register_dims, 1)

    def full_operator(self):
        if self.register_dims is None:
            return np.array(self.op)
        left = reduce(mul, self.register_dims[: self.target], 1)
        right = reduce(mul, self.register_dims[self.target + 1:], 1)
        return np.kron(np.kron(np.eye(left), self.op), np.eye(right))

    def __eq__(self, other):
        if not isinstance(other, External):
            return NotImplemented
        return (
            self.register_only == other.register_only
            and self.register_dims == other.register_dims
            and self.target == other.target
            and np.array_equal(self.op, other.op)
        )

    __hash__ = None


@dataclass(frozen=True)
class Measure:
    """Projective stage ``I (x) |u><u| (x) I_A`` onto one register outcome.

    No renormalization: the squared norm that survives is the outcome
    probability times the incoming norm.
    """

    register_dims: tuple
    register: int
    outcome: int

    def __post_init__(self):
        dims = tuple(int(d) for d in self.register_dims)
        object.__setattr__(self, "register_dims", dims)
        check_index(self.register, len(dims), "register")
        check_index(self.outcome, dims[self.register], "outcome")

    @property
    def dim(self):
        return reduce(mul, self.register_dims, 1)

    def mask(self):
        idx = np.arange(self.dim)
        right = reduce(mul, self.register_dims[self.register + 1:], 1)
        digit = (idx // right) % self.register_dims[self.register]
        return digit == self.outcome


@dataclass(frozen=True, eq=False)
class ElementBatch:
    """A packed run of rotators (``row == col``) and transitors.

    All members commute, so the batch is applied in one vectorized update.
    Entries are kept in row-major order.
    """

    rows: np.ndarray
    cols: np.ndarray
    amps: np.ndarray
    _sorted: bool = field(default=False, repr=False)

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64).reshape(-1)
        cols = np.array(self.cols, dtype=np.int64).reshape(-1)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if not (rows.shape == cols.shape == amps.shape):
            raise RejectedInputError("element batch arrays must have equal length")
        if rows.size and (rows.min() < 0 or cols.min() < 0):
            raise RejectedInputError("element batch indices must be non-negative")
        if not np.all(np.isfinite(amps)):
            raise RejectedInputError("element batch amplitudes must be finite")
        if not self._sorted and rows.size:
            order = np.lexsort((cols, rows))
            rows, cols, amps = rows[order], cols[order], amps[order]
        for a in (rows, cols, amps):
            a.flags.writeable = False
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "_sorted", True)

    @classmethod
    def from_elements(cls, elements):
        rows, cols, amps = [], [], []
        for e in elements:
            if isinstance(e, Rotator):
                rows.append(e.m)
                cols.append(e.m)
            elif isinstance(e, Transitor):
                rows.append(e.m)
                cols.append(e.n)
            else:
                raise RejectedInputError(f"only rotators/transitors can be packed, got {type(e).__name__}")
            amps.append(e.amp)
        # Order is preserved so JSON round-trips stay byte-identical.
        return cls(np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                   np.array(amps, dtype=np.complex128), _sorted=True)

    def __len__(self):
        return int(self.rows.size)

    def __iter__(self):
        for m, n, a in zip(self.rows.tolist(), self.cols.tolist(), self.amps.tolist()):
            yield Rotator(m, a) if m == n else Transitor(m, n, a)

    def max_index(self):
        if not self.rows.size:
            return -1
        return int(max(self.rows.max(), self.cols.max()))

    def negated(self):
        return ElementBatch(self.rows, self.cols, -self.amps, _sorted=True)

    def __eq__(self, other):
        if not isinstance(other, ElementBatch):
            return NotImplemented
        return (
            np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.amps, other.amps)
        )

    __hash__ = None


PURE_ELEMENTS = (Rotator, Transitor, ElementBatch)


def build_rotator(m, amp, dim):
    return Rotator(check_index(m, dim, "m"), amp)


def build_transitor(m, n, amp, dim):
    m = check_index(m, dim, "m")
    n = check_index(n, dim, "n")
    return Transitor(m, n, amp)


def _element_dim_ok(e, d):
    if isinstance(e, (Rotator, Transitor, ElementBatch)):
        return e.max_index() < d
    if isinstance(e, (External, Measure)):
        return e.dim == d
    return True


def _apply_targeted(op, x, register_dims, target):
    """Apply ``op`` to one register along the last axis of ``x``."""
    lead = x.shape[:-1]
    y = x.reshape(lead + tuple(register_dims))
    axis = len(lead) + target
    y = np.tensordot(op, y, axes=([1], [axis]))
    y = np.moveaxis(y, 0, axis)
    return y.reshape(x.shape)


def _apply_inplace(e, work, counter=None):
    """Apply element ``e`` to ``work`` of shape ``(2, R, d)`` in place."""
    _, R, d = work.shape
    if isinstance(e, Rotator):
        work[1, :, e.m] += e.amp * work[0, :, e.m]
        n_ops = R
    elif isinstance(e, Transitor):
        work[1, :, e.m] += e.amp * work[0, :, e.n]
        n_ops = R
    elif isinstance(e, ElementBatch):
        if len(e):
            contrib = e.amps * work[0][:, e.cols]
            if R == 1:
                work[1, 0] += np.bincount(e.rows, weights=contrib[0].real, minlength=d)
                work[1, 0] += 1j * np.bincount(e.rows, weights=contrib[0].imag, minlength=d)
            else:
                np.add.at(work[1], (slice(None), e.rows), contrib)
        n_ops = R * len(e)
    elif isinstance(e, Jointer):
        work[1] = work[0]
        work[0] = 0.0
        n_ops = 2 * R * d
    elif isinstance(e, Connector):
        work[0] = work[1]
        work[1] = 0.0
        n_ops = 2 * R * d
    elif isinstance(e, ProjectorD):
        work[0] = 0.0
        n_ops = R * d
    elif isinstance(e, ProjectorP):
        work[1] = 0.0
        n_ops = R * d
    elif isinstance(e, External):
        k = e.op.shape[0]
        if e.register_dims is None:
            if e.register_only:
                work[:] = work @ e.op.T
            else:
                work[1] += work[0] @ e.op.T
        elif e.register_only:
            work[:] = _apply_targeted(e.op, work, e.register_dims, e.target)
        else:
            work[1] += _apply_targeted(e.op, work[0], e.register_dims, e.target)
        n_ops = (2 if e.register_only else 1) * R * d * k
    elif isinstance(e, Measure):
        work[:, :, ~e.mask()] = 0.0
        n_ops = 2 * R * d
    else:
        raise RejectedInputError(f"unknown element type {type(e).__name__}")
    if counter is not None:
        counter.add(n_ops)


def apply_element(e, s, counter=None):
    """Return a new state with element ``e`` applied to ``s``."""
    if not isinstance(s, AugmentedState):
        raise RejectedInputError("apply_element expects an AugmentedState")
    if not s.layout.has_aux:
        raise RejectedInputError("elements act on augmented states; layout has no aux qubit")
    d = s.dim
    if not _element_dim_ok(e, d):
        raise RejectedInputError(f"element {e!r} does not fit register dimension {d}")
    work = np.array(s.amplitudes).reshape(2, 1, d)
    _apply_inplace(e, work, counter)
    return AugmentedState(s.layout, work.reshape(-1))


def materialize_element(e, dim):
    """Dense ``(2 dim) x (2 dim)`` matrix of ``e`` in the aux-outermost layout."""
    if not _element_dim_ok(e, dim):
        raise RejectedInputError(f"element {e!r} does not fit register dimension {dim}")
    I = np.eye(dim, dtype=np.complex128)
    Z = np.zeros((dim, dim), dtype=np.complex128)
    if isinstance(e, (Rotator, Transitor, ElementBatch)):
        M = np.eye(2 * dim, dtype=np.complex128)
        members = [e] if not isinstance(e, ElementBatch) else list(e)
        for x in members:
            col = x.m if isinstance(x, Rotator) else x.n
            M[dim + x.m, col] += x.amp
        return M
    if isinstance(e, Jointer):
        return np.block([[Z, Z], [I, Z]])
    if isinstance(e, Connector):
        return np.block([[Z, I], [Z, Z]])
    if isinstance(e, ProjectorD):
        return np.block([[Z, Z], [Z, I]])
    if isinstance(e, ProjectorP):
        return np.block([[I, Z], [Z, Z]])
    if isinstance(e, External):
        full = e.full_operator().astype(np.complex128)
        if e.register_only:
            return np.block([[full, Z], [Z, full]])
        return np.block([[I, Z], [full, I]])
    if isinstance(e, Measure):
        P = np.diag(e.mask().astype(np.complex128))
        return np.block([[P, Z], [Z, P]])
    raise RejectedInputError(f"unknown element type {type(e).__name__}")


# --- generalized exchange gates -------------------------------------------

def _printed_exchange_factors(m, n):
    # Adjacent exchanges in matrix (left-to-right) order as printed.
    if n < m:
        return [(j + 1, j) for j in range(n, m)]
    if n > m:
        return [(n - j - 1, n - j) for j in range(0, n - m)]
    return []


def _trace_basis(factors, n):
    """Image of ``|n>`` under the matrix product of adjacent swaps ``factors``."""
    x = n
    for a, b in reversed(factors):
        if x == a:
            x = b
        elif x == b:
            x = a
    return x


def _resolve_exchange_ordering():
    # The printed products are checked against E(m,n)|n> = |m>; an ordering
    # that fails is replaced by its reverse.
    result = {}
    for case, (m, n) in (("n<m", (3, 0)), ("n>m", (0, 3))):
        printed = _printed_exchange_factors(m, n)
        if _trace_basis(printed, n) == m:
            result[case] = "printed"
        elif _trace_basis(printed[::-1], n) == m:
            result[case] = "reversed"
        else:  # pragma: no cover - neither ordering works
            raise RuntimeError(f"no exchange ordering satisfies E|n>=|m> for case {case}")
    return result


EXCHANGE_ORDERING = _resolve_exchange_ordering()


def exchange_factors(m, n):
    """Adjacent exchanges ``[(a, a+-1), ...]`` whose matrix product is ``E(m, n)``."""
    factors = _printed_exchange_factors(m, n)
    case = "n<m" if n < m else "n>m"
    if m != n and EXCHANGE_ORDERING[case] == "reversed":
        factors = factors[::-1]
    return factors


def exchange_target(m, n):
    """Row of the single nonzero in column ``n`` of ``E(m, n)``."""
    return _trace_basis(exchange_factors(m, n), n)


def _adjacent_exchange(a, b, dim):
    E = np.eye(dim, dtype=np.complex128)
    E[[a, b]] = E[[b, a]]
    return E


def exchange_gate(m, n, dim):
    """Dense generalized exchange gate ``E(m, n)`` with ``E(m, n)|n> = |m>``."""
    m = check_index(m, dim, "m")
    n = check_index(n, dim, "n")
    E = np.eye(dim, dtype=np.complex128)
    for a, b in exchange_factors(m, n):
        E = E @ _adjacent_exchange(a, b, dim)
    return E


# --- JSON -----------------------------------------------------------------

def _amp_json(z):
    z = complex(z)
    return [z.real, z.imag]


def element_to_json(e):
    if isinstance(e, Rotator):
        return {"type": "rotator", "m": e.m, "amp": _amp_json(e.amp)}
    if isinstance(e, Transitor):
        return {"type": "transitor", "m": e.m, "n": e.n, "amp": _amp_json(e.amp)}
    if isinstance(e, Jointer):
        return {"type": "jointer"}
    if isinstance(e, Connector):
        return {"type": "connector"}
    if isinstance(e, ProjectorD):
        return {"type": "proj_d"}
    if isinstance(e, ProjectorP):
        return {"type": "proj_p"}
    if isinstance(e, External):
        from .linalg import operator_to_json

        out = {"type": "external", "matrix": operator_to_json(e.op), "register_only": e.register_only}
        if e.register_dims is not None:
            out["register_dims"] = list(e.register_dims)
            out["target"] = e.target
        return out
    if isinstance(e, Measure):
        return {"type": "measure", "register_dims": list(e.register_dims),
                "register": e.register, "outcome": e.outcome}
    raise RejectedInputError(f"cannot encode element of type {type(e).__name__}")


def element_from_json(obj):
    try:
        kind = obj["type"]
        if kind == "rotator":
            return Rotator(int(obj["m"]), as_complex(obj["amp"]))
        if kind == "transitor":
            return Transitor(int(obj["m"]), int(obj["n"]), as_complex(obj["amp"]))
        if kind == "jointer":
            return Jointer()
        if kind == "connector":
            return Connector()
        if kind == "proj_d":
            return ProjectorD()
        if kind == "proj_p":
            return ProjectorP()
        if kind == "external":
            from .linalg import operator_from_json

            dims = obj.get("register_dims")
            return External(operator_from_json(obj["matrix"]), bool(obj["register_only"]),
                            tuple(dims) if dims is not None else None, obj.get("target"))
        if kind == "measure":
            return Measure(tuple(obj["register_dims"]), int(obj["register"]), int(obj["outcome"]))
    except (KeyError, TypeError) as exc:
        raise RejectedInputError(f"malformed element JSON: {obj!r}") from exc
    raise RejectedInputError(f"unknown element type {kind!r}")
