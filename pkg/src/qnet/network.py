"""Network IR and the composition laws.

A :class:`Network` is an ordered list of stages, each an element or a nested
network, listed in *application order* (the first stage acts first on the
state). Three composition laws build larger networks:

``compose_sum``
    ``Q(U1 + ... + Ur) = Q(U1)...Q(Ur)``: stages are simply concatenated,
    which is valid because every rotator/transitor factor commutes.
``compose_product``
    ``Q(U1 U2 ... Ur) = I + C_dag (prod_j C Q(Uj)) C C_dag``: subnetworks are
    chained through connectors. The first listed factor is leftmost in the
    matrix product, so it acts *last* on the state.
``two_register_lift``
    ``(I_R)_in (x) [C_dag (prod_j C Q(Uj)) C C_dag]_out``: the nilpotent
    interior replicated over an untouched input register.

Nested networks double as labeled "slots": :func:`replace_stage` swaps a
subnetwork by label.
"""

import json
from dataclasses import dataclass, replace
from functools import reduce
from operator import mul

import numpy as np

from .elements import (
    PURE_ELEMENTS,
    Connector,
    ElementBatch,
    External,
    Jointer,
    Rotator,
    Transitor,
    _apply_inplace,
    _element_dim_ok,
    element_from_json,
    element_to_json,
    materialize_element,
)
from .exceptions import CompositionError, NonInvertibleError, RejectedInputError
from .registers import AugmentedState, RegisterLayout, make_augmented
from .utils.validation import check_capacity, check_index, check_operator

__all__ = [
    "Network",
    "compose_product",
    "compose_sum",
    "count_elements",
    "embed_external",
    "evaluate",
    "evaluate_trace",
    "find_stage",
    "interior",
    "inverse_network",
    "load_network",
    "materialize_network",
    "network_from_json",
    "network_to_json",
    "q_of",
    "replace_stage",
    "run_on_vector",
    "save_network",
    "tensor_lift",
    "two_register_lift",
]


@dataclass(frozen=True, eq=False)
class Network:
    """An executable network over a register of dimension ``dim``.

    Parameters
    ----------
    dim : int
        Register dimension the stages act on.
    stages : tuple
        Elements and nested networks in application order.
    label : str
        Free text; also the handle used by :func:`replace_stage`.
    identity_term : bool
        When true the network acts as ``I + (stages)``, the reversible form
        of a product-composed network.
    replicas : int
        The network acts as ``I_replicas (x) (stages)``, i.e. on a register
        of dimension ``replicas * dim`` whose leading factor is untouched.
    """

    dim: int
    stages: tuple = ()
    label: str = ""
    identity_term: bool = False
    replicas: int = 1

    def __post_init__(self):
        if int(self.dim) < 1 or int(self.replicas) < 1:
            raise RejectedInputError("network dim and replicas must be positive")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "replicas", int(self.replicas))
        stages = tuple(self.stages)
        for s in stages:
            if isinstance(s, Network):
                if s.register_dim != self.dim:
                    raise RejectedInputError(
                        f"subnetwork {s.label!r} acts on dim {s.register_dim}, parent has dim {self.dim}"
                    )
            elif not _element_dim_ok(s, self.dim):
                raise RejectedInputError(f"stage {s!r} does not fit register dimension {self.dim}")
        object.__setattr__(self, "stages", stages)

    @property
    def register_dim(self):
        return self.dim * self.replicas

    def is_pure(self):
        """True when built only from rotators/transitors (sum-composable, invertible)."""
        if self.identity_term or self.replicas != 1:
            return False
        return all(
            s.is_pure() if isinstance(s, Network) else isinstance(s, PURE_ELEMENTS)
            for s in self.stages
        )

    def elements(self):
        """Flat iterator over rotator/transitor elements (nested networks expanded)."""
        for s in self.stages:
            if isinstance(s, Network):
                yield from s.elements()
            elif isinstance(s, ElementBatch):
                yield from s
            elif isinstance(s, (Rotator, Transitor)):
                yield s

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return network_to_json(self) == network_to_json(other)

    __hash__ = None

    def __repr__(self):
        extra = ", identity_term=True" if self.identity_term else ""
        extra += f", replicas={self.replicas}" if self.replicas != 1 else ""
        return f"Network(dim={self.dim}, stages={len(self.stages)}, label={self.label!r}{extra})"


def count_elements(net):
    """Number of rotators and transitors in ``net`` (nested included)."""
    total = 0
    for s in net.stages:
        if isinstance(s, Network):
            total += count_elements(s)
        elif isinstance(s, ElementBatch):
            total += len(s)
        elif isinstance(s, (Rotator, Transitor)):
            total += 1
    return total


def q_of(U, threshold=0.0, label="Q(U)"):
    """Elementwise network ``Q(U)``.

    One rotator per nonzero diagonal entry, one transitor per nonzero
    off-diagonal entry. Exact zeros are always skipped; entries with
    ``abs <= threshold`` are skipped too when ``threshold > 0``.
    """
    U = check_operator(U, square=True, name="U")
    mask = U != 0
    if threshold > 0:
        mask &= np.abs(U) > threshold
    rows, cols = np.nonzero(mask)
    stages = (ElementBatch(rows, cols, U[rows, cols], _sorted=True),) if rows.size else ()
    return Network(U.shape[0], stages, label)


def _pure_or_raise(net, err):
    if not isinstance(net, Network):
        raise err(f"expected a Network, got {type(net).__name__}")
    if not net.is_pure():
        raise err(f"network {net.label!r} contains stages other than rotators/transitors")


def inverse_network(net):
    """``Q^{-1}``: same elements with negated amplitudes."""
    _pure_or_raise(net, NonInvertibleError)

    def neg(s):
        if isinstance(s, Network):
            return inverse_network(s)
        if isinstance(s, ElementBatch):
            return s.negated()
        if isinstance(s, Rotator):
            return Rotator(s.m, -s.amp)
        return Transitor(s.m, s.n, -s.amp)

    label = net.label[:-3] if net.label.endswith("^-1") else net.label + "^-1"
    return Network(net.dim, tuple(neg(s) for s in net.stages), label)


def _run(net, work, counter):
    """Evaluate ``net`` on ``work`` of shape ``(2, R, net.register_dim)``; returns the result array."""
    _, R, _ = work.shape
    w = work.reshape(2, R * net.replicas, net.dim)
    saved = w.copy() if net.identity_term else None
    for s in net.stages:
        if isinstance(s, Network):
            w = _run(s, w, counter)
        else:
            _apply_inplace(s, w, counter)
    if saved is not None:
        w += saved
        if counter is not None:
            counter.add(w.size)
    return w.reshape(2, R, net.register_dim)


def _check_state(net, s):
    if not isinstance(s, AugmentedState):
        raise RejectedInputError("evaluate expects an AugmentedState")
    if not s.layout.has_aux:
        raise RejectedInputError("networks act on augmented states; layout has no aux qubit")
    if s.dim != net.register_dim:
        raise RejectedInputError(f"state register dim {s.dim} != network register dim {net.register_dim}")


def evaluate(net, s, counter=None):
    """Apply ``net`` to augmented state ``s``; pure, returns a new state.

    Cost is one amplitude update per rotator/transitor plus O(dim) per
    jointer/connector/projector; no dense matrix is formed.
    """
    _check_state(net, s)
    work = np.array(s.amplitudes).reshape(2, 1, s.dim)
    out = _run(net, work, counter)
    return AugmentedState(s.layout, out.reshape(-1))


def evaluate_trace(net, s):
    """States after each top-level stage (the identity term, if any, is not added)."""
    _check_state(net, s)
    w = np.array(s.amplitudes).reshape(2, net.replicas, net.dim)
    trace = []
    for st in net.stages:
        if isinstance(st, Network):
            w = _run(st, w, None)
        else:
            _apply_inplace(st, w, None)
        trace.append(AugmentedState(s.layout, w.reshape(-1).copy()))
    return trace


def run_on_vector(net, psi, branch=1):
    """Evaluate ``net`` on ``psi (x) |0>`` and return one branch."""
    layout = RegisterLayout((net.register_dim,))
    out = evaluate(net, make_augmented(psi, layout))
    return out.branch(branch)


def _block_lift(M, dim, replicas):
    if replicas == 1:
        return M
    I = np.eye(replicas)
    blocks = [[np.kron(I, M[a * dim:(a + 1) * dim, b * dim:(b + 1) * dim]) for b in (0, 1)] for a in (0, 1)]
    return np.block(blocks)


def materialize_network(net, cap=None):
    """Dense matrix of ``net`` on the augmented space (for verification only)."""
    check_capacity(2 * net.register_dim, cap, what="augmented dimension")
    d = net.dim
    M = np.eye(2 * d, dtype=np.complex128)
    for s in net.stages:
        S = materialize_network(s, cap) if isinstance(s, Network) else materialize_element(s, d)
        M = S @ M
    if net.identity_term:
        M = M + np.eye(2 * d)
    return _block_lift(M, d, net.replicas)


def compose_sum(nets, label="sum"):
    """``Q(U1 + ... + Ur)`` from ``[Q(U1), ..., Q(Ur)]``."""
    nets = list(nets)
    if not nets:
        raise RejectedInputError("compose_sum needs at least one network")
    if len(nets) == 1:
        _pure_or_raise(nets[0], CompositionError)
        return nets[0]
    dims = {getattr(n, "dim", None) for n in nets}
    if len(dims) != 1:
        raise RejectedInputError(f"compose_sum: mixed dimensions {sorted(map(str, dims))}")
    for n in nets:
        _pure_or_raise(n, CompositionError)
    stages = tuple(s for n in nets for s in n.stages)
    return Network(nets[0].dim, stages, label)


def compose_product(nets, label="product"):
    """``Q(U1 U2 ... Ur)`` by connector chaining.

    The result acts as ``psi (x) |0> -> psi (x) |0> + (U1 U2 ... Ur psi) (x) |1>``.
    Stage layout (application order)::

        jointer, connector, Q(Ur), connector, ..., Q(U1), connector, jointer

    so the subnetwork for factor ``i`` (counting in application order from
    0) sits at stage ``2 + 2 i`` and its trailing connector at ``3 + 2 i``.
    """
    nets = list(nets)
    if not nets:
        raise RejectedInputError("compose_product needs at least one network")
    for n in nets:
        if not isinstance(n, Network):
            raise RejectedInputError(f"compose_product factors must be Networks, got {type(n).__name__}")
    dims = {n.register_dim for n in nets}
    if len(dims) != 1:
        raise RejectedInputError(f"compose_product: mixed dimensions {sorted(dims)}")
    stages = [Jointer(), Connector()]
    for n in reversed(nets):
        stages += [n, Connector()]
    stages.append(Jointer())
    return Network(nets[0].register_dim, tuple(stages), label, identity_term=True)


def interior(net):
    """The nilpotent part ``Q~`` of a product-composed network (drops ``I``)."""
    return replace(net, identity_term=False)


def two_register_lift(nets, in_dim=None, label="two-register"):
    """``(I_R)_in (x) Q~(U1...Ur)_out`` over layout ``[in_dim, dim]`` plus aux."""
    prod = compose_product(nets, label=label)
    in_dim = prod.dim if in_dim is None else int(in_dim)
    if in_dim < 1:
        raise RejectedInputError("in_dim must be positive")
    check_capacity(in_dim * prod.dim, what="two-register dimension")
    return Network(prod.dim, prod.stages, label, identity_term=False, replicas=in_dim)


def tensor_lift(U, slot, dims, label=None):
    """``Q(I (x) ... (x) U (x) ... (x) I)`` with ``U`` in position ``slot``.

    Built by index arithmetic from the nonzeros of ``U``; equal element for
    element to ``q_of`` of the dense Kronecker lift.
    """
    dims = [int(d) for d in dims]
    slot = check_index(slot, len(dims), "slot")
    U = check_operator(U, square=True, name="U", dim=dims[slot])
    total = check_capacity(reduce(mul, dims, 1), what="lifted dimension")
    left = reduce(mul, dims[:slot], 1)
    right = reduce(mul, dims[slot + 1:], 1)
    d = dims[slot]
    a, b = np.nonzero(U)
    amps = U[a, b]
    L = np.arange(left)[:, None, None]
    Rr = np.arange(right)[None, None, :]
    rows = (L * d * right + a[None, :, None] * right + Rr).reshape(-1)
    cols = (L * d * right + b[None, :, None] * right + Rr).reshape(-1)
    amps = np.broadcast_to(amps[None, :, None], (left, a.size, right)).reshape(-1)
    stages = (ElementBatch(rows, cols, amps),) if rows.size else ()
    return Network(total, stages, label or f"lift[{slot}]")


def embed_external(op, register_only=False, register_dims=None, target=None, label="external"):
    """Wrap a dense operator as a one-stage network.

    With the default ``register_only=False`` the stage behaves exactly like
    ``q_of(op)`` inside connector chains. ``register_only=True`` gives the
    plain ``op (x) I_A`` form used ahead of a chain.
    """
    e = External(op, register_only, register_dims, target)
    return Network(e.dim, (e,), label)


def find_stage(net, label):
    """First nested network with ``label`` (depth-first), or ``None``."""
    for s in net.stages:
        if isinstance(s, Network):
            if s.label == label:
                return s
            hit = find_stage(s, label)
            if hit is not None:
                return hit
    return None


def replace_stage(net, label, new):
    """Copy of ``net`` with every nested network labeled ``label`` replaced by ``new``."""
    stages = []
    for s in net.stages:
        if isinstance(s, Network):
            s = new if s.label == label else replace_stage(s, label, new)
        stages.append(s)
    return replace(net, stages=tuple(stages))


# --- JSON -----------------------------------------------------------------

def network_to_json(net):
    stages = []
    for s in net.stages:
        if isinstance(s, Network):
            sub = network_to_json(s)
            sub["type"] = "network"
            stages.append(sub)
        elif isinstance(s, ElementBatch):
            stages.extend(element_to_json(e) for e in s)
        else:
            stages.append(element_to_json(s))
    out = {"dim": net.dim, "label": net.label, "stages": stages}
    if net.identity_term:
        out["identity_term"] = True
    if net.replicas != 1:
        out["replicas"] = net.replicas
    return out


def network_from_json(obj):
    try:
        dim = int(obj["dim"])
        raw = obj["stages"]
    except (KeyError, TypeError, ValueError) as exc:
        raise RejectedInputError("network JSON needs 'dim' and 'stages'") from exc
    stages, run = [], []

    def flush():
        if run:
            stages.append(ElementBatch.from_elements(run) if len(run) > 1 else run[0])
            run.clear()

    for item in raw:
        if item.get("type") == "network":
            flush()
            stages.append(network_from_json(item))
            continue
        e = element_from_json(item)
        if isinstance(e, (Rotator, Transitor)):
            run.append(e)
        else:
            flush()
            stages.append(e)
    flush()
    return Network(dim, tuple(stages), obj.get("label", ""),
                   bool(obj.get("identity_term", False)), int(obj.get("replicas", 1)))


def save_network(net, path):
    with open(path, "w") as fh:
        json.dump(network_to_json(net), fh)


def load_network(path):
    with open(path) as fh:
        return network_from_json(json.load(fh))
