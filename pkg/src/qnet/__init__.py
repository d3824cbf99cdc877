"""Quantum networks built from rotators, transitors, jointers and connectors.

A transformation ``U`` acting on a register is compiled into a network
``Q(U)`` over the register augmented with one auxiliary qubit. Starting from
``psi (x) |0>``, branch 1 of the output holds ``U psi`` and branch 0 still
holds ``psi``. Sums and products of transformations compose into larger
networks, which gives whole QFT, Grover, Shor and Schrodinger-evolution
networks.
"""

from .exceptions import (
    CapacityError,
    CompositionError,
    DegenerateBranchError,
    DegenerateStateError,
    ImpossibleOutcomeError,
    NonInvertibleError,
    QNetError,
    RejectedInputError,
)
from .elements import (
    Connector,
    ElementBatch,
    External,
    Jointer,
    Measure,
    OpCounter,
    ProjectorD,
    ProjectorP,
    Rotator,
    Transitor,
    exchange_gate,
)
from .network import (
    Network,
    compose_product,
    compose_sum,
    embed_external,
    evaluate,
    interior,
    materialize_network,
    q_of,
    run_on_vector,
    tensor_lift,
    two_register_lift,
)
from .registers import AugmentedState, RegisterLayout, make_augmented, project_aux

__version__ = "0.1.0"

__all__ = [
    "AugmentedState",
    "CapacityError",
    "CompositionError",
    "Connector",
    "DegenerateBranchError",
    "DegenerateStateError",
    "ElementBatch",
    "External",
    "ImpossibleOutcomeError",
    "Jointer",
    "Measure",
    "Network",
    "NonInvertibleError",
    "OpCounter",
    "ProjectorD",
    "ProjectorP",
    "QNetError",
    "RegisterLayout",
    "RejectedInputError",
    "Rotator",
    "Transitor",
    "compose_product",
    "compose_sum",
    "embed_external",
    "evaluate",
    "exchange_gate",
    "interior",
    "make_augmented",
    "materialize_network",
    "project_aux",
    "q_of",
    "run_on_vector",
    "tensor_lift",
    "two_register_lift",
]
