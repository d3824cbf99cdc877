"""Projective measurement of one register of an (augmented) state."""

import numpy as np

from ..exceptions import DegenerateStateError, ImpossibleOutcomeError, RejectedInputError
from ..registers import AugmentedState
from ..utils.validation import check_index

__all__ = ["measure_register", "register_probabilities"]


def register_probabilities(s, register_index):
    """Marginal outcome probabilities of one register (both aux branches summed)."""
    dims = s.layout.register_dims
    register_index = check_index(register_index, len(dims), "register_index")
    shape = ((2,) if s.layout.has_aux else ()) + dims
    weights = np.abs(s.amplitudes.reshape(shape)) ** 2
    total = weights.sum()
    if total == 0.0:
        raise DegenerateStateError("cannot measure a zero-norm state")
    axis = register_index + (1 if s.layout.has_aux else 0)
    others = tuple(i for i in range(weights.ndim) if i != axis)
    return weights.sum(axis=others) / total


def _project(s, register_index, outcome):
    dims = s.layout.register_dims
    shape = ((2,) if s.layout.has_aux else ()) + dims
    amps = np.array(s.amplitudes).reshape(shape)
    axis = register_index + (1 if s.layout.has_aux else 0)
    keep = [slice(None)] * amps.ndim
    mask = np.zeros(dims[register_index], dtype=bool)
    mask[outcome] = True
    keep[axis] = ~mask
    amps[tuple(keep)] = 0.0
    amps = amps.reshape(-1)
    return AugmentedState(s.layout, amps / np.linalg.norm(amps))


def measure_register(s, register_index, mode="sample", *, seed=None, outcome=None, rng=None):
    """Measure one register.

    Parameters
    ----------
    s : AugmentedState
        Need not be normalized.
    register_index : int
        Which register of ``s.layout.register_dims``.
    mode : {"sample", "fixed", "distribution"}
        ``sample`` draws with a seeded generator (``seed`` or ``rng``);
        ``fixed`` forces ``outcome``; ``distribution`` returns every outcome
        with its probability and leaves the state unprojected.

    Returns
    -------
    result, post_state
        ``result`` is an int outcome, or a list of ``(outcome, probability)``
        in distribution mode. ``post_state`` is normalized.
    """
    probs = register_probabilities(s, register_index)
    if mode == "distribution":
        post = AugmentedState(s.layout, s.amplitudes / s.norm())
        return [(u, float(p)) for u, p in enumerate(probs)], post
    if mode == "sample":
        rng = np.random.default_rng(seed) if rng is None else rng
        u = int(rng.choice(probs.size, p=probs / probs.sum()))
    elif mode == "fixed":
        u = check_index(outcome, probs.size, "outcome")
        if probs[u] == 0.0:
            raise ImpossibleOutcomeError(f"outcome {u} has zero probability")
    else:
        raise RejectedInputError(f"unknown measurement mode {mode!r}")
    return u, _project(s, register_index, u)
