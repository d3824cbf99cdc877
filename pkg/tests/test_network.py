import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qnet.elements import OpCounter, Rotator, Transitor
from qnet.exceptions import CapacityError, CompositionError, NonInvertibleError, RejectedInputError
from qnet.network import (
    Network,
    compose_product,
    compose_sum,
    count_elements,
    embed_external,
    evaluate,
    find_stage,
    inverse_network,
    load_network,
    materialize_network,
    network_from_json,
    network_to_json,
    q_of,
    replace_stage,
    run_on_vector,
    save_network,
    tensor_lift,
    two_register_lift,
)
from qnet.registers import RegisterLayout, make_augmented


def crand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
square = st.integers(1, 6).flatmap(lambda d: arrays(np.float64, (d, d), elements=finite))


@settings(max_examples=60, deadline=None)
@given(square)
def test_q_of_block_form(U):
    d = U.shape[0]
    M = materialize_network(q_of(U))
    assert np.allclose(M, np.block([[np.eye(d), np.zeros((d, d))], [U, np.eye(d)]]), atol=1e-12)


def test_q_of_element_count_and_threshold():
    U = np.array([[1.0, 0.0], [1e-9, 2.0]])
    assert count_elements(q_of(U)) == 3
    assert count_elements(q_of(U, threshold=1e-6)) == 2
    assert count_elements(q_of(np.zeros((3, 3)))) == 0


def test_zero_operator_acts_as_nothing(rng):
    psi = crand(rng, 3)
    assert np.array_equal(run_on_vector(q_of(np.zeros((3, 3))), psi), np.zeros(3))
    assert np.array_equal(run_on_vector(q_of(np.zeros((3, 3))), psi, branch=0), psi)


def test_q_of_non_unitary(rng):
    U = np.diag([2.0, 0.0, -3j])
    psi = crand(rng, 3)
    assert np.allclose(run_on_vector(q_of(U), psi), U @ psi)


def test_inverse_network(rng):
    U = crand(rng, 5, 5)
    net = q_of(U)
    assert np.allclose(materialize_network(inverse_network(net)) @ materialize_network(net), np.eye(10))
    assert inverse_network(inverse_network(net)) == net
    with pytest.raises(NonInvertibleError):
        inverse_network(compose_product([net]))


def test_sum_rejects_impure_and_mismatched(rng):
    a = q_of(crand(rng, 2, 2))
    with pytest.raises(CompositionError):
        compose_sum([a, compose_product([a])])
    with pytest.raises(RejectedInputError):
        compose_sum([a, q_of(np.eye(3))])
    with pytest.raises(RejectedInputError):
        compose_sum([])


def test_product_order_and_identity_term(rng):
    A, B = crand(rng, 3, 3), crand(rng, 3, 3)
    psi = crand(rng, 3)
    net = compose_product([q_of(A), q_of(B)])
    assert np.allclose(run_on_vector(net, psi), A @ B @ psi)
    assert np.allclose(run_on_vector(net, psi, branch=0), psi)
    M = materialize_network(net)
    assert np.allclose(M, np.block([[np.eye(3), np.zeros((3, 3))], [A @ B, np.eye(3)]]))


def test_single_factor_product_equals_q_of(rng):
    U = crand(rng, 4, 4)
    assert np.allclose(materialize_network(compose_product([q_of(U)])), materialize_network(q_of(U)))


def test_nested_products(rng):
    A, B, C = (crand(rng, 2, 2) for _ in range(3))
    inner = compose_product([q_of(B), q_of(C)])
    outer = compose_product([q_of(A), inner])
    psi = crand(rng, 2)
    assert np.allclose(run_on_vector(outer, psi), A @ B @ C @ psi)


def test_two_register_lift(rng):
    A, B = crand(rng, 3, 3), crand(rng, 3, 3)
    net = two_register_lift([q_of(A), q_of(B)], in_dim=2)
    assert net.register_dim == 6
    M = materialize_network(net)
    ref = np.zeros((12, 12), dtype=complex)
    ref[6:, :6] = np.kron(np.eye(2), A @ B)
    assert np.allclose(M, ref)
    s = make_augmented(crand(rng, 6), RegisterLayout((2, 3)))
    assert np.allclose(evaluate(net, s).amplitudes, M @ s.amplitudes)


@pytest.mark.parametrize("dims,slot", [([2, 2, 2], 0), ([2, 2, 2], 1), ([2, 3], 1), ([4, 2], 0)])
def test_tensor_lift_matches_kron(rng, dims, slot):
    U = crand(rng, dims[slot], dims[slot])
    full = np.eye(1)
    for i, d in enumerate(dims):
        full = np.kron(full, U if i == slot else np.eye(d))
    assert np.allclose(materialize_network(tensor_lift(U, slot, dims)), materialize_network(q_of(full)))


def test_embed_external_equals_native(rng):
    U = crand(rng, 4, 4)
    psi = crand(rng, 4)
    nets = [compose_product([embed_external(U), q_of(U)]), compose_product([q_of(U), q_of(U)])]
    outs = [run_on_vector(n, psi) for n in nets]
    assert np.allclose(outs[0], outs[1])


def test_find_and_replace_stage(rng):
    U = crand(rng, 2, 2)
    net = compose_product([q_of(U, label="A"), q_of(np.eye(2), label="B")])
    assert find_stage(net, "A") is not None
    assert find_stage(net, "zzz") is None
    swapped = replace_stage(net, "A", embed_external(U, label="A"))
    psi = crand(rng, 2)
    assert np.allclose(run_on_vector(swapped, psi), run_on_vector(net, psi))


def test_network_rejects_wrong_dims():
    with pytest.raises(RejectedInputError):
        Network(2, (Rotator(3, 1.0),))
    with pytest.raises(RejectedInputError):
        Network(2, (q_of(np.eye(3)),))
    with pytest.raises(RejectedInputError):
        evaluate(q_of(np.eye(2)), make_augmented(np.ones(3), RegisterLayout((3,))))


def test_evaluation_never_materializes(rng, monkeypatch):
    import qnet.network as nw

    monkeypatch.setattr(nw, "materialize_network", lambda *a, **k: pytest.fail("materialized"))
    psi = crand(rng, 64)
    U = crand(rng, 64, 64)
    assert np.allclose(run_on_vector(compose_product([q_of(U), q_of(U)]), psi), U @ U @ psi)


def test_op_count_quadratic(rng):
    for dim in (16, 64, 256):
        c = OpCounter()
        evaluate(q_of(crand(rng, dim, dim)), make_augmented(crand(rng, dim), RegisterLayout((dim,))), c)
        assert c.count <= 4 * dim**2 + 16 * dim


def test_materialize_cap():
    with pytest.raises(CapacityError):
        materialize_network(q_of(np.eye(8)), cap=8)


def test_network_json_roundtrip_byte_exact(tmp_path, rng):
    A = crand(rng, 3, 3)
    net = compose_product([q_of(A, label="A"),
                           Network(3, (Rotator(0, 1.0), Transitor(2, 1, 2j)), "mix"),
                           embed_external(np.eye(3), label="ext")])
    text = json.dumps(network_to_json(net))
    back = network_from_json(json.loads(text))
    assert json.dumps(network_to_json(back)) == text
    p = tmp_path / "net.json"
    save_network(net, p)
    assert load_network(p) == net
    psi = crand(rng, 3)
    assert np.allclose(run_on_vector(back, psi), run_on_vector(net, psi))


def test_network_json_rejects_garbage():
    with pytest.raises(RejectedInputError):
        network_from_json({"stages": []})
