import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from qnet.estimators import EulerEvolution, NetworkTransformer
from qnet.exceptions import RejectedInputError
from qnet.schrodinger import EvolutionSpec, Grid, Potential, hamiltonian


def crand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.mark.parametrize("form", ["natural", "exchange"])
def test_network_transformer_applies_operator(rng, form):
    U = crand(rng, 4, 4)
    X = crand(rng, 5, 4)
    out = NetworkTransformer(U, form=form).fit(X).transform(X)
    assert np.allclose(out, X @ U.T)


def test_params_and_clone(rng):
    t = NetworkTransformer(np.eye(2), threshold=0.1)
    assert t.get_params() == {"operator": t.operator, "form": "natural", "threshold": 0.1}
    c = clone(t)
    assert c.threshold == 0.1 and not hasattr(c, "network_")
    t.set_params(form="exchange")
    assert t.form == "exchange"


def test_not_fitted_and_bad_input():
    with pytest.raises(NotFittedError):
        NetworkTransformer(np.eye(2)).transform(np.ones((1, 2)))
    with pytest.raises(RejectedInputError):
        NetworkTransformer().fit()
    with pytest.raises(RejectedInputError):
        NetworkTransformer(np.eye(2), form="odd").fit()
    t = NetworkTransformer(np.eye(2)).fit()
    with pytest.raises(RejectedInputError):
        t.transform(np.ones((1, 3)))
    with pytest.raises(RejectedInputError):
        t.transform([[np.nan, 0]])


def test_pipeline_composes_products(rng):
    A, B = crand(rng, 3, 3), crand(rng, 3, 3)
    X = crand(rng, 2, 3)
    pipe = make_pipeline(NetworkTransformer(A), NetworkTransformer(B))
    assert np.allclose(pipe.fit_transform(X), X @ (B @ A).T)


def test_euler_evolution(rng):
    X = crand(rng, 3, 8)
    est = EulerEvolution(length=10.0, dt=0.01, total_time=0.03, potential="harmonic:1")
    out = est.fit_transform(X)
    H = hamiltonian(Grid(8, 10.0), EvolutionSpec(1.0, 0.01, 0.03, Potential("harmonic", (1.0,))))
    step = np.linalg.matrix_power(np.eye(8) - 0.01j * H, 3)
    assert np.allclose(out, X @ step.T)
