"""scikit-learn style adapters around network compilation and evolution.

Rows of ``X`` are register states. ``fit`` compiles the network once;
``transform`` pushes each row through it and returns branch 1.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .compiler import exchange_form
from .exceptions import RejectedInputError
from .network import q_of, run_on_vector
from .schrodinger import EvolutionSpec, Grid, evolve_network, parse_potential
from .utils.validation import check_operator

__all__ = ["EulerEvolution", "NetworkTransformer"]


def _rows(X, dim):
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise RejectedInputError(f"expected rows of length {dim}, got shape {X.shape}")
    X = X.astype(np.complex128)
    if not np.all(np.isfinite(X)):
        raise RejectedInputError("input contains non-finite values")
    return X


class NetworkTransformer(BaseEstimator, TransformerMixin):
    """Apply ``operator`` to each row through its compiled network.

    Parameters
    ----------
    operator : array-like of shape (d, d)
    form : {"natural", "exchange"}
        Row-major element form, or the exchange-gate form (``d`` a power of two).
    threshold : float
        Entries with ``|U_mn| <= threshold`` are dropped (natural form only).
    """

    def __init__(self, operator=None, form="natural", threshold=0.0):
        self.operator = operator
        self.form = form
        self.threshold = threshold

    def fit(self, X=None, y=None):
        if self.operator is None:
            raise RejectedInputError("operator is required")
        U = check_operator(self.operator, square=True, name="operator")
        if self.form == "natural":
            self.network_ = q_of(U, threshold=self.threshold)
        elif self.form == "exchange":
            self.network_ = exchange_form(U)
        else:
            raise RejectedInputError(f"unknown form {self.form!r}")
        self.n_features_in_ = U.shape[0]
        return self

    def transform(self, X):
        check_is_fitted(self, "network_")
        X = _rows(X, self.n_features_in_)
        return np.stack([run_on_vector(self.network_, x) for x in X])


class EulerEvolution(BaseEstimator, TransformerMixin):
    """Evolve each row (a grid wavefunction) by the Euler-step network.

    ``potential`` uses the CLI syntax, e.g. ``"harmonic:1.0"``.
    """

    def __init__(self, length=10.0, mass=1.0, dt=0.01, total_time=0.1, potential="zero"):
        self.length = length
        self.mass = mass
        self.dt = dt
        self.total_time = total_time
        self.potential = potential

    def fit(self, X, y=None):
        X = np.asarray(X)
        n = X.shape[-1]
        self.grid_ = Grid(n, float(self.length))
        self.spec_ = EvolutionSpec(float(self.mass), float(self.dt), float(self.total_time),
                                   parse_potential(self.potential))
        self.network_ = evolve_network(self.grid_, self.spec_)
        self.n_features_in_ = n
        return self

    def transform(self, X):
        check_is_fitted(self, "network_")
        X = _rows(X, self.n_features_in_)
        return np.stack([run_on_vector(self.network_, x) for x in X])
