from .grover import GroverReport, grover_network, grover_oracle_probabilities, grover_run
from .measurement import measure_register, register_probabilities
from .qft import qft_inverse_network, qft_matrix, qft_network
from .shor import ShorReport, continued_fraction, shor_network, shor_run

__all__ = [
    "GroverReport",
    "ShorReport",
    "continued_fraction",
    "grover_network",
    "grover_oracle_probabilities",
    "grover_run",
    "measure_register",
    "qft_inverse_network",
    "qft_matrix",
    "qft_network",
    "register_probabilities",
    "shor_network",
    "shor_run",
]
