"""Dense state-vector simulation of textbook quantum algorithms."""
from .errors import DomainError
from .measure import RngStream
from .statevec import StateVector, basis_state, inner, kron, outer, probabilities, tensor

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "RngStream",
    "StateVector",
    "basis_state",
    "inner",
    "kron",
    "outer",
    "probabilities",
    "tensor",
]
