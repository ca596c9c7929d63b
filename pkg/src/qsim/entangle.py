"""Separability checks for pure states."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .statevec import StateVector, tensor_all

DEFAULT_TOL = 1e-8


def is_product_2q(s: StateVector, tol: float = DEFAULT_TOL) -> bool:
    """Two-qubit product test: ``|a0 a3 - a1 a2| <= tol``."""
    if s.n_qubits != 2:
        raise DomainError("is_product_2q needs a two-qubit state")
    a0, a1, a2, a3 = s.amps
    return abs(a0 * a3 - a1 * a2) <= tol


@dataclass
class Separability:
    factors: list[StateVector] | None = None
    entangled_at: int | None = None
    residuals: list[float] = field(default_factory=list)

    @property
    def is_product(self) -> bool:
        return self.factors is not None


def _leading_phase(v: np.ndarray) -> complex:
    lead = v[int(np.flatnonzero(np.abs(v) > 1e-12)[0])]
    return lead / abs(lead)


def factor_product(s: StateVector, tol: float = DEFAULT_TOL) -> Separability:
    """Split ``s`` into single-qubit factors, or report where that fails.

    Qubits are peeled from the left. At each step the remaining amplitudes are
    reshaped to ``2 x 2**rest`` and must be rank one: the second singular value,
    relative to the norm, may be at most ``tol``. Factors after the first carry
    a real positive leading amplitude; factor 0 absorbs the global phase.
    """
    if s.n_qubits < 2:
        raise DomainError("factor_product needs at least two qubits")
    rest = s.amps.copy()
    raw: list[np.ndarray] = []
    residuals: list[float] = []
    for q in range(s.n_qubits - 1):
        u, sv, vh = np.linalg.svd(rest.reshape(2, -1), full_matrices=False)
        resid = float(sv[1] / np.sqrt((sv**2).sum()))
        residuals.append(resid)
        if resid > tol:
            return Separability(None, q, residuals)
        raw.append(u[:, 0])
        rest = sv[0] * vh[0]
    raw.append(rest / np.linalg.norm(rest))

    factors = [raw[0]]
    phase = 1.0 + 0j
    for v in raw[1:]:
        ph = _leading_phase(v)
        factors.append(v / ph)
        phase *= ph
    factors[0] = factors[0] * phase
    states = [StateVector(f) for f in factors]
    err = float(np.abs(tensor_all(states).amps - s.amps).max())
    if err > tol:
        return Separability(None, s.n_qubits - 1, residuals)
    return Separability(states, None, residuals)
