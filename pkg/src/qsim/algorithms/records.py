"""Run records: seeded, serializable traces of one algorithm execution."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..measure import EXTINCT
from ..statevec import StateVector, probabilities

TOP_K = 8


def top_amplitudes(s: StateVector, k: int = TOP_K) -> list[tuple[int, complex]]:
    """The ``k`` largest-magnitude nonzero amplitudes, biggest first, ties by index."""
    probs = probabilities(s)
    k = min(k, probs.size)
    idx = np.argpartition(-probs, k - 1)[:k]
    idx = idx[probs[idx] >= EXTINCT]
    idx = sorted(idx.tolist(), key=lambda j: (-round(float(probs[j]), 12), j))
    return [(int(j), complex(s.amps[j])) for j in idx]


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    measurements: list[tuple[str, int]] = field(default_factory=list)
    iterations: dict[str, int] = field(default_factory=dict)
    result: dict[str, Any] = field(default_factory=dict)
    oracle_calls: int = 0
    trace: bool = False
    # In-process extras, never serialized.
    steps: list[tuple[str, int, list[tuple[int, complex]]]] = field(default_factory=list)
    states: dict[str, StateVector] = field(default_factory=dict)
    final_state: StateVector | None = None
    distribution: np.ndarray | None = None

    @property
    def success(self) -> bool:
        return bool(self.result.get("success", False))

    def measured(self, label: str, outcome: int) -> None:
        self.measurements.append((label, int(outcome)))

    def bump(self, counter: str, by: int = 1) -> None:
        self.iterations[counter] = self.iterations.get(counter, 0) + by

    def snapshot(self, label: str, s: StateVector) -> None:
        if self.trace:
            self.steps.append((label, s.n_qubits, top_amplitudes(s)))

    def merge(self, other: "RunRecord", prefix: str = "") -> None:
        """Fold a sub-run (e.g. order finding inside factoring) into this record."""
        self.measurements.extend((prefix + lab, v) for lab, v in other.measurements)
        for k, v in other.iterations.items():
            self.bump(prefix + k, v)
        self.oracle_calls += other.oracle_calls
        self.steps.extend((prefix + lab, n, amps) for lab, n, amps in other.steps)
        if other.final_state is not None:
            self.final_state = other.final_state
        if other.distribution is not None:
            self.distribution = other.distribution

    def to_json(self, include_state: bool = False) -> dict:
        out = {
            "algorithm": self.algorithm,
            "seed": int(self.seed),
            "measurements": [{"register": lab, "outcome": int(v)} for lab, v in self.measurements],
            "iterations": {k: int(v) for k, v in self.iterations.items()},
            "oracle_calls": int(self.oracle_calls),
            "result": _jsonable(self.result),
        }
        if include_state and self.final_state is not None:
            out["state"] = self.final_state.to_json()
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj
