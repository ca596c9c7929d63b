"""End-to-end algorithms, each returning a :class:`RunRecord`."""
from .counting import CountEstimate, counter_distribution, error_bound, estimate_of, quantum_count
from .deutsch import deutsch, deutsch_jozsa
from .grover import GroverSchedule, grover_known, grover_unknown, schedule, search_success
from .records import RunRecord
from .shor import shor_factor, shor_order
from .simon import simon

__all__ = [
    "CountEstimate",
    "GroverSchedule",
    "RunRecord",
    "counter_distribution",
    "deutsch",
    "deutsch_jozsa",
    "error_bound",
    "estimate_of",
    "grover_known",
    "grover_unknown",
    "quantum_count",
    "schedule",
    "search_success",
    "shor_factor",
    "shor_order",
    "simon",
]
