"""Linear algebra over GF(2) with rows packed into Python ints."""
from __future__ import annotations

from .errors import DomainError, InsufficientRankError


def bit_dot(j: int, k: int) -> int:
    """Bitwise inner product ``j . k mod 2``."""
    return (j & k).bit_count() & 1


class GF2Basis:
    """Row-echelon basis keyed by each row's leading bit."""

    def __init__(self, n_bits: int):
        if n_bits < 1:
            raise DomainError("need at least one bit per row")
        self.n_bits = n_bits
        self._rows: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> list[int]:
        return [self._rows[b] for b in sorted(self._rows, reverse=True)]

    def reduce(self, row: int) -> int:
        for lead in sorted(self._rows, reverse=True):
            if row >> lead & 1:
                row ^= self._rows[lead]
        return row

    def add(self, row: int) -> bool:
        """Insert ``row`` if it is independent of the basis; report whether it was."""
        if not 0 <= row < 1 << self.n_bits:
            raise DomainError(f"row {row} does not fit in {self.n_bits} bits")
        r = self.reduce(row)
        if r == 0:
            return False
        self._rows[r.bit_length() - 1] = r
        return True

    def copy(self) -> "GF2Basis":
        out = GF2Basis(self.n_bits)
        out._rows = dict(self._rows)
        return out


def add_if_independent(basis: GF2Basis, row: int) -> tuple[GF2Basis, bool]:
    """Functional wrapper around :meth:`GF2Basis.add`."""
    out = basis.copy()
    return out, out.add(row)


def nullspace_nontrivial(basis, n_bits: int | None = None) -> int:
    """The unique nonzero ``s`` orthogonal to ``n-1`` independent rows."""
    if isinstance(basis, GF2Basis):
        n = basis.n_bits if n_bits is None else n_bits
        rows = basis.rows
    else:
        if n_bits is None:
            raise DomainError("n_bits is required for a plain row list")
        n = n_bits
        b = GF2Basis(n)
        for r in basis:
            b.add(r)
        rows = b.rows
    if len(rows) < n - 1:
        raise InsufficientRankError(f"rank {len(rows)} < {n - 1}")
    if len(rows) > n - 1:
        raise DomainError("rows span the whole space; only s = 0 is orthogonal")

    # Full reduction: clear every pivot column from the other rows.
    pivots = {r.bit_length() - 1: r for r in rows}
    for lead in sorted(pivots):
        for other in list(pivots):
            if other != lead and pivots[other] >> lead & 1:
                pivots[other] ^= pivots[lead]
    free = next(b for b in range(n) if b not in pivots)
    s = 1 << free
    for lead, r in pivots.items():
        if r >> free & 1:
            s |= 1 << lead
    return s
