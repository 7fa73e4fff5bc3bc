"""Small GF(2) linear algebra helpers using int bitsets.

A length-n binary vector is stored as a Python int with bit j holding
component j.  This keeps row operations single XORs and makes rank /
membership checks cheap at the sizes used here (n <= a few hundred).
"""

from __future__ import annotations

from typing import List


def gf2_span_basis(rows: List[int]) -> List[int]:
    """A reduced basis (descending leading bits) for the span of rows."""
    basis: List[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return basis


def gf2_rank(rows: List[int]) -> int:
    """Rank of the row set over GF(2)."""
    return len(gf2_span_basis(rows))


def gf2_reduce(vec: int, basis: List[int]) -> int:
    """Reduce vec against a list of rows (not necessarily echelonized)."""
    for b in sorted(basis, reverse=True):
        vec = min(vec, vec ^ b)
    return vec


def gf2_in_span(vec: int, rows: List[int]) -> bool:
    """Whether vec lies in the GF(2) span of rows."""
    return gf2_reduce(vec, gf2_span_basis(rows)) == 0


__all__ = ["gf2_span_basis", "gf2_rank", "gf2_reduce", "gf2_in_span"]
