"""Code constructions: generic CSS, Steane, Shor, and the Bacon-Shor family.

Codes are immutable bundles of stabilizer generators, gauge generators and
logical operators.  Two decoders are provided: a generic lookup decoder
built from a syndrome table (exact, used as the oracle at small sizes) and
the fast row/column-parity majority decoder for Bacon-Shor grids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .gf2 import gf2_in_span, gf2_rank, gf2_span_basis
from .pauli import PauliOp


class CodeConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class Syndrome:
    bits: Tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return not any(self.bits)

    def __xor__(self, other: "Syndrome") -> "Syndrome":
        return Syndrome(tuple(a ^ b for a, b in zip(self.bits, other.bits)))


@dataclass(frozen=True, eq=False)
class SubsystemCode:
    """One protected logical qubit in n physical qubits.

    gauge_generators is empty for subspace codes.  geometry carries the
    (rows, cols) grid for Bacon-Shor codes and selects the fast parity
    decoder; other codes decode through a syndrome lookup table.
    """

    name: str
    n: int
    stabilizer_generators: Tuple[PauliOp, ...]
    logical_x: PauliOp
    logical_z: PauliOp
    gauge_generators: Tuple[PauliOp, ...] = ()
    geometry: Optional[Tuple[int, int]] = None
    k: int = 1

    def __post_init__(self):
        for a, b in itertools.combinations(self.stabilizer_generators, 2):
            if not a.commutes(b):
                raise CodeConstructionError(f"stabilizers {a} and {b} anticommute")
        for g in self.gauge_generators:
            for s in self.stabilizer_generators:
                if not g.commutes(s):
                    raise CodeConstructionError(f"gauge {g} anticommutes with {s}")
        for s in self.stabilizer_generators:
            if not (self.logical_x.commutes(s) and self.logical_z.commutes(s)):
                raise CodeConstructionError("logical operator anticommutes with a stabilizer")
        if self.logical_x.commutes(self.logical_z):
            raise CodeConstructionError("logical X and Z must anticommute")

    # ------------------------------------------------------------------

    def syndrome(self, error: PauliOp) -> Syndrome:
        if error.n != self.n:
            raise ValueError(f"error on {error.n} qubits, code has {self.n}")
        return Syndrome(tuple(error.sympl(g) for g in self.stabilizer_generators))

    def logical_component(self, residual: PauliOp) -> str:
        """Logical action of a zero-syndrome residual ("I", "X", "Z" or "Y").

        Valid for any residual in the normalizer; gauge factors drop out
        because gauge generators commute with both logical operators.
        """
        xc = residual.sympl(self.logical_z)
        zc = residual.sympl(self.logical_x)
        return {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}[(xc, zc)]

    def export_text(self) -> str:
        lines = [f"n {self.n}", f"name {self.name}", "[stabilizer]"]
        lines += [g.to_string() for g in self.stabilizer_generators]
        lines.append("[gauge]")
        lines += [g.to_string() for g in self.gauge_generators]
        lines.append("[logical]")
        lines += [self.logical_x.to_string(), self.logical_z.to_string()]
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Bacon-Shor grid helpers (row i, column j, both 0-based; qubit = i*n + j)
# ----------------------------------------------------------------------

def grid_qubit(n: int, i: int, j: int) -> int:
    return i * n + j


def row_mask(n: int, i: int) -> int:
    return ((1 << n) - 1) << (i * n)


def col_mask(n: int, j: int) -> int:
    m = 0
    for i in range(n):
        m |= 1 << grid_qubit(n, i, j)
    return m


def col_parities(n: int, bits: int) -> List[int]:
    return [(bits & col_mask(n, j)).bit_count() & 1 for j in range(n)]


def row_parities(n: int, bits: int) -> List[int]:
    return [(bits & row_mask(n, i)).bit_count() & 1 for i in range(n)]


def majority(bits: Sequence[int]) -> int:
    return 1 if sum(bits) * 2 > len(bits) else 0


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def _rows_to_masks(matrix: Sequence[Sequence[int]]) -> List[int]:
    masks = []
    for row in matrix:
        m = 0
        for j, v in enumerate(row):
            if int(v) & 1:
                m |= 1 << j
        masks.append(m)
    return masks


def _min_weight_vector(n: int, commute_rows: List[int], avoid_span: List[int],
                       exhaustive_limit: int = 9) -> int:
    """Minimum-weight bitset orthogonal to commute_rows and outside avoid_span.

    Exhaustive in weight order up to n <= exhaustive_limit; above that, falls
    back to Gaussian elimination (any valid representative, not min weight).
    """
    avoid_basis = gf2_span_basis(avoid_span)
    if n <= exhaustive_limit:
        for w in range(1, n + 1):
            for support in itertools.combinations(range(n), w):
                v = 0
                for q in support:
                    v |= 1 << q
                if any((v & r).bit_count() & 1 for r in commute_rows):
                    continue
                if not gf2_in_span(v, avoid_basis):
                    return v
        raise CodeConstructionError("no logical operator exists")
    # Kernel of commute_rows, first basis vector outside avoid_span.
    kernel = _kernel_basis(commute_rows, n)
    for v in kernel:
        if not gf2_in_span(v, avoid_basis):
            return v
    combos_tried = 0
    for r in range(2, len(kernel) + 1):
        for combo in itertools.combinations(kernel, r):
            v = 0
            for c in combo:
                v ^= c
            if not gf2_in_span(v, avoid_basis):
                return v
            combos_tried += 1
            if combos_tried > 10000:
                break
    raise CodeConstructionError("no logical operator exists")


def _kernel_basis(rows: List[int], n: int) -> List[int]:
    """Basis of {v : v . r = 0 mod 2 for all rows r}."""
    basis = gf2_span_basis(rows)
    pivots = [b.bit_length() - 1 for b in basis]
    free = [j for j in range(n) if j not in pivots]
    kernel = []
    for j in free:
        v = 1 << j
        # Back-substitute so v is orthogonal to every basis row.
        for b, p in zip(basis, pivots):
            if (v & b).bit_count() & 1:
                v ^= 1 << p
        kernel.append(v)
    return kernel


def css_construct(h_x: Sequence[Sequence[int]], h_z: Sequence[Sequence[int]],
                  name: str = "css") -> SubsystemCode:
    """CSS code from two classical parity-check matrices.

    X-type generators come from h_x rows, Z-type from h_z rows; requires
    h_x . h_z^T = 0 over GF(2).  Logical operators are minimum-weight
    normalizer representatives (brute force at these sizes).
    """
    hx = _rows_to_masks(h_x)
    hz = _rows_to_masks(h_z)
    n = 0
    for row in list(h_x) + list(h_z):
        n = max(n, len(row))
    if n == 0:
        raise CodeConstructionError("empty check matrices")
    for rx in hx:
        for rz in hz:
            if (rx & rz).bit_count() & 1:
                raise CodeConstructionError("duality violated: h_x . h_z^T != 0")
    k = n - gf2_rank(hx) - gf2_rank(hz)
    if k < 1:
        raise CodeConstructionError(f"rank leaves no protected qubit (k={k})")
    if k > 1:
        raise CodeConstructionError(f"only k=1 codes supported here (k={k})")
    # Logical Z: Z-pattern commuting with X checks, outside the Z-check span.
    lz = _min_weight_vector(n, hx, hz)
    lx = _min_weight_vector(n, hz, hx)
    gens = tuple(
        [PauliOp(n, x=m) for m in hx] + [PauliOp(n, z=m) for m in hz]
    )
    code = SubsystemCode(
        name=name, n=n,
        stabilizer_generators=gens,
        logical_x=PauliOp(n, x=lx),
        logical_z=PauliOp(n, z=lz),
    )
    return code


STEANE_H = (
    (0, 0, 0, 1, 1, 1, 1),
    (0, 1, 1, 0, 0, 1, 1),
    (1, 0, 1, 0, 1, 0, 1),
)


def steane_code() -> SubsystemCode:
    """The [[7,1,3]] code from the classical Hamming [7,4,3] code."""
    return css_construct(STEANE_H, STEANE_H, name="steane")


def shor_code(n: int = 3) -> SubsystemCode:
    """The [[n^2, 1, n]] Shor code on an n x n grid (X row pairs, Z column pairs
    within each row)."""
    _check_grid_n(n)
    nn = n * n
    gens: List[PauliOp] = []
    for j in range(n - 1):
        gens.append(PauliOp(nn, x=row_mask(n, j) | row_mask(n, j + 1)))
    for i in range(n):
        for j in range(n - 1):
            z = (1 << grid_qubit(n, i, j)) | (1 << grid_qubit(n, i, j + 1))
            gens.append(PauliOp(nn, z=z))
    return SubsystemCode(
        name=f"shor-{n}", n=nn,
        stabilizer_generators=tuple(gens),
        logical_x=PauliOp(nn, x=row_mask(n, 0)),
        logical_z=PauliOp(nn, z=col_mask(n, 0)),
        geometry=(n, n),
    )


def bacon_shor(n: int) -> SubsystemCode:
    """The [[n^2, 1, n]] Bacon-Shor subsystem code on an n x n grid.

    Stabilizers are adjacent double rows of X and double columns of Z;
    gauge generators are vertical X pairs and horizontal Z pairs.
    """
    _check_grid_n(n)
    nn = n * n
    stab: List[PauliOp] = []
    for j in range(n - 1):
        stab.append(PauliOp(nn, x=row_mask(n, j) | row_mask(n, j + 1)))
    for j in range(n - 1):
        stab.append(PauliOp(nn, z=col_mask(n, j) | col_mask(n, j + 1)))
    gauge: List[PauliOp] = []
    for i in range(n - 1):
        for j in range(n):
            x = (1 << grid_qubit(n, i, j)) | (1 << grid_qubit(n, i + 1, j))
            gauge.append(PauliOp(nn, x=x))
    for i in range(n):
        for j in range(n - 1):
            z = (1 << grid_qubit(n, i, j)) | (1 << grid_qubit(n, i, j + 1))
            gauge.append(PauliOp(nn, z=z))
    return SubsystemCode(
        name=f"bacon-shor-{n}", n=nn,
        stabilizer_generators=tuple(stab),
        gauge_generators=tuple(gauge),
        logical_x=PauliOp(nn, x=row_mask(n, 0)),
        logical_z=PauliOp(nn, z=col_mask(n, 0)),
        geometry=(n, n),
    )


def _check_grid_n(n: int):
    if n < 3 or n % 2 == 0:
        raise CodeConstructionError(f"grid size must be odd and >= 3, got {n}")


# ----------------------------------------------------------------------
# decoding
# ----------------------------------------------------------------------

def syndrome(code: SubsystemCode, error: PauliOp) -> Syndrome:
    return code.syndrome(error)


_DECODE_TABLES: Dict[int, Dict[Tuple[int, ...], PauliOp]] = {}


def _recovery_table(code: SubsystemCode) -> Dict[Tuple[int, ...], PauliOp]:
    """Map every syndrome to its minimum-weight recovery (ties broken by
    enumeration order), built by brute force.  Only sane for n <= ~9."""
    table = _DECODE_TABLES.get(id(code))
    if table is not None:
        return table
    table = {}
    want = 1 << len(code.stabilizer_generators)
    for w in range(code.n + 1):
        for qubits in itertools.combinations(range(code.n), w):
            for letters in itertools.product("XZY", repeat=w):
                err = PauliOp(code.n)
                for q, letter in zip(qubits, letters):
                    err = err * PauliOp.single(code.n, q, letter)
                key = code.syndrome(err).bits
                if key not in table:
                    table[key] = err
                    if len(table) == want:
                        _DECODE_TABLES[id(code)] = table
                        return table
        if len(table) == want:
            break
    _DECODE_TABLES[id(code)] = table
    return table


def ideal_decode(code: SubsystemCode, error: PauliOp) -> str:
    """Residual logical action after ideal error correction.

    Bacon-Shor grids decode by row/column parity majority (the convention
    the gadgets' classical processing also uses); everything else goes
    through the generic syndrome lookup table.
    """
    if error.n != code.n:
        raise ValueError(f"error on {error.n} qubits, code has {code.n}")
    if code.geometry and code.gauge_generators:
        n = code.geometry[0]
        xc = majority(col_parities(n, error.x))
        zc = majority(row_parities(n, error.z))
        return {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}[(xc, zc)]
    recovery = _recovery_table(code)[code.syndrome(error).bits]
    return code.logical_component(error * recovery)


def ideal_decode_lookup(code: SubsystemCode, error: PauliOp) -> str:
    """Generic lookup-table decode, used to cross-check the parity decoder."""
    recovery = _recovery_table(code)[code.syndrome(error).bits]
    return code.logical_component(error * recovery)


def brute_force_distance(code: SubsystemCode) -> int:
    """Minimum weight of an operator with trivial syndrome and nontrivial
    logical action (modulo stabilizer and gauge, via the sympl formula)."""
    for w in range(1, code.n + 1):
        for qubits in itertools.combinations(range(code.n), w):
            for letters in itertools.product("XZY", repeat=w):
                err = PauliOp(code.n)
                for q, letter in zip(qubits, letters):
                    err = err * PauliOp.single(code.n, q, letter)
                if not code.syndrome(err).is_trivial:
                    continue
                if code.logical_component(err) != "I":
                    return w
    raise CodeConstructionError("no logical operator found")


__all__ = [
    "CodeConstructionError", "Syndrome", "SubsystemCode",
    "css_construct", "steane_code", "shor_code", "bacon_shor",
    "syndrome", "ideal_decode", "ideal_decode_lookup", "brute_force_distance",
    "grid_qubit", "row_mask", "col_mask", "col_parities", "row_parities", "majority",
    "STEANE_H",
]
