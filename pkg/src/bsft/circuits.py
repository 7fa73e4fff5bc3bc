"""Location-typed circuit model with classical post-processing directives.

A Circuit is a time-ordered list of typed locations plus an ordered list
of classical directives (parity checks, majority votes, recovery
selection, teleportation corrections, postselection).  Directives carry a
timestep so simulation interleaves them correctly with the gates: a
recovery chosen by an error-correction gadget is folded into the Pauli
frame before later gates conjugate it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple


class LocationKind(enum.Enum):
    MEMORY = "MEMORY"
    PREP_0 = "PREP_0"
    PREP_PLUS = "PREP_PLUS"
    MEAS_X = "MEAS_X"
    MEAS_Z = "MEAS_Z"
    CNOT = "CNOT"
    H = "H"  # used by the transversal-Hadamard builder only, never counted


# Location-type indices used by the malignancy tallies (H excluded).
TYPE_INDEX = {
    LocationKind.MEMORY: 1,
    LocationKind.PREP_0: 2,
    LocationKind.PREP_PLUS: 3,
    LocationKind.MEAS_X: 4,
    LocationKind.MEAS_Z: 5,
    LocationKind.CNOT: 6,
}

MEAS_KINDS = (LocationKind.MEAS_X, LocationKind.MEAS_Z)
PREP_KINDS = (LocationKind.PREP_0, LocationKind.PREP_PLUS)


@dataclass(frozen=True)
class Location:
    id: int
    kind: LocationKind
    qubits: Tuple[int, ...]
    timestep: int

    def __post_init__(self):
        want = 2 if self.kind == LocationKind.CNOT else 1
        if len(self.qubits) != want or len(set(self.qubits)) != want:
            raise ValueError(f"{self.kind.value} needs {want} distinct qubits, got {self.qubits}")


# ----------------------------------------------------------------------
# classical directives
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ParityBit:
    """Named bit: XOR of measurement-outcome flips (and/or other named bits)."""
    name: str
    meas_ids: Tuple[int, ...] = ()
    bit_names: Tuple[str, ...] = ()
    time: int = 0


@dataclass(frozen=True)
class MajorityBit:
    """Named bit: majority vote over previously defined named bits."""
    name: str
    bit_names: Tuple[str, ...]
    time: int = 0


@dataclass(frozen=True)
class RecoverySelect:
    """Decode syndrome bits and multiply the selected recovery into the frame.

    mode "chain": bits are the n-1 adjacent-parity checks of an n-bit
    repetition structure; the minimum-weight consistent parity pattern is
    selected (majority side; ties pick the pattern with component 0 clear).
    mode "chain_checked": bits carry one extra aggregated redundancy check
    (the XOR of all operators); on inconsistency a measurement error is
    inferred and no recovery is applied.
    For each set component i of the decoded pattern, a Pauli of error_kind
    is multiplied into the frame on every qubit in supports[i].
    """
    name: str
    error_kind: str  # "X" or "Z"
    syndrome_bits: Tuple[str, ...]
    mode: str  # "chain" | "chain_checked"
    n: int
    supports: Tuple[Tuple[int, ...], ...]
    time: int = 0


@dataclass(frozen=True)
class LogicalReadout:
    """Named bit: classically corrected logical readout flip.

    groups are the measurement ids of each row (or column) of a measured
    block; the bit is the majority over the per-group outcome-flip
    parities, i.e. whether classical decoding of the transversal readout
    changes the inferred logical value.
    """
    name: str
    groups: Tuple[Tuple[int, ...], ...]
    time: int = 0


@dataclass(frozen=True)
class TeleportCorrection:
    """Fold readout bits into the logical Pauli frame of a block."""
    block: int
    x_bit: Optional[str]
    z_bit: Optional[str]
    time: int = 0


@dataclass(frozen=True)
class Postselect:
    """Reject the run unless every referenced outcome flip is zero."""
    meas_ids: Tuple[int, ...]
    time: int = 0


@dataclass(frozen=True)
class LogicalCnot:
    """Conjugate the per-block logical Pauli frame through a logical CNOT.

    The physical frame is conjugated by the transversal CNOT locations
    themselves; this directive keeps the classically tracked logical
    corrections (teleportation Pauli frame) consistent with them.
    """
    ctrl_block: int
    targ_block: int
    time: int = 0


Directive = object  # union of the dataclasses above


# ----------------------------------------------------------------------
# circuit
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Circuit:
    name: str
    n_qubits: int
    locations: Tuple[Location, ...]
    directives: Tuple[Directive, ...] = ()
    input_qubits: Tuple[int, ...] = ()
    output_qubits: Tuple[int, ...] = ()
    block_map: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self):
        busy: Dict[Tuple[int, int], int] = {}
        prepared = set(self.input_qubits)
        measured = set()
        meas_ids = set()
        for loc in self.locations:
            for q in loc.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"location {loc.id} uses qubit {q} out of range")
                key = (loc.timestep, q)
                if key in busy:
                    raise ValueError(
                        f"qubit {q} used twice at timestep {loc.timestep} "
                        f"(locations {busy[key]} and {loc.id})")
                busy[key] = loc.id
            if loc.kind in PREP_KINDS:
                prepared.add(loc.qubits[0])
                measured.discard(loc.qubits[0])
            else:
                for q in loc.qubits:
                    if q not in prepared:
                        raise ValueError(f"location {loc.id} uses unprepared qubit {q}")
                    if q in measured:
                        raise ValueError(f"location {loc.id} reuses measured qubit {q}")
            if loc.kind in MEAS_KINDS:
                measured.add(loc.qubits[0])
                meas_ids.add(loc.id)
        for d in self.directives:
            for m in getattr(d, "meas_ids", ()) or ():
                if m not in meas_ids:
                    raise ValueError(f"directive references non-measurement location {m}")
            if isinstance(d, LogicalReadout):
                for g in d.groups:
                    for m in g:
                        if m not in meas_ids:
                            raise ValueError(f"readout references non-measurement location {m}")
            if isinstance(d, Postselect):
                for m in d.meas_ids:
                    if m not in meas_ids:
                        raise ValueError(f"postselect references non-measurement location {m}")

    def count_locations(self, kind: Optional[LocationKind] = None) -> int:
        if kind is None:
            return len(self.locations)
        return sum(1 for loc in self.locations if loc.kind == kind)

    def kind_counts(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for loc in self.locations:
            out[loc.kind.value] = out.get(loc.kind.value, 0) + 1
        return out

    def location(self, loc_id: int) -> Location:
        return self.locations[loc_id]

    def dump(self) -> str:
        """Line-oriented fixture format: one location per line, then directives."""
        lines = []
        for loc in sorted(self.locations, key=lambda l: (l.timestep, l.id)):
            qs = ",".join(f"q{q}" for q in loc.qubits)
            lines.append(f"t={loc.timestep} {loc.kind.value} {qs}")
        for d in self.directives:
            lines.append(f"# {type(d).__name__} {d}")
        return "\n".join(lines) + "\n"


class CircuitBuilder:
    """Incremental builder handing out qubit ids and location ids."""

    def __init__(self, name: str):
        self.name = name
        self._n_qubits = 0
        self._locations: List[Location] = []
        self._directives: List[Directive] = []
        self.input_qubits: List[int] = []
        self.output_qubits: List[int] = []
        self.block_map: Dict[int, Tuple[int, int]] = {}
        self.dual_keys: Dict[object, int] = {}

    def alloc(self, count: int) -> List[int]:
        qs = list(range(self._n_qubits, self._n_qubits + count))
        self._n_qubits += count
        return qs

    def add(self, kind: LocationKind, qubits: Sequence[int], t: int,
            key: object = None) -> int:
        loc = Location(len(self._locations), kind, tuple(qubits), t)
        self._locations.append(loc)
        if key is not None:
            if key in self.dual_keys:
                raise ValueError(f"duplicate dual key {key!r}")
            self.dual_keys[key] = loc.id
        return loc.id

    def cnot(self, ctrl: int, targ: int, t: int, key: object = None) -> int:
        return self.add(LocationKind.CNOT, (ctrl, targ), t, key=key)

    def direct(self, directive: Directive):
        self._directives.append(directive)

    @property
    def next_loc_id(self) -> int:
        return len(self._locations)

    def build(self) -> Circuit:
        order = {id(d): i for i, d in enumerate(self._directives)}
        directives = tuple(sorted(self._directives, key=lambda d: (d.time, order[id(d)])))
        return Circuit(
            name=self.name,
            n_qubits=self._n_qubits,
            locations=tuple(self._locations),
            directives=directives,
            input_qubits=tuple(self.input_qubits),
            output_qubits=tuple(self.output_qubits),
            block_map=dict(self.block_map),
        )


def chain_decode(bits: Sequence[int], n: int) -> Tuple[int, ...]:
    """Minimum-weight n-bit parity pattern consistent with adjacent checks.

    bits[i] should equal pattern[i] XOR pattern[i+1].  Of the two
    consistent candidates the lower-weight one is returned; on a tie (even
    n only) the candidate with component 0 clear is kept.
    """
    if len(bits) != n - 1:
        raise ValueError(f"need {n - 1} chain bits, got {len(bits)}")
    pattern = [0]
    for b in bits:
        pattern.append(pattern[-1] ^ (b & 1))
    w = sum(pattern)
    if 2 * w > n:
        pattern = [1 - p for p in pattern]
    return tuple(i for i, p in enumerate(pattern) if p)


def checked_chain_decode(bits: Sequence[int], n: int) -> Tuple[int, ...]:
    """Chain decode with one aggregated redundancy bit appended.

    The last bit measures the XOR of all chain operators; if the
    consistency check fails, a measurement error is inferred and no
    recovery is selected.
    """
    if len(bits) != n:
        raise ValueError(f"need {n} checked-chain bits, got {len(bits)}")
    parity = 0
    for b in bits:
        parity ^= b & 1
    if parity:
        return ()
    return chain_decode(bits[: n - 1], n)


__all__ = [
    "LocationKind", "TYPE_INDEX", "MEAS_KINDS", "PREP_KINDS",
    "Location", "Circuit", "CircuitBuilder",
    "ParityBit", "MajorityBit", "RecoverySelect", "LogicalReadout",
    "TeleportCorrection", "Postselect", "LogicalCnot",
    "chain_decode", "checked_chain_decode",
]
