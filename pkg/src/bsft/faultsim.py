"""Deterministic Pauli-frame propagation of a fault assignment through a circuit.

Faults are Pauli descriptors attached to location outputs (outcome flips
for preparations and measurements).  The frame is a pair of bit masks
over the circuit qubits; classical directives run interleaved with the
gates so EC recoveries are conjugated by later gates exactly as the
recorded Pauli frame would be.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .circuits import (
    Circuit, Location, LocationKind,
    LogicalCnot, LogicalReadout, MajorityBit, ParityBit, Postselect,
    RecoverySelect, TeleportCorrection, chain_decode, checked_chain_decode,
    MEAS_KINDS, PREP_KINDS,
)
from .codes import SubsystemCode, col_parities, majority, row_parities
from .gadgets import ExRec
from .pauli import PauliOp

# Fault descriptors:
#   ("p", xbits, zbits) - Pauli applied at the location output; bit k acts
#                         on the location's k-th qubit.  Used for CNOT,
#                         MEMORY and H locations.
#   ("flip",)           - outcome flip (measurements) or basis-flip error
#                         (preparations: X after PREP_0, Z after PREP_PLUS).
Descriptor = Tuple

_MEM_DESCRIPTORS = (("p", 1, 0), ("p", 0, 1), ("p", 1, 1))
_CNOT_DESCRIPTORS = tuple(
    ("p", x, z) for x in range(4) for z in range(4) if (x, z) != (0, 0)
)


def enumerate_descriptors(kind: LocationKind) -> Tuple[Descriptor, ...]:
    """All nontrivial fault descriptors for a location kind."""
    if kind == LocationKind.CNOT:
        return _CNOT_DESCRIPTORS
    if kind in (LocationKind.MEMORY, LocationKind.H):
        return _MEM_DESCRIPTORS
    return (("flip",),)


def validate_assignment(circuit: Circuit, faults: Dict[int, Descriptor]):
    for loc_id, desc in faults.items():
        if not 0 <= loc_id < len(circuit.locations):
            raise ValueError(f"fault on unknown location {loc_id}")
        kind = circuit.locations[loc_id].kind
        if desc not in enumerate_descriptors(kind):
            raise ValueError(f"descriptor {desc!r} invalid for {kind.value} location {loc_id}")


@dataclass
class FrameState:
    """Propagation result: residual frame, outcome flips, acceptance and
    the per-block logical Pauli frame accumulated by teleportation ECs."""
    n_qubits: int
    x: int = 0
    z: int = 0
    cbit_flips: Dict[int, int] = field(default_factory=dict)
    accepted: bool = True
    logical_frame: Dict[int, List[int]] = field(default_factory=dict)
    bits: Dict[str, int] = field(default_factory=dict)

    @property
    def frame(self) -> PauliOp:
        return PauliOp(self.n_qubits, self.x, self.z)

    def logical_xz(self, block: int) -> Tuple[int, int]:
        return tuple(self.logical_frame.get(block, [0, 0]))


@dataclass(frozen=True)
class BoundarySnapshot:
    x: int
    z: int
    logical_frame: Dict[int, Tuple[int, int]]
    accepted: bool


def _merged_stream(circuit: Circuit):
    """Locations and directives in execution order.

    Within a timestep all gate locations act on disjoint qubits, so their
    relative order is irrelevant; directives of a timestep run after its
    locations.
    """
    items = [((loc.timestep, 0, i), loc) for i, loc in enumerate(circuit.locations)]
    items += [((d.time, 1, i), d) for i, d in enumerate(circuit.directives)]
    items.sort(key=lambda kv: kv[0])
    return [v for _, v in items]


def propagate(circuit: Circuit, faults: Dict[int, Descriptor],
              input_frame: Optional[PauliOp] = None,
              boundary_time: Optional[int] = None,
              trace: Optional[List[str]] = None) -> Tuple[FrameState, Optional[BoundarySnapshot]]:
    """Run the Pauli frame through the circuit.

    boundary_time, when given, snapshots the frame just before the first
    item at or after that timestep (used to split an exRec at its Ga).
    trace, when given, collects one frame line per timestep.
    """
    validate_assignment(circuit, faults)
    st = FrameState(circuit.n_qubits)
    if input_frame is not None:
        if input_frame.n != circuit.n_qubits:
            raise ValueError("input frame size mismatch")
        st.x, st.z = input_frame.x, input_frame.z
    snapshot: Optional[BoundarySnapshot] = None
    last_t = None
    for item in _merged_stream(circuit):
        t = item.timestep if isinstance(item, Location) else item.time
        if boundary_time is not None and snapshot is None and t >= boundary_time:
            snapshot = BoundarySnapshot(
                st.x, st.z,
                {b: (v[0], v[1]) for b, v in st.logical_frame.items()},
                st.accepted)
        if trace is not None and t != last_t:
            trace.append(f"t={t} x={st.x:b} z={st.z:b}")
            last_t = t
        if isinstance(item, Location):
            _apply_location(st, item, faults.get(item.id))
        else:
            _apply_directive(st, item)
    if boundary_time is not None and snapshot is None:
        snapshot = BoundarySnapshot(
            st.x, st.z,
            {b: (v[0], v[1]) for b, v in st.logical_frame.items()},
            st.accepted)
    return st, snapshot


def _apply_location(st: FrameState, loc: Location, desc: Optional[Descriptor]):
    kind = loc.kind
    if kind == LocationKind.CNOT:
        c, t = loc.qubits
        if (st.x >> c) & 1:
            st.x ^= 1 << t
        if (st.z >> t) & 1:
            st.z ^= 1 << c
        if desc is not None:
            _, xb, zb = desc
            st.x ^= ((xb & 1) << c) | (((xb >> 1) & 1) << t)
            st.z ^= ((zb & 1) << c) | (((zb >> 1) & 1) << t)
    elif kind == LocationKind.MEMORY:
        if desc is not None:
            q = loc.qubits[0]
            _, xb, zb = desc
            st.x ^= (xb & 1) << q
            st.z ^= (zb & 1) << q
    elif kind == LocationKind.H:
        q = loc.qubits[0]
        xb, zb = (st.x >> q) & 1, (st.z >> q) & 1
        st.x ^= (xb ^ zb) << q
        st.z ^= (xb ^ zb) << q
        if desc is not None:
            _, xb, zb = desc
            st.x ^= (xb & 1) << q
            st.z ^= (zb & 1) << q
    elif kind == LocationKind.PREP_0:
        q = loc.qubits[0]
        st.x &= ~(1 << q)
        st.z &= ~(1 << q)
        if desc is not None:
            st.x |= 1 << q
    elif kind == LocationKind.PREP_PLUS:
        q = loc.qubits[0]
        st.x &= ~(1 << q)
        st.z &= ~(1 << q)
        if desc is not None:
            st.z |= 1 << q
    elif kind == LocationKind.MEAS_X:
        q = loc.qubits[0]
        flip = (st.z >> q) & 1
        if desc is not None:
            flip ^= 1
        st.cbit_flips[loc.id] = flip
        st.x &= ~(1 << q)
        st.z &= ~(1 << q)
    elif kind == LocationKind.MEAS_Z:
        q = loc.qubits[0]
        flip = (st.x >> q) & 1
        if desc is not None:
            flip ^= 1
        st.cbit_flips[loc.id] = flip
        st.x &= ~(1 << q)
        st.z &= ~(1 << q)
    else:  # pragma: no cover
        raise ValueError(f"unknown location kind {kind}")


def _apply_directive(st: FrameState, d):
    if isinstance(d, ParityBit):
        v = 0
        for m in d.meas_ids:
            v ^= st.cbit_flips[m]
        for name in d.bit_names:
            v ^= st.bits[name]
        st.bits[d.name] = v
    elif isinstance(d, MajorityBit):
        st.bits[d.name] = majority([st.bits[n] for n in d.bit_names])
    elif isinstance(d, RecoverySelect):
        bits = [st.bits[n] for n in d.syndrome_bits]
        if d.mode == "chain":
            rows = chain_decode(bits, d.n)
        elif d.mode == "chain_checked":
            rows = checked_chain_decode(bits, d.n)
        else:  # pragma: no cover
            raise ValueError(f"unknown recovery mode {d.mode}")
        mask = 0
        for i in rows:
            for q in d.supports[i]:
                mask |= 1 << q
        if d.error_kind == "Z":
            st.z ^= mask
        else:
            st.x ^= mask
    elif isinstance(d, LogicalReadout):
        st.bits[d.name] = majority([
            _parity(st.cbit_flips[m] for m in group) for group in d.groups])
    elif isinstance(d, TeleportCorrection):
        lf = st.logical_frame.setdefault(d.block, [0, 0])
        if d.x_bit is not None:
            lf[0] ^= st.bits[d.x_bit]
        if d.z_bit is not None:
            lf[1] ^= st.bits[d.z_bit]
    elif isinstance(d, Postselect):
        if any(st.cbit_flips[m] for m in d.meas_ids):
            st.accepted = False
    elif isinstance(d, LogicalCnot):
        lc = st.logical_frame.setdefault(d.ctrl_block, [0, 0])
        lt = st.logical_frame.setdefault(d.targ_block, [0, 0])
        lt[0] ^= lc[0]
        lc[1] ^= lt[1]
    else:  # pragma: no cover
        raise ValueError(f"unknown directive {d!r}")


def _parity(values: Iterable[int]) -> int:
    v = 0
    for b in values:
        v ^= b
    return v


# ----------------------------------------------------------------------
# exRec correctness
# ----------------------------------------------------------------------

def _block_logical(code: SubsystemCode, qubits: Sequence[int], x: int, z: int) -> Tuple[int, int]:
    """(x, z) logical components of the frame restricted to one block."""
    n = code.geometry[0]
    bx = bz = 0
    for pos, q in enumerate(qubits):
        bx |= ((x >> q) & 1) << pos
        bz |= ((z >> q) & 1) << pos
    return (majority(col_parities(n, bx)), majority(row_parities(n, bz)))


def exrec_logical_outcome(exrec: ExRec, faults: Dict[int, Descriptor]):
    """Returns (accepted, lambda_in, lambda_out) as per-block (x, z) pairs."""
    st, snap = propagate(exrec.circuit, faults, boundary_time=exrec.ga_time)
    if not st.accepted:
        return False, None, None
    lam_in = []
    for blk in (0, 1):
        lx, lz = _block_logical(exrec.code, exrec.block_mid_qubits[blk], snap.x, snap.z)
        tx, tz = snap.logical_frame.get(blk, (0, 0))
        lam_in.append((lx ^ tx, lz ^ tz))
    lam_out = []
    for blk in (0, 1):
        lx, lz = _block_logical(exrec.code, exrec.block_out_qubits[blk], st.x, st.z)
        tx, tz = st.logical_xz(blk)
        lam_out.append((lx ^ tx, lz ^ tz))
    return True, tuple(lam_in), tuple(lam_out)


def cnot_conjugate(lam_in) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Ideal CNOT action on a two-block logical Pauli (control = block 0)."""
    (x1, z1), (x2, z2) = lam_in
    return ((x1, z1 ^ z2), (x1 ^ x2, z2))


def exrec_is_incorrect(exrec: ExRec, faults: Dict[int, Descriptor]) -> Tuple[bool, bool]:
    """Whether the rectangle's output, ideally decoded, deviates from the
    ideal CNOT applied to the ideally decoded rectangle input.

    Assignments rejected by verification count as benign.
    """
    accepted, lam_in, lam_out = exrec_logical_outcome(exrec, faults)
    if not accepted:
        return (False, False)
    ref = cnot_conjugate(lam_in)
    x_bad = lam_out[0][0] != ref[0][0] or lam_out[1][0] != ref[1][0]
    z_bad = lam_out[0][1] != ref[0][1] or lam_out[1][1] != ref[1][1]
    return (x_bad, z_bad)


__all__ = [
    "Descriptor", "FrameState", "BoundarySnapshot",
    "enumerate_descriptors", "validate_assignment",
    "propagate", "exrec_is_incorrect", "exrec_logical_outcome", "cnot_conjugate",
]
