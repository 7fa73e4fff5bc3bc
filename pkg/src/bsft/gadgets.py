"""Builders for the Bacon-Shor error-correction gadgets and extended rectangles.

Location accounting conventions (these produce the advertised totals of
72 locations per distance-3 EC, 297 per CNOT exRec, 19 locations per
verified distance-5 cat fragment and 290 per distance-5 EC):

* ancilla qubits are prepared just in time, one step before their first
  gate, and measured immediately after their last interaction;
* a prepared qubit waiting between gates of its own gadget incurs one
  MEMORY location per idle step;
* transversal couplings are executed in a single step, so block qubits
  never idle inside a gadget;
* idle time between gadget boundaries is not charged (ancilla work for
  the next gadget proceeds concurrently).

Every cat fragment then carries exactly one MEMORY location at distance 3
and six at distance 5, which is what closes the published counts.

Every location also carries a duality key: the gadget family is symmetric
under transposing the grid, exchanging X with Z (and |0> with |+>,
MEAS_X with MEAS_Z, CNOT direction) and exchanging the two blocks of the
CNOT rectangle.  The induced involution on location ids is exposed as
ExRec.dual_map and backs the type-symmetric malignancy count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .circuits import (
    Circuit, CircuitBuilder, Location, LocationKind,
    LogicalCnot, LogicalReadout, MajorityBit, ParityBit, Postselect,
    RecoverySelect, TeleportCorrection, MEAS_KINDS, PREP_KINDS,
)
from .codes import SubsystemCode, bacon_shor

P0 = LocationKind.PREP_0
PP = LocationKind.PREP_PLUS
MX = LocationKind.MEAS_X
MZ = LocationKind.MEAS_Z
MEM = LocationKind.MEMORY

EC_STYLES = ("gauge", "steane", "knill")

_TAG_SWAP = {"lec0": "lec1", "lec1": "lec0", "tec0": "tec1", "tec1": "tec0", "ec": "ec"}
_SIDE_SWAP = {"A": "B", "B": "A", "P": "0", "0": "P", "X": "Z", "Z": "X"}


def dual_key(key: tuple) -> tuple:
    """Image of a location key under the grid-transpose / X-Z / block swap."""
    family = key[0]
    if family == "ga":
        _, i, j = key
        return ("ga", j, i)
    if family == "cat":
        _, tag, side, frag, slot = key
        return ("cat", _TAG_SWAP[tag], _SIDE_SWAP[side], frag, slot)
    if family in ("cpl", "m"):
        _, tag, side, i, j = key
        return (family, _TAG_SWAP[tag], _SIDE_SWAP[side], j, i)
    if family in ("bell", "dcpl"):
        _, tag, i, j = key
        return (family, _TAG_SWAP[tag], j, i)
    if family in ("mdat", "manc"):
        _, tag, i, j = key
        other = "manc" if family == "mdat" else "mdat"
        return (other, _TAG_SWAP[tag], j, i)
    if family == "g":
        _, tag, side, r, k, idx, slot = key
        return ("g", _TAG_SWAP[tag], _SIDE_SWAP[side], r, k, idx, slot)
    raise ValueError(f"unknown key family {key!r}")


class GadgetBuildError(ValueError):
    pass


@dataclass(frozen=True)
class ECInfo:
    """Bookkeeping for one EC instance inside a larger circuit."""
    loc_ids: Tuple[int, ...]
    out_qubits: Tuple[int, ...]
    end_time: int
    bell_measurement_ids: Tuple[int, ...] = ()
    cat_prep_ids: Tuple[int, ...] = ()


def _check_code(code: SubsystemCode) -> int:
    if code.geometry is None or not code.gauge_generators:
        raise GadgetBuildError("gadgets are defined for Bacon-Shor codes only")
    n = code.geometry[0]
    if n not in (3, 5):
        raise GadgetBuildError(f"unsupported grid size {n} (supported: 3, 5)")
    return n


# ----------------------------------------------------------------------
# cat fragments
# ----------------------------------------------------------------------
#
# Fragment schedules, local times relative to t0, coupling at couple_t:
#   distance 3, Hadamard-basis cat |+ 0 +> (middle qubit is the hub):
#     t0 prep q0,q1 | t1 q0->q1, prep q2 | t2 q2->q1, MEMORY q0 | t3 couple
#   distance 3, computational cat |0 + 0| (hub controls outward):
#     t0 prep q0,q1 | t1 q1->q0, prep q2 | t2 q1->q2, MEMORY q0 | t3 couple
#   distance 5 adds a verification qubit measured at couple time and
#   postselected on the trivial outcome.
# The two bases are emitted with identical slot orders, so slot k of a
# Hadamard-basis fragment is the exact dual of slot k of a computational
# one (preparation bases swapped, CNOTs reversed).

def _cat3(b: CircuitBuilder, qs: Sequence[int], t0: int, hadamard_basis: bool,
          kp: tuple, emit_mem: bool = True) -> List[int]:
    ids = []
    if hadamard_basis:
        kinds = (PP, P0, PP)
        cnots = ((qs[0], qs[1]), (qs[2], qs[1]))
    else:
        kinds = (P0, PP, P0)
        cnots = ((qs[1], qs[0]), (qs[1], qs[2]))
    ids.append(b.add(kinds[0], (qs[0],), t0, key=kp + (0,)))
    ids.append(b.add(kinds[1], (qs[1],), t0, key=kp + (1,)))
    ids.append(b.cnot(*cnots[0], t0 + 1, key=kp + (2,)))
    ids.append(b.add(kinds[2], (qs[2],), t0 + 1, key=kp + (3,)))
    ids.append(b.cnot(*cnots[1], t0 + 2, key=kp + (4,)))
    if emit_mem:
        ids.append(b.add(MEM, (qs[0],), t0 + 2, key=kp + (5,)))
    return ids


def _cat5(b: CircuitBuilder, qs: Sequence[int], verifier: int, t0: int,
          hadamard_basis: bool, kp: tuple) -> Tuple[List[int], int]:
    """Five-qubit verified cat; returns (location ids, verification meas id).

    The coupling step is t0+5; the fragment occupies t0..t0+5 and carries
    six MEMORY locations.
    """
    ids = []
    if hadamard_basis:
        kinds = {0: PP, 1: PP, 2: P0, 3: PP, 4: PP, "v": PP}
        cnots = [
            (qs[1], qs[2], 1), (qs[3], qs[2], 2), (qs[0], qs[1], 2),
            (qs[4], qs[3], 3), (verifier, qs[0], 3), (verifier, qs[4], 4),
        ]
        vmeas_kind = MX
    else:
        kinds = {0: P0, 1: P0, 2: PP, 3: P0, 4: P0, "v": P0}
        cnots = [
            (qs[2], qs[1], 1), (qs[2], qs[3], 2), (qs[1], qs[0], 2),
            (qs[3], qs[4], 3), (qs[0], verifier, 3), (qs[4], verifier, 4),
        ]
        vmeas_kind = MZ
    slot = 0
    prep_times = ((1, 0), (2, 0), (0, 1), (3, 1), (4, 2), ("v", 2))
    for key, dt in prep_times:
        q = verifier if key == "v" else qs[key]
        ids.append(b.add(kinds[key], (q,), t0 + dt, key=kp + (slot,)))
        slot += 1
    for ctrl, targ, dt in cnots:
        ids.append(b.cnot(ctrl, targ, t0 + dt, key=kp + (slot,)))
        slot += 1
    for q, dts in ((qs[0], (4,)), (qs[1], (3, 4)), (qs[2], (3, 4)), (qs[3], (4,))):
        for dt in dts:
            ids.append(b.add(MEM, (q,), t0 + dt, key=kp + (slot,)))
            slot += 1
    vmeas = b.add(vmeas_kind, (verifier,), t0 + 5, key=kp + (slot,))
    ids.append(vmeas)
    return ids, vmeas


def _append_cat_block(b: CircuitBuilder, n: int, qubits: Sequence[int], t0: int,
                      per_column: bool, hadamard_basis: bool, tag: str, side: str,
                      emit_mem: bool = True) -> Tuple[List[int], List[int], int]:
    """n fragments forming an encoded ancilla block (column or row cats).

    Returns (location ids, verification meas ids, coupling timestep).
    """
    ids: List[int] = []
    verif: List[int] = []
    for f in range(n):
        kp = ("cat", tag, side, f)
        if per_column:
            qs = [qubits[i * n + f] for i in range(n)]
        else:
            qs = [qubits[f * n + j] for j in range(n)]
        if n == 3:
            ids += _cat3(b, qs, t0, hadamard_basis, kp, emit_mem=emit_mem)
            couple_t = t0 + 3
        else:
            v = b.alloc(1)[0]
            frag_ids, vmeas = _cat5(b, qs, v, t0, hadamard_basis, kp)
            ids += frag_ids
            verif.append(vmeas)
            couple_t = t0 + 5
    for vmeas in verif:
        b.direct(Postselect(meas_ids=(vmeas,), time=couple_t))
    return ids, verif, couple_t


# ----------------------------------------------------------------------
# EC gadgets
# ----------------------------------------------------------------------

def _append_steane_ec(b: CircuitBuilder, n: int, data: Sequence[int], t0: int,
                      tag: str, phase_order: str = "zx") -> ECInfo:
    """Syndrome extraction with encoded |0> and |+> ancilla blocks.

    The |0> block (Hadamard-basis column cats) controls into the data and
    is measured in the X basis, giving the Z-error syndrome as row-pair
    parities; the |+> block (row cats) is targeted by the data and
    measured in the Z basis, giving the X-error syndrome as column-pair
    parities.  72 locations at distance 3, 290 at distance 5.
    """
    start = b.next_loc_id
    nn = n * n
    anc0 = b.alloc(nn)
    ancp = b.alloc(nn)
    dt0, dtp = (0, 1) if phase_order == "zx" else (1, 0)
    ids0, verif0, coup0 = _append_cat_block(b, n, anc0, t0 + dt0, per_column=True,
                                            hadamard_basis=True, tag=tag, side="A")
    idsp, verifp, coupp = _append_cat_block(b, n, ancp, t0 + dtp, per_column=False,
                                            hadamard_basis=False, tag=tag, side="B")
    cat_ids = tuple(ids0 + idsp)
    # Transversal couplings: |0>_L controls into data, data controls into |+>_L.
    for i in range(n):
        for j in range(n):
            q = i * n + j
            b.cnot(anc0[q], data[q], coup0, key=("cpl", tag, "A", i, j))
    mx_ids = []
    for i in range(n):
        for j in range(n):
            q = i * n + j
            mx_ids.append(b.add(MX, (anc0[q],), coup0 + 1, key=("m", tag, "A", i, j)))
    for i in range(n):
        for j in range(n):
            q = i * n + j
            b.cnot(data[q], ancp[q], coupp, key=("cpl", tag, "B", i, j))
    mz_ids = []
    for i in range(n):
        for j in range(n):
            q = i * n + j
            mz_ids.append(b.add(MZ, (ancp[q],), coupp + 1, key=("m", tag, "B", i, j)))
    end_time = max(coup0, coupp) + 1

    z_bits = []
    for k in range(n - 1):
        ids = tuple(mx_ids[i * n + j] for i in (k, k + 1) for j in range(n))
        name = f"{tag}.zs{k}"
        b.direct(ParityBit(name, meas_ids=ids, time=end_time))
        z_bits.append(name)
    b.direct(RecoverySelect(
        f"{tag}.zrec", "Z", tuple(z_bits), "chain", n,
        supports=tuple((data[i * n + 0],) for i in range(n)), time=end_time))
    x_bits = []
    for k in range(n - 1):
        ids = tuple(mz_ids[i * n + j] for j in (k, k + 1) for i in range(n))
        name = f"{tag}.xs{k}"
        b.direct(ParityBit(name, meas_ids=ids, time=end_time))
        x_bits.append(name)
    b.direct(RecoverySelect(
        f"{tag}.xrec", "X", tuple(x_bits), "chain", n,
        supports=tuple((data[0 * n + j],) for j in range(n)), time=end_time))
    return ECInfo(
        loc_ids=tuple(range(start, b.next_loc_id)),
        out_qubits=tuple(data),
        end_time=end_time,
        cat_prep_ids=cat_ids,
    )


def _append_knill_ec(b: CircuitBuilder, n: int, data: Sequence[int], t0: int,
                     tag: str, block: int) -> ECInfo:
    """Teleportation-based syndrome extraction.

    A logical Bell pair is built from a |+> block (row cats) and a |0>
    block (column cats); the data and the |+> block are then measured
    transversally (a logical Bell measurement) and the classically
    corrected readouts update the logical Pauli frame of the teleported
    output block.  Same location count as the Steane gadget.
    """
    start = b.next_loc_id
    nn = n * n
    ancp = b.alloc(nn)  # |+>_L half, row cats; consumed by the Bell measurement
    anc0 = b.alloc(nn)  # |0>_L half, column cats; becomes the output block
    idsp, verifp, coupp = _append_cat_block(b, n, ancp, t0, per_column=False,
                                            hadamard_basis=False, tag=tag, side="P")
    ids0, verif0, coup0 = _append_cat_block(b, n, anc0, t0, per_column=True,
                                            hadamard_basis=True, tag=tag, side="0")
    cat_ids = tuple(idsp + ids0)
    bell_t = max(coupp, coup0)
    for i in range(n):
        for j in range(n):
            q = i * n + j
            b.cnot(ancp[q], anc0[q], bell_t, key=("bell", tag, i, j))
    bell_meas: List[int] = []
    for i in range(n):
        for j in range(n):
            q = i * n + j
            bell_meas.append(b.cnot(data[q], ancp[q], bell_t + 1,
                                    key=("dcpl", tag, i, j)))
    mxd_ids = []
    mza_ids = []
    for i in range(n):
        for j in range(n):
            q = i * n + j
            mxd_ids.append(b.add(MX, (data[q],), bell_t + 2, key=("mdat", tag, i, j)))
    for i in range(n):
        for j in range(n):
            q = i * n + j
            mza_ids.append(b.add(MZ, (ancp[q],), bell_t + 2, key=("manc", tag, i, j)))
    bell_meas += mxd_ids + mza_ids
    end_time = bell_t + 2

    # Classical error correction on the Bell-measurement outcomes: the
    # syndrome parities select a pattern recovery on the teleported block
    # (cancelling the correlated pre-Bell ancilla errors it inherited),
    # and the corrected readouts give the logical Pauli frame update.
    zsyn_bits = []
    for k in range(n - 1):
        ids = tuple(mxd_ids[i * n + j] for i in (k, k + 1) for j in range(n))
        name = f"{tag}.zs{k}"
        b.direct(ParityBit(name, meas_ids=ids, time=end_time))
        zsyn_bits.append(name)
    b.direct(RecoverySelect(
        f"{tag}.zrec", "Z", tuple(zsyn_bits), "chain", n,
        supports=tuple((anc0[i * n + 0],) for i in range(n)), time=end_time))
    xsyn_bits = []
    for k in range(n - 1):
        ids = tuple(mza_ids[i * n + j] for j in (k, k + 1) for i in range(n))
        name = f"{tag}.xs{k}"
        b.direct(ParityBit(name, meas_ids=ids, time=end_time))
        xsyn_bits.append(name)
    b.direct(RecoverySelect(
        f"{tag}.xrec", "X", tuple(xsyn_bits), "chain", n,
        supports=tuple((anc0[0 * n + j],) for j in range(n)), time=end_time))
    xread = f"{tag}.xread"  # corrected logical X x X readout (rows of the data MX)
    zread = f"{tag}.zread"  # corrected logical Z x Z readout (columns of the |+> MZ)
    b.direct(LogicalReadout(
        xread, groups=tuple(tuple(mxd_ids[i * n + j] for j in range(n)) for i in range(n)),
        time=end_time))
    b.direct(LogicalReadout(
        zread, groups=tuple(tuple(mza_ids[i * n + j] for i in range(n)) for j in range(n)),
        time=end_time))
    b.direct(TeleportCorrection(block=block, x_bit=zread, z_bit=xread, time=end_time))
    return ECInfo(
        loc_ids=tuple(range(start, b.next_loc_id)),
        out_qubits=tuple(anc0),
        end_time=end_time,
        bell_measurement_ids=tuple(bell_meas),
        cat_prep_ids=cat_ids,
    )


# Gauge-operator coupling order per fragment: entry k holds the pair of
# rows (columns) the k-th weight-2 operator touches, first then second.
_GAUGE3_ORDER = ((0, 1), (1, 2), (2, 0))


def _append_gauge_ec(b: CircuitBuilder, n: int, data: Sequence[int], t0: int,
                     tag: str) -> ECInfo:
    """Syndrome extraction through the weight-2 gauge operators.

    Distance 3 measures, per column, the two vertical X pairs plus the
    aggregated redundancy operator (and mirrored Z pairs per row); the
    syndrome is the column-wise (row-wise) parity of the outcomes with a
    consistency check that suppresses recovery on measurement errors.
    Distance 5 repeats the plain extraction three times and majority-votes
    each syndrome bit.  72 locations at distance 3, 480 at distance 5.
    """
    start = b.next_loc_id
    rounds = 1 if n == 3 else 3
    ops = _GAUGE3_ORDER if n == 3 else tuple((k, k + 1) for k in range(n - 1))
    n_ops = len(ops)
    round_span = 4
    u_names: List[List[str]] = [[] for _ in range(n_ops)]
    v_names: List[List[str]] = [[] for _ in range(n_ops)]
    for r in range(rounds):
        rt = t0 + round_span * r
        ax = b.alloc(n_ops * n)
        for j in range(n):
            for k in range(n_ops):
                b.add(PP, (ax[k * n + j],), rt, key=("g", tag, "X", r, k, j, 0))
        for j in range(n):
            for k in range(n_ops):
                b.cnot(ax[k * n + j], data[ops[k][0] * n + j], rt + 1,
                       key=("g", tag, "X", r, k, j, 1))
        for j in range(n):
            for k in range(n_ops):
                b.cnot(ax[k * n + j], data[ops[k][1] * n + j], rt + 2,
                       key=("g", tag, "X", r, k, j, 2))
        mx_ids = {}
        for j in range(n):
            for k in range(n_ops):
                mx_ids[(k, j)] = b.add(MX, (ax[k * n + j],), rt + 3,
                                       key=("g", tag, "X", r, k, j, 3))
        az = b.alloc(n_ops * n)
        for i in range(n):
            for k in range(n_ops):
                b.add(P0, (az[k * n + i],), rt + 2, key=("g", tag, "Z", r, k, i, 0))
        for i in range(n):
            for k in range(n_ops):
                b.cnot(data[i * n + ops[k][0]], az[k * n + i], rt + 3,
                       key=("g", tag, "Z", r, k, i, 1))
        for i in range(n):
            for k in range(n_ops):
                b.cnot(data[i * n + ops[k][1]], az[k * n + i], rt + 4,
                       key=("g", tag, "Z", r, k, i, 2))
        mz_ids = {}
        for i in range(n):
            for k in range(n_ops):
                mz_ids[(k, i)] = b.add(MZ, (az[k * n + i],), rt + 5,
                                       key=("g", tag, "Z", r, k, i, 3))
        for k in range(n_ops):
            un = f"{tag}.u{k}r{r}"
            b.direct(ParityBit(un, meas_ids=tuple(mx_ids[(k, j)] for j in range(n)),
                               time=rt + 3))
            u_names[k].append(un)
            vn = f"{tag}.v{k}r{r}"
            b.direct(ParityBit(vn, meas_ids=tuple(mz_ids[(k, i)] for i in range(n)),
                               time=rt + 5))
            v_names[k].append(vn)
    end_time = t0 + round_span * (rounds - 1) + 5
    if rounds > 1:
        for k in range(n_ops):
            b.direct(MajorityBit(f"{tag}.u{k}", tuple(u_names[k]), time=end_time))
            b.direct(MajorityBit(f"{tag}.v{k}", tuple(v_names[k]), time=end_time))
        z_bits = tuple(f"{tag}.u{k}" for k in range(n_ops))
        x_bits = tuple(f"{tag}.v{k}" for k in range(n_ops))
        mode = "chain"
    else:
        z_bits = tuple(f"{tag}.u{k}r0" for k in range(n_ops))
        x_bits = tuple(f"{tag}.v{k}r0" for k in range(n_ops))
        mode = "chain_checked"
    b.direct(RecoverySelect(
        f"{tag}.zrec", "Z", z_bits, mode, n,
        supports=tuple((data[i * n + 0],) for i in range(n)), time=end_time))
    b.direct(RecoverySelect(
        f"{tag}.xrec", "X", x_bits, mode, n,
        supports=tuple((data[0 * n + j],) for j in range(n)), time=end_time))
    return ECInfo(
        loc_ids=tuple(range(start, b.next_loc_id)),
        out_qubits=tuple(data),
        end_time=end_time,
    )


_EC_APPENDERS = {
    "steane": lambda b, n, data, t0, tag, block, **kw: _append_steane_ec(b, n, data, t0, tag, **kw),
    "gauge": lambda b, n, data, t0, tag, block, **kw: _append_gauge_ec(b, n, data, t0, tag),
    "knill": lambda b, n, data, t0, tag, block, **kw: _append_knill_ec(b, n, data, t0, tag, block),
}


def _build_single_ec(code: SubsystemCode, style: str) -> Circuit:
    n = _check_code(code)
    b = CircuitBuilder(f"{code.name}-{style}-ec")
    data = b.alloc(n * n)
    b.input_qubits = list(data)
    info = _EC_APPENDERS[style](b, n, data, 0, "ec", 0)
    b.output_qubits = list(info.out_qubits)
    b.block_map = {q: (0, pos) for pos, q in enumerate(info.out_qubits)}
    return b.build()


def build_gauge_ec(code: SubsystemCode) -> Circuit:
    return _build_single_ec(code, "gauge")


def build_steane_ec(code: SubsystemCode) -> Circuit:
    return _build_single_ec(code, "steane")


def build_knill_ec(code: SubsystemCode) -> Circuit:
    return _build_single_ec(code, "knill")


# ----------------------------------------------------------------------
# extended rectangle
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExRec:
    """A transversal-CNOT gadget with leading and trailing EC gadgets.

    contracted and knill_ideal_bell shrink the set of fault-placeable
    locations without changing the circuit: a contracted rectangle treats
    preparation and measurement locations as ideal (their coefficients
    are zeroed in the recursion), and the ideal-Bell variant additionally
    treats the logical Bell measurements of the leading teleportation ECs
    as ideal.  dual_map is the id involution induced by the gadget
    family's grid-transpose / X-Z / block-swap symmetry.
    """
    circuit: Circuit
    code: SubsystemCode
    ec_style: str
    contracted: bool
    knill_ideal_bell: bool
    leading_ec_ids: Tuple[Tuple[int, ...], Tuple[int, ...]]
    ga_ids: Tuple[int, ...]
    trailing_ec_ids: Tuple[Tuple[int, ...], Tuple[int, ...]]
    block_mid_qubits: Tuple[Tuple[int, ...], Tuple[int, ...]]
    block_out_qubits: Tuple[Tuple[int, ...], Tuple[int, ...]]
    ga_time: int
    placeable_ids: Tuple[int, ...]
    cat_location_count: int
    dual_map: Tuple[int, ...]
    gate_kind: str = "CNOT"

    def __post_init__(self):
        every = sorted(self.leading_ec_ids[0] + self.leading_ec_ids[1] + self.ga_ids
                       + self.trailing_ec_ids[0] + self.trailing_ec_ids[1])
        if every != list(range(len(self.circuit.locations))):
            raise GadgetBuildError("EC/Ga partition must cover all locations exactly once")
        for i, j in enumerate(self.dual_map):
            if self.dual_map[j] != i:
                raise GadgetBuildError("dual map is not an involution")
            if self.circuit.locations[i].kind != _DUAL_KIND[self.circuit.locations[j].kind]:
                raise GadgetBuildError("dual map violates location-kind duality")

    @property
    def n_locations(self) -> int:
        return len(self.placeable_ids)

    def describe(self) -> Dict[str, object]:
        return {
            "code": self.code.name,
            "ec_style": self.ec_style,
            "contracted": self.contracted,
            "ideal_bell": self.knill_ideal_bell,
            "total_locations": len(self.circuit.locations),
            "placeable_locations": len(self.placeable_ids),
            "kind_counts": self.circuit.kind_counts(),
            "cat_locations_per_ec": self.cat_location_count,
        }


_DUAL_KIND = {
    LocationKind.MEMORY: LocationKind.MEMORY,
    LocationKind.CNOT: LocationKind.CNOT,
    LocationKind.PREP_0: LocationKind.PREP_PLUS,
    LocationKind.PREP_PLUS: LocationKind.PREP_0,
    LocationKind.MEAS_X: LocationKind.MEAS_Z,
    LocationKind.MEAS_Z: LocationKind.MEAS_X,
}


def build_cnot_exrec(code: SubsystemCode, ec_style: str = "steane",
                     contracted: bool = False,
                     knill_ideal_bell: bool = False,
                     steane_phase_order: str = "zx") -> ExRec:
    """Two leading ECs, a transversal CNOT, and two trailing ECs.

    steane_phase_order selects which ancilla block of the Steane gadget
    couples to the data first: "zx" reads the Z-error syndrome first,
    "xz" the X-error syndrome first.
    """
    n = _check_code(code)
    if ec_style not in EC_STYLES:
        raise GadgetBuildError(f"unknown EC style {ec_style!r}")
    if knill_ideal_bell and ec_style != "knill":
        raise GadgetBuildError("ideal-Bell placement applies to the knill style only")
    nn = n * n
    b = CircuitBuilder(f"{code.name}-{ec_style}-cnot-exrec")
    block1 = b.alloc(nn)
    block2 = b.alloc(nn)
    b.input_qubits = block1 + block2
    append = _EC_APPENDERS[ec_style]
    orders = steane_phase_order.split(",") if "," in steane_phase_order else [steane_phase_order] * 2
    kwl = {"phase_order": orders[0]} if ec_style == "steane" else {}
    kwt = {"phase_order": orders[1]} if ec_style == "steane" else {}
    lead1 = append(b, n, block1, 0, "lec0", 0, **kwl)
    lead2 = append(b, n, block2, 0, "lec1", 1, **kwl)
    ga_time = max(lead1.end_time, lead2.end_time) + 1
    ga_ids = tuple(
        b.cnot(lead1.out_qubits[i * n + j], lead2.out_qubits[i * n + j], ga_time,
               key=("ga", i, j))
        for i in range(n) for j in range(n))
    b.direct(LogicalCnot(ctrl_block=0, targ_block=1, time=ga_time))
    trail1 = append(b, n, lead1.out_qubits, ga_time + 1, "tec0", 0, **kwt)
    trail2 = append(b, n, lead2.out_qubits, ga_time + 1, "tec1", 1, **kwt)
    b.output_qubits = list(trail1.out_qubits) + list(trail2.out_qubits)
    for blk, info in enumerate((trail1, trail2)):
        for pos, q in enumerate(info.out_qubits):
            b.block_map[q] = (blk, pos)
    circuit = b.build()
    dual_map = [None] * len(circuit.locations)
    for key, loc_id in b.dual_keys.items():
        dual_map[loc_id] = b.dual_keys[dual_key(key)]
    if any(v is None for v in dual_map):
        raise GadgetBuildError("some locations lack duality keys")

    placeable = set(range(len(circuit.locations)))
    if contracted:
        placeable = {i for i in placeable
                     if circuit.locations[i].kind in (LocationKind.MEMORY, LocationKind.CNOT)}
    if knill_ideal_bell:
        ideal = set(lead1.bell_measurement_ids) | set(lead2.bell_measurement_ids)
        placeable -= ideal
    return ExRec(
        circuit=circuit,
        code=code,
        ec_style=ec_style,
        contracted=contracted,
        knill_ideal_bell=knill_ideal_bell,
        leading_ec_ids=(lead1.loc_ids, lead2.loc_ids),
        ga_ids=ga_ids,
        trailing_ec_ids=(trail1.loc_ids, trail2.loc_ids),
        block_mid_qubits=(lead1.out_qubits, lead2.out_qubits),
        block_out_qubits=(trail1.out_qubits, trail2.out_qubits),
        ga_time=ga_time,
        placeable_ids=tuple(sorted(placeable)),
        cat_location_count=len(lead1.cat_prep_ids),
        dual_map=tuple(dual_map),
    )


# ----------------------------------------------------------------------
# decoder and transversal Hadamard
# ----------------------------------------------------------------------

def build_decoder(code: SubsystemCode) -> Circuit:
    """Canonical block-to-qubit decoding circuit.

    Rows 0..n-2 are folded into the last row column-wise, the corner qubit
    then fans out across the last row; everything except the corner is
    measured (X for the folded rows, Z for the rest of the last row).
    16 locations at distance 3, 48 at distance 5.
    """
    n = _check_code(code)
    nn = n * n
    b = CircuitBuilder(f"{code.name}-decoder")
    data = b.alloc(nn)
    b.input_qubits = list(data)
    t = 0
    for i in range(n - 1):
        for j in range(n):
            b.cnot(data[i * n + j], data[(n - 1) * n + j], t)
        t += 1
    corner = data[(n - 1) * n + (n - 1)]
    for j in range(n - 1):
        b.cnot(corner, data[(n - 1) * n + j], t)
        t += 1
    for i in range(n - 1):
        for j in range(n):
            b.add(MX, (data[i * n + j],), t)
    for j in range(n - 1):
        b.add(MZ, (data[(n - 1) * n + j],), t)
    b.output_qubits = [corner]
    return b.build()


def build_logical_hadamard(code: SubsystemCode) -> Circuit:
    """Bitwise Hadamard; the accompanying 90-degree grid relabelling is
    recorded in block_map.  Provided for completeness, not analysed."""
    n = _check_code(code)
    nn = n * n
    b = CircuitBuilder(f"{code.name}-logical-h")
    data = b.alloc(nn)
    b.input_qubits = list(data)
    for q in range(nn):
        b.add(LocationKind.H, (data[q],), 0)
    b.output_qubits = list(data)
    b.block_map = {data[i * n + j]: (0, j * n + i) for i in range(n) for j in range(n)}
    return b.build()


def count_locations(circuit: Circuit, kind: Optional[LocationKind] = None) -> int:
    return circuit.count_locations(kind)


__all__ = [
    "EC_STYLES", "ECInfo", "ExRec", "GadgetBuildError",
    "build_gauge_ec", "build_steane_ec", "build_knill_ec",
    "build_cnot_exrec", "build_decoder", "build_logical_hadamard",
    "count_locations", "dual_key",
]
