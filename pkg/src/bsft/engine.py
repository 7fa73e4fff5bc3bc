"""Compiled single-sector evaluator for malignancy sweeps.

In circuits made of preparations, measurements and CNOTs the X-frame
evolution is independent of Z fault components and vice versa, so
incorrectness of each error type can be decided in its own sector.  This
module compiles an exRec once per sector: every location fault component
becomes a source bit, frame propagation is replayed symbolically to
express every classical-processing input as an XOR mask over source bits,
and the only remaining work per query is a handful of popcount parities
plus the (nonlinear) decode decisions.  Recoveries selected at runtime
re-enter the linear system through dedicated injection source bits whose
downstream influence was compiled in.

The compiled evaluator is validated against the direct interpreter in the
test suite; the build also verifies exhaustively that every single fault
component is benign, which both checks the gadget constructions and
justifies skipping sector-silent components during pair sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .circuits import (
    Circuit, Location, LocationKind,
    LogicalCnot, LogicalReadout, MajorityBit, ParityBit, Postselect,
    RecoverySelect, TeleportCorrection, chain_decode, checked_chain_decode,
)
from .codes import majority
from .gadgets import ExRec

_X, _Z = "X", "Z"


@dataclass(frozen=True)
class Part:
    """One sector component of a fault descriptor: its label (the x- or
    z-bits of the underlying Pauli, or 1 for a flip) and the source bits
    it activates."""
    value: int
    mask: int


class EngineError(RuntimeError):
    pass


class SectorEngine:
    """Single-sector compiled evaluator for one ExRec."""

    def __init__(self, exrec: ExRec, sector: str):
        if sector not in (_X, _Z):
            raise ValueError("sector must be 'X' or 'Z'")
        self.exrec = exrec
        self.sector = sector
        self.n_sources = 0
        self.loc_parts: Dict[int, Tuple[Part, ...]] = {}
        self.loc_silent_ok: Dict[int, bool] = {}
        self._compile()

    # -- compilation ----------------------------------------------------

    def _new_source(self) -> int:
        bit = 1 << self.n_sources
        self.n_sources += 1
        return bit

    def _compile(self):
        ex = self.exrec
        circuit = ex.circuit
        sector = self.sector
        qmask = [0] * circuit.n_qubits
        flip: Dict[int, int] = {}
        bit_refs: Dict[str, Tuple[str, object]] = {}  # name -> ("m", mask) | ("s", slot)
        nodes: List[tuple] = []
        n_slots = 0

        # Which fault components act in this sector, per location kind.
        if sector == _X:
            frame_prep = LocationKind.PREP_0
            flip_meas = LocationKind.MEAS_Z
            quiet_meas = LocationKind.MEAS_X
        else:
            frame_prep = LocationKind.PREP_PLUS
            flip_meas = LocationKind.MEAS_X
            quiet_meas = LocationKind.MEAS_Z

        items = [((loc.timestep, 0, i), loc) for i, loc in enumerate(circuit.locations)]
        items += [((d.time, 1, i), d) for i, d in enumerate(circuit.directives)]
        items.sort(key=lambda kv: kv[0])

        boundary_done = False
        for (t, _, _), item in items:
            if not boundary_done and t >= ex.ga_time:
                nodes.append(("boundary", self._block_taps(qmask, ex.block_mid_qubits)))
                boundary_done = True
            if isinstance(item, Location):
                kind = item.kind
                if kind == LocationKind.CNOT:
                    c, tq = item.qubits
                    if sector == _X:
                        qmask[tq] ^= qmask[c]
                    else:
                        qmask[c] ^= qmask[tq]
                    s_c, s_t = self._new_source(), self._new_source()
                    qmask[c] ^= s_c
                    qmask[tq] ^= s_t
                    self.loc_parts[item.id] = (
                        Part(1, s_c), Part(2, s_t), Part(3, s_c | s_t))
                    self.loc_silent_ok[item.id] = True
                elif kind in (LocationKind.MEMORY, LocationKind.H):
                    if kind == LocationKind.H:
                        raise EngineError("sector split is invalid for H locations")
                    s = self._new_source()
                    qmask[item.qubits[0]] ^= s
                    self.loc_parts[item.id] = (Part(1, s),)
                    self.loc_silent_ok[item.id] = True
                elif kind == frame_prep:
                    q = item.qubits[0]
                    qmask[q] = 0
                    s = self._new_source()
                    qmask[q] ^= s
                    self.loc_parts[item.id] = (Part(1, s),)
                    self.loc_silent_ok[item.id] = False
                elif kind in (LocationKind.PREP_0, LocationKind.PREP_PLUS):
                    qmask[item.qubits[0]] = 0
                    self.loc_parts[item.id] = ()
                    self.loc_silent_ok[item.id] = True
                elif kind == flip_meas:
                    q = item.qubits[0]
                    s = self._new_source()
                    flip[item.id] = qmask[q] ^ s
                    qmask[q] = 0
                    self.loc_parts[item.id] = (Part(1, s),)
                    self.loc_silent_ok[item.id] = False
                elif kind == quiet_meas:
                    flip[item.id] = 0
                    qmask[item.qubits[0]] = 0
                    self.loc_parts[item.id] = ()
                    self.loc_silent_ok[item.id] = True
                else:  # pragma: no cover
                    raise EngineError(f"unhandled kind {kind}")
            elif isinstance(item, ParityBit):
                m = 0
                for mid in item.meas_ids:
                    m ^= flip[mid]
                for name in item.bit_names:
                    ref = bit_refs[name]
                    if ref[0] != "m":
                        raise EngineError("parity over nonlinear bits unsupported")
                    m ^= ref[1]
                bit_refs[item.name] = ("m", m)
            elif isinstance(item, MajorityBit):
                refs = [bit_refs[n] for n in item.bit_names]
                if any(r[0] != "m" for r in refs):
                    raise EngineError("majority over nonlinear bits unsupported")
                nodes.append(("majority", tuple(r[1] for r in refs), n_slots))
                bit_refs[item.name] = ("s", n_slots)
                n_slots += 1
            elif isinstance(item, RecoverySelect):
                if item.error_kind != sector:
                    continue  # the selected pattern cannot touch this sector's frames
                refs = tuple(bit_refs[n] for n in item.syndrome_bits)
                inject = []
                for support in item.supports:
                    s = self._new_source()
                    for q in support:
                        qmask[q] ^= s
                    inject.append(s)
                nodes.append(("recover", refs, item.mode, item.n, tuple(inject)))
            elif isinstance(item, LogicalReadout):
                groups = []
                for group in item.groups:
                    m = 0
                    for mid in group:
                        m ^= flip[mid]
                    groups.append(m)
                nodes.append(("readout", tuple(groups), n_slots))
                bit_refs[item.name] = ("s", n_slots)
                n_slots += 1
            elif isinstance(item, TeleportCorrection):
                name = item.x_bit if sector == _X else item.z_bit
                if name is not None:
                    nodes.append(("teleport", item.block, bit_refs[name]))
            elif isinstance(item, LogicalCnot):
                nodes.append(("lcnot", item.ctrl_block, item.targ_block))
            elif isinstance(item, Postselect):
                m = 0
                for mid in item.meas_ids:
                    m ^= flip[mid]
                if m:
                    nodes.append(("postselect", m))
            else:  # pragma: no cover
                raise EngineError(f"unhandled directive {item!r}")
        if not boundary_done:
            nodes.append(("boundary", self._block_taps(qmask, ex.block_mid_qubits)))
        nodes.append(("final", self._block_taps(qmask, ex.block_out_qubits)))
        self.nodes = tuple(nodes)
        self.n_slots = n_slots
        self._verify_singletons()

    def _block_taps(self, qmask: Sequence[int], blocks) -> Tuple[Tuple[int, ...], ...]:
        """Per-block logical-content parity masks: column parities of the
        X frame (X sector) or row parities of the Z frame (Z sector)."""
        n = self.exrec.code.geometry[0]
        taps = []
        for qubits in blocks:
            groups = []
            for g in range(n):
                m = 0
                for k in range(n):
                    pos = (k * n + g) if self.sector == _X else (g * n + k)
                    m ^= qmask[qubits[pos]]
                groups.append(m)
            taps.append(tuple(groups))
        return tuple(taps)

    # -- evaluation ------------------------------------------------------

    def evaluate(self, active: int) -> Tuple[bool, bool]:
        """Returns (bad, accepted) for the activated source set."""
        lam = [0, 0]
        lam_in = None
        slots = [0] * self.n_slots
        for node in self.nodes:
            op = node[0]
            if op == "recover":
                _, refs, mode, n, inject = node
                bits = []
                for kind, val in refs:
                    if kind == "m":
                        bits.append((val & active).bit_count() & 1)
                    else:
                        bits.append(slots[val])
                rows = chain_decode(bits, n) if mode == "chain" else checked_chain_decode(bits, n)
                for i in rows:
                    active |= inject[i]
            elif op == "boundary":
                taps = node[1]
                lam_in = (
                    majority([(m & active).bit_count() & 1 for m in taps[0]]) ^ lam[0],
                    majority([(m & active).bit_count() & 1 for m in taps[1]]) ^ lam[1],
                )
            elif op == "final":
                taps = node[1]
                lam_out = (
                    majority([(m & active).bit_count() & 1 for m in taps[0]]) ^ lam[0],
                    majority([(m & active).bit_count() & 1 for m in taps[1]]) ^ lam[1],
                )
                if self.sector == _X:
                    ref = (lam_in[0], lam_in[0] ^ lam_in[1])
                else:
                    ref = (lam_in[0] ^ lam_in[1], lam_in[1])
                return (lam_out != ref, True)
            elif op == "readout":
                _, groups, slot = node
                slots[slot] = majority([(g & active).bit_count() & 1 for g in groups])
            elif op == "teleport":
                _, block, (kind, val) = node
                if kind == "m":
                    lam[block] ^= (val & active).bit_count() & 1
                else:
                    lam[block] ^= slots[val]
            elif op == "lcnot":
                _, cb, tb = node
                if self.sector == _X:
                    lam[tb] ^= lam[cb]
                else:
                    lam[cb] ^= lam[tb]
            elif op == "majority":
                _, masks, slot = node
                slots[slot] = majority([(m & active).bit_count() & 1 for m in masks])
            else:  # op == "postselect"
                if (node[1] & active).bit_count() & 1:
                    return (False, False)
        raise EngineError("program missing final node")  # pragma: no cover

    def _verify_singletons(self):
        """Every single fault component must be benign (goodness with t >= 1);
        the pair sweep relies on this to skip sector-silent components."""
        for loc_id, parts in self.loc_parts.items():
            for part in parts:
                bad, _ = self.evaluate(part.mask)
                if bad:
                    loc = self.exrec.circuit.locations[loc_id]
                    raise EngineError(
                        f"single {self.sector} fault component {part.value} at "
                        f"{loc.kind.value} location {loc_id} is malignant; "
                        "gadget construction violates the goodness property")

    # -- fault-set queries ------------------------------------------------

    def parts0(self, loc_id: int) -> Tuple[Part, ...]:
        """Sector components including, where realizable, the silent one."""
        parts = self.loc_parts[loc_id]
        if self.loc_silent_ok[loc_id]:
            return (Part(0, 0),) + parts
        return parts

    def set_is_malignant(self, loc_ids: Sequence[int]) -> bool:
        """Whether some assignment of nontrivial descriptors to exactly
        these locations breaks this sector.  Components silent in this
        sector are allowed (the overall descriptor stays nontrivial), but
        assignments with fewer than two active components are benign by
        the singleton check."""
        option_lists = [self.parts0(l) for l in loc_ids]
        if any(not opts for opts in option_lists):
            return False
        return self._search(option_lists, 0, 0, 0)

    def _search(self, option_lists, idx, active, n_active) -> bool:
        if idx == len(option_lists):
            if n_active < 2:
                return False
            bad, _ = self.evaluate(active)
            return bad
        remaining = len(option_lists) - idx
        if n_active + remaining < 2:
            return False
        for part in option_lists[idx]:
            inc = 1 if part.mask else 0
            if self._search(option_lists, idx + 1, active | part.mask, n_active + inc):
                return True
        return False

    def pair_witness(self, l1: int, l2: int) -> Optional[Tuple[Part, Part]]:
        """First malignant (part, part) combination for a pair, or None."""
        for p1 in self.loc_parts[l1]:
            for p2 in self.loc_parts[l2]:
                bad, _ = self.evaluate(p1.mask | p2.mask)
                if bad:
                    return (p1, p2)
        return None


def build_engines(exrec: ExRec) -> Tuple[SectorEngine, SectorEngine]:
    return SectorEngine(exrec, _X), SectorEngine(exrec, _Z)


def witness_descriptor(kind: LocationKind, sector: str, value: int):
    """Reconstruct a full fault descriptor from one sector component."""
    if kind == LocationKind.CNOT:
        if value == 0:
            return ("p", 0, 1)
        return ("p", value, 0) if sector == _X else ("p", 0, value)
    if kind in (LocationKind.MEMORY, LocationKind.H):
        if value == 0:
            return ("p", 0, 1) if sector == _X else ("p", 1, 0)
        return ("p", 1, 0) if sector == _X else ("p", 0, 1)
    return ("flip",)


__all__ = ["SectorEngine", "Part", "EngineError", "build_engines", "witness_descriptor"]
