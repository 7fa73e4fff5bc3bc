"""Dense statevector oracle for exRec correctness, independent of the frame engine.

Simulates the full quantum circuit with explicit Pauli faults inserted as
gates, sampling measurement outcomes by the Born rule and executing the
classical directives on the sampled bits.  Qubits are allocated lazily at
preparation and dropped after measurement, which keeps the live register
at <= 21 qubits for the distance-3 rectangles.

Each error type is probed in the basis where it is observable: X-type
incorrectness on logical |00> inputs (column Z-products are then
deterministic), Z-type on logical |++> inputs.  Outcome flips are defined
against a fault-free pass driven by identical random draws; for the
stabilizer states arising here every outcome is either deterministic or
an unbiased coin shared between the two passes, so flips are exact.
"""

from __future__ import annotations

import numpy as np

from bsft.circuits import (
    Circuit, Location, LocationKind,
    LogicalCnot, LogicalReadout, MajorityBit, ParityBit, Postselect,
    RecoverySelect, TeleportCorrection, chain_decode, checked_chain_decode,
)
from bsft.codes import majority
from bsft.gadgets import ExRec


class DenseState:
    """Statevector over a dynamic qubit register."""

    def __init__(self, rng):
        self.rng = rng
        self.vec = np.ones(1, dtype=np.complex128)
        self.pos = {}

    @property
    def n(self):
        return len(self.pos)

    def alloc(self, q, plus):
        if q in self.pos:
            raise ValueError(f"qubit {q} already live")
        self.pos[q] = self.n
        amp = (np.array([1.0, 1.0]) / np.sqrt(2.0) if plus
               else np.array([1.0, 0.0])).astype(np.complex128)
        self.vec = np.kron(self.vec, amp)

    def _reshaped(self):
        return self.vec.reshape([2] * self.n)

    def apply_x(self, q):
        self.vec = np.flip(self._reshaped(), axis=self.pos[q]).reshape(-1)

    def apply_z(self, q):
        v = self._reshaped().copy()
        idx = [slice(None)] * self.n
        idx[self.pos[q]] = 1
        v[tuple(idx)] *= -1.0
        self.vec = v.reshape(-1)

    def apply_h(self, q):
        v = np.moveaxis(self._reshaped().copy(), self.pos[q], 0)
        a, b = v[0].copy(), v[1].copy()
        s = 1.0 / np.sqrt(2.0)
        v[0], v[1] = s * (a + b), s * (a - b)
        self.vec = np.moveaxis(v, 0, self.pos[q]).reshape(-1)

    def apply_cnot(self, c, t):
        v = np.moveaxis(self._reshaped().copy(), (self.pos[c], self.pos[t]), (0, 1))
        v[1, 0], v[1, 1] = v[1, 1].copy(), v[1, 0].copy()
        self.vec = np.moveaxis(v, (0, 1), (self.pos[c], self.pos[t])).reshape(-1)

    def measure_z(self, q):
        v = np.moveaxis(self._reshaped(), self.pos[q], 0)
        p0 = float(np.sum(np.abs(v[0]) ** 2))
        bit = 0 if self.rng.random() < p0 else 1
        kept = v[bit] / np.linalg.norm(v[bit])
        axis = self.pos.pop(q)
        for other, a in self.pos.items():
            if a > axis:
                self.pos[other] = a - 1
        self.vec = kept.reshape(-1)
        return bit

    def measure_x(self, q):
        self.apply_h(q)
        return self.measure_z(q)

    def expect_pauli(self, xs, zs):
        v = self._reshaped().copy()
        for q in xs:
            v = np.flip(v, axis=self.pos[q])
        for q in zs:
            idx = [slice(None)] * self.n
            idx[self.pos[q]] = 1
            v = v.copy()
            v[tuple(idx)] *= -1.0
        return float(np.real(np.vdot(self.vec, v.reshape(-1))))

    def clone(self):
        c = DenseState(self.rng)
        c.vec = self.vec.copy()
        c.pos = dict(self.pos)
        return c


def _prepare_block(state, qubits, n, basis):
    """Logical |0> (Hadamard-basis column cats) or |+> (row cats)."""
    if basis == "Z":
        for j in range(n):
            col = [qubits[i * n + j] for i in range(n)]
            state.alloc(col[0], plus=True)
            for q in col[1:]:
                state.alloc(q, plus=False)
            for q in col[1:]:
                state.apply_cnot(col[0], q)
            for q in col:
                state.apply_h(q)
    else:
        for i in range(n):
            row = [qubits[i * n + j] for j in range(n)]
            state.alloc(row[0], plus=True)
            for q in row[1:]:
                state.alloc(q, plus=False)
            for q in row[1:]:
                state.apply_cnot(row[0], q)


def _sector_logical(state, qubits, n, basis):
    """Logical error component readable in this basis (majority decode)."""
    vals = []
    for g in range(n):
        if basis == "Z":  # X errors flip Z column products
            ops = ([], [qubits[i * n + g] for i in range(n)])
        else:             # Z errors flip X row products
            ops = ([qubits[g * n + j] for j in range(n)], [])
        e = state.expect_pauli(*ops)
        if abs(abs(e) - 1.0) > 1e-6:
            raise RuntimeError(f"group {g} product not deterministic: {e}")
        vals.append(0 if e > 0 else 1)
    return majority(vals)


def _apply_fault(st, outcomes, loc, desc):
    if desc == ("flip",):
        if loc.kind in (LocationKind.MEAS_X, LocationKind.MEAS_Z):
            outcomes[loc.id] ^= 1
        elif loc.kind == LocationKind.PREP_0:
            st.apply_x(loc.qubits[0])
        elif loc.kind == LocationKind.PREP_PLUS:
            st.apply_z(loc.qubits[0])
        else:
            raise ValueError(f"flip fault invalid on {loc.kind}")
        return
    _, xb, zb = desc
    for k, q in enumerate(loc.qubits):
        if (xb >> k) & 1:
            st.apply_x(q)
        if (zb >> k) & 1:
            st.apply_z(q)


def _oracle_schedule(exrec: ExRec):
    """Locations in a register-minimizing order that respects per-qubit
    gate sequences: ancilla fragments are streamed one at a time (their
    operations commute with everything on disjoint qubits), so at most one
    fragment's qubits are live beside the block qubits.  Directives keep
    their global time order relative to the streamed locations."""
    circuit = exrec.circuit
    blockq = set(circuit.input_qubits)
    for blk in exrec.block_mid_qubits + exrec.block_out_qubits:
        blockq |= set(blk)
    segments = [exrec.leading_ec_ids[0], exrec.leading_ec_ids[1],
                exrec.ga_ids, exrec.trailing_ec_ids[0], exrec.trailing_ec_ids[1]]
    ordered = []
    for seg in segments:
        locs = [circuit.locations[i] for i in seg]
        # union-find fragments over ancilla qubits via shared locations
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for loc in locs:
            anc = [q for q in loc.qubits if q not in blockq]
            for q in anc:
                parent.setdefault(q, q)
            if len(anc) == 2:
                union(anc[0], anc[1])
        frag_of = {}
        for loc in locs:
            anc = [q for q in loc.qubits if q not in blockq]
            frag_of[loc.id] = find(anc[0]) if anc else None
        frags = []
        seen = {}
        for loc in locs:
            f = frag_of[loc.id]
            if f not in seen:
                seen[f] = len(frags)
                frags.append([])
            frags[seen[f]].append(loc)
        # block-only locations keep their own group; fragments stream whole
        for group in frags:
            group.sort(key=lambda l: (l.timestep, l.id))
            ordered.extend(group)
    return ordered


def _run(exrec: ExRec, faults, basis, seed, with_directives):
    """One pass; returns (accepted, lam_in, lam_out, outcomes)."""
    n = exrec.code.geometry[0]
    circuit = exrec.circuit
    rng = np.random.default_rng(seed)
    st = DenseState(rng)
    _prepare_block(st, circuit.input_qubits[: n * n], n, basis)
    _prepare_block(st, circuit.input_qubits[n * n:], n, basis)

    outcomes, flips, bits = {}, {}, {}
    logical_frame = {0: [0, 0], 1: [0, 0]}
    accepted = True
    lam_in = None
    ref_outcomes = with_directives  # dict when doing the faulty pass

    # Streamed locations keep their streamed order but interleave with the
    # directives by phase: 0 before the Ga, 1 the Ga step, 2 after.
    ga_set = set(exrec.ga_ids)
    lead_set = set(exrec.leading_ec_ids[0]) | set(exrec.leading_ec_ids[1])
    items = []
    for k, loc in enumerate(_oracle_schedule(exrec)):
        phase = 0 if loc.id in lead_set else (1 if loc.id in ga_set else 2)
        items.append(((phase, 0, k), loc))
    for k, d in enumerate(circuit.directives):
        phase = 0 if d.time < exrec.ga_time else (1 if d.time == exrec.ga_time else 2)
        # directives run after the locations of their phase
        items.append(((phase, 1, k), d))
    items.sort(key=lambda kv: kv[0])

    for (phase, _, _), item in items:
        if lam_in is None and phase >= 1:
            lam = []
            for blk in (0, 1):
                l = _sector_logical(st, exrec.block_mid_qubits[blk], n, basis)
                tx, tz = logical_frame[blk]
                lam.append(l ^ (tx if basis == "Z" else tz))
            lam_in = tuple(lam)
        if isinstance(item, Location):
            kind = item.kind
            if kind == LocationKind.CNOT:
                st.apply_cnot(*item.qubits)
            elif kind == LocationKind.PREP_0:
                st.alloc(item.qubits[0], plus=False)
            elif kind == LocationKind.PREP_PLUS:
                st.alloc(item.qubits[0], plus=True)
            elif kind == LocationKind.MEAS_X:
                outcomes[item.id] = st.measure_x(item.qubits[0])
            elif kind == LocationKind.MEAS_Z:
                outcomes[item.id] = st.measure_z(item.qubits[0])
            elif kind == LocationKind.H:
                st.apply_h(item.qubits[0])
            d = faults.get(item.id)
            if d is not None:
                _apply_fault(st, outcomes, item, d)
            if ref_outcomes is not None and kind in (LocationKind.MEAS_X, LocationKind.MEAS_Z):
                flips[item.id] = outcomes[item.id] ^ ref_outcomes[item.id]
        elif ref_outcomes is None:
            continue  # reference pass skips classical processing
        elif isinstance(item, ParityBit):
            v = 0
            for m in item.meas_ids:
                v ^= flips[m]
            for nm in item.bit_names:
                v ^= bits[nm]
            bits[item.name] = v
        elif isinstance(item, MajorityBit):
            bits[item.name] = majority([bits[nm] for nm in item.bit_names])
        elif isinstance(item, RecoverySelect):
            vals = [bits[nm] for nm in item.syndrome_bits]
            rows = (chain_decode(vals, item.n) if item.mode == "chain"
                    else checked_chain_decode(vals, item.n))
            for i in rows:
                for q in item.supports[i]:
                    (st.apply_z if item.error_kind == "Z" else st.apply_x)(q)
        elif isinstance(item, LogicalReadout):
            pars = []
            for group in item.groups:
                v = 0
                for m in group:
                    v ^= flips[m]
                pars.append(v)
            bits[item.name] = majority(pars)
        elif isinstance(item, TeleportCorrection):
            if item.x_bit is not None:
                logical_frame[item.block][0] ^= bits[item.x_bit]
            if item.z_bit is not None:
                logical_frame[item.block][1] ^= bits[item.z_bit]
        elif isinstance(item, LogicalCnot):
            lc = logical_frame[item.ctrl_block]
            lt = logical_frame[item.targ_block]
            lt[0] ^= lc[0]
            lc[1] ^= lt[1]
        elif isinstance(item, Postselect):
            if any(flips[m] for m in item.meas_ids):
                accepted = False
    lam_out = []
    for blk in (0, 1):
        l = _sector_logical(st, exrec.block_out_qubits[blk], n, basis)
        tx, tz = logical_frame[blk]
        lam_out.append(l ^ (tx if basis == "Z" else tz))
    return accepted, lam_in, tuple(lam_out), outcomes


def oracle_sector_bad(exrec: ExRec, faults, basis, seed=0):
    """True iff the rectangle is incorrect for the error type observable in
    this basis ("Z" basis probes X-type errors, "X" probes Z-type)."""
    _, _, _, ref = _run(exrec, {}, basis, seed, with_directives=None)
    accepted, lam_in, lam_out, _ = _run(exrec, faults, basis, seed, with_directives=ref)
    if not accepted:
        return False
    if basis == "Z":  # X components conjugate as x1 -> (x1, x1^x2)
        ref_lam = (lam_in[0], lam_in[0] ^ lam_in[1])
    else:             # Z components: (z1^z2, z2)
        ref_lam = (lam_in[0] ^ lam_in[1], lam_in[1])
    return lam_out != ref_lam


def oracle_is_incorrect(exrec: ExRec, faults, seed=0):
    return (oracle_sector_bad(exrec, faults, "Z", seed),
            oracle_sector_bad(exrec, faults, "X", seed))
