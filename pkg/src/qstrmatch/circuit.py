"""Reversible gate netlists over named qubit registers.

Only classical permutation gates are supported, so a computational basis
state is mapped to a computational basis state and simulation is exact.
Simulation is bit-sliced: each qubit carries a Python int whose bit ``k`` is
the value of that qubit in lane ``k``, so thousands of basis inputs run
through the circuit in a single pass.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class GateKind(enum.Enum):
    X = "X"
    CX = "CX"
    CCX = "CCX"
    MCX = "MCX"
    SWAP = "SWAP"
    CSWAP = "CSWAP"


# (targets, exact number of controls or None for "at least one")
_ARITY = {
    GateKind.X: (1, 0),
    GateKind.CX: (1, 1),
    GateKind.CCX: (1, 2),
    GateKind.MCX: (1, None),
    GateKind.SWAP: (2, 0),
    GateKind.CSWAP: (2, 1),
}

Control = tuple[int, bool]


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    targets: tuple[int, ...]
    controls: tuple[Control, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(
            self, "controls", tuple((int(q), bool(p)) for q, p in self.controls)
        )
        n_targets, n_controls = _ARITY[self.kind]
        if len(self.targets) != n_targets:
            raise CircuitError(f"{self.kind.value} takes {n_targets} target(s)")
        if n_controls is None:
            if not self.controls:
                raise CircuitError("MCX needs at least one control")
        elif len(self.controls) != n_controls:
            raise CircuitError(f"{self.kind.value} takes {n_controls} control(s)")
        support = self.support
        if len(set(support)) != len(support):
            raise CircuitError(f"repeated qubit in {self}")
        if min(support) < 0:
            raise CircuitError(f"negative qubit index in {self}")

    @property
    def support(self) -> tuple[int, ...]:
        return self.targets + tuple(q for q, _ in self.controls)

    def __str__(self) -> str:
        return format_gate(self)


def x(t: int) -> Gate:
    return Gate(GateKind.X, (t,))


def cx(c: int, t: int, positive: bool = True) -> Gate:
    return Gate(GateKind.CX, (t,), ((c, positive),))


def ccx(c1: int, c2: int, t: int, p1: bool = True, p2: bool = True) -> Gate:
    return Gate(GateKind.CCX, (t,), ((c1, p1), (c2, p2)))


def mcx(controls: Iterable[Control], t: int) -> Gate:
    """Controlled-X with the narrowest gate kind that fits the control count."""
    controls = tuple(controls)
    if len(controls) == 1:
        return Gate(GateKind.CX, (t,), controls)
    if len(controls) == 2:
        return Gate(GateKind.CCX, (t,), controls)
    return Gate(GateKind.MCX, (t,), controls)


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


def cswap(c: int, a: int, b: int, positive: bool = True) -> Gate:
    return Gate(GateKind.CSWAP, (a, b), ((c, positive),))


def format_gate(g: Gate) -> str:
    text = f"{g.kind.value} t:{','.join(str(t) for t in g.targets)}"
    if g.controls:
        text += " c:" + ",".join(f"{'+' if p else '-'}{q}" for q, p in g.controls)
    return text


class Circuit:
    """An ordered gate list over ``qubit_count`` qubits with named registers."""

    def __init__(self, qubit_count: int = 0) -> None:
        self.qubit_count = qubit_count
        self.registers: dict[str, range] = {}
        self.ancilla_registers: set[str] = set()
        self.gates: list[Gate] = []

    def add_register(self, name: str, width: int, ancilla: bool = False) -> range:
        if name in self.registers:
            raise CircuitError(f"duplicate register name {name!r}")
        if width < 1:
            raise CircuitError(f"register {name!r} needs width >= 1, got {width}")
        r = range(self.qubit_count, self.qubit_count + width)
        self.qubit_count += width
        self.registers[name] = r
        if ancilla:
            self.ancilla_registers.add(name)
        return r

    def declare_register(self, name: str, start: int, width: int, ancilla: bool = False) -> range:
        """Name an existing qubit range (used when reading netlists)."""
        if name in self.registers:
            raise CircuitError(f"duplicate register name {name!r}")
        r = range(start, start + width)
        if width < 1 or start < 0 or r.stop > self.qubit_count:
            raise CircuitError(f"register {name!r} out of range")
        for other in self.registers.values():
            if r.start < other.stop and other.start < r.stop:
                raise CircuitError(f"register {name!r} overlaps another register")
        self.registers[name] = r
        if ancilla:
            self.ancilla_registers.add(name)
        return r

    def __getitem__(self, name: str) -> range:
        return self.registers[name]

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def ancilla_qubits(self) -> list[int]:
        return [q for name in sorted(self.ancilla_registers) for q in self.registers[name]]

    def append(self, gate: Gate) -> "Circuit":
        if max(gate.support) >= self.qubit_count:
            raise CircuitError(f"{gate} touches a qubit outside 0..{self.qubit_count - 1}")
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def compose(self, fragment: "Circuit") -> "Circuit":
        if fragment.qubit_count > self.qubit_count:
            raise CircuitError(
                f"fragment uses {fragment.qubit_count} qubits, circuit has {self.qubit_count}"
            )
        self.gates.extend(fragment.gates)
        return self

    def copy(self) -> "Circuit":
        c = Circuit(self.qubit_count)
        c.registers = dict(self.registers)
        c.ancilla_registers = set(self.ancilla_registers)
        c.gates = list(self.gates)
        return c

    def inverse(self) -> "Circuit":
        # every gate in the set is self-inverse
        c = self.copy()
        c.gates.reverse()
        return c

    def depth(self, expand_cswap: bool = False) -> int:
        return depth(self, expand_cswap)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.qubit_count == other.qubit_count
            and self.registers == other.registers
            and self.ancilla_registers == other.ancilla_registers
            and self.gates == other.gates
        )

    def __repr__(self) -> str:
        return f"Circuit(qubits={self.qubit_count}, gates={len(self.gates)})"


def circuit_from_gates(gates: Iterable[Gate], qubit_count: Optional[int] = None) -> Circuit:
    gates = list(gates)
    if qubit_count is None:
        qubit_count = 1 + max((max(g.support) for g in gates), default=-1)
    return Circuit(qubit_count).extend(gates)


# -- scheduling -------------------------------------------------------------

def compute_layers(circuit: Circuit | Sequence[Gate]) -> list[list[int]]:
    """ASAP layering: each gate goes one layer after the latest gate it shares a qubit with."""
    gates = circuit.gates if isinstance(circuit, Circuit) else circuit
    last: dict[int, int] = {}
    layers: list[list[int]] = []
    for idx, g in enumerate(gates):
        layer = max((last.get(q, -1) for q in g.support), default=-1) + 1
        if layer == len(layers):
            layers.append([])
        layers[layer].append(idx)
        for q in g.support:
            last[q] = layer
    return layers


def expand_cswaps(circuit: Circuit) -> Circuit:
    """Replace every CSWAP by three controlled-X gates (Fredkin as 3 Toffolis)."""
    out = circuit.copy()
    out.gates = []
    for g in circuit.gates:
        if g.kind is GateKind.CSWAP:
            a, b = g.targets
            out.gates.extend(
                [
                    mcx(g.controls + ((a, True),), b),
                    mcx(g.controls + ((b, True),), a),
                    mcx(g.controls + ((a, True),), b),
                ]
            )
        else:
            out.gates.append(g)
    return out


def depth(circuit: Circuit, expand_cswap: bool = False) -> int:
    if expand_cswap:
        circuit = expand_cswaps(circuit)
    return len(compute_layers(circuit))


def size(circuit: Circuit) -> int:
    return len(circuit.gates)


# -- controlled version -----------------------------------------------------

def controlled_version(circuit: Circuit, control: int, positive: bool = True) -> Circuit:
    """Add ``control`` to every gate; the result is the identity when it is unsatisfied."""
    used = {q for g in circuit.gates for q in g.support}
    if control in used:
        raise CircuitError(f"control qubit {control} is already used by the circuit")
    out = Circuit(max(circuit.qubit_count, control + 1))
    out.registers = dict(circuit.registers)
    out.ancilla_registers = set(circuit.ancilla_registers)
    extra = ((control, positive),)
    for g in circuit.gates:
        if g.kind is GateKind.SWAP:
            out.append(Gate(GateKind.CSWAP, g.targets, extra))
        elif g.kind is GateKind.CSWAP:
            a, b = g.targets
            both = extra + g.controls
            out.append(mcx(both + ((a, True),), b))
            out.append(mcx(both + ((b, True),), a))
            out.append(mcx(both + ((a, True),), b))
        else:
            out.append(mcx(extra + g.controls, g.targets[0]))
    return out


# -- simulation -------------------------------------------------------------

def simulate_lanes(circuit: Circuit, lanes: list[int], lane_mask: int) -> list[int]:
    """Run the circuit on bit-sliced state; ``lanes[q]`` holds qubit q across all lanes.

    ``lane_mask`` has one bit set per active lane (needed for negative controls
    and X).  Returns a new list.
    """
    if len(lanes) != circuit.qubit_count:
        raise CircuitError(
            f"state has {len(lanes)} qubits, circuit needs {circuit.qubit_count}"
        )
    s = list(lanes)
    full = lane_mask
    for g in circuit.gates:
        kind = g.kind
        if kind is GateKind.X:
            t = g.targets[0]
            s[t] ^= full
            continue
        if kind is GateKind.SWAP:
            a, b = g.targets
            s[a], s[b] = s[b], s[a]
            continue
        cond = full
        for q, pos in g.controls:
            cond &= s[q] if pos else ~s[q]
        if kind is GateKind.CSWAP:
            a, b = g.targets
            diff = (s[a] ^ s[b]) & cond
            s[a] ^= diff
            s[b] ^= diff
        else:
            s[g.targets[0]] ^= cond
    return s


def simulate(circuit: Circuit, state: Sequence[int]) -> list[int]:
    """Simulate one basis state given as a 0/1 sequence, one entry per qubit."""
    if len(state) != circuit.qubit_count:
        raise CircuitError(
            f"state has {len(state)} qubits, circuit needs {circuit.qubit_count}"
        )
    out = simulate_lanes(circuit, [1 if b else 0 for b in state], 1)
    return [v & 1 for v in out]


def pack_lanes(states: Sequence[Sequence[int]], qubit_count: int) -> list[int]:
    lanes = [0] * qubit_count
    for k, st in enumerate(states):
        if len(st) != qubit_count:
            raise CircuitError("state length mismatch")
        for q, b in enumerate(st):
            if b:
                lanes[q] |= 1 << k
    return lanes


def unpack_lanes(lanes: Sequence[int], count: int) -> list[list[int]]:
    return [[(v >> k) & 1 for v in lanes] for k in range(count)]


def simulate_batch(circuit: Circuit, states: Sequence[Sequence[int]]) -> list[list[int]]:
    if not states:
        return []
    lanes = pack_lanes(states, circuit.qubit_count)
    out = simulate_lanes(circuit, lanes, (1 << len(states)) - 1)
    return unpack_lanes(out, len(states))


def register_value(state: Sequence[int], reg: Iterable[int]) -> str:
    """Bits of ``reg`` as a string, lowest qubit first."""
    return "".join(str(state[q]) for q in reg)


# -- statevector cross-check ------------------------------------------------

MAX_STATEVECTOR_QUBITS = 20


def basis_permutation(circuit: Circuit) -> np.ndarray:
    """Index map of the circuit's 2^q x 2^q permutation matrix.

    ``perm[i]`` is the basis index that basis index ``i`` is sent to.  Basis
    index bit ``q`` is the value of qubit ``q``.  Computed on index arrays with
    numpy, independently of :func:`simulate_lanes`.
    """
    q = circuit.qubit_count
    if q > MAX_STATEVECTOR_QUBITS:
        raise CircuitError(f"{q} qubits exceeds the statevector limit {MAX_STATEVECTOR_QUBITS}")
    idx = np.arange(1 << q, dtype=np.int64)
    for g in circuit.gates:
        cond = np.ones(idx.shape, dtype=bool)
        for c, pos in g.controls:
            bit = (idx >> c) & 1
            cond &= bit == (1 if pos else 0)
        if g.kind in (GateKind.SWAP, GateKind.CSWAP):
            a, b = g.targets
            ba = (idx >> a) & 1
            bb = (idx >> b) & 1
            flip = cond & (ba != bb)
            idx = np.where(flip, idx ^ ((1 << a) | (1 << b)), idx)
        else:
            t = g.targets[0]
            idx = np.where(cond, idx ^ (1 << t), idx)
    return idx


def statevector_apply(circuit: Circuit, vec: np.ndarray) -> np.ndarray:
    perm = basis_permutation(circuit)
    out = np.zeros_like(vec)
    out[perm] = vec
    return out
