"""Text formats for circuits: a line-based netlist and an OpenQASM 3 subset.

Netlist::

    qubits 16
    reg x 0 8
    anc pool 12 4
    CCX t:12 c:+3,-4
    SWAP t:1,2

QASM export lowers negative controls to X-conjugation, so a QASM round trip
preserves semantics but not necessarily the exact gate list.
"""
from __future__ import annotations

import re

from .circuit import Circuit, CircuitError, Gate, GateKind, format_gate, mcx, swap, cswap, x


class FormatError(ValueError):
    pass


def to_netlist(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.qubit_count}"]
    for name, r in circuit.registers.items():
        tag = "anc" if name in circuit.ancilla_registers else "reg"
        lines.append(f"{tag} {name} {r.start} {len(r)}")
    lines.extend(format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


_GATE_RE = re.compile(r"^(?P<kind>[A-Z]+)\s+t:(?P<t>[0-9,]+)(?:\s+c:(?P<c>[-+0-9,]+))?$")


def _parse_controls(text: str) -> tuple[tuple[int, bool], ...]:
    out = []
    for item in text.split(","):
        if not item or item[0] not in "+-":
            raise FormatError(f"bad control {item!r}")
        out.append((int(item[1:]), item[0] == "+"))
    return tuple(out)


def from_netlist(text: str) -> Circuit:
    circuit = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head = line.split()
            if head[0] == "qubits":
                if circuit is not None:
                    raise FormatError("duplicate 'qubits' header")
                circuit = Circuit(int(head[1]))
                continue
            if circuit is None:
                raise FormatError("missing 'qubits' header")
            if head[0] in ("reg", "anc"):
                _, name, start, width = head
                circuit.declare_register(name, int(start), int(width), ancilla=head[0] == "anc")
                continue
            m = _GATE_RE.match(line)
            if not m:
                raise FormatError(f"cannot parse {line!r}")
            try:
                kind = GateKind(m["kind"])
            except ValueError:
                raise FormatError(f"unknown gate kind {m['kind']!r}") from None
            targets = tuple(int(t) for t in m["t"].split(","))
            controls = _parse_controls(m["c"]) if m["c"] else ()
            circuit.append(Gate(kind, targets, controls))
        except (CircuitError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if circuit is None:
        raise FormatError("empty netlist")
    return circuit


# -- OpenQASM 3 subset ------------------------------------------------------

_QASM_NAMES = {
    GateKind.X: "x",
    GateKind.CX: "cx",
    GateKind.CCX: "ccx",
    GateKind.SWAP: "swap",
    GateKind.CSWAP: "cswap",
}


def _q(i: int) -> str:
    return f"q[{i}]"


def _qasm_gate(g: Gate) -> list[str]:
    negs = [q for q, pos in g.controls if not pos]
    flips = [f"x {_q(q)};" for q in negs]
    ctrl = [_q(q) for q, _ in g.controls]
    tgts = [_q(t) for t in g.targets]
    if g.kind is GateKind.MCX:
        body = f"ctrl({len(ctrl)}) @ x {', '.join(ctrl + tgts)};"
    else:
        body = f"{_QASM_NAMES[g.kind]} {', '.join(ctrl + tgts)};"
    return flips + [body] + flips


def to_qasm(circuit: Circuit) -> str:
    lines = [
        "OPENQASM 3.0;",
        'include "stdgates.inc";',
    ]
    for name, r in circuit.registers.items():
        tag = "anc" if name in circuit.ancilla_registers else "reg"
        lines.append(f"// {tag} {name} {r.start} {len(r)}")
    lines.append(f"qubit[{circuit.qubit_count}] q;")
    for g in circuit.gates:
        lines.extend(_qasm_gate(g))
    return "\n".join(lines) + "\n"


_QASM_STMT = re.compile(
    r"^(?:ctrl\((?P<k>\d+)\)\s*@\s*)?(?P<name>x|cx|ccx|swap|cswap)\s+(?P<args>[^;]+);$"
)
_QUBIT_REF = re.compile(r"^q\[(\d+)\]$")


def _refs(args: str) -> list[int]:
    out = []
    for a in args.split(","):
        m = _QUBIT_REF.match(a.strip())
        if not m:
            raise FormatError(f"unsupported operand {a.strip()!r}")
        out.append(int(m[1]))
    return out


def from_qasm(text: str) -> Circuit:
    circuit = None
    pending_regs: list[tuple[str, str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("//"):
            parts = line[2:].split()
            if len(parts) == 4 and parts[0] in ("reg", "anc"):
                pending_regs.append((parts[0], parts[1], int(parts[2]), int(parts[3])))
            continue
        if line.startswith("OPENQASM") or line.startswith("include"):
            continue
        try:
            m = re.match(r"^qubit\[(\d+)\]\s+q;$", line)
            if m:
                circuit = Circuit(int(m[1]))
                for tag, name, start, width in pending_regs:
                    circuit.declare_register(name, start, width, ancilla=tag == "anc")
                continue
            if circuit is None:
                raise FormatError("gate before qubit declaration")
            m = _QASM_STMT.match(line)
            if not m:
                raise FormatError(f"unsupported statement {line!r}")
            ops = _refs(m["args"])
            name = m["name"]
            if m["k"] is not None:
                if name != "x":
                    raise FormatError("ctrl(k) @ is only supported on x")
                k = int(m["k"])
                if len(ops) != k + 1:
                    raise FormatError(f"ctrl({k}) @ x needs {k + 1} operands")
                circuit.append(mcx([(c, True) for c in ops[:-1]], ops[-1]))
            elif name == "x":
                circuit.append(x(*ops))
            elif name in ("cx", "ccx"):
                circuit.append(mcx([(c, True) for c in ops[:-1]], ops[-1]))
            elif name == "swap":
                circuit.append(swap(*ops))
            else:
                circuit.append(cswap(*ops))
        except (CircuitError, TypeError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if circuit is None:
        raise FormatError("no qubit declaration")
    return circuit


def write_circuit(circuit: Circuit, path: str, fmt: str = "netlist") -> None:
    text = to_qasm(circuit) if fmt == "qasm" else to_netlist(circuit)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_circuit(path: str) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("OPENQASM"):
        return from_qasm(text)
    return from_netlist(text)


__all__ = [
    "FormatError",
    "to_netlist",
    "from_netlist",
    "to_qasm",
    "from_qasm",
    "write_circuit",
    "read_circuit",
]
