"""Assembly of the complete fixed-substring-matching circuit.

Stages, in order: ``init`` (load x, y, d and the D^-1 pattern, then reverse
the d register), ``lambda`` (match operator and extensions), one ``D<i>``
stage per bit of d (controlled AND, controlled rotation, reverse-controlled
copy), and ``disjunction`` onto the result qubit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .circuit import Circuit, Gate, compute_layers, expand_cswaps, simulate_lanes, x
from .operators import (
    BlockEncoding,
    OperatorFragment,
    build_crc,
    build_ctrl_bitwise_and,
    build_ctrl_rot_pow2,
    build_disjunction,
    build_ext,
    build_match,
    build_match_block,
    build_reversal,
    controlled_copy_ancillae,
    disjunction_ancillae,
    match_block_ancillae,
    rotation_ancillae,
)
from .reference import (
    SENTINELS,
    InputPair,
    Problem,
    ProblemSpec,
    init_dminus1,
    is_power_of_two,
)


@dataclass
class RegisterLayout:
    n: int
    b: int
    top: int
    x: range
    y: range
    dreg: range
    lam: list[range]
    D: list[range]  # D[0] holds D^-1, D[i + 1] holds D^i
    r: int
    pool: range

    def d_reg(self, level: int) -> range:
        return self.D[level + 1]

    @property
    def qubit_count(self) -> int:
        return self.pool.stop


@dataclass
class Stage:
    name: str
    start: int
    stop: int
    depth: int
    depth_lowered: int
    fragments: list[OperatorFragment] = field(default_factory=list)


@dataclass
class AssembledCircuit:
    circuit: Circuit
    layout: RegisterLayout
    stages: list[Stage]
    pair: InputPair
    spec: ProblemSpec
    encoding: BlockEncoding

    def stage(self, name: str) -> Stage:
        for st in self.stages:
            if st.name == name:
                return st
        raise KeyError(name)

    def prefix(self, upto: str) -> Circuit:
        """The circuit truncated after the named stage."""
        c = self.circuit.copy()
        c.gates = c.gates[: self.stage(upto).stop]
        return c

    def core(self) -> Circuit:
        """Everything after the init stage (its input is :func:`loaded_state`)."""
        c = self.circuit.copy()
        c.gates = c.gates[self.stage("init").stop:]
        return c


@dataclass
class RunReport:
    answer: bool
    depth: int
    asap_depth: int
    depth_lowered: int
    size: int
    qubits: int
    ancillae: int
    stage_depths: list[tuple[str, int]]
    n: int
    d: int
    b: int
    kind: str

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "d": self.d,
            "b": self.b,
            "answer": self.answer,
            "depth": self.depth,
            "asap_depth": self.asap_depth,
            "depth_cswap_as_3ccx": self.depth_lowered,
            "size": self.size,
            "qubits": self.qubits,
            "ancillae": self.ancillae,
            "stages": dict(self.stage_depths),
        }


def default_encoding(pair: InputPair) -> BlockEncoding:
    """One bit per character when the strings are over at most two symbols and
    carry no sentinels; otherwise a block code with room for '$' and '%'."""
    chars = set(pair.x) | set(pair.y)
    if len(chars) <= 2 and not chars & SENTINELS:
        return BlockEncoding.binary(sorted(chars) or ["0"])
    return BlockEncoding.for_alphabet(pair.alphabet)


def make_layout(n: int, d: int, b: int) -> tuple[Circuit, RegisterLayout]:
    if not is_power_of_two(n) or n < 2:
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    if not 1 <= d <= n:
        raise ValueError(f"d={d} out of range 1..{n}")
    top = d.bit_length() - 1
    c = Circuit()
    xr = c.add_register("x", n * b)
    yr = c.add_register("y", n * b)
    dr = c.add_register("d", top + 1)
    lam = [c.add_register(f"lambda{i}", n) for i in range(top + 1)]
    D = [c.add_register(f"D{i}", n + 1) for i in range(-1, top + 1)]
    r = c.add_register("r", 1)[0]
    need = max(
        match_block_ancillae(n, b) if b > 1 else 0,
        rotation_ancillae(n + 1),
        controlled_copy_ancillae(n + 1),
        disjunction_ancillae(n + 1 - d),
        1,
    )
    pool = c.add_register("pool", need, ancilla=True)
    return c, RegisterLayout(n, b, top, xr, yr, dr, lam, D, r, pool)


def _init_gates(layout: RegisterLayout, pair: InputPair, spec: ProblemSpec, enc: BlockEncoding) -> list[Gate]:
    gates = []
    for reg, s in ((layout.x, pair.x), (layout.y, pair.y)):
        gates.extend(x(q) for q, bit in zip(reg, enc.encode(s)) if bit)
    # d is written most significant bit first; the reversal turns it into dbar
    width = len(layout.dreg)
    gates.extend(x(layout.dreg[k]) for k in range(width) if (spec.d >> (width - 1 - k)) & 1)
    dm1 = init_dminus1(spec, pair.n).bits
    gates.extend(x(q) for p, q in enumerate(layout.d_reg(-1)) if (dm1 >> p) & 1)
    return gates


def assemble(
    pair: InputPair, spec: ProblemSpec, enc: Optional[BlockEncoding] = None
) -> AssembledCircuit:
    n = pair.n
    spec.check(n)
    enc = enc or default_encoding(pair)
    for ch in set(pair.x) | set(pair.y):
        if ch not in enc.code:
            raise ValueError(f"encoding has no code for {ch!r}")
    circuit, L = make_layout(n, spec.d, enc.b)
    pool = list(L.pool)
    stages: list[Stage] = []

    def close(name: str, start: int, frags: list[OperatorFragment]) -> None:
        seg = circuit.gates[start:]
        lowered = expand_cswaps(Circuit(circuit.qubit_count).extend(seg))
        stages.append(
            Stage(name, start, len(circuit.gates), len(compute_layers(seg)), len(compute_layers(lowered)), frags)
        )

    def add(frag: OperatorFragment, frags: list[OperatorFragment]) -> None:
        circuit.compose(frag.circuit)
        frags.append(frag)

    start = len(circuit.gates)
    circuit.extend(_init_gates(L, pair, spec, enc))
    frags: list[OperatorFragment] = []
    add(build_reversal(list(L.dreg)), frags)
    close("init", start, frags)

    start, frags = len(circuit.gates), []
    if enc.b == 1:
        add(build_match(list(L.x), list(L.y), list(L.lam[0])), frags)
    else:
        add(build_match_block(list(L.x), list(L.y), list(L.lam[0]), enc, pool), frags)
    for i in range(1, L.top + 1):
        add(build_ext(list(L.lam[i - 1]), list(L.lam[i]), i), frags)
    close("lambda", start, frags)

    for i in range(L.top + 1):
        start, frags = len(circuit.gates), []
        ctrl = L.dreg[i]
        prev, cur = list(L.d_reg(i - 1)), list(L.d_reg(i))
        # lambda is n wide; D[n] is never ANDed, i.e. lambda is zero-padded at index n
        add(build_ctrl_bitwise_and(ctrl, prev[:n], list(L.lam[i]), cur[:n], pool), frags)
        add(build_ctrl_rot_pow2(ctrl, cur, i, pool), frags)
        add(build_crc(ctrl, prev, cur, pool), frags)
        close(f"D{i}", start, frags)

    start, frags = len(circuit.gates), []
    final = list(L.d_reg(L.top))
    add(build_disjunction(final[spec.d:], L.r, pool), frags)
    close("disjunction", start, frags)

    return AssembledCircuit(circuit, L, stages, pair, spec, enc)


def loaded_state(layout: RegisterLayout, pair: InputPair, spec: ProblemSpec, enc: BlockEncoding) -> list[int]:
    """Basis state right after the init stage, built directly (no simulation)."""
    state = [0] * layout.qubit_count
    for reg, s in ((layout.x, pair.x), (layout.y, pair.y)):
        for q, bit in zip(reg, enc.encode(s)):
            state[q] = bit
    for k, q in enumerate(layout.dreg):
        state[q] = (spec.d >> k) & 1
    dm1 = init_dminus1(spec, pair.n).bits
    for p, q in enumerate(layout.d_reg(-1)):
        state[q] = (dm1 >> p) & 1
    return state


def loaded_states(
    layout: RegisterLayout,
    pairs: Sequence[InputPair],
    specs: Sequence[ProblemSpec],
    enc: BlockEncoding,
) -> np.ndarray:
    """Post-init states for many instances as a (lanes, qubits) 0/1 matrix."""
    rows = np.zeros((len(pairs), layout.qubit_count), dtype=np.uint8)
    cache: dict[str, list[int]] = {}

    def bits(s: str) -> list[int]:
        if s not in cache:
            cache[s] = enc.encode(s)
        return cache[s]

    rows[:, layout.x.start:layout.x.stop] = [bits(p.x) for p in pairs]
    rows[:, layout.y.start:layout.y.stop] = [bits(p.y) for p in pairs]
    dm1 = layout.d_reg(-1)
    for lane, (p, s) in enumerate(zip(pairs, specs)):
        for k, q in enumerate(layout.dreg):
            rows[lane, q] = (s.d >> k) & 1
        v = init_dminus1(s, p.n).bits
        rows[lane, dm1.start:dm1.stop] = [(v >> j) & 1 for j in range(len(dm1))]
    return rows


def columns_to_lanes(rows: np.ndarray) -> list[int]:
    """Turn a (lanes, qubits) 0/1 matrix into one lane-packed int per qubit."""
    packed = np.packbits(np.ascontiguousarray(rows.T), axis=1, bitorder="little")
    return [int.from_bytes(col.tobytes(), "little") for col in packed]


def _report(asm: AssembledCircuit, answer: bool) -> RunReport:
    c = asm.circuit
    return RunReport(
        answer=answer,
        depth=sum(st.depth for st in asm.stages),
        asap_depth=len(compute_layers(c)),
        depth_lowered=sum(st.depth_lowered for st in asm.stages),
        size=len(c.gates),
        qubits=c.qubit_count,
        ancillae=len(asm.layout.pool),
        stage_depths=[(st.name, st.depth) for st in asm.stages],
        n=asm.pair.n,
        d=asm.spec.d,
        b=asm.encoding.b,
        kind=asm.spec.kind.name,
    )


def run(pair: InputPair, spec: ProblemSpec, enc: Optional[BlockEncoding] = None) -> RunReport:
    asm = assemble(pair, spec, enc)
    out = simulate_lanes(asm.circuit, [0] * asm.circuit.qubit_count, 1)
    return _report(asm, bool(out[asm.layout.r] & 1))


def run_batch(
    pairs: Sequence[InputPair],
    specs: Sequence[ProblemSpec],
    enc: Optional[BlockEncoding] = None,
) -> list[bool]:
    """Circuit answers for many instances, simulated lane-parallel.

    Instances sharing (n, d) share one core circuit; each lane starts from its
    own loaded state.
    """
    if len(pairs) != len(specs):
        raise ValueError("pairs and specs differ in length")
    answers: list[Optional[bool]] = [None] * len(pairs)
    groups: dict[tuple[int, int], list[int]] = {}
    for k, (p, s) in enumerate(zip(pairs, specs)):
        s.check(p.n)
        groups.setdefault((p.n, s.d), []).append(k)
    for (n, d), idx in groups.items():
        encoding = enc or _shared_encoding([pairs[k] for k in idx])
        asm = assemble(pairs[idx[0]], specs[idx[0]], encoding)
        core = asm.core()
        rows = loaded_states(asm.layout, [pairs[k] for k in idx], [specs[k] for k in idx], encoding)
        out = simulate_lanes(core, columns_to_lanes(rows), (1 << len(idx)) - 1)
        rbits = out[asm.layout.r]
        for lane, k in enumerate(idx):
            answers[k] = bool((rbits >> lane) & 1)
    return answers  # type: ignore[return-value]


def _shared_encoding(pairs: Iterable[InputPair]) -> BlockEncoding:
    chars: set[str] = set()
    alphabet: set[str] = set()
    for p in pairs:
        chars |= set(p.x) | set(p.y)
        alphabet |= set(p.alphabet)
    if len(chars) <= 2 and not chars & SENTINELS:
        return BlockEncoding.binary(sorted(chars))
    return BlockEncoding.for_alphabet(alphabet)


def stage_states(asm: AssembledCircuit) -> dict[str, list[int]]:
    """Basis state after each stage, simulated from all zeros."""
    state = [0] * asm.circuit.qubit_count
    out = {}
    for st in asm.stages:
        seg = Circuit(asm.circuit.qubit_count).extend(asm.circuit.gates[st.start:st.stop])
        state = simulate_lanes(seg, state, 1)
        out[st.name] = [v & 1 for v in state]
    return out


# -- depth scan -------------------------------------------------------------

DPolicy = Union[str, Callable[[int], int]]


def _resolve_d(policy: DPolicy, n: int) -> int:
    if callable(policy):
        return policy(n)
    if policy == "half":
        return n // 2
    if policy == "full":
        return n
    if policy == "one":
        return 1
    raise ValueError(f"unknown d policy {policy!r}")


def scan_pair(n: int, b: int) -> tuple[InputPair, BlockEncoding]:
    """Deterministic instance used for depth measurements (shape only depends on n, d, b)."""
    if b == 1:
        s = ("01" * n)[:n]
        return InputPair(s, s, ("0", "1")), BlockEncoding.binary()
    sigma = (1 << b) - 2
    alphabet = [chr(ord("a") + k) for k in range(sigma)]
    s = "".join(alphabet[k % sigma] for k in range(n))
    return InputPair(s, s, tuple(alphabet)), BlockEncoding.for_alphabet(alphabet)


def depth_scan(
    n_values: Sequence[int], d_policy: DPolicy = "half", kind: Problem | str = Problem.SFSC, b: int = 1
) -> list[dict]:
    kind = Problem.parse(kind)
    rows = []
    for n in n_values:
        if not is_power_of_two(n) or n < 2:
            raise ValueError(f"n must be a power of two >= 2, got {n}")
        d = _resolve_d(d_policy, n)
        pair, enc = scan_pair(n, b)
        spec = ProblemSpec(kind, d, 0 if kind is Problem.FFM else None)
        asm = assemble(pair, spec, enc)
        rep = _report(asm, False)
        rows.append(
            {
                "n": n,
                "d": d,
                "b": b,
                "depth": rep.depth,
                "asap_depth": rep.asap_depth,
                "depth_cswap_as_3ccx": rep.depth_lowered,
                "size": rep.size,
                "qubits": rep.qubits,
            }
        )
    return rows


def log_power_bound_check(rows: Sequence[dict], power: int, slack: float = 1.5) -> tuple[bool, float, list[tuple[int, int, float]]]:
    """Fit K at the smallest n as depth/ceil(log2 n)^power * slack; check all rows.

    Returns (verdict, K, [(n, depth, limit), ...]).
    """
    if not rows:
        return True, 0.0, []
    rows = sorted(rows, key=lambda r: r["n"])
    lg = lambda n: (n - 1).bit_length()  # noqa: E731
    K = rows[0]["depth"] / lg(rows[0]["n"]) ** power * slack
    checks = [(r["n"], r["depth"], K * lg(r["n"]) ** power) for r in rows]
    return all(dep <= lim for _, dep, lim in checks), K, checks
